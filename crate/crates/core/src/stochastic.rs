//! Random workload: Poisson request counts, exponential slice lifetimes and
//! hard/soft demand classes.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};
use thiserror::Error;

use crate::design::SymbolUniverse;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("{name} must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must lie in [0, 1], got {value}")]
    Probability { name: &'static str, value: f64 },
    #[error("{0}")]
    Invalid(String),
}

/// Deterministic pseudo-random stream (ChaCha8 seeded from a `u64`).
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    fn unit(&mut self) -> f64 {
        self.0.random::<f64>()
    }
}

/// Request ordering policy applied before dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Requests are tried in arrival order.
    Fcfs,
    /// Hard/hard first, then hard/soft, soft/hard, soft/soft; shortest lifetime first within each.
    Heuristic,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Fcfs => "fcfs",
            Strategy::Heuristic => "heuristic",
        })
    }
}

impl FromStr for Strategy {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fcfs" => Ok(Strategy::Fcfs),
            "heuristic" => Ok(Strategy::Heuristic),
            other => Err(ParamError::Invalid(format!(
                "unknown strategy {other:?} (expected fcfs or heuristic)"
            ))),
        }
    }
}

/// Everything needed to reproduce a batch of simulation runs.
///
/// The universe's service count is not used by the simulator: services are
/// numbered by a per-run counter instead.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub universe: SymbolUniverse,
    pub p_c: f64,
    pub p_a: f64,
    pub lambda: f64,
    pub mu: f64,
    pub ticks: u64,
    pub runs: u32,
    pub seed: u64,
    pub strategy: Strategy,
    pub window_start: u64,
    pub window_end: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, value) in [("p_c", self.p_c), ("p_a", self.p_a)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ParamError::Probability { name, value });
            }
        }
        for (name, value) in [("lambda", self.lambda), ("mu", self.mu)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamError::NotPositive { name, value });
            }
        }
        if self.ticks == 0 {
            return Err(ParamError::Invalid("ticks must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(ParamError::Invalid("runs must be at least 1".into()));
        }
        if !(1 <= self.window_start
            && self.window_start < self.window_end
            && self.window_end <= self.ticks)
        {
            return Err(ParamError::Invalid(format!(
                "window [{}, {}) must satisfy 1 <= start < end <= ticks={}",
                self.window_start, self.window_end, self.ticks
            )));
        }
        Ok(())
    }

    /// Seed of repetition `i`.
    pub fn run_seed(&self, i: u32) -> u64 {
        self.seed.wrapping_add(u64::from(i))
    }
}

/// Whether a request asks for a dedicated (hard) or shared (soft) component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DemandClass {
    Hard,
    Soft,
}

/// A slice request in extended (C,A,S) form. Concrete component ids are
/// bound only when the request is dispatched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceRequest {
    pub service: u64,
    pub core_class: DemandClass,
    pub access_class: DemandClass,
    /// Remaining lifetime in ticks.
    pub t_s: u32,
    /// Ticks waited so far; 1 for a fresh request.
    pub t_w: u32,
    pub issued_at: u64,
}

pub fn sample_poisson(lambda: f64, rng: &mut RngStream) -> Result<u64, ParamError> {
    let dist = Poisson::new(lambda).map_err(|_| ParamError::NotPositive {
        name: "lambda",
        value: lambda,
    })?;
    Ok(dist.sample(&mut rng.0) as u64)
}

/// Exponential lifetime with mean `mu`, rounded up to whole ticks (at least 1).
pub fn sample_lifetime(mu: f64, rng: &mut RngStream) -> Result<u32, ParamError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(ParamError::NotPositive {
            name: "mu",
            value: mu,
        });
    }
    let dist = Exp::new(1.0 / mu).map_err(|_| ParamError::NotPositive {
        name: "mu",
        value: mu,
    })?;
    let x: f64 = dist.sample(&mut rng.0);
    Ok(x.ceil().clamp(1.0, u32::MAX as f64) as u32)
}

pub fn sample_class(p: f64, rng: &mut RngStream) -> DemandClass {
    if rng.unit() < p {
        DemandClass::Hard
    } else {
        DemandClass::Soft
    }
}

/// Draws `n` fresh requests issued at `tick`, numbering services from `next_id` upward.
pub fn generate_requests(
    n: u64,
    cfg: &SimConfig,
    tick: u64,
    next_id: &mut u64,
    rng: &mut RngStream,
) -> Result<Vec<SliceRequest>, ParamError> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let core_class = sample_class(cfg.p_c, rng);
        let access_class = sample_class(cfg.p_a, rng);
        let t_s = sample_lifetime(cfg.mu, rng)?;
        out.push(SliceRequest {
            service: *next_id,
            core_class,
            access_class,
            t_s,
            t_w: 1,
            issued_at: tick,
        });
        *next_id += 1;
    }
    Ok(out)
}
