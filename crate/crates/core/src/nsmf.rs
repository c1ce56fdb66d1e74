//! Tick-driven NSMF simulation: arrivals, request rearrangement, dispatch
//! against hard/soft component pools, re-queuing of rejected requests and
//! lifetime accounting.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::design::SymbolUniverse;
use crate::stochastic::{
    generate_requests, sample_poisson, DemandClass, ParamError, RngStream, SimConfig,
    SliceRequest, Strategy,
};

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("tick {tick}: invariant violated: {what}")]
    Invariant { tick: u64, what: String },
}

/// Free component ids, split by component kind and hard/soft class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourcePools {
    universe: SymbolUniverse,
    core_hard: BTreeSet<u32>,
    core_soft: BTreeSet<u32>,
    access_hard: BTreeSet<u32>,
    access_soft: BTreeSet<u32>,
}

impl ResourcePools {
    /// All components free.
    pub fn full(universe: SymbolUniverse) -> Self {
        let (n_1, n_c) = (universe.hard_core(), universe.core());
        let (n_2, n_a) = (universe.hard_access(), universe.access());
        Self {
            universe,
            core_hard: (1..=n_1).collect(),
            core_soft: (n_1 + 1..=n_c).collect(),
            access_hard: (1..=n_2).collect(),
            access_soft: (n_2 + 1..=n_a).collect(),
        }
    }

    /// Pools with only the listed ids free. Ids are routed to their class by index.
    pub fn with_free(
        universe: SymbolUniverse,
        core: impl IntoIterator<Item = u32>,
        access: impl IntoIterator<Item = u32>,
    ) -> Self {
        let mut pools = Self {
            universe,
            core_hard: BTreeSet::new(),
            core_soft: BTreeSet::new(),
            access_hard: BTreeSet::new(),
            access_soft: BTreeSet::new(),
        };
        for c in core {
            pools.release_core(c);
        }
        for a in access {
            pools.release_access(a);
        }
        pools
    }

    pub fn free_core_hard(&self) -> usize {
        self.core_hard.len()
    }
    pub fn free_core_soft(&self) -> usize {
        self.core_soft.len()
    }
    pub fn free_access_hard(&self) -> usize {
        self.access_hard.len()
    }
    pub fn free_access_soft(&self) -> usize {
        self.access_soft.len()
    }

    pub fn is_core_free(&self, c: u32) -> bool {
        self.core_hard.contains(&c) || self.core_soft.contains(&c)
    }
    pub fn is_access_free(&self, a: u32) -> bool {
        self.access_hard.contains(&a) || self.access_soft.contains(&a)
    }

    fn core_pool(&mut self, class: DemandClass) -> &mut BTreeSet<u32> {
        match class {
            DemandClass::Hard => &mut self.core_hard,
            DemandClass::Soft => &mut self.core_soft,
        }
    }

    fn access_pool(&mut self, class: DemandClass) -> &mut BTreeSet<u32> {
        match class {
            DemandClass::Hard => &mut self.access_hard,
            DemandClass::Soft => &mut self.access_soft,
        }
    }

    fn release_core(&mut self, c: u32) {
        let class = if self.universe.is_hard_core(c) {
            DemandClass::Hard
        } else {
            DemandClass::Soft
        };
        self.core_pool(class).insert(c);
    }

    fn release_access(&mut self, a: u32) {
        let class = if self.universe.is_hard_access(a) {
            DemandClass::Hard
        } else {
            DemandClass::Soft
        };
        self.access_pool(class).insert(a);
    }
}

/// An admitted request together with the components bound to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSlice {
    pub request: SliceRequest,
    pub core_id: u32,
    pub access_id: u32,
    pub activated_at: u64,
}

/// Orders the working queue before dispatch. The heuristic is a stable sort,
/// so ties keep their queue order.
pub fn rearrange(strategy: Strategy, mut queue: Vec<SliceRequest>) -> Vec<SliceRequest> {
    if strategy == Strategy::Heuristic {
        // DemandClass orders Hard before Soft, so the class pair sorts
        // (hard,hard), (hard,soft), (soft,hard), (soft,soft).
        queue.sort_by_key(|r| (r.core_class, r.access_class, r.t_s));
    }
    queue
}

/// Binds the lowest free core and access ids of the request's classes, or
/// leaves the pools untouched when either pool is empty.
pub fn dispatch(req: &SliceRequest, pools: &mut ResourcePools) -> Option<(u32, u32)> {
    let core = pools.core_pool(req.core_class).first().copied()?;
    let access = pools.access_pool(req.access_class).first().copied()?;
    pools.core_pool(req.core_class).remove(&core);
    pools.access_pool(req.access_class).remove(&access);
    Some((core, access))
}

/// One row of a simulation trace, snapshotted at the end of tick `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub t: u64,
    pub arrivals: u64,
    pub activated: u64,
    pub rejected: u64,
    /// Active slices at end of tick.
    pub u: u64,
    pub queue_len: u64,
    /// Mean waiting time of the slices activated this tick (carried forward when none were).
    pub delta: f64,
    pub w: f64,
    pub free_core_hard: u64,
    pub free_core_soft: u64,
    pub free_access_hard: u64,
    pub free_access_soft: u64,
}

/// Mutable state of one simulation run.
#[derive(Debug, Clone)]
pub struct SimState {
    pub clock: u64,
    pub pools: ResourcePools,
    pub waiting: Vec<SliceRequest>,
    pub active: Vec<ActiveSlice>,
    pub rng: RngStream,
    pub next_service_id: u64,
    pub generated: u64,
    pub completed: u64,
    last_delta: f64,
}

impl SimState {
    pub fn new(cfg: &SimConfig, seed: u64) -> Result<Self, SimError> {
        for (name, value) in [("lambda", cfg.lambda), ("mu", cfg.mu)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamError::NotPositive { name, value }.into());
            }
        }
        Ok(Self {
            clock: 0,
            pools: ResourcePools::full(cfg.universe),
            waiting: Vec::new(),
            active: Vec::new(),
            rng: RngStream::from_seed(seed),
            next_service_id: 1,
            generated: 0,
            completed: 0,
            last_delta: 1.0,
        })
    }

    /// Checks pool conservation, class discipline, request accounting and
    /// the per-tick utilization bound.
    pub fn audit(&self, cfg: &SimConfig) -> Result<(), SimError> {
        let fail = |what: String| {
            Err(SimError::Invariant {
                tick: self.clock,
                what,
            })
        };
        let u = &cfg.universe;
        // Occupancy marks per component id: each must be claimed exactly once,
        // either by a free pool or by one active slice.
        let mut core_marks = vec![0u32; u.core() as usize + 1];
        let mut access_marks = vec![0u32; u.access() as usize + 1];
        for c in self.pools.core_hard.iter().chain(&self.pools.core_soft) {
            core_marks[*c as usize] += 1;
        }
        for a in self.pools.access_hard.iter().chain(&self.pools.access_soft) {
            access_marks[*a as usize] += 1;
        }
        for s in &self.active {
            if s.request.t_s == 0 {
                return fail(format!("service {} active with t_s = 0", s.request.service));
            }
            let core_hard = u.is_hard_core(s.core_id);
            if core_hard != (s.request.core_class == DemandClass::Hard) {
                return fail(format!("core c{} bound against its class", s.core_id));
            }
            let access_hard = u.is_hard_access(s.access_id);
            if access_hard != (s.request.access_class == DemandClass::Hard) {
                return fail(format!("access a{} bound against its class", s.access_id));
            }
            core_marks[s.core_id as usize] += 1;
            access_marks[s.access_id as usize] += 1;
        }
        let free_core = self.pools.free_core_hard() + self.pools.free_core_soft();
        let free_access = self.pools.free_access_hard() + self.pools.free_access_soft();
        let bound = self.active.len();
        if free_core + bound != u.core() as usize || core_marks[1..].iter().any(|&m| m != 1) {
            return fail(format!(
                "core conservation: {free_core} free + {bound} bound != {}",
                u.core()
            ));
        }
        if free_access + bound != u.access() as usize || access_marks[1..].iter().any(|&m| m != 1)
        {
            return fail(format!(
                "access conservation: {free_access} free + {bound} bound != {}",
                u.access()
            ));
        }
        let accounted = self.completed + self.active.len() as u64 + self.waiting.len() as u64;
        if accounted != self.generated {
            return fail(format!(
                "{} generated but {accounted} accounted for",
                self.generated
            ));
        }
        if self.active.len() > u.core().min(u.access()) as usize {
            return fail(format!("{} active slices exceed capacity", self.active.len()));
        }
        Ok(())
    }

    fn snapshot(&self, arrivals: u64, activated: u64, rejected: u64) -> TraceRecord {
        let u = self.active.len() as u64;
        TraceRecord {
            t: self.clock,
            arrivals,
            activated,
            rejected,
            u,
            queue_len: self.waiting.len() as u64,
            delta: self.last_delta,
            w: u as f64 / self.last_delta,
            free_core_hard: self.pools.free_core_hard() as u64,
            free_core_soft: self.pools.free_core_soft() as u64,
            free_access_hard: self.pools.free_access_hard() as u64,
            free_access_soft: self.pools.free_access_soft() as u64,
        }
    }
}

/// Advances the state by one tick and returns its trace record.
pub fn tick(state: &mut SimState, cfg: &SimConfig) -> TraceRecord {
    state.clock += 1;
    let t = state.clock;
    let n = sample_poisson(cfg.lambda, &mut state.rng).expect("lambda checked by SimState::new");
    let fresh = generate_requests(n, cfg, t, &mut state.next_service_id, &mut state.rng)
        .expect("mu checked by SimState::new");
    state.generated += n;

    let mut queue = std::mem::take(&mut state.waiting);
    queue.extend(fresh);
    let queue = rearrange(cfg.strategy, queue);

    let mut activated = 0u64;
    let mut waited = 0u64;
    for mut req in queue {
        match dispatch(&req, &mut state.pools) {
            Some((core_id, access_id)) => {
                activated += 1;
                waited += u64::from(req.t_w);
                state.active.push(ActiveSlice {
                    request: req,
                    core_id,
                    access_id,
                    activated_at: t,
                });
            }
            None => {
                req.t_w += 1;
                state.waiting.push(req);
            }
        }
    }
    let rejected = state.waiting.len() as u64;

    let SimState {
        active,
        pools,
        completed,
        ..
    } = state;
    active.retain_mut(|s| {
        s.request.t_s -= 1;
        if s.request.t_s > 0 {
            true
        } else {
            pools.release_core(s.core_id);
            pools.release_access(s.access_id);
            *completed += 1;
            false
        }
    });

    if activated > 0 {
        state.last_delta = waited as f64 / activated as f64;
    }
    state.snapshot(n, activated, rejected)
}

/// A single seeded run.
#[derive(Debug, Clone)]
pub struct Trace {
    pub seed: u64,
    pub config: SimConfig,
    pub records: Vec<TraceRecord>,
    pub elapsed: Duration,
}

/// Runs `cfg.ticks` ticks from an empty system, auditing the state after every tick.
pub fn run(cfg: &SimConfig, seed: u64) -> Result<Trace, SimError> {
    let started = Instant::now();
    let mut state = SimState::new(cfg, seed)?;
    let mut records = Vec::with_capacity(cfg.ticks as usize);
    for _ in 0..cfg.ticks {
        records.push(tick(&mut state, cfg));
        state.audit(cfg)?;
    }
    Ok(Trace {
        seed,
        config: cfg.clone(),
        records,
        elapsed: started.elapsed(),
    })
}

/// Runs all `cfg.runs` repetitions (seeds `seed + i`) in parallel, returned in seed order.
pub fn run_all(cfg: &SimConfig) -> Result<Vec<Trace>, SimError> {
    (0..cfg.runs)
        .into_par_iter()
        .map(|i| run(cfg, cfg.run_seed(i)))
        .collect()
}

/// Per-tick arithmetic mean of trace records across runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanRecord {
    pub t: u64,
    pub arrivals: f64,
    pub activated: f64,
    pub rejected: f64,
    pub u: f64,
    pub queue_len: f64,
    pub delta: f64,
    pub w: f64,
    pub free_core_hard: f64,
    pub free_core_soft: f64,
    pub free_access_hard: f64,
    pub free_access_soft: f64,
}

impl MeanRecord {
    fn zero(t: u64) -> Self {
        Self {
            t,
            arrivals: 0.0,
            activated: 0.0,
            rejected: 0.0,
            u: 0.0,
            queue_len: 0.0,
            delta: 0.0,
            w: 0.0,
            free_core_hard: 0.0,
            free_core_soft: 0.0,
            free_access_hard: 0.0,
            free_access_soft: 0.0,
        }
    }

    fn fields_mut(&mut self) -> [&mut f64; 11] {
        [
            &mut self.arrivals,
            &mut self.activated,
            &mut self.rejected,
            &mut self.u,
            &mut self.queue_len,
            &mut self.delta,
            &mut self.w,
            &mut self.free_core_hard,
            &mut self.free_core_soft,
            &mut self.free_access_hard,
            &mut self.free_access_soft,
        ]
    }
}

impl From<&TraceRecord> for MeanRecord {
    fn from(r: &TraceRecord) -> Self {
        Self {
            t: r.t,
            arrivals: r.arrivals as f64,
            activated: r.activated as f64,
            rejected: r.rejected as f64,
            u: r.u as f64,
            queue_len: r.queue_len as f64,
            delta: r.delta,
            w: r.w,
            free_core_hard: r.free_core_hard as f64,
            free_core_soft: r.free_core_soft as f64,
            free_access_hard: r.free_access_hard as f64,
            free_access_soft: r.free_access_soft as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanTrace {
    pub config: SimConfig,
    pub seeds: Vec<u64>,
    pub records: Vec<MeanRecord>,
}

impl MeanTrace {
    /// Averages equally long traces tick by tick.
    ///
    /// # Panics
    /// If `traces` is empty or the traces differ in length.
    pub fn from_traces(traces: &[Trace]) -> Self {
        let first = traces.first().expect("at least one trace");
        let len = first.records.len();
        assert!(
            traces.iter().all(|t| t.records.len() == len),
            "traces differ in length"
        );
        let k = traces.len() as f64;
        let records = (0..len)
            .map(|i| {
                let mut acc = MeanRecord::zero(first.records[i].t);
                for tr in traces {
                    let mut row = MeanRecord::from(&tr.records[i]);
                    for (sum, x) in acc.fields_mut().into_iter().zip(row.fields_mut()) {
                        *sum += *x;
                    }
                }
                for f in acc.fields_mut() {
                    *f /= k;
                }
                acc
            })
            .collect();
        MeanTrace {
            config: first.config.clone(),
            seeds: traces.iter().map(|t| t.seed).collect(),
            records,
        }
    }
}

pub fn run_averaged(cfg: &SimConfig) -> Result<MeanTrace, SimError> {
    Ok(MeanTrace::from_traces(&run_all(cfg)?))
}
