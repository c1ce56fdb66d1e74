//! Windowed utilization and utilization-ratio statistics, necessary
//! stability conditions and queue-growth detection.
//!
//! Windows are half-open tick ranges `[t1, t2)` over 1-based ticks and are
//! normalized by `t2 - t1`.

use thiserror::Error;

use crate::nsmf::{MeanTrace, Trace};
use crate::stochastic::SimConfig;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("window [{t1}, {t2}) invalid for a trace of {len} ticks")]
    Window { t1: u64, t2: u64, len: usize },
    #[error("series needs at least 2 points, got {0}")]
    TooShort(usize),
    #[error("tick {t}: delay {delta} below 1")]
    Delay { t: u64, delta: f64 },
}

/// Read access to the per-tick columns the metrics use. Index `i` is the
/// record of tick `i + 1`.
pub trait TraceSeries {
    fn ticks(&self) -> usize;
    fn u(&self, i: usize) -> f64;
    fn delta(&self, i: usize) -> f64;
    /// Utilization ratio of tick `i`. For an averaged trace this is the
    /// mean of the per-run ratios, not the ratio of the means.
    fn w(&self, i: usize) -> f64;
    fn queue_len(&self, i: usize) -> f64;
}

impl TraceSeries for Trace {
    fn ticks(&self) -> usize {
        self.records.len()
    }
    fn u(&self, i: usize) -> f64 {
        self.records[i].u as f64
    }
    fn delta(&self, i: usize) -> f64 {
        self.records[i].delta
    }
    fn w(&self, i: usize) -> f64 {
        self.records[i].w
    }
    fn queue_len(&self, i: usize) -> f64 {
        self.records[i].queue_len as f64
    }
}

impl TraceSeries for MeanTrace {
    fn ticks(&self) -> usize {
        self.records.len()
    }
    fn u(&self, i: usize) -> f64 {
        self.records[i].u
    }
    fn delta(&self, i: usize) -> f64 {
        self.records[i].delta
    }
    fn w(&self, i: usize) -> f64 {
        self.records[i].w
    }
    fn queue_len(&self, i: usize) -> f64 {
        self.records[i].queue_len
    }
}

fn window<T: TraceSeries + ?Sized>(
    trace: &T,
    t1: u64,
    t2: u64,
) -> Result<std::ops::Range<usize>, MetricsError> {
    let len = trace.ticks();
    if t1 < 1 || t1 >= t2 || t2 as usize > len {
        return Err(MetricsError::Window { t1, t2, len });
    }
    Ok(t1 as usize - 1..t2 as usize - 1)
}

fn mean(xs: impl Iterator<Item = f64>, n: usize) -> f64 {
    xs.sum::<f64>() / n as f64
}

/// Mean number of active slices over `[t1, t2)`.
pub fn window_mean_utilization<T: TraceSeries + ?Sized>(
    trace: &T,
    t1: u64,
    t2: u64,
) -> Result<f64, MetricsError> {
    let w = window(trace, t1, t2)?;
    let n = w.len();
    Ok(mean(w.map(|i| trace.u(i)), n))
}

/// Utilization ratio `u / delta` for every tick, after checking that every
/// delay is at least 1.
pub fn utilization_ratio_series<T: TraceSeries + ?Sized>(
    trace: &T,
) -> Result<Vec<f64>, MetricsError> {
    (0..trace.ticks())
        .map(|i| {
            let delta = trace.delta(i);
            // NaN fails this check too.
            if !(delta >= 1.0) {
                return Err(MetricsError::Delay {
                    t: i as u64 + 1,
                    delta,
                });
            }
            Ok(trace.w(i))
        })
        .collect()
}

/// Mean of the utilization ratio over `[t1, t2)`.
pub fn window_mean_ratio<T: TraceSeries + ?Sized>(
    trace: &T,
    t1: u64,
    t2: u64,
) -> Result<f64, MetricsError> {
    let w = window(trace, t1, t2)?;
    let series = utilization_ratio_series(trace)?;
    let n = w.len();
    Ok(mean(series[w].iter().copied(), n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    pub t1: u64,
    pub t2: u64,
    pub v: f64,
    pub w: f64,
    pub mean_delta: f64,
    pub mean_queue: f64,
}

pub fn window_stats<T: TraceSeries + ?Sized>(
    trace: &T,
    t1: u64,
    t2: u64,
) -> Result<WindowStats, MetricsError> {
    let w = window(trace, t1, t2)?;
    let n = w.len();
    Ok(WindowStats {
        t1,
        t2,
        v: window_mean_utilization(trace, t1, t2)?,
        w: window_mean_ratio(trace, t1, t2)?,
        mean_delta: mean(w.clone().map(|i| trace.delta(i)), n),
        mean_queue: mean(w.map(|i| trace.queue_len(i)), n),
    })
}

/// Necessary conditions for the queue to settle, with their slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// `p_c < n_1 / n_c`
    pub cond_pc: bool,
    /// `p_a < n_2 / n_a`
    pub cond_pa: bool,
    /// `mu * lambda < min(n_c, n_a)`
    pub cond_load: bool,
    pub compliant: bool,
    /// `(n_1/n_c - p_c, n_2/n_a - p_a, min(n_c, n_a) - mu*lambda)`
    pub margins: [f64; 3],
}

pub fn stability_report(cfg: &SimConfig) -> StabilityReport {
    let u = &cfg.universe;
    let hard_core_share = f64::from(u.hard_core()) / f64::from(u.core());
    let hard_access_share = f64::from(u.hard_access()) / f64::from(u.access());
    let capacity = f64::from(u.core().min(u.access()));
    let load = cfg.mu * cfg.lambda;
    let cond_pc = cfg.p_c < hard_core_share;
    let cond_pa = cfg.p_a < hard_access_share;
    let cond_load = load < capacity;
    StabilityReport {
        cond_pc,
        cond_pa,
        cond_load,
        compliant: cond_pc && cond_pa && cond_load,
        margins: [
            hard_core_share - cfg.p_c,
            hard_access_share - cfg.p_a,
            capacity - load,
        ],
    }
}

/// Ordinary least-squares slope of `series[i]` against `i`.
pub fn trend_slope(series: &[f64]) -> Result<f64, MetricsError> {
    let n = series.len();
    if n < 2 {
        return Err(MetricsError::TooShort(n));
    }
    let x_mean = (n - 1) as f64 / 2.0;
    let y_mean = series.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in series.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (y - y_mean);
        sxx += dx * dx;
    }
    Ok(sxy / sxx)
}

/// Queue-length column over `[t1, t2)`.
pub fn queue_series<T: TraceSeries + ?Sized>(
    trace: &T,
    t1: u64,
    t2: u64,
) -> Result<Vec<f64>, MetricsError> {
    Ok(window(trace, t1, t2)?.map(|i| trace.queue_len(i)).collect())
}

/// Queue growth verdict between an early and a late window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthReport {
    pub slope: f64,
    pub initial_mean: f64,
    pub final_mean: f64,
    pub unstable: bool,
}

/// Flags instability when the queue trend over `[initial.0, final.1)` is
/// positive and the late window's mean queue is at least five times the early one.
pub fn detect_queue_growth<T: TraceSeries + ?Sized>(
    trace: &T,
    initial: (u64, u64),
    late: (u64, u64),
) -> Result<GrowthReport, MetricsError> {
    let slope = trend_slope(&queue_series(trace, initial.0, late.1)?)?;
    let early = queue_series(trace, initial.0, initial.1)?;
    let tail = queue_series(trace, late.0, late.1)?;
    let initial_mean = early.iter().sum::<f64>() / early.len() as f64;
    let final_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    Ok(GrowthReport {
        slope,
        initial_mean,
        final_mean,
        unstable: slope > 0.0 && final_mean >= 5.0 * initial_mean,
    })
}
