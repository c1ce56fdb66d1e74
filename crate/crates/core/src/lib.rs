//! Network slicing as expanded combinatorial designs.
//!
//! * [`design`]: triple sets, conjugate rectangular views, hard-slicing
//!   predicates and the hard/soft partition of the (C,A,S) array.
//! * [`stochastic`]: seeded workload generation.
//! * [`nsmf`]: the tick-driven admission simulator and its strategies.
//! * [`metrics`]: utilization windows, stability conditions, trend checks.

pub mod design;
pub mod metrics;
pub mod nsmf;
pub mod stochastic;

pub use design::{
    check_hard_access, check_hard_core, conjugate_view, is_partial_latin, parse_triples,
    partition_cas, verify_partition_claims, Conjugate, DesignError, Partition, RectView,
    SliceTriple, SymbolUniverse, TripleSet, Verdict, Violation,
};
pub use metrics::{
    stability_report, trend_slope, window_mean_ratio, window_mean_utilization, window_stats,
    StabilityReport, TraceSeries, WindowStats,
};
pub use nsmf::{run, run_all, run_averaged, MeanRecord, MeanTrace, SimError, Trace, TraceRecord};
pub use stochastic::{DemandClass, ParamError, RngStream, SimConfig, SliceRequest, Strategy};
