use std::collections::{BTreeMap, BTreeSet};

use netslice::metrics::{utilization_ratio_series, window_mean_ratio, window_mean_utilization};
use netslice::nsmf::{rearrange, run, tick, SimState};
use netslice::{
    stability_report, DemandClass, SimConfig, SliceRequest, Strategy, SymbolUniverse,
};
use proptest::prelude::*;
use proptest::strategy::Strategy as _;

fn config(nc: u32, n1: u32, na: u32, n2: u32, lambda: f64, mu: f64, ticks: u64) -> SimConfig {
    SimConfig {
        universe: SymbolUniverse::new(0, na, nc, n1, n2).unwrap(),
        p_c: 0.3,
        p_a: 0.3,
        lambda,
        mu,
        ticks,
        runs: 1,
        seed: 7,
        strategy: Strategy::Heuristic,
        window_start: 1,
        window_end: ticks,
    }
}

fn class() -> impl proptest::strategy::Strategy<Value = DemandClass> {
    prop_oneof![Just(DemandClass::Hard), Just(DemandClass::Soft)]
}

fn request() -> impl proptest::strategy::Strategy<Value = SliceRequest> {
    (any::<u64>(), class(), class(), 1u32..50, 1u32..5).prop_map(|(service, c, a, t_s, t_w)| {
        SliceRequest {
            service,
            core_class: c,
            access_class: a,
            t_s,
            t_w,
            issued_at: 0,
        }
    })
}

proptest! {
    #[test]
    fn rearrange_is_a_permutation(queue in prop::collection::vec(request(), 0..60)) {
        for strategy in [Strategy::Fcfs, Strategy::Heuristic] {
            let out = rearrange(strategy, queue.clone());
            let mut a: Vec<u64> = out.iter().map(|r| r.service).collect();
            let mut b: Vec<u64> = queue.iter().map(|r| r.service).collect();
            if strategy == Strategy::Fcfs {
                prop_assert_eq!(&a, &b);
            }
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn heuristic_order_is_sorted(queue in prop::collection::vec(request(), 0..60)) {
        let out = rearrange(Strategy::Heuristic, queue);
        for pair in out.windows(2) {
            let key = |r: &SliceRequest| (r.core_class, r.access_class, r.t_s);
            prop_assert!(key(&pair[0]) <= key(&pair[1]));
        }
    }
}

#[test]
fn wait_counter_is_one_plus_rejections() {
    // Heavy load on a small universe so requests wait many ticks.
    let cfg = config(6, 3, 6, 3, 3.0, 4.0, 300);
    for strategy in [Strategy::Fcfs, Strategy::Heuristic] {
        let cfg = SimConfig { strategy, ..cfg.clone() };
        let mut state = SimState::new(&cfg, 11).unwrap();
        let mut rejections: BTreeMap<u64, u32> = BTreeMap::new();
        let mut checked = 0;
        for _ in 0..cfg.ticks {
            let before: BTreeSet<u64> = state.active.iter().map(|s| s.request.service).collect();
            tick(&mut state, &cfg);
            for r in &state.waiting {
                *rejections.entry(r.service).or_default() += 1;
                assert_eq!(r.t_w, 1 + rejections[&r.service]);
            }
            for s in state.active.iter().filter(|s| !before.contains(&s.request.service)) {
                let n = rejections.get(&s.request.service).copied().unwrap_or(0);
                assert_eq!(s.request.t_w, 1 + n);
                checked += 1;
            }
            state.audit(&cfg).unwrap();
        }
        assert!(checked > 50, "{checked}");
        assert!(rejections.values().any(|&n| n > 3));
    }
}

#[test]
fn heavy_load_loses_nothing() {
    let cfg = config(10, 4, 12, 5, 8.0, 6.0, 2_000);
    for strategy in [Strategy::Fcfs, Strategy::Heuristic] {
        let cfg = SimConfig { strategy, ..cfg.clone() };
        let mut state = SimState::new(&cfg, 3).unwrap();
        let mut arrivals = 0;
        for _ in 0..cfg.ticks {
            let r = tick(&mut state, &cfg);
            arrivals += r.arrivals;
            assert_eq!(r.free_core_hard + r.free_core_soft + r.u, 10);
            assert_eq!(r.free_access_hard + r.free_access_soft + r.u, 12);
            assert!(r.u <= 10);
            assert_eq!(r.queue_len, r.rejected);
            state.audit(&cfg).unwrap();
        }
        assert_eq!(arrivals, state.generated);
        assert_eq!(
            state.generated,
            state.completed + state.active.len() as u64 + state.waiting.len() as u64
        );
        // Overloaded: the backlog should have grown far past capacity.
        assert!(state.waiting.len() > 1_000);
    }
}

#[test]
fn utilization_matches_independent_fold() {
    let cfg = config(20, 5, 30, 10, 2.0, 5.0, 1_500);
    let trace = run(&cfg, 5).unwrap();
    let (t1, t2) = (200u64, 1_300u64);
    let mut sum = 0.0;
    for r in &trace.records {
        if r.t >= t1 && r.t < t2 {
            sum += r.u as f64;
        }
    }
    let v = window_mean_utilization(&trace, t1, t2).unwrap();
    assert!((v - sum / (t2 - t1) as f64).abs() < 1e-12);

    let series = utilization_ratio_series(&trace).unwrap();
    let slice = &series[(t1 - 1) as usize..(t2 - 1) as usize];
    let w = window_mean_ratio(&trace, t1, t2).unwrap();
    assert!((w - slice.iter().sum::<f64>() / slice.len() as f64).abs() < 1e-12);
    for (r, x) in trace.records.iter().zip(&series) {
        assert!((r.w - x).abs() < 1e-12);
    }
}

#[test]
fn runs_are_reproducible() {
    let cfg = config(20, 5, 30, 10, 3.0, 5.0, 500);
    let a = run(&cfg, 9).unwrap();
    let b = run(&cfg, 9).unwrap();
    let c = run(&cfg, 10).unwrap();
    assert_eq!(a.records, b.records);
    assert_ne!(a.records, c.records);
}

#[test]
fn stability_margins_are_monotone() {
    let base = config(350, 50, 500, 100, 10.0, 34.0, 10);
    let mut prev = stability_report(&base).margins;
    for step in 1..=20 {
        let cfg = SimConfig {
            p_c: base.p_c + 0.01 * f64::from(step),
            p_a: base.p_a + 0.01 * f64::from(step),
            lambda: base.lambda + 0.5 * f64::from(step),
            ..base.clone()
        };
        let r = stability_report(&cfg);
        for k in 0..3 {
            assert!(r.margins[k] < prev[k]);
        }
        assert_eq!(r.compliant, r.cond_pc && r.cond_pa && r.cond_load);
        prev = r.margins;
    }
    // Strict inequalities: landing exactly on a boundary is not compliant.
    let edge = SimConfig {
        p_c: 50.0 / 350.0,
        ..base
    };
    assert!(!stability_report(&edge).cond_pc);
}
