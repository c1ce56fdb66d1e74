//! Subcommand bodies. Each returns the process exit status and writes its
//! report to `out`; diagnostics go to standard error.

use std::io::Write;
use std::path::Path;

use netslice::design::{
    check_hard_access, check_hard_core, conjugate_view, is_partial_latin, parse_triples,
    partition_cas, verify_partition_claims, Conjugate, SymbolUniverse, Verdict,
};
use netslice::metrics::{stability_report, window_mean_ratio, window_stats};
use netslice::nsmf::{run_all, MeanTrace, SimError};
use netslice::{SimConfig, Strategy};

use crate::config::load_config;
use crate::trace_csv::{fmt6, write_trace_file};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    /// Unreadable or invalid input, or an I/O failure.
    Input = 1,
    /// A requested design check does not hold.
    Violations = 2,
    /// `--strict` stability check found a violated condition.
    Unstable = 3,
    /// The simulator broke one of its own invariants.
    Invariant = 4,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

fn fail(code: Exit, msg: impl std::fmt::Display) -> Exit {
    eprintln!("error: {msg}");
    code
}

fn sim_exit(e: SimError) -> Exit {
    match e {
        SimError::Invariant { .. } => fail(Exit::Invariant, e),
        SimError::Param(_) => fail(Exit::Input, e),
    }
}

fn simulate(cfg: &SimConfig, out: &mut dyn Write) -> Result<MeanTrace, Exit> {
    let traces = run_all(cfg).map_err(sim_exit)?;
    for t in &traces {
        let _ = writeln!(
            out,
            "run seed={} strategy={} ticks={} wall={:.3}s",
            t.seed,
            cfg.strategy,
            t.records.len(),
            t.elapsed.as_secs_f64()
        );
    }
    Ok(MeanTrace::from_traces(&traces))
}

fn load(config_path: &Path) -> Result<SimConfig, Exit> {
    load_config(config_path).map_err(|e| fail(Exit::Input, e))
}

/// Averaged run: writes the mean trace CSV and prints the window statistics.
pub fn cmd_run(
    config_path: &Path,
    out_path: &Path,
    seed_override: Option<u64>,
    out: &mut dyn Write,
) -> Exit {
    let mut cfg = match load(config_path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    let trace = match simulate(&cfg, out) {
        Ok(t) => t,
        Err(code) => return code,
    };
    if let Err(e) = write_trace_file(out_path, &trace) {
        return fail(Exit::Input, format!("writing {}: {e}", out_path.display()));
    }
    let stats = match window_stats(&trace, cfg.window_start, cfg.window_end) {
        Ok(s) => s,
        Err(e) => return fail(Exit::Invariant, e),
    };
    let _ = writeln!(
        out,
        "window [{}, {}): V={} W={} mean_delta={} mean_queue={}",
        stats.t1,
        stats.t2,
        fmt6(stats.v),
        fmt6(stats.w),
        fmt6(stats.mean_delta),
        fmt6(stats.mean_queue)
    );
    let _ = writeln!(out, "wrote {} rows to {}", trace.records.len(), out_path.display());
    Exit::Ok
}

/// Result of running one configuration under both strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub fcfs: f64,
    pub heuristic: f64,
    /// `heuristic / fcfs`, absent when undefined.
    pub ratio: Option<f64>,
}

pub fn compare(
    cfg: &SimConfig,
    out: &mut dyn Write,
) -> Result<(Comparison, MeanTrace, MeanTrace), Exit> {
    let mut traces = Vec::new();
    for strategy in [Strategy::Fcfs, Strategy::Heuristic] {
        let c = SimConfig {
            strategy,
            ..cfg.clone()
        };
        traces.push(simulate(&c, out)?);
    }
    let heuristic = traces.pop().expect("two traces");
    let fcfs = traces.pop().expect("two traces");
    let w = |t: &MeanTrace| {
        window_mean_ratio(t, cfg.window_start, cfg.window_end)
            .map_err(|e| fail(Exit::Invariant, e))
    };
    let (wf, wh) = (w(&fcfs)?, w(&heuristic)?);
    let ratio = (wf > 0.0).then(|| wh / wf).filter(|r| r.is_finite());
    Ok((
        Comparison {
            fcfs: wf,
            heuristic: wh,
            ratio,
        },
        fcfs,
        heuristic,
    ))
}

/// Runs FCFS and the heuristic on the same seeds and prints both windowed ratios.
pub fn cmd_compare(config_path: &Path, out_dir: Option<&Path>, out: &mut dyn Write) -> Exit {
    let cfg = match load(config_path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let (cmp, fcfs, heuristic) = match compare(&cfg, out) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if let Some(dir) = out_dir {
        for (name, trace) in [("fcfs.csv", &fcfs), ("heuristic.csv", &heuristic)] {
            let path = dir.join(name);
            if let Err(e) = write_trace_file(&path, trace) {
                return fail(Exit::Input, format!("writing {}: {e}", path.display()));
            }
        }
    }
    let (t1, t2) = (cfg.window_start, cfg.window_end);
    let _ = writeln!(out, "W[{t1},{t2}) fcfs      = {}", fmt6(cmp.fcfs));
    let _ = writeln!(out, "W[{t1},{t2}) heuristic = {}", fmt6(cmp.heuristic));
    let ratio = cmp.ratio.map_or_else(|| "n/a".to_string(), fmt6);
    let _ = writeln!(out, "ratio heuristic/fcfs = {ratio}");
    Exit::Ok
}

/// Prints the necessary stability conditions and their margins.
pub fn cmd_stability(config_path: &Path, strict: bool, out: &mut dyn Write) -> Exit {
    let cfg = match load(config_path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let r = stability_report(&cfg);
    let u = &cfg.universe;
    let mark = |ok: bool| if ok { "ok" } else { "VIOLATED" };
    let _ = writeln!(
        out,
        "p_c < n1/nc          : {} < {} [{}] margin {}",
        fmt6(cfg.p_c),
        fmt6(f64::from(u.hard_core()) / f64::from(u.core())),
        mark(r.cond_pc),
        fmt6(r.margins[0])
    );
    let _ = writeln!(
        out,
        "p_a < n2/na          : {} < {} [{}] margin {}",
        fmt6(cfg.p_a),
        fmt6(f64::from(u.hard_access()) / f64::from(u.access())),
        mark(r.cond_pa),
        fmt6(r.margins[1])
    );
    let _ = writeln!(
        out,
        "mu*lambda < min(nc,na): {} < {} [{}] margin {}",
        fmt6(cfg.mu * cfg.lambda),
        u.core().min(u.access()),
        mark(r.cond_load),
        fmt6(r.margins[2])
    );
    let _ = writeln!(
        out,
        "compliant: {}",
        if r.compliant { "yes" } else { "no" }
    );
    if strict && !r.compliant {
        Exit::Unstable
    } else {
        Exit::Ok
    }
}

/// Design checks selectable for `validate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    HardCore,
    HardAccess,
    Latin,
    Partition,
}

impl Check {
    pub const ALL: [Check; 4] = [
        Check::HardCore,
        Check::HardAccess,
        Check::Latin,
        Check::Partition,
    ];
}

fn report(out: &mut dyn Write, label: &str, v: &Verdict) -> bool {
    let _ = writeln!(out, "{label}: {}", if v.holds() { "holds" } else { "FAILS" });
    for x in v.violations() {
        let _ = writeln!(out, "  {x}");
    }
    v.holds()
}

/// Runs the design checks on a triples file. Set sizes are the largest
/// index seen (or `n1`/`n2` when larger).
pub fn cmd_validate(
    triples_path: &Path,
    n1: u32,
    n2: u32,
    checks: &[Check],
    out: &mut dyn Write,
) -> Exit {
    let text = match std::fs::read_to_string(triples_path) {
        Ok(t) => t,
        Err(e) => return fail(Exit::Input, format!("{}: {e}", triples_path.display())),
    };
    let open = SymbolUniverse::new(u32::MAX, u32::MAX, u32::MAX, 1, 1).expect("valid bounds");
    let loose = match parse_triples(&text, open) {
        Ok(t) => t,
        Err(e) => return fail(Exit::Input, e),
    };
    let max = |f: fn(&netslice::SliceTriple) -> u32| loose.iter().map(f).max().unwrap_or(0);
    let universe = match SymbolUniverse::new(
        max(|t| t.service),
        max(|t| t.access).max(n2),
        max(|t| t.core).max(n1),
        n1,
        n2,
    ) {
        Ok(u) => u,
        Err(e) => return fail(Exit::Input, e),
    };
    let set = match parse_triples(&text, universe) {
        Ok(t) => t,
        Err(e) => return fail(Exit::Input, e),
    };
    let _ = writeln!(
        out,
        "{} triples; n_s={} n_a={} n_c={} n1={} n2={}",
        set.len(),
        universe.services(),
        universe.access(),
        universe.core(),
        n1,
        n2
    );

    let mut ok = true;
    let wanted = |c: Check| checks.is_empty() || checks.contains(&c);
    let core = report(out, "hard core slicing", &check_hard_core(&set));
    ok &= core || !wanted(Check::HardCore);
    let access = report(out, "hard access slicing", &check_hard_access(&set));
    ok &= access || !wanted(Check::HardAccess);
    for conj in Conjugate::ALL {
        let latin = is_partial_latin(&conjugate_view(&set, conj));
        let _ = writeln!(
            out,
            "partial Latin {conj}: {}",
            if latin { "yes" } else { "no" }
        );
        ok &= latin || !wanted(Check::Latin);
    }
    let claims = report(
        out,
        &format!("partition claims (n1={n1}, n2={n2})"),
        &verify_partition_claims(&partition_cas(&set)),
    );
    ok &= claims || !wanted(Check::Partition);

    if ok {
        Exit::Ok
    } else {
        Exit::Violations
    }
}
