//! Config-driven experiments.
//!
//! A run reads a [`Config`], builds the kernel, grid and initial set, executes
//! one experiment and writes an output directory holding `manifest.json` (the
//! resolved config, kernel and grid summaries, the headline numbers and any
//! property violations), `results.csv` and `snapshots/`. Outputs are
//! assembled in a staging directory next to the target and renamed into place
//! once complete, so a failed run leaves nothing behind.

pub mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{Config, Experiment, FocusConfig, GeometryConfig, KernelConfig, LevelInit};

use crate::atw::{arrival_time, atw_step_both, evolve_level_function, run_flow, step_problem, FlowTrace, Mode};
use crate::energy::{coarea_decompose, curvature_field, jk_functional, k_curvature, nonlocal_perimeter, write_curvature_csv};
use crate::error::Error;
use crate::gridset::{io, signed_distance, DiscreteSet, GridGeometry, ScalarField};
use crate::kernel::InteractionTable;
use crate::minimality::{
    certify_outward_minimizing, certify_with_delta, enlargement_problem, max_strong_delta, mean_convexity_report, write_witness_overlay, ConvexityOptions, Focus,
};
use crate::oracle::{brute_force_minimizer, brute_force_perimeter, EnumerationOrder, MAX_FREE_CELLS, MAX_PERIMETER_CELLS};
use crate::shapes::clearance;

/// Minimum distance in cells between a bounded initial set and the outside
/// of the flexible region.
pub const MIN_CLEARANCE: usize = 2;

/// Relative slack for identities that hold exactly up to summation order.
const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Config,
    Solver,
    Property,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Config => 2,
            FailureKind::Solver => 3,
            FailureKind::Property => 4,
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{}: {message}", match kind { FailureKind::Config => "config error", FailureKind::Solver => "solver error", FailureKind::Property => "property violation" })]
pub struct ScenarioError {
    pub kind: FailureKind,
    pub message: String,
    /// Output directory, written for property violations only.
    pub output: Option<PathBuf>,
}

impl ScenarioError {
    fn config(e: impl std::fmt::Display) -> Self {
        Self { kind: FailureKind::Config, message: e.to_string(), output: None }
    }

    fn solver(e: Error) -> Self {
        let kind = match e {
            Error::NotNested(_) | Error::NotMinimizing(_) => FailureKind::Property,
            _ => FailureKind::Solver,
        };
        Self { kind, message: e.to_string(), output: None }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }
}

type Outcome<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the config's output directory.
    pub out: Option<PathBuf>,
    /// Overrides the config's seed.
    pub seed: Option<u64>,
    /// Re-check solver results and certificates independently.
    pub verify: bool,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output: PathBuf,
    pub experiment: &'static str,
    pub summary: Value,
}

/// Everything an experiment produces, before it touches the disk.
#[derive(Default)]
struct Artifacts {
    results: Vec<u8>,
    /// Paths relative to `snapshots/`.
    snapshots: Vec<(String, Vec<u8>)>,
    summary: Value,
    violations: Vec<String>,
}

struct Setup {
    config: Config,
    table: Arc<InteractionTable>,
    geometry: Arc<GridGeometry>,
    initial: DiscreteSet,
    verify: bool,
}

/// Loads `path` and runs it; relative paths in the config resolve against the
/// config's directory.
pub fn run_scenario(path: &Path, options: &RunOptions) -> Outcome<RunSummary> {
    let config = Config::load(path).map_err(ScenarioError::config)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    run_config(config, &base, options)
}

pub fn run_config(mut config: Config, base: &Path, options: &RunOptions) -> Outcome<RunSummary> {
    config.validate().map_err(ScenarioError::config)?;
    if let Some(seed) = options.seed {
        config.seed = seed;
    }
    let output = match (&options.out, &config.output) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) if o.is_relative() => base.join(o),
        (None, Some(o)) => o.clone(),
        (None, None) => return Err(ScenarioError::config("no output directory: set `output` or pass --out")),
    };
    check_output_target(&output)?;
    let setup = prepare(config, base, options.verify)?;
    let artifacts = execute(&setup).map_err(ScenarioError::solver)?;
    let manifest = manifest(&setup, &artifacts);
    write_outputs(&output, &artifacts, &manifest).map_err(|e| ScenarioError { kind: FailureKind::Solver, message: format!("writing outputs: {e}"), output: None })?;
    let experiment = setup.config.experiment_name();
    if !artifacts.violations.is_empty() {
        return Err(ScenarioError { kind: FailureKind::Property, message: artifacts.violations.join("; "), output: Some(output) });
    }
    Ok(RunSummary { output, experiment, summary: artifacts.summary })
}

fn prepare(config: Config, base: &Path, verify: bool) -> Outcome<Setup> {
    let geometry = config.geometry(Some(base)).map_err(ScenarioError::config)?;
    let table = Arc::new(config.kernel.build(geometry.dim(), geometry.spacing()).map_err(ScenarioError::config)?);
    let initial = config.shape.rasterize(&geometry, Some(base)).map_err(ScenarioError::config)?;
    let unbounded = initial.iter().any(|i| geometry.on_rim(i));
    if !unbounded && !initial.is_empty() {
        let c = clearance(&initial);
        if c < MIN_CLEARANCE {
            return Err(ScenarioError::config(format!("initial set is {c} cells from the edge of the flexible region, need {MIN_CLEARANCE}")));
        }
    }
    Ok(Setup { config, table, geometry, initial, verify })
}

fn execute(s: &Setup) -> crate::Result<Artifacts> {
    match &s.config.experiment {
        Experiment::Flow { h, t_max, mode, snapshot_every, require_nested } => flow(s, *h, *t_max, *mode, *snapshot_every, *require_nested),
        Experiment::HSweep { h, t_max, mode } => h_sweep(s, h, *t_max, *mode),
        Experiment::Certify { delta_tol, strong } => certify(s, *delta_tol, *strong),
        Experiment::ConvexityReport { lambda_max, lambda_count, curv_tol, focus } => convexity(s, *lambda_max, *lambda_count, *curv_tol, focus.as_ref()),
        Experiment::LevelFunction { h, steps, quantum, initial } => level_function(s, *h, *steps, *quantum, *initial),
        Experiment::CorollaryIntegral { h, max_steps, lipschitz_pairs, lipschitz_delta, delta_tol } => {
            corollary(s, *h, *max_steps, *lipschitz_pairs, *lipschitz_delta, *delta_tol)
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// PBM for 2D sets, run-length text otherwise.
fn set_snapshot(name: &str, set: &DiscreteSet) -> crate::Result<(String, Vec<u8>)> {
    let mut bytes = Vec::new();
    if set.geometry().dim() == 2 {
        io::write_pbm(set, &mut bytes)?;
        Ok((format!("{name}.pbm"), bytes))
    } else {
        io::write_runs(set, &mut bytes)?;
        Ok((format!("{name}.runs"), bytes))
    }
}

fn field_snapshots(name: &str, field: &ScalarField, out: &mut Vec<(String, Vec<u8>)>) -> crate::Result<()> {
    let mut csv = Vec::new();
    io::write_field_csv(field, &mut csv)?;
    out.push((format!("{name}.csv"), csv));
    if field.geometry().dim() == 2 {
        let (lo, hi) = field.values().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let mut pgm = Vec::new();
        io::write_field_pgm(field, lo, hi.max(lo + f64::MIN_POSITIVE), &mut pgm)?;
        out.push((format!("{name}.pgm"), pgm));
    }
    Ok(())
}

fn trace_nested(trace: &FlowTrace) -> bool {
    trace.records.windows(2).all(|w| w[1].set.is_subset(&w[0].set))
}

fn extinction_time(trace: &FlowTrace) -> Option<f64> {
    trace.extinct().then(|| trace.records.last().expect("trace holds the initial set").t)
}

/// `Σ_{k h < T} h Per_K(E_k)`, summed in sorted order.
fn perimeter_integral(trace: &FlowTrace, t_end: f64) -> f64 {
    let mut terms: Vec<f64> = trace.records.iter().filter(|r| r.t < t_end).map(|r| trace.h * r.perimeter).collect();
    terms.sort_by(|a, b| a.total_cmp(b));
    terms.iter().sum()
}

/// Re-solves every step and checks it against the stored result and the
/// step energy of the previous set.
fn verify_trace(trace: &FlowTrace, table: &Arc<InteractionTable>, violations: &mut Vec<String>) -> crate::Result<()> {
    for w in trace.records.windows(2) {
        let (prev, next) = (&w[0].set, &w[1].set);
        let both = atw_step_both(prev, trace.h, table)?;
        if both.get(trace.mode) != next || !both.minimal.is_subset(&both.maximal) {
            violations.push(format!("step {} does not reproduce", w[1].k));
            continue;
        }
        if prev.covers_rim() || prev.is_empty() {
            continue;
        }
        let problem = step_problem(prev, trace.h, table)?;
        let (e_next, e_prev) = (problem.energy(next)?, problem.energy(prev)?);
        if e_next > e_prev + 1e-9 * e_prev.abs().max(1.0) {
            violations.push(format!("step {} raises the step energy: {e_next} > {e_prev}", w[1].k));
        }
    }
    Ok(())
}

fn flow(s: &Setup, h: f64, t_max: f64, mode: Mode, every: usize, require_nested: bool) -> crate::Result<Artifacts> {
    let trace = run_flow(&s.initial, h, t_max, &s.table, mode)?;
    let mut art = Artifacts::default();
    trace.write_csv(&mut art.results)?;
    if every > 0 {
        let last = trace.records.len() - 1;
        for r in trace.records.iter().filter(|r| r.k % every == 0 || r.k == last) {
            art.snapshots.push(set_snapshot(&format!("step_{:05}", r.k), &r.set)?);
        }
    }
    let nested = trace_nested(&trace);
    if require_nested && !nested {
        art.violations.push("flow is not nested".into());
    }
    if s.verify {
        verify_trace(&trace, &s.table, &mut art.violations)?;
    }
    art.summary = json!({
        "steps": trace.records.len() - 1,
        "termination": trace.termination,
        "extinction_time": extinction_time(&trace),
        "integrated_perimeter": trace.integrated_perimeter(),
        "nested": nested,
    });
    Ok(art)
}

fn h_sweep(s: &Setup, hs: &[f64], t_max: f64, mode: Mode) -> crate::Result<Artifacts> {
    let traces: Vec<FlowTrace> = hs.par_iter().map(|&h| run_flow(&s.initial, h, t_max, &s.table, mode)).collect::<crate::Result<_>>()?;
    let mut art = Artifacts::default();
    writeln!(art.results, "h,steps,termination,extinction_time,integrated_perimeter,jk_arrival,difference")?;
    let mut integrals = Vec::new();
    let mut rows = Vec::new();
    for (i, trace) in traces.iter().enumerate() {
        let integral = perimeter_integral(trace, t_max);
        let arrival = crate::atw::ArrivalTime::from_trace(trace.clone());
        let jk = jk_functional(&arrival.field, &s.table)?;
        let nested = trace_nested(trace);
        if trace.extinct() && nested && relative_gap(jk, trace.integrated_perimeter()) > IDENTITY_TOL {
            art.violations.push(format!("h = {}: J_K(u_h) = {jk} differs from the summed perimeters {}", trace.h, trace.integrated_perimeter()));
        }
        let diff = integrals.last().map(|&p: &f64| (integral - p).abs());
        integrals.push(integral);
        let termination = serde_json::to_value(trace.termination).expect("serializable");
        writeln!(
            art.results,
            "{},{},{},{},{},{},{}",
            trace.h,
            trace.records.len() - 1,
            termination.as_str().unwrap_or_default(),
            opt(extinction_time(trace)),
            integral,
            jk,
            opt(diff)
        )?;
        let mut volume = Vec::new();
        writeln!(volume, "k,t,measure")?;
        for r in &trace.records {
            writeln!(volume, "{},{},{}", r.k, r.t, r.measure)?;
        }
        art.snapshots.push((format!("volume_{i}.csv"), volume));
        let strictly_decreasing = trace.records.windows(2).all(|w| w[1].measure < w[0].measure);
        rows.push(json!({
            "h": trace.h,
            "termination": termination,
            "integrated_perimeter": integral,
            "jk_arrival": jk,
            "nested": nested,
            "volume_strictly_decreasing": strictly_decreasing,
        }));
    }
    let diffs: Vec<f64> = integrals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    art.summary = json!({
        "runs": rows,
        "differences": diffs,
        "differences_decreasing": diffs.windows(2).all(|w| w[1] < w[0]),
    });
    Ok(art)
}

fn certify(s: &Setup, delta_tol: f64, strong: bool) -> crate::Result<Artifacts> {
    let omega = DiscreteSet::flexible_region(&s.geometry);
    let cert = if strong { certify_with_delta(&s.initial, &omega, &s.table, delta_tol)? } else { certify_outward_minimizing(&s.initial, &omega, &s.table)? };
    let mut art = Artifacts::default();
    writeln!(art.results, "verdict,witness_cells,gain,localized_gain,strong_delta,free_cells,graph_nodes,arcs,phases")?;
    let verdict = serde_json::to_value(cert.verdict).expect("serializable");
    writeln!(
        art.results,
        "{},{},{},{},{},{},{},{},{}",
        verdict.as_str().unwrap_or_default(),
        cert.witness.len(),
        cert.gain,
        cert.localized_gain,
        opt(cert.strong_delta),
        cert.stats.free_cells,
        cert.stats.graph_nodes,
        cert.stats.arcs,
        cert.stats.phases
    )?;
    art.snapshots.push(set_snapshot("set", &s.initial)?);
    let witness = cert.witness_set.clone().unwrap_or_else(|| DiscreteSet::empty(&s.geometry));
    if s.geometry.dim() == 2 {
        let mut pgm = Vec::new();
        write_witness_overlay(&s.initial, &witness, &mut pgm)?;
        art.snapshots.push(("witness.pgm".into(), pgm));
    }
    let mut checks = Vec::new();
    if s.verify {
        if !cert.is_minimizing() {
            let grown = s.initial.union(&witness)?;
            let (before, after) = if s.geometry.len() <= MAX_PERIMETER_CELLS {
                checks.push("witness re-evaluated by the brute-force perimeter");
                (brute_force_perimeter(&s.initial, &s.table)?, brute_force_perimeter(&grown, &s.table)?)
            } else {
                checks.push("witness re-evaluated by the perimeter sum");
                (nonlocal_perimeter(&s.initial, &s.table)?, nonlocal_perimeter(&grown, &s.table)?)
            };
            if !(after < before) {
                art.violations.push(format!("witness does not lower the perimeter: {after} ≥ {before}"));
            }
        }
        let problem = enlargement_problem(&s.initial, &omega, &s.table, 0.0)?;
        if problem.free_cells().len() <= MAX_FREE_CELLS {
            checks.push("verdict re-derived by exhaustive enumeration");
            let brute = brute_force_minimizer(&problem, EnumerationOrder::Gray)?;
            if (brute.intersection == s.initial) != cert.is_minimizing() {
                art.violations.push("exhaustive enumeration disagrees with the verdict".into());
            }
        }
    }
    art.summary = json!({ "certificate": cert, "verified": checks });
    Ok(art)
}

fn convexity(s: &Setup, lambda_max: f64, lambda_count: usize, curv_tol: Option<f64>, focus: Option<&FocusConfig>) -> crate::Result<Artifacts> {
    let focus = focus.map(|f| {
        let mut center = [0.0; 3];
        center[..f.center.len()].copy_from_slice(&f.center);
        Focus { center, radius: f.radius }
    });
    let options = ConvexityOptions { lambda_max, lambda_count, curv_tol, focus };
    let report = mean_convexity_report(&s.initial, &s.table, &options)?;
    let mut art = Artifacts::default();
    writeln!(art.results, "lambda,min_curvature,focus_min_curvature")?;
    writeln!(art.results, "0,{},{}", opt(report.min_curvature), opt(report.focus_min_curvature))?;
    for d in &report.dilations {
        writeln!(art.results, "{},{},{}", d.lambda, opt(d.min_curvature), opt(d.focus_min_curvature))?;
    }
    let samples = k_curvature(&s.initial, &s.table, None)?;
    let mut csv = Vec::new();
    write_curvature_csv(&s.geometry, &samples, &mut csv)?;
    art.snapshots.push(("curvature.csv".into(), csv));
    if s.geometry.dim() == 2 && !samples.is_empty() {
        let field = curvature_field(&s.geometry, &samples);
        let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), c| (l.min(c.value), h.max(c.value)));
        let mut pgm = Vec::new();
        io::write_field_pgm(&field, lo, hi.max(lo + f64::MIN_POSITIVE), &mut pgm)?;
        art.snapshots.push(("curvature.pgm".into(), pgm));
    }
    if report.strong && !report.regular {
        art.violations.push("strong convexity without regular convexity".into());
    }
    art.summary = json!({ "report": report });
    Ok(art)
}

fn level_function(s: &Setup, h: f64, steps: usize, quantum: f64, init: LevelInit) -> crate::Result<Artifacts> {
    let raw = match init {
        LevelInit::Distance => signed_distance(&s.initial),
        LevelInit::Indicator => s.initial.indicator(),
    };
    let u0 = raw.quantized(quantum)?;
    let evo = evolve_level_function(&u0, h, steps, &s.table)?;
    let mut art = Artifacts::default();
    writeln!(art.results, "level,measure_initial,measure_final")?;
    for &l in &evo.levels {
        writeln!(art.results, "{l},{},{}", u0.superlevel(l).measure(), evo.field.superlevel(l).measure())?;
    }
    field_snapshots("u0", &u0, &mut art.snapshots)?;
    field_snapshots("u_final", &evo.field, &mut art.snapshots)?;
    art.summary = json!({ "levels": evo.levels.len(), "quantum": quantum, "steps": steps });
    Ok(art)
}

fn corollary(s: &Setup, h: f64, max_steps: usize, pairs: usize, delta: Option<f64>, delta_tol: f64) -> crate::Result<Artifacts> {
    let arrival = arrival_time(&s.initial, h, &s.table, Mode::Minimal, max_steps)?;
    let trace = &arrival.trace;
    let coarea = coarea_decompose(&arrival.field, &s.table)?;
    let jk = jk_functional(&arrival.field, &s.table)?;
    let summed = trace.integrated_perimeter();
    let mut art = Artifacts::default();
    writeln!(art.results, "level,gap,perimeter")?;
    for ((l, g), p) in coarea.levels.iter().zip(&coarea.gaps).zip(&coarea.perimeters) {
        writeln!(art.results, "{l},{g},{p}")?;
    }
    field_snapshots("arrival", &arrival.field, &mut art.snapshots)?;

    let nested = trace_nested(trace);
    if relative_gap(coarea.reconstructed, jk) > IDENTITY_TOL {
        art.violations.push(format!("layer-cake sum {} differs from J_K(u_h) = {jk}", coarea.reconstructed));
    }
    if arrival.complete() && nested {
        if relative_gap(summed, jk) > IDENTITY_TOL {
            art.violations.push(format!("Σ h Per_K(E_k) = {summed} differs from J_K(u_h) = {jk}"));
        }
        for r in &trace.records {
            if arrival.field.superlevel(r.t) != r.set {
                art.violations.push(format!("{{u_h > {}}} differs from E_{}", r.t, r.k));
                break;
            }
        }
    }

    let mut lipschitz = Value::Null;
    if pairs > 0 {
        let omega = DiscreteSet::flexible_region(&s.geometry);
        let delta = match delta {
            Some(d) => d,
            None => max_strong_delta(&s.initial, &omega, &s.table, delta_tol)?,
        };
        let a = s.geometry.spacing();
        let mut rng = ChaCha8Rng::seed_from_u64(s.config.seed);
        let n = s.geometry.len();
        let mut worst = f64::NEG_INFINITY;
        let mut failures = 0;
        for _ in 0..pairs {
            let (p, q) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let bound = s.geometry.center_distance(p, q) / delta + h + a / delta;
            let gap = (arrival.field.get(p) - arrival.field.get(q)).abs();
            worst = worst.max(gap - bound);
            if gap > bound {
                failures += 1;
            }
        }
        if failures > 0 {
            art.violations.push(format!("{failures} of {pairs} sampled pairs break the Lipschitz-type bound"));
        }
        lipschitz = json!({ "delta": delta, "pairs": pairs, "failures": failures, "worst_margin": worst });
    }

    art.summary = json!({
        "steps": trace.records.len() - 1,
        "termination": trace.termination,
        "complete": arrival.complete(),
        "nested": nested,
        "jk_arrival": jk,
        "coarea_reconstructed": coarea.reconstructed,
        "summed_perimeters": summed,
        "lipschitz": lipschitz,
    });
    Ok(art)
}

fn manifest(s: &Setup, art: &Artifacts) -> Value {
    let t = &s.table;
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": s.config.experiment_name(),
        "config": s.config,
        "verify": s.verify,
        "kernel": {
            "kind": t.kind(),
            "offsets": t.len(),
            "truncation_radius": t.truncation_radius(),
            "tail_mass": t.tail_mass(),
            "max_weight": t.max_weight(),
            "total_weight": t.total_weight(),
            "tail_convention": crate::kernel::TAIL_CONVENTION,
        },
        "geometry": s.geometry.summary(),
        "initial": {
            "cells": s.initial.count(),
            "measure": s.initial.measure(),
        },
        "summary": art.summary,
        "violations": art.violations,
        "snapshots": art.snapshots.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
    })
}

/// The target may be absent, empty, or a previous run's output.
fn check_output_target(out: &Path) -> Outcome<()> {
    if !out.exists() {
        return Ok(());
    }
    if !out.is_dir() {
        return Err(ScenarioError::config(format!("{} exists and is not a directory", out.display())));
    }
    let empty = std::fs::read_dir(out).map_err(ScenarioError::config)?.next().is_none();
    if empty || out.join("manifest.json").is_file() {
        Ok(())
    } else {
        Err(ScenarioError::config(format!("{} holds files that are not a previous run's output", out.display())))
    }
}

fn write_outputs(out: &Path, art: &Artifacts, manifest: &Value) -> std::io::Result<()> {
    let parent = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(parent)?;
    let name = out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let stage = parent.join(format!(".{name}.staging-{}", std::process::id()));
    if stage.exists() {
        std::fs::remove_dir_all(&stage)?;
    }
    let result = (|| {
        std::fs::create_dir_all(stage.join("snapshots"))?;
        let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
        text.push('\n');
        std::fs::write(stage.join("manifest.json"), text)?;
        std::fs::write(stage.join("results.csv"), &art.results)?;
        for (file, bytes) in &art.snapshots {
            std::fs::write(stage.join("snapshots").join(file), bytes)?;
        }
        if out.exists() {
            std::fs::remove_dir_all(out)?;
        }
        std::fs::rename(&stage, out)
    })();
    if result.is_err() {
        let _ = std::fs::remove_dir_all(&stage);
    }
    result
}

/// The shape a config describes, rasterized, for callers that only want the set.
pub fn initial_set(config: &Config, base: &Path) -> crate::Result<DiscreteSet> {
    let g = config.geometry(Some(base))?;
    config.shape.rasterize(&g, Some(base))
}
