//! Minimizing movements: one implicit step `T_h`, iterated flows, the discrete
//! arrival time and the level-function scheme.
//!
//! A step minimizes `Per_K(F) − (1/h) Σ_{p∈F} d_E(p) a^n` over sets `F`. Cells
//! outside the flexible region keep their current membership. A set that
//! covers the whole box rim stands for an unbounded set; it is stepped through
//! its complement, `T_h(E) = (T_h(E^c))^c`, with the minimal and maximal
//! branches exchanged.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{k_curvature, min_curvature, nonlocal_perimeter};
use crate::error::{Error, Result};
use crate::gridset::{set_distance, signed_distance, DiscreteSet, ScalarField};
use crate::kernel::InteractionTable;
use crate::mincut::{solve_min_cut, CutProblem, CutSolution, Label};

/// Which extremal minimizer a step returns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Minimal,
    Maximal,
}

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time step {h} must be positive")))
    }
}

/// The cut problem of one step from a bounded set: unary
/// `g(p) = −d_E(p) a^n / h`, cells outside the flexible region pinned.
pub fn step_problem(set: &DiscreteSet, h: f64, table: &Arc<InteractionTable>) -> Result<CutProblem> {
    check_h(h)?;
    let g = set.geometry();
    let d = signed_distance(set);
    let factor = g.cell_volume() / h;
    let unary = d.values().iter().map(|v| -v * factor).collect();
    let mut problem = CutProblem::new(g, table, unary)?;
    for i in 0..g.len() {
        if !g.flexible()[i] {
            problem.pin(i, if set.contains(i) { Label::Foreground } else { Label::Background })?;
        }
    }
    Ok(problem)
}

/// Both extremal minimizers of one step, for a bounded set.
fn step_bounded(set: &DiscreteSet, h: f64, table: &Arc<InteractionTable>) -> Result<CutSolution> {
    solve_min_cut(&step_problem(set, h, table)?)
}

/// `T_h^−(E)` and `T_h^+(E)`.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub minimal: DiscreteSet,
    pub maximal: DiscreteSet,
    /// Step energy of the minimal branch (of the complement when stepped
    /// through it).
    pub energy: f64,
    pub through_complement: bool,
}

impl StepResult {
    pub fn get(&self, mode: Mode) -> &DiscreteSet {
        match mode {
            Mode::Minimal => &self.minimal,
            Mode::Maximal => &self.maximal,
        }
    }
}

pub fn atw_step_both(set: &DiscreteSet, h: f64, table: &Arc<InteractionTable>) -> Result<StepResult> {
    check_h(h)?;
    crate::energy::check_table(set.geometry(), table)?;
    if set.is_empty() {
        return Ok(StepResult { minimal: set.clone(), maximal: set.clone(), energy: 0.0, through_complement: false });
    }
    if set.covers_rim() {
        let sol = step_bounded(&set.complement(), h, table)?;
        return Ok(StepResult {
            minimal: sol.maximal.complement(),
            maximal: sol.minimal.complement(),
            energy: sol.energy,
            through_complement: true,
        });
    }
    let sol = step_bounded(set, h, table)?;
    Ok(StepResult { minimal: sol.minimal, maximal: sol.maximal, energy: sol.energy, through_complement: false })
}

/// One minimizing-movement step.
pub fn atw_step(set: &DiscreteSet, h: f64, table: &Arc<InteractionTable>, mode: Mode) -> Result<DiscreteSet> {
    let both = atw_step_both(set, h, table)?;
    Ok(match mode {
        Mode::Minimal => both.minimal,
        Mode::Maximal => both.maximal,
    })
}

/// Why a flow stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Extinction,
    MaxSteps,
    /// The set did not change for two consecutive steps.
    Stagnation,
}

#[derive(Debug, Clone)]
pub struct FlowRecord {
    pub k: usize,
    pub t: f64,
    pub set: DiscreteSet,
    pub perimeter: f64,
    pub measure: f64,
    /// `d(E_k, E_{k−1})`; absent at `k = 0` or when a boundary is empty.
    pub distance: Option<f64>,
    pub min_curvature: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub h: f64,
    pub mode: Mode,
    pub records: Vec<FlowRecord>,
    pub termination: Termination,
}

impl FlowTrace {
    /// `E_h(t) = E_k` with `k = ⌊t/h⌋`; empty after extinction, the last set
    /// after a capped run.
    pub fn set_at(&self, t: f64) -> DiscreteSet {
        let k = if t <= 0.0 { 0 } else { (t / self.h).floor() as usize };
        match self.records.get(k) {
            Some(r) => r.set.clone(),
            None => {
                let last = &self.records.last().expect("trace holds the initial set").set;
                if self.termination == Termination::Extinction {
                    DiscreteSet::empty(last.geometry())
                } else {
                    last.clone()
                }
            }
        }
    }

    pub fn extinct(&self) -> bool {
        self.termination == Termination::Extinction
    }

    /// `Σ_k h Per_K(E_k)`, the time integral of the piecewise-constant flow.
    pub fn integrated_perimeter(&self) -> f64 {
        let mut terms: Vec<f64> = self.records.iter().map(|r| self.h * r.perimeter).collect();
        terms.sort_by(|a, b| a.total_cmp(b));
        terms.iter().sum()
    }

    /// Summary CSV: `k,t,perimeter,measure,distance,min_curvature`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,t,perimeter,measure,distance,min_curvature")?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        for r in &self.records {
            writeln!(out, "{},{},{},{},{},{}", r.k, r.t, r.perimeter, r.measure, opt(r.distance), opt(r.min_curvature))?;
        }
        Ok(())
    }
}

fn record(k: usize, h: f64, set: DiscreteSet, prev: Option<&DiscreteSet>, table: &InteractionTable) -> Result<FlowRecord> {
    let distance = match prev {
        Some(p) => match set_distance(&set, p) {
            Ok(d) => Some(d),
            Err(Error::EmptyBoundary) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    let min_curv = min_curvature(&k_curvature(&set, table, None)?);
    Ok(FlowRecord {
        k,
        t: k as f64 * h,
        perimeter: nonlocal_perimeter(&set, table)?,
        measure: set.measure(),
        distance,
        min_curvature: min_curv,
        set,
    })
}

/// Iterate steps until extinction, stagnation, or `t ≥ t_max`.
pub fn run_flow(set: &DiscreteSet, h: f64, t_max: f64, table: &Arc<InteractionTable>, mode: Mode) -> Result<FlowTrace> {
    check_h(h)?;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("final time {t_max} must be positive")));
    }
    let max_steps = (t_max / h).ceil() as usize;
    let mut records = vec![record(0, h, set.clone(), None, table)?];
    let mut unchanged = 0;
    let mut termination = Termination::MaxSteps;
    if set.is_empty() {
        termination = Termination::Extinction;
    }
    while termination == Termination::MaxSteps && records.len() <= max_steps {
        let current = &records.last().expect("nonempty").set;
        let next = atw_step(current, h, table, mode)?;
        unchanged = if next == *current { unchanged + 1 } else { 0 };
        let k = records.len();
        let rec = record(k, h, next, Some(current), table)?;
        let empty = rec.set.is_empty();
        records.push(rec);
        if empty {
            termination = Termination::Extinction;
        } else if unchanged >= 2 {
            termination = Termination::Stagnation;
        }
    }
    Ok(FlowTrace { h, mode, records, termination })
}

/// Discrete arrival time together with the flow that produced it.
#[derive(Debug, Clone)]
pub struct ArrivalTime {
    pub field: ScalarField,
    pub trace: FlowTrace,
}

impl ArrivalTime {
    pub fn from_trace(trace: FlowTrace) -> Self {
        let g = trace.records[0].set.geometry().clone();
        let mut counts = vec![0usize; g.len()];
        for r in &trace.records {
            for p in r.set.iter() {
                counts[p] += 1;
            }
        }
        let values = counts.iter().map(|&c| c as f64 * trace.h).collect();
        let field = ScalarField::new(&g, values).expect("arrival times are finite");
        Self { field, trace }
    }

    /// False when the flow hit the step cap before extinction.
    pub fn complete(&self) -> bool {
        self.trace.extinct()
    }
}

/// `u_h(p) = h · #{k ≥ 0 : p ∈ E_k}` along the flow from `set`, capped at
/// `max_steps`. A capped field is still returned; check [`ArrivalTime::complete`].
pub fn arrival_time(set: &DiscreteSet, h: f64, table: &Arc<InteractionTable>, mode: Mode, max_steps: usize) -> Result<ArrivalTime> {
    let trace = run_flow(set, h, h * max_steps as f64, table, mode)?;
    Ok(ArrivalTime::from_trace(trace))
}

/// Result of the level-function scheme.
#[derive(Debug, Clone)]
pub struct LevelEvolution {
    pub field: ScalarField,
    pub levels: Vec<f64>,
}

/// Apply `T_h^−` to every strict superlevel set of `u0` and rebuild the
/// function as `sup{λ : p ∈ T_h({u > λ})}`, `steps` times. `u0` should take
/// few distinct values (see [`ScalarField::quantized`]).
pub fn evolve_level_function(u0: &ScalarField, h: f64, steps: usize, table: &Arc<InteractionTable>) -> Result<LevelEvolution> {
    check_h(h)?;
    let levels = u0.levels();
    let mut u = u0.clone();
    for _ in 0..steps {
        u = level_step(&u, &levels, h, table)?;
    }
    Ok(LevelEvolution { field: u, levels })
}

fn level_step(u: &ScalarField, levels: &[f64], h: f64, table: &Arc<InteractionTable>) -> Result<ScalarField> {
    let g = u.geometry();
    if levels.len() < 2 {
        return Ok(u.clone());
    }
    let evolved: Vec<DiscreteSet> = levels[..levels.len() - 1]
        .par_iter()
        .map(|&l| atw_step(&u.superlevel(l), h, table, Mode::Minimal))
        .collect::<Result<_>>()?;
    for (i, pair) in evolved.windows(2).enumerate() {
        if !pair[1].is_subset(&pair[0]) {
            return Err(Error::NotNested(levels[i + 1]));
        }
    }
    let values = (0..g.len())
        .map(|p| {
            let passed = evolved.iter().take_while(|s| s.contains(p)).count();
            levels[passed]
        })
        .collect();
    ScalarField::new(g, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridset::GridGeometry;
    use crate::kernel::build_fractional_kernel;

    fn table() -> Arc<InteractionTable> {
        Arc::new(build_fractional_kernel(2, 0.5, 1.0, 4.0, 1e-8).unwrap())
    }

    fn disk(g: &Arc<GridGeometry>, r: f64) -> DiscreteSet {
        DiscreteSet::from_predicate(g, |x| x[0] * x[0] + x[1] * x[1] <= r * r)
    }

    #[test]
    fn empty_set_stays_empty() {
        let g = GridGeometry::new(1.0, &[10, 10]).unwrap();
        let e = DiscreteSet::empty(&g);
        assert!(atw_step(&e, 1.0, &table(), Mode::Maximal).unwrap().is_empty());
        assert!(atw_step(&e, 0.0, &table(), Mode::Minimal).is_err());
    }

    #[test]
    fn disk_shrinks_and_vanishes() {
        let g = GridGeometry::new(1.0, &[32, 32]).unwrap();
        let e = disk(&g, 8.0);
        let trace = run_flow(&e, 0.5, 500.0, &table(), Mode::Minimal).unwrap();
        assert_eq!(trace.termination, Termination::Extinction);
        for w in trace.records.windows(2) {
            assert!(w[1].set.is_subset(&w[0].set));
        }
        assert!(trace.set_at(1e9).is_empty());
    }

    #[test]
    fn complement_of_rim_covering_set() {
        let g = GridGeometry::new(1.0, &[24, 24]).unwrap();
        let e = disk(&g, 5.0);
        let t = table();
        let inside = atw_step_both(&e, 0.5, &t).unwrap();
        let outside = atw_step_both(&e.complement(), 0.5, &t).unwrap();
        assert!(outside.through_complement);
        assert_eq!(outside.minimal, inside.maximal.complement());
        assert_eq!(outside.maximal, inside.minimal.complement());
    }

    #[test]
    fn arrival_time_superlevels_reproduce_flow() {
        let g = GridGeometry::new(1.0, &[24, 24]).unwrap();
        let at = arrival_time(&disk(&g, 6.0), 0.5, &table(), Mode::Minimal, 1000).unwrap();
        assert!(at.complete());
        for r in &at.trace.records {
            assert_eq!(at.field.superlevel(r.t), r.set, "t = {}", r.t);
        }
    }

    #[test]
    fn level_function_cases() {
        let g = GridGeometry::new(1.0, &[20, 20]).unwrap();
        let t = table();
        let c = ScalarField::constant(&g, 3.0);
        assert_eq!(evolve_level_function(&c, 0.5, 2, &t).unwrap().field, c);

        let e = disk(&g, 5.0);
        let u = ScalarField::new(&g, e.indicator().values().iter().map(|v| 2.0 * v).collect()).unwrap();
        let out = evolve_level_function(&u, 0.5, 1, &t).unwrap();
        assert_eq!(out.field.superlevel(0.0), atw_step(&e, 0.5, &t, Mode::Minimal).unwrap());

        let d = signed_distance(&e).quantized(0.5).unwrap();
        let out = evolve_level_function(&d, 0.5, 1, &t).unwrap();
        assert_eq!(out.field.superlevel(0.0), atw_step(&e, 0.5, &t, Mode::Minimal).unwrap());
    }
}
