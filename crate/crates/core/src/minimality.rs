//! Outward-minimality certificates and nonlocal mean-convexity reports.
//!
//! A set `E` is outward minimizing in `Ω` when no `F ⊇ E` with `F ∖ E`
//! compactly inside `Ω` has smaller localized perimeter. Since `F` and `E`
//! agree outside `Ω`, the localized difference equals the global one, and the
//! search over all such `F` is a single cut: `E` pinned to the foreground,
//! everything outside `Ω` and the outermost ring of `Ω` pinned to the
//! background.

use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::energy::{insertion_costs, k_curvature, localized_perimeter, min_curvature, nonlocal_perimeter};
use crate::error::{Error, Result};
use crate::gridset::{dilate, DiscreteSet};
use crate::kernel::InteractionTable;
use crate::mincut::{solve_min_cut, CutProblem, CutStats, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Minimizing,
    NotMinimizing,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalityCertificate {
    pub verdict: Verdict,
    /// Cells of the largest optimal enlargement `A ⊆ Ω ∖ E`.
    pub witness: Vec<usize>,
    /// `Per_K(E) − Per_K(E ∪ A)`, positive for a witness.
    pub gain: f64,
    /// Same difference of localized perimeters in `Ω`.
    pub localized_gain: f64,
    /// Largest `δ` with no strict improvement, when computed.
    pub strong_delta: Option<f64>,
    pub stats: CutStats,
    #[serde(skip)]
    pub witness_set: Option<DiscreteSet>,
}

impl MinimalityCertificate {
    pub fn is_minimizing(&self) -> bool {
        self.verdict == Verdict::Minimizing
    }
}

/// `Ω`'s cells that have a face neighbor outside `Ω`.
fn outer_ring(omega: &DiscreteSet) -> Vec<usize> {
    let g = omega.geometry();
    omega
        .iter()
        .filter(|&i| {
            let (nbrs, outside) = g.face_neighbors(i);
            outside || nbrs.iter().any(|&j| !omega.contains(j))
        })
        .collect()
}

/// The enlargement problem with a per-cell bonus `δ a^n` for added cells:
/// `E` pinned to the foreground, cells outside `Ω` and on its outer ring
/// pinned to the background.
pub fn enlargement_problem(set: &DiscreteSet, omega: &DiscreteSet, table: &Arc<InteractionTable>, delta: f64) -> Result<CutProblem> {
    let g = set.geometry();
    if !g.same_lattice(omega.geometry()) {
        return Err(Error::GeometryMismatch("region and set live on different grids".into()));
    }
    if omega.iter().any(|i| g.on_rim(i)) {
        return Err(Error::RegionTouchesRim);
    }
    let bonus = -delta * g.cell_volume();
    let unary = (0..g.len()).map(|i| if set.contains(i) { 0.0 } else { bonus }).collect();
    let mut problem = CutProblem::new(g, table, unary)?;
    let mut closed = vec![false; g.len()];
    for i in outer_ring(omega) {
        closed[i] = true;
    }
    for i in 0..g.len() {
        let label = if set.contains(i) {
            Label::Foreground
        } else if !omega.contains(i) || closed[i] {
            Label::Background
        } else {
            Label::Free
        };
        problem.pin(i, label)?;
    }
    Ok(problem)
}

/// True when some admissible enlargement strictly lowers
/// `Per_K(F) − δ |F ∖ E|`.
fn improvable(set: &DiscreteSet, omega: &DiscreteSet, table: &Arc<InteractionTable>, delta: f64) -> Result<bool> {
    let sol = solve_min_cut(&enlargement_problem(set, omega, table, delta)?)?;
    Ok(sol.minimal != *set)
}

/// Decide whether `set` is outward minimizing in `omega`.
pub fn certify_outward_minimizing(set: &DiscreteSet, omega: &DiscreteSet, table: &Arc<InteractionTable>) -> Result<MinimalityCertificate> {
    let problem = enlargement_problem(set, omega, table, 0.0)?;
    let sol = solve_min_cut(&problem)?;
    // E is feasible, so the minimal minimizer is E exactly when E is optimal.
    if sol.minimal == *set {
        return Ok(MinimalityCertificate {
            verdict: Verdict::Minimizing,
            witness: Vec::new(),
            gain: 0.0,
            localized_gain: 0.0,
            strong_delta: None,
            stats: sol.stats,
            witness_set: None,
        });
    }
    let grown = sol.maximal;
    let witness = grown.difference(set)?;
    let gain = nonlocal_perimeter(set, table)? - nonlocal_perimeter(&grown, table)?;
    let localized_gain = localized_perimeter(set, omega, table)? - localized_perimeter(&grown, omega, table)?;
    Ok(MinimalityCertificate {
        verdict: Verdict::NotMinimizing,
        witness: witness.iter().collect(),
        gain,
        localized_gain,
        strong_delta: None,
        stats: sol.stats,
        witness_set: Some(witness),
    })
}

/// Largest `δ` (to within `tol`) such that no admissible enlargement `F`
/// satisfies `Per_K(F) < Per_K(E) − δ |F ∖ E|`. Requires a minimizing set.
pub fn max_strong_delta(set: &DiscreteSet, omega: &DiscreteSet, table: &Arc<InteractionTable>, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    if improvable(set, omega, table, 0.0)? {
        return Err(Error::NotMinimizing("enlargement lowers the perimeter at δ = 0".into()));
    }
    // Adding the single cheapest cell is an improvement once δ exceeds its
    // perimeter increase per unit volume.
    let g = set.geometry();
    let problem = enlargement_problem(set, omega, table, 0.0)?;
    let costs = insertion_costs(set, table, &problem.free_cells())?;
    let hi = costs.iter().fold(f64::INFINITY, |m, &c| m.min(c / g.cell_volume()));
    if !hi.is_finite() {
        // Nothing can be added; every δ is admissible.
        return Ok(f64::INFINITY);
    }
    let mut hi = hi.max(0.0) * (1.0 + 1e-9) + tol;
    let mut lo = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if improvable(set, omega, table, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// Certificate with the strong constant filled in when minimizing.
pub fn certify_with_delta(set: &DiscreteSet, omega: &DiscreteSet, table: &Arc<InteractionTable>, tol: f64) -> Result<MinimalityCertificate> {
    let mut cert = certify_outward_minimizing(set, omega, table)?;
    if cert.is_minimizing() {
        cert.strong_delta = Some(max_strong_delta(set, omega, table, tol)?);
    }
    Ok(cert)
}

/// Plain PGM overlay: 0 outside, 128 on `E`, 255 on the witness.
pub fn write_witness_overlay<W: Write>(set: &DiscreteSet, witness: &DiscreteSet, mut out: W) -> Result<()> {
    let g = set.geometry();
    if g.dim() != 2 {
        return Err(Error::Format("overlay needs a 2D grid".into()));
    }
    let (nx, ny) = (g.extents()[0], g.extents()[1]);
    writeln!(out, "P2\n{nx} {ny}\n255")?;
    for y in (0..ny).rev() {
        let row: Vec<&str> = (0..nx)
            .map(|x| {
                let i = g.index([x, y, 0]);
                if witness.contains(i) {
                    "255"
                } else if set.contains(i) {
                    "128"
                } else {
                    "0"
                }
            })
            .collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Restricts curvature minima to cells within `radius` of `center`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Focus {
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexityOptions {
    pub lambda_max: f64,
    pub lambda_count: usize,
    /// Defaults to the largest weight in curvature units, `w_max / a^n`.
    pub curv_tol: Option<f64>,
    pub focus: Option<Focus>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DilationRecord {
    pub lambda: f64,
    pub min_curvature: Option<f64>,
    pub focus_min_curvature: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexityReport {
    pub curv_tol: f64,
    pub min_curvature: Option<f64>,
    pub focus_min_curvature: Option<f64>,
    pub dilations: Vec<DilationRecord>,
    /// `min H_E ≥ −curv_tol`.
    pub plain: bool,
    /// Smallest `c` with `min H_{E^λ} ≥ −curv_tol − c λ` at every sample.
    pub regular_c: f64,
    pub regular_eta: f64,
    /// Plain, and the per-λ demand for `c` does not grow toward `λ → 0`.
    pub regular: bool,
    /// `min H` over `E` and every sampled `E^λ` with `λ ≤ ξ`.
    pub strong_delta: f64,
    pub strong_xi: f64,
    /// `strong_delta > 0`.
    pub strong: bool,
}

/// Dilation radii: `lambda_count` multiples of `a` spread up to `lambda_max`.
pub fn lambda_samples(spacing: f64, lambda_max: f64, lambda_count: usize) -> Vec<f64> {
    let top = (lambda_max / spacing).floor() as usize;
    let mut steps: Vec<usize> = (1..=lambda_count)
        .map(|j| ((j * top) as f64 / lambda_count as f64).round() as usize)
        .filter(|&s| s >= 1)
        .collect();
    steps.dedup();
    steps.into_iter().map(|s| s as f64 * spacing).collect()
}

/// Minimum curvature over all boundary cells, and over those in the focus.
fn curvature_minima(set: &DiscreteSet, table: &InteractionTable, focus: Option<&Focus>) -> Result<(Option<f64>, Option<f64>)> {
    let samples = k_curvature(set, table, None)?;
    let all = min_curvature(&samples);
    let near = focus.and_then(|f| {
        let g = set.geometry();
        samples
            .iter()
            .filter(|s| {
                let x = g.center(s.cell);
                (0..g.dim()).map(|d| (x[d] - f.center[d]).powi(2)).sum::<f64>() <= f.radius * f.radius
            })
            .map(|s| s.value)
            .reduce(f64::min)
    });
    Ok((all, near))
}

pub fn mean_convexity_report(set: &DiscreteSet, table: &InteractionTable, options: &ConvexityOptions) -> Result<ConvexityReport> {
    let g = set.geometry();
    let a = g.spacing();
    if options.lambda_max < a || options.lambda_count == 0 {
        return Err(Error::InvalidParameter(format!(
            "need λ_max ≥ a = {a} and at least one sample, got {} and {}",
            options.lambda_max, options.lambda_count
        )));
    }
    let curv_tol = options.curv_tol.unwrap_or(table.max_weight() / g.cell_volume());
    let (min_curv, focus_min) = curvature_minima(set, table, options.focus.as_ref())?;
    let mut dilations = Vec::new();
    for lambda in lambda_samples(a, options.lambda_max, options.lambda_count) {
        let d = dilate(set, lambda)?;
        if d.clipped {
            return Err(Error::DilationClipped(lambda));
        }
        let (m, f) = curvature_minima(&d.set, table, options.focus.as_ref())?;
        dilations.push(DilationRecord { lambda, min_curvature: m, focus_min_curvature: f });
    }

    let plain = min_curv.map_or(true, |m| m >= -curv_tol);
    let demands: Vec<f64> = dilations
        .iter()
        .map(|r| r.min_curvature.map_or(0.0, |m| (-m - curv_tol).max(0.0) / r.lambda))
        .collect();
    let regular_c = demands.iter().copied().fold(0.0, f64::max);
    // The demand at the finest sample dominating the rest means c has to grow
    // without bound as λ → 0.
    let growing = demands.len() >= 2 && demands[0] > 0.0 && demands[1..].iter().all(|&d| demands[0] > d);
    let regular = plain && !growing;
    let strong_delta = std::iter::once(min_curv)
        .chain(dilations.iter().map(|r| r.min_curvature))
        .flatten()
        .fold(f64::INFINITY, f64::min);
    let strong_xi = dilations.last().map_or(0.0, |r| r.lambda);
    Ok(ConvexityReport {
        curv_tol,
        min_curvature: min_curv,
        focus_min_curvature: focus_min,
        regular_eta: strong_xi,
        dilations,
        plain,
        regular_c,
        regular,
        strong: strong_delta > 0.0,
        strong_delta,
        strong_xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridset::GridGeometry;
    use crate::kernel::{build_compact_kernel, build_fractional_kernel, RadialProfile};

    fn table() -> Arc<InteractionTable> {
        Arc::new(build_fractional_kernel(2, 0.5, 1.0, 4.0, 1e-8).unwrap())
    }

    fn disk(g: &Arc<GridGeometry>, r: f64) -> DiscreteSet {
        DiscreteSet::from_predicate(g, |x| x[0] * x[0] + x[1] * x[1] <= r * r)
    }

    #[test]
    fn disk_is_minimizing_with_positive_delta() {
        let g = GridGeometry::new(1.0, &[40, 40]).unwrap();
        let t = table();
        let e = disk(&g, 6.0);
        let omega = disk(&g, 15.0);
        let cert = certify_with_delta(&e, &omega, &t, 1e-3).unwrap();
        assert!(cert.is_minimizing());
        let delta = cert.strong_delta.unwrap();
        let curv = min_curvature(&k_curvature(&e, &t, None).unwrap()).unwrap();
        assert!(delta > 0.0 && delta <= curv + t.largest_weights_sum(4), "{delta} vs {curv}");
        assert!(improvable(&e, &omega, &t, delta + 2e-3).unwrap());
    }

    #[test]
    fn two_separate_cells_are_not_minimizing() {
        // Two boxes two columns apart: filling the gap lowers the perimeter.
        let g = GridGeometry::new(1.0, &[24, 24]).unwrap();
        let t = Arc::new(build_compact_kernel(2, &RadialProfile::indicator(3.0).unwrap(), 1.0, 1e-9).unwrap());
        let e = DiscreteSet::from_predicate(&g, |x| x[0].abs() > 1.0 && x[0].abs() < 7.0 && x[1].abs() < 3.0);
        let omega = DiscreteSet::from_predicate(&g, |x| x[0].abs() < 10.0 && x[1].abs() < 10.0);
        let cert = certify_outward_minimizing(&e, &omega, &t).unwrap();
        assert_eq!(cert.verdict, Verdict::NotMinimizing);
        assert!(cert.gain > 0.0 && cert.localized_gain > 0.0);
        assert!(cert.witness.contains(&g.index([12, 12, 0])));
        assert!(max_strong_delta(&e, &omega, &t, 1e-3).is_err());
    }

    #[test]
    fn region_on_rim_rejected() {
        let g = GridGeometry::new(1.0, &[10, 10]).unwrap();
        let e = disk(&g, 2.0);
        let full = DiscreteSet::full(&g);
        assert!(matches!(certify_outward_minimizing(&e, &full, &table()), Err(Error::RegionTouchesRim)));
    }

    #[test]
    fn convexity_of_disk_and_half_plane() {
        let g = GridGeometry::new(1.0, &[48, 48]).unwrap();
        let t = table();
        let opts = ConvexityOptions { lambda_max: 4.0, lambda_count: 4, curv_tol: None, focus: None };
        let r = mean_convexity_report(&disk(&g, 8.0), &t, &opts).unwrap();
        assert!(r.plain && r.strong && r.regular, "{r:?}");
        assert_eq!(r.dilations.len(), 4);
        let clipped = ConvexityOptions { lambda_max: 40.0, ..opts };
        assert!(matches!(mean_convexity_report(&disk(&g, 8.0), &t, &clipped), Err(Error::DilationClipped(_))));
    }

    #[test]
    fn lambda_grid() {
        assert_eq!(lambda_samples(0.5, 2.0, 4), vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(lambda_samples(1.0, 3.0, 6), vec![1.0, 2.0, 3.0]);
    }
}
