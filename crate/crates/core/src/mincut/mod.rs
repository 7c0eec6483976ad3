//! Exact minimization of `E(F) = Per_K(F) + Σ_{p∈F} g(p)` over sets of grid
//! cells, with optional hard labels.
//!
//! The energy is a sum of a unary term and nonnegative pair terms `w(p−q)`
//! charged when exactly one of `p, q` lies in `F`, so it is submodular and one
//! max-flow computation yields every minimizer: the inclusion-minimal one is
//! the source side of the residual network and the inclusion-maximal one is
//! the complement of the sink side.
//!
//! Capacities are integers. Every weight and unary cost is scaled by one power
//! of two and rounded once, so equal doubles map to equal integers and exact
//! ties (symmetric shapes, symmetric kernels) stay exact ties. Reported
//! energies are re-evaluated in floating point by the energy module.

mod maxflow;

use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::energy::{nonlocal_perimeter, Stencil};
use crate::error::{Error, Result};
use crate::gridset::{DiscreteSet, GridGeometry};
use crate::kernel::InteractionTable;

pub use maxflow::{FlowNetwork, FlowStats, NetworkBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    Free,
    Foreground,
    Background,
}

/// Unary costs, a kernel table and hard labels on one grid.
#[derive(Debug, Clone)]
pub struct CutProblem {
    geometry: Arc<GridGeometry>,
    table: Arc<InteractionTable>,
    unary: Vec<f64>,
    labels: Vec<Label>,
}

impl CutProblem {
    /// All cells free. Rejects negative or non-finite weights and unaries.
    pub fn new(geometry: &Arc<GridGeometry>, table: &Arc<InteractionTable>, unary: Vec<f64>) -> Result<Self> {
        crate::energy::check_table(geometry, table)?;
        if let Some((o, w)) = table.iter().find(|(_, w)| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::NegativeWeight { offset: *o, weight: w });
        }
        if !(table.tail_mass() >= 0.0 && table.tail_mass().is_finite()) {
            return Err(Error::InvalidParameter(format!("tail mass {} must be nonnegative", table.tail_mass())));
        }
        if unary.len() != geometry.len() {
            return Err(Error::GeometryMismatch(format!("{} unary costs for {} cells", unary.len(), geometry.len())));
        }
        if let Some(u) = unary.iter().find(|u| !u.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite unary cost {u}")));
        }
        Ok(Self { geometry: geometry.clone(), table: table.clone(), labels: vec![Label::Free; unary.len()], unary })
    }

    /// Pin the cells of `foreground` and `background`; a cell in both is a
    /// conflict.
    pub fn with_pins(mut self, foreground: &DiscreteSet, background: &DiscreteSet) -> Result<Self> {
        for i in 0..self.labels.len() {
            match (foreground.contains(i), background.contains(i)) {
                (true, true) => return Err(Error::PinConflict(i)),
                (true, false) => self.pin(i, Label::Foreground)?,
                (false, true) => self.pin(i, Label::Background)?,
                _ => {}
            }
        }
        Ok(self)
    }

    /// Pin one cell; re-pinning to the opposite label is a conflict.
    pub fn pin(&mut self, cell: usize, label: Label) -> Result<()> {
        let current = self.labels[cell];
        if current != Label::Free && label != Label::Free && current != label {
            return Err(Error::PinConflict(cell));
        }
        self.labels[cell] = label;
        Ok(())
    }

    pub fn geometry(&self) -> &Arc<GridGeometry> {
        &self.geometry
    }
    pub fn table(&self) -> &Arc<InteractionTable> {
        &self.table
    }
    pub fn unary(&self) -> &[f64] {
        &self.unary
    }
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn free_cells(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == Label::Free).collect()
    }

    /// `Per_K(F) + Σ_{p∈F} g(p)` in floating point.
    pub fn energy(&self, set: &DiscreteSet) -> Result<f64> {
        let per = nonlocal_perimeter(set, &self.table)?;
        Ok(per + set.iter().map(|p| self.unary[p]).sum::<f64>())
    }

    /// True if the set honors every hard label.
    pub fn respects_labels(&self, set: &DiscreteSet) -> bool {
        (0..self.labels.len()).all(|i| match self.labels[i] {
            Label::Free => true,
            Label::Foreground => set.contains(i),
            Label::Background => !set.contains(i),
        })
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct CutStats {
    pub free_cells: usize,
    /// Free cells left after fixing cells whose unary cost dominates all
    /// their pair terms.
    pub graph_nodes: usize,
    pub arcs: usize,
    pub phases: usize,
    pub scale_exponent: i32,
}

#[derive(Debug, Clone)]
pub struct CutSolution {
    pub minimal: DiscreteSet,
    pub maximal: DiscreteSet,
    /// Energy of the minimal minimizer, evaluated in floating point.
    pub energy: f64,
    pub stats: CutStats,
}

/// Quantized network over the free cells, before any reduction.
struct Quantized {
    cells: Vec<usize>,
    /// Net cost of putting a node in the foreground minus keeping it out.
    net: Vec<i64>,
    /// Undirected pair terms between free nodes, each listed once.
    pairs: Vec<(u32, u32, i64)>,
    scale_exponent: i32,
}

fn quantize(problem: &CutProblem) -> Quantized {
    let g = &problem.geometry;
    let table = &problem.table;
    let st = Stencil::new(g, table).expect("problem checked its table");
    let cells = problem.free_cells();
    let tail = table.tail_mass() * g.cell_volume();

    let bound: f64 = cells.iter().map(|&p| problem.unary[p].abs()).sum::<f64>()
        + cells.len() as f64 * (tail + table.total_weight())
        + 1.0;
    let scale_exponent = (61.0 - bound.log2()).floor().clamp(-1000.0, 1000.0) as i32;
    let scale = 2f64.powi(scale_exponent);
    let q = |x: f64| (x * scale).round() as i64;
    let qw: Vec<i64> = st.weights.iter().map(|&w| q(w)).collect();
    let qtail = q(tail);

    // Padded lattice map from position to free node (or pinned label).
    const OUTSIDE: i64 = -1;
    const FG: i64 = -2;
    const BG: i64 = -3;
    let mut slot = vec![OUTSIDE; st.lattice.len()];
    for i in 0..g.len() {
        slot[st.lattice.embed(g, i)] = match problem.labels[i] {
            Label::Foreground => FG,
            Label::Background | Label::Free => BG,
        };
    }
    for (node, &p) in cells.iter().enumerate() {
        slot[st.lattice.embed(g, p)] = node as i64;
    }

    let mut net = vec![0i64; cells.len()];
    let mut pairs = Vec::new();
    for (node, &p) in cells.iter().enumerate() {
        let base = st.lattice.embed(g, p);
        let mut fg_cost = q(problem.unary[p]) + qtail;
        let mut bg_cost = 0;
        for (k, &d) in st.deltas.iter().enumerate() {
            match slot[Stencil::at(base, d)] {
                OUTSIDE | BG => fg_cost += qw[k],
                FG => bg_cost += qw[k],
                other => {
                    if (other as usize) > node {
                        pairs.push((node as u32, other as u32, qw[k]));
                    }
                }
            }
        }
        net[node] = fg_cost - bg_cost;
    }
    Quantized { cells, net, pairs, scale_exponent }
}

/// Decision for a node fixed before the flow computation.
#[derive(Clone, Copy, PartialEq)]
enum Fixed {
    No,
    In,
    Out,
}

/// Fix nodes whose net unary cost exceeds the total weight of their free
/// pair terms: such a node has the same label in every minimizer.
fn reduce(q: &Quantized) -> (Vec<Fixed>, Vec<i64>) {
    let n = q.cells.len();
    let mut adj_start = vec![0usize; n + 1];
    for &(u, v, _) in &q.pairs {
        adj_start[u as usize + 1] += 1;
        adj_start[v as usize + 1] += 1;
    }
    for i in 0..n {
        adj_start[i + 1] += adj_start[i];
    }
    let mut fill = adj_start.clone();
    let mut adj = vec![(0u32, 0i64); adj_start[n]];
    for &(u, v, w) in &q.pairs {
        adj[fill[u as usize]] = (v, w);
        fill[u as usize] += 1;
        adj[fill[v as usize]] = (u, w);
        fill[v as usize] += 1;
    }
    let mut net = q.net.clone();
    let mut free_weight: Vec<i64> = (0..n).map(|i| adj[adj_start[i]..adj_start[i + 1]].iter().map(|e| e.1).sum()).collect();
    let mut fixed = vec![Fixed::No; n];
    let mut work: Vec<usize> = (0..n).collect();
    while let Some(u) = work.pop() {
        if fixed[u] != Fixed::No {
            continue;
        }
        let decision = if net[u] > free_weight[u] {
            Fixed::Out
        } else if net[u] < -free_weight[u] {
            Fixed::In
        } else {
            continue;
        };
        fixed[u] = decision;
        for &(v, w) in &adj[adj_start[u]..adj_start[u + 1]] {
            let v = v as usize;
            if fixed[v] != Fixed::No {
                continue;
            }
            free_weight[v] -= w;
            net[v] += if decision == Fixed::Out { w } else { -w };
            work.push(v);
        }
    }
    (fixed, net)
}

/// Minimal and maximal minimizers of the problem energy.
pub fn solve_min_cut(problem: &CutProblem) -> Result<CutSolution> {
    let q = quantize(problem);
    let (fixed, net) = reduce(&q);
    let mut node_of = vec![u32::MAX; q.cells.len()];
    let mut live = Vec::new();
    for i in 0..q.cells.len() {
        if fixed[i] == Fixed::No {
            node_of[i] = live.len() as u32;
            live.push(i);
        }
    }
    let mut b = NetworkBuilder::new(live.len());
    let (s, t) = (b.source(), b.sink());
    for (k, &i) in live.iter().enumerate() {
        if net[i] > 0 {
            b.add(k, t, net[i], 0);
        } else if net[i] < 0 {
            b.add(s, k, -net[i], 0);
        }
    }
    for &(u, v, w) in &q.pairs {
        let (nu, nv) = (node_of[u as usize], node_of[v as usize]);
        if nu != u32::MAX && nv != u32::MAX {
            b.add(nu as usize, nv as usize, w, w);
        }
    }
    let mut network = b.build();
    let flow = network.max_flow();
    let src = network.source_side();
    let snk = network.sink_side();

    let g = &problem.geometry;
    let mut minimal = DiscreteSet::empty(g);
    for i in 0..g.len() {
        if problem.labels[i] == Label::Foreground {
            minimal.insert(i);
        }
    }
    let mut maximal = minimal.clone();
    for (i, &cell) in q.cells.iter().enumerate() {
        match fixed[i] {
            Fixed::In => {
                minimal.insert(cell);
                maximal.insert(cell);
            }
            Fixed::Out => {}
            Fixed::No => {
                let k = node_of[i] as usize;
                if src[k] {
                    minimal.insert(cell);
                }
                if !snk[k] {
                    maximal.insert(cell);
                }
            }
        }
    }
    let energy = problem.energy(&minimal)?;
    Ok(CutSolution {
        minimal,
        maximal,
        energy,
        stats: CutStats {
            free_cells: q.cells.len(),
            graph_nodes: live.len(),
            arcs: network.arc_count(),
            phases: flow.phases,
            scale_exponent: q.scale_exponent,
        },
    })
}

/// DIMACS max-flow dump of the quantized problem (free cells only, pinned
/// neighbors folded into terminal arcs). Nodes are numbered from 1; the source
/// and sink come last.
pub fn write_dimacs<W: Write>(problem: &CutProblem, mut out: W) -> Result<()> {
    let q = quantize(problem);
    let n = q.cells.len();
    let (s, t) = (n + 1, n + 2);
    let terminal = q.net.iter().filter(|&&c| c != 0).count();
    writeln!(out, "c grid cut problem, capacities scaled by 2^{}", q.scale_exponent)?;
    writeln!(out, "p max {} {}", n + 2, terminal + 2 * q.pairs.len())?;
    writeln!(out, "n {s} s")?;
    writeln!(out, "n {t} t")?;
    for (i, &c) in q.net.iter().enumerate() {
        if c > 0 {
            writeln!(out, "a {} {t} {c}", i + 1)?;
        } else if c < 0 {
            writeln!(out, "a {s} {} {}", i + 1, -c)?;
        }
    }
    for &(u, v, w) in &q.pairs {
        writeln!(out, "a {} {} {w}", u + 1, v + 1)?;
        writeln!(out, "a {} {} {w}", v + 1, u + 1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build_fractional_kernel, KernelKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frac() -> Arc<InteractionTable> {
        Arc::new(build_fractional_kernel(2, 0.5, 1.0, 3.0, 1e-8).unwrap())
    }

    fn decoupled() -> Arc<InteractionTable> {
        Arc::new(InteractionTable::from_parts(2, 1.0, 1.0, vec![([1, 0, 0], 0.0), ([-1, 0, 0], 0.0)], 0.0, KernelKind::Custom).unwrap())
    }

    #[test]
    fn strongly_attracting_unary_fills_free_cells() {
        let g = GridGeometry::new(1.0, &[8, 8]).unwrap();
        let t = frac();
        let p = CutProblem::new(&g, &t, vec![-1e3; g.len()]).unwrap();
        let sol = solve_min_cut(&p).unwrap();
        assert_eq!(sol.minimal, DiscreteSet::full(&g));
        assert_eq!(sol.maximal, DiscreteSet::full(&g));
    }

    #[test]
    fn decoupled_thresholding() {
        let g = GridGeometry::new(1.0, &[6, 6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let unary: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
        let p = CutProblem::new(&g, &decoupled(), unary.clone()).unwrap();
        let sol = solve_min_cut(&p).unwrap();
        for i in 0..g.len() {
            assert_eq!(sol.minimal.contains(i), unary[i] < 0.0);
            assert_eq!(sol.maximal.contains(i), unary[i] <= 0.0);
        }
    }

    #[test]
    fn pins_are_respected_and_conflicts_rejected() {
        let g = GridGeometry::new(1.0, &[6, 6]).unwrap();
        let t = frac();
        let fg = DiscreteSet::from_indices(&g, [14]);
        let bg = DiscreteSet::from_indices(&g, [15]);
        let p = CutProblem::new(&g, &t, vec![-1e3; g.len()]).unwrap().with_pins(&fg, &bg).unwrap();
        let sol = solve_min_cut(&p).unwrap();
        assert!(p.respects_labels(&sol.minimal) && p.respects_labels(&sol.maximal));
        let both = DiscreteSet::from_indices(&g, [14, 15]);
        let err = CutProblem::new(&g, &t, vec![0.0; g.len()]).unwrap().with_pins(&both, &bg);
        assert!(matches!(err, Err(Error::PinConflict(15))));
    }

    #[test]
    fn negative_weights_rejected() {
        let g = GridGeometry::new(1.0, &[4, 4]).unwrap();
        let t = Arc::new(InteractionTable::from_parts(2, 1.0, 1.0, vec![([1, 0, 0], -1.0), ([-1, 0, 0], -1.0)], 0.0, KernelKind::Custom).unwrap());
        assert!(matches!(CutProblem::new(&g, &t, vec![0.0; 16]), Err(Error::NegativeWeight { .. })));
    }

    #[test]
    fn minimal_is_inside_maximal_with_equal_energy() {
        let g = GridGeometry::new(1.0, &[10, 10]).unwrap();
        let t = frac();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let unary: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-12.0..4.0)).collect();
            let p = CutProblem::new(&g, &t, unary).unwrap();
            let sol = solve_min_cut(&p).unwrap();
            assert!(sol.minimal.is_subset(&sol.maximal));
            let e_max = p.energy(&sol.maximal).unwrap();
            assert!((e_max - sol.energy).abs() <= 1e-9 * sol.energy.abs().max(1.0));
        }
    }

    #[test]
    fn dimacs_header_counts() {
        let g = GridGeometry::new(1.0, &[4, 4]).unwrap();
        let p = CutProblem::new(&g, &frac(), vec![-3.0; 16]).unwrap();
        let mut buf = Vec::new();
        write_dimacs(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().find(|l| l.starts_with("p ")).unwrap();
        let arcs = text.lines().filter(|l| l.starts_with("a ")).count();
        assert_eq!(header, format!("p max 18 {arcs}"));
    }
}
