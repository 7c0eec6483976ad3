//! Brute-force references.
//!
//! These share only the interaction table with the main code path: energies
//! are recomputed from a dense pair-weight matrix, and perimeters from a full
//! double sum over cell pairs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gridset::DiscreteSet;
use crate::kernel::{InteractionTable, Offset};
use crate::mincut::{CutProblem, Label};

pub const MAX_FREE_CELLS: usize = 18;
pub const MAX_PERIMETER_CELLS: usize = 64 * 64;

/// Relative slack under which two enumerated energies count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnumerationOrder {
    Ascending,
    Gray,
}

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub energy: f64,
    /// Every optimal set (pinned foreground included).
    pub optima: Vec<DiscreteSet>,
    pub intersection: DiscreteSet,
    pub union: DiscreteSet,
    /// Energy of every subset of the free cells, indexed by bit mask.
    pub energies: Vec<f64>,
}

/// Dense energy model on the free cells plus the pinned foreground.
struct Dense {
    free: Vec<usize>,
    /// Energy contribution of the pinned foreground alone.
    base: f64,
    /// Linear term of each free cell given the pinned cells.
    linear: Vec<f64>,
    /// `w(p − q)` between free cells.
    pair: Vec<f64>,
}

fn offset_between(problem: &CutProblem, p: usize, q: usize) -> Offset {
    let g = problem.geometry();
    let (a, b) = (g.coords(p), g.coords(q));
    let mut v = [0; 3];
    for d in 0..g.dim() {
        v[d] = b[d] as i32 - a[d] as i32;
    }
    v
}

fn dense(problem: &CutProblem) -> Dense {
    let g = problem.geometry();
    let table = problem.table();
    let map = table.weight_map();
    let w = |p: usize, q: usize| map.get(&offset_between(problem, p, q)).copied().unwrap_or(0.0);
    let total = table.total_weight();
    let own = table.tail_mass() * g.cell_volume();
    let fg: Vec<usize> = (0..g.len()).filter(|&i| problem.labels()[i] == Label::Foreground).collect();
    let free = problem.free_cells();
    let unary = problem.unary();

    // E(F) = Σ_{p∈F} (g(p) + τ a^n + Σ_v w(v)) − Σ_{p≠q ∈ F} w(p − q).
    let mut base = 0.0;
    for &p in &fg {
        base += unary[p] + own + total;
        for &q in &fg {
            if q != p {
                base -= w(p, q);
            }
        }
    }
    let linear = free
        .iter()
        .map(|&p| {
            let mut l = unary[p] + own + total;
            for &q in &fg {
                l -= 2.0 * w(p, q);
            }
            l
        })
        .collect();
    let n = free.len();
    let mut pair = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pair[i * n + j] = w(free[i], free[j]);
            }
        }
    }
    Dense { free, base, linear, pair }
}

impl Dense {
    /// Same summation order for a given mask regardless of how it was reached.
    fn energy(&self, mask: u32) -> f64 {
        let n = self.free.len();
        let mut e = self.base;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                e += self.linear[i];
                for j in 0..n {
                    if j != i && mask >> j & 1 == 1 {
                        e -= self.pair[i * n + j];
                    }
                }
            }
        }
        e
    }
}

/// Exhaustive minimization of the problem energy over all subsets of its
/// free cells.
pub fn brute_force_minimizer(problem: &CutProblem, order: EnumerationOrder) -> Result<BruteForceResult> {
    let free = problem.free_cells();
    if free.len() > MAX_FREE_CELLS {
        return Err(Error::TooManyFreeCells { count: free.len(), max: MAX_FREE_CELLS });
    }
    let model = dense(problem);
    let count = 1u32 << free.len();
    let mut energies = vec![0.0; count as usize];
    for k in 0..count {
        let mask = match order {
            EnumerationOrder::Ascending => k,
            EnumerationOrder::Gray => k ^ (k >> 1),
        };
        energies[mask as usize] = model.energy(mask);
    }
    let best = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = TIE_TOLERANCE * best.abs().max(1.0);
    let g = problem.geometry();
    let mut pinned = DiscreteSet::empty(g);
    for i in 0..g.len() {
        if problem.labels()[i] == Label::Foreground {
            pinned.insert(i);
        }
    }
    let to_set = |mask: u32| {
        let mut s = pinned.clone();
        for (i, &c) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.insert(c);
            }
        }
        s
    };
    let masks: Vec<u32> = (0..count).filter(|&m| energies[m as usize] <= best + slack).collect();
    let inter = masks.iter().fold(u32::MAX, |a, &m| a & m);
    let uni = masks.iter().fold(0, |a, &m| a | m);
    Ok(BruteForceResult {
        energy: best,
        optima: masks.iter().map(|&m| to_set(m)).collect(),
        intersection: to_set(inter & (count - 1)),
        union: to_set(uni),
        energies,
    })
}

/// `Per_K(E)` by a full double sum over cell pairs of the box, plus every
/// offset that leaves the box, plus the tail.
pub fn brute_force_perimeter(set: &DiscreteSet, table: &InteractionTable) -> Result<f64> {
    let g = set.geometry();
    if g.len() > MAX_PERIMETER_CELLS {
        return Err(Error::GridTooLarge { cells: g.len(), max: MAX_PERIMETER_CELLS });
    }
    crate::energy::check_table(g, table)?;
    let map = table.weight_map();
    let mut total = 0.0;
    for p in set.iter() {
        let cp = g.coords(p);
        for q in 0..g.len() {
            if set.contains(q) {
                continue;
            }
            let cq = g.coords(q);
            let mut v = [0; 3];
            for d in 0..g.dim() {
                v[d] = cq[d] as i32 - cp[d] as i32;
            }
            if let Some(w) = map.get(&v) {
                total += w;
            }
        }
        for (v, w) in table.iter() {
            if g.shifted(p, v).is_none() {
                total += w;
            }
        }
    }
    Ok(total + table.tail_mass() * set.count() as f64 * g.cell_volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridset::GridGeometry;
    use crate::kernel::{build_fractional_kernel, KernelKind};
    use crate::mincut::solve_min_cut;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn small_problem(seed: u64, pins: bool) -> CutProblem {
        let g = GridGeometry::new(1.0, &[5, 5]).unwrap();
        let t = Arc::new(build_fractional_kernel(2, 0.5, 1.0, 3.0, 1e-8).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unary = (0..g.len()).map(|_| rng.gen_range(-15.0..5.0)).collect();
        let mut p = CutProblem::new(&g, &t, unary).unwrap();
        // Keep 12 cells free.
        for i in 12..g.len() {
            let label = if pins && rng.gen_bool(0.3) { Label::Foreground } else { Label::Background };
            p.pin(i, label).unwrap();
        }
        p
    }

    #[test]
    fn single_free_cell() {
        let g = GridGeometry::new(1.0, &[4, 4]).unwrap();
        let t = Arc::new(build_fractional_kernel(2, 0.5, 1.0, 3.0, 1e-8).unwrap());
        let mut p = CutProblem::new(&g, &t, vec![-100.0; 16]).unwrap();
        for i in 1..16 {
            p.pin(i, Label::Background).unwrap();
        }
        let r = brute_force_minimizer(&p, EnumerationOrder::Ascending).unwrap();
        assert_eq!(r.energies.len(), 2);
        assert_eq!(r.energies[0], 0.0);
        assert_eq!(r.optima.len(), 1);
        assert!(r.optima[0].contains(0));
    }

    #[test]
    fn orders_agree_bitwise() {
        let p = small_problem(3, true);
        let a = brute_force_minimizer(&p, EnumerationOrder::Ascending).unwrap();
        let b = brute_force_minimizer(&p, EnumerationOrder::Gray).unwrap();
        assert_eq!(a.energies.iter().map(|e| e.to_bits()).collect::<Vec<_>>(), b.energies.iter().map(|e| e.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn decoupled_instance_thresholds() {
        let g = GridGeometry::new(1.0, &[4, 4]).unwrap();
        let t = Arc::new(InteractionTable::from_parts(2, 1.0, 1.0, vec![], 0.0, KernelKind::Custom).unwrap());
        let unary: Vec<f64> = (0..16).map(|i| if i % 3 == 0 { -1.0 } else { 1.0 }).collect();
        let r = brute_force_minimizer(&CutProblem::new(&g, &t, unary.clone()).unwrap(), EnumerationOrder::Gray).unwrap();
        for i in 0..16 {
            assert_eq!(r.intersection.contains(i), unary[i] < 0.0);
        }
    }

    #[test]
    fn agrees_with_solver_on_random_instances() {
        for seed in 0..10 {
            let p = small_problem(seed, seed % 2 == 0);
            let r = brute_force_minimizer(&p, EnumerationOrder::Ascending).unwrap();
            let s = solve_min_cut(&p).unwrap();
            assert!((r.energy - s.energy).abs() <= 1e-9 * r.energy.abs().max(1.0), "{} vs {}", r.energy, s.energy);
            assert_eq!(s.minimal, r.intersection);
            assert_eq!(s.maximal, r.union);
        }
    }

    #[test]
    fn perimeter_reference() {
        let g = GridGeometry::new(1.0, &[10, 10]).unwrap();
        let t = build_fractional_kernel(2, 0.5, 1.0, 4.0, 1e-8).unwrap();
        assert_eq!(brute_force_perimeter(&DiscreteSet::empty(&g), &t).unwrap(), 0.0);
        let one = DiscreteSet::from_indices(&g, [0]);
        let expected = t.total_weight() + t.tail_mass();
        assert!((brute_force_perimeter(&one, &t).unwrap() - expected).abs() < 1e-12 * expected);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let e = DiscreteSet::from_cells(&g, (0..g.len()).map(|_| rng.gen_bool(0.5)).collect()).unwrap();
        let fast = crate::energy::nonlocal_perimeter(&e, &t).unwrap();
        let slow = brute_force_perimeter(&e, &t).unwrap();
        assert!((fast - slow).abs() <= 1e-9 * slow);
        let big = GridGeometry::new(1.0, &[65, 64]).unwrap();
        assert!(matches!(brute_force_perimeter(&DiscreteSet::empty(&big), &t), Err(Error::GridTooLarge { .. })));
    }
}
