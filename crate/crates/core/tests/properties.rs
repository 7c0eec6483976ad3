use std::sync::{Arc, OnceLock};

use nonlocal_flow::atw::{atw_step, atw_step_both, step_problem, Mode};
use nonlocal_flow::energy::{coarea_decompose, face_curvature, jk_functional, k_curvature, nonlocal_perimeter};
use nonlocal_flow::gridset::{boundary_cells, DiscreteSet, GridGeometry, ScalarField};
use nonlocal_flow::kernel::{build_compact_kernel, build_fractional_kernel, InteractionTable, RadialProfile};
use nonlocal_flow::mincut::{solve_min_cut, CutProblem, Label};
use nonlocal_flow::minimality::{certify_outward_minimizing, max_strong_delta};
use nonlocal_flow::oracle::{brute_force_minimizer, brute_force_perimeter, EnumerationOrder};
use proptest::prelude::*;

fn tables() -> &'static [Arc<InteractionTable>] {
    static T: OnceLock<Vec<Arc<InteractionTable>>> = OnceLock::new();
    T.get_or_init(|| {
        vec![
            Arc::new(build_fractional_kernel(2, 0.5, 1.0, 3.0, 1e-8).unwrap()),
            Arc::new(build_fractional_kernel(2, 0.2, 0.5, 1.5, 1e-8).unwrap()),
            Arc::new(build_compact_kernel(2, &RadialProfile::indicator(2.5).unwrap(), 1.0, 1e-9).unwrap()),
            Arc::new(build_compact_kernel(2, &RadialProfile::new(vec![0.0, 2.0], vec![1.0, 0.0]).unwrap(), 1.0, 1e-9).unwrap()),
        ]
    })
}

fn compact_tables() -> &'static [Arc<InteractionTable>] {
    &tables()[2..]
}

fn grid(n: usize, table: &InteractionTable) -> Arc<GridGeometry> {
    GridGeometry::new(table.spacing(), &[n, n]).unwrap()
}

fn cells(n: usize) -> impl Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), n * n)
}

fn set(g: &Arc<GridGeometry>, bits: Vec<bool>) -> DiscreteSet {
    DiscreteSet::from_cells(g, bits).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perimeter_is_submodular(k in 0usize..4, a in cells(10), b in cells(10)) {
        let t = &tables()[k];
        let g = grid(10, t);
        let (a, b) = (set(&g, a), set(&g, b));
        let lhs = nonlocal_perimeter(&a, t).unwrap() + nonlocal_perimeter(&b, t).unwrap();
        let rhs = nonlocal_perimeter(&a.intersection(&b).unwrap(), t).unwrap() + nonlocal_perimeter(&a.union(&b).unwrap(), t).unwrap();
        prop_assert!(lhs >= rhs - 1e-9 * lhs.abs(), "{lhs} < {rhs}");
    }

    #[test]
    fn perimeter_matches_double_sum(k in 0usize..4, bits in cells(9)) {
        let t = &tables()[k];
        let e = set(&grid(9, t), bits);
        let fast = nonlocal_perimeter(&e, t).unwrap();
        let slow = brute_force_perimeter(&e, t).unwrap();
        prop_assert!(rel(fast, slow) <= 1e-9);
    }

    #[test]
    fn indicator_functional_is_perimeter(k in 0usize..4, bits in cells(10)) {
        let t = &tables()[k];
        let e = set(&grid(10, t), bits);
        prop_assert_eq!(jk_functional(&e.indicator(), t).unwrap(), nonlocal_perimeter(&e, t).unwrap());
    }

    #[test]
    fn layer_cake_reconstructs_functional(k in 0usize..4, vals in proptest::collection::vec(-3i32..4, 100)) {
        let t = &tables()[k];
        let g = grid(10, t);
        let field = ScalarField::new(&g, vals.iter().map(|&v| v as f64).collect()).unwrap();
        let c = coarea_decompose(&field, t).unwrap();
        let j = jk_functional(&field, t).unwrap();
        prop_assert!(rel(c.reconstructed, j) <= 1e-10, "{} vs {j}", c.reconstructed);
    }

    #[test]
    fn curvature_is_monotone_under_inclusion(k in 0usize..4, a in cells(12), b in cells(12)) {
        let t = &tables()[k];
        let g = grid(12, t);
        let e = set(&g, a);
        let f = e.union(&set(&g, b)).unwrap();
        let bf = boundary_cells(&f);
        let common: Vec<usize> = boundary_cells(&e).into_iter().filter(|p| bf.contains(p)).collect();
        let he = k_curvature(&e, t, Some(&common)).unwrap();
        let hf = k_curvature(&f, t, Some(&common)).unwrap();
        for (x, y) in he.iter().zip(&hf) {
            prop_assert!(x.value >= y.value, "cell {}: {} < {}", x.cell, x.value, y.value);
        }
    }

    #[test]
    fn face_curvature_is_antisymmetric(k in 0usize..2, bits in cells(16)) {
        let t = &compact_tables()[k];
        let g = grid(16, t);
        let e = set(&g, bits);
        let ec = e.complement();
        let margin = t.reach() + 1;
        let interior = |i: usize| {
            let c = g.coords(i);
            (0..2).all(|d| c[d] >= margin && c[d] + margin < 16)
        };
        for p in e.iter().filter(|&p| interior(p)) {
            for q in g.face_neighbors(p).0 {
                if !e.contains(q) && interior(q) {
                    prop_assert_eq!(face_curvature(&e, t, p, q).unwrap(), -face_curvature(&ec, t, q, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn curvature_is_the_largest_face_value(k in 0usize..4, bits in cells(10)) {
        let t = &tables()[k];
        let g = grid(10, t);
        let e = set(&g, bits);
        for s in k_curvature(&e, t, None).unwrap() {
            let (nbrs, leaves_box) = g.face_neighbors(s.cell);
            let faces: Vec<f64> = nbrs.iter().filter(|&&q| !e.contains(q)).map(|&q| face_curvature(&e, t, s.cell, q).unwrap()).collect();
            let best = faces.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if leaves_box {
                prop_assert!(s.value >= best);
            } else {
                prop_assert_eq!(s.value, best);
            }
        }
    }

    #[test]
    fn translation_invariance(k in 0usize..4, bits in proptest::collection::vec(any::<bool>(), 16), dx in -3i32..4, dy in -3i32..4) {
        let t = &tables()[k];
        let g = grid(16, t);
        // A 4×4 pattern placed away from the rim, and its shifted copy.
        let e = DiscreteSet::from_indices(&g, (0..16).filter(|&i| bits[i]).map(|i| g.index([6 + i % 4, 6 + i / 4, 0])));
        let moved = e.translated(&[dx, dy, 0]);
        prop_assert_eq!(nonlocal_perimeter(&e, t).unwrap(), nonlocal_perimeter(&moved, t).unwrap());
        let he = k_curvature(&e, t, None).unwrap();
        let hm = k_curvature(&moved, t, None).unwrap();
        prop_assert_eq!(he.len(), hm.len());
        for (x, y) in he.iter().zip(&hm) {
            prop_assert_eq!(g.shifted(x.cell, &[dx, dy, 0]), Some(y.cell));
            prop_assert_eq!(x.value, y.value);
        }
    }

    #[test]
    fn minimizers_are_monotone_in_the_unary(k in 0usize..4, base in proptest::collection::vec(-8.0f64..4.0, 36), bump in proptest::collection::vec(0.0f64..3.0, 36)) {
        let t = &tables()[k];
        let g = grid(6, t);
        let low = CutProblem::new(&g, t, base.clone()).unwrap();
        let high = CutProblem::new(&g, t, base.iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
        let (sl, sh) = (solve_min_cut(&low).unwrap(), solve_min_cut(&high).unwrap());
        prop_assert!(sh.minimal.is_subset(&sl.minimal));
        prop_assert!(sh.maximal.is_subset(&sl.maximal));
        prop_assert!(sl.minimal.is_subset(&sl.maximal));
    }

    #[test]
    fn step_is_monotone_in_the_set(k in 0usize..4, a in cells(12), b in cells(12), h in 0.2f64..4.0) {
        let t = &tables()[k];
        let g = grid(12, t);
        let e = set(&g, a);
        let f = e.union(&set(&g, b)).unwrap();
        for mode in [Mode::Minimal, Mode::Maximal] {
            let te = atw_step(&e, h, t, mode).unwrap();
            let tf = atw_step(&f, h, t, mode).unwrap();
            prop_assert!(te.is_subset(&tf));
        }
    }

    #[test]
    fn step_optima_lie_between_the_extremes(k in 0usize..4, bits in proptest::collection::vec(any::<bool>(), 16), h in 0.2f64..4.0) {
        let t = &tables()[k];
        let g0 = grid(8, t);
        // Flexible region: the central 4×4 block.
        let mask = (0..64).map(|i| (2..6).contains(&(i % 8)) && (2..6).contains(&(i / 8))).collect();
        let g = g0.with_flexible(mask).unwrap();
        let e = DiscreteSet::from_indices(&g, (0..16).filter(|&i| bits[i]).map(|i| g.index([2 + i % 4, 2 + i / 4, 0])));
        let both = atw_step_both(&e, h, t).unwrap();
        let brute = brute_force_minimizer(&step_problem(&e, h, t).unwrap(), EnumerationOrder::Ascending).unwrap();
        prop_assert_eq!(&both.minimal, &brute.intersection);
        prop_assert_eq!(&both.maximal, &brute.union);
        for o in &brute.optima {
            prop_assert!(both.minimal.is_subset(o) && o.is_subset(&both.maximal));
        }
    }

    #[test]
    fn witnesses_really_improve(k in 0usize..4, bits in proptest::collection::vec(any::<bool>(), 36)) {
        let t = &tables()[k];
        let g = grid(12, t);
        let e = DiscreteSet::from_indices(&g, (0..36).filter(|&i| bits[i]).map(|i| g.index([3 + i % 6, 3 + i / 6, 0])));
        let omega = DiscreteSet::flexible_region(&g);
        let cert = certify_outward_minimizing(&e, &omega, t).unwrap();
        if let Some(w) = &cert.witness_set {
            let grown = e.union(w).unwrap();
            prop_assert!(brute_force_perimeter(&grown, t).unwrap() < brute_force_perimeter(&e, t).unwrap());
            prop_assert!(cert.gain > 0.0 && cert.localized_gain > 0.0);
        } else {
            prop_assert!(cert.witness.is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// A one-cell change moves the strong constant by at most twice the
    /// largest single-cell perimeter change per unit volume.
    #[test]
    fn strong_constant_is_stable(k in 0usize..4, r in 2.0f64..3.5, pick in 0usize..1000, add in any::<bool>()) {
        let t = &tables()[k];
        let g = grid(14, t);
        let a = t.spacing();
        let e = DiscreteSet::from_predicate(&g, |x| x[0] * x[0] + x[1] * x[1] <= (r * a) * (r * a));
        let omega = DiscreteSet::flexible_region(&g);
        let tol = 1e-4;
        let Ok(d0) = max_strong_delta(&e, &omega, t, tol) else { return Ok(()) };
        let candidates: Vec<usize> = if add {
            (0..g.len()).filter(|&i| !e.contains(i) && omega.contains(i) && !g.on_rim(i)).filter(|&i| {
                let c = g.coords(i);
                (2..12).contains(&c[0]) && (2..12).contains(&c[1])
            }).collect()
        } else {
            e.iter().collect()
        };
        let mut f = e.clone();
        f.set(candidates[pick % candidates.len()], add);
        let Ok(d1) = max_strong_delta(&f, &omega, t, tol) else { return Ok(()) };
        let bound = 2.0 * (t.total_weight() + t.tail_mass() * t.cell_volume()) / t.cell_volume() + 2.0 * tol;
        prop_assert!((d1 - d0).abs() <= bound, "{d0} -> {d1}, bound {bound}");
    }
}

#[test]
fn pinned_cells_keep_their_labels() {
    let t = &tables()[0];
    let g = grid(6, t);
    let mut p = CutProblem::new(&g, t, vec![-50.0; 36]).unwrap();
    p.pin(7, Label::Background).unwrap();
    let s = solve_min_cut(&p).unwrap();
    assert!(!s.minimal.contains(7) && !s.maximal.contains(7));
    assert_eq!(s.minimal.count(), 35);
}
