//! Minimize a cut energy directly and compare with exhaustive enumeration.
//!
//! cargo run --release --example min_cut

use std::sync::Arc;

use nonlocal_flow::kernel::build_fractional_kernel;
use nonlocal_flow::mincut::{solve_min_cut, CutProblem, Label};
use nonlocal_flow::oracle::{brute_force_minimizer, EnumerationOrder};
use nonlocal_flow::GridGeometry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> nonlocal_flow::Result<()> {
    let g = GridGeometry::new(1.0, &[5, 5])?;
    let table = Arc::new(build_fractional_kernel(2, 0.5, 1.0, 3.0, 1e-8)?);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let unary: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-2.0..0.5) * table.total_weight()).collect();
    let mut problem = CutProblem::new(&g, &table, unary)?;
    // Leave 16 cells free so enumeration stays cheap.
    for c in 0..9 {
        problem.pin(c, if c % 2 == 0 { Label::Foreground } else { Label::Background })?;
    }

    let cut = solve_min_cut(&problem)?;
    let brute = brute_force_minimizer(&problem, EnumerationOrder::Gray)?;
    println!("max-flow:    energy {:.6}, minimal {:?}", cut.energy, cut.minimal.iter().collect::<Vec<_>>());
    println!("enumeration: energy {:.6}, {} optimal sets", brute.energy, brute.optima.len());
    println!("minimal agrees: {}, maximal agrees: {}", cut.minimal == brute.intersection, cut.maximal == brute.union);
    Ok(())
}
