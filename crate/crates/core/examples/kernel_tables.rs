//! Build interaction tables and watch how the perimeter of a disk depends on
//! the truncation radius.
//!
//! cargo run --release --example kernel_tables

use nonlocal_flow::energy::nonlocal_perimeter;
use nonlocal_flow::kernel::{build_compact_kernel, build_fractional_kernel, RadialProfile};
use nonlocal_flow::{DiscreteSet, GridGeometry};

fn main() -> nonlocal_flow::Result<()> {
    let g = GridGeometry::new(1.0, &[96, 96])?;
    let disk = DiscreteSet::from_predicate(&g, |x| x[0].hypot(x[1]) <= 20.0);

    println!("fractional s = 0.5");
    println!("{:>6} {:>8} {:>10} {:>12}", "R_K", "offsets", "tail", "Per(disk)");
    for r in [4.0, 8.0, 16.0, 32.0] {
        let t = build_fractional_kernel(2, 0.5, 1.0, r, 1e-8)?;
        println!("{r:>6} {:>8} {:>10.4} {:>12.3}", t.len(), t.tail_mass(), nonlocal_perimeter(&disk, &t)?);
    }

    // A hat profile: K(r) = 1 − r/6 for r < 6.
    let hat = RadialProfile::new(vec![0.0, 6.0], vec![1.0, 0.0])?;
    let t = build_compact_kernel(2, &hat, 1.0, 1e-8)?;
    println!("\ncompact hat, support 6: {} offsets, tail {}", t.len(), t.tail_mass());
    println!("w(1,0) = {:.5}, w(3,4) = {:.5}, w(6,0) = {:.5}", t.weight([1, 0, 0]), t.weight([3, 4, 0]), t.weight([6, 0, 0]));
    println!("Per(disk) = {:.3}", nonlocal_perimeter(&disk, &t)?);
    Ok(())
}
