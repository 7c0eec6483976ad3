//! Outward-minimality certificates: a disk passes with a positive strong
//! constant, the tangent-disks cross fails with a witness near its neck.
//!
//! cargo run --release --example certify

use std::sync::Arc;

use nonlocal_flow::energy::nonlocal_perimeter;
use nonlocal_flow::kernel::build_fractional_kernel;
use nonlocal_flow::minimality::{certify_outward_minimizing, max_strong_delta};
use nonlocal_flow::shapes::Shape;
use nonlocal_flow::{DiscreteSet, GridGeometry};

fn main() -> nonlocal_flow::Result<()> {
    let g = GridGeometry::new(1.0, &[64, 64])?;
    let table = Arc::new(build_fractional_kernel(2, 0.5, 1.0, 6.0, 1e-8)?);
    let disk = DiscreteSet::from_predicate(&g, |x| x[0].hypot(x[1]) <= 12.0);
    let omega = DiscreteSet::from_predicate(&g, |x| x[0].hypot(x[1]) <= 28.0);
    let cert = certify_outward_minimizing(&disk, &omega, &table)?;
    println!("disk: {:?}, {} graph nodes after reduction", cert.verdict, cert.stats.graph_nodes);
    println!("disk: strong constant δ* = {:.4}", max_strong_delta(&disk, &omega, &table, 1e-4)?);

    // 24 cells per unit; s close to 1 makes the gain at the neck beat the
    // tail charge on added cells.
    let a = 1.0 / 24.0;
    let g = GridGeometry::new(a, &[112, 112])?;
    let table = Arc::new(build_fractional_kernel(2, 0.9, a, 1.0, 1e-6)?);
    let cross = Shape::TangentDisksCross { scale: 1.0 }.rasterize(&g, None)?;
    let cert = certify_outward_minimizing(&cross, &DiscreteSet::flexible_region(&g), &table)?;
    println!("cross: {:?}", cert.verdict);
    if let Some(w) = &cert.witness_set {
        let before = nonlocal_perimeter(&cross, &table)?;
        let after = nonlocal_perimeter(&cross.union(w)?, &table)?;
        let far = w.iter().map(|p| g.center(p)[0].hypot(g.center(p)[1])).fold(0.0, f64::max);
        println!("cross: witness of {} cells within {:.3} of the origin", w.count(), far);
        println!("cross: Per {before:.4} -> {after:.4}");
    }
    Ok(())
}
