//! Nonlocal mean convexity of a set and of its dilations `E^λ`.
//!
//! cargo run --release --example convexity

use nonlocal_flow::kernel::build_fractional_kernel;
use nonlocal_flow::minimality::{mean_convexity_report, ConvexityOptions, ConvexityReport, Focus};
use nonlocal_flow::shapes::Shape;
use nonlocal_flow::{DiscreteSet, GridGeometry};

fn show(name: &str, r: &ConvexityReport) {
    println!("{name}: min H = {:?}, plain {}, regular {} (c ≥ {:.2}), strong {} (δ = {:.3})", r.min_curvature, r.plain, r.regular, r.regular_c, r.strong, r.strong_delta);
    for d in &r.dilations {
        println!("  λ = {:.4}: min H = {:>9.3?}, near focus {:>9.3?}", d.lambda, d.min_curvature, d.focus_min_curvature);
    }
}

fn main() -> nonlocal_flow::Result<()> {
    let g = GridGeometry::new(1.0, &[64, 64])?;
    let table = build_fractional_kernel(2, 0.5, 1.0, 8.0, 1e-8)?;
    let disk = DiscreteSet::from_predicate(&g, |x| x[0].hypot(x[1]) <= 14.0);
    let opts = ConvexityOptions { lambda_max: 4.0, lambda_count: 4, curv_tol: None, focus: None };
    show("disk", &mean_convexity_report(&disk, &table, &opts)?);

    let a = 1.0 / 24.0;
    let g = GridGeometry::new(a, &[112, 112])?;
    let table = build_fractional_kernel(2, 0.9, a, 1.0, 1e-6)?;
    let cross = Shape::TangentDisksCross { scale: 1.0 }.rasterize(&g, None)?;
    let opts = ConvexityOptions { lambda_max: 4.0 * a, lambda_count: 4, curv_tol: None, focus: Some(Focus { center: [0.0; 3], radius: 6.0 * a }) };
    show("tangent-disks cross", &mean_convexity_report(&cross, &table, &opts)?);
    Ok(())
}
