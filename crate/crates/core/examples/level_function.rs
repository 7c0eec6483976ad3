//! Evolve a whole function by moving each of its superlevel sets, and check
//! that the superlevel sets stay nested.
//!
//! cargo run --release --example level_function

use std::sync::Arc;

use nonlocal_flow::atw::evolve_level_function;
use nonlocal_flow::gridset::signed_distance;
use nonlocal_flow::kernel::build_fractional_kernel;
use nonlocal_flow::shapes::Shape;
use nonlocal_flow::GridGeometry;

fn main() -> nonlocal_flow::Result<()> {
    let g = GridGeometry::new(1.0, &[64, 64])?;
    let table = Arc::new(build_fractional_kernel(2, 0.5, 1.0, 6.0, 1e-8)?);
    let square = Shape::ConvexPolygon { vertices: vec![[-14.0, -14.0], [14.0, -14.0], [14.0, 14.0], [-14.0, 14.0]] }.rasterize(&g, None)?;
    // Signed distance, quantized to a handful of levels.
    let u0 = signed_distance(&square).quantized(4.0)?;
    println!("levels: {:?}", u0.levels());

    let out = evolve_level_function(&u0, 1.0, 3, &table)?;
    for &l in &out.levels {
        println!("{{u0 > {l:>5}}}: {:>5} cells -> {{u > {l:>5}}}: {:>5} cells", u0.superlevel(l).count(), out.field.superlevel(l).count());
    }
    let nested = out.levels.windows(2).all(|w| out.field.superlevel(w[1]).is_subset(&out.field.superlevel(w[0])));
    println!("nested: {nested}");
    Ok(())
}
