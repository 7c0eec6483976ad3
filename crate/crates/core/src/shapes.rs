//! Continuum shapes and their rasterization.
//!
//! A cell belongs to the rasterized set iff its center lies in the closed
//! continuum shape. Every shape is given in physical coordinates, centered on
//! the grid convention `x = (i + 1/2 − N/2) a`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridset::{io, DiscreteSet, GridGeometry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Shape {
    /// Closed ball; `center` has one entry per grid dimension.
    Disk { center: Vec<f64>, radius: f64 },
    /// Convex polygon in 2D, vertices in either orientation.
    ConvexPolygon { vertices: Vec<[f64; 2]> },
    /// `{x : x·normal ≥ offset}` with the normal taken as given (not normalized).
    HalfPlane { normal: Vec<f64>, offset: f64 },
    /// `G₊ ∪ G₋`, where `G₊` is the convex hull of `B((−1, 1), 1)` with the
    /// origin and `G₋` its mirror image through the origin, scaled so that one
    /// unit measures `scale` in physical length.
    TangentDisksCross { scale: f64 },
    /// `Q_r = {|x₂| ≤ r, |x₁| ≤ |x₂|}` turned by 45° so that its axis runs
    /// along `(1, 1)`: it fills the two empty quadrants of the cross near
    /// the origin, `{x₁ x₂ ≥ 0, |x₁ + x₂| ≤ √2 r}`.
    Wedge { r: f64 },
    Union { parts: Vec<Shape> },
    /// Bitmap with the grid's extents; `path` is resolved against the config
    /// directory when relative.
    Pbm { path: PathBuf },
}

/// `p` in the convex hull of the closed ball `B(c, ρ)` and the origin.
///
/// The hull is the union of the balls `B(t c, t ρ)` for `t ∈ [0, 1]`, so this
/// asks whether `|p − t c|² ≤ t² ρ²` for some such `t`.
fn in_cone_hull(p: [f64; 2], c: [f64; 2], rho: f64) -> bool {
    let pc = p[0] * c[0] + p[1] * c[1];
    let pp = p[0] * p[0] + p[1] * p[1];
    let a = c[0] * c[0] + c[1] * c[1] - rho * rho;
    if pp == 0.0 {
        return true;
    }
    let disc = pc * pc - a * pp;
    if disc < 0.0 || pc < 0.0 {
        return false;
    }
    // Smallest root of a t² − 2 (p·c) t + |p|².
    (pc - disc.sqrt()) / a <= 1.0
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} must be finite")))
    }
}

impl Shape {
    /// Checks parameters against a grid dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let planar = |name: &str| {
            if dim == 2 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} is a 2D shape, grid has dimension {dim}")))
            }
        };
        match self {
            Shape::Disk { center, radius } => {
                if center.len() != dim {
                    return Err(Error::InvalidParameter(format!("disk center has {} coordinates, grid has dimension {dim}", center.len())));
                }
                check_finite(center, "disk center")?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidParameter(format!("disk radius must be positive, got {radius}")));
                }
            }
            Shape::ConvexPolygon { vertices } => {
                planar("convex-polygon")?;
                if vertices.len() < 3 {
                    return Err(Error::InvalidParameter("polygon needs at least 3 vertices".into()));
                }
                check_finite(&vertices.iter().flatten().copied().collect::<Vec<_>>(), "polygon vertices")?;
                let turns: Vec<f64> = (0..vertices.len()).map(|i| polygon_turn(vertices, i)).collect();
                let pos = turns.iter().any(|&t| t > 0.0);
                let neg = turns.iter().any(|&t| t < 0.0);
                if pos == neg {
                    return Err(Error::InvalidParameter("polygon is not strictly convex".into()));
                }
            }
            Shape::HalfPlane { normal, offset } => {
                if normal.len() != dim {
                    return Err(Error::InvalidParameter(format!("half-plane normal has {} coordinates, grid has dimension {dim}", normal.len())));
                }
                check_finite(normal, "half-plane normal")?;
                check_finite(&[*offset], "half-plane offset")?;
                if normal.iter().all(|&v| v == 0.0) {
                    return Err(Error::InvalidParameter("half-plane normal is zero".into()));
                }
            }
            Shape::TangentDisksCross { scale } => {
                planar("tangent-disks-cross")?;
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(Error::InvalidParameter(format!("cross scale must be positive, got {scale}")));
                }
            }
            Shape::Wedge { r } => {
                planar("wedge")?;
                if !(r.is_finite() && *r > 0.0) {
                    return Err(Error::InvalidParameter(format!("wedge size must be positive, got {r}")));
                }
            }
            Shape::Union { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidParameter("empty union".into()));
                }
                for p in parts {
                    p.validate(dim)?;
                }
            }
            Shape::Pbm { .. } => planar("pbm")?,
        }
        Ok(())
    }

    /// Membership of a point; `None` for bitmap shapes, which have no
    /// continuum description.
    pub fn contains(&self, x: &[f64; 3]) -> Option<bool> {
        Some(match self {
            Shape::Disk { center, radius } => {
                let d2: f64 = center.iter().enumerate().map(|(d, c)| (x[d] - c).powi(2)).sum();
                d2 <= radius * radius
            }
            Shape::ConvexPolygon { vertices } => {
                let sign = (0..vertices.len()).map(|i| polygon_turn(vertices, i)).find(|t| *t != 0.0).unwrap_or(1.0).signum();
                (0..vertices.len()).all(|i| {
                    let (p, q) = (vertices[i], vertices[(i + 1) % vertices.len()]);
                    let side = (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0]);
                    side * sign >= 0.0
                })
            }
            Shape::HalfPlane { normal, offset } => normal.iter().enumerate().map(|(d, n)| n * x[d]).sum::<f64>() >= *offset,
            Shape::TangentDisksCross { scale } => {
                let p = [x[0] / scale, x[1] / scale];
                in_cone_hull(p, [-1.0, 1.0], 1.0) || in_cone_hull(p, [1.0, -1.0], 1.0)
            }
            Shape::Wedge { r } => x[0] * x[1] >= 0.0 && (x[0] + x[1]).abs() <= std::f64::consts::SQRT_2 * r,
            Shape::Union { parts } => {
                let mut any = false;
                for p in parts {
                    any |= p.contains(x)?;
                }
                any
            }
            Shape::Pbm { .. } => return None,
        })
    }

    /// Rasterizes onto `geometry`; relative bitmap paths resolve against `base`.
    pub fn rasterize(&self, geometry: &Arc<GridGeometry>, base: Option<&Path>) -> Result<DiscreteSet> {
        self.validate(geometry.dim())?;
        match self {
            Shape::Pbm { path } => {
                let full = match base {
                    Some(b) if path.is_relative() => b.join(path),
                    _ => path.clone(),
                };
                io::read_pbm(geometry, &std::fs::read(full)?)
            }
            Shape::Union { parts } => {
                let mut acc = DiscreteSet::empty(geometry);
                for p in parts {
                    acc = acc.union(&p.rasterize(geometry, base)?)?;
                }
                Ok(acc)
            }
            _ => Ok(DiscreteSet::from_predicate(geometry, |x| self.contains(x).unwrap_or(false))),
        }
    }
}

fn polygon_turn(v: &[[f64; 2]], i: usize) -> f64 {
    let n = v.len();
    let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
    (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
}

/// Smallest distance, in cells, from the set to cells outside the flexible
/// region (the box exterior included). Empty sets report `usize::MAX`.
pub fn clearance(set: &DiscreteSet) -> usize {
    let g = set.geometry();
    let mut best = usize::MAX;
    for p in set.iter() {
        let c = g.coords(p);
        for d in 0..g.dim() {
            best = best.min(c[d] + 1).min(g.extents()[d] - c[d]);
        }
    }
    if best == usize::MAX {
        return best;
    }
    let outside: Vec<usize> = (0..g.len()).filter(|&i| !g.flexible()[i]).collect();
    for p in set.iter() {
        let cp = g.coords(p);
        for &q in &outside {
            let cq = g.coords(q);
            let cheb = (0..g.dim()).map(|d| cp[d].abs_diff(cq[d])).max().unwrap_or(0);
            best = best.min(cheb);
        }
    }
    best
}
