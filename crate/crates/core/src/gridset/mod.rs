//! Grid geometry, discrete sets and scalar fields.
//!
//! Cells are axis-aligned cubes of side `a`. Cell `i` along an axis of extent
//! `N` has its center at `(i + 1/2 - N/2) a`, so the box is centered on the
//! origin. Everything outside the box is exterior to every set.

mod edt;
pub mod io;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::Offset;

pub use edt::squared_distance_transform;

/// Lattice shape, spacing and the flexible region `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGeometry {
    dim: usize,
    spacing: f64,
    extents: Vec<usize>,
    strides: Vec<usize>,
    flexible: Vec<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometrySummary {
    pub dim: usize,
    pub spacing: f64,
    pub extents: Vec<usize>,
    pub flexible_cells: usize,
}

impl GridGeometry {
    /// Geometry whose flexible region is the box minus its outermost ring.
    pub fn new(spacing: f64, extents: &[usize]) -> Result<Arc<Self>> {
        let dim = extents.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidParameter(format!("dimension {dim} not in 1..=3")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!("spacing {spacing} must be positive")));
        }
        if let Some(e) = extents.iter().find(|&&e| e < 4) {
            return Err(Error::InvalidParameter(format!("extent {e} below the minimum of 4 cells")));
        }
        let mut strides = vec![1; dim];
        for d in 1..dim {
            strides[d] = strides[d - 1] * extents[d - 1];
        }
        let len = extents.iter().product();
        let mut g = Self { dim, spacing, extents: extents.to_vec(), strides, flexible: vec![false; len] };
        for idx in 0..len {
            g.flexible[idx] = !g.on_rim(idx);
        }
        Ok(Arc::new(g))
    }

    /// Same lattice with an explicit flexible mask. The mask must keep one
    /// cell of clearance from the box boundary.
    pub fn with_flexible(&self, mask: Vec<bool>) -> Result<Arc<Self>> {
        if mask.len() != self.len() {
            return Err(Error::GeometryMismatch(format!("mask has {} cells, box has {}", mask.len(), self.len())));
        }
        if (0..self.len()).any(|i| mask[i] && self.on_rim(i)) {
            return Err(Error::RegionTouchesRim);
        }
        Ok(Arc::new(Self { flexible: mask, ..self.clone() }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }
    pub fn len(&self) -> usize {
        self.flexible.len()
    }
    pub fn is_empty(&self) -> bool {
        self.flexible.is_empty()
    }
    pub fn flexible(&self) -> &[bool] {
        &self.flexible
    }
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    pub fn summary(&self) -> GeometrySummary {
        GeometrySummary {
            dim: self.dim,
            spacing: self.spacing,
            extents: self.extents.clone(),
            flexible_cells: self.flexible.iter().filter(|&&f| f).count(),
        }
    }

    /// Same dimension, spacing and extents (the flexible mask may differ).
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.dim == other.dim && self.spacing == other.spacing && self.extents == other.extents
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let mut c = [0; 3];
        for d in 0..self.dim {
            c[d] = (idx / self.strides[d]) % self.extents[d];
        }
        c
    }

    pub fn index(&self, coords: [usize; 3]) -> usize {
        (0..self.dim).map(|d| coords[d] * self.strides[d]).sum()
    }

    /// Neighbor at `idx + v`, `None` if it leaves the box.
    pub fn shifted(&self, idx: usize, v: &Offset) -> Option<usize> {
        let c = self.coords(idx);
        let mut out = 0;
        for d in 0..self.dim {
            let x = c[d] as i64 + v[d] as i64;
            if x < 0 || x >= self.extents[d] as i64 {
                return None;
            }
            out += x as usize * self.strides[d];
        }
        Some(out)
    }

    pub fn center(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        let mut x = [0.0; 3];
        for d in 0..self.dim {
            x[d] = (c[d] as f64 + 0.5 - self.extents[d] as f64 / 2.0) * self.spacing;
        }
        x
    }

    pub fn on_rim(&self, idx: usize) -> bool {
        let c = self.coords(idx);
        (0..self.dim).any(|d| c[d] == 0 || c[d] + 1 == self.extents[d])
    }

    /// Face neighbors inside the box; the flag reports whether any face
    /// neighbor lies outside.
    pub fn face_neighbors(&self, idx: usize) -> (Vec<usize>, bool) {
        let mut out = Vec::with_capacity(2 * self.dim);
        let mut outside = false;
        for d in 0..self.dim {
            for step in [-1, 1] {
                let mut v = [0; 3];
                v[d] = step;
                match self.shifted(idx, &v) {
                    Some(j) => out.push(j),
                    None => outside = true,
                }
            }
        }
        (out, outside)
    }

    /// Euclidean distance between two cell centers.
    pub fn center_distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.coords(i), self.coords(j));
        let sq: i64 = (0..self.dim).map(|d| (a[d] as i64 - b[d] as i64).pow(2)).sum();
        (sq as f64).sqrt() * self.spacing
    }

    /// Length of the box diagonal.
    pub fn diagonal(&self) -> f64 {
        self.extents.iter().map(|&e| (e as f64).powi(2)).sum::<f64>().sqrt() * self.spacing
    }

    /// Lattice padded by `pad` exterior cells on every side.
    pub fn padded(&self, pad: usize) -> PaddedLattice {
        PaddedLattice::new(self, pad)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_lattice(other) {
            Ok(())
        } else {
            Err(Error::GeometryMismatch(format!(
                "{:?}@{} vs {:?}@{}",
                self.extents, self.spacing, other.extents, other.spacing
            )))
        }
    }
}

/// Index arithmetic on the box embedded in a padded lattice, so that shifts by
/// offsets up to `pad` become constant linear deltas.
#[derive(Debug, Clone)]
pub struct PaddedLattice {
    pub pad: usize,
    pub extents: Vec<usize>,
    pub strides: Vec<usize>,
    dim: usize,
}

impl PaddedLattice {
    fn new(g: &GridGeometry, pad: usize) -> Self {
        let extents: Vec<usize> = g.extents.iter().map(|e| e + 2 * pad).collect();
        let mut strides = vec![1; g.dim];
        for d in 1..g.dim {
            strides[d] = strides[d - 1] * extents[d - 1];
        }
        Self { pad, extents, strides, dim: g.dim }
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Padded index of a box cell.
    pub fn embed(&self, g: &GridGeometry, idx: usize) -> usize {
        let c = g.coords(idx);
        (0..self.dim).map(|d| (c[d] + self.pad) * self.strides[d]).sum()
    }

    pub fn delta(&self, v: &Offset) -> isize {
        (0..self.dim).map(|d| v[d] as isize * self.strides[d] as isize).sum()
    }

    pub fn coords(&self, pidx: usize) -> [usize; 3] {
        let mut c = [0; 3];
        for d in 0..self.dim {
            c[d] = (pidx / self.strides[d]) % self.extents[d];
        }
        c
    }

    /// Box index of a padded cell, `None` in the padding.
    pub fn unembed(&self, g: &GridGeometry, pidx: usize) -> Option<usize> {
        let c = self.coords(pidx);
        let mut idx = 0;
        for d in 0..self.dim {
            if c[d] < self.pad || c[d] >= self.pad + g.extents[d] {
                return None;
            }
            idx += (c[d] - self.pad) * g.strides[d];
        }
        Some(idx)
    }

    /// Padded occupancy array of `set` (1 inside the set, 0 elsewhere).
    pub fn occupancy(&self, set: &DiscreteSet) -> Vec<u8> {
        let g = set.geometry();
        let mut m = vec![0u8; self.len()];
        for idx in set.iter() {
            m[self.embed(g, idx)] = 1;
        }
        m
    }
}

/// A set of grid cells.
#[derive(Debug, Clone)]
pub struct DiscreteSet {
    geometry: Arc<GridGeometry>,
    cells: Vec<bool>,
}

impl PartialEq for DiscreteSet {
    fn eq(&self, other: &Self) -> bool {
        self.geometry.same_lattice(&other.geometry) && self.cells == other.cells
    }
}
impl Eq for DiscreteSet {}

impl DiscreteSet {
    pub fn empty(geometry: &Arc<GridGeometry>) -> Self {
        Self { geometry: geometry.clone(), cells: vec![false; geometry.len()] }
    }

    pub fn full(geometry: &Arc<GridGeometry>) -> Self {
        Self { geometry: geometry.clone(), cells: vec![true; geometry.len()] }
    }

    pub fn from_cells(geometry: &Arc<GridGeometry>, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != geometry.len() {
            return Err(Error::GeometryMismatch(format!("{} cells for a box of {}", cells.len(), geometry.len())));
        }
        Ok(Self { geometry: geometry.clone(), cells })
    }

    pub fn from_indices(geometry: &Arc<GridGeometry>, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(geometry);
        for i in indices {
            s.cells[i] = true;
        }
        s
    }

    /// Cells whose centers satisfy `pred`.
    pub fn from_predicate(geometry: &Arc<GridGeometry>, pred: impl Fn(&[f64; 3]) -> bool) -> Self {
        let cells = (0..geometry.len()).map(|i| pred(&geometry.center(i))).collect();
        Self { geometry: geometry.clone(), cells }
    }

    /// The flexible region of the geometry as a set.
    pub fn flexible_region(geometry: &Arc<GridGeometry>) -> Self {
        Self { geometry: geometry.clone(), cells: geometry.flexible.clone() }
    }

    pub fn geometry(&self) -> &Arc<GridGeometry> {
        &self.geometry
    }

    /// Same membership on another geometry with the same lattice.
    pub fn with_geometry(&self, geometry: &Arc<GridGeometry>) -> Result<Self> {
        self.geometry.check(geometry)?;
        Ok(Self { geometry: geometry.clone(), cells: self.cells.clone() })
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }
    pub fn contains(&self, idx: usize) -> bool {
        self.cells[idx]
    }
    pub fn insert(&mut self, idx: usize) {
        self.cells[idx] = true;
    }
    pub fn remove(&mut self, idx: usize) {
        self.cells[idx] = false;
    }
    pub fn set(&mut self, idx: usize, value: bool) {
        self.cells[idx] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().enumerate().filter(|(_, &c)| c).map(|(i, _)| i)
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.cells.iter().any(|&c| c)
    }

    /// Lebesgue measure, `count · a^n`.
    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.geometry.cell_volume()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && b)
    }
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a || b)
    }
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && !b)
    }

    /// Complement within the box.
    pub fn complement(&self) -> Self {
        Self { geometry: self.geometry.clone(), cells: self.cells.iter().map(|&c| !c).collect() }
    }

    /// True if every rim cell is in the set; such a set stands for an
    /// unbounded set whose complement is compact inside the box.
    pub fn covers_rim(&self) -> bool {
        (0..self.cells.len()).all(|i| self.cells[i] || !self.geometry.on_rim(i))
    }

    /// Lattice translation; cells leaving the box are dropped.
    pub fn translated(&self, v: &Offset) -> Self {
        let mut out = Self::empty(&self.geometry);
        for i in self.iter() {
            if let Some(j) = self.geometry.shifted(i, v) {
                out.cells[j] = true;
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        self.geometry.check(&other.geometry)?;
        let cells = self.cells.iter().zip(&other.cells).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { geometry: self.geometry.clone(), cells })
    }

    /// Characteristic function as a field.
    pub fn indicator(&self) -> ScalarField {
        ScalarField { geometry: self.geometry.clone(), values: self.cells.iter().map(|&c| if c { 1.0 } else { 0.0 }).collect() }
    }
}

/// One real value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    geometry: Arc<GridGeometry>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(geometry: &Arc<GridGeometry>, values: Vec<f64>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::GeometryMismatch(format!("{} values for a box of {}", values.len(), geometry.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite field value {v}")));
        }
        Ok(Self { geometry: geometry.clone(), values })
    }

    pub fn constant(geometry: &Arc<GridGeometry>, value: f64) -> Self {
        Self { geometry: geometry.clone(), values: vec![value; geometry.len()] }
    }

    pub fn geometry(&self) -> &Arc<GridGeometry> {
        &self.geometry
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// `{p : u(p) > level}`.
    pub fn superlevel(&self, level: f64) -> DiscreteSet {
        DiscreteSet { geometry: self.geometry.clone(), cells: self.values.iter().map(|&v| v > level).collect() }
    }

    /// `{p : u(p) >= level}`.
    pub fn superlevel_closed(&self, level: f64) -> DiscreteSet {
        DiscreteSet { geometry: self.geometry.clone(), cells: self.values.iter().map(|&v| v >= level).collect() }
    }

    /// Sorted distinct values.
    pub fn levels(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup();
        v
    }

    /// Round every value to the nearest multiple of `step`.
    pub fn quantized(&self, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("quantization step {step} must be positive")));
        }
        let values = self.values.iter().map(|v| (v / step).round() * step).collect();
        Ok(Self { geometry: self.geometry.clone(), values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Signed distance with the zero level between cells:
/// `d(p) = EDT(p, exterior) - a/2` inside, `-(EDT(p, interior)) + a/2` outside,
/// where distances run between cell centers and cells outside the box count as
/// exterior. For the empty set the field is the constant `-diagonal`.
pub fn signed_distance(set: &DiscreteSet) -> ScalarField {
    let g = set.geometry();
    let a = g.spacing();
    if set.is_empty() {
        return ScalarField::constant(g, -g.diagonal());
    }
    let padded = g.padded(1);
    let occ = padded.occupancy(set);
    let to_interior = squared_distance_transform(&padded.extents, |p| occ[p] == 1);
    let to_exterior = squared_distance_transform(&padded.extents, |p| occ[p] == 0);
    let values = (0..g.len())
        .map(|i| {
            let p = padded.embed(g, i);
            if set.contains(i) {
                to_exterior[p].sqrt() * a - 0.5 * a
            } else {
                -(to_interior[p].sqrt() * a) + 0.5 * a
            }
        })
        .collect();
    ScalarField { geometry: g.clone(), values }
}

/// Result of a dilation; `clipped` records that the dilated set would have
/// extended past the box.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub set: DiscreteSet,
    pub clipped: bool,
}

/// `E^λ = {p : d_E(p) >= -λ}`.
pub fn dilate(set: &DiscreteSet, lambda: f64) -> Result<Dilation> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("dilation radius {lambda} must be nonnegative")));
    }
    let g = set.geometry();
    if set.is_empty() {
        return Ok(Dilation { set: set.clone(), clipped: false });
    }
    let a = g.spacing();
    let padded = g.padded(1);
    let occ = padded.occupancy(set);
    let to_interior = squared_distance_transform(&padded.extents, |p| occ[p] == 1);
    // p outside E joins when -EDT + a/2 >= -λ.
    let reach = lambda + 0.5 * a;
    let within = |p: usize| to_interior[p].sqrt() * a <= reach * (1.0 + 1e-12);
    let mut out = set.clone();
    for i in 0..g.len() {
        if !set.contains(i) && within(padded.embed(g, i)) {
            out.insert(i);
        }
    }
    let clipped = (0..padded.len()).any(|p| padded.unembed(g, p).is_none() && within(p));
    Ok(Dilation { set: out, clipped })
}

/// Cells of the set with a face neighbor outside it (or outside the box).
pub fn boundary_cells(set: &DiscreteSet) -> Vec<usize> {
    let g = set.geometry();
    set.iter()
        .filter(|&i| {
            let (nbrs, outside) = g.face_neighbors(i);
            outside || nbrs.iter().any(|&j| !set.contains(j))
        })
        .collect()
}

/// Minimum center distance between the boundary cells of two sets.
pub fn set_distance(a: &DiscreteSet, b: &DiscreteSet) -> Result<f64> {
    a.geometry().check(b.geometry())?;
    let ba = boundary_cells(a);
    let bb = boundary_cells(b);
    if ba.is_empty() || bb.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let g = a.geometry();
    let mut feature = vec![false; g.len()];
    for &i in &bb {
        feature[i] = true;
    }
    let sq = squared_distance_transform(g.extents(), |i| feature[i]);
    let best = ba.iter().map(|&i| sq[i]).fold(f64::INFINITY, f64::min);
    Ok(best.sqrt() * g.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> Arc<GridGeometry> {
        GridGeometry::new(1.0, &[n, n]).unwrap()
    }

    fn disk(g: &Arc<GridGeometry>, r: f64) -> DiscreteSet {
        DiscreteSet::from_predicate(g, |x| x[0] * x[0] + x[1] * x[1] <= r * r)
    }

    /// Exhaustive all-pairs signed distance.
    fn brute_signed_distance(set: &DiscreteSet) -> Vec<f64> {
        let g = set.geometry();
        let a = g.spacing();
        let (nx, ny) = (g.extents()[0] as i64, g.extents()[1] as i64);
        (0..g.len())
            .map(|i| {
                let c = g.coords(i);
                let (x, y) = (c[0] as i64, c[1] as i64);
                let inside = set.contains(i);
                let mut best = i64::MAX;
                // Padded ring cells are exterior.
                for px in -1..=nx {
                    for py in -1..=ny {
                        let in_box = px >= 0 && py >= 0 && px < nx && py < ny;
                        let member = in_box && set.contains(g.index([px as usize, py as usize, 0]));
                        if member != inside {
                            best = best.min((px - x).pow(2) + (py - y).pow(2));
                        }
                    }
                }
                let d = (best as f64).sqrt() * a;
                if inside {
                    d - a / 2.0
                } else {
                    -d + a / 2.0
                }
            })
            .collect()
    }

    #[test]
    fn signed_distance_matches_brute_force_on_random_sets() {
        let g = grid(12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let set = DiscreteSet::from_cells(&g, (0..g.len()).map(|_| rng.gen_bool(0.4)).collect()).unwrap();
            if set.is_empty() {
                continue;
            }
            let d = signed_distance(&set);
            let b = brute_signed_distance(&set);
            for i in 0..g.len() {
                assert!((d.get(i) - b[i]).abs() < 1e-12, "cell {i}: {} vs {}", d.get(i), b[i]);
            }
        }
    }

    #[test]
    fn boundary_cell_distance_is_half_cell() {
        let g = GridGeometry::new(0.5, &[10, 10]).unwrap();
        let d = disk(&g, 1.6);
        let f = signed_distance(&d);
        for i in boundary_cells(&d) {
            assert_eq!(f.get(i), 0.25);
        }
    }

    #[test]
    fn half_space_distance_is_affine() {
        let g = grid(16);
        let e = DiscreteSet::from_predicate(&g, |x| x[0] <= 0.0);
        let f = signed_distance(&e);
        // Row in the middle, away from the top and bottom rims.
        for ix in 2..14 {
            let i = g.index([ix, 8, 0]);
            let j = g.index([ix + 1, 8, 0]);
            if ix >= 4 && ix <= 11 {
                assert!((f.get(j) - f.get(i) + 1.0).abs() < 1e-12, "ix {ix}");
            }
        }
    }

    #[test]
    fn complement_antisymmetry() {
        let g = grid(12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut cells: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(0.5)).collect();
        // Keep the rim exterior so the complement does not touch the padding.
        for i in 0..g.len() {
            if g.on_rim(i) {
                cells[i] = false;
            }
        }
        let e = DiscreteSet::from_cells(&g, cells).unwrap();
        let de = signed_distance(&e);
        let dc = signed_distance(&e.complement());
        // Interior of the box minus cells whose nearest exterior is the padding.
        for i in 0..g.len() {
            if e.contains(i) {
                assert_eq!(de.get(i), -dc.get(i));
            }
        }
    }

    #[test]
    fn dilation_basics() {
        let g = grid(40);
        let d = disk(&g, 8.0);
        assert_eq!(dilate(&d, 0.0).unwrap().set, d);
        let big = dilate(&d, 3.0).unwrap();
        assert!(!big.clipped);
        let direct = disk(&g, 11.0);
        // Symmetric difference stays within one cell of both boundaries.
        for i in 0..g.len() {
            if big.set.contains(i) != direct.contains(i) {
                let r = (g.center(i)[0].powi(2) + g.center(i)[1].powi(2)).sqrt();
                assert!((r - 11.0).abs() <= 1.0, "cell at radius {r}");
            }
        }
        let mut prev = d.clone();
        for k in 1..6 {
            let next = dilate(&d, k as f64).unwrap().set;
            assert!(prev.is_subset(&next));
            prev = next;
        }
        assert!(dilate(&d, 30.0).unwrap().clipped);
        assert!(dilate(&d, -1.0).is_err());
    }

    #[test]
    fn boundary_cell_conventions() {
        let g = grid(8);
        let full = DiscreteSet::full(&g);
        let rim: Vec<usize> = (0..g.len()).filter(|&i| g.on_rim(i)).collect();
        assert_eq!(boundary_cells(&full), rim);
        let single = DiscreteSet::from_indices(&g, [g.index([3, 4, 0])]);
        assert_eq!(boundary_cells(&single), vec![g.index([3, 4, 0])]);

        let g = grid(60);
        let r = 20.0;
        // Face-adjacency boundaries follow the curve with L∞ steps: ∮|n|_∞ ds = 4√2 r.
        let n = boundary_cells(&disk(&g, r)).len() as f64;
        let expected = 4.0 * 2f64.sqrt() * r;
        assert!((n - expected).abs() <= 0.1 * expected, "{n} vs {expected}");
    }

    #[test]
    fn set_distance_cases() {
        let g = grid(40);
        let a = DiscreteSet::from_predicate(&g, |x| (x[0] + 8.0).powi(2) + x[1] * x[1] <= 16.0);
        let b = DiscreteSet::from_predicate(&g, |x| (x[0] - 7.0).powi(2) + x[1] * x[1] <= 9.0);
        assert_eq!(set_distance(&a, &a).unwrap(), 0.0);
        let d = set_distance(&a, &b).unwrap();
        assert!((d - (15.0 - 4.0 - 3.0)).abs() <= 1.0, "{d}");
        let inner = disk(&g, 5.0);
        let outer = disk(&g, 12.0);
        let d = set_distance(&inner, &outer).unwrap();
        assert!((d - 7.0).abs() <= 1.0, "{d}");
        assert!(matches!(set_distance(&a, &DiscreteSet::empty(&g)), Err(Error::EmptyBoundary)));
    }

    #[test]
    fn three_dimensional_distance() {
        let g = GridGeometry::new(1.0, &[9, 9, 9]).unwrap();
        let e = DiscreteSet::from_indices(&g, [g.index([4, 4, 4])]);
        let f = signed_distance(&e);
        let corner = g.index([5, 5, 5]);
        assert!((f.get(corner) - (-(3f64).sqrt() + 0.5)).abs() < 1e-12);
    }
}
