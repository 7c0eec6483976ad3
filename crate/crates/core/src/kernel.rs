//! Interaction tables: the cell-pair masses of a radial kernel on a lattice.
//!
//! For an integer offset `v` the table stores
//! `w(v) = ∫_{C_0} ∫_{C_v} K(x - y) dx dy`, the kernel mass exchanged between
//! the unit cell at the origin and the cell shifted by `v`. Offsets are kept
//! for `0 < |v| a <= R_K`. The mass of the kernel outside the truncation ball,
//! `τ = ∫_{|y| > R_K} K(y) dy`, is stored as `tail_mass`; all energy
//! evaluations treat that far field as exterior to the (bounded) sets on the
//! grid.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_box, integrate_box_with_breaks};

/// Integer lattice offset; unused trailing components are zero.
pub type Offset = [i32; 3];

/// Offsets with squared length up to this bound use exact cell-pair
/// quadrature in the fractional kernel; farther ones use the midpoint rule.
pub const NEAR_FIELD_SQ: i64 = 9;

pub const TAIL_CONVENTION: &str = "kernel mass beyond the truncation radius is counted as exterior";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    /// `K(x) = |x|^{-(n+s)}`.
    Fractional { s: f64 },
    /// A sampled radial profile with compact support.
    Compact { profile_id: u64, support_radius: f64 },
    /// Weights supplied directly.
    Custom,
}

/// Piecewise-linear radial profile `k(r)`, zero beyond the last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.is_empty() {
            return Err(Error::InvalidParameter("profile needs matching, nonempty radii and values".into()));
        }
        if radii[0] < 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("profile radii must be nonnegative and strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative or non-finite profile sample {v}")));
        }
        Ok(Self { radii, values })
    }

    /// Indicator of the closed ball of the given radius.
    pub fn indicator(radius: f64) -> Result<Self> {
        Self::new(vec![0.0, radius], vec![1.0, 1.0])
    }

    pub fn support_radius(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    pub fn eval(&self, r: f64) -> f64 {
        let radii = &self.radii;
        if r > self.support_radius() {
            return 0.0;
        }
        if r <= radii[0] {
            return self.values[0];
        }
        let i = radii.partition_point(|&x| x < r);
        let (r0, r1) = (radii[i - 1], radii[i]);
        let t = (r - r0) / (r1 - r0);
        self.values[i - 1] * (1.0 - t) + self.values[i] * t
    }

    pub fn knots(&self) -> &[f64] {
        &self.radii
    }

    fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// FNV-1a over the sample bit patterns; identifies the profile in file headers.
    pub fn id(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for x in self.radii.iter().chain(self.values.iter()) {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

/// Translation-invariant kernel weights per grid offset plus the far-field tail.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTable {
    dim: usize,
    spacing: f64,
    truncation_radius: f64,
    offsets: Vec<Offset>,
    weights: Vec<f64>,
    tail_mass: f64,
    kind: KernelKind,
}

impl InteractionTable {
    /// Assemble a table from raw parts. No invariant is enforced here; use
    /// [`validate_kernel`] to check a hand-built table.
    pub fn from_parts(
        dim: usize,
        spacing: f64,
        truncation_radius: f64,
        entries: Vec<(Offset, f64)>,
        tail_mass: f64,
        kind: KernelKind,
    ) -> Result<Self> {
        check_dim(dim)?;
        if !(spacing > 0.0) {
            return Err(Error::InvalidParameter(format!("spacing {spacing} must be positive")));
        }
        let (offsets, weights) = entries.into_iter().unzip();
        Ok(Self { dim, spacing, truncation_radius, offsets, weights, tail_mass, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }
    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }
    pub fn offsets(&self) -> &[Offset] {
        &self.offsets
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn len(&self) -> usize {
        self.offsets.len()
    }
    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (&Offset, f64)> + '_ {
        self.offsets.iter().zip(self.weights.iter().copied())
    }

    /// Weight at `v`, zero when the offset is not stored.
    pub fn weight(&self, v: Offset) -> f64 {
        self.offsets.iter().position(|o| *o == v).map_or(0.0, |i| self.weights[i])
    }

    /// Lookup map from offset to weight.
    pub fn weight_map(&self) -> HashMap<Offset, f64> {
        self.iter().map(|(o, w)| (*o, w)).collect()
    }

    /// Largest stored offset component, i.e. the padding a lattice needs so
    /// that every offset from an in-box cell stays addressable.
    pub fn reach(&self) -> usize {
        self.offsets.iter().flat_map(|o| o.iter()).map(|c| c.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Sum of the `k` largest weights.
    pub fn largest_weights_sum(&self, k: usize) -> f64 {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| b.total_cmp(a));
        w.iter().take(k).sum()
    }

    /// Volume of one cell, `a^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    /// Index of `-v` for every stored offset; `None` when some offset has no
    /// stored opposite.
    pub fn opposite_indices(&self) -> Option<Vec<usize>> {
        let index: HashMap<Offset, usize> = self.offsets.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        self.offsets.iter().map(|o| index.get(&neg(*o)).copied()).collect()
    }

    /// Human-readable `(offset, weight)` listing.
    pub fn write_summary<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# interaction table")?;
        writeln!(out, "# dim {}", self.dim)?;
        writeln!(out, "# kind {}", serde_json::to_string(&self.kind).expect("kind serializes"))?;
        writeln!(out, "# spacing {}", self.spacing)?;
        writeln!(out, "# truncation_radius {}", self.truncation_radius)?;
        writeln!(out, "# tail_mass {}", self.tail_mass)?;
        writeln!(out, "# {}", TAIL_CONVENTION)?;
        writeln!(out, "# count {}", self.offsets.len())?;
        for (o, w) in self.iter() {
            let comps: Vec<String> = o[..self.dim].iter().map(|c| c.to_string()).collect();
            writeln!(out, "{} {:.17e}", comps.join(","), w)?;
        }
        Ok(())
    }

    /// Versioned little-endian binary encoding.
    ///
    /// Layout: magic `NLKT`, `u16` version, `u8` dim, `u8` kind tag
    /// (0 fractional, 1 compact, 2 custom), 8-byte kernel parameter (`s` as
    /// `f64`, or the profile id as `u64`), `f64` spacing, `f64` truncation
    /// radius, `f64` tail mass, `f64` support radius, `u64` count, then per
    /// entry `dim` × `i32` components and an `f64` weight.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(b"NLKT")?;
        out.write_all(&BINARY_VERSION.to_le_bytes())?;
        out.write_all(&[self.dim as u8])?;
        let (tag, param, support) = match self.kind {
            KernelKind::Fractional { s } => (0u8, s.to_bits(), 0.0),
            KernelKind::Compact { profile_id, support_radius } => (1u8, profile_id, support_radius),
            KernelKind::Custom => (2u8, 0, 0.0),
        };
        out.write_all(&[tag])?;
        out.write_all(&param.to_le_bytes())?;
        for x in [self.spacing, self.truncation_radius, self.tail_mass, support] {
            out.write_all(&x.to_le_bytes())?;
        }
        out.write_all(&(self.offsets.len() as u64).to_le_bytes())?;
        for (o, w) in self.iter() {
            for c in &o[..self.dim] {
                out.write_all(&c.to_le_bytes())?;
            }
            out.write_all(&w.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != b"NLKT" {
            return Err(Error::Format("not an interaction table file".into()));
        }
        let version = u16::from_le_bytes(read_array(&mut input)?);
        if version != BINARY_VERSION {
            return Err(Error::Format(format!("unsupported table version {version}")));
        }
        let [dim] = read_array::<1, _>(&mut input)?;
        let [tag] = read_array::<1, _>(&mut input)?;
        let param = u64::from_le_bytes(read_array(&mut input)?);
        let mut f = [0.0; 4];
        for x in f.iter_mut() {
            *x = f64::from_le_bytes(read_array(&mut input)?);
        }
        let [spacing, truncation_radius, tail_mass, support_radius] = f;
        let kind = match tag {
            0 => KernelKind::Fractional { s: f64::from_bits(param) },
            1 => KernelKind::Compact { profile_id: param, support_radius },
            2 => KernelKind::Custom,
            t => return Err(Error::Format(format!("unknown kernel tag {t}"))),
        };
        let dim = dim as usize;
        check_dim(dim).map_err(|_| Error::Format(format!("bad dimension {dim}")))?;
        let count = u64::from_le_bytes(read_array(&mut input)?) as usize;
        let mut entries = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let mut o = [0i32; 3];
            for c in o.iter_mut().take(dim) {
                *c = i32::from_le_bytes(read_array(&mut input)?);
            }
            let w = f64::from_le_bytes(read_array(&mut input)?);
            entries.push((o, w));
        }
        Self::from_parts(dim, spacing, truncation_radius, entries, tail_mass, kind)
    }
}

const BINARY_VERSION: u16 = 1;

fn read_array<const N: usize, R: Read>(input: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input.read_exact(&mut buf)?;
    Ok(buf)
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("dimension {dim} not in 1..=3")))
    }
}

pub(crate) fn neg(o: Offset) -> Offset {
    [-o[0], -o[1], -o[2]]
}

pub(crate) fn norm_sq(o: &Offset) -> i64 {
    o.iter().map(|&c| (c as i64) * (c as i64)).sum()
}

/// Surface area of the unit sphere in `R^n`.
pub fn unit_sphere_area(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => unreachable!("dimension checked by caller"),
    }
}

/// `∫_{|y| > r} |y|^{-(n+s)} dy`.
pub fn fractional_tail(dim: usize, s: f64, r: f64) -> f64 {
    unit_sphere_area(dim) / (s * r.powf(s))
}

/// All offsets with `0 < |v| a <= radius`, sorted by length then lexicographically.
fn lattice_offsets(dim: usize, spacing: f64, radius: f64) -> Vec<Offset> {
    let bound = (radius / spacing).floor() as i32 + 1;
    let limit = (radius / spacing) * (radius / spacing) * (1.0 + 1e-12);
    let range = |d: usize| if d < dim { -bound..=bound } else { 0..=0 };
    let mut out = Vec::new();
    for x in range(0) {
        for y in range(1) {
            for z in range(2) {
                let o = [x, y, z];
                let sq = norm_sq(&o);
                if sq > 0 && (sq as f64) <= limit {
                    out.push(o);
                }
            }
        }
    }
    out.sort_by_key(|o| (norm_sq(o), *o));
    out
}

/// Representative of the orbit of `v` under coordinate reflections and
/// permutations: sorted absolute components.
fn canonical(o: &Offset, dim: usize) -> Offset {
    let mut c = [0i32; 3];
    for d in 0..dim {
        c[d] = o[d].abs();
    }
    c[..dim].sort_unstable();
    c
}

/// Fill weights orbit by orbit so symmetric offsets carry bit-identical values.
fn weights_by_orbit<F: FnMut(&Offset) -> Result<f64>>(dim: usize, offsets: &[Offset], mut weight_of: F) -> Result<Vec<f64>> {
    let mut cache: HashMap<Offset, f64> = HashMap::new();
    let mut weights = Vec::with_capacity(offsets.len());
    for o in offsets {
        let c = canonical(o, dim);
        let w = match cache.get(&c) {
            Some(&w) => w,
            None => {
                let w = weight_of(&c)?;
                cache.insert(c, w);
                w
            }
        };
        weights.push(w);
    }
    Ok(weights)
}

/// Fractional kernel `K(x) = |x|^{-(n+s)}` on a lattice of spacing `a`,
/// truncated at `R_K`.
///
/// Offsets with `|v| <= 3` cells get the exact cell-pair mass (to relative
/// tolerance `q_tol`); farther offsets use the midpoint value
/// `K(v a) a^{2n}`. The tail is `|S^{n-1}| / (s R_K^s)`.
pub fn build_fractional_kernel(dim: usize, s: f64, spacing: f64, truncation_radius: f64, q_tol: f64) -> Result<InteractionTable> {
    check_dim(dim)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("fractional exponent s = {s} outside (0, 1)")));
    }
    if !(spacing > 0.0) {
        return Err(Error::InvalidParameter(format!("spacing {spacing} must be positive")));
    }
    if !(truncation_radius >= 3.0 * spacing) {
        return Err(Error::InvalidParameter(format!(
            "truncation radius {truncation_radius} below three cells ({})",
            3.0 * spacing
        )));
    }
    if !(q_tol > 0.0 && q_tol < 1.0) {
        return Err(Error::InvalidParameter(format!("quadrature tolerance {q_tol} outside (0, 1)")));
    }
    let offsets = lattice_offsets(dim, spacing, truncation_radius);
    let n = dim as f64;
    // Cell-pair masses scale as a^{n-s} relative to the unit lattice.
    let scale = spacing.powf(n - s);
    let weights = weights_by_orbit(dim, &offsets, |c| {
        let unit = if norm_sq(c) <= NEAR_FIELD_SQ {
            fractional_cell_pair(dim, s, c, q_tol)?
        } else {
            (norm_sq(c) as f64).powf(-(n + s) / 2.0)
        };
        Ok(unit * scale)
    })?;
    Ok(InteractionTable {
        dim,
        spacing,
        truncation_radius,
        offsets,
        weights,
        tail_mass: fractional_tail(dim, s, truncation_radius),
        kind: KernelKind::Fractional { s },
    })
}

/// Exact `∫_{C_0} ∫_{C_v} |x - y|^{-(n+s)}` for unit cells.
///
/// Written as `∫_{[-1,1]^n} Λ(z) K(v + z) dz` with the tent
/// `Λ(z) = Π (1 - |z_i|)`, split into the `2^n` orthant boxes on which the tent
/// is polynomial. Boxes away from the singular point `z = -v` are smooth and
/// integrated adaptively. A box with the singularity at a vertex is reflected to
/// `[0,1]^n` with the singularity at the origin; there the tent is a product of
/// factors `t_i` and `1 - t_i` that vanishes at the origin, and each resulting
/// monomial integral `M_m = ∫ t^m |t|^{-(n+s)}` satisfies
/// `M_m = 2^{s-|m|} M_m + ∫_{[0,1]^n \ [0,1/2]^n} t^m |t|^{-(n+s)}` by homogeneity.
pub(crate) fn fractional_cell_pair(dim: usize, s: f64, v: &Offset, q_tol: f64) -> Result<f64> {
    let n = dim as f64;
    let kernel = |y: &[f64]| -> f64 {
        let r2: f64 = y.iter().map(|c| c * c).sum();
        r2.powf(-(n + s) / 2.0)
    };
    let mut total = 0.0;
    for orthant in 0..(1usize << dim) {
        let sign: Vec<f64> = (0..dim).map(|d| if orthant >> d & 1 == 1 { 1.0 } else { -1.0 }).collect();
        let singular = (0..dim).all(|d| {
            let vd = v[d];
            vd == 0 || (vd.abs() == 1 && (-vd as f64) == sign[d])
        });
        if singular {
            total += singular_orthant(dim, s, v, q_tol)?;
        } else {
            let lo: Vec<f64> = sign.iter().map(|&sg| sg.min(0.0)).collect();
            let hi: Vec<f64> = sign.iter().map(|&sg| sg.max(0.0)).collect();
            let f = |z: &[f64]| {
                let mut tent = 1.0;
                let mut y = [0.0; 3];
                for d in 0..dim {
                    tent *= 1.0 - z[d].abs();
                    y[d] = v[d] as f64 + z[d];
                }
                tent * kernel(&y[..dim])
            };
            total += integrate_box(&f, &lo, &hi, q_tol * 0.1)?;
        }
    }
    Ok(total)
}

fn singular_orthant(dim: usize, s: f64, v: &Offset, q_tol: f64) -> Result<f64> {
    let n = dim as f64;
    // Axes where the tent factor is t_d (|v_d| = 1) versus 1 - t_d (v_d = 0).
    let forced: Vec<bool> = (0..dim).map(|d| v[d] != 0).collect();
    let mut total = 0.0;
    for m in 0..(1usize << dim) {
        let mut sign = 1.0;
        let mut ok = true;
        for d in 0..dim {
            let has = m >> d & 1 == 1;
            if forced[d] && !has {
                ok = false;
            }
            if !forced[d] && has {
                sign = -sign;
            }
        }
        if !ok {
            continue;
        }
        let degree = m.count_ones() as f64;
        let monomial = |t: &[f64]| -> f64 {
            let mut p = 1.0;
            let mut r2 = 0.0;
            for d in 0..dim {
                if m >> d & 1 == 1 {
                    p *= t[d];
                }
                r2 += t[d] * t[d];
            }
            p * r2.powf(-(n + s) / 2.0)
        };
        let mut shell = 0.0;
        for sub in 1..(1usize << dim) {
            let lo: Vec<f64> = (0..dim).map(|d| if sub >> d & 1 == 1 { 0.5 } else { 0.0 }).collect();
            let hi: Vec<f64> = lo.iter().map(|l| l + 0.5).collect();
            shell += integrate_box(&monomial, &lo, &hi, q_tol * 0.1)?;
        }
        total += sign * shell / (1.0 - 2f64.powf(s - degree));
    }
    Ok(total)
}

/// Kernel with a sampled radial profile of compact support; `R_K` is the
/// support radius and the tail vanishes.
pub fn build_compact_kernel(dim: usize, profile: &RadialProfile, spacing: f64, q_tol: f64) -> Result<InteractionTable> {
    check_dim(dim)?;
    if !(spacing > 0.0) {
        return Err(Error::InvalidParameter(format!("spacing {spacing} must be positive")));
    }
    if profile.is_zero() {
        return Err(Error::DegenerateKernel("profile vanishes identically".into()));
    }
    let radius = profile.support_radius();
    if radius < spacing {
        return Err(Error::DegenerateKernel(format!("support radius {radius} shorter than one cell")));
    }
    let offsets = lattice_offsets(dim, spacing, radius);
    let a = spacing;
    let weights = weights_by_orbit(dim, &offsets, |c| {
        let mut total = 0.0;
        // Cell-pair mass as ∫_{[-a,a]^n} Λ(z) k(|v a + z|) dz, one orthant at a time.
        for orthant in 0..(1usize << dim) {
            let lo: Vec<f64> = (0..dim).map(|d| if orthant >> d & 1 == 1 { 0.0 } else { -a }).collect();
            let hi: Vec<f64> = lo.iter().map(|l| l + a).collect();
            let f = |z: &[f64]| {
                let mut tent = 1.0;
                let mut r2 = 0.0;
                for d in 0..dim {
                    tent *= a - z[d].abs();
                    let y = c[d] as f64 * a + z[d];
                    r2 += y * y;
                }
                tent * profile.eval(r2.sqrt())
            };
            // Along each axis the profile knots sit where |v a + z| crosses a knot radius.
            let breaks = |axis: usize, z: &[f64]| {
                let shift = |d: usize| c[d] as f64 * a;
                let used: f64 = (0..axis).map(|d| (shift(d) + z[d]).powi(2)).sum();
                let mut out = Vec::new();
                for &r in profile.knots() {
                    let rem = r * r - used;
                    if rem >= 0.0 {
                        let y = rem.sqrt();
                        out.push(y - shift(axis));
                        out.push(-y - shift(axis));
                    }
                }
                out
            };
            total += integrate_box_with_breaks(&f, &lo, &hi, q_tol * 0.1, &breaks)?;
        }
        Ok(total)
    })?;
    Ok(InteractionTable {
        dim,
        spacing,
        truncation_radius: radius,
        offsets,
        weights,
        tail_mass: 0.0,
        kind: KernelKind::Compact { profile_id: profile.id(), support_radius: radius },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCheck {
    pub name: &'static str,
    pub passed: bool,
    pub offending_offset: Option<Offset>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<KernelCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&KernelCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Check every table invariant and report the first offending offset of each.
pub fn validate_kernel(table: &InteractionTable) -> ValidationReport {
    let mut checks = Vec::new();
    let map = table.weight_map();

    let zero = table.offsets.iter().find(|o| norm_sq(o) == 0).copied();
    checks.push(KernelCheck {
        name: "no_zero_offset",
        passed: zero.is_none(),
        offending_offset: zero,
        detail: String::new(),
    });

    let mut seen = std::collections::HashSet::new();
    let dup = table.offsets.iter().find(|o| !seen.insert(**o)).copied();
    checks.push(KernelCheck {
        name: "unique_offsets",
        passed: dup.is_none(),
        offending_offset: dup,
        detail: String::new(),
    });

    let asym = table.iter().find(|(o, w)| match map.get(&neg(**o)) {
        Some(&wn) => (wn - w).abs() > 1e-12 * w.abs().max(wn.abs()),
        None => *w != 0.0,
    });
    checks.push(KernelCheck {
        name: "symmetry",
        passed: asym.is_none(),
        offending_offset: asym.map(|(o, _)| *o),
        detail: asym.map(|(o, w)| format!("w({o:?}) = {w}, w(-v) = {:?}", map.get(&neg(*o)))).unwrap_or_default(),
    });

    let negative = table.iter().find(|(_, w)| !(*w >= 0.0));
    checks.push(KernelCheck {
        name: "nonnegative",
        passed: negative.is_none(),
        offending_offset: negative.map(|(o, _)| *o),
        detail: negative.map(|(_, w)| format!("weight {w}")).unwrap_or_default(),
    });

    checks.push(KernelCheck {
        name: "tail_nonnegative",
        passed: table.tail_mass >= 0.0 && table.tail_mass.is_finite(),
        offending_offset: None,
        detail: format!("tail {}", table.tail_mass),
    });

    let moment: f64 = table
        .iter()
        .map(|(o, w)| ((norm_sq(o) as f64).sqrt() * table.spacing).min(1.0) * w)
        .sum();
    checks.push(KernelCheck {
        name: "integrability",
        passed: moment.is_finite(),
        offending_offset: None,
        detail: format!("sum min(1,|v a|) w(v) = {moment}"),
    });

    let outside = table
        .offsets
        .iter()
        .find(|o| (norm_sq(o) as f64).sqrt() * table.spacing > table.truncation_radius * (1.0 + 1e-12) || o[table.dim..].iter().any(|&c| c != 0))
        .copied();
    checks.push(KernelCheck {
        name: "within_truncation",
        passed: outside.is_none(),
        offending_offset: outside,
        detail: String::new(),
    });

    ValidationReport { checks }
}
