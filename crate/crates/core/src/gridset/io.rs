//! Reading and writing sets and fields.
//!
//! Two-dimensional sets use plain PBM (`P1`, 1 = member); rows are written from
//! the largest `y` down so the image looks like the usual plot. Sets of any
//! dimension can also be written as run-length text, and fields as CSV or PGM.

use std::io::{BufRead, Write};
use std::sync::Arc;

use super::{DiscreteSet, GridGeometry, ScalarField};
use crate::error::{Error, Result};

pub fn write_pbm<W: Write>(set: &DiscreteSet, mut out: W) -> Result<()> {
    let g = set.geometry();
    if g.dim() != 2 {
        return Err(Error::Format(format!("PBM needs a 2D set, got dimension {}", g.dim())));
    }
    let (nx, ny) = (g.extents()[0], g.extents()[1]);
    writeln!(out, "P1\n{nx} {ny}")?;
    for y in (0..ny).rev() {
        let row: Vec<&str> = (0..nx).map(|x| if set.contains(g.index([x, y, 0])) { "1" } else { "0" }).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Reads a `P1` or `P4` bitmap into a set on a 2D geometry of the same size.
pub fn read_pbm(geometry: &Arc<GridGeometry>, bytes: &[u8]) -> Result<DiscreteSet> {
    if geometry.dim() != 2 {
        return Err(Error::Format("PBM needs a 2D geometry".into()));
    }
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos).ok_or_else(|| Error::Format("empty PBM".into()))?;
    let width = parse_header_number(bytes, &mut pos)?;
    let height = parse_header_number(bytes, &mut pos)?;
    let (nx, ny) = (geometry.extents()[0], geometry.extents()[1]);
    if width != nx || height != ny {
        return Err(Error::GeometryMismatch(format!("bitmap is {width}x{height}, grid is {nx}x{ny}")));
    }
    let mut bits = Vec::with_capacity(nx * ny);
    match magic.as_str() {
        "P1" => {
            while bits.len() < nx * ny {
                skip_space(bytes, &mut pos);
                match bytes.get(pos) {
                    Some(b'0') => bits.push(false),
                    Some(b'1') => bits.push(true),
                    Some(c) => return Err(Error::Format(format!("unexpected byte {c:#x} in PBM data"))),
                    None => return Err(Error::Format("PBM data ends early".into())),
                }
                pos += 1;
            }
        }
        "P4" => {
            // Exactly one whitespace byte separates the header from the data.
            pos += 1;
            let row_bytes = nx.div_ceil(8);
            let data = bytes.get(pos..pos + row_bytes * ny).ok_or_else(|| Error::Format("PBM data ends early".into()))?;
            for r in 0..ny {
                for x in 0..nx {
                    bits.push(data[r * row_bytes + x / 8] >> (7 - x % 8) & 1 == 1);
                }
            }
        }
        m => return Err(Error::Format(format!("unsupported bitmap magic {m:?}"))),
    }
    let mut set = DiscreteSet::empty(geometry);
    for (k, bit) in bits.into_iter().enumerate() {
        let (r, x) = (k / nx, k % nx);
        set.set(geometry.index([x, ny - 1 - r, 0]), bit);
    }
    Ok(set)
}

fn skip_space(bytes: &[u8], pos: &mut usize) {
    while let Some(&c) = bytes.get(*pos) {
        if c == b'#' {
            while let Some(&c) = bytes.get(*pos) {
                *pos += 1;
                if c == b'\n' {
                    break;
                }
            }
        } else if c.is_ascii_whitespace() {
            *pos += 1;
        } else {
            break;
        }
    }
}

fn next_token(bytes: &[u8], pos: &mut usize) -> Option<String> {
    skip_space(bytes, pos);
    let start = *pos;
    while bytes.get(*pos).is_some_and(|c| !c.is_ascii_whitespace()) {
        *pos += 1;
    }
    (start < *pos).then(|| String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn parse_header_number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    let tok = next_token(bytes, pos).ok_or_else(|| Error::Format("truncated PBM header".into()))?;
    tok.parse().map_err(|_| Error::Format(format!("bad PBM header value {tok:?}")))
}

/// Run-length text: a header line with the extents, then one line per run of
/// members in storage order, `start length`.
pub fn write_runs<W: Write>(set: &DiscreteSet, mut out: W) -> Result<()> {
    let g = set.geometry();
    let ext: Vec<String> = g.extents().iter().map(|e| e.to_string()).collect();
    writeln!(out, "runs {}", ext.join(" "))?;
    let cells = set.cells();
    let mut i = 0;
    while i < cells.len() {
        if cells[i] {
            let start = i;
            while i < cells.len() && cells[i] {
                i += 1;
            }
            writeln!(out, "{start} {}", i - start)?;
        } else {
            i += 1;
        }
    }
    Ok(())
}

pub fn read_runs<R: BufRead>(geometry: &Arc<GridGeometry>, input: R) -> Result<DiscreteSet> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty run file".into()))??;
    let ext: Vec<usize> = header
        .strip_prefix("runs ")
        .ok_or_else(|| Error::Format(format!("bad run header {header:?}")))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Format(format!("bad extent {t:?}"))))
        .collect::<Result<_>>()?;
    if ext != geometry.extents() {
        return Err(Error::GeometryMismatch(format!("run file extents {ext:?}, grid {:?}", geometry.extents())));
    }
    let mut set = DiscreteSet::empty(geometry);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Format(format!("bad run {line:?}"))))
            .collect::<Result<_>>()?;
        let [start, len] = nums[..] else {
            return Err(Error::Format(format!("bad run {line:?}")));
        };
        if start + len > geometry.len() {
            return Err(Error::Format(format!("run {start}+{len} leaves the grid")));
        }
        for i in start..start + len {
            set.insert(i);
        }
    }
    Ok(set)
}

/// One row per cell: lattice coordinates, center coordinates, value.
pub fn write_field_csv<W: Write>(field: &ScalarField, mut out: W) -> Result<()> {
    let g = field.geometry();
    let axes = ["x", "y", "z"];
    let mut header: Vec<String> = (0..g.dim()).map(|d| format!("i{}", axes[d])).collect();
    header.extend((0..g.dim()).map(|d| axes[d].to_string()));
    header.push("value".into());
    writeln!(out, "{}", header.join(","))?;
    for i in 0..g.len() {
        let c = g.coords(i);
        let x = g.center(i);
        let mut row: Vec<String> = (0..g.dim()).map(|d| c[d].to_string()).collect();
        row.extend((0..g.dim()).map(|d| format!("{}", x[d])));
        row.push(format!("{}", field.get(i)));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Plain PGM heat map of a 2D field, linearly mapped from `[lo, hi]` to
/// `0..=255`.
pub fn write_field_pgm<W: Write>(field: &ScalarField, lo: f64, hi: f64, mut out: W) -> Result<()> {
    let g = field.geometry();
    if g.dim() != 2 {
        return Err(Error::Format(format!("PGM needs a 2D field, got dimension {}", g.dim())));
    }
    let (nx, ny) = (g.extents()[0], g.extents()[1]);
    writeln!(out, "P2\n{nx} {ny}\n255")?;
    let span = if hi > lo { hi - lo } else { 1.0 };
    for y in (0..ny).rev() {
        let row: Vec<String> = (0..nx)
            .map(|x| {
                let v = (field.get(g.index([x, y, 0])) - lo) / span;
                ((v.clamp(0.0, 1.0) * 255.0).round() as u8).to_string()
            })
            .collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}
