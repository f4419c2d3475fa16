//! Text and binary file formats.
//!
//! * matrix: `d m n`, then `m` rows of `d` integers, then `m` labels `i j K-mask`
//! * rays: one ray per line, `#` starts a comment
//! * orbit pool: a ray file with `# size weight` annotations, sorted
//! * DD pair: `d m r`, `m` rows, `r` rays, optionally one more row to insert
//! * order: one `i j K-mask` label per line
//! * trajectory: CSV `step,rays`
//! * binary rays: `SDDR1`, `u8` width, `u32` dim, `u64` count, then
//!   little-endian signed integers of that width

use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use crate::dd::TrajectoryPoint;
use crate::error::{Error, Result};
use crate::int::{self, Int};
use crate::model::{ConeSpec, Subset, Triplet};
use crate::ray::Ray;
use crate::symmetry::OrbitRecord;

pub const BINARY_MAGIC: &[u8; 5] = b"SDDR1";
pub const BINARY_HEADER_LEN: u64 = 5 + 1 + 4 + 8;

/// Non-empty lines with comments stripped, tagged with 1-based line numbers.
fn content_lines<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) => {
            let body = l.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| Ok((i + 1, body.to_string())))
        }
    })
}

fn parse_ints<N: FromStr>(line: usize, s: &str) -> Result<Vec<N>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::malformed(line, format!("not an integer: `{t}`"))))
        .collect()
}

fn parse_vec<N: FromStr>(line: usize, s: &str, len: usize) -> Result<Vec<N>> {
    let v = parse_ints(line, s)?;
    if v.len() != len {
        return Err(Error::malformed(line, format!("expected {len} entries, found {}", v.len())));
    }
    Ok(v)
}

fn write_vec<W: Write, N: std::fmt::Display>(w: &mut W, v: &[N]) -> Result<()> {
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            w.write_all(b" ")?;
        }
        write!(w, "{x}")?;
    }
    writeln!(w)?;
    Ok(())
}

fn parse_triplet(line: usize, s: &str, n: usize) -> Result<Triplet> {
    let v: Vec<usize> = parse_vec(line, s, 3)?;
    Triplet::new(v[0], v[1], v[2] as Subset, n).map_err(|e| Error::malformed(line, e.to_string()))
}

pub fn write_matrix<W: Write>(spec: &ConeSpec, mut w: W) -> Result<()> {
    writeln!(w, "{} {} {}", spec.dim(), spec.num_rows(), spec.n())?;
    for row in spec.matrix_rows() {
        write_vec(&mut w, row)?;
    }
    for t in spec.triplets() {
        writeln!(w, "{} {} {}", t.i, t.j, t.k)?;
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(r: R) -> Result<ConeSpec> {
    let mut lines = content_lines(r);
    let (ln, header) = lines.next().ok_or_else(|| Error::malformed(1, "empty matrix file"))??;
    let h: Vec<usize> = parse_vec(ln, &header, 3)?;
    let (d, m, n) = (h[0], h[1], h[2]);
    let mut rows = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    for k in 0..2 * m {
        let (ln, l) = lines.next().ok_or_else(|| Error::malformed(ln + k + 1, "unexpected end of file"))??;
        if k < m {
            rows.push(parse_vec(ln, &l, d)?);
        } else {
            labels.push(parse_triplet(ln, &l, n)?);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::malformed(extra?.0, "trailing content"));
    }
    ConeSpec::from_parts(n, rows, labels)
}

pub fn write_order<W: Write>(spec: &ConeSpec, rows: &[usize], mut w: W) -> Result<()> {
    for &r in rows {
        let t = spec.triplet(r);
        writeln!(w, "{} {} {}", t.i, t.j, t.k)?;
    }
    Ok(())
}

pub fn read_order<R: BufRead>(spec: &ConeSpec, r: R) -> Result<Vec<usize>> {
    content_lines(r)
        .map(|l| {
            let (ln, l) = l?;
            let t = parse_triplet(ln, &l, spec.n())?;
            spec.row_of(&t).ok_or_else(|| Error::malformed(ln, "unknown triplet"))
        })
        .collect()
}

pub fn write_rays<W: Write, N: Int>(rays: &[Ray<N>], mut w: W) -> Result<()> {
    for r in rays {
        write_vec(&mut w, r.coords())?;
    }
    Ok(())
}

/// Reads rays of dimension `dim` (any dimension if `None`), dividing out
/// common factors.
pub fn read_rays<R: BufRead, N: Int>(r: R, dim: Option<usize>) -> Result<Vec<Ray<N>>> {
    let mut out = Vec::new();
    let mut dim = dim;
    for l in content_lines(r) {
        let (ln, l) = l?;
        let v: Vec<N> = parse_ints(ln, &l)?;
        match dim {
            Some(d) if d != v.len() => {
                return Err(Error::malformed(ln, format!("expected {d} entries, found {}", v.len())));
            }
            _ => dim = Some(v.len()),
        }
        out.push(Ray::new(v).map_err(|e| Error::malformed(ln, e.to_string()))?);
    }
    Ok(out)
}

pub fn write_pool<W: Write, N: Int>(records: &[OrbitRecord<N>], mut w: W) -> Result<()> {
    for rec in records {
        writeln!(w, "{} # {} {}", rec.canonical, rec.size, rec.weight)?;
    }
    Ok(())
}

/// Reads a pool file; annotations are returned when present.
pub fn read_pool<R: BufRead, N: Int>(r: R) -> Result<Vec<(Ray<N>, Option<(usize, usize)>)>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let (body, note) = match line.split_once('#') {
            Some((b, n)) => (b.trim(), Some(n.trim())),
            None => (line.trim(), None),
        };
        if body.is_empty() {
            continue;
        }
        let v: Vec<N> = parse_ints(i + 1, body)?;
        let ray = Ray::new(v).map_err(|e| Error::malformed(i + 1, e.to_string()))?;
        let ann = match note {
            Some(n) if !n.is_empty() => {
                let v: Vec<usize> = parse_vec(i + 1, n, 2)?;
                Some((v[0], v[1]))
            }
            _ => None,
        };
        out.push((ray, ann));
    }
    Ok(out)
}

/// A DD pair as exchanged in pipe mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFile<N> {
    pub dim: usize,
    pub rows: Vec<Vec<N>>,
    pub rays: Vec<Ray<N>>,
    pub next_row: Option<Vec<N>>,
}

pub fn write_pair<W: Write, N: Int>(pair: &PairFile<N>, mut w: W) -> Result<()> {
    writeln!(w, "{} {} {}", pair.dim, pair.rows.len(), pair.rays.len())?;
    for r in &pair.rows {
        write_vec(&mut w, r)?;
    }
    for r in &pair.rays {
        write_vec(&mut w, r.coords())?;
    }
    if let Some(r) = &pair.next_row {
        write_vec(&mut w, r)?;
    }
    Ok(())
}

pub fn read_pair<R: BufRead, N: Int>(r: R) -> Result<PairFile<N>> {
    let mut lines = content_lines(r);
    let (ln, header) = lines.next().ok_or_else(|| Error::malformed(1, "empty DD pair"))??;
    let h: Vec<usize> = parse_vec(ln, &header, 3)?;
    let (d, m, k) = (h[0], h[1], h[2]);
    let mut next = |what: &str| -> Result<(usize, String)> {
        lines.next().ok_or_else(|| Error::malformed(0, format!("unexpected end of input while reading {what}")))?
    };
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = next("rows")?;
        rows.push(parse_vec(ln, &l, d)?);
    }
    let mut rays = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, l) = next("rays")?;
        let v = parse_vec(ln, &l, d)?;
        rays.push(Ray::new(v).map_err(|e| Error::malformed(ln, e.to_string()))?);
    }
    let next_row = match lines.next() {
        None => None,
        Some(l) => {
            let (ln, l) = l?;
            Some(parse_vec(ln, &l, d)?)
        }
    };
    if let Some(extra) = lines.next() {
        return Err(Error::malformed(extra?.0, "trailing content after the new row"));
    }
    Ok(PairFile {
        dim: d,
        rows,
        rays,
        next_row,
    })
}

pub fn write_trajectory<W: Write>(points: &[TrajectoryPoint], mut w: W) -> Result<()> {
    writeln!(w, "step,rays")?;
    for p in points {
        writeln!(w, "{},{}", p.processed, p.rays)?;
    }
    Ok(())
}

pub fn write_binary_rays<W: Write, N: Int>(rays: &[Ray<N>], dim: usize, mut w: W) -> Result<()> {
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&[8u8])?;
    w.write_all(&u32::try_from(dim).map_err(|_| Error::Overflow)?.to_le_bytes())?;
    w.write_all(&(rays.len() as u64).to_le_bytes())?;
    for r in rays {
        if r.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: r.dim(),
            });
        }
        for x in int::to_i64_vec(r.coords())? {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

/// `(width, dim, count)` from a binary header.
pub fn read_binary_header<R: Read>(mut r: R) -> Result<(usize, usize, u64)> {
    let mut buf = [0u8; BINARY_HEADER_LEN as usize];
    r.read_exact(&mut buf)?;
    if &buf[..5] != BINARY_MAGIC {
        return Err(Error::malformed(0, "bad magic, expected SDDR1"));
    }
    let width = buf[5] as usize;
    if !matches!(width, 1 | 2 | 4 | 8) {
        return Err(Error::malformed(0, format!("unsupported integer width {width}")));
    }
    let dim = u32::from_le_bytes(buf[6..10].try_into().expect("4 bytes")) as usize;
    let count = u64::from_le_bytes(buf[10..18].try_into().expect("8 bytes"));
    Ok((width, dim, count))
}

pub(crate) fn decode_le(bytes: &[u8]) -> i64 {
    match bytes.len() {
        1 => i8::from_le_bytes([bytes[0]]) as i64,
        2 => i16::from_le_bytes(bytes.try_into().expect("2 bytes")) as i64,
        4 => i32::from_le_bytes(bytes.try_into().expect("4 bytes")) as i64,
        _ => i64::from_le_bytes(bytes.try_into().expect("8 bytes")),
    }
}

pub fn read_binary_rays<R: Read, N: Int>(mut r: R) -> Result<Vec<Ray<N>>> {
    let (width, dim, count) = read_binary_header(&mut r)?;
    let mut buf = vec![0u8; width * dim];
    let mut out = Vec::new();
    for k in 0..count {
        r.read_exact(&mut buf)
            .map_err(|_| Error::malformed(0, format!("truncated at record {k}")))?;
        let v: Vec<i64> = buf.chunks_exact(width).map(decode_le).collect();
        out.push(Ray::new(int::from_i64_slice(&v))?);
    }
    Ok(out)
}
