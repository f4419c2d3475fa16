//! Exact integer linear algebra.
//!
//! Elimination is fraction-free: a Bareiss-style Gauss–Jordan sweep where every
//! update is divided exactly by the previous pivot, so entries stay integral
//! and bounded by minors of the input.

use crate::error::{Error, Result};
use crate::int::{self, Int};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix<N> {
    rows: usize,
    cols: usize,
    data: Vec<N>,
}

impl<N: Int> IntMatrix<N> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![N::zero(); rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.set(i, i, N::one());
        }
        m
    }

    /// Builds from row vectors; `cols` is needed for the empty case.
    pub fn from_rows<R: AsRef<[N]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[N] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &N {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: N) {
        self.data[i * self.cols + j] = v;
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[N]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<N>> {
        self.iter_rows().map(<[N]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<N> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[N]) -> Result<Vec<N>> {
        if x.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: x.len(),
            });
        }
        self.iter_rows().map(|r| int::dot(r, x)).collect()
    }

    pub fn mul(&self, other: &IntMatrix<N>) -> Result<IntMatrix<N>> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let ot = other.transpose();
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.set(i, j, int::dot(self.row(i), ot.row(j))?);
            }
        }
        Ok(out)
    }

    /// Selects the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn convert<M: Int>(&self) -> Result<IntMatrix<M>> {
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: int::convert(&self.data)?,
        })
    }
}

/// Result of a fraction-free Gauss–Jordan sweep.
///
/// The first `rank` rows are the nonzero rows of the reduced matrix. Every
/// pivot entry equals `det`, and pivot columns are zero outside their row.
#[derive(Clone, Debug)]
pub struct Reduced<N> {
    pub matrix: IntMatrix<N>,
    pub pivots: Vec<usize>,
    pub det: N,
}

impl<N> Reduced<N> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn row_reduce<N: Int>(m: &IntMatrix<N>) -> Result<Reduced<N>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<N>> = m.to_rows();
    let mut prev = N::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let pv = pivot_row[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                // Columns left of c are zero in every non-pivot position and
                // the pivot rows above only need rescaling there.
                let v = int::cross(&pv, &row[j], &f, &pivot_row[j])?;
                debug_assert!(v.is_multiple_of(&prev));
                row[j] = v.div_floor(&prev);
            }
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Ok(Reduced {
        matrix: IntMatrix::from_rows(cols, &a)?,
        pivots,
        det: prev,
    })
}

pub fn rank<N: Int>(m: &IntMatrix<N>) -> Result<usize> {
    Ok(row_reduce(m)?.rank())
}

/// Primitive basis of the right nullspace, returned as the columns of a
/// `cols × (cols - rank)` matrix.
pub fn nullspace_basis<N: Int>(m: &IntMatrix<N>) -> Result<IntMatrix<N>> {
    let red = row_reduce(m)?;
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut basis = IntMatrix::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        let mut v = vec![N::zero(); cols];
        v[f] = red.det.clone();
        for (i, &p) in red.pivots.iter().enumerate() {
            v[p] = -red.matrix.get(i, f).clone();
        }
        int::reduce_by_gcd(&mut v)?;
        for (i, x) in v.into_iter().enumerate() {
            basis.set(i, k, x);
        }
    }
    Ok(basis)
}

/// The primitive generator of a one-dimensional kernel, first nonzero entry
/// positive.
pub fn kernel_vector<N: Int>(m: &IntMatrix<N>) -> Result<Vec<N>> {
    let basis = nullspace_basis(m)?;
    if basis.cols() != 1 {
        return Err(Error::Rank {
            expected: m.cols() - 1,
            found: m.cols() - basis.cols(),
        });
    }
    int::normalize_primitive(&basis.column(0))
}

/// Incrementally built row echelon form with gcd-normalized rows. Used where
/// rows arrive one at a time and only the rank (or membership in the row
/// space) matters.
#[derive(Clone, Debug)]
pub struct RowEchelon<N> {
    cols: usize,
    rows: Vec<(usize, Vec<N>)>,
}

impl<N: Int> RowEchelon<N> {
    pub fn new(cols: usize) -> Self {
        RowEchelon {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, row: &[N]) -> Result<Vec<N>> {
        let mut v = row.to_vec();
        for (p, b) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            let g = b[*p].clone();
            for j in 0..self.cols {
                if b[j].is_zero() && v[j].is_zero() {
                    continue;
                }
                v[j] = int::cross(&g, &v[j], &f, &b[j])?;
            }
            if !v.iter().all(|x| x.is_zero()) {
                int::reduce_by_gcd(&mut v)?;
            }
        }
        Ok(v)
    }

    /// Adds `row`; returns whether the rank increased.
    pub fn insert(&mut self, row: &[N]) -> Result<bool> {
        if row.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: row.len(),
            });
        }
        let v = self.reduce(row)?;
        match v.iter().position(|x| !x.is_zero()) {
            None => Ok(false),
            Some(p) => {
                self.rows.push((p, v));
                Ok(true)
            }
        }
    }

    pub fn spans(&self, row: &[N]) -> Result<bool> {
        Ok(self.reduce(row)?.iter().all(|x| x.is_zero()))
    }
}

/// Rank computed row by row, stopping as soon as `cap` is reached.
pub fn rank_capped<N: Int, R: AsRef<[N]>>(cols: usize, rows: impl IntoIterator<Item = R>, cap: usize) -> Result<usize> {
    let mut ech = RowEchelon::new(cols);
    for r in rows {
        if ech.rank() >= cap {
            break;
        }
        ech.insert(r.as_ref())?;
    }
    Ok(ech.rank())
}

/// Given a `d × d` invertible matrix (as rows), returns the `d` primitive
/// vectors `r_k` with `rows · r_k` a positive multiple of the unit vector `e_k`.
pub fn simplicial_rays<N: Int>(rows: &[Vec<N>]) -> Result<Vec<Vec<N>>> {
    let d = rows.len();
    let mut out = Vec::with_capacity(d);
    for k in 0..d {
        let others: Vec<&Vec<N>> = rows.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, r)| r).collect();
        let m = IntMatrix::from_rows(d, &others)?;
        let mut x = kernel_vector(&m)?;
        let s = int::dot(&rows[k], &x)?;
        if s.is_zero() {
            return Err(Error::Rank { expected: d, found: d - 1 });
        }
        if s.is_negative() {
            for v in x.iter_mut() {
                *v = -v.clone();
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Solves `basis · y = target` for the coordinates `y` of `target` in the
/// column space of `basis` (columns linearly independent). Returns the
/// primitive integer multiple `(scale, y)` with `basis · y = scale · target`
/// and `scale > 0`.
pub fn coordinates_in_basis<N: Int>(basis: &IntMatrix<N>, target: &[N]) -> Result<(N, Vec<N>)> {
    let (d, k) = (basis.rows(), basis.cols());
    if target.len() != d {
        return Err(Error::Dimension { expected: d, found: target.len() });
    }
    // Augmented system [basis | -target]; its kernel is spanned by (y, scale).
    let mut aug = IntMatrix::zeros(d, k + 1);
    for (i, t) in target.iter().enumerate() {
        for j in 0..k {
            aug.set(i, j, basis.get(i, j).clone());
        }
        aug.set(i, k, -t.clone());
    }
    let ns = nullspace_basis(&aug)?;
    if ns.cols() != 1 {
        return Err(Error::Rank { expected: k, found: k + 1 - ns.cols() });
    }
    let mut v = ns.column(0);
    if v[k].is_zero() {
        return Err(Error::Rank { expected: k, found: k });
    }
    if v[k].is_negative() {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    let scale = v.pop().expect("nonempty");
    Ok((scale, v))
}
