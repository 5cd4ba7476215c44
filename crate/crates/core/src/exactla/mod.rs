//! Exact rational linear algebra.

mod json;
mod normal_form;
mod signature;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, to_f64, Rational};

pub use normal_form::{lambda_matrix, lambda_normal_form, nonzero_normal_form, LambdaForm, NonzeroForm};
pub use signature::{hollow_ones, psd_split, signature_exact, signature_lower_bound, Signature};

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for integer literals; panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.as_ref().iter().map(|&v| rat(v)).collect()).collect();
        Self::from_rows(rows).expect("rectangular literal")
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_f64).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> ExactMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    pub fn scale(&self, c: &Rational) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Assembles a block matrix; blocks in a block-row must share a height and
    /// blocks in a block-column a width.
    pub fn from_blocks(blocks: &[Vec<ExactMatrix>]) -> Result<ExactMatrix> {
        let heights: Vec<usize> = blocks.iter().map(|r| r.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = blocks.first().map_or(Vec::new(), |r| r.iter().map(|b| b.cols).collect());
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::DimensionMismatch { expected: widths.len(), found: row.len() });
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] {
                    return Err(Error::DimensionMismatch { expected: heights[bi], found: b.rows });
                }
                if b.cols != widths[bj] {
                    return Err(Error::DimensionMismatch { expected: widths[bj], found: b.cols });
                }
            }
        }
        let total_r: usize = heights.iter().sum();
        let total_c: usize = widths.iter().sum();
        let mut out = ExactMatrix::zeros(total_r, total_c);
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            &self[(i / other.rows, j / other.cols)] * &other[(i % other.rows, j % other.cols)]
        })
    }

    /// Rows scaled by the lcm of their denominators, as integers.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
            })
            .collect()
    }

    /// Rank over Q by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.integer_rows();
        let (r, c) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..c {
            if rank == r {
                break;
            }
            let Some(p) = (rank..r).find(|&i| !m[i][col].is_zero()) else { continue };
            m.swap(rank, p);
            for i in rank + 1..r {
                for j in col + 1..c {
                    let v = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let scale: BigInt =
            (0..n).map(|i| self.row(i).iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))).product();
        let mut m = self.integer_rows();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != k {
                m.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = Rational::new(prev, scale);
        Ok(if negate { -det } else { det })
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = ExactMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let piv = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] / &piv;
                inv[(k, j)] = &inv[(k, j)] / &piv;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let da = &f * &a[(k, j)];
                    a[(i, j)] -= da;
                    let di = &f * &inv[(k, j)];
                    inv[(i, j)] -= di;
                }
            }
        }
        Some(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// Solution set of `A x = b`: a particular solution plus a nullspace basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
}

/// Solves `A x = b` exactly by reduced row echelon form. Free variables are set
/// to zero in the particular solution; nullspace vectors carry a single 1 in
/// their free coordinate. Returns `None` when the system is inconsistent.
pub fn solve_affine(a: &ExactMatrix, b: &[Rational]) -> Option<AffineSolution> {
    assert_eq!(a.rows, b.len());
    let (m, n) = (a.rows, a.cols);
    let mut aug = ExactMatrix::from_fn(m, n + 1, |i, j| if j < n { a[(i, j)].clone() } else { b[i].clone() });
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !aug[(i, col)].is_zero()) else { continue };
        aug.swap_rows(row, p);
        let piv = aug[(row, col)].clone();
        for j in col..=n {
            aug[(row, j)] = &aug[(row, j)] / &piv;
        }
        for i in 0..m {
            if i == row || aug[(i, col)].is_zero() {
                continue;
            }
            let f = aug[(i, col)].clone();
            for j in col..=n {
                let d = &f * &aug[(row, j)];
                aug[(i, j)] -= d;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..m).any(|i| !aug[(i, n)].is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[(r, n)].clone();
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let nullspace = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&aug[(r, f)];
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, nullspace })
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(ExactMatrix::from_ints(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]).rank(), 1);
        assert_eq!(ExactMatrix::zeros(2, 3).rank(), 0);
        let m = ExactMatrix::from_rows(vec![
            vec![frac(1, 2), frac(1, 3), rat(0)],
            vec![rat(3), rat(2), rat(0)],
            vec![rat(0), rat(0), frac(-5, 7)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(ExactMatrix::from_ints(&[[0, 1, 2], [0, 2, 4]]).rank(), 1);
    }

    #[test]
    fn det_and_inverse() {
        let m = ExactMatrix::from_rows(vec![vec![frac(1, 2), rat(2)], vec![rat(3), frac(-1, 3)]]).unwrap();
        assert_eq!(m.det().unwrap(), frac(-1, 6) - rat(6));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, ExactMatrix::identity(2));
        let swap = ExactMatrix::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(swap.det().unwrap(), rat(-1));
        assert!(ExactMatrix::from_ints(&[[1, 2], [2, 4]]).inverse().is_none());
        assert_eq!(ExactMatrix::from_ints(&[[1, 2], [2, 4]]).det().unwrap(), rat(0));
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(ExactMatrix::identity(2).kron(&ExactMatrix::identity(3)), ExactMatrix::identity(6));
    }

    #[test]
    fn affine_solve() {
        // x + y = 1, z = 2
        let a = ExactMatrix::from_ints(&[[1, 1, 0], [0, 0, 1]]);
        let sol = solve_affine(&a, &[rat(1), rat(2)]).unwrap();
        assert_eq!(sol.particular, vec![rat(1), rat(0), rat(2)]);
        assert_eq!(sol.nullspace, vec![vec![rat(-1), rat(1), rat(0)]]);
        let inconsistent = ExactMatrix::from_ints(&[[1, 1], [2, 2]]);
        assert!(solve_affine(&inconsistent, &[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn blocks_assemble() {
        let i2 = ExactMatrix::identity(2);
        let z = ExactMatrix::zeros(2, 2);
        let m = ExactMatrix::from_blocks(&[vec![z.clone(), i2.clone()], vec![i2.clone(), z.clone()]]).unwrap();
        assert_eq!(m.rows(), 4);
        assert_eq!(m[(0, 2)], rat(1));
        assert_eq!(m[(2, 0)], rat(1));
        assert!(ExactMatrix::from_blocks(&[vec![z.clone(), ExactMatrix::zeros(3, 2)]]).is_err());
    }
}
