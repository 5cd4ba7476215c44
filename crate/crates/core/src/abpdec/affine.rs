use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::ExactMatrix;
use crate::polyring::{Monomial, Point, Polynomial};

/// `Q(x) = C + sum_l x_l M_l`: an `n x n` matrix of affine polynomials stored as
/// a constant matrix plus one coefficient matrix per variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AffineMatrixRepr")]
pub struct AffineMatrixPoly {
    n: usize,
    num_vars: usize,
    constant: ExactMatrix,
    coefficients: Vec<ExactMatrix>,
}

#[derive(Deserialize)]
struct AffineMatrixRepr {
    n: usize,
    num_vars: usize,
    constant: ExactMatrix,
    coefficients: Vec<ExactMatrix>,
}

impl TryFrom<AffineMatrixRepr> for AffineMatrixPoly {
    type Error = Error;
    fn try_from(r: AffineMatrixRepr) -> Result<Self> {
        if r.coefficients.len() != r.num_vars {
            return Err(Error::DimensionMismatch { expected: r.num_vars, found: r.coefficients.len() });
        }
        let q = AffineMatrixPoly::new(r.constant, r.coefficients)?;
        if q.n != r.n {
            return Err(Error::DimensionMismatch { expected: r.n, found: q.n });
        }
        Ok(q)
    }
}

impl AffineMatrixPoly {
    pub fn new(constant: ExactMatrix, coefficients: Vec<ExactMatrix>) -> Result<Self> {
        if !constant.is_square() {
            return Err(Error::InvalidArgument("affine matrix must be square".into()));
        }
        let n = constant.rows();
        for c in &coefficients {
            if c.rows() != n || c.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.rows().max(c.cols()) });
            }
        }
        Ok(AffineMatrixPoly { n, num_vars: coefficients.len(), constant, coefficients })
    }

    pub fn linear(n: usize, coefficients: Vec<ExactMatrix>) -> Result<Self> {
        Self::new(ExactMatrix::zeros(n, n), coefficients)
    }

    /// From a square array of polynomials of degree at most one.
    pub fn from_polynomials(entries: &[Vec<Polynomial>], num_vars: usize) -> Result<Self> {
        let n = entries.len();
        let mut constant = ExactMatrix::zeros(n, n);
        let mut coefficients = vec![ExactMatrix::zeros(n, n); num_vars];
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, p) in row.iter().enumerate() {
                if p.num_vars() != num_vars {
                    return Err(Error::DimensionMismatch { expected: num_vars, found: p.num_vars() });
                }
                for (m, c) in p.terms() {
                    match m.degree() {
                        0 => constant[(i, j)] = c.clone(),
                        1 => {
                            let l = m.exponents().iter().position(|&e| e == 1).expect("degree one");
                            coefficients[l][(i, j)] = c.clone();
                        }
                        _ => return Err(Error::InvalidArgument(format!("entry ({i},{j}) has degree above one"))),
                    }
                }
            }
        }
        Self::new(constant, coefficients)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constant(&self) -> &ExactMatrix {
        &self.constant
    }

    pub fn coefficients(&self) -> &[ExactMatrix] {
        &self.coefficients
    }

    pub fn is_linear(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        let mut p = Polynomial::constant(self.num_vars, self.constant[(i, j)].clone());
        for (l, c) in self.coefficients.iter().enumerate() {
            p.add_term(Monomial::var(self.num_vars, l), c[(i, j)].clone());
        }
        p
    }

    pub fn to_polynomials(&self) -> Vec<Vec<Polynomial>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// The constant matrix `Q(x0)`.
    pub fn eval(&self, x0: &Point) -> Result<ExactMatrix> {
        if x0.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, found: x0.len() });
        }
        let mut out = self.constant.clone();
        for (c, x) in self.coefficients.iter().zip(x0.coords()) {
            if !x.is_zero() {
                out = &out + &c.scale(x);
            }
        }
        Ok(out)
    }

    pub fn linear_part(&self) -> AffineMatrixPoly {
        self.with_constant(ExactMatrix::zeros(self.n, self.n))
    }

    pub fn with_constant(&self, constant: ExactMatrix) -> AffineMatrixPoly {
        assert_eq!((constant.rows(), constant.cols()), (self.n, self.n));
        AffineMatrixPoly { constant, ..self.clone() }
    }

    /// `S Q(x) T`.
    pub fn transform(&self, s: &ExactMatrix, t: &ExactMatrix) -> AffineMatrixPoly {
        AffineMatrixPoly {
            n: s.rows(),
            num_vars: self.num_vars,
            constant: &(s * &self.constant) * t,
            coefficients: self.coefficients.iter().map(|c| &(s * c) * t).collect(),
        }
    }

    /// Rows `rows` and columns `cols` of every coefficient matrix.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> AffineMatrixPoly {
        assert_eq!(rows.len(), cols.len());
        AffineMatrixPoly {
            n: rows.len(),
            num_vars: self.num_vars,
            constant: self.constant.submatrix(rows, cols),
            coefficients: self.coefficients.iter().map(|c| c.submatrix(rows, cols)).collect(),
        }
    }

    /// Deletes row and column `index`.
    pub fn delete_index(&self, index: usize) -> AffineMatrixPoly {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != index).collect();
        self.submatrix(&keep, &keep)
    }

    /// Symbolic determinant.
    pub fn det(&self) -> Polynomial {
        det_of_polynomials(&self.to_polynomials(), self.num_vars)
    }
}

/// Determinant of a square polynomial array by row-wise expansion over
/// column subsets; `O(n 2^n)` polynomial products.
pub fn det_of_polynomials(entries: &[Vec<Polynomial>], num_vars: usize) -> Polynomial {
    let n = entries.len();
    assert!(n < 24, "symbolic determinant limited to n < 24");
    let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << n];
    dp[0] = Some(Polynomial::one(num_vars));
    for mask in 0usize..(1 << n) {
        let Some(val) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(val);
            continue;
        }
        for (c, entry) in entries[row].iter().enumerate() {
            if mask & (1 << c) != 0 || entry.is_zero() {
                continue;
            }
            let inversions = (mask >> (c + 1)).count_ones();
            let term = &val * entry;
            let term = if inversions % 2 == 1 { -&term } else { term };
            let slot = &mut dp[mask | (1 << c)];
            *slot = Some(match slot.take() {
                Some(prev) => &prev + &term,
                None => term,
            });
        }
    }
    dp[(1 << n) - 1].take().unwrap_or_else(|| Polynomial::zero(num_vars))
}
