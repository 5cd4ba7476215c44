use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ExactMatrix;
use crate::abpdec::AffineMatrixPoly;
use crate::error::{Error, Result};
use crate::polyring::Point;
use crate::rational::{serde_str, Rational};

/// Symbolic re-expansion is run for matrices up to this size.
pub const VERIFY_MAX_N: usize = 5;

/// `Λ_n^r`: diagonal with ones in the last `r` positions.
pub fn lambda_matrix(n: usize, r: usize) -> ExactMatrix {
    assert!(r <= n);
    ExactMatrix::from_fn(n, n, |i, j| if i == j && i >= n - r { Rational::one() } else { Rational::zero() })
}

/// `S Q(x0) T = Λ_n^r` with `det(S) det(T) = 1`, and the linear matrix
/// `A(x) = S L(x) T` satisfying `det(A(x) + Λ_n^r) = det(Q)(x + x0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaForm {
    pub s: ExactMatrix,
    pub t: ExactMatrix,
    pub r: usize,
    pub a: AffineMatrixPoly,
}

/// `det(Q)(x + x0) = alpha * det(A(x) + I)` for nonsingular `Q(x0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonzeroForm {
    pub a: AffineMatrixPoly,
    #[serde(with = "serde_str")]
    pub alpha: Rational,
}

/// Full-pivot elimination: returns `(S, T, r)` with `S M T = diag(I_r, 0)`.
fn rank_normal_form(m: &ExactMatrix) -> (ExactMatrix, ExactMatrix, usize) {
    let n = m.rows();
    let mut w = m.clone();
    let mut s = ExactMatrix::identity(n);
    let mut t = ExactMatrix::identity(n);
    let mut r = 0;
    while r < n {
        let Some((pi, pj)) = (r..n).flat_map(|i| (r..n).map(move |j| (i, j))).find(|&(i, j)| !w[(i, j)].is_zero())
        else {
            break;
        };
        w.swap_rows(r, pi);
        s.swap_rows(r, pi);
        w.swap_cols(r, pj);
        t.swap_cols(r, pj);
        let inv = Rational::one() / &w[(r, r)];
        for j in 0..n {
            w[(r, j)] = &w[(r, j)] * &inv;
            s[(r, j)] = &s[(r, j)] * &inv;
        }
        for i in 0..n {
            if i == r || w[(i, r)].is_zero() {
                continue;
            }
            let f = w[(i, r)].clone();
            for j in 0..n {
                let dw = &f * &w[(r, j)];
                w[(i, j)] -= dw;
                let ds = &f * &s[(r, j)];
                s[(i, j)] -= ds;
            }
        }
        for j in 0..n {
            if j == r || w[(r, j)].is_zero() {
                continue;
            }
            let f = w[(r, j)].clone();
            for i in 0..n {
                let dw = &f * &w[(i, r)];
                w[(i, j)] -= dw;
                let dt = &f * &t[(i, r)];
                t[(i, j)] -= dt;
            }
        }
        r += 1;
    }
    debug_assert_eq!(
        &(&s * m) * &t,
        ExactMatrix::from_fn(n, n, |i, j| if i == j && i < r { Rational::one() } else { Rational::zero() })
    );
    (s, t, r)
}

fn verify_expansion(q: &AffineMatrixPoly, x0: &Point, lhs: impl FnOnce() -> crate::polyring::Polynomial) -> Result<()> {
    if q.n() > VERIFY_MAX_N {
        return Ok(());
    }
    let target = q.det().shift(x0)?;
    let got = lhs();
    if got != target {
        return Err(Error::VerificationFailed("normal form does not re-expand to the shifted determinant".into()));
    }
    Ok(())
}

pub fn lambda_normal_form(q: &AffineMatrixPoly, x0: &Point) -> Result<LambdaForm> {
    let m = q.eval(x0)?;
    if !m.det()?.is_zero() {
        return Err(Error::Precondition("det(Q(x0)) is nonzero, so x0 is not a zero of det(Q)".into()));
    }
    let n = q.n();
    let (s0, t0, r) = rank_normal_form(&m);
    // Move the identity block to the bottom-right corner.
    let order: Vec<usize> = (r..n).chain(0..r).collect();
    let all: Vec<usize> = (0..n).collect();
    let mut s = s0.submatrix(&order, &all);
    let t = t0.submatrix(&all, &order);
    let delta = &s.det()? * &t.det()?;
    // Row 0 of S multiplies a zero row of Λ since r < n.
    let inv = Rational::one() / delta;
    for j in 0..n {
        s[(0, j)] = &s[(0, j)] * &inv;
    }
    let lambda = lambda_matrix(n, r);
    if &(&s * &m) * &t != lambda {
        return Err(Error::Invariant("S Q(x0) T differs from the Λ normal form".into()));
    }
    let a = q.linear_part().transform(&s, &t);
    verify_expansion(q, x0, || a.with_constant(lambda.clone()).det())?;
    Ok(LambdaForm { s, t, r, a })
}

pub fn nonzero_normal_form(q: &AffineMatrixPoly, x0: &Point) -> Result<NonzeroForm> {
    let m = q.eval(x0)?;
    let alpha = m.det()?;
    if alpha.is_zero() {
        return Err(Error::Precondition("det(Q(x0)) vanishes; use the Λ normal form".into()));
    }
    let inv = m.inverse().ok_or_else(|| Error::Invariant("nonzero determinant but no inverse".into()))?;
    let a = q.linear_part().transform(&inv, &ExactMatrix::identity(q.n()));
    verify_expansion(q, x0, || a.with_constant(ExactMatrix::identity(q.n())).det().scale(&alpha))?;
    Ok(NonzeroForm { a, alpha })
}
