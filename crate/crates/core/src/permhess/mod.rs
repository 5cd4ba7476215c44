//! Hessians of the permanent at `Σ_d` and their signatures.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{hollow_ones, signature_exact, ExactMatrix, Signature};
use crate::polyring::{Point, Polynomial};
use crate::rational::{factorial, rat, Rational};

/// `Σ_d` as a row-major point: all ones except `1 - d` in the bottom-right.
pub fn sigma_matrix(d: usize) -> Result<Point> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("Σ_d needs d >= 2, got {d}")));
    }
    let mut coords = vec![Rational::one(); d * d];
    coords[d * d - 1] = rat(1 - d as i64);
    Ok(Point::new(coords))
}

/// Second partial derivatives of `p` at `x0`.
pub fn hessian(p: &Polynomial, x0: &Point) -> Result<ExactMatrix> {
    let n = p.num_vars();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
    }
    let mut h = ExactMatrix::zeros(n, n);
    for i in 0..n {
        let di = p.derivative(i);
        if di.is_zero() {
            continue;
        }
        for j in i..n {
            let v = di.derivative(j).eval(x0)?;
            h[(i, j)] = v.clone();
            h[(j, i)] = v;
        }
    }
    Ok(h)
}

/// Permanent by dynamic programming over column subsets.
pub fn permanent(m: &ExactMatrix) -> Rational {
    let n = m.rows();
    assert!(m.is_square() && n < 24);
    let mut dp = vec![Rational::zero(); 1 << n];
    dp[0] = Rational::one();
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) == 0 && !m[(row, c)].is_zero() {
                let add = &dp[mask] * &m[(row, c)];
                dp[mask | (1 << c)] += add;
            }
        }
    }
    dp[(1 << n) - 1].clone()
}

/// `H_{perm_d, Σ_d}` without expanding `perm_d`: the entry at `((i,j),(i',j'))`
/// is the permanent of `Σ_d` with rows `i, i'` and columns `j, j'` removed, and
/// zero when `i = i'` or `j = j'`.
pub fn hessian_perm_fast(d: usize) -> Result<ExactMatrix> {
    let sigma = sigma_matrix(d)?;
    let s = ExactMatrix::from_fn(d, d, |i, j| sigma.coords()[i * d + j].clone());
    let n = d * d;
    let mut h = ExactMatrix::zeros(n, n);
    for a in 0..n {
        let (i, j) = (a / d, a % d);
        for b in a + 1..n {
            let (i2, j2) = (b / d, b % d);
            if i == i2 || j == j2 {
                continue;
            }
            let rows: Vec<usize> = (0..d).filter(|&r| r != i && r != i2).collect();
            let cols: Vec<usize> = (0..d).filter(|&c| c != j && c != j2).collect();
            let v = permanent(&s.submatrix(&rows, &cols));
            h[(a, b)] = v.clone();
            h[(b, a)] = v;
        }
    }
    Ok(h)
}

/// `B`: zero diagonal, `-2` off the diagonal, `d - 2` in the last row and column.
pub fn block_b(d: usize) -> ExactMatrix {
    ExactMatrix::from_fn(d, d, |i, j| {
        if i == j {
            rat(0)
        } else if i == d - 1 || j == d - 1 {
            rat(d as i64 - 2)
        } else {
            rat(-2)
        }
    })
}

/// `C = (d - 2) S_d`.
pub fn block_c(d: usize) -> ExactMatrix {
    hollow_ones(d).scale(&rat(d as i64 - 2))
}

fn factorial_rat(n: usize) -> Rational {
    Rational::from_integer(factorial(n).into())
}

/// The unscaled block matrix: `B` between distinct rows `i, i' < d`, `C`
/// against the last row, zero on the block diagonal.
fn block_assembly(d: usize) -> ExactMatrix {
    let (b, c, o) = (block_b(d), block_c(d), ExactMatrix::zeros(d, d));
    let blocks: Vec<Vec<ExactMatrix>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        o.clone()
                    } else if i == d - 1 || j == d - 1 {
                        c.clone()
                    } else {
                        b.clone()
                    }
                })
                .collect()
        })
        .collect();
    ExactMatrix::from_blocks(&blocks).expect("uniform block sizes")
}

/// `(d - 3)!` times the block display built from `B` and `C`.
pub fn hessian_blocks(d: usize) -> Result<ExactMatrix> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("the block form needs d >= 3, got {d}")));
    }
    Ok(block_assembly(d).scale(&factorial_rat(d - 3)))
}

/// Congruence `T M T^T` of the unscaled block matrix, with `T` eliminating the
/// last block row against the others, and which of the candidate closed forms
/// its blocks match.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockAnalysis {
    pub blocks_match_hessian: bool,
    pub upper_left_is_kron_b: bool,
    pub upper_left_is_kron_c: bool,
    pub off_diagonal_zero: bool,
    /// Lower-right block equals `-(d-1)/(d-2) C B^{-1} C`.
    pub lower_right_matches: bool,
    pub b_signature: Signature,
    pub c_signature: Signature,
    pub upper_left_signature: Signature,
    pub lower_right_signature: Signature,
}

pub fn block_analysis(d: usize, hessian: &ExactMatrix) -> Result<BlockAnalysis> {
    let scaled = hessian_blocks(d)?;
    let m = block_assembly(d);
    let (b, c) = (block_b(d), block_c(d));
    let b_inv = b.inverse().ok_or_else(|| Error::Invariant("B is singular".into()))?;
    let inv_scale = Rational::one() / rat(d as i64 - 2);
    let l = (&c * &b_inv).scale(&(-inv_scale.clone()));
    let n = d * d;
    let mut t = ExactMatrix::identity(n);
    for blk in 0..d - 1 {
        for i in 0..d {
            for j in 0..d {
                t[((d - 1) * d + i, blk * d + j)] = l[(i, j)].clone();
            }
        }
    }
    let congruent = &(&t * &m) * &t.transpose();
    let head: Vec<usize> = (0..d * (d - 1)).collect();
    let tail: Vec<usize> = (d * (d - 1)..n).collect();
    let upper_left = congruent.submatrix(&head, &head);
    let off = congruent.submatrix(&head, &tail);
    let lower_right = congruent.submatrix(&tail, &tail);
    let expected_lr = (&(&c * &b_inv) * &c).scale(&(-(rat(d as i64 - 1) * inv_scale)));
    let s = hollow_ones(d - 1);
    Ok(BlockAnalysis {
        blocks_match_hessian: &scaled == hessian,
        upper_left_is_kron_b: upper_left == s.kron(&b),
        upper_left_is_kron_c: upper_left == s.kron(&c),
        off_diagonal_zero: off.is_zero(),
        lower_right_matches: lower_right == expected_lr,
        b_signature: signature_exact(&b)?,
        c_signature: signature_exact(&c)?,
        upper_left_signature: signature_exact(&upper_left)?,
        lower_right_signature: signature_exact(&lower_right)?,
    })
}

/// Rank and signature of `H_{perm_d, Σ_d}` with the resulting lower bounds.
#[derive(Clone, Debug, Serialize)]
pub struct HessianReport {
    pub d: usize,
    #[serde(skip)]
    pub hessian: ExactMatrix,
    pub rank: usize,
    pub signature: [usize; 3],
    /// `rank / 2`, the bound through `brank >= rank(H) / 2`.
    pub mr_bound: String,
    /// `n_-` of `H`, the bound through the signature inequality.
    pub n_minus_bound: usize,
    /// `(d-1)^2 + 1`.
    pub new_bound: usize,
    pub block_analysis: Option<BlockAnalysis>,
}

pub fn mr_report(d: usize) -> Result<HessianReport> {
    let h = hessian_perm_fast(d)?;
    let rank = h.rank();
    if rank != d * d {
        return Err(Error::Invariant(format!("Hessian rank {rank} differs from d^2 = {}", d * d)));
    }
    let sig = signature_exact(&h)?;
    let block_analysis = if d >= 3 { Some(block_analysis(d, &h)?) } else { None };
    Ok(HessianReport {
        d,
        rank,
        signature: sig.as_array(),
        mr_bound: Rational::new((rank as i64).into(), 2.into()).to_string(),
        n_minus_bound: sig.n_minus,
        new_bound: (d - 1) * (d - 1) + 1,
        block_analysis,
        hessian: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::perm_poly;

    #[test]
    fn sigma() {
        assert_eq!(sigma_matrix(2).unwrap(), Point::from_ints(&[1, 1, 1, -1]));
        assert_eq!(sigma_matrix(3).unwrap().coords()[8], rat(-2));
        assert!(sigma_matrix(1).is_err());
        let p4 = perm_poly(4).unwrap();
        assert_eq!(p4.eval(&sigma_matrix(4).unwrap()).unwrap(), rat(0));
    }

    #[test]
    fn small_hessians() {
        let xy = &Polynomial::var(2, 0) * &Polynomial::var(2, 1);
        assert_eq!(hessian(&xy, &Point::zeros(2)).unwrap(), ExactMatrix::from_ints(&[[0, 1], [1, 0]]));
        let h2 = hessian(&perm_poly(2).unwrap(), &sigma_matrix(2).unwrap()).unwrap();
        let expected = ExactMatrix::from_ints(&[[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]);
        assert_eq!(h2, expected);
        assert_eq!(hessian_perm_fast(2).unwrap(), expected);
    }

    #[test]
    fn fast_matches_symbolic() {
        for d in 2..=4 {
            let slow = hessian(&perm_poly(d).unwrap(), &sigma_matrix(d).unwrap()).unwrap();
            assert_eq!(hessian_perm_fast(d).unwrap(), slow, "d = {d}");
        }
    }

    #[test]
    fn blocks_for_three() {
        assert_eq!(block_b(3), ExactMatrix::from_ints(&[[0, -2, 1], [-2, 0, 1], [1, 1, 0]]));
        assert_eq!(block_c(3), hollow_ones(3));
        assert_eq!(hessian_blocks(3).unwrap(), hessian_perm_fast(3).unwrap());
        assert!(hessian_blocks(2).is_err());
    }

    #[test]
    fn report_d3() {
        let r = mr_report(3).unwrap();
        assert_eq!(r.rank, 9);
        assert_eq!(r.signature, [4, 5, 0]);
        assert_eq!(r.mr_bound, "9/2");
        let blocks = r.block_analysis.unwrap();
        assert!(blocks.blocks_match_hessian && blocks.upper_left_is_kron_b && !blocks.upper_left_is_kron_c);
        assert!(blocks.off_diagonal_zero && blocks.lower_right_matches);
    }
}
