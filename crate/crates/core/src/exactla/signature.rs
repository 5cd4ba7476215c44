use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ExactMatrix;
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

/// Inertia `(n_plus, n_minus, n_zero)` of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Signature { n_plus, n_minus, n_zero }
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus
    }

    pub fn size(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    pub fn negated(&self) -> Signature {
        Signature::new(self.n_minus, self.n_plus, self.n_zero)
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.n_plus, self.n_minus, self.n_zero]
    }
}

/// Signature by rational congruence diagonalization.
///
/// A nonzero diagonal pivot contributes its sign and is eliminated by a
/// symmetric Schur complement. When the active diagonal vanishes but an
/// off-diagonal entry `b` survives, the 2x2 block `[[0, b], [b, 0]]` is
/// eliminated instead and contributes one positive and one negative.
pub fn signature_exact(m: &ExactMatrix) -> Result<Signature> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a = m.to_rows();
    let mut sig = Signature::new(0, 0, 0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let piv = a[p][p].clone();
            if piv.is_positive() {
                sig.n_plus += 1;
            } else {
                sig.n_minus += 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
            let col: Vec<Rational> = rest.iter().map(|&i| a[i][p].clone()).collect();
            let inv = Rational::one() / piv;
            a = rest
                .iter()
                .enumerate()
                .map(|(ri, &i)| {
                    let scaled = &col[ri] * &inv;
                    rest.iter()
                        .enumerate()
                        .map(|(rj, &j)| if scaled.is_zero() { a[i][j].clone() } else { &a[i][j] - &scaled * &col[rj] })
                        .collect()
                })
                .collect();
            continue;
        }
        let Some((p, q)) = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
        else {
            sig.n_zero += n;
            break;
        };
        sig.n_plus += 1;
        sig.n_minus += 1;
        // Schur complement against [[0, b], [b, 0]]^{-1} = [[0, 1/b], [1/b, 0]].
        let inv_b = Rational::one() / &a[p][q];
        let rest: Vec<usize> = (0..n).filter(|&i| i != p && i != q).collect();
        let vp: Vec<Rational> = rest.iter().map(|&i| a[i][p].clone()).collect();
        let vq: Vec<Rational> = rest.iter().map(|&i| a[i][q].clone()).collect();
        a = rest
            .iter()
            .enumerate()
            .map(|(ri, &i)| {
                rest.iter()
                    .enumerate()
                    .map(|(rj, &j)| &a[i][j] - &(&(&vp[ri] * &vq[rj]) + &(&vq[ri] * &vp[rj])) * &inv_b)
                    .collect()
            })
            .collect();
    }
    Ok(sig)
}

/// `max(n_+, n_-)` of `Q + Q^T`, a lower bound on `rank(Q)`.
pub fn signature_lower_bound(q: &ExactMatrix) -> Result<usize> {
    if !q.is_square() {
        return Err(Error::InvalidArgument("signature bound needs a square matrix".into()));
    }
    let sym = q + &q.transpose();
    let s = signature_exact(&sym)?;
    Ok(s.n_plus.max(s.n_minus))
}

/// Writes a symmetric `M` as `P - N` with `P`, `N` positive semidefinite, both
/// exact: `M = sum_i c_i v_i v_i^T` from symmetric elimination, with positive
/// `c_i` going to `P` and negative ones to `N`.
pub fn psd_split(m: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut rest = m.clone();
    let mut pos = ExactMatrix::zeros(n, n);
    let mut neg = ExactMatrix::zeros(n, n);
    let outer = |v: &[Rational], c: &Rational| ExactMatrix::from_fn(n, n, |i, j| c * &v[i] * &v[j]);
    let col = |a: &ExactMatrix, p: usize| (0..n).map(|i| a[(i, p)].clone()).collect::<Vec<_>>();
    loop {
        let mut terms: Vec<(Rational, Vec<Rational>)> = Vec::new();
        if let Some(p) = (0..n).find(|&i| !rest[(i, i)].is_zero()) {
            terms.push((Rational::one() / &rest[(p, p)], col(&rest, p)));
        } else if let Some((p, q)) =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !rest[(i, j)].is_zero())
        {
            // With zero diagonal at p, q: M - (c_p c_q^T + c_q c_p^T) / b clears rows p and q.
            let (cp, cq) = (col(&rest, p), col(&rest, q));
            let half = Rational::one() / (rat(2) * &rest[(p, q)]);
            let u: Vec<Rational> = cp.iter().zip(&cq).map(|(a, b)| a + b).collect();
            let w: Vec<Rational> = cp.iter().zip(&cq).map(|(a, b)| a - b).collect();
            terms.push((half.clone(), u));
            terms.push((-half, w));
        } else {
            break;
        }
        for (c, v) in terms {
            let t = outer(&v, &c);
            rest = &rest - &t;
            if c.is_positive() {
                pos = &pos + &t;
            } else {
                neg = &neg - &t;
            }
        }
    }
    Ok((pos, neg))
}

/// `S_d`: zero diagonal, ones elsewhere.
pub fn hollow_ones(d: usize) -> ExactMatrix {
    ExactMatrix::from_fn(d, d, |i, j| if i == j { Rational::zero() } else { Rational::one() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn basic_signatures() {
        assert_eq!(signature_exact(&hollow_ones(3)).unwrap(), Signature::new(1, 2, 0));
        assert_eq!(signature_exact(&ExactMatrix::from_ints(&[[2, 0], [0, 2]])).unwrap(), Signature::new(2, 0, 0));
        assert_eq!(signature_exact(&ExactMatrix::from_ints(&[[0, 1], [1, 0]])).unwrap(), Signature::new(1, 1, 0));
        assert_eq!(signature_exact(&ExactMatrix::zeros(3, 3)).unwrap(), Signature::new(0, 0, 3));
        assert!(matches!(signature_exact(&ExactMatrix::from_ints(&[[0, 1], [0, 0]])), Err(Error::NotSymmetric)));
    }

    #[test]
    fn hollow_ones_inertia() {
        for d in 2..=8 {
            assert_eq!(signature_exact(&hollow_ones(d)).unwrap(), Signature::new(1, d - 1, 0));
        }
    }

    #[test]
    fn lower_bound_examples() {
        let q = ExactMatrix::from_rows(vec![vec![frac(1, 2), frac(1, 2)], vec![frac(-1, 2), frac(-1, 2)]]).unwrap();
        assert_eq!(signature_lower_bound(&q).unwrap(), 1);
        assert_eq!(q.rank(), 1);
        assert_eq!(signature_lower_bound(&ExactMatrix::identity(4)).unwrap(), 4);
        let skew = ExactMatrix::from_ints(&[[0, 1, -2], [-1, 0, 3], [2, -3, 0]]);
        assert_eq!(signature_lower_bound(&skew).unwrap(), 0);
    }

    #[test]
    fn psd_split_is_exact() {
        let m = ExactMatrix::from_ints(&[[0, 1, 2], [1, 0, -1], [2, -1, 3]]);
        let (p, n) = psd_split(&m).unwrap();
        assert_eq!(&p - &n, m);
        let sig = signature_exact(&m).unwrap();
        assert_eq!(signature_exact(&p).unwrap().n_minus, 0);
        assert_eq!(signature_exact(&n).unwrap().n_minus, 0);
        assert_eq!(p.rank(), sig.n_plus);
        assert_eq!(n.rank(), sig.n_minus);
    }

    #[test]
    fn kron_signature() {
        let s2 = hollow_ones(2);
        assert_eq!(signature_exact(&s2.kron(&s2)).unwrap(), Signature::new(2, 2, 0));
    }
}
