//! Constructive bi-polynomial decompositions of the homogeneous parts of
//! `det(A(x) + Λ_n^r)` for linear `A`.

use itertools::Itertools;
use num_bigint::BigUint;

use super::bounds::{dc_pipeline_bound, p_bound, q_bound};
use super::mv::ClowProgram;
use super::{AffineMatrixPoly, BiDecomposition};
use crate::error::{Error, Result};
use crate::exactla::{lambda_matrix, lambda_normal_form};
use crate::polyring::{monomial_split, Point, Polynomial};

type PolyMatrix = Vec<Vec<Polynomial>>;

fn row_times(v: &[Polynomial], m: &PolyMatrix, num_vars: usize) -> Vec<Polynomial> {
    (0..m.len())
        .map(|j| v.iter().zip(m).fold(Polynomial::zero(num_vars), |acc, (x, row)| &acc + &(x * &row[j])))
        .collect()
}

fn times_col(m: &PolyMatrix, v: &[Polynomial], num_vars: usize) -> Vec<Polynomial> {
    m.iter().map(|row| row.iter().zip(v).fold(Polynomial::zero(num_vars), |acc, (x, y)| &acc + &(x * y))).collect()
}

fn dot(u: &[Polynomial], v: &[Polynomial], num_vars: usize) -> Polynomial {
    u.iter().zip(v).fold(Polynomial::zero(num_vars), |acc, (x, y)| &acc + &(x * y))
}

fn negate_if(p: Polynomial, odd: bool) -> Polynomial {
    if odd {
        -&p
    } else {
        p
    }
}

fn check_bound(dec: &BiDecomposition, bound: BigUint, what: &str) -> Result<()> {
    if BigUint::from(dec.len()) > bound {
        return Err(Error::Invariant(format!("{what}: {} pairs exceed the bound {bound}", dec.len())));
    }
    Ok(())
}

/// Walk pieces through the interior `{1, .., n-1}`: `out` is `a_{0,I}`, `inn`
/// is `a_{I,0}` and `rest` the interior submatrix.
struct Walks {
    num_vars: usize,
    out: Vec<Polynomial>,
    inn: Vec<Polynomial>,
    rest: PolyMatrix,
}

impl Walks {
    fn new(entries: &PolyMatrix, num_vars: usize) -> Self {
        let n = entries.len();
        Walks {
            num_vars,
            out: (1..n).map(|j| entries[0][j].clone()).collect(),
            inn: (1..n).map(|i| entries[i][0].clone()).collect(),
            rest: (1..n).map(|i| (1..n).map(|j| entries[i][j].clone()).collect()).collect(),
        }
    }

    /// `a_{0,I} A_I^{steps}`: walks leaving vertex 0 with `steps + 1` edges.
    fn forward(&self, steps: usize) -> Vec<Polynomial> {
        (0..steps).fold(self.out.clone(), |v, _| row_times(&v, &self.rest, self.num_vars))
    }

    /// `A_I^{steps} a_{I,0}`.
    fn backward(&self, steps: usize) -> Vec<Polynomial> {
        (0..steps).fold(self.inn.clone(), |v, _| times_col(&self.rest, &v, self.num_vars))
    }
}

/// Decomposition of `q_{A,2k,t}`, the signed sum over clow sequences of length
/// `2k` through vertex `0` whose first clow has length `t`.
pub fn decompose_q(a: &AffineMatrixPoly, k: usize, t: usize) -> Result<BiDecomposition> {
    if !a.is_linear() {
        return Err(Error::NotLinear);
    }
    if k == 0 || t == 0 || t > 2 * k {
        return Err(Error::InvalidArgument(format!("need 1 <= t <= 2k with k >= 1, got k = {k}, t = {t}")));
    }
    let n = a.n();
    let nv = a.num_vars();
    if n == 0 {
        return BiDecomposition::verified(nv, k, k, Vec::new(), &Polynomial::zero(nv));
    }
    let entries = a.to_polynomials();
    let walks = Walks::new(&entries, nv);
    let dec = if t == 2 * k {
        // Split every closed walk at its (k+1)th vertex v.
        let fwd = walks.forward(k - 1);
        let bwd = walks.backward(k - 1);
        let odd = (n + 1) % 2 == 1;
        let pairs: Vec<_> = fwd
            .into_iter()
            .zip(bwd)
            .filter(|(f, g)| !f.is_zero() && !g.is_zero())
            .map(|(f, g)| (f, negate_if(g, odd)))
            .collect();
        let target = pairs.iter().fold(Polynomial::zero(nv), |acc, (f, g)| &acc + &(f * g));
        BiDecomposition::verified(nv, k, k, pairs, &target)?
    } else {
        let first = if t == 1 { entries[0][0].clone() } else { dot(&walks.forward(t - 2), &walks.inn, nv) };
        let rest = ClowProgram::from_entries(walks.rest.clone(), nv, false).coefficient(2 * k - t);
        let first = negate_if(first, (n + 1 + t) % 2 == 1);
        let target = &first * &rest;
        let t_min = t.min(2 * k - t);
        let (alpha1, alpha2) = if t == t_min { (first, rest) } else { (rest, first) };
        let pairs = if alpha1.is_zero() || alpha2.is_zero() {
            Vec::new()
        } else if t_min == k {
            vec![(alpha1, alpha2)]
        } else {
            monomial_split(&alpha2, k - t_min)?
                .pairs()
                .iter()
                .map(|(beta, gamma)| (&alpha1 * beta, gamma.clone()))
                .collect()
        };
        BiDecomposition::verified(nv, k, k, pairs, &target)?
    };
    check_bound(&dec, q_bound(n, k, t, nv), "q decomposition")?;
    Ok(dec)
}

/// `(det(A + Λ_n^r))^{(2k)}` by symbolic expansion.
pub fn p_target(a: &AffineMatrixPoly, k: usize, r: usize) -> Polynomial {
    a.with_constant(lambda_matrix(a.n(), r)).det().homogeneous_part(2 * k)
}

fn collect_pairs(parts: &[(&BiDecomposition, bool)]) -> Vec<(Polynomial, Polynomial)> {
    parts.iter().flat_map(|(d, negate)| d.pairs_with_sign(*negate)).collect()
}

fn decompose_p_unverified(a: &AffineMatrixPoly, k: usize, r: usize) -> Result<Vec<(Polynomial, Polynomial)>> {
    let n = a.n();
    let nv = a.num_vars();
    if n < 2 * k {
        return Ok(Vec::new());
    }
    if r == n - 1 {
        let parts = (1..=2 * k).map(|t| decompose_q(a, k, t)).collect::<Result<Vec<_>>>()?;
        let negate = n % 2 == 1;
        let refs: Vec<_> = parts.iter().map(|d| (d, negate)).collect();
        return Ok(collect_pairs(&refs));
    }
    if r == n - 2 * k {
        // Laplace expansion of the leading 2k x 2k minor along its first k columns.
        let m = 2 * k;
        let entries = a.to_polynomials();
        let left: Vec<usize> = (0..k).collect();
        let right: Vec<usize> = (k..m).collect();
        let mut pairs = Vec::new();
        for rows in (0..m).combinations(k) {
            let others: Vec<usize> = (0..m).filter(|i| !rows.contains(i)).collect();
            let minor = |rs: &[usize], cs: &[usize]| -> Polynomial {
                let sub: PolyMatrix = rs.iter().map(|&i| cs.iter().map(|&j| entries[i][j].clone()).collect()).collect();
                super::affine::det_of_polynomials(&sub, nv)
            };
            let f = minor(&rows, &left);
            let g = minor(&others, &right);
            if f.is_zero() || g.is_zero() {
                continue;
            }
            let parity = rows.iter().sum::<usize>() + left.iter().sum::<usize>();
            pairs.push((f, negate_if(g, parity % 2 == 1)));
        }
        return Ok(pairs);
    }
    // det(A + Λ^r) = det(A + Λ^{r+1}) - det(A' + Λ_{n-1}^r): the two Λ's differ at
    // diagonal index n - r - 1, and A' deletes that row and column.
    let index = n - r - 1;
    let upper = decompose_p_unverified(a, k, r + 1)?;
    let lower = decompose_p_unverified(&a.delete_index(index), k, r)?;
    Ok(upper.into_iter().chain(lower.into_iter().map(|(f, g)| (f, -&g))).collect())
}

/// Decomposition of `p_{A,2k,r} = (det(A + Λ_n^r))^{(2k)}` for linear `A` and
/// `n - 2k <= r <= n - 1`, verified against the symbolic determinant.
pub fn decompose_p(a: &AffineMatrixPoly, k: usize, r: usize) -> Result<BiDecomposition> {
    if !a.is_linear() {
        return Err(Error::NotLinear);
    }
    let n = a.n();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if r >= n || r + 2 * k < n {
        return Err(Error::InvalidArgument(format!("r = {r} outside [n - 2k, n - 1] for n = {n}, k = {k}")));
    }
    let pairs: Vec<_> =
        decompose_p_unverified(a, k, r)?.into_iter().filter(|(f, g)| !f.is_zero() && !g.is_zero()).collect();
    let dec = BiDecomposition::verified(a.num_vars(), k, k, pairs, &p_target(a, k, r))?;
    check_bound(&dec, p_bound(n, k, r, a.num_vars()), "p decomposition")?;
    Ok(dec)
}

/// Full pipeline from an affine representation `det(Q) = p` and a zero `x0`
/// of `p`: the Λ normal form followed by [`decompose_p`]. The result is
/// verified against `(p(x + x0))^{(2k)}`.
pub fn decompose_from_dc(q: &AffineMatrixPoly, x0: &Point, k: usize) -> Result<BiDecomposition> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let form = lambda_normal_form(q, x0)?;
    let n = q.n();
    let nv = q.num_vars();
    let target = q.det().shift(x0)?.homogeneous_part(2 * k);
    let pairs = if form.r + 2 * k < n {
        // Every term of det(A + Λ^r) has degree at least n - r > 2k.
        Vec::new()
    } else {
        decompose_p(&form.a, k, form.r)?.pairs().to_vec()
    };
    let dec = BiDecomposition::verified(nv, k, k, pairs, &target)?;
    check_bound(&dec, dc_pipeline_bound(n, k, nv), "dc pipeline")?;
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abpdec::clow::{clow_sum, ClowFamily, ClowFilter};
    use crate::exactla::ExactMatrix;
    use crate::polyring::perm_poly;
    use crate::rational::rat;

    fn generic(n: usize) -> AffineMatrixPoly {
        let coeffs = (0..n * n)
            .map(|l| ExactMatrix::from_fn(n, n, |i, j| if i * n + j == l { rat(1) } else { rat(0) }))
            .collect();
        AffineMatrixPoly::linear(n, coeffs).unwrap()
    }

    #[test]
    fn q_matches_clow_enumeration() {
        for n in 1..=3 {
            let a = generic(n);
            let entries = a.to_polynomials();
            for k in 1..=2 {
                for t in 1..=2 * k {
                    let dec = decompose_q(&a, k, t).unwrap();
                    let filter = ClowFilter { family: ClowFamily::All, through_zero: true, first_length: Some(t) };
                    let expected = clow_sum(&entries, a.num_vars(), 2 * k, filter).unwrap();
                    assert_eq!(dec.expand(), expected, "n={n} k={k} t={t}");
                }
            }
        }
    }

    #[test]
    fn p_all_ranks() {
        for n in 2..=4 {
            let a = generic(n);
            for k in 1..=2 {
                if 2 * k > n {
                    continue;
                }
                for r in n - 2 * k..n {
                    let dec = decompose_p(&a, k, r).unwrap();
                    assert!(BigUint::from(dec.len()) <= p_bound(n, k, r, n * n));
                }
            }
        }
        assert!(decompose_p(&generic(3), 1, 3).is_err());
        assert!(decompose_p(&generic(3), 1, 0).is_err());
    }

    #[test]
    fn perm2_pipeline() {
        let x = |i| Polynomial::var(4, i);
        let q = AffineMatrixPoly::from_polynomials(&[vec![x(0), -&x(1)], vec![x(2), x(3)]], 4).unwrap();
        let sigma = Point::from_ints(&[1, 1, 1, -1]);
        let dec = decompose_from_dc(&q, &sigma, 1).unwrap();
        assert!(dec.len() <= 2);
        assert_eq!(dec.expand(), perm_poly(2).unwrap().shift(&sigma).unwrap().homogeneous_part(2));
        assert!(matches!(decompose_from_dc(&q, &Point::from_ints(&[1, 0, 0, 1]), 1), Err(Error::Precondition(_))));
    }
}
