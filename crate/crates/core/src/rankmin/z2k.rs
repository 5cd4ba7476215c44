use num_traits::{One, Zero};
use serde::Serialize;

use super::system::{assemble, ConstraintSystem, SystemKind};
use crate::error::{Error, Result};
use crate::polyring::{monomial_index_set, multilinear_index_set, Monomial};
use crate::rational::{binomial_usize, factorial, Rational};

/// Embeds a tuple over the `(d-1) x (d-1)` grid into the `d x d` grid,
/// leaving the last row and column zero.
pub fn iota(h: &Monomial, d: usize) -> Monomial {
    let small = d - 1;
    assert_eq!(h.num_vars(), small * small);
    let mut out = vec![0u32; d * d];
    for (idx, &e) in h.exponents().iter().enumerate() {
        out[(idx / small) * d + idx % small] = e;
    }
    Monomial::new(out)
}

/// A 0/1 tuple on the `side x side` grid with at most one entry per row and column.
pub fn is_partial_matching(h: &Monomial, side: usize) -> bool {
    let e = h.exponents();
    let rows_ok = (0..side).all(|i| (0..side).map(|j| e[i * side + j]).sum::<u32>() <= 1);
    let cols_ok = (0..side).all(|j| (0..side).map(|i| e[i * side + j]).sum::<u32>() <= 1);
    rows_ok && cols_ok
}

/// `-1 / (2k (d - 2k - 1)!)`.
pub fn z2k_alpha(d: usize, k: usize) -> Result<Rational> {
    if k == 0 || d <= 2 * k {
        return Err(Error::InvalidArgument(format!("need k >= 1 and d >= 2k + 1, got d = {d}, k = {k}")));
    }
    let den = Rational::from_integer((factorial(d - 2 * k - 1) * (2 * k)).into());
    Ok(-Rational::one() / den)
}

/// Projected system for `perm_{d,Σ_d}^{(2k)}` over multilinear indices on the
/// `(d-1) x (d-1)` grid: `sum_{I+J=H} (u_{I,J} - v_{I,J}) = [H is a partial matching]`.
pub fn build_z2k(d: usize, k: usize) -> Result<ConstraintSystem> {
    let alpha = z2k_alpha(d, k)?;
    let side = d - 1;
    let slots = side * side;
    let basis = multilinear_index_set(slots, k);
    let targets = multilinear_index_set(slots, 2 * k);
    let equations = assemble(&basis, &targets, &[Rational::one(), -Rational::one()], |h| {
        if is_partial_matching(h, side) {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    Ok(ConstraintSystem {
        kind: SystemKind::Z2k,
        n: basis.len(),
        pair: true,
        symmetric: true,
        basis,
        equations,
        alpha: Some(alpha),
    })
}

/// `s_k` over `D = d^2`, `t_k = |multilinear weight-k tuples over (d-1)^2|`, and their gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionSandwich {
    pub s_k: usize,
    pub t_k: usize,
    pub gap: usize,
}

pub fn projection_sandwich(d: usize, k: usize) -> Result<ProjectionSandwich> {
    z2k_alpha(d, k)?;
    let s_k = monomial_index_set(d * d, k).len();
    let t_k = binomial_usize((d - 1) * (d - 1), k);
    Ok(ProjectionSandwich { s_k, t_k, gap: s_k - t_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn d3_k1_counts() {
        let cs = build_z2k(3, 1).unwrap();
        assert_eq!(cs.n, 4);
        assert_eq!(cs.equations.len(), 6);
        let ones = cs.equations.iter().filter(|e| e.rhs == Rational::one()).count();
        assert_eq!(ones, 2);
        assert!(cs.has_unit_coefficients());
        assert_eq!(cs.alpha, Some(frac(-1, 2)));
        assert!(build_z2k(2, 1).is_err());
    }

    #[test]
    fn iota_inserts_zeros() {
        let h = Monomial::new(vec![0, 1, 0, 0]);
        let mut expected = vec![0u32; 9];
        expected[1] = 1;
        assert_eq!(iota(&h, 3), Monomial::new(expected));
    }

    #[test]
    fn sandwich_counts() {
        assert_eq!(projection_sandwich(3, 1).unwrap(), ProjectionSandwich { s_k: 9, t_k: 4, gap: 5 });
        assert_eq!(projection_sandwich(5, 1).unwrap(), ProjectionSandwich { s_k: 25, t_k: 16, gap: 9 });
        assert_eq!(projection_sandwich(5, 2).unwrap().t_k, 120);
    }
}
