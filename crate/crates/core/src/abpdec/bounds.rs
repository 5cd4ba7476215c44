//! Closed-form bound calculators.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::rational::{binomial, factorial, Rational};

fn pow_usize(base: usize, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), e)
}

fn to_rational(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2(k-1) D^{k-1}`.
fn correction(k: usize, num_vars: usize) -> BigUint {
    if k <= 1 {
        return BigUint::zero();
    }
    BigUint::from(2 * (k - 1)) * pow_usize(num_vars, k - 1)
}

/// `brank / 2^{2k-2} - 2(k-1) D^{k-1}`: a lower bound on `dc(p)` from a lower
/// bound on `brank(p_{x0}^{(2k)})`.
pub fn dc_bound_from_brank(brank: &Rational, k: usize, num_vars: usize) -> Rational {
    assert!(k >= 1);
    let scale = to_rational(num_traits::pow(BigUint::from(2u32), 2 * k - 2));
    brank / scale - to_rational(correction(k, num_vars))
}

/// `sqrt(brank)`.
pub fn sqrt_bound(brank: f64) -> f64 {
    brank.sqrt()
}

/// `k! D^k / (2 (2k)!)`.
pub fn generic_brank_floor(num_vars: usize, k: usize) -> Rational {
    let num = factorial(k) * pow_usize(num_vars, k);
    let den = BigUint::from(2u32) * factorial(2 * k);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `s_j = C(D + j - 1, j)`.
pub fn index_set_size(num_vars: usize, j: usize) -> BigUint {
    if num_vars == 0 {
        return if j == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(num_vars + j - 1, j)
}

/// Pair-count bound for `q_{A,2k,t}`.
pub fn q_bound(n: usize, k: usize, t: usize, num_vars: usize) -> BigUint {
    if t == 2 * k {
        return BigUint::from(n.saturating_sub(1));
    }
    let t_min = t.min(2 * k - t);
    index_set_size(num_vars, k - t_min)
}

/// `n + 2(k-1) D^{k-1}`.
pub fn p_top_bound(n: usize, k: usize, num_vars: usize) -> BigUint {
    BigUint::from(n) + correction(k, num_vars)
}

/// Pair-count bound for `p_{A,2k,r}`.
pub fn p_bound(n: usize, k: usize, r: usize, num_vars: usize) -> BigUint {
    if n < 2 * k {
        return BigUint::zero();
    }
    if r == n - 2 * k {
        return binomial(2 * k, k);
    }
    num_traits::pow(BigUint::from(2u32), n - r - 1) * p_top_bound(n, k, num_vars)
}

/// `2^{2k-2} (n + 2(k-1) D^{k-1})`.
pub fn dc_pipeline_bound(n: usize, k: usize, num_vars: usize) -> BigUint {
    num_traits::pow(BigUint::from(2u32), 2 * k - 2) * p_top_bound(n, k, num_vars)
}
