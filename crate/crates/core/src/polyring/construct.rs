use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::One;

use super::{Monomial, Polynomial};
use crate::abpdec::BiDecomposition;
use crate::error::{Error, Result};
use crate::rational::Rational;

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

fn leibniz(d: usize, signed: bool) -> Result<Polynomial> {
    if d == 0 {
        return Err(Error::InvalidArgument("matrix size must be at least 1".into()));
    }
    let num_vars = d * d;
    let mut p = Polynomial::zero(num_vars);
    for perm in (0..d).permutations(d) {
        let mut exps = vec![0u32; num_vars];
        for (i, &j) in perm.iter().enumerate() {
            exps[i * d + j] = 1;
        }
        let c = if signed && permutation_is_odd(&perm) { -Rational::one() } else { Rational::one() };
        p.add_term(Monomial::new(exps), c);
    }
    Ok(p)
}

/// The `d x d` permanent in `d^2` row-major variables.
pub fn perm_poly(d: usize) -> Result<Polynomial> {
    leibniz(d, false)
}

/// The `n x n` determinant in `n^2` row-major variables.
pub fn det_poly(n: usize) -> Result<Polynomial> {
    leibniz(n, true)
}

fn push_tuples(prefix: &mut Vec<u32>, slots: usize, remaining: u32, max_entry: u32, out: &mut Vec<Monomial>) {
    if slots == 1 {
        if remaining <= max_entry {
            prefix.push(remaining);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
        }
        return;
    }
    for e in (0..=remaining.min(max_entry)).rev() {
        prefix.push(e);
        push_tuples(prefix, slots - 1, remaining - e, max_entry, out);
        prefix.pop();
    }
}

fn tuples(num_vars: usize, k: usize, max_entry: u32) -> Vec<Monomial> {
    if num_vars == 0 {
        return if k == 0 { vec![Monomial::new(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    push_tuples(&mut Vec::with_capacity(num_vars), num_vars, k as u32, max_entry, &mut out);
    out
}

/// All exponent tuples of total degree `k` in `num_vars` variables, graded-lex ordered.
pub fn monomial_index_set(num_vars: usize, k: usize) -> Vec<Monomial> {
    tuples(num_vars, k, u32::MAX)
}

/// The 0/1 tuples of weight `k`, in the same order as [`monomial_index_set`].
pub fn multilinear_index_set(num_vars: usize, k: usize) -> Vec<Monomial> {
    tuples(num_vars, k, 1)
}

/// Splits a homogeneous `p` of degree `k` as `sum f_i g_i` with distinct
/// degree-`m` monomials `f_i`. Each term goes to the graded-lex smallest
/// degree-`m` monomial dividing it.
pub fn monomial_split(p: &Polynomial, m: usize) -> Result<BiDecomposition> {
    let n = p.num_vars();
    let Some(k) = p.homogeneous_degree() else {
        if p.is_zero() {
            return BiDecomposition::verified(n, m, 0, Vec::new(), p);
        }
        return Err(Error::NotHomogeneous);
    };
    if m > k {
        return Err(Error::InvalidArgument(format!("split degree {m} exceeds polynomial degree {k}")));
    }
    let mut groups: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for (mono, c) in p.terms() {
        let mut need = m as u32;
        let divisor: Vec<u32> = mono
            .exponents()
            .iter()
            .map(|&e| {
                let take = e.min(need);
                need -= take;
                take
            })
            .collect();
        let divisor = Monomial::new(divisor);
        let quotient = divisor.quotient_of(mono).expect("greedy divisor divides");
        groups.entry(divisor).or_insert_with(|| Polynomial::zero(n)).add_term(quotient, c.clone());
    }
    let pairs = groups.into_iter().map(|(f, g)| (Polynomial::term(f, Rational::one()), g)).collect();
    BiDecomposition::verified(n, m, k - m, pairs, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Point;
    use crate::rational::{binomial_usize, rat};

    #[test]
    fn small_permanents_and_determinants() {
        let p1 = perm_poly(1).unwrap();
        assert_eq!(p1, Polynomial::var(1, 0));
        let p2 = perm_poly(2).unwrap();
        let expected = Polynomial::from_terms(4, [(vec![1, 0, 0, 1], rat(1)), (vec![0, 1, 1, 0], rat(1))]).unwrap();
        assert_eq!(p2, expected);
        let d2 = det_poly(2).unwrap();
        let expected = Polynomial::from_terms(4, [(vec![1, 0, 0, 1], rat(1)), (vec![0, 1, 1, 0], rat(-1))]).unwrap();
        assert_eq!(d2, expected);
        let d3 = det_poly(3).unwrap();
        assert_eq!(d3.num_terms(), 6);
        assert_eq!(d3.terms().filter(|(_, c)| **c < rat(0)).count(), 3);
        assert_eq!(d3.eval(&Point::from_ints(&[1, 0, 0, 0, 1, 0, 0, 0, 1])).unwrap(), rat(1));
        assert!(perm_poly(0).is_err());
        assert!(det_poly(0).is_err());
    }

    #[test]
    fn perm3_vanishes_at_sigma3() {
        let p = perm_poly(3).unwrap();
        assert_eq!(p.num_terms(), 6);
        assert!(p.terms().all(|(m, c)| m.degree() == 3 && m.is_multilinear() && *c == rat(1)));
        let sigma = Point::from_ints(&[1, 1, 1, 1, 1, 1, 1, 1, -2]);
        assert_eq!(p.eval(&sigma).unwrap(), rat(0));
    }

    #[test]
    fn index_sets() {
        let two = monomial_index_set(2, 2);
        let exps: Vec<&[u32]> = two.iter().map(|m| m.exponents()).collect();
        assert_eq!(exps, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
        assert_eq!(monomial_index_set(4, 1).len(), 4);
        assert_eq!(monomial_index_set(9, 2).len(), 45);
        assert_eq!(monomial_index_set(3, 0).len(), 1);
        assert!(two.windows(2).all(|w| w[0] < w[1]));
        let ml = multilinear_index_set(4, 2);
        assert_eq!(ml.len(), binomial_usize(4, 2));
        assert!(ml.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn monomial_split_examples() {
        let x1 = Polynomial::var(2, 0);
        let x2 = Polynomial::var(2, 1);
        let p = &(&x1 * &x2) + &(&x1 * &x1);
        let dec = monomial_split(&p, 1).unwrap();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec.pairs()[0].0, x1);
        assert_eq!(dec.pairs()[0].1, &x2 + &x1);

        let q = &(&x1 * &x1) + &(&x2 * &x2);
        let dec = monomial_split(&q, 1).unwrap();
        assert_eq!(dec.pairs(), &[(x1.clone(), x1.clone()), (x2.clone(), x2.clone())]);

        let zero = Polynomial::zero(2);
        assert!(monomial_split(&zero, 1).unwrap().is_empty());

        let inhomogeneous = &x1 + &(&x2 * &x2);
        assert!(matches!(monomial_split(&inhomogeneous, 1), Err(Error::NotHomogeneous)));
    }
}
