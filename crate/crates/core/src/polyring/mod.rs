//! Exact sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic: lower total degree first, and within one degree the
//! tuple with the larger leading exponent first, so `x1^2 < x1*x2 < x2^2`.
//! Every matrix layout in the crate indexes rows and columns by this order.

mod construct;
mod json;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

pub use construct::{det_poly, monomial_index_set, monomial_split, multilinear_index_set, perm_poly};

/// Exponent tuple `(i_1, ..., i_D)` of a monomial `x^I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point `x0` in `Q^D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn zeros(num_vars: usize) -> Self {
        Point(vec![Rational::zero(); num_vars])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }
}

/// Sparse polynomial in `num_vars` variables with reduced rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(num_vars), c)
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable index {index} out of range");
        Self::term(Monomial::var(num_vars, index), Rational::one())
    }

    pub fn term(monomial: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(monomial.num_vars());
        p.add_term(monomial, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(num_vars);
        for (exp, c) in terms {
            if exp.len() != num_vars {
                return Err(Error::DimensionMismatch { expected: num_vars, found: exp.len() });
            }
            p.add_term(Monomial(exp), c);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.num_vars(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The common degree of all terms, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let first = self.terms.keys().next()?.degree();
        self.terms.keys().all(|m| m.degree() == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        Polynomial { num_vars: self.num_vars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.num_vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check_point(&self, x0: &Point) -> Result<()> {
        if x0.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, found: x0.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x0: &Point) -> Result<Rational> {
        self.check_point(x0)?;
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in x0.coords().iter().zip(m.exponents()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// `p_{x0}(x) = p(x + x0)`.
    pub fn shift(&self, x0: &Point) -> Result<Polynomial> {
        self.check_point(x0)?;
        let n = self.num_vars;
        let mut cache: BTreeMap<(usize, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero(n);
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(n, c.clone());
            for (l, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = cache.entry((l, e)).or_insert_with(|| {
                    let lin = &Polynomial::var(n, l) + &Polynomial::constant(n, x0.coords()[l].clone());
                    lin.pow(e)
                });
                prod = &prod * &*factor;
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// The degree-`k` homogeneous part `p^{(k)}`.
    pub fn homogeneous_part(&self, k: usize) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.num_vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * rat(e as i64));
        }
        out
    }

    /// Replaces `x_var` by `value` (a polynomial over the same variables).
    pub fn substitute(&self, var: usize, value: &Polynomial) -> Polynomial {
        assert_eq!(value.num_vars, self.num_vars);
        let mut powers: Vec<Polynomial> = vec![Polynomial::one(self.num_vars)];
        let mut out = Polynomial::zero(self.num_vars);
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let mut exps = m.0.clone();
            exps[var] = 0;
            let rest = Polynomial::term(Monomial(exps), c.clone());
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Indices of variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_vars];
        for m in self.terms.keys() {
            for (u, &e) in used.iter_mut().zip(m.exponents()) {
                *u |= e > 0;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.num_vars))
    }

    /// True when every exponent is even and every coefficient shares the sign
    /// of a nonzero constant term, so the polynomial has no real zero.
    pub fn is_definite_even(&self) -> bool {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return false;
        }
        self.terms.iter().all(|(m, c)| m.exponents().iter().all(|e| e % 2 == 0) && c.is_positive() == c0.is_positive())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { num_vars: self.num_vars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = Polynomial::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(l, &e)| if e == 1 { format!("x{}", l + 1) } else { format!("x{}^{}", l + 1, e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn shift_of_square_is_binomial() {
        let p = x(1, 0).pow(2);
        let shifted = p.shift(&Point::from_ints(&[1])).unwrap();
        let expected = Polynomial::from_terms(1, [(vec![2], rat(1)), (vec![1], rat(2)), (vec![0], rat(1))]).unwrap();
        assert_eq!(shifted, expected);
        assert_eq!(shifted.homogeneous_part(1), Polynomial::from_terms(1, [(vec![1], rat(2))]).unwrap());
        assert!(shifted.homogeneous_part(5).is_zero());
    }

    #[test]
    fn shift_roundtrip_and_mismatch() {
        let p = &(&x(2, 0) * &x(2, 1)) + &Polynomial::constant(2, frac(3, 7));
        let a = Point::new(vec![frac(1, 2), rat(-3)]);
        let back = p.shift(&a).unwrap().shift(&-&a).unwrap();
        assert_eq!(back, p);
        assert!(matches!(p.shift(&Point::zeros(3)), Err(Error::DimensionMismatch { .. })));
        assert!(p.eval(&Point::zeros(1)).is_err());
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 2]);
        let d = Monomial::new(vec![0, 1]);
        assert!(a < b && b < c && d < a);
    }

    #[test]
    fn mul_and_eval() {
        let p = &x(2, 0) * &x(2, 1);
        assert_eq!(p, Polynomial::from_terms(2, [(vec![1, 1], rat(1))]).unwrap());
        assert_eq!(p.eval(&Point::from_ints(&[3, -2])).unwrap(), rat(-6));
        assert_eq!(p.homogeneous_degree(), Some(2));
    }

    #[test]
    fn substitute_and_derivative() {
        // p = x1^2 x2, x1 -> x2 + 1
        let p = &x(2, 0).pow(2) * &x(2, 1);
        let v = &x(2, 1) + &Polynomial::one(2);
        let q = p.substitute(0, &v);
        let expected = &v.pow(2) * &x(2, 1);
        assert_eq!(q, expected);
        assert_eq!(p.derivative(0), (&x(2, 0) * &x(2, 1)).scale(&rat(2)));
        assert!(p.derivative(0).derivative(0).derivative(0).is_zero());
    }

    #[test]
    fn definite_even_detection() {
        let p = &Polynomial::one(1) + &x(1, 0).pow(2);
        assert!(p.is_definite_even());
        let q = &Polynomial::one(1) - &x(1, 0).pow(2);
        assert!(!q.is_definite_even());
    }

    #[test]
    fn display_is_readable() {
        let p = &(&x(2, 0) * &x(2, 1)).scale(&frac(-1, 2)) + &Polynomial::one(2);
        assert_eq!(p.to_string(), "1 - 1/2*x1*x2");
    }
}
