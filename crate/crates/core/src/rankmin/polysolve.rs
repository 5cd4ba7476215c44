//! A sound but incomplete decision procedure for rational common zeros of a
//! small polynomial system.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polyring::{Monomial, Point, Polynomial};
use crate::rational::Rational;

/// Candidate roots are only enumerated for integer coefficients below this size.
const DIVISOR_GUARD: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// No rational point makes every polynomial vanish.
    Infeasible,
    /// A rational common zero.
    Feasible(Point),
    Unknown,
}

/// Rational roots of a univariate polynomial in `var`, by the rational root theorem.
fn rational_roots(p: &Polynomial, var: usize) -> Option<Vec<Rational>> {
    let deg = p.degree()?;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[var] as usize] = c.clone();
    }
    let mut roots = Vec::new();
    // Factor out x^low.
    let low = coeffs.iter().position(|c| !c.is_zero())?;
    if low > 0 {
        roots.push(Rational::zero());
    }
    let coeffs = &coeffs[low..];
    if coeffs.len() == 1 {
        return Some(roots);
    }
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let (a0, an) = (ints[0].abs(), ints[ints.len() - 1].abs());
    let limit = BigInt::from(DIVISOR_GUARD);
    if a0 > limit || an > limit {
        return None;
    }
    let divisors = |v: &BigInt| -> Vec<BigInt> {
        let v: u64 = v.try_into().expect("guarded");
        (1..=v).filter(|d| v.is_multiple_of(*d)).map(BigInt::from).collect()
    };
    let eval =
        |x: &Rational| ints.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()));
    let mut found = Vec::new();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for sign in [1, -1] {
                let x = Rational::new(&num * sign, den.clone());
                if !found.contains(&x) && eval(&x).is_zero() {
                    found.push(x);
                }
            }
        }
    }
    roots.extend(found);
    Some(roots)
}

fn univariate_var(p: &Polynomial) -> Option<usize> {
    match p.support_vars().as_slice() {
        [v] => Some(*v),
        _ => None,
    }
}

/// A variable with a nonzero constant coefficient that occurs only linearly in `p`.
fn linear_pivot(p: &Polynomial) -> Option<(usize, Rational)> {
    let nv = p.num_vars();
    p.support_vars().into_iter().find_map(|v| {
        if p.terms().any(|(m, _)| m.exponents()[v] > 1 || (m.exponents()[v] == 1 && m.degree() > 1)) {
            return None;
        }
        Some((v, p.coeff(&Monomial::var(nv, v))))
    })
}

fn complete(assigned: &[Option<Polynomial>]) -> Point {
    // Free variables are set to zero; assigned ones only depend on free ones.
    let mut values: Vec<Option<Rational>> =
        assigned.iter().map(|a| if a.is_none() { Some(Rational::zero()) } else { None }).collect();
    loop {
        let mut progress = false;
        for (v, a) in assigned.iter().enumerate() {
            if values[v].is_some() {
                continue;
            }
            let p = a.as_ref().expect("assigned");
            let deps = p.support_vars();
            if deps.iter().all(|&u| values[u].is_some()) {
                let point = Point::new(values.iter().map(|x| x.clone().unwrap_or_default()).collect());
                values[v] = Some(p.eval(&point).expect("dimensions agree"));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    Point::new(values.into_iter().map(|x| x.expect("acyclic substitutions")).collect())
}

fn search(polys: Vec<Polynomial>, assigned: Vec<Option<Polynomial>>, depth: usize) -> Feasibility {
    let nv = assigned.len();
    let polys: Vec<Polynomial> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    if polys.is_empty() {
        return Feasibility::Feasible(complete(&assigned));
    }
    if polys.iter().any(|p| p.degree() == Some(0) || p.is_definite_even()) {
        return Feasibility::Infeasible;
    }
    if depth == 0 {
        return Feasibility::Unknown;
    }
    let substitute_all = |var: usize, value: &Polynomial| -> (Vec<Polynomial>, Vec<Option<Polynomial>>) {
        let next: Vec<Polynomial> = polys.iter().map(|p| p.substitute(var, value)).collect();
        let mut asg: Vec<Option<Polynomial>> =
            assigned.iter().map(|a| a.as_ref().map(|q| q.substitute(var, value))).collect();
        asg[var] = Some(value.clone());
        (next, asg)
    };
    for p in &polys {
        if let Some(var) = univariate_var(p) {
            let Some(roots) = rational_roots(p, var) else { continue };
            let mut unknown = false;
            for root in roots {
                let (next, asg) = substitute_all(var, &Polynomial::constant(nv, root));
                match search(next, asg, depth - 1) {
                    Feasibility::Feasible(x) => return Feasibility::Feasible(x),
                    Feasibility::Unknown => unknown = true,
                    Feasibility::Infeasible => {}
                }
            }
            return if unknown { Feasibility::Unknown } else { Feasibility::Infeasible };
        }
    }
    for p in &polys {
        if let Some((var, c)) = linear_pivot(p) {
            // p = c x_var + rest, so x_var = -rest / c.
            let rest = p - &Polynomial::term(Monomial::var(nv, var), c.clone());
            let value = rest.scale(&(-Rational::one() / c));
            let (next, asg) = substitute_all(var, &value);
            return search(next, asg, depth - 1);
        }
    }
    Feasibility::Unknown
}

/// Decides whether `polys` (over a common set of variables) have a rational
/// common zero, when one of the elimination rules applies at every step.
pub fn rational_common_zero(polys: &[Polynomial]) -> Feasibility {
    let Some(nv) = polys.first().map(Polynomial::num_vars) else {
        return Feasibility::Feasible(Point::zeros(0));
    };
    assert!(polys.iter().all(|p| p.num_vars() == nv), "polynomials must share their variables");
    search(polys.to_vec(), vec![None; nv], 2 * nv + 2)
}
