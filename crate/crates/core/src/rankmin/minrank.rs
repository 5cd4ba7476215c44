use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::polysolve::{rational_common_zero, Feasibility};
use super::system::ConstraintSystem;
use crate::abpdec::det_of_polynomials;
use crate::error::{Error, Result};
use crate::exactla::{signature_lower_bound, solve_affine, ExactMatrix};
use crate::polyring::Polynomial;
use crate::rational::{frac, Rational};

pub const DEFAULT_BUDGET: usize = 6;

/// Grid points per search, across all free parameters.
const GRID_POINTS: usize = 20_000;

/// Free dimensions up to this size get the symbolic minor-vanishing check.
const MINOR_CHECK_MAX_FREE: usize = 3;

/// `lower <= minrank <= upper` over the affine family, with how each side was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct MinrankInterval {
    pub lower: usize,
    pub upper: usize,
    pub lower_method: String,
    pub upper_method: String,
    pub free_dim: usize,
    /// A member of the family of rank `upper`.
    pub witness: ExactMatrix,
}

/// `0, ±1, ±1/2, ±2, ...`: rationals with denominator at most 8 and absolute
/// value at most 2, by increasing height.
pub fn sample_grid() -> Vec<Rational> {
    let mut values: Vec<Rational> = Vec::new();
    for den in 1..=8i64 {
        for num in 0..=2 * den {
            let v = frac(num, den);
            if !values.contains(&v) {
                values.push(v);
            }
        }
    }
    values.sort_by_key(|v| {
        let n: i64 = v.numer().try_into().unwrap_or(i64::MAX);
        let d: i64 = v.denom().try_into().unwrap_or(i64::MAX);
        (n.abs().max(d), d, n)
    });
    values.into_iter().flat_map(|v| if v.is_zero() { vec![v] } else { vec![v.clone(), -v] }).collect()
}

struct Family {
    base: ExactMatrix,
    directions: Vec<ExactMatrix>,
}

impl Family {
    fn at(&self, t: &[Rational]) -> ExactMatrix {
        let mut m = self.base.clone();
        for (d, ti) in self.directions.iter().zip(t) {
            if !ti.is_zero() {
                m = &m + &d.scale(ti);
            }
        }
        m
    }

    fn symbolic(&self) -> Vec<Vec<Polynomial>> {
        let f = self.directions.len();
        let n = self.base.rows();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut p = Polynomial::constant(f, self.base[(i, j)].clone());
                        for (l, d) in self.directions.iter().enumerate() {
                            p = &p + &Polynomial::var(f, l).scale(&d[(i, j)]);
                        }
                        p
                    })
                    .collect()
            })
            .collect()
    }
}

/// All `size x size` minors of a symbolic matrix.
fn minors(entries: &[Vec<Polynomial>], size: usize, num_vars: usize) -> Vec<Polynomial> {
    let n = entries.len();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(size).collect();
    subsets
        .par_iter()
        .flat_map_iter(|rows| {
            subsets.iter().map(move |cols| {
                let sub: Vec<Vec<Polynomial>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| entries[i][j].clone()).collect()).collect();
                det_of_polynomials(&sub, num_vars)
            })
        })
        .filter(|p| !p.is_zero())
        .collect()
}

fn grid_search(family: &Family) -> Option<(usize, ExactMatrix)> {
    let f = family.directions.len();
    if f == 0 {
        return None;
    }
    let grid = sample_grid();
    let mut m = 1;
    while m < grid.len() && (m + 1).pow(f as u32) <= GRID_POINTS {
        m += 1;
    }
    let grid = &grid[..m];
    let total = m.pow(f as u32);
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rem = idx;
            let t: Vec<Rational> = (0..f)
                .map(|_| {
                    let v = grid[rem % m].clone();
                    rem /= m;
                    v
                })
                .collect();
            (family.at(&t).rank(), idx)
        })
        .min()
        .map(|(rank, idx)| {
            let mut rem = idx;
            let t: Vec<Rational> = (0..f)
                .map(|_| {
                    let v = grid[rem % m].clone();
                    rem /= m;
                    v
                })
                .collect();
            (rank, family.at(&t))
        })
}

/// Bounds the minimum rank over a single-matrix system's solution set.
///
/// Upper bounds come from exact ranks of explicit members (the canonical
/// solution and a rational grid over the free parameters). Lower bounds come
/// from: a nonzero right-hand side (rank >= 1); uniqueness of the solution; the
/// signature bound `max(n+, n-)` of `Q + Q^T` when that sum is constant on the
/// family; and, for free dimension at most 3, symbolic vanishing of all
/// `(r+1)`-minors decided by a sound partial solver. The minor route reasons
/// about rational members only, so its bound is the minimum rank over `Q`.
pub fn minrank_interval(cs: &ConstraintSystem, budget: usize) -> Result<MinrankInterval> {
    if cs.pair {
        return Err(Error::InvalidArgument("minrank_interval handles single-matrix systems only".into()));
    }
    let (a, b) = cs.linear_system();
    let sol = solve_affine(&a, &b).ok_or(Error::Infeasible)?;
    let free_dim = sol.nullspace.len();
    if free_dim > budget {
        return Err(Error::BudgetExceeded { free_dim, budget });
    }
    let family = Family {
        base: cs.matrices_from_vars(&sol.particular).remove(0),
        directions: sol.nullspace.iter().map(|v| cs.matrices_from_vars(v).remove(0)).collect(),
    };

    let mut upper = family.base.rank();
    let mut witness = family.base.clone();
    let mut upper_method = "rank of canonical solution".to_string();
    if let Some((rank, m)) = grid_search(&family) {
        if rank < upper {
            upper = rank;
            witness = m;
            upper_method = "rational grid search".to_string();
        }
    }

    let mut lower = 0;
    let mut lower_method = "trivial".to_string();
    if b.iter().any(|v| !v.is_zero()) {
        lower = 1;
        lower_method = "nonzero polynomial".to_string();
    }
    if free_dim == 0 {
        lower = upper;
        lower_method = "unique solution".to_string();
    }
    if lower < upper && family.directions.iter().all(ExactMatrix::is_skew_symmetric) {
        let sig = signature_lower_bound(&family.base)?;
        if sig > lower {
            lower = sig;
            lower_method = "signature of Q + Q^T".to_string();
        }
    }
    if lower < upper && free_dim <= MINOR_CHECK_MAX_FREE {
        let symbolic = family.symbolic();
        // Decide rank <= r for r = lower, lower + 1, ... while the solver is decisive.
        let mut r = lower.max(1);
        while r < upper {
            match rational_common_zero(&minors(&symbolic, r + 1, free_dim)) {
                Feasibility::Infeasible => {
                    lower = r + 1;
                    lower_method = format!("no rational zero of the {}-minors", r + 1);
                    r += 1;
                }
                Feasibility::Feasible(t) => {
                    let m = family.at(t.coords());
                    let rank = m.rank();
                    if rank < upper {
                        upper = rank;
                        witness = m;
                        upper_method = format!("common zero of the {}-minors", r + 1);
                    }
                    break;
                }
                Feasibility::Unknown => break,
            }
        }
    }
    if lower > upper {
        return Err(Error::Invariant(format!("lower bound {lower} exceeds upper bound {upper}")));
    }
    Ok(MinrankInterval { lower, upper, lower_method, upper_method, free_dim, witness })
}

/// `v(x)^T Q v(x)` for the system's basis `v`.
pub fn quadratic_form(cs: &ConstraintSystem, q: &ExactMatrix, num_vars: usize) -> Polynomial {
    let mut out = Polynomial::zero(num_vars);
    for (i, mi) in cs.basis.iter().enumerate() {
        for (j, mj) in cs.basis.iter().enumerate() {
            if !q[(i, j)].is_zero() {
                out.add_term(mi.mul(mj), q[(i, j)].clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankmin::{build_affine_system, build_sym_system};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(2, i)
    }

    #[test]
    fn grid_starts_simple() {
        let g = sample_grid();
        assert_eq!(g[0], Rational::zero());
        assert_eq!(&g[1..3], &[frac(1, 1), frac(-1, 1)]);
        assert!(g.iter().all(|v| *v.denom() <= 8.into()));
    }

    #[test]
    fn small_intervals() {
        let xy = build_affine_system(&(&x(0) * &x(1))).unwrap();
        let iv = minrank_interval(&xy, DEFAULT_BUDGET).unwrap();
        assert_eq!((iv.lower, iv.upper), (1, 1));

        let sum_sq = build_affine_system(&(&(&x(0) * &x(0)) + &(&x(1) * &x(1)))).unwrap();
        let iv = minrank_interval(&sum_sq, DEFAULT_BUDGET).unwrap();
        assert_eq!((iv.lower, iv.upper), (2, 2));

        let diff_sq = build_affine_system(&(&(&x(0) * &x(0)) - &(&x(1) * &x(1)))).unwrap();
        let iv = minrank_interval(&diff_sq, DEFAULT_BUDGET).unwrap();
        assert_eq!((iv.lower, iv.upper), (1, 1));
        assert!(diff_sq.is_satisfied_by(&[iv.witness]));
    }

    #[test]
    fn minor_route_decides_quartic() {
        // Symmetric Gram family of x^4 + y^4: [[1,0,t],[0,-2t,0],[t,0,1]] never has rank 1.
        let p = &(&x(0) * &x(0)).pow(2) + &(&x(1) * &x(1)).pow(2);
        let cs = build_sym_system(&p).unwrap();
        let iv = minrank_interval(&cs, DEFAULT_BUDGET).unwrap();
        assert_eq!(iv.free_dim, 1);
        assert_eq!((iv.lower, iv.upper), (2, 2));
        assert_eq!(iv.lower_method, "no rational zero of the 2-minors");
        assert_eq!(quadratic_form(&cs, &iv.witness, 2), p);
    }

    #[test]
    fn rejects_pairs_and_budget() {
        let p = &x(0) * &x(1);
        let pair = crate::rankmin::build_psd_pair_system(&p).unwrap();
        assert!(minrank_interval(&pair, 6).is_err());
        let quartic = build_affine_system(&(&(&x(0) * &x(0)) * &(&x(1) * &x(1)))).unwrap();
        assert!(matches!(minrank_interval(&quartic, 0), Err(Error::BudgetExceeded { .. })));
    }
}
