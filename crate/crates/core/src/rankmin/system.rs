use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactla::ExactMatrix;
use crate::polyring::{monomial_index_set, Monomial, Polynomial};
use crate::rational::Rational;

/// `coef * Q_block[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub coef: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    /// The index `H` the equation belongs to.
    pub label: Monomial,
    pub terms: Vec<Term>,
    pub rhs: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Xp,
    Sym,
    PsdPair,
    Z2k,
}

/// Sparse linear equations over the entries of one `n x n` matrix, or of a
/// pair of them when `pair` is set. With `symmetric`, entries `(i, j)` and
/// `(j, i)` of a block are the same unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub kind: SystemKind,
    pub n: usize,
    pub pair: bool,
    pub symmetric: bool,
    /// Row and column labels, in graded-lex order.
    pub basis: Vec<Monomial>,
    pub equations: Vec<Equation>,
    /// Scale relating right-hand sides back to the unscaled polynomial, when
    /// the system was normalized.
    pub alpha: Option<Rational>,
}

impl ConstraintSystem {
    pub fn num_blocks(&self) -> usize {
        if self.pair {
            2
        } else {
            1
        }
    }

    fn block_vars(&self) -> usize {
        if self.symmetric {
            self.n * (self.n + 1) / 2
        } else {
            self.n * self.n
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_blocks() * self.block_vars()
    }

    pub fn var_index(&self, block: usize, i: usize, j: usize) -> usize {
        let local = if self.symmetric {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            a * self.n - a * (a + 1) / 2 + b
        } else {
            i * self.n + j
        };
        block * self.block_vars() + local
    }

    /// Coefficient matrix and right-hand side over [`Self::num_vars`] unknowns.
    pub fn linear_system(&self) -> (ExactMatrix, Vec<Rational>) {
        let mut a = ExactMatrix::zeros(self.equations.len(), self.num_vars());
        for (r, eq) in self.equations.iter().enumerate() {
            for t in &eq.terms {
                let v = self.var_index(t.block, t.i, t.j);
                a[(r, v)] = &a[(r, v)] + &t.coef;
            }
        }
        (a, self.equations.iter().map(|e| e.rhs.clone()).collect())
    }

    /// The block matrices described by an assignment of the unknowns.
    pub fn matrices_from_vars(&self, vars: &[Rational]) -> Vec<ExactMatrix> {
        assert_eq!(vars.len(), self.num_vars());
        (0..self.num_blocks())
            .map(|b| ExactMatrix::from_fn(self.n, self.n, |i, j| vars[self.var_index(b, i, j)].clone()))
            .collect()
    }

    /// Checks every equation at the given block matrices.
    pub fn is_satisfied_by(&self, blocks: &[ExactMatrix]) -> bool {
        if blocks.len() != self.num_blocks() || blocks.iter().any(|b| b.rows() != self.n || b.cols() != self.n) {
            return false;
        }
        if self.symmetric && !blocks.iter().all(ExactMatrix::is_symmetric) {
            return false;
        }
        self.equations.iter().all(|eq| {
            let lhs = eq.terms.iter().fold(Rational::zero(), |acc, t| acc + &t.coef * &blocks[t.block][(t.i, t.j)]);
            lhs == eq.rhs
        })
    }

    /// True when every written coefficient lies in `{-1, 0, 1}` and no entry
    /// occurs twice in one equation.
    pub fn has_unit_coefficients(&self) -> bool {
        self.equations.iter().all(|eq| {
            let mut seen: Vec<(usize, usize, usize)> = eq.terms.iter().map(|t| (t.block, t.i, t.j)).collect();
            seen.sort_unstable();
            let distinct = seen.windows(2).all(|w| w[0] != w[1]);
            distinct
                && eq.terms.iter().all(|t| t.coef.is_zero() || t.coef == Rational::one() || t.coef == -Rational::one())
        })
    }

    /// `{n, pair, symmetric, kind, num_vars, basis, alpha, eqs: [{terms: [[block, i, j, coef]], rhs}]}`.
    pub fn to_json(&self) -> Value {
        let eqs: Vec<Value> = self
            .equations
            .iter()
            .map(|e| {
                let terms: Vec<Value> =
                    e.terms.iter().map(|t| json!([t.block, t.i, t.j, t.coef.to_string()])).collect();
                json!({ "terms": terms, "rhs": e.rhs.to_string() })
            })
            .collect();
        json!({
            "kind": self.kind,
            "n": self.n,
            "pair": self.pair,
            "symmetric": self.symmetric,
            "num_vars": self.num_vars(),
            "basis": self.basis.iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(),
            "alpha": self.alpha.as_ref().map(Rational::to_string),
            "eqs": eqs,
        })
    }
}

/// `p` must be homogeneous of even degree; returns `k`.
pub(crate) fn half_degree(p: &Polynomial) -> Result<usize> {
    let deg = p.homogeneous_degree().ok_or_else(|| {
        if p.is_zero() {
            Error::InvalidArgument("zero polynomial has no degree".into())
        } else {
            Error::NotHomogeneous
        }
    })?;
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    Ok(deg / 2)
}

/// One equation per `H` in `targets`: `sum_{I + J = H} sign_b Q_b[I][J] = rhs(H)`,
/// over ordered pairs `(I, J)` of basis elements.
pub(crate) fn assemble(
    basis: &[Monomial],
    targets: &[Monomial],
    blocks: &[Rational],
    rhs: impl Fn(&Monomial) -> Rational,
) -> Vec<Equation> {
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    targets
        .iter()
        .map(|h| {
            let mut terms = Vec::new();
            for (i, mi) in basis.iter().enumerate() {
                let Some(rest) = mi.quotient_of(h) else { continue };
                let Some(&j) = index.get(&rest) else { continue };
                for (block, coef) in blocks.iter().enumerate() {
                    terms.push(Term { block, i, j, coef: coef.clone() });
                }
            }
            Equation { label: h.clone(), terms, rhs: rhs(h) }
        })
        .collect()
}

fn build(p: &Polynomial, kind: SystemKind) -> Result<ConstraintSystem> {
    let k = half_degree(p)?;
    let basis = monomial_index_set(p.num_vars(), k);
    let targets = monomial_index_set(p.num_vars(), 2 * k);
    let (pair, symmetric, blocks) = match kind {
        SystemKind::Xp => (false, false, vec![Rational::one()]),
        SystemKind::Sym => (false, true, vec![Rational::one()]),
        SystemKind::PsdPair => (true, true, vec![Rational::one(), -Rational::one()]),
        SystemKind::Z2k => unreachable!("built by build_z2k"),
    };
    let equations = assemble(&basis, &targets, &blocks, |h| p.coeff(h));
    Ok(ConstraintSystem { kind, n: basis.len(), pair, symmetric, basis, equations, alpha: None })
}

/// `{Q : v(x)^T Q v(x) = p}` over the degree-`k` monomial vector `v`.
pub fn build_affine_system(p: &Polynomial) -> Result<ConstraintSystem> {
    build(p, SystemKind::Xp)
}

/// The same equations restricted to symmetric `Q`.
pub fn build_sym_system(p: &Polynomial) -> Result<ConstraintSystem> {
    build(p, SystemKind::Sym)
}

/// Symmetric pairs `(Q+, Q-)` with `v^T (Q+ - Q-) v = p`, block-diagonally
/// embedded as one matrix of size `2 s_k`.
pub fn build_psd_pair_system(p: &Polynomial) -> Result<ConstraintSystem> {
    build(p, SystemKind::PsdPair)
}
