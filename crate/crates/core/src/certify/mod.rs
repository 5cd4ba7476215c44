//! Concave-minimization certificates: eigenvalue sums `mu_l`, dual bounds, and
//! outer-approximation checks for minimum rank and bi-polynomial rank.

mod eigen;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use eigen::{
    min_eigenvalue, mu, psd_check, smallest_eigenprojector, symmetric_eigen, Eigen, FloatSymMatrix, JACOBI_MAX_SWEEPS,
};

use crate::error::{Error, Result};
use crate::polyring::{monomial_index_set, Monomial, Polynomial};
use crate::rankmin::half_degree;
use crate::rational::to_f64;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Condition (i) of the outer-approximation argument; it is never checked.
pub const CONTAINMENT_ASSUMPTION: &str = "the feasible region lies in the convex hull of the supplied vertices";

/// Dual witness for `mu_l(Y) >= l z - tr(Z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    #[serde(rename = "Z")]
    pub z_matrix: FloatSymMatrix,
    pub z: f64,
    pub l: usize,
}

impl DualCertificate {
    /// Dual for a block-diagonally embedded pair, with `Z = diag(z1, z2)`.
    pub fn for_pair(z1: &FloatSymMatrix, z2: &FloatSymMatrix, z: f64, l: usize) -> Self {
        DualCertificate { z_matrix: FloatSymMatrix::block_diag(z1, z2), z, l }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualBound {
    /// `l z - tr(Z)`.
    pub bound: f64,
    pub slack: f64,
    /// `mu_l(Y)`, computed for the weak-duality self-check.
    pub mu: f64,
}

fn common_scale(y: &FloatSymMatrix, cert: &DualCertificate) -> f64 {
    y.norm_scale().max(cert.z_matrix.norm_scale()).max(cert.z.abs())
}

/// Accepts iff `Z >= 0` and `Y + Z - zI >= 0` up to `tol` times the common
/// scale of `Y`, `Z` and `z`. An accepted bound satisfies
/// `mu_l(Y) >= bound - slack` with `slack = n tol scale`.
pub fn check_dual(y: &FloatSymMatrix, cert: &DualCertificate, tol: f64) -> Result<DualBound> {
    let n = y.n();
    if cert.z_matrix.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: cert.z_matrix.n() });
    }
    if cert.l == 0 || cert.l > n {
        return Err(Error::InvalidArgument(format!("l = {} outside 1..={n}", cert.l)));
    }
    if !cert.z.is_finite() {
        return Err(Error::Malformed("z must be finite".into()));
    }
    let scale = common_scale(y, cert);
    let floor = -tol * scale;
    let lam_z = min_eigenvalue(&cert.z_matrix);
    if lam_z < floor {
        return Err(Error::Rejected(format!("Z has eigenvalue {lam_z:e} below {floor:e}")));
    }
    let shifted = y.add(&cert.z_matrix)?.sub(&FloatSymMatrix::identity(n).scale(cert.z))?;
    let lam_s = min_eigenvalue(&shifted);
    if lam_s < floor {
        return Err(Error::Rejected(format!("Y + Z - zI has eigenvalue {lam_s:e} below {floor:e}")));
    }
    let bound = cert.l as f64 * cert.z - cert.z_matrix.trace();
    let slack = n as f64 * tol * scale;
    let mu_l = mu(y, cert.l)?;
    if bound > mu_l + slack {
        return Err(Error::Rejected(format!(
            "bound {bound:e} exceeds mu_{} = {mu_l:e} by more than {slack:e}",
            cert.l
        )));
    }
    Ok(DualBound { bound, slack, mu: mu_l })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexFailure {
    pub vertex: usize,
    pub mu: f64,
    pub threshold: f64,
}

/// Result of checking `mu_{n-r}(Y) > tol n scale(Y)` on every vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OuterApproxCertificate {
    pub vertices: Vec<FloatSymMatrix>,
    pub n: usize,
    pub r: usize,
    pub l: usize,
    pub tol: f64,
    pub mu: Vec<f64>,
    /// Smallest `mu_{n-r}` over the vertices.
    pub margin: f64,
    pub accepted: bool,
    /// The first vertex that failed, by index.
    pub rejection: Option<VertexFailure>,
    pub assumption: String,
    pub conclusion: String,
}

fn common_dim(vertices: &[FloatSymMatrix]) -> Result<usize> {
    let first = vertices.first().ok_or_else(|| Error::InvalidArgument("empty vertex list".into()))?;
    let n = first.n();
    if let Some(bad) = vertices.iter().find(|v| v.n() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.n() });
    }
    Ok(n)
}

fn positivity_threshold(y: &FloatSymMatrix, tol: f64) -> f64 {
    tol * y.n() as f64 * y.norm_scale()
}

fn first_failure(values: &[(f64, f64)]) -> Option<VertexFailure> {
    values
        .iter()
        .enumerate()
        .find(|(_, (mu, threshold))| mu <= threshold)
        .map(|(vertex, &(mu, threshold))| VertexFailure { vertex, mu, threshold })
}

/// Checks condition (ii) for `minrank > r` on each vertex, concurrently.
pub fn certify_minrank(vertices: &[FloatSymMatrix], r: usize, tol: f64) -> Result<OuterApproxCertificate> {
    let n = common_dim(vertices)?;
    if r >= n {
        return Err(Error::InvalidArgument(format!("r = {r} must be below n = {n}")));
    }
    let l = n - r;
    let values: Vec<(f64, f64)> =
        vertices.par_iter().map(|y| Ok((mu(y, l)?, positivity_threshold(y, tol)))).collect::<Result<_>>()?;
    let rejection = first_failure(&values);
    let accepted = rejection.is_none();
    let mus: Vec<f64> = values.iter().map(|v| v.0).collect();
    Ok(OuterApproxCertificate {
        vertices: vertices.to_vec(),
        n,
        r,
        l,
        tol,
        margin: mus.iter().copied().fold(f64::INFINITY, f64::min),
        mu: mus,
        accepted,
        rejection,
        assumption: CONTAINMENT_ASSUMPTION.to_string(),
        conclusion: if accepted { format!("minrank > {r}") } else { "no conclusion".to_string() },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrankCertificate {
    pub k: usize,
    pub s_k: usize,
    pub r: usize,
    /// Per vertex: `mu_{2 s_k - r}` of the embedded pair, or the verified dual bound.
    pub values: Vec<f64>,
    pub method: String,
    pub margin: f64,
    pub accepted: bool,
    pub rejection: Option<VertexFailure>,
    /// Largest coefficient error of `v^T (Q+ - Q-) v - p` over each pair;
    /// informational, since membership is part of the containment assumption.
    pub residuals: Vec<f64>,
    pub assumption: String,
    pub conclusion: String,
}

fn pair_residual(basis: &[Monomial], p: &Polynomial, plus: &FloatSymMatrix, minus: &FloatSymMatrix) -> f64 {
    let mut coeffs: BTreeMap<Monomial, f64> = p.terms().map(|(m, c)| (m.clone(), -to_f64(c))).collect();
    for (i, mi) in basis.iter().enumerate() {
        for (j, mj) in basis.iter().enumerate() {
            *coeffs.entry(mi.mul(mj)).or_default() += plus.get(i, j) - minus.get(i, j);
        }
    }
    coeffs.values().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Checks `brank(p) > r / 2` on pairs `(Q+, Q-)` embedded as `diag(Q+, Q-)`.
/// With `duals`, each vertex is accepted through its dual bound instead of
/// direct eigencomputation.
pub fn certify_brank(
    p: &Polynomial,
    pairs: &[(FloatSymMatrix, FloatSymMatrix)],
    r: usize,
    tol: f64,
    duals: Option<&[DualCertificate]>,
) -> Result<BrankCertificate> {
    let k = half_degree(p)?;
    let basis = monomial_index_set(p.num_vars(), k);
    let s_k = basis.len();
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("empty vertex list".into()));
    }
    for (plus, minus) in pairs {
        for m in [plus, minus] {
            if m.n() != s_k {
                return Err(Error::DimensionMismatch { expected: s_k, found: m.n() });
            }
        }
    }
    let n = 2 * s_k;
    if r >= n {
        return Err(Error::InvalidArgument(format!("r = {r} must be below 2 s_k = {n}")));
    }
    let l = n - r;
    let embedded: Vec<FloatSymMatrix> = pairs.iter().map(|(a, b)| FloatSymMatrix::block_diag(a, b)).collect();
    let (values, method): (Vec<(f64, f64)>, &str) = match duals {
        None => (
            embedded.par_iter().map(|y| Ok((mu(y, l)?, positivity_threshold(y, tol)))).collect::<Result<_>>()?,
            "eigenvalues",
        ),
        Some(duals) => {
            if duals.len() != pairs.len() {
                return Err(Error::DimensionMismatch { expected: pairs.len(), found: duals.len() });
            }
            if let Some(d) = duals.iter().find(|d| d.l != l) {
                return Err(Error::InvalidArgument(format!("dual certificate has l = {}, expected {l}", d.l)));
            }
            let values = embedded
                .par_iter()
                .zip(duals)
                .map(|(y, d)| {
                    let b = check_dual(y, d, tol)?;
                    Ok((b.bound - b.slack, tol * n as f64 * common_scale(y, d)))
                })
                .collect::<Result<_>>()?;
            (values, "dual certificates")
        }
    };
    let rejection = first_failure(&values);
    let accepted = rejection.is_none();
    let residuals = pairs.iter().map(|(a, b)| pair_residual(&basis, p, a, b)).collect();
    let vals: Vec<f64> = values.iter().map(|v| v.0).collect();
    Ok(BrankCertificate {
        k,
        s_k,
        r,
        margin: vals.iter().copied().fold(f64::INFINITY, f64::min),
        values: vals,
        method: method.to_string(),
        accepted,
        rejection,
        residuals,
        assumption: format!("{CONTAINMENT_ASSUMPTION}, each embedded as diag(Q+, Q-)"),
        conclusion: if accepted { format!("brank > {r}/2") } else { "no conclusion".to_string() },
    })
}
