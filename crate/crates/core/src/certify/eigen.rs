use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::ExactMatrix;

/// Dense symmetric matrix of doubles. Construction averages `M` with `M^T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct FloatSymMatrix {
    n: usize,
    data: Vec<f64>,
    norm_scale: f64,
}

impl TryFrom<Vec<Vec<f64>>> for FloatSymMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        FloatSymMatrix::from_rows(&rows)
    }
}

impl From<FloatSymMatrix> for Vec<Vec<f64>> {
    fn from(m: FloatSymMatrix) -> Self {
        m.to_rows()
    }
}

impl FloatSymMatrix {
    fn from_data(n: usize, data: Vec<f64>) -> Self {
        let norm_scale = data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        FloatSymMatrix { n, data, norm_scale }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.as_ref().len() });
        }
        if rows.iter().any(|r| r.as_ref().iter().any(|v| !v.is_finite())) {
            return Err(Error::Malformed("matrix entries must be finite".into()));
        }
        let data = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                0.5 * (rows[i].as_ref()[j] + rows[j].as_ref()[i])
            })
            .collect();
        Ok(Self::from_data(n, data))
    }

    pub fn from_exact(m: &ExactMatrix) -> Result<Self> {
        Self::from_rows(&m.to_f64_rows())
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_data(n, vec![0.0; n * n])
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in d.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self::from_data(n, data)
    }

    /// `diag(a, b)`.
    pub fn block_diag(a: &FloatSymMatrix, b: &FloatSymMatrix) -> Self {
        let n = a.n + b.n;
        let mut data = vec![0.0; n * n];
        for i in 0..a.n {
            for j in 0..a.n {
                data[i * n + j] = a.get(i, j);
            }
        }
        for i in 0..b.n {
            for j in 0..b.n {
                data[(a.n + i) * n + a.n + j] = b.get(i, j);
            }
        }
        Self::from_data(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest absolute entry.
    pub fn norm_scale(&self) -> f64 {
        self.norm_scale
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_data(self.n, self.data.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(Self::from_data(self.n, self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect()))
    }

    /// `sum_i X_ii Y_ii + ...`: the Frobenius inner product `tr(X Y)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }
}

/// Eigenvalues in ascending order with matching unit eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<Vec<f64>>,
}

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `1e-12 * norm_scale`.
pub fn symmetric_eigen(m: &FloatSymMatrix) -> Eigen {
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = 1e-12 * m.norm_scale;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum();
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    Eigen {
        values: order.iter().map(|&i| a[i * n + i]).collect(),
        vectors: order.iter().map(|&i| (0..n).map(|k| v[k * n + i]).collect()).collect(),
    }
}

/// Sum of the `l` smallest eigenvalues.
pub fn mu(y: &FloatSymMatrix, l: usize) -> Result<f64> {
    if l == 0 || l > y.n {
        return Err(Error::InvalidArgument(format!("l = {l} outside 1..={}", y.n)));
    }
    Ok(symmetric_eigen(y).values[..l].iter().sum())
}

pub fn min_eigenvalue(y: &FloatSymMatrix) -> f64 {
    symmetric_eigen(y).values.first().copied().unwrap_or(0.0)
}

/// `lambda_min(Y) >= -tol * norm_scale`.
pub fn psd_check(y: &FloatSymMatrix, tol: f64) -> bool {
    min_eigenvalue(y) >= -tol * y.norm_scale
}

/// Projector onto the span of eigenvectors of the `l` smallest eigenvalues;
/// it attains `tr(X Y) = mu_l(Y)` with `tr(X) = l`, `0 <= X <= I`.
pub fn smallest_eigenprojector(y: &FloatSymMatrix, l: usize) -> Result<FloatSymMatrix> {
    if l > y.n {
        return Err(Error::InvalidArgument(format!("l = {l} exceeds n = {}", y.n)));
    }
    let eig = symmetric_eigen(y);
    let n = y.n;
    let mut data = vec![0.0; n * n];
    for vec in &eig.vectors[..l] {
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] += vec[i] * vec[j];
            }
        }
    }
    Ok(FloatSymMatrix::from_data(n, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_mu() {
        let y = FloatSymMatrix::diagonal(&[3.0, 1.0, -2.0]);
        assert!((mu(&y, 2).unwrap() + 1.0).abs() < 1e-12);
        assert!((mu(&y, 3).unwrap() - y.trace()).abs() < 1e-12);
        assert!(mu(&y, 0).is_err() && mu(&y, 4).is_err());
    }

    #[test]
    fn symmetrizes_and_diagonalizes() {
        let y = FloatSymMatrix::from_rows(&[[2.0, 1.0], [3.0, 2.0]]).unwrap();
        assert_eq!(y.get(0, 1), 2.0);
        let e = symmetric_eigen(&y);
        assert!((e.values[0] - 0.0).abs() < 1e-12 && (e.values[1] - 4.0).abs() < 1e-12);
        assert!(psd_check(&FloatSymMatrix::identity(3), 1e-9));
        assert!(!psd_check(&FloatSymMatrix::diagonal(&[1.0, -1.0]), 1e-9));
    }

    #[test]
    fn projector_attains_mu() {
        let y = FloatSymMatrix::from_rows(&[[1.0, 2.0, 0.5], [2.0, -1.0, 0.0], [0.5, 0.0, 3.0]]).unwrap();
        let x = smallest_eigenprojector(&y, 2).unwrap();
        assert!((x.trace() - 2.0).abs() < 1e-10);
        assert!((x.inner(&y) - mu(&y, 2).unwrap()).abs() < 1e-10);
        assert!(psd_check(&x, 1e-9));
        assert!(psd_check(&FloatSymMatrix::identity(3).sub(&x).unwrap(), 1e-9));
    }

    #[test]
    fn json_roundtrip() {
        let y = FloatSymMatrix::diagonal(&[1.0, -0.5]);
        let s = serde_json::to_string(&y).unwrap();
        assert_eq!(s, "[[1.0,0.0],[0.0,-0.5]]");
        assert_eq!(serde_json::from_str::<FloatSymMatrix>(&s).unwrap(), y);
        assert!(serde_json::from_str::<FloatSymMatrix>("[[1.0,0.0]]").is_err());
    }
}
