//! Layered clow-sequence program for characteristic-polynomial coefficients.
//!
//! Nodes are pairs `(h, v)`: the current clow has head `h` and the walk sits at
//! `v >= h`, where `(h, h)` means a clow with head `h` is about to start. Layer
//! `m` holds the nodes reached after `m` edges. Continuing to `w > h` has weight
//! `a_{v,w}`; closing the clow back to `h` has weight `-a_{v,h}` and moves to
//! a fresh head `h' > h` or to the sink. A sink value at layer `k` times
//! `(-1)^k` therefore equals `sum (-1)^(k + size) a_C` over clow sequences of
//! length `k`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{AffineMatrixPoly, BiDecomposition};
use crate::error::{Error, Result};
use crate::polyring::Polynomial;

pub type Node = (usize, usize);

#[derive(Clone, Debug)]
pub struct ClowProgram {
    n: usize,
    num_vars: usize,
    entries: Vec<Vec<Polynomial>>,
    through_zero: bool,
}

/// Forward values `layers[m][node]` and sink values `sinks[m]`.
#[derive(Clone, Debug)]
pub struct ForwardPass {
    pub layers: Vec<BTreeMap<Node, Polynomial>>,
    pub sinks: Vec<Polynomial>,
}

impl ClowProgram {
    /// With `through_zero`, every sequence starts with a clow headed at vertex `0`,
    /// which gives the coefficients of `det(A + Λ_n^{n-1})`.
    pub fn new(a: &AffineMatrixPoly, through_zero: bool) -> Result<Self> {
        if !a.is_linear() {
            return Err(Error::NotLinear);
        }
        Ok(Self::from_entries(a.to_polynomials(), a.num_vars(), through_zero))
    }

    pub fn from_entries(entries: Vec<Vec<Polynomial>>, num_vars: usize, through_zero: bool) -> Self {
        ClowProgram { n: entries.len(), num_vars, entries, through_zero }
    }

    fn starts(&self) -> Vec<Node> {
        if self.through_zero {
            (0..self.n.min(1)).map(|h| (h, h)).collect()
        } else {
            (0..self.n).map(|h| (h, h)).collect()
        }
    }

    fn accumulate(map: &mut BTreeMap<Node, Polynomial>, node: Node, value: Polynomial) {
        match map.get_mut(&node) {
            Some(v) => *v = &*v + &value,
            None => {
                map.insert(node, value);
            }
        }
    }

    pub fn forward(&self, max_len: usize) -> ForwardPass {
        let zero = Polynomial::zero(self.num_vars);
        let mut layers =
            vec![self.starts().into_iter().map(|s| (s, Polynomial::one(self.num_vars))).collect::<BTreeMap<_, _>>()];
        let mut sinks = vec![zero.clone()];
        for m in 0..max_len {
            let mut next = BTreeMap::new();
            let mut sink = zero.clone();
            for (&(h, v), val) in &layers[m] {
                for w in h + 1..self.n {
                    let e = &self.entries[v][w];
                    if !e.is_zero() {
                        Self::accumulate(&mut next, (h, w), val * e);
                    }
                }
                let e = &self.entries[v][h];
                if e.is_zero() {
                    continue;
                }
                let closed = -&(val * e);
                for h2 in h + 1..self.n {
                    Self::accumulate(&mut next, (h2, h2), closed.clone());
                }
                sink = &sink + &closed;
            }
            layers.push(next);
            sinks.push(sink);
        }
        ForwardPass { layers, sinks }
    }

    /// `bwd[j][node]`: signed weight of all paths from `node` to the sink with
    /// exactly `j` edges.
    pub fn backward(&self, max_len: usize) -> Vec<BTreeMap<Node, Polynomial>> {
        let mut bwd: Vec<BTreeMap<Node, Polynomial>> = vec![BTreeMap::new()];
        for j in 1..=max_len {
            let prev = &bwd[j - 1];
            let mut cur = BTreeMap::new();
            for h in 0..self.n {
                for v in h..self.n {
                    let mut acc = Polynomial::zero(self.num_vars);
                    for w in h + 1..self.n {
                        if let Some(b) = prev.get(&(h, w)) {
                            acc = &acc + &(&self.entries[v][w] * b);
                        }
                    }
                    let mut tail = Polynomial::zero(self.num_vars);
                    if j == 1 {
                        tail = Polynomial::one(self.num_vars);
                    }
                    for h2 in h + 1..self.n {
                        if let Some(b) = prev.get(&(h2, h2)) {
                            tail = &tail + b;
                        }
                    }
                    acc = &acc - &(&self.entries[v][h] * &tail);
                    if !acc.is_zero() {
                        cur.insert((h, v), acc);
                    }
                }
            }
            bwd.push(cur);
        }
        bwd
    }

    /// `sum (-1)^(k + size) a_C` over the program's clow sequences of length `k`.
    pub fn coefficient(&self, k: usize) -> Polynomial {
        if k == 0 {
            return if self.through_zero && self.n > 0 {
                Polynomial::zero(self.num_vars)
            } else {
                Polynomial::one(self.num_vars)
            };
        }
        let pass = self.forward(k);
        signed(&pass.sinks[k], k)
    }

    /// Splits the length-`k` coefficient at layer `m < k` into one pair per
    /// node of that layer: forward value times backward value.
    pub fn split_at_layer(&self, k: usize, m: usize) -> Result<BiDecomposition> {
        if m >= k {
            return Err(Error::InvalidArgument(format!("split layer {m} must be below {k}")));
        }
        let pass = self.forward(k);
        let bwd = self.backward(k - m);
        let mut pairs = Vec::new();
        for (node, f) in &pass.layers[m] {
            if let Some(g) = bwd[k - m].get(node) {
                if !f.is_zero() {
                    pairs.push((f.clone(), signed(g, k)));
                }
            }
        }
        let target = signed(&pass.sinks[k], k);
        BiDecomposition::verified(self.num_vars, m, k - m, pairs, &target)
    }
}

fn signed(p: &Polynomial, k: usize) -> Polynomial {
    if k % 2 == 1 {
        -p
    } else {
        p.clone()
    }
}

/// Coefficients of `det(A(x) + λI)` together with the layer widths of the
/// program that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct MvCoefficients {
    /// `k ↦` coefficient of `λ^{n-k}`, homogeneous of degree `k`.
    pub coefficients: BTreeMap<usize, Polynomial>,
    pub layer_widths: Vec<usize>,
}

pub fn mv_coefficients(a: &AffineMatrixPoly, degrees: &[usize]) -> Result<MvCoefficients> {
    let program = ClowProgram::new(a, false)?;
    let n = a.n();
    if let Some(&bad) = degrees.iter().find(|&&k| k > n) {
        return Err(Error::InvalidArgument(format!("degree {bad} exceeds matrix size {n}")));
    }
    let max = degrees.iter().copied().max().unwrap_or(0);
    let pass = program.forward(max);
    let coefficients = degrees
        .iter()
        .map(|&k| (k, if k == 0 { Polynomial::one(a.num_vars()) } else { signed(&pass.sinks[k], k) }))
        .collect();
    let layer_widths = pass.layers.iter().map(BTreeMap::len).collect();
    Ok(MvCoefficients { coefficients, layer_widths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ExactMatrix;
    use crate::rational::rat;

    #[test]
    fn diagonal_matrix() {
        let mut c0 = ExactMatrix::zeros(2, 2);
        c0[(0, 0)] = rat(1);
        let mut c1 = ExactMatrix::zeros(2, 2);
        c1[(1, 1)] = rat(1);
        let a = AffineMatrixPoly::linear(2, vec![c0, c1]).unwrap();
        let mv = mv_coefficients(&a, &[0, 1, 2]).unwrap();
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        assert_eq!(mv.coefficients[&2], &x * &y);
        assert_eq!(mv.coefficients[&1], &x + &y);
        assert_eq!(mv.coefficients[&0], Polynomial::one(2));
        assert!(mv.layer_widths.iter().all(|&w| w <= 4));
    }

    #[test]
    fn rejects_affine_input() {
        let a = AffineMatrixPoly::new(ExactMatrix::identity(2), vec![]).unwrap();
        assert!(matches!(mv_coefficients(&a, &[1]), Err(Error::NotLinear)));
    }
}
