//! Clows and clow sequences over the vertex set `{0, .., n-1}`; vertex `0`
//! plays the role of the distinguished first vertex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::Polynomial;

/// Largest `n` and total length accepted by the brute-force enumerator.
pub const ENUMERATION_GUARD: usize = 5;

/// Closed walk `<v_1, .., v_l>` whose head `v_1` is its strict minimum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clow {
    vertices: Vec<usize>,
}

impl Clow {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let Some(&head) = vertices.first() else {
            return Err(Error::InvalidArgument("a clow needs at least one vertex".into()));
        };
        if vertices[1..].iter().any(|&v| v <= head) {
            return Err(Error::InvalidArgument(format!("head {head} is not the strict minimum of {vertices:?}")));
        }
        Ok(Clow { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn head(&self) -> usize {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_cycle(&self) -> bool {
        let mut seen = self.vertices.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// `a_c = prod a_{v_i, v_{i+1}}` with `v_{l+1} = v_1`.
    pub fn weight(&self, entries: &[Vec<Polynomial>]) -> Polynomial {
        let l = self.vertices.len();
        let mut acc = entries[self.vertices[l - 1]][self.vertices[0]].clone();
        for w in self.vertices.windows(2) {
            acc = &acc * &entries[w[0]][w[1]];
        }
        acc
    }
}

/// Clows with strictly increasing heads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClowSequence {
    clows: Vec<Clow>,
}

impl ClowSequence {
    pub fn new(clows: Vec<Clow>) -> Result<Self> {
        if clows.windows(2).any(|w| w[0].head() >= w[1].head()) {
            return Err(Error::InvalidArgument("clow heads must increase strictly".into()));
        }
        Ok(ClowSequence { clows })
    }

    pub fn clows(&self) -> &[Clow] {
        &self.clows
    }

    /// Number of clows.
    pub fn size(&self) -> usize {
        self.clows.len()
    }

    /// Total number of edges.
    pub fn length(&self) -> usize {
        self.clows.iter().map(Clow::len).sum()
    }

    /// `(-1)^(n + size)`.
    pub fn sign(&self, n: usize) -> i32 {
        if (n + self.size()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.clows.iter().any(|c| c.contains(v))
    }

    /// The clow through vertex `0`, which is necessarily the first one.
    pub fn first_clow_through_zero(&self) -> Option<&Clow> {
        self.clows.first().filter(|c| c.head() == 0)
    }

    /// Vertex-disjoint cycles.
    pub fn is_cycle_cover(&self) -> bool {
        let mut all: Vec<usize> = self.clows.iter().flat_map(|c| c.vertices.iter().copied()).collect();
        all.sort_unstable();
        all.windows(2).all(|w| w[0] != w[1])
    }

    pub fn weight(&self, entries: &[Vec<Polynomial>]) -> Polynomial {
        let num_vars = entries.first().and_then(|r| r.first()).map_or(0, Polynomial::num_vars);
        self.clows.iter().fold(Polynomial::one(num_vars), |acc, c| &acc * &c.weight(entries))
    }
}

/// Which clow sequences of total length `k` to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClowFamily {
    All,
    CycleCovers,
    NonCycleCovers,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClowFilter {
    pub family: ClowFamily,
    /// Keep only sequences through vertex `0`.
    pub through_zero: bool,
    /// Keep only sequences whose clow through vertex `0` has this length.
    pub first_length: Option<usize>,
}

impl ClowFilter {
    pub fn all(through_zero: bool) -> Self {
        ClowFilter { family: ClowFamily::All, through_zero, first_length: None }
    }

    fn accepts(&self, seq: &ClowSequence) -> bool {
        let family_ok = match self.family {
            ClowFamily::All => true,
            ClowFamily::CycleCovers => seq.is_cycle_cover(),
            ClowFamily::NonCycleCovers => !seq.is_cycle_cover(),
        };
        let zero_ok = !self.through_zero || seq.contains(0);
        let first_ok = self.first_length.is_none_or(|t| seq.first_clow_through_zero().is_some_and(|c| c.len() == t));
        family_ok && zero_ok && first_ok
    }
}

fn check_guard(n: usize, k: usize) -> Result<()> {
    if n > ENUMERATION_GUARD || k > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded(format!(
            "clow enumeration needs n, k <= {ENUMERATION_GUARD}, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

fn clows_with_head(n: usize, head: usize, len: usize, prefix: &mut Vec<usize>, out: &mut Vec<Clow>) {
    if prefix.len() == len {
        out.push(Clow { vertices: prefix.clone() });
        return;
    }
    for v in head + 1..n {
        prefix.push(v);
        clows_with_head(n, head, len, prefix, out);
        prefix.pop();
    }
}

fn sequences(n: usize, min_head: usize, remaining: usize, current: &mut Vec<Clow>, out: &mut Vec<ClowSequence>) {
    if remaining == 0 {
        out.push(ClowSequence { clows: current.clone() });
        return;
    }
    for head in min_head..n {
        for len in 1..=remaining {
            let mut clows = Vec::new();
            clows_with_head(n, head, len, &mut vec![head], &mut clows);
            for c in clows {
                current.push(c);
                sequences(n, head + 1, remaining - len, current, out);
                current.pop();
            }
        }
    }
}

/// All clow sequences on `n` vertices of total length `k` accepted by `filter`.
pub fn enumerate_clow_sequences(n: usize, k: usize, filter: ClowFilter) -> Result<Vec<ClowSequence>> {
    check_guard(n, k)?;
    let mut out = Vec::new();
    sequences(n, 0, k, &mut Vec::new(), &mut out);
    out.retain(|s| filter.accepts(s));
    Ok(out)
}

/// `sum sign(C) a_C` over the filtered family, with `sign(C) = (-1)^(n + size)`.
pub fn clow_sum(entries: &[Vec<Polynomial>], num_vars: usize, k: usize, filter: ClowFilter) -> Result<Polynomial> {
    let n = entries.len();
    let mut acc = Polynomial::zero(num_vars);
    for seq in enumerate_clow_sequences(n, k, filter)? {
        let w = seq.weight(entries);
        acc = if seq.sign(n) > 0 { &acc + &w } else { &acc - &w };
    }
    Ok(acc)
}

/// Signed sum over all clow sequences of length `k`, optionally only those
/// through vertex `0`.
pub fn clow_sum_bruteforce(a: &super::AffineMatrixPoly, k: usize, through_zero: bool) -> Result<Polynomial> {
    if !a.is_linear() {
        return Err(Error::NotLinear);
    }
    clow_sum(&a.to_polynomials(), a.num_vars(), k, ClowFilter::all(through_zero))
}
