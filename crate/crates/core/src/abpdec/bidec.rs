use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::Polynomial;

/// Pairs `(f_i, g_i)` with `sum f_i g_i` equal to a target polynomial, every
/// `f_i` homogeneous of degree `k` and every `g_i` of degree `target_degree - k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BiDecompositionRepr")]
pub struct BiDecomposition {
    k: usize,
    target_degree: usize,
    num_vars: usize,
    #[serde(serialize_with = "serialize_pairs")]
    pairs: Vec<(Polynomial, Polynomial)>,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    f: Polynomial,
    g: Polynomial,
}

#[derive(Deserialize)]
struct BiDecompositionRepr {
    k: usize,
    target_degree: usize,
    num_vars: usize,
    pairs: Vec<PairRepr>,
}

fn serialize_pairs<S: serde::Serializer>(
    pairs: &[(Polynomial, Polynomial)],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(pairs.len()))?;
    for (f, g) in pairs {
        seq.serialize_element(&PairRepr { f: f.clone(), g: g.clone() })?;
    }
    seq.end()
}

impl TryFrom<BiDecompositionRepr> for BiDecomposition {
    type Error = Error;
    fn try_from(r: BiDecompositionRepr) -> Result<Self> {
        if r.k > r.target_degree {
            return Err(Error::Malformed(format!("k = {} exceeds target degree {}", r.k, r.target_degree)));
        }
        let pairs = r.pairs.into_iter().map(|p| (p.f, p.g)).collect();
        BiDecomposition::checked(r.num_vars, r.k, r.target_degree - r.k, pairs)
    }
}

fn has_degree(p: &Polynomial, d: usize) -> bool {
    p.is_zero() || p.homogeneous_degree() == Some(d)
}

impl BiDecomposition {
    fn checked(
        num_vars: usize,
        f_degree: usize,
        g_degree: usize,
        pairs: Vec<(Polynomial, Polynomial)>,
    ) -> Result<Self> {
        for (i, (f, g)) in pairs.iter().enumerate() {
            if f.num_vars() != num_vars || g.num_vars() != num_vars {
                return Err(Error::DimensionMismatch { expected: num_vars, found: f.num_vars().max(g.num_vars()) });
            }
            if !has_degree(f, f_degree) || !has_degree(g, g_degree) {
                return Err(Error::VerificationFailed(format!(
                    "pair {i} is not homogeneous of degrees ({f_degree}, {g_degree})"
                )));
            }
        }
        Ok(BiDecomposition { k: f_degree, target_degree: f_degree + g_degree, num_vars, pairs })
    }

    /// Builds a decomposition and checks that it re-expands to `target`.
    pub fn verified(
        num_vars: usize,
        f_degree: usize,
        g_degree: usize,
        pairs: Vec<(Polynomial, Polynomial)>,
        target: &Polynomial,
    ) -> Result<Self> {
        let dec = Self::checked(num_vars, f_degree, g_degree, pairs)?;
        let sum = dec.expand();
        if &sum != target {
            return Err(Error::VerificationFailed(format!(
                "{} pairs expand to a polynomial differing from the target by {}",
                dec.len(),
                &sum - target
            )));
        }
        Ok(dec)
    }

    /// The pairs, with every `g` negated when `negate` is set.
    pub fn pairs_with_sign(&self, negate: bool) -> Vec<(Polynomial, Polynomial)> {
        self.pairs.iter().map(|(f, g)| if negate { (f.clone(), -g) } else { (f.clone(), g.clone()) }).collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn pairs(&self) -> &[(Polynomial, Polynomial)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn expand(&self) -> Polynomial {
        self.pairs.iter().fold(Polynomial::zero(self.num_vars), |acc, (f, g)| &acc + &(f * g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verification_rejects_wrong_sum() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let xy = &x * &y;
        assert!(BiDecomposition::verified(2, 1, 1, vec![(x.clone(), y.clone())], &xy).is_ok());
        assert!(matches!(
            BiDecomposition::verified(2, 1, 1, vec![(x.clone(), x.clone())], &xy),
            Err(Error::VerificationFailed(_))
        ));
        assert!(BiDecomposition::verified(2, 1, 1, vec![(xy.clone(), Polynomial::one(2))], &xy).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let dec = BiDecomposition::verified(2, 1, 1, vec![(x.clone(), y.clone())], &(&x * &y)).unwrap();
        let s = serde_json::to_string(&dec).unwrap();
        assert!(s.starts_with(r#"{"k":1,"target_degree":2,"num_vars":2,"pairs":[{"f":"#));
        let back: BiDecomposition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, dec);
    }
}
