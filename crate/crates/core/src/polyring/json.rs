//! Canonical JSON: `{"num_vars": D, "terms": [{"exp": [..], "num": "..", "den": ".."}]}`
//! with terms in graded-lex order and reduced fractions with positive denominators.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Point, Polynomial};
use crate::rational::{parse_rational, Rational};

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    num_vars: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = PolynomialRepr {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exp: m.exponents().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolynomialRepr::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let num: BigInt =
                t.num.trim().parse().map_err(|_| D::Error::custom(format!("bad numerator {:?}", t.num)))?;
            let den: BigInt =
                t.den.trim().parse().map_err(|_| D::Error::custom(format!("bad denominator {:?}", t.den)))?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((t.exp, Rational::new(num, den)));
        }
        Polynomial::from_terms(repr.num_vars, terms).map_err(D::Error::custom)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coords: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let coords = Vec::<String>::deserialize(deserializer)?;
        coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>().map(Point).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::perm_poly;
    use crate::rational::frac;

    #[test]
    fn canonical_form() {
        let p = Polynomial::from_terms(2, [(vec![0, 1], frac(2, 4)), (vec![1, 0], frac(-3, 1))]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"num_vars":2,"terms":[{"exp":[1,0],"num":"-3","den":"1"},{"exp":[0,1],"num":"1","den":"2"}]}"#
        );
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn deserialization_normalizes() {
        let s = r#"{"num_vars":1,"terms":[{"exp":[1],"num":"2","den":"-4"},{"exp":[1],"num":"1","den":"2"},{"exp":[0],"num":"3","den":"1"}]}"#;
        let p: Polynomial = serde_json::from_str(s).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert!(serde_json::from_str::<Polynomial>(r#"{"num_vars":1,"terms":[{"exp":[1,0],"num":"1","den":"1"}]}"#)
            .is_err());
        assert!(
            serde_json::from_str::<Polynomial>(r#"{"num_vars":1,"terms":[{"exp":[1],"num":"1","den":"0"}]}"#).is_err()
        );
    }

    #[test]
    fn perm_roundtrip() {
        let p = perm_poly(3).unwrap();
        let back: Polynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
