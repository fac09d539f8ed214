//! JSON encodings.
//!
//! A polynomial is `{"terms": [[exponent, "num/den"], ...]}` with ascending
//! exponents; integers are written as `"n"`. A Frobenius element is
//! `[[index, "coeff"], ...]`. A series is an array of polynomials
//! `a_0, a_1, ...`. Numbers are strings so that nothing passes through a
//! 64-bit float.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::eulerprod::PolySeries;
use crate::exactmath::{Poly, Rat};
use crate::frobenius::FrobElt;

/// `"n"` for integers, `"num/den"` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`rat_to_string`]; also accepts surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rat::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<(u64, String)>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            terms: self.terms().map(|(e, c)| (e, rat_to_string(c))).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let terms = repr
            .terms
            .iter()
            .map(|(e, c)| parse_rat(c).map(|c| (*e, c)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Poly::from_terms(terms))
    }
}

impl Serialize for FrobElt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(u64, String)> = self.terms().map(|(k, c)| (k, c.to_string())).collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FrobElt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<(u64, String)>::deserialize(deserializer)?;
        let terms = terms
            .into_iter()
            .map(|(k, c)| {
                c.trim()
                    .parse::<BigInt>()
                    .map(|c| (k, c))
                    .map_err(|_| D::Error::custom(format!("not an integer: {c:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(FrobElt::from_big_terms(terms))
    }
}

impl Serialize for PolySeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolySeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<Poly>::deserialize(deserializer)?;
        PolySeries::new(coeffs).map_err(D::Error::custom)
    }
}

/// Serializes a rational as its string form.
pub fn rat_json(r: &Rat) -> serde_json::Value {
    serde_json::Value::String(rat_to_string(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{frac, rat};
    use crate::necklace::necklace_m;
    use proptest::prelude::*;

    #[test]
    fn polynomial_encoding() {
        let p = Poly::from_terms([(3, frac(1, 3)), (0, rat(-2)), (1, rat(7))]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"terms":[[0,"-2"],[1,"7"],[3,"1/3"]]}"#);
        assert_eq!(serde_json::from_str::<Poly>(&s).unwrap(), p);
        assert_eq!(
            serde_json::to_string(&Poly::zero()).unwrap(),
            r#"{"terms":[]}"#
        );
        let big = r#"{"terms":[[0,"123456789012345678901234567891/2"]]}"#;
        let q: Poly = serde_json::from_str(big).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), big);
        assert!(serde_json::from_str::<Poly>(r#"{"terms":[[0,"1/0"]]}"#).is_err());
        assert!(serde_json::from_str::<Poly>(r#"{"terms":[[0,"x"]]}"#).is_err());
    }

    #[test]
    fn operator_and_series_encoding() {
        let f = FrobElt::from_terms([(10, 1), (5, -1), (2, -1), (1, 1)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"[[1,"1"],[2,"-1"],[5,"-1"],[10,"1"]]"#);
        assert_eq!(serde_json::from_str::<FrobElt>(&s).unwrap(), f);
        let series = PolySeries::new((0..4).map(|d| necklace_m(d + 1).unwrap()).collect()).unwrap();
        let s = serde_json::to_string(&series).unwrap();
        assert_eq!(serde_json::from_str::<PolySeries>(&s).unwrap(), series);
        assert!(serde_json::from_str::<PolySeries>("[]").is_err());
    }

    proptest! {
        #[test]
        fn rational_strings_roundtrip(n in any::<i64>(), d in 1i64..1_000_000) {
            let r = frac(n, d);
            prop_assert_eq!(parse_rat(&rat_to_string(&r)).unwrap(), r);
        }
    }
}
