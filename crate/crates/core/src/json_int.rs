//! Serde helpers for arbitrary-precision integers in JSON.
//!
//! Values inside the IEEE-754 safe range (|x| < 2^53) are written as plain JSON
//! numbers; anything larger is written as a decimal string. Either form is
//! accepted on input.

use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

const SAFE_LIMIT: i64 = 1 << 53;

/// Borrowed view used for serialization.
pub struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(self.0) {
            Ok(x) if x.abs() < SAFE_LIMIT => s.serialize_i64(x),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// Owned integer accepted from a JSON number or decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInt(pub BigInt);

impl<'de> Deserialize<'de> for ParsedInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = ParsedInt;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ParsedInt, E> {
                Ok(ParsedInt(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ParsedInt, E> {
                Ok(ParsedInt(BigInt::from(v)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ParsedInt, E> {
                Err(E::custom(format!("expected an integer, found {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ParsedInt, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(ParsedInt)
                    .map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

pub mod scalar {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        JsonInt(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        ParsedInt::deserialize(d).map(|p| p.0)
    }
}

pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&JsonInt(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<ParsedInt>::deserialize(d).map(|v| v.into_iter().map(|p| p.0).collect())
    }
}

pub mod matrix {
    use super::*;

    struct Row<'a>(&'a [BigInt]);

    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            vector::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            seq.serialize_element(&Row(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<ParsedInt>>::deserialize(d).map(|rows| {
            rows.into_iter()
                .map(|r| r.into_iter().map(|p| p.0).collect())
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "scalar")]
        x: BigInt,
    }

    #[test]
    fn small_values_are_numbers_large_are_strings() {
        let small = Holder {
            x: BigInt::from(-42),
        };
        assert_eq!(serde_json::to_string(&small).unwrap(), r#"{"x":-42}"#);
        let big = Holder {
            x: BigInt::from(1i64 << 53),
        };
        assert_eq!(
            serde_json::to_string(&big).unwrap(),
            r#"{"x":"9007199254740992"}"#
        );
        let huge: Holder =
            serde_json::from_str(r#"{"x":"-123456789012345678901234567890"}"#).unwrap();
        assert_eq!(huge.x.to_string(), "-123456789012345678901234567890");
        assert!(serde_json::from_str::<Holder>(r#"{"x":1.5}"#).is_err());
        assert!(serde_json::from_str::<Holder>(r#"{"x":"12a"}"#).is_err());
    }
}
