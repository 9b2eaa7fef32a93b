use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// External 1-based vertex label. A primed vertex `i'` is the frozen copy of
/// `i` added by framing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    primed: bool,
    label: u32,
}

impl VertexId {
    pub const fn new(label: u32) -> VertexId {
        VertexId {
            primed: false,
            label,
        }
    }

    pub const fn primed_of(label: u32) -> VertexId {
        VertexId {
            primed: true,
            label,
        }
    }

    pub fn label(self) -> u32 {
        self.label
    }

    pub fn is_primed(self) -> bool {
        self.primed
    }

    /// The primed copy `i'` of `i`.
    pub fn primed(self) -> VertexId {
        VertexId::primed_of(self.label)
    }

    /// The unprimed vertex this one copies (itself when unprimed).
    pub fn base(self) -> VertexId {
        VertexId::new(self.label)
    }
}

/// Shorthand for a list of unprimed vertices.
pub fn vertices(labels: &[u32]) -> Vec<VertexId> {
    labels.iter().map(|&l| VertexId::new(l)).collect()
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primed {
            write!(f, "{}'", self.label)
        } else {
            write!(f, "{}", self.label)
        }
    }
}

impl FromStr for VertexId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, primed) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let label: u32 = body
            .parse()
            .map_err(|_| format!("invalid vertex label {s:?}"))?;
        if label == 0 {
            return Err("vertex labels are 1-based".to_string());
        }
        Ok(VertexId { primed, label })
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.primed {
            s.collect_str(self)
        } else {
            s.serialize_u32(self.label)
        }
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = VertexId;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer label or a string such as \"3'\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<VertexId, E> {
                match u32::try_from(v) {
                    Ok(l) if l > 0 => Ok(VertexId::new(l)),
                    _ => Err(E::custom(format!("vertex label {v} out of range"))),
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<VertexId, E> {
                if v <= 0 {
                    return Err(E::custom(format!("vertex label {v} out of range")));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<VertexId, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Serde helpers for exact integers: machine-sized values are written as JSON
/// numbers, anything larger as a decimal string.
pub(crate) mod bigint_json {
    use super::*;

    pub fn to_value(x: &BigInt) -> serde_json::Value {
        match x.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::String(x.to_string()),
        }
    }

    pub fn from_value(v: &serde_json::Value) -> Result<BigInt, String> {
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigInt::from(i))
                } else if let Some(u) = n.as_u64() {
                    Ok(BigInt::from(u))
                } else {
                    Err(format!("non-integer entry {n}"))
                }
            }
            serde_json::Value::String(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
            other => Err(format!("expected integer, found {other}")),
        }
    }

    pub mod pair {
        use super::*;

        pub fn serialize<S: Serializer>(p: &(BigInt, BigInt), s: S) -> Result<S::Ok, S::Error> {
            [to_value(&p.0), to_value(&p.1)].serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(BigInt, BigInt), D::Error> {
            let [a, b] = <[serde_json::Value; 2]>::deserialize(d)?;
            let a = from_value(&a).map_err(de::Error::custom)?;
            let b = from_value(&b).map_err(de::Error::custom)?;
            Ok((a, b))
        }
    }
}
