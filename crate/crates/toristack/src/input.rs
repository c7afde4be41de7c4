//! The input document format: JSON restricted to exact literals. Integers
//! may be written as JSON integers or strings, rationals as integers or
//! `"p/q"` strings. Float literals are rejected everywhere, so every parsed
//! value is exact. See `docs/format.md` for the grammar.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use toristack_core::polytope::{Facet, HalfSpace, LabelledPolytope};
use toristack_core::{Int, Rat};

const EXACTNESS_MARKER: &str = "exactness:";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    /// Malformed syntax, with the position serde_json reports.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON that does not fit the schema (missing field, wrong
    /// arity, bad index ...).
    Schema { detail: String },
    /// A float literal where an exact value is required.
    Exactness { detail: String },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse {
                line,
                column,
                message,
            } => write!(f, "parse error at line {line}, column {column}: {message}"),
            Self::Schema { detail } => write!(f, "schema error: {detail}"),
            Self::Exactness { detail } => write!(
                f,
                "exactness error: {detail} (write rationals as \"p/q\" strings)"
            ),
        }
    }
}

impl std::error::Error for InputError {}

/// Arbitrary-precision integer that serializes as a string and parses from
/// a JSON integer or an integer string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub Int);

/// Exact rational that serializes as `"p"` or `"p/q"` and parses from a
/// JSON integer or such a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRat(pub Rat);

fn looks_like_float(s: &str) -> bool {
    s.contains(['.', 'e', 'E'])
}

fn parse_int_str<E: serde::de::Error>(s: &str) -> Result<Int, E> {
    if looks_like_float(s) {
        return Err(E::custom(format!(
            "{EXACTNESS_MARKER} non-integer literal {s:?}"
        )));
    }
    Int::from_str(s.trim()).map_err(|_| E::custom(format!("invalid integer literal {s:?}")))
}

fn parse_rat_str<E: serde::de::Error>(s: &str) -> Result<Rat, E> {
    if looks_like_float(s) {
        return Err(E::custom(format!(
            "{EXACTNESS_MARKER} non-exact literal {s:?}"
        )));
    }
    let (num, den) = match s.split_once('/') {
        None => (s.trim(), "1"),
        Some((n, d)) => (n.trim(), d.trim()),
    };
    let num =
        Int::from_str(num).map_err(|_| E::custom(format!("invalid rational literal {s:?}")))?;
    let den =
        Int::from_str(den).map_err(|_| E::custom(format!("invalid rational literal {s:?}")))?;
    if den == Int::from(0) {
        return Err(E::custom(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

fn number_to_int<E: serde::de::Error>(n: &serde_json::Number) -> Result<Int, E> {
    let text = n.to_string();
    if looks_like_float(&text) {
        return Err(E::custom(format!(
            "{EXACTNESS_MARKER} float literal {text}"
        )));
    }
    Int::from_str(&text).map_err(|_| E::custom(format!("invalid integer {text}")))
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let value = serde_json::Value::deserialize(deserializer)?;
        match value {
            serde_json::Value::Number(n) => number_to_int(&n).map(JsonInt),
            serde_json::Value::String(s) => parse_int_str(&s).map(JsonInt),
            other => Err(D::Error::custom(format!(
                "expected an integer, found {other}"
            ))),
        }
    }
}

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let r = &self.0;
        let text = if r.denom() == &Int::from(1) {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        };
        serializer.serialize_str(&text)
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let value = serde_json::Value::deserialize(deserializer)?;
        match value {
            serde_json::Value::Number(n) => {
                number_to_int(&n).map(|i| JsonRat(Rat::from_integer(i)))
            }
            serde_json::Value::String(s) => parse_rat_str(&s).map(JsonRat),
            other => Err(D::Error::custom(format!(
                "expected a rational, found {other}"
            ))),
        }
    }
}

/// A parsed input: either a labelled polytope in H-representation or a
/// stacky fan. Cone indices in the file are one-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDocument {
    Polytope(PolytopeInput),
    StackyFan(StackyFanInput),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeInput {
    pub dim: usize,
    pub facets: Vec<FacetInput>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetInput {
    pub normal: Vec<JsonInt>,
    pub eta: JsonRat,
    pub label: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StackyFanInput {
    pub dim: usize,
    pub rays: Vec<Vec<JsonInt>>,
    pub max_cones: Vec<Vec<usize>>,
    pub labels: Vec<u32>,
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Polytope(_) => "polytope",
            Self::StackyFan(_) => "stacky_fan",
        }
    }

    /// Structural checks beyond what serde enforces: dimensions, arities,
    /// label positivity, index ranges.
    fn check_shape(&self) -> Result<(), InputError> {
        let schema = |detail: String| Err(InputError::Schema { detail });
        match self {
            Self::Polytope(p) => {
                if p.dim == 0 {
                    return schema("dim must be at least 1".into());
                }
                if p.facets.is_empty() {
                    return schema("a polytope needs at least one facet".into());
                }
                for (i, f) in p.facets.iter().enumerate() {
                    if f.normal.len() != p.dim {
                        return schema(format!(
                            "facets[{i}].normal has {} entries, expected dim = {}",
                            f.normal.len(),
                            p.dim
                        ));
                    }
                    if f.label == 0 {
                        return schema(format!("facets[{i}].label must be positive"));
                    }
                }
            }
            Self::StackyFan(f) => {
                if f.dim == 0 {
                    return schema("dim must be at least 1".into());
                }
                if f.rays.is_empty() {
                    return schema("a fan needs at least one ray".into());
                }
                for (i, ray) in f.rays.iter().enumerate() {
                    if ray.len() != f.dim {
                        return schema(format!(
                            "rays[{i}] has {} entries, expected dim = {}",
                            ray.len(),
                            f.dim
                        ));
                    }
                }
                if f.labels.len() != f.rays.len() {
                    return schema(format!(
                        "{} labels for {} rays",
                        f.labels.len(),
                        f.rays.len()
                    ));
                }
                if let Some(i) = f.labels.iter().position(|&n| n == 0) {
                    return schema(format!("labels[{i}] must be positive"));
                }
                for (c, cone) in f.max_cones.iter().enumerate() {
                    if cone.is_empty() {
                        return schema(format!("max_cones[{c}] is empty"));
                    }
                    for &idx in cone {
                        if idx == 0 || idx > f.rays.len() {
                            return schema(format!(
                                "max_cones[{c}] references ray {idx}, valid range is 1..={}",
                                f.rays.len()
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the core polytope; only structural requirements are enforced
    /// here, geometric validation is a separate reported stage.
    pub fn to_polytope(&self) -> Option<LabelledPolytope> {
        let Self::Polytope(p) = self else {
            return None;
        };
        let facets = p
            .facets
            .iter()
            .map(|f| Facet {
                halfspace: HalfSpace::new(
                    f.normal.iter().map(|v| v.0.clone()).collect(),
                    f.eta.0.clone(),
                ),
                label: f.label,
            })
            .collect();
        Some(LabelledPolytope::new(p.dim, facets))
    }

    /// Builds the combinatorial fan plus its labels (cone indices shifted to
    /// zero-based).
    pub fn to_fan_parts(&self) -> Option<(toristack_core::fan::Fan, Vec<u32>)> {
        let Self::StackyFan(f) = self else {
            return None;
        };
        let rays = f
            .rays
            .iter()
            .map(|ray| ray.iter().map(|v| v.0.clone()).collect())
            .collect();
        let cones = f
            .max_cones
            .iter()
            .map(|cone| cone.iter().map(|&i| i - 1).collect())
            .collect();
        Some((
            toristack_core::fan::Fan::new(f.dim, rays, cones),
            f.labels.clone(),
        ))
    }
}

/// Parses an input document, distinguishing syntax errors (with position),
/// exactness violations and schema mismatches.
pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scan_for_floats(&value, "$")?;
    let doc: InputDocument = serde_json::from_str(text).map_err(classify_data_error)?;
    doc.check_shape()?;
    Ok(doc)
}

fn classify_data_error(e: serde_json::Error) -> InputError {
    let message = e.to_string();
    if message.contains(EXACTNESS_MARKER) {
        InputError::Exactness {
            detail: message.replace(EXACTNESS_MARKER, "").trim().to_string(),
        }
    } else {
        InputError::Schema { detail: message }
    }
}

fn scan_for_floats(value: &serde_json::Value, path: &str) -> Result<(), InputError> {
    match value {
        serde_json::Value::Number(n) => {
            let text = n.to_string();
            if looks_like_float(&text) {
                return Err(InputError::Exactness {
                    detail: format!("float literal {text} at {path}"),
                });
            }
            Ok(())
        }
        serde_json::Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                scan_for_floats(item, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        serde_json::Value::Object(map) => {
            for (key, item) in map {
                scan_for_floats(item, &format!("{path}.{key}"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
