//! Featured transition systems and their JSON documents.
//!
//! The document is the game document plus an `actions` list and an `action`
//! field per transition; weights are optional and exact: an integer, a
//! decimal, `{"num": 9, "den": 10}`, or `{"nominal": 1, "tolerance": 0.1}`
//! for weights known only up to a relative tolerance.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::logic::{Denotation, FeatureExpr, FeatureSet, Product, ProductSet};

/// A labelled transition system with feature guards and optional exact
/// rational weights.
#[derive(Clone, Debug)]
pub struct Fts {
    products: ProductSet,
    states: Vec<String>,
    initial: usize,
    actions: Vec<String>,
    transitions: Vec<FtsTransition>,
    guard_denots: Vec<Denotation>,
}

#[derive(Clone, Debug)]
pub struct FtsTransition {
    pub source: usize,
    pub action: usize,
    pub weight: Option<Rational64>,
    pub target: usize,
    pub guard: FeatureExpr,
}

impl Fts {
    pub fn new(
        products: ProductSet,
        states: Vec<String>,
        initial: usize,
        actions: Vec<String>,
        transitions: Vec<FtsTransition>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::validation("a transition system needs at least one state"));
        }
        if initial >= states.len() {
            return Err(Error::validation("initial state out of range"));
        }
        let weighted = transitions.first().map_or(false, |t| t.weight.is_some());
        for (i, t) in transitions.iter().enumerate() {
            if t.source >= states.len() || t.target >= states.len() {
                return Err(Error::validation(format!("transition {i} has a dangling endpoint")));
            }
            if t.action >= actions.len() {
                return Err(Error::validation(format!("transition {i} has an unknown action")));
            }
            if t.weight.is_some() != weighted {
                return Err(Error::validation(
                    "either all transitions carry weights or none do",
                ));
            }
        }
        let guard_denots = transitions
            .iter()
            .map(|t| products.denotation(&t.guard))
            .collect::<Result<Vec<_>>>()?;
        Ok(Fts { products, states, initial, actions, transitions, guard_denots })
    }

    pub fn products(&self) -> &ProductSet {
        &self.products
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn transitions(&self) -> &[FtsTransition] {
        &self.transitions
    }

    pub fn guard_denotation(&self, transition: usize) -> &Denotation {
        &self.guard_denots[transition]
    }

    pub fn is_weighted(&self) -> bool {
        self.transitions.first().map_or(false, |t| t.weight.is_some())
    }

    /// Transitions leaving `state`, with their indices.
    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = (usize, &FtsTransition)> {
        self.transitions
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.source == state)
    }

    /// Transitions enabled for the product with the given index.
    pub fn outgoing_enabled(
        &self,
        state: usize,
        product_index: usize,
    ) -> impl Iterator<Item = (usize, &FtsTransition)> {
        self.outgoing(state)
            .filter(move |(i, _)| self.guard_denots[*i][product_index])
    }
}

/// An FTS whose weights are known only up to a relative tolerance.
#[derive(Clone, Debug)]
pub struct ToleranceFts {
    pub fts: Fts,
    /// Per transition, the pair `(nominal, tolerance)` with `tolerance >= 0`.
    pub tolerances: Vec<(Rational64, Rational64)>,
}

/// A parsed FTS document: plain (weighted or not) or tolerance-weighted.
#[derive(Clone, Debug)]
pub enum FtsVariant {
    Plain(Fts),
    Tolerance(ToleranceFts),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FtsDocument {
    features: Vec<String>,
    products: ProductsField,
    actions: Vec<String>,
    initial: String,
    states: Vec<FtsStateRecord>,
    transitions: Vec<FtsTransitionRecord>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProductsField {
    All(String),
    Explicit(Vec<Vec<String>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FtsStateRecord {
    id: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FtsTransitionRecord {
    from: String,
    action: String,
    to: String,
    guard: String,
    #[serde(default)]
    weight: Option<serde_json::Value>,
}

/// Parses an FTS document.
pub fn parse_fts(text: &str) -> Result<FtsVariant> {
    let doc: FtsDocument =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("FTS document: {e}")))?;
    let features = FeatureSet::new(doc.features)?;
    let products = match &doc.products {
        ProductsField::All(marker) if marker == "all" => ProductSet::all(features.clone())?,
        ProductsField::All(marker) => {
            return Err(Error::parse(format!("expected \"all\", got \"{marker}\"")))
        }
        ProductsField::Explicit(lists) => {
            let products = lists
                .iter()
                .map(|names| Product::from_names(&features, names))
                .collect::<Result<Vec<_>>>()?;
            ProductSet::new(features.clone(), products)?
        }
    };

    let mut states = Vec::new();
    for record in &doc.states {
        if states.contains(&record.id) {
            return Err(Error::parse(format!("duplicate state id `{}`", record.id)));
        }
        states.push(record.id.clone());
    }
    let state_index = |id: &str| -> Result<usize> {
        states
            .iter()
            .position(|s| s == id)
            .ok_or_else(|| Error::parse(format!("transition references undeclared state `{id}`")))
    };
    let action_index = |name: &str| -> Result<usize> {
        doc.actions
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::parse(format!("transition references undeclared action `{name}`")))
    };
    let initial = state_index(&doc.initial)
        .map_err(|_| Error::parse(format!("initial state `{}` is not declared", doc.initial)))?;

    let mut transitions = Vec::new();
    let mut tolerances = Vec::new();
    for (i, record) in doc.transitions.iter().enumerate() {
        let guard = FeatureExpr::parse(&record.guard, &features)
            .map_err(|e| Error::parse(format!("transition {i}: {e}")))?;
        let weight = match &record.weight {
            None => None,
            Some(raw) => Some(parse_weight(raw).map_err(|e| Error::parse(format!("transition {i}: {e}")))?),
        };
        let (weight, tolerance) = match weight {
            None => (None, None),
            Some(WeightField::Exact(w)) => (Some(w), None),
            Some(WeightField::Tolerance { nominal, tolerance }) => {
                (Some(nominal), Some((nominal, tolerance)))
            }
        };
        if let Some(t) = tolerance {
            tolerances.push(t);
        }
        transitions.push(FtsTransition {
            source: state_index(&record.from)?,
            action: action_index(&record.action)?,
            weight,
            target: state_index(&record.to)?,
            guard,
        });
    }

    if !tolerances.is_empty() && tolerances.len() != transitions.len() {
        return Err(Error::parse(
            "either all weights carry tolerances or none do",
        ));
    }

    let fts = Fts::new(products, states, initial, doc.actions, transitions)?;
    if tolerances.is_empty() {
        Ok(FtsVariant::Plain(fts))
    } else {
        Ok(FtsVariant::Tolerance(ToleranceFts { fts, tolerances }))
    }
}

enum WeightField {
    Exact(Rational64),
    Tolerance { nominal: Rational64, tolerance: Rational64 },
}

fn parse_weight(raw: &serde_json::Value) -> Result<WeightField> {
    match raw {
        serde_json::Value::Number(n) => Ok(WeightField::Exact(number_to_rational(n)?)),
        serde_json::Value::Object(map) => {
            let known: Vec<&str> = map.keys().map(|k| k.as_str()).collect();
            if known.iter().all(|k| *k == "num" || *k == "den") && map.contains_key("num") {
                let num = field_i64(map, "num")?;
                let den = field_i64(map, "den")?;
                if den == 0 {
                    return Err(Error::parse("weight denominator must not be zero"));
                }
                Ok(WeightField::Exact(Rational64::new(num, den)))
            } else if known.iter().all(|k| *k == "nominal" || *k == "tolerance")
                && map.contains_key("nominal")
                && map.contains_key("tolerance")
            {
                let nominal = value_to_rational(&map["nominal"])?;
                let tolerance = value_to_rational(&map["tolerance"])?;
                if tolerance.is_negative() {
                    return Err(Error::parse("tolerance must be non-negative"));
                }
                Ok(WeightField::Tolerance { nominal, tolerance })
            } else {
                Err(Error::parse(format!("unrecognized weight object {raw}")))
            }
        }
        _ => Err(Error::parse(format!("unrecognized weight {raw}"))),
    }
}

fn field_i64(map: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<i64> {
    map.get(key)
        .and_then(|v| v.as_i64())
        .ok_or_else(|| Error::parse(format!("weight field `{key}` must be an integer")))
}

fn value_to_rational(raw: &serde_json::Value) -> Result<Rational64> {
    match raw {
        serde_json::Value::Number(n) => number_to_rational(n),
        serde_json::Value::Object(_) => match parse_weight(raw)? {
            WeightField::Exact(w) => Ok(w),
            WeightField::Tolerance { .. } => Err(Error::parse("nested tolerance weights")),
        },
        _ => Err(Error::parse(format!("expected a number, got {raw}"))),
    }
}

/// Converts a JSON number to an exact rational via its shortest decimal
/// rendering, so `0.1` means one tenth.
pub fn number_to_rational(n: &serde_json::Number) -> Result<Rational64> {
    decimal_to_rational(&n.to_string())
}

fn decimal_to_rational(text: &str) -> Result<Rational64> {
    let bad = || Error::parse(format!("cannot read `{text}` as an exact number"));
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        None => (text, 0i32),
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        None => (mantissa, ""),
        Some((i, f)) => (i, f),
    };
    let digits = format!("{int_part}{frac_part}");
    let value: i64 = digits.parse().map_err(|_| bad())?;
    let scale = frac_part.len() as i32 - exponent;
    if scale.unsigned_abs() > 15 {
        return Err(bad());
    }
    let power = 10i64.pow(scale.unsigned_abs());
    Ok(if scale > 0 {
        Rational64::new(value, power)
    } else {
        Rational64::new(value.checked_mul(power).ok_or_else(bad)?, 1)
    })
}

/// Approximates a rational as a float, for handing weights to the solvers.
pub fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `true` iff `r` is zero.
pub fn rational_is_zero(r: Rational64) -> bool {
    r.is_zero()
}

/// The rational one.
pub fn rational_one() -> Rational64 {
    Rational64::one()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(decimal_to_rational("0.1").unwrap(), Rational64::new(1, 10));
        assert_eq!(decimal_to_rational("2").unwrap(), Rational64::new(2, 1));
        assert_eq!(decimal_to_rational("-1.25").unwrap(), Rational64::new(-5, 4));
        assert_eq!(decimal_to_rational("1e-2").unwrap(), Rational64::new(1, 100));
        assert_eq!(decimal_to_rational("2.5e2").unwrap(), Rational64::new(250, 1));
        assert!(decimal_to_rational("abc").is_err());
    }

    pub(crate) const COFFEE_FTS: &str = r#"{
        "features": ["euro", "dollar"],
        "products": [["euro"], ["dollar"], ["euro", "dollar"]],
        "actions": ["ins", "std", "xxl"],
        "initial": "s0",
        "states": [{"id": "s0"}, {"id": "s1"}, {"id": "s2"}],
        "transitions": [
            {"from": "s0", "action": "ins", "to": "s1", "guard": "true"},
            {"from": "s1", "action": "ins", "to": "s2", "guard": "dollar"},
            {"from": "s1", "action": "std", "to": "s0", "guard": "euro"},
            {"from": "s2", "action": "xxl", "to": "s0", "guard": "true"}
        ]
    }"#;

    pub(crate) const COFFEE_TOLERANCE_FTS: &str = r#"{
        "features": ["euro", "dollar"],
        "products": [["euro"], ["dollar"], ["euro", "dollar"]],
        "actions": ["ins", "std", "xxl"],
        "initial": "s0",
        "states": [{"id": "s0"}, {"id": "s1"}, {"id": "s2"}],
        "transitions": [
            {"from": "s0", "action": "ins", "to": "s1", "guard": "true",
             "weight": {"nominal": 0, "tolerance": 0}},
            {"from": "s1", "action": "ins", "to": "s2", "guard": "dollar",
             "weight": {"nominal": 0, "tolerance": 0}},
            {"from": "s1", "action": "std", "to": "s0", "guard": "euro",
             "weight": {"nominal": 1, "tolerance": 0.1}},
            {"from": "s2", "action": "xxl", "to": "s0", "guard": "true",
             "weight": {"nominal": 2, "tolerance": 0.1}}
        ]
    }"#;

    #[test]
    fn parses_the_coffee_machine() {
        let FtsVariant::Plain(fts) = parse_fts(COFFEE_FTS).unwrap() else {
            panic!("expected a plain FTS");
        };
        assert_eq!(fts.states().len(), 3);
        assert_eq!(fts.actions(), ["ins", "std", "xxl"]);
        assert!(!fts.is_weighted());
        assert_eq!(fts.products().len(), 3);
    }

    #[test]
    fn parses_tolerance_weights_exactly() {
        let FtsVariant::Tolerance(tfts) = parse_fts(COFFEE_TOLERANCE_FTS).unwrap() else {
            panic!("expected a tolerance FTS");
        };
        assert_eq!(tfts.tolerances[2], (Rational64::new(1, 1), Rational64::new(1, 10)));
        assert_eq!(tfts.tolerances[3], (Rational64::new(2, 1), Rational64::new(1, 10)));
    }

    #[test]
    fn rejects_mixed_weighting() {
        let text = r#"{
            "features": [],
            "products": "all",
            "actions": ["a"],
            "initial": "s0",
            "states": [{"id": "s0"}],
            "transitions": [
                {"from": "s0", "action": "a", "to": "s0", "guard": "true", "weight": 1},
                {"from": "s0", "action": "a", "to": "s0", "guard": "true"}
            ]
        }"#;
        assert!(parse_fts(text).is_err());
    }

    #[test]
    fn rejects_unknown_action() {
        let text = r#"{
            "features": [],
            "products": "all",
            "actions": ["a"],
            "initial": "s0",
            "states": [{"id": "s0"}],
            "transitions": [{"from": "s0", "action": "b", "to": "s0", "guard": "true"}]
        }"#;
        let err = parse_fts(text).unwrap_err();
        assert!(err.to_string().contains('b'));
    }
}
