//! The JSON game document format.
//!
//! ```json
//! {
//!   "features": ["euro", "dollar"],
//!   "products": "all",
//!   "kind": "energy",
//!   "initial": "s0",
//!   "states": [{"id": "s0", "owner": 1}],
//!   "transitions": [{"from": "s0", "to": "s0", "guard": "true", "weight": 3}]
//! }
//! ```
//!
//! `products` is either `"all"` or an explicit list of feature-name lists.
//! `priority` is required on every state iff the kind is `parity` and
//! rejected otherwise; `weight` is required on every transition iff the kind
//! is weighted and rejected otherwise. Unknown fields are rejected.

use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    FeaturedGame, FeaturedTransition, GameKind, GameMeta, Player, StateInfo,
};
use crate::logic::{FeatureExpr, FeatureSet, Product, ProductSet};

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GameDocument {
    features: Vec<String>,
    products: ProductsField,
    kind: String,
    initial: String,
    states: Vec<StateRecord>,
    transitions: Vec<TransitionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<MetaRecord>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum ProductsField {
    All(AllMarker),
    Explicit(Vec<Vec<String>>),
}

struct AllMarker;

impl Serialize for AllMarker {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str("all")
    }
}

impl<'de> Deserialize<'de> for AllMarker {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        if text == "all" {
            Ok(AllMarker)
        } else {
            Err(D::Error::custom(format!("expected \"all\", got \"{text}\"")))
        }
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct StateRecord {
    id: String,
    owner: u8,
    #[serde(default, skip_serializing_if = "is_false")]
    accepting: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    priority: Option<u32>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TransitionRecord {
    from: String,
    to: String,
    guard: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
struct MetaRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    discount: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

fn is_false(b: &bool) -> bool {
    !b
}

/// Parses a game document.
pub fn parse_game(text: &str) -> Result<FeaturedGame> {
    let doc: GameDocument =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("game document: {e}")))?;
    game_from_document(doc)
}

fn game_from_document(doc: GameDocument) -> Result<FeaturedGame> {
    let kind = GameKind::from_str(&doc.kind)?;
    let features = FeatureSet::new(doc.features)?;
    let products = match doc.products {
        ProductsField::All(_) => ProductSet::all(features.clone())?,
        ProductsField::Explicit(lists) => {
            let products = lists
                .iter()
                .map(|names| Product::from_names(&features, names))
                .collect::<Result<Vec<_>>>()?;
            ProductSet::new(features.clone(), products)?
        }
    };

    let mut states = Vec::with_capacity(doc.states.len());
    for record in &doc.states {
        if states.iter().any(|s: &StateInfo| s.id == record.id) {
            return Err(Error::parse(format!("duplicate state id `{}`", record.id)));
        }
        match (kind, record.priority) {
            (GameKind::Parity, None) => {
                return Err(Error::parse(format!(
                    "state `{}` is missing `priority`, required for parity games",
                    record.id
                )))
            }
            (GameKind::Parity, Some(_)) => {}
            (_, Some(_)) => {
                return Err(Error::parse(format!(
                    "state `{}` carries `priority`, which is only allowed for parity games",
                    record.id
                )))
            }
            (_, None) => {}
        }
        states.push(StateInfo {
            id: record.id.clone(),
            owner: Player::from_number(record.owner)?,
            accepting: record.accepting,
            priority: record.priority,
        });
    }

    let state_index = |id: &str| -> Result<usize> {
        states
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| Error::parse(format!("transition references undeclared state `{id}`")))
    };

    let mut transitions = Vec::with_capacity(doc.transitions.len());
    for (i, record) in doc.transitions.iter().enumerate() {
        if kind.is_weighted() && record.weight.is_none() {
            return Err(Error::parse(format!(
                "transition {i} is missing `weight`, required for {kind} games"
            )));
        }
        if !kind.is_weighted() && record.weight.is_some() {
            return Err(Error::parse(format!(
                "transition {i} carries `weight`, not allowed for {kind} games"
            )));
        }
        let guard = FeatureExpr::parse(&record.guard, &features)
            .map_err(|e| Error::parse(format!("transition {i}: {e}")))?;
        transitions.push(FeaturedTransition {
            source: state_index(&record.from)?,
            target: state_index(&record.to)?,
            guard,
            weight: record.weight,
        });
    }

    let initial = state_index(&doc.initial)
        .map_err(|_| Error::parse(format!("initial state `{}` is not declared", doc.initial)))?;
    let meta = match doc.meta {
        None => GameMeta::default(),
        Some(m) => GameMeta { discount: m.discount, notes: m.notes },
    };
    FeaturedGame::new(kind, products, states, initial, transitions, meta)
}

/// Emits a game document; `parse_game` recovers a structurally equal game.
pub fn emit_game(game: &FeaturedGame) -> String {
    let features = game.products().features();
    let doc = GameDocument {
        features: features.names().to_vec(),
        products: ProductsField::Explicit(
            game.products()
                .products()
                .iter()
                .map(|p| p.member_names(features).iter().map(|s| s.to_string()).collect())
                .collect(),
        ),
        kind: game.kind().as_str().to_string(),
        initial: game.states()[game.initial()].id.clone(),
        states: game
            .states()
            .iter()
            .map(|s| StateRecord {
                id: s.id.clone(),
                owner: s.owner.number(),
                accepting: s.accepting,
                priority: s.priority,
            })
            .collect(),
        transitions: game
            .transitions()
            .iter()
            .map(|t| TransitionRecord {
                from: game.states()[t.source].id.clone(),
                to: game.states()[t.target].id.clone(),
                guard: t.guard.to_string(),
                weight: t.weight,
            })
            .collect(),
        meta: if game.meta().is_empty() {
            None
        } else {
            Some(MetaRecord { discount: game.meta().discount, notes: game.meta().notes.clone() })
        },
    };
    serde_json::to_string_pretty(&doc).expect("game documents serialize")
}

/// Structural equality of two games, for round-trip checks.
pub fn games_structurally_equal(a: &FeaturedGame, b: &FeaturedGame) -> bool {
    a.kind() == b.kind()
        && a.products() == b.products()
        && a.initial() == b.initial()
        && a.states() == b.states()
        && a.transitions().len() == b.transitions().len()
        && a.transitions().iter().zip(b.transitions()).all(|(x, y)| {
            x.source == y.source
                && x.target == y.target
                && x.weight == y.weight
                && a.products()
                    .equivalent(&x.guard, &y.guard)
                    .unwrap_or(false)
        })
        && a.meta() == b.meta()
}
