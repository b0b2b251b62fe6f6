//! Value domains of the different game kinds.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// A non-negative accumulated weight, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(u64),
    Infinite,
}

impl Cost {
    pub fn is_finite(&self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    /// Adds a transition weight; infinity absorbs.
    pub fn add(self, weight: u64) -> Cost {
        match self {
            Cost::Finite(v) => Cost::Finite(v + weight),
            Cost::Infinite => Cost::Infinite,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => write!(f, "inf"),
        }
    }
}

/// An element of the bounded credit domain `{0, ..., M, top}` of energy
/// games. The bound `M` is a property of the game, not of the value, and is
/// passed to [`ominus`](EnergyValue::ominus).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EnergyValue {
    Finite(u64),
    Top,
}

impl EnergyValue {
    pub fn is_top(&self) -> bool {
        matches!(self, EnergyValue::Top)
    }

    /// `x (-) w = max(0, x - w)` when `x` is finite and `x - w <= bound`,
    /// and top otherwise.
    pub fn ominus(self, weight: i64, bound: u64) -> EnergyValue {
        match self {
            EnergyValue::Top => EnergyValue::Top,
            EnergyValue::Finite(v) => {
                let diff = v as i128 - weight as i128;
                if diff > bound as i128 {
                    EnergyValue::Top
                } else {
                    EnergyValue::Finite(diff.max(0) as u64)
                }
            }
        }
    }
}

impl fmt::Display for EnergyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyValue::Finite(v) => write!(f, "{v}"),
            EnergyValue::Top => write!(f, "top"),
        }
    }
}

/// A small-progress measure: a tuple indexed by priorities `0..=d` whose
/// even components are pinned to zero, or the top element.
///
/// Comparisons are lexicographic; `up_to` variants compare only components
/// `0..=k`. Top is the greatest element in every order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParityMeasure {
    Finite(Vec<u64>),
    Top,
}

impl ParityMeasure {
    /// The all-zero measure for maximal priority `d`.
    pub fn zero(max_priority: u32) -> Self {
        ParityMeasure::Finite(vec![0; max_priority as usize + 1])
    }

    pub fn is_top(&self) -> bool {
        matches!(self, ParityMeasure::Top)
    }

    pub fn components(&self) -> Option<&[u64]> {
        match self {
            ParityMeasure::Finite(v) => Some(v),
            ParityMeasure::Top => None,
        }
    }

    /// Lexicographic comparison of components `0..=k`.
    pub fn cmp_up_to(&self, other: &Self, k: u32) -> Ordering {
        match (self, other) {
            (ParityMeasure::Top, ParityMeasure::Top) => Ordering::Equal,
            (ParityMeasure::Top, _) => Ordering::Greater,
            (_, ParityMeasure::Top) => Ordering::Less,
            (ParityMeasure::Finite(a), ParityMeasure::Finite(b)) => {
                let k = k as usize;
                a[..=k].cmp(&b[..=k])
            }
        }
    }
}

impl PartialOrd for ParityMeasure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ParityMeasure {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ParityMeasure::Top, ParityMeasure::Top) => Ordering::Equal,
            (ParityMeasure::Top, _) => Ordering::Greater,
            (_, ParityMeasure::Top) => Ordering::Less,
            (ParityMeasure::Finite(a), ParityMeasure::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ParityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParityMeasure::Top => write!(f, "top"),
            ParityMeasure::Finite(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A solver result value of any game kind, mainly for reports and solution
/// files. Top renders as `"top"`, infinity as `"inf"`, parity measures as
/// integer arrays.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Bool(bool),
    Cost(Cost),
    Real(f64),
    Energy(EnergyValue),
    Measure(ParityMeasure),
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Bool(b) => serializer.serialize_bool(*b),
            Value::Cost(Cost::Finite(v)) => serializer.serialize_u64(*v),
            Value::Cost(Cost::Infinite) => serializer.serialize_str("inf"),
            Value::Real(x) => serializer.serialize_f64(*x),
            Value::Energy(EnergyValue::Finite(v)) => serializer.serialize_u64(*v),
            Value::Energy(EnergyValue::Top) => serializer.serialize_str("top"),
            Value::Measure(ParityMeasure::Top) => serializer.serialize_str("top"),
            Value::Measure(ParityMeasure::Finite(v)) => {
                let mut seq = serializer.serialize_seq(Some(v.len()))?;
                for x in v {
                    seq.serialize_element(x)?;
                }
                seq.end()
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Cost(c) => write!(f, "{c}"),
            Value::Real(x) => write!(f, "{}", crate::value::display_real(*x)),
            Value::Energy(e) => write!(f, "{e}"),
            Value::Measure(m) => write!(f, "{m}"),
        }
    }
}

/// Renders a real with four significant decimals, for tables.
pub fn display_real(x: f64) -> String {
    format!("{x:.4}")
}
