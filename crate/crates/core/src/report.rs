//! The serializable outcome of a single bound or identity check.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One bound or identity comparison.
///
/// `ok` is `Some(_)` only for constant-free inequalities that are asserted;
/// report-only measurements leave it `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub experiment: String,
    pub instance: Map<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    pub hypothesis_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ok: Option<bool>,
    /// Absolute slack allowed in `lhs ≤ rhs` (or in an agreement check).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub extras: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(experiment: &str) -> Self {
        BoundReport {
            experiment: experiment.to_owned(),
            instance: Map::new(),
            lhs: 0.0,
            rhs: 0.0,
            hypothesis_ok: true,
            ok: None,
            tolerance: None,
            extras: Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_instance(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.instance.insert(key.to_owned(), value.into());
        self
    }

    pub fn set_extra(&mut self, key: &str, value: impl Into<Value>) {
        self.extras.insert(key.to_owned(), value.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// `true` unless an asserted inequality failed.
    pub fn passed(&self) -> bool {
        self.ok != Some(false)
    }

    /// Every numeric value in the record is finite. NaN or infinity would
    /// serialize as `null` and break the schema.
    pub fn is_finite(&self) -> bool {
        fn finite(v: &Value) -> bool {
            match v {
                Value::Number(n) => n.as_f64().is_some_and(f64::is_finite),
                Value::Array(a) => a.iter().all(finite),
                Value::Object(o) => o.values().all(finite),
                _ => true,
            }
        }
        self.lhs.is_finite()
            && self.rhs.is_finite()
            && self.tolerance.is_none_or(f64::is_finite)
            && self.instance.values().all(finite)
            && self.extras.values().all(finite)
    }
}
