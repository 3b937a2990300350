use std::collections::HashMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::syntax::{FunId, PredId};

/// Bijection between surface names and numeric identifiers, one per namespace.
/// Identifiers are dense from 0 in order of first occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameMap {
    functions: Vec<String>,
    predicates: Vec<String>,
    fun_ids: HashMap<String, FunId>,
    pred_ids: HashMap<String, PredId>,
}

fn intern(names: &mut Vec<String>, ids: &mut HashMap<String, usize>, name: &str) -> usize {
    if let Some(&i) = ids.get(name) {
        return i;
    }
    let i = names.len();
    names.push(name.to_string());
    ids.insert(name.to_string(), i);
    i
}

impl NameMap {
    pub fn new() -> Self {
        NameMap::default()
    }

    /// Builds a map from names listed in identifier order. Returns `None` if a
    /// name repeats within a namespace.
    pub fn from_names<S: AsRef<str>>(functions: &[S], predicates: &[S]) -> Option<Self> {
        let mut m = NameMap::new();
        for f in functions {
            if m.fun_id(f.as_ref()).is_some() {
                return None;
            }
            m.intern_fun(f.as_ref());
        }
        for p in predicates {
            if m.pred_id(p.as_ref()).is_some() {
                return None;
            }
            m.intern_pred(p.as_ref());
        }
        Some(m)
    }

    pub fn intern_fun(&mut self, name: &str) -> FunId {
        intern(&mut self.functions, &mut self.fun_ids, name)
    }

    pub fn intern_pred(&mut self, name: &str) -> PredId {
        intern(&mut self.predicates, &mut self.pred_ids, name)
    }

    pub fn fun_id(&self, name: &str) -> Option<FunId> {
        self.fun_ids.get(name).copied()
    }

    pub fn pred_id(&self, name: &str) -> Option<PredId> {
        self.pred_ids.get(name).copied()
    }

    pub fn fun_name(&self, id: FunId) -> Option<&str> {
        self.functions.get(id).map(String::as_str)
    }

    pub fn pred_name(&self, id: PredId) -> Option<&str> {
        self.predicates.get(id).map(String::as_str)
    }

    /// `(name, id)` pairs in identifier order.
    pub fn functions(&self) -> impl Iterator<Item = (&str, FunId)> {
        self.functions
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, PredId)> {
        self.predicates
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
    }

    /// True if `name` is used in either namespace.
    pub fn uses(&self, name: &str) -> bool {
        self.fun_ids.contains_key(name) || self.pred_ids.contains_key(name)
    }

    /// `name = number` lines grouped by kind.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.predicates.is_empty() {
            out.push_str("Predicates:\n");
            for (n, i) in self.predicates() {
                out.push_str(&format!("  {n} = {i}\n"));
            }
        }
        if !self.functions.is_empty() {
            out.push_str("Functions:\n");
            for (n, i) in self.functions() {
                out.push_str(&format!("  {n} = {i}\n"));
            }
        }
        out
    }
}

struct Ordered<'a>(&'a [String]);

impl Serialize for Ordered<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (i, n) in self.0.iter().enumerate() {
            m.serialize_entry(n, &i)?;
        }
        m.end()
    }
}

/// Serialized as `{"functions": {name: id, ..}, "predicates": {..}}` with
/// entries in identifier order.
impl Serialize for NameMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("functions", &Ordered(&self.functions))?;
        m.serialize_entry("predicates", &Ordered(&self.predicates))?;
        m.end()
    }
}
