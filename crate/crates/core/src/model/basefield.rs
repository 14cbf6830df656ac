use std::collections::BTreeMap;
use std::sync::Arc;

use super::Trail;

/// The trails an audience treats as atomic single-step justifications.
///
/// A field built with [`BaseField::extending`] holds the union of its
/// parent's trails and its own, so the parent is always a subfield.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseField {
    id: String,
    extends: Option<String>,
    trails: BTreeMap<String, Arc<Trail>>,
}

impl BaseField {
    pub fn new(id: impl Into<String>, trails: impl IntoIterator<Item = Arc<Trail>>) -> Self {
        Self {
            id: id.into(),
            extends: None,
            trails: trails
                .into_iter()
                .map(|t| (t.id().to_string(), t))
                .collect(),
        }
    }

    pub fn extending(
        id: impl Into<String>,
        parent: &BaseField,
        trails: impl IntoIterator<Item = Arc<Trail>>,
    ) -> Self {
        let mut all = parent.trails.clone();
        all.extend(trails.into_iter().map(|t| (t.id().to_string(), t)));
        Self {
            id: id.into(),
            extends: Some(parent.id.clone()),
            trails: all,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn extends(&self) -> Option<&str> {
        self.extends.as_deref()
    }

    pub fn contains(&self, trail_id: &str) -> bool {
        self.trails.contains_key(trail_id)
    }

    pub fn trail(&self, trail_id: &str) -> Option<&Arc<Trail>> {
        self.trails.get(trail_id)
    }

    pub fn trails(&self) -> impl Iterator<Item = &Arc<Trail>> {
        self.trails.values()
    }

    pub fn trail_ids(&self) -> impl Iterator<Item = &str> {
        self.trails.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.trails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trails.is_empty()
    }

    /// `self ⊆ other` on trail sets.
    pub fn is_subfield_of(&self, other: &BaseField) -> bool {
        self.trails.keys().all(|k| other.trails.contains_key(k))
    }
}
