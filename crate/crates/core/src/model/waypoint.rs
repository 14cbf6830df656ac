use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use super::ModelError;

/// A statement, or a finite tuple of statements, that a route passes through.
///
/// Identity is the normalized statement tuple: surrounding whitespace is
/// trimmed and internal whitespace runs collapse to a single space. The `id`
/// and `display` text do not take part in equality.
#[derive(Clone, Debug, Serialize)]
pub struct Waypoint {
    id: String,
    statements: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    display: Option<String>,
}

/// Normalized statement tuple used as the graph vertex key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WaypointKey(Vec<String>);

impl WaypointKey {
    pub fn components(&self) -> &[String] {
        &self.0
    }
}

pub fn normalize_statement(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl Waypoint {
    pub fn new(id: impl Into<String>, statements: Vec<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if statements.is_empty() {
            return Err(ModelError::EmptyWaypoint(id));
        }
        Ok(Self {
            id,
            statements,
            display: None,
        })
    }

    /// Single-statement waypoint.
    pub fn single(id: impl Into<String>, statement: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            statements: vec![statement.into()],
            display: None,
        }
    }

    pub fn with_display(mut self, display: impl Into<String>) -> Self {
        self.display = Some(display.into());
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn statements(&self) -> &[String] {
        &self.statements
    }

    pub fn display(&self) -> Option<&str> {
        self.display.as_deref()
    }

    pub fn is_tuple(&self) -> bool {
        self.statements.len() > 1
    }

    pub fn key(&self) -> WaypointKey {
        WaypointKey(
            self.statements
                .iter()
                .map(|s| normalize_statement(s))
                .collect(),
        )
    }

    /// Human-readable label: the display text if set, else the statements.
    pub fn label(&self) -> String {
        match &self.display {
            Some(d) => d.clone(),
            None => self.statement_text(),
        }
    }

    /// Statements rendered as `s` or `(s1, s2, ...)`.
    pub fn statement_text(&self) -> String {
        if self.statements.len() == 1 {
            self.statements[0].clone()
        } else {
            format!("({})", self.statements.join(", "))
        }
    }

    /// Same identifier, statements and display text.
    pub fn same_declaration(&self, other: &Waypoint) -> bool {
        self.id == other.id && self.statements == other.statements && self.display == other.display
    }

    pub(crate) fn with_statements(&self, statements: Vec<String>) -> Self {
        Self {
            id: self.id.clone(),
            statements,
            display: None,
        }
    }
}

impl PartialEq for Waypoint {
    fn eq(&self, other: &Self) -> bool {
        self.statements.len() == other.statements.len()
            && self
                .statements
                .iter()
                .zip(&other.statements)
                .all(|(a, b)| normalize_statement(a) == normalize_statement(b))
    }
}

impl Eq for Waypoint {}

impl Hash for Waypoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Display for Waypoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.statement_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_ignores_whitespace_runs_and_ids() {
        let a = Waypoint::single("A", "  a <   b ");
        let b = Waypoint::single("B", "a < b");
        assert_eq!(a, b);
        assert_eq!(a.key(), b.key());
    }

    #[test]
    fn equality_is_case_sensitive() {
        assert_ne!(
            Waypoint::single("A", "G is abelian"),
            Waypoint::single("A", "g is abelian")
        );
    }

    #[test]
    fn tuple_is_distinct_from_its_components() {
        let pair = Waypoint::new("W", vec!["B".into(), "B'".into()]).unwrap();
        assert_ne!(pair, Waypoint::single("B", "B"));
        assert_ne!(pair, Waypoint::single("B2", "B'"));
        assert!(pair.is_tuple());
        assert_eq!(pair.statement_text(), "(B, B')");
    }

    #[test]
    fn empty_tuple_rejected() {
        assert!(matches!(
            Waypoint::new("X", vec![]),
            Err(ModelError::EmptyWaypoint(_))
        ));
    }
}
