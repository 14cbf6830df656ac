//! The `.rwy` routeway markup: parser, linter and canonical serializer.
//!
//! ```text
//! version 1
//! trail P1: "Sylow theorems"
//! basefield B1 { use P1 }
//! waypoint A: "|G|=p^2"
//! waypoint B: "G has a normal Sylow subgroup"
//! routeway gamma in B1 from A to B { A =[P1]=> B }
//! ```

mod lexer;
mod lint;
mod parser;
mod serialize;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::instantiate::{InstantiateError, ParameterizedRouteway};
use crate::model::{
    build_graph, Atlas, BaseField, GraphBuild, ModelError, Roadmap, RouteUnit, Routeway, Trail,
    Waypoint,
};

pub use lint::lint;
pub use parser::parse;
pub use serialize::serialize;

/// A 1-based line/column range; `end_col` is exclusive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl Span {
    pub(crate) fn new(start: (usize, usize), end: (usize, usize)) -> Self {
        Self {
            line: start.0,
            col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    pub(crate) fn to(self, other: Span) -> Span {
        Span {
            end_line: other.end_line,
            end_col: other.end_col,
            ..self
        }
    }

    /// Placeholder for diagnostics about documents that were not parsed.
    pub(crate) fn origin() -> Span {
        Span::new((1, 1), (1, 1))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn error(code: &str, span: Span, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            code: code.to_string(),
            span,
            message: message.into(),
        }
    }

    pub(crate) fn warning(code: &str, span: Span, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(code, span, message)
        }
    }

    pub(crate) fn syntax(span: Span, message: impl Into<String>) -> Self {
        Self::error("syntax-error", span, message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {sev}[{}]: {}",
            self.span.line, self.span.col, self.code, self.message
        )
    }
}

/// A base field as declared: its own trails, not the inherited ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFieldDecl {
    pub id: String,
    pub extends: Option<String>,
    pub trails: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RoutewayDecl {
    pub id: String,
    pub basefield: String,
    pub from: Option<Waypoint>,
    pub to: Option<Waypoint>,
    pub params: Vec<String>,
    /// As written; consecutive units need not chain (that is a lint).
    pub units: Vec<RouteUnit>,
}

impl RoutewayDecl {
    pub fn start(&self) -> &Waypoint {
        self.from
            .as_ref()
            .or_else(|| self.units.first().map(RouteUnit::initial))
            .expect("a routeway declaration has units or a start")
    }

    pub fn end(&self) -> &Waypoint {
        self.to
            .as_ref()
            .or_else(|| self.units.last().map(RouteUnit::terminal))
            .unwrap_or_else(|| self.start())
    }

    /// The chained routeway, checking declared endpoints as well.
    pub fn to_routeway(&self) -> Result<Routeway, ModelError> {
        let r = Routeway::new(self.start().clone(), self.units.clone())?;
        if r.end() != self.end() {
            return Err(ModelError::EndpointMismatch {
                left: r.end().id().to_string(),
                right: self.end().id().to_string(),
            });
        }
        Ok(r)
    }

    fn same(&self, other: &Self) -> bool {
        fn same_opt(a: &Option<Waypoint>, b: &Option<Waypoint>) -> bool {
            match (a, b) {
                (Some(a), Some(b)) => a.same_declaration(b),
                (None, None) => true,
                _ => false,
            }
        }
        self.id == other.id
            && self.basefield == other.basefield
            && same_opt(&self.from, &other.from)
            && same_opt(&self.to, &other.to)
            && self.params == other.params
            && self.units.len() == other.units.len()
            && self.units.iter().zip(&other.units).all(|(u, v)| {
                u == v
                    && u.initial().same_declaration(v.initial())
                    && u.terminal().same_declaration(v.terminal())
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoadmapDecl {
    pub id: String,
    pub from: String,
    pub to: String,
    pub routeways: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasDecl {
    pub id: String,
    pub targets: Vec<String>,
    pub roadmaps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationDecl {
    pub id: String,
    pub basefields: Vec<String>,
}

/// Where things were declared, for diagnostics.
#[derive(Clone, Debug, Default)]
pub(crate) struct SourceMap {
    pub trails: HashMap<String, Span>,
    pub routeways: HashMap<String, Span>,
    pub units: HashMap<(String, usize), Span>,
}

/// A parsed and resolved `.rwy` document.
///
/// Equality ignores source positions.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub trails: Vec<Arc<Trail>>,
    pub basefields: Vec<BaseFieldDecl>,
    pub waypoints: Vec<Waypoint>,
    pub routeways: Vec<RoutewayDecl>,
    pub roadmaps: Vec<RoadmapDecl>,
    pub atlases: Vec<AtlasDecl>,
    pub filtrations: Vec<FiltrationDecl>,
    /// Compass notes keyed by `routeway` or `routeway[unit]` (1-based).
    pub annotations: BTreeMap<String, String>,
    pub(crate) spans: SourceMap,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.trails == other.trails
            && self.basefields == other.basefields
            && self.waypoints.len() == other.waypoints.len()
            && self
                .waypoints
                .iter()
                .zip(&other.waypoints)
                .all(|(a, b)| a.same_declaration(b))
            && self.routeways.len() == other.routeways.len()
            && self
                .routeways
                .iter()
                .zip(&other.routeways)
                .all(|(a, b)| a.same(b))
            && self.roadmaps == other.roadmaps
            && self.atlases == other.atlases
            && self.filtrations == other.filtrations
            && self.annotations == other.annotations
    }
}

/// Failure to assemble a model object from a document.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    #[error("no {kind} named `{id}`")]
    Unknown { kind: &'static str, id: String },
    #[error("routeway `{routeway}`: {source}")]
    Routeway {
        routeway: String,
        source: ModelError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
}

impl LookupError {
    pub fn code(&self) -> &'static str {
        match self {
            LookupError::Unknown { .. } => "unknown-identifier",
            LookupError::Routeway { source, .. } => source.code(),
            LookupError::Model(e) => e.code(),
            LookupError::Instantiate(e) => e.code(),
        }
    }
}

fn unknown(kind: &'static str, id: &str) -> LookupError {
    LookupError::Unknown {
        kind,
        id: id.to_string(),
    }
}

impl Document {
    pub fn trail(&self, id: &str) -> Option<&Arc<Trail>> {
        self.trails.iter().find(|t| t.id() == id)
    }

    pub fn waypoint(&self, id: &str) -> Option<&Waypoint> {
        self.waypoints.iter().find(|w| w.id() == id)
    }

    pub fn routeway_decl(&self, id: &str) -> Option<&RoutewayDecl> {
        self.routeways.iter().find(|r| r.id == id)
    }

    /// The effective base field: its own trails plus everything it extends.
    pub fn basefield(&self, id: &str) -> Option<BaseField> {
        let mut chain = Vec::new();
        let mut seen = HashSet::new();
        let mut next = Some(id);
        while let Some(at) = next {
            if !seen.insert(at) {
                return None;
            }
            let decl = self.basefields.iter().find(|b| b.id == at)?;
            chain.push(decl);
            next = decl.extends.as_deref();
        }
        let mut field: Option<BaseField> = None;
        for decl in chain.into_iter().rev() {
            let own = decl.trails.iter().filter_map(|t| self.trail(t).cloned());
            field = Some(match &field {
                Some(parent) => BaseField::extending(decl.id.clone(), parent, own),
                None => BaseField::new(decl.id.clone(), own),
            });
        }
        field
    }

    /// Every unit of every routeway, in declaration order.
    pub fn units(&self) -> Vec<RouteUnit> {
        self.routeways
            .iter()
            .flat_map(|r| r.units.iter().cloned())
            .collect()
    }

    /// The route graph of a base field over all units in the document.
    pub fn graph(&self, basefield: &str) -> Result<GraphBuild, LookupError> {
        let base = self
            .basefield(basefield)
            .ok_or_else(|| unknown("basefield", basefield))?;
        Ok(build_graph(&self.units(), &base)?)
    }

    pub fn routeway(&self, id: &str) -> Result<Routeway, LookupError> {
        let decl = self
            .routeway_decl(id)
            .ok_or_else(|| unknown("routeway", id))?;
        decl.to_routeway().map_err(|source| LookupError::Routeway {
            routeway: id.to_string(),
            source,
        })
    }

    pub fn roadmap(&self, id: &str) -> Result<Roadmap, LookupError> {
        let decl = self
            .roadmaps
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| unknown("roadmap", id))?;
        let from = self
            .waypoint(&decl.from)
            .ok_or_else(|| unknown("waypoint", &decl.from))?;
        let to = self
            .waypoint(&decl.to)
            .ok_or_else(|| unknown("waypoint", &decl.to))?;
        let routeways = decl
            .routeways
            .iter()
            .map(|r| self.routeway(r))
            .collect::<Result<_, _>>()?;
        Ok(Roadmap::new(from.clone(), to.clone(), routeways)?)
    }

    pub fn atlas(&self, id: &str) -> Result<Atlas, LookupError> {
        let decl = self
            .atlases
            .iter()
            .find(|a| a.id == id)
            .ok_or_else(|| unknown("atlas", id))?;
        Ok(Atlas {
            roadmaps: decl
                .roadmaps
                .iter()
                .map(|r| self.roadmap(r))
                .collect::<Result<_, _>>()?,
            targets: decl
                .targets
                .iter()
                .map(|t| {
                    self.waypoint(t)
                        .cloned()
                        .ok_or_else(|| unknown("waypoint", t))
                })
                .collect::<Result<_, _>>()?,
        })
    }

    /// A routeway with its declared parameters and compass notes.
    pub fn parameterized(&self, id: &str) -> Result<ParameterizedRouteway, LookupError> {
        let decl = self
            .routeway_decl(id)
            .ok_or_else(|| unknown("routeway", id))?;
        let notes = self
            .annotations
            .iter()
            .filter(|(k, _)| {
                k.as_str() == id || k.strip_prefix(id).is_some_and(|rest| rest.starts_with('['))
            })
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(
            ParameterizedRouteway::new(decl.params.clone(), self.routeway(id)?)?
                .with_annotations(notes),
        )
    }

    pub fn filtration(&self, id: &str) -> Result<Vec<BaseField>, LookupError> {
        let decl = self
            .filtrations
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| unknown("filtration", id))?;
        decl.basefields
            .iter()
            .map(|b| self.basefield(b).ok_or_else(|| unknown("basefield", b)))
            .collect()
    }

    pub(crate) fn unit_span(&self, routeway: &str, unit: usize) -> Span {
        self.spans
            .units
            .get(&(routeway.to_string(), unit))
            .or_else(|| self.spans.routeways.get(routeway))
            .copied()
            .unwrap_or_else(Span::origin)
    }
}
