use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{
    AtlasDecl, BaseFieldDecl, Diagnostic, Document, FiltrationDecl, RoadmapDecl, RoutewayDecl,
    SourceMap, Span,
};
use crate::model::{RouteUnit, Substitution, Trail, Waypoint};

type Name = (String, Span);

struct RawTrail {
    id: Name,
    statement: String,
    params: Vec<Name>,
    hypotheses: Vec<String>,
    template: Option<(Vec<String>, Vec<String>)>,
}

struct RawBaseField {
    id: Name,
    extends: Option<Name>,
    trails: Vec<Name>,
}

struct RawWaypoint {
    id: Name,
    statements: Vec<String>,
    display: Option<String>,
}

struct RawUnit {
    from: Name,
    to: Name,
    trail: Option<Name>,
    bindings: Vec<(Name, String)>,
    two_way: bool,
    span: Span,
}

struct RawRouteway {
    id: Name,
    basefield: Name,
    endpoints: Option<(Name, Name)>,
    params: Vec<Name>,
    units: Vec<RawUnit>,
}

struct RawRoadmap {
    id: Name,
    from: Name,
    to: Name,
    routeways: Vec<Name>,
}

struct RawAtlas {
    id: Name,
    targets: Vec<Name>,
    roadmaps: Vec<Name>,
}

struct RawFiltration {
    id: Name,
    basefields: Vec<Name>,
}

struct RawCompass {
    target: Name,
    unit: Option<(usize, Span)>,
    text: String,
}

#[derive(Default)]
struct Raw {
    trails: Vec<RawTrail>,
    basefields: Vec<RawBaseField>,
    waypoints: Vec<RawWaypoint>,
    routeways: Vec<RawRouteway>,
    roadmaps: Vec<RawRoadmap>,
    atlases: Vec<RawAtlas>,
    filtrations: Vec<RawFiltration>,
    compasses: Vec<RawCompass>,
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.at].span
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(Diagnostic::syntax(
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.advance().span)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        let hit = self.at_keyword(kw);
        if hit {
            self.advance();
        }
        hit
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.advance().span)),
            _ => self.unexpected("identifier"),
        }
    }

    fn string(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.advance();
                Ok(s)
            }
            _ => self.unexpected("string"),
        }
    }

    /// `item ("," item)*`, at least one.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = vec![item(self)?];
        while *self.peek() == Tok::Comma {
            self.advance();
            out.push(item(self)?);
        }
        Ok(out)
    }

    /// `"(" item,* ")"`, possibly empty.
    fn paren_list<T>(&mut self, item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(Tok::LParen)?;
        if *self.peek() == Tok::RParen {
            self.advance();
            return Ok(Vec::new());
        }
        let out = self.list(item)?;
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    /// A string or a parenthesised nonempty list of strings.
    fn statements(&mut self) -> PResult<Vec<String>> {
        if *self.peek() == Tok::LParen {
            self.advance();
            let out = self.list(Self::string)?;
            self.expect(Tok::RParen)?;
            Ok(out)
        } else {
            Ok(vec![self.string()?])
        }
    }

    fn document(&mut self) -> PResult<Raw> {
        let mut raw = Raw::default();
        if self.eat_keyword("version") {
            match self.peek().clone() {
                Tok::Number(n) if n == "1" => {
                    self.advance();
                }
                Tok::Number(n) => {
                    return Err(Diagnostic::error(
                        "unsupported-version",
                        self.span(),
                        format!("unsupported format version {n}"),
                    ))
                }
                _ => return self.unexpected("version number"),
            }
        }
        loop {
            let Tok::Ident(kw) = self.peek().clone() else {
                if *self.peek() == Tok::Eof {
                    return Ok(raw);
                }
                return self.unexpected("a declaration");
            };
            match kw.as_str() {
                "trail" => {
                    self.advance();
                    raw.trails.push(self.trail()?);
                }
                "basefield" => {
                    self.advance();
                    self.basefield(&mut raw)?;
                }
                "waypoint" => {
                    self.advance();
                    let id = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let statements = self.statements()?;
                    let display = if self.eat_keyword("display") {
                        Some(self.string()?)
                    } else {
                        None
                    };
                    raw.waypoints.push(RawWaypoint {
                        id,
                        statements,
                        display,
                    });
                }
                "routeway" => {
                    self.advance();
                    raw.routeways.push(self.routeway()?);
                }
                "roadmap" => {
                    self.advance();
                    let id = self.ident()?;
                    self.keyword("from")?;
                    let from = self.ident()?;
                    self.keyword("to")?;
                    let to = self.ident()?;
                    self.expect(Tok::LBrace)?;
                    let routeways = self.list(Self::ident)?;
                    self.expect(Tok::RBrace)?;
                    raw.roadmaps.push(RawRoadmap {
                        id,
                        from,
                        to,
                        routeways,
                    });
                }
                "atlas" => {
                    self.advance();
                    let id = self.ident()?;
                    self.keyword("targets")?;
                    let targets = self.paren_list(Self::ident)?;
                    self.expect(Tok::LBrace)?;
                    let roadmaps = if *self.peek() == Tok::RBrace {
                        Vec::new()
                    } else {
                        self.list(Self::ident)?
                    };
                    self.expect(Tok::RBrace)?;
                    raw.atlases.push(RawAtlas {
                        id,
                        targets,
                        roadmaps,
                    });
                }
                "filtration" => {
                    self.advance();
                    let id = self.ident()?;
                    self.expect(Tok::LBrace)?;
                    let basefields = self.list(Self::ident)?;
                    self.expect(Tok::RBrace)?;
                    raw.filtrations.push(RawFiltration { id, basefields });
                }
                "compass" => {
                    self.advance();
                    let target = self.ident()?;
                    let unit = if *self.peek() == Tok::LBracket {
                        self.advance();
                        let n = match self.peek().clone() {
                            Tok::Number(n) => n.parse::<usize>().ok().map(|n| (n, self.span())),
                            _ => None,
                        };
                        let Some(n) = n else {
                            return self.unexpected("unit number");
                        };
                        self.advance();
                        self.expect(Tok::RBracket)?;
                        Some(n)
                    } else {
                        None
                    };
                    self.expect(Tok::Colon)?;
                    let text = self.string()?;
                    raw.compasses.push(RawCompass { target, unit, text });
                }
                _ => return self.unexpected("a declaration"),
            }
        }
    }

    fn trail(&mut self) -> PResult<RawTrail> {
        let id = self.ident()?;
        self.expect(Tok::Colon)?;
        let statement = self.string()?;
        let params = if self.eat_keyword("params") {
            self.paren_list(Self::ident)?
        } else {
            Vec::new()
        };
        let hypotheses = if self.eat_keyword("hypotheses") {
            self.paren_list(Self::string)?
        } else {
            Vec::new()
        };
        let template = if self.eat_keyword("premise") {
            let premise = self.statements()?;
            self.keyword("conclusion")?;
            Some((premise, self.statements()?))
        } else {
            None
        };
        Ok(RawTrail {
            id,
            statement,
            params,
            hypotheses,
            template,
        })
    }

    fn basefield(&mut self, raw: &mut Raw) -> PResult<()> {
        let id = self.ident()?;
        let extends = if self.eat_keyword("extends") {
            Some(self.ident()?)
        } else {
            None
        };
        self.expect(Tok::LBrace)?;
        let mut trails = Vec::new();
        loop {
            if *self.peek() == Tok::RBrace {
                self.advance();
                break;
            }
            if self.eat_keyword("trail") {
                let t = self.trail()?;
                trails.push(t.id.clone());
                raw.trails.push(t);
            } else if self.eat_keyword("use") {
                trails.extend(self.list(Self::ident)?);
            } else {
                return self.unexpected("`trail`, `use` or `}`");
            }
        }
        raw.basefields.push(RawBaseField {
            id,
            extends,
            trails,
        });
        Ok(())
    }

    fn routeway(&mut self) -> PResult<RawRouteway> {
        let id = self.ident()?;
        self.keyword("in")?;
        let basefield = self.ident()?;
        let endpoints = if self.eat_keyword("from") {
            let from = self.ident()?;
            self.keyword("to")?;
            Some((from, self.ident()?))
        } else {
            None
        };
        let params = if self.eat_keyword("params") {
            self.paren_list(Self::ident)?
        } else {
            Vec::new()
        };
        self.expect(Tok::LBrace)?;
        let mut units = Vec::new();
        while *self.peek() != Tok::RBrace {
            let mut from = self.ident()?;
            let mut any = false;
            while let Some((trail, bindings, two_way)) = self.arrow()? {
                let to = self.ident()?;
                units.push(RawUnit {
                    span: from.1.to(to.1),
                    from,
                    to: to.clone(),
                    trail,
                    bindings,
                    two_way,
                });
                from = to;
                any = true;
            }
            if !any {
                return self.unexpected("an arrow");
            }
        }
        self.advance();
        if units.is_empty() && endpoints.is_none() {
            return Err(Diagnostic::syntax(
                id.1,
                format!("routeway `{}` has no units and no `from ... to ...`", id.0),
            ));
        }
        Ok(RawRouteway {
            id,
            basefield,
            endpoints,
            params,
            units,
        })
    }

    #[allow(clippy::type_complexity)]
    fn arrow(&mut self) -> PResult<Option<(Option<Name>, Vec<(Name, String)>, bool)>> {
        let two_way = match self.peek() {
            Tok::Bare => {
                self.advance();
                return Ok(Some((None, Vec::new(), false)));
            }
            Tok::ArrowOpen => false,
            Tok::TwoWayOpen => true,
            _ => return Ok(None),
        };
        self.advance();
        let trail = self.ident()?;
        let bindings = if self.eat_keyword("with") {
            self.list(|p| {
                let param = p.ident()?;
                p.expect(Tok::Bind)?;
                let term = match p.peek().clone() {
                    Tok::Ident(s) | Tok::Number(s) | Tok::Str(s) => s,
                    _ => return p.unexpected("a term"),
                };
                p.advance();
                Ok((param, term))
            })?
        } else {
            Vec::new()
        };
        self.expect(Tok::ArrowClose)?;
        Ok(Some((Some(trail), bindings, two_way)))
    }
}

/// Parses and resolves a document.
///
/// Syntax errors stop at the first one; reference errors are collected.
pub fn parse(source: &str) -> Result<Document, Vec<Diagnostic>> {
    let tokens = tokenize(source).map_err(|d| vec![d])?;
    let mut p = Parser { tokens, at: 0 };
    let raw = p.document().map_err(|d| vec![d])?;
    Resolver::default().run(raw)
}

#[derive(Default)]
struct Resolver {
    errors: Vec<Diagnostic>,
}

impl Resolver {
    fn unresolved(&mut self, kind: &str, name: &Name) {
        self.errors.push(Diagnostic::error(
            "unresolved-reference",
            name.1,
            format!("unknown {kind} `{}`", name.0),
        ));
    }

    fn duplicate(&mut self, kind: &str, name: &Name) {
        self.errors.push(Diagnostic::error(
            "duplicate-identifier",
            name.1,
            format!("{kind} `{}` is declared more than once", name.0),
        ));
    }

    fn invalid(&mut self, code: &str, span: Span, message: String) {
        self.errors.push(Diagnostic::error(code, span, message));
    }

    /// Reports repeats within one namespace; true for a first occurrence.
    fn fresh<'a>(&mut self, seen: &mut HashSet<&'a str>, kind: &str, name: &'a Name) -> bool {
        let first = seen.insert(name.0.as_str());
        if !first {
            self.duplicate(kind, name);
        }
        first
    }

    fn run(mut self, raw: Raw) -> Result<Document, Vec<Diagnostic>> {
        let mut doc = Document {
            spans: SourceMap::default(),
            ..Document::default()
        };

        let mut seen = HashSet::new();
        for t in &raw.trails {
            if !self.fresh(&mut seen, "trail", &t.id) {
                continue;
            }
            doc.spans.trails.insert(t.id.0.clone(), t.id.1);
            let built = Trail::new(t.id.0.clone(), t.statement.clone())
                .with_params(t.params.iter().map(|p| p.0.clone()))
                .map(|tr| tr.with_hypotheses(t.hypotheses.iter().cloned()))
                .and_then(|tr| match &t.template {
                    Some((premise, conclusion)) => {
                        tr.with_template(premise.clone(), conclusion.clone())
                    }
                    None => Ok(tr),
                });
            match built {
                Ok(tr) => doc.trails.push(Arc::new(tr)),
                Err(e) => self.invalid("invalid-declaration", t.id.1, e.to_string()),
            }
        }
        let trails: HashMap<&str, Arc<Trail>> =
            doc.trails.iter().map(|t| (t.id(), t.clone())).collect();

        let mut seen = HashSet::new();
        let field_ids: HashSet<&str> = raw.basefields.iter().map(|b| b.id.0.as_str()).collect();
        for b in &raw.basefields {
            if !self.fresh(&mut seen, "basefield", &b.id) {
                continue;
            }
            if let Some(parent) = &b.extends {
                if !field_ids.contains(parent.0.as_str()) {
                    self.unresolved("basefield", parent);
                }
            }
            let mut own = HashSet::new();
            for t in &b.trails {
                if !trails.contains_key(t.0.as_str()) && !raw.trails.iter().any(|r| r.id.0 == t.0) {
                    self.unresolved("trail", t);
                } else if !own.insert(t.0.as_str()) {
                    self.duplicate("trail in basefield", t);
                }
            }
            doc.basefields.push(BaseFieldDecl {
                id: b.id.0.clone(),
                extends: b.extends.as_ref().map(|e| e.0.clone()),
                trails: b.trails.iter().map(|t| t.0.clone()).collect(),
            });
        }
        self.check_cycles(&raw);

        let mut seen = HashSet::new();
        for w in &raw.waypoints {
            if !self.fresh(&mut seen, "waypoint", &w.id) {
                continue;
            }
            match Waypoint::new(w.id.0.clone(), w.statements.clone()) {
                Ok(mut wp) => {
                    if let Some(d) = &w.display {
                        wp = wp.with_display(d.clone());
                    }
                    doc.waypoints.push(wp);
                }
                Err(e) => self.invalid("invalid-declaration", w.id.1, e.to_string()),
            }
        }
        let waypoints: HashMap<&str, Waypoint> =
            doc.waypoints.iter().map(|w| (w.id(), w.clone())).collect();
        let lookup_wp = |this: &mut Self, name: &Name| {
            let w = waypoints.get(name.0.as_str()).cloned();
            if w.is_none() {
                this.unresolved("waypoint", name);
            }
            w
        };

        let mut seen = HashSet::new();
        // Routeways that lost a unit or endpoint to an earlier error.
        let mut incomplete: HashSet<&str> = HashSet::new();
        for r in &raw.routeways {
            if !self.fresh(&mut seen, "routeway", &r.id) {
                continue;
            }
            doc.spans.routeways.insert(r.id.0.clone(), r.id.1);
            if !field_ids.contains(r.basefield.0.as_str()) {
                self.unresolved("basefield", &r.basefield);
            }
            let (from, to) = match &r.endpoints {
                Some((a, b)) => (lookup_wp(&mut self, a), lookup_wp(&mut self, b)),
                None => (None, None),
            };
            let mut params_seen = HashSet::new();
            for p in &r.params {
                if !params_seen.insert(p.0.as_str()) {
                    self.duplicate("parameter", p);
                }
            }
            let mut units = Vec::new();
            for (i, u) in r.units.iter().enumerate() {
                doc.spans.units.insert((r.id.0.clone(), i), u.span);
                let a = lookup_wp(&mut self, &u.from);
                let b = lookup_wp(&mut self, &u.to);
                let (Some(a), Some(b)) = (a, b) else { continue };
                let Some(trail_name) = &u.trail else {
                    units.push(RouteUnit::defective(a, b));
                    continue;
                };
                let Some(trail) = trails.get(trail_name.0.as_str()) else {
                    if !raw.trails.iter().any(|t| t.id.0 == trail_name.0) {
                        self.unresolved("trail", trail_name);
                    }
                    continue;
                };
                let mut unit = RouteUnit::new(a, b, trail.clone());
                if !u.bindings.is_empty() {
                    let bound =
                        Substitution::new(u.bindings.iter().map(|(p, t)| (p.0.clone(), t.clone())))
                            .and_then(|s| unit.clone().with_substitution(s));
                    match bound {
                        Ok(v) => unit = v,
                        Err(e) => {
                            self.invalid("invalid-substitution", u.span, e.to_string());
                            continue;
                        }
                    }
                }
                if u.two_way {
                    unit = unit.two_way().expect("unit has a trail");
                }
                units.push(unit);
            }
            if units.len() != r.units.len()
                || r.endpoints.is_some() && (from.is_none() || to.is_none())
            {
                incomplete.insert(r.id.0.as_str());
            }
            doc.routeways.push(RoutewayDecl {
                id: r.id.0.clone(),
                basefield: r.basefield.0.clone(),
                from,
                to,
                params: r.params.iter().map(|p| p.0.clone()).collect(),
                units,
            });
        }

        let mut seen = HashSet::new();
        for m in &raw.roadmaps {
            if !self.fresh(&mut seen, "roadmap", &m.id) {
                continue;
            }
            let from = lookup_wp(&mut self, &m.from);
            let to = lookup_wp(&mut self, &m.to);
            for r in &m.routeways {
                let Some(decl) = doc.routeways.iter().find(|d| d.id == r.0) else {
                    self.unresolved("routeway", r);
                    continue;
                };
                if incomplete.contains(decl.id.as_str()) {
                    continue;
                }
                if let (Some(from), Some(to)) = (&from, &to) {
                    if decl.start() != from || decl.end() != to {
                        self.invalid(
                            "roadmap-endpoints",
                            r.1,
                            format!(
                                "routeway `{}` does not run from `{}` to `{}`",
                                r.0,
                                from.id(),
                                to.id()
                            ),
                        );
                    }
                }
            }
            doc.roadmaps.push(RoadmapDecl {
                id: m.id.0.clone(),
                from: m.from.0.clone(),
                to: m.to.0.clone(),
                routeways: m.routeways.iter().map(|r| r.0.clone()).collect(),
            });
        }

        let roadmap_ids: HashSet<&str> = raw.roadmaps.iter().map(|m| m.id.0.as_str()).collect();
        let mut seen = HashSet::new();
        for a in &raw.atlases {
            if !self.fresh(&mut seen, "atlas", &a.id) {
                continue;
            }
            for t in &a.targets {
                lookup_wp(&mut self, t);
            }
            for m in &a.roadmaps {
                if !roadmap_ids.contains(m.0.as_str()) {
                    self.unresolved("roadmap", m);
                }
            }
            doc.atlases.push(AtlasDecl {
                id: a.id.0.clone(),
                targets: a.targets.iter().map(|t| t.0.clone()).collect(),
                roadmaps: a.roadmaps.iter().map(|m| m.0.clone()).collect(),
            });
        }

        let mut seen = HashSet::new();
        for f in &raw.filtrations {
            if !self.fresh(&mut seen, "filtration", &f.id) {
                continue;
            }
            for b in &f.basefields {
                if !field_ids.contains(b.0.as_str()) {
                    self.unresolved("basefield", b);
                }
            }
            doc.filtrations.push(FiltrationDecl {
                id: f.id.0.clone(),
                basefields: f.basefields.iter().map(|b| b.0.clone()).collect(),
            });
        }

        let mut notes = BTreeMap::new();
        for c in &raw.compasses {
            let Some(decl) = raw.routeways.iter().find(|r| r.id.0 == c.target.0) else {
                self.unresolved("routeway", &c.target);
                continue;
            };
            let key = match c.unit {
                Some((n, span)) if n == 0 || n > decl.units.len() => {
                    self.unresolved("unit", &(format!("{}[{n}]", c.target.0), span));
                    continue;
                }
                Some((n, _)) => format!("{}[{n}]", c.target.0),
                None => c.target.0.clone(),
            };
            if notes.insert(key.clone(), c.text.clone()).is_some() {
                self.duplicate("compass note", &(key, c.target.1));
            }
        }
        doc.annotations = notes;

        if self.errors.is_empty() {
            Ok(doc)
        } else {
            Err(self.errors)
        }
    }

    fn check_cycles(&mut self, raw: &Raw) {
        let parent: HashMap<&str, &str> = raw
            .basefields
            .iter()
            .filter_map(|b| b.extends.as_ref().map(|e| (b.id.0.as_str(), e.0.as_str())))
            .collect();
        for b in &raw.basefields {
            let mut at = b.id.0.as_str();
            let mut steps = 0;
            while let Some(&next) = parent.get(at) {
                steps += 1;
                if next == b.id.0 || steps > parent.len() {
                    self.invalid(
                        "extends-cycle",
                        b.id.1,
                        format!("basefield `{}` extends itself", b.id.0),
                    );
                    break;
                }
                at = next;
            }
        }
    }
}
