use std::fmt::Write as _;

use super::lexer::{is_ident, is_number};
use super::Document;
use crate::model::{RouteUnit, Trail};

/// Canonical text for a document.
///
/// All trails come first at top level and base fields list theirs with
/// `use`; every other kind keeps declaration order. Parsing the output
/// gives back an equal document.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::from("version 1\n");
    if !doc.trails.is_empty() {
        out.push('\n');
        for t in &doc.trails {
            trail(&mut out, t);
        }
    }
    if !doc.basefields.is_empty() {
        out.push('\n');
        for b in &doc.basefields {
            let _ = write!(out, "basefield {}", b.id);
            if let Some(p) = &b.extends {
                let _ = write!(out, " extends {p}");
            }
            if b.trails.is_empty() {
                out.push_str(" { }\n");
            } else {
                let _ = writeln!(out, " {{\n  use {}\n}}", b.trails.join(", "));
            }
        }
    }
    if !doc.waypoints.is_empty() {
        out.push('\n');
        for w in &doc.waypoints {
            let _ = write!(out, "waypoint {}: {}", w.id(), statements(w.statements()));
            if let Some(d) = w.display() {
                let _ = write!(out, " display {}", quote(d));
            }
            out.push('\n');
        }
    }
    for r in &doc.routeways {
        let _ = write!(out, "\nrouteway {} in {}", r.id, r.basefield);
        if let (Some(a), Some(b)) = (&r.from, &r.to) {
            let _ = write!(out, " from {} to {}", a.id(), b.id());
        }
        if !r.params.is_empty() {
            let _ = write!(out, " params ({})", r.params.join(", "));
        }
        out.push_str(" {\n");
        let mut line_open = false;
        for (i, u) in r.units.iter().enumerate() {
            let continues = i > 0 && r.units[i - 1].terminal().id() == u.initial().id();
            if !continues {
                if line_open {
                    out.push('\n');
                }
                let _ = write!(out, "  {}", u.initial().id());
            }
            let _ = write!(out, " {} {}", arrow(u), u.terminal().id());
            line_open = true;
        }
        if line_open {
            out.push('\n');
        }
        out.push_str("}\n");
    }
    if !doc.roadmaps.is_empty() {
        out.push('\n');
        for m in &doc.roadmaps {
            let _ = writeln!(
                out,
                "roadmap {} from {} to {} {{ {} }}",
                m.id,
                m.from,
                m.to,
                m.routeways.join(", ")
            );
        }
    }
    if !doc.atlases.is_empty() {
        out.push('\n');
        for a in &doc.atlases {
            let _ = write!(out, "atlas {} targets ({})", a.id, a.targets.join(", "));
            if a.roadmaps.is_empty() {
                out.push_str(" { }\n");
            } else {
                let _ = writeln!(out, " {{ {} }}", a.roadmaps.join(", "));
            }
        }
    }
    if !doc.filtrations.is_empty() {
        out.push('\n');
        for f in &doc.filtrations {
            let _ = writeln!(out, "filtration {} {{ {} }}", f.id, f.basefields.join(", "));
        }
    }
    if !doc.annotations.is_empty() {
        out.push('\n');
        for (k, v) in &doc.annotations {
            let _ = writeln!(out, "compass {k}: {}", quote(v));
        }
    }
    out
}

fn trail(out: &mut String, t: &Trail) {
    let _ = write!(out, "trail {}: {}", t.id(), quote(t.statement()));
    if !t.params().is_empty() {
        let _ = write!(out, " params ({})", t.params().join(", "));
    }
    if !t.hypotheses().is_empty() {
        let hs: Vec<String> = t.hypotheses().iter().map(|h| quote(h)).collect();
        let _ = write!(out, " hypotheses ({})", hs.join(", "));
    }
    if let Some(tpl) = t.template() {
        let _ = write!(
            out,
            "\n  premise {} conclusion {}",
            statements(&tpl.premise),
            statements(&tpl.conclusion)
        );
    }
    out.push('\n');
}

fn arrow(u: &RouteUnit) -> String {
    let Some(t) = u.trail() else {
        return "=>".to_string();
    };
    let mut s = String::from(if u.is_two_way() { "<=[" } else { "=[" });
    s.push_str(t.id());
    if let Some(sub) = u.substitution() {
        if !sub.is_empty() {
            let binds: Vec<String> = sub
                .iter()
                .map(|(k, v)| format!("{k}=:{}", term(v)))
                .collect();
            let _ = write!(s, " with {}", binds.join(", "));
        }
    }
    s.push_str("]=>");
    s
}

fn term(v: &str) -> String {
    if is_ident(v) || is_number(v) {
        v.to_string()
    } else {
        quote(v)
    }
}

fn statements(xs: &[String]) -> String {
    match xs {
        [one] => quote(one),
        _ => format!(
            "({})",
            xs.iter().map(|x| quote(x)).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
