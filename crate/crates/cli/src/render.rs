use std::fmt::Write as _;

use routeway::dsl::Diagnostic;
use routeway::model::{RouteUnit, Routeway};
use serde::Serialize;
use serde_json::{json, Value};

/// One unit as it appears in JSON output.
#[derive(Serialize)]
pub struct UnitJson<'a> {
    pub from: &'a str,
    pub to: &'a str,
    pub trail: Option<&'a str>,
    pub substitution: Option<&'a routeway::Substitution>,
    pub two_way: bool,
}

pub fn unit_json(u: &RouteUnit) -> UnitJson<'_> {
    UnitJson {
        from: u.initial().id(),
        to: u.terminal().id(),
        trail: u.trail_id(),
        substitution: u.substitution(),
        two_way: u.is_two_way(),
    }
}

pub fn routeway_json(r: &Routeway) -> Value {
    json!({
        "start": r.start().id(),
        "end": r.end().id(),
        "length": r.len(),
        "waypoints": r.waypoints().iter().map(|w| json!({ "id": w.id(), "statements": w.statements() })).collect::<Vec<_>>(),
        "units": r.units().iter().map(unit_json).collect::<Vec<_>>(),
    })
}

pub fn arrow(u: &RouteUnit) -> String {
    let Some(t) = u.trail() else {
        return "=>".into();
    };
    let mut s = format!("{}[{}", if u.is_two_way() { "<=" } else { "=" }, t.id());
    if let Some(sub) = u.substitution() {
        let binds: Vec<String> = sub.iter().map(|(k, v)| format!("{k}=:{v}")).collect();
        if !binds.is_empty() {
            let _ = write!(s, " with {}", binds.join(", "));
        }
    }
    s.push_str("]=>");
    s
}

/// `A =[P]=> B =[Q]=> C` with waypoint ids.
pub fn chain(r: &Routeway) -> String {
    let mut s = r.start().id().to_string();
    for u in r.units() {
        let _ = write!(s, " {} {}", arrow(u), u.terminal().id());
    }
    s
}

/// Statements of each unit, one line each.
pub fn statements(r: &Routeway) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "  {}", r.start().label());
    for u in r.units() {
        let _ = writeln!(s, "    {} {}", arrow(u), u.terminal().label());
    }
    s
}

pub fn diagnostics_text(file: &str, ds: &[Diagnostic]) -> String {
    let mut s = String::new();
    for d in ds {
        let _ = writeln!(s, "{file}:{d}");
    }
    s
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

/// Left-aligned columns.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let _ = write!(s, "{c:<w$}  ", w = width[i]);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
