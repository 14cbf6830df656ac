use std::collections::HashSet;

use super::{Diagnostic, Document, Span};
use crate::model::SingleApplication;

/// Checks every routeway unit against its routeway's base field, checks
/// chaining, and reports trails no unit uses.
///
/// Output order follows the document: routeways in order, units in order,
/// then unused trails.
pub fn lint(doc: &Document) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for r in &doc.routeways {
        let base = doc.basefield(&r.basefield);
        for (i, u) in r.units.iter().enumerate() {
            let span = doc.unit_span(&r.id, i);
            let step = format!(
                "`{}` unit {} ({} => {})",
                r.id,
                i + 1,
                u.initial().id(),
                u.terminal().id()
            );
            let Some(trail) = u.trail() else {
                out.push(Diagnostic::error(
                    "DEFECTIVE_UNIT",
                    span,
                    format!("{step} names no trail"),
                ));
                continue;
            };
            if base.as_ref().is_some_and(|b| !b.contains(trail.id())) {
                out.push(Diagnostic::error(
                    "REDUCIBLE_UNIT",
                    span,
                    format!(
                        "{step}: trail `{}` is not in base field `{}`",
                        trail.id(),
                        r.basefield
                    ),
                ));
            }
            match u.single_application() {
                SingleApplication::Mismatch => out.push(Diagnostic::error(
                    "TEMPLATE_MISMATCH",
                    span,
                    format!("{step} is not an instance of trail `{}`", trail.id()),
                )),
                SingleApplication::Unverifiable => out.push(Diagnostic::warning(
                    "UNVERIFIABLE_SINGLE_APPLICATION",
                    span,
                    format!(
                        "{step}: trail `{}` has no templates to check against",
                        trail.id()
                    ),
                )),
                SingleApplication::Verified => {}
            }
        }
        for i in 1..r.units.len() {
            let (prev, next) = (&r.units[i - 1], &r.units[i]);
            if prev.terminal() != next.initial() {
                out.push(Diagnostic::error(
                    "BROKEN_CHAIN",
                    doc.unit_span(&r.id, i),
                    format!(
                        "`{}` unit {} starts at `{}` but unit {} ends at `{}`",
                        r.id,
                        i + 1,
                        next.initial().id(),
                        i,
                        prev.terminal().id()
                    ),
                ));
            }
        }
        let span = doc
            .spans
            .routeways
            .get(&r.id)
            .copied()
            .unwrap_or_else(Span::origin);
        if let (Some(from), Some(first)) = (&r.from, r.units.first()) {
            if from != first.initial() {
                out.push(Diagnostic::error(
                    "BROKEN_CHAIN",
                    span,
                    format!(
                        "`{}` is declared to start at `{}` but its first unit starts at `{}`",
                        r.id,
                        from.id(),
                        first.initial().id()
                    ),
                ));
            }
        }
        if let (Some(to), Some(last)) = (&r.to, r.units.last()) {
            if to != last.terminal() {
                out.push(Diagnostic::error(
                    "BROKEN_CHAIN",
                    span,
                    format!(
                        "`{}` is declared to end at `{}` but its last unit ends at `{}`",
                        r.id,
                        to.id(),
                        last.terminal().id()
                    ),
                ));
            }
        }
        if let (true, Some(from), Some(to)) = (r.units.is_empty(), &r.from, &r.to) {
            if from != to {
                out.push(Diagnostic::error(
                    "BROKEN_CHAIN",
                    span,
                    format!(
                        "`{}` has no units but runs from `{}` to `{}`",
                        r.id,
                        from.id(),
                        to.id()
                    ),
                ));
            }
        }
    }
    let used: HashSet<&str> = doc
        .routeways
        .iter()
        .flat_map(|r| &r.units)
        .filter_map(|u| u.trail_id())
        .collect();
    for t in &doc.trails {
        if !used.contains(t.id()) {
            let span = doc
                .spans
                .trails
                .get(t.id())
                .copied()
                .unwrap_or_else(Span::origin);
            out.push(Diagnostic::warning(
                "UNUSED_TRAIL",
                span,
                format!("trail `{}` is used by no route unit", t.id()),
            ));
        }
    }
    out
}
