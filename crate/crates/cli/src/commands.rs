use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use routeway::dsl::{self, Document};
use routeway::export::ExportGraph;
use routeway::geometry::{self, filtration_report, Distance, DistanceMatrix};
use routeway::instantiate::instantiate_routeway;
use routeway::model::{atlas_coverage, RouteGraph, Substitution, Waypoint};
use routeway::refine::{presentation_equivalent, refines};
use serde_json::json;

use crate::render::{self, pretty, table};
use crate::{Command, Common, Pair, EXIT_LINT, EXIT_OK, EXIT_PARSE, EXIT_QUERY};

/// Lines for standard error plus an exit status.
pub struct Failure {
    lines: Vec<(String, String)>,
    exit: u8,
    /// Printed to standard output before failing, e.g. JSON diagnostics.
    stdout: Option<String>,
}

impl Failure {
    fn query(code: &str, message: impl Into<String>) -> Self {
        Self {
            lines: vec![(code.to_string(), message.into())],
            exit: EXIT_QUERY,
            stdout: None,
        }
    }
}

struct Output {
    text: String,
    exit: u8,
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output {
        text,
        exit: EXIT_OK,
    })
}

pub fn run(cmd: Command) -> u8 {
    match dispatch(cmd) {
        Ok(out) => {
            print!("{}", out.text);
            out.exit
        }
        Err(f) => {
            if let Some(s) = f.stdout {
                print!("{s}");
            }
            for (code, msg) in f.lines {
                eprintln!("error[{code}]: {msg}");
            }
            f.exit
        }
    }
}

fn load(common: &Common) -> Result<Document, Failure> {
    let name = common.file.display().to_string();
    let src = fs::read_to_string(&common.file).map_err(|e| Failure {
        lines: vec![("io-error".into(), format!("{name}: {e}"))],
        exit: EXIT_PARSE,
        stdout: None,
    })?;
    dsl::parse(&src).map_err(|ds| Failure {
        stdout: common
            .json
            .then(|| pretty(&json!({ "file": name, "parsed": false, "diagnostics": ds }))),
        lines: ds
            .iter()
            .map(|d| {
                (
                    d.code.clone(),
                    format!("{name}:{}:{}: {}", d.span.line, d.span.col, d.message),
                )
            })
            .collect(),
        exit: EXIT_PARSE,
    })
}

fn waypoint(doc: &Document, id: &str) -> Result<Waypoint, Failure> {
    doc.waypoint(id)
        .cloned()
        .ok_or_else(|| Failure::query("unknown-waypoint", format!("no waypoint named `{id}`")))
}

fn basefield_id(doc: &Document, requested: Option<String>) -> Result<String, Failure> {
    match requested {
        Some(b) => Ok(b),
        None => {
            doc.basefields.first().map(|b| b.id.clone()).ok_or_else(|| {
                Failure::query("no-basefield", "the document declares no base field")
            })
        }
    }
}

fn graph(doc: &Document, basefield: &str) -> Result<RouteGraph, Failure> {
    doc.graph(basefield)
        .map(|b| b.graph)
        .map_err(|e| Failure::query(e.code(), e.to_string()))
}

fn lookup<T>(r: Result<T, dsl::LookupError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::query(e.code(), e.to_string()))
}

fn geometry_err(e: geometry::GeometryError) -> Failure {
    Failure::query(e.code(), e.to_string())
}

struct Query {
    doc: Document,
    base: String,
    graph: RouteGraph,
}

fn query(common: &Common, basefield: Option<String>) -> Result<Query, Failure> {
    let doc = load(common)?;
    let base = basefield_id(&doc, basefield)?;
    let graph = graph(&doc, &base)?;
    Ok(Query { doc, base, graph })
}

fn dispatch(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Lint { common } => lint(&common),
        Command::Dist {
            common,
            basefield,
            pair,
        } => dist(&common, basefield, &pair),
        Command::Geodesic {
            common,
            basefield,
            pair,
        } => geodesic(&common, basefield, &pair),
        Command::Interval {
            common,
            basefield,
            pair,
        } => interval(&common, basefield, &pair),
        Command::Excess {
            common,
            basefield,
            via,
            pair,
        } => excess(&common, basefield, &via, &pair),
        Command::Closure {
            common,
            basefield,
            anchors,
        } => closure(&common, basefield, &anchors),
        Command::Refines { common, gamma, eta } => refine(&common, &gamma, &eta),
        Command::Simulate {
            common,
            template,
            bindings,
            holds,
            fails,
            instance_invalid,
        } => simulate(
            &common,
            &template,
            &bindings,
            &holds,
            &fails,
            instance_invalid,
        ),
        Command::Coverage { common, atlas } => coverage(&common, atlas),
        Command::Filtration {
            common,
            filtration,
            pairs,
        } => filtration_cmd(&common, filtration, &pairs),
        Command::Matrix { common, basefield } => matrix(&common, basefield),
        Command::Export {
            common,
            basefield,
            roadmap,
            anchors,
            dot,
        } => export(&common, basefield, roadmap, &anchors, dot.as_deref()),
    }
}

fn lint(common: &Common) -> Result<Output, Failure> {
    let doc = load(common)?;
    let ds = dsl::lint(&doc);
    let errors = ds.iter().filter(|d| d.is_error()).count();
    let name = common.file.display().to_string();
    let text = if common.json {
        pretty(&json!({
            "file": name,
            "parsed": true,
            "errors": errors,
            "warnings": ds.len() - errors,
            "diagnostics": ds,
        }))
    } else {
        let mut t = render::diagnostics_text(&name, &ds);
        t.push_str(&format!(
            "{errors} error(s), {} warning(s)\n",
            ds.len() - errors
        ));
        t
    };
    Ok(Output {
        text,
        exit: if errors > 0 { EXIT_LINT } else { EXIT_OK },
    })
}

fn dist(common: &Common, basefield: Option<String>, pair: &Pair) -> Result<Output, Failure> {
    let q = query(common, basefield)?;
    let (a, b) = (waypoint(&q.doc, &pair.from)?, waypoint(&q.doc, &pair.to)?);
    let d = geometry::distance(&q.graph, &a, &b);
    if common.json {
        ok(pretty(
            &json!({ "basefield": q.base, "from": a.id(), "to": b.id(), "distance": d }),
        ))
    } else {
        ok(format!("{d}\n"))
    }
}

fn geodesic(common: &Common, basefield: Option<String>, pair: &Pair) -> Result<Output, Failure> {
    let q = query(common, basefield)?;
    let (a, b) = (waypoint(&q.doc, &pair.from)?, waypoint(&q.doc, &pair.to)?);
    let g = geometry::geodesic(&q.graph, &a, &b);
    let d = geometry::distance(&q.graph, &a, &b);
    if common.json {
        return ok(pretty(&json!({
            "basefield": q.base,
            "from": a.id(),
            "to": b.id(),
            "distance": d,
            "routeway": g.as_ref().map(render::routeway_json),
        })));
    }
    match g {
        Some(r) => ok(format!("{}\n{}", render::chain(&r), render::statements(&r))),
        None => Err(Failure::query(
            "infinite-distance",
            format!(
                "`{}` is unreachable from `{}` in `{}`",
                b.id(),
                a.id(),
                q.base
            ),
        )),
    }
}

fn interval(common: &Common, basefield: Option<String>, pair: &Pair) -> Result<Output, Failure> {
    let q = query(common, basefield)?;
    let (a, b) = (waypoint(&q.doc, &pair.from)?, waypoint(&q.doc, &pair.to)?);
    let set = geometry::interval(&q.graph, &a, &b).map_err(geometry_err)?;
    let ids: Vec<&str> = set.iter().map(Waypoint::id).collect();
    if common.json {
        ok(pretty(&json!({
            "basefield": q.base,
            "from": a.id(),
            "to": b.id(),
            "distance": geometry::distance(&q.graph, &a, &b),
            "waypoints": ids,
        })))
    } else {
        ok(ids.iter().map(|s| format!("{s}\n")).collect())
    }
}

fn excess(
    common: &Common,
    basefield: Option<String>,
    via: &str,
    pair: &Pair,
) -> Result<Output, Failure> {
    let q = query(common, basefield)?;
    let (a, b, f) = (
        waypoint(&q.doc, &pair.from)?,
        waypoint(&q.doc, &pair.to)?,
        waypoint(&q.doc, via)?,
    );
    let x = geometry::excess(&q.graph, &f, &a, &b).map_err(geometry_err)?;
    let perfect = geometry::is_perfect(&q.graph, &f, &a, &b).map_err(geometry_err)?;
    let essential = geometry::is_essential(&q.graph, &f, &a, &b).map_err(geometry_err)?;
    if common.json {
        ok(pretty(&json!({
            "basefield": q.base,
            "from": a.id(),
            "to": b.id(),
            "via": f.id(),
            "excess": x,
            "perfect": perfect,
            "essential": essential,
        })))
    } else {
        ok(table(
            &["excess", "perfect", "essential"],
            &[vec![
                x.to_string(),
                perfect.to_string(),
                essential.to_string(),
            ]],
        ))
    }
}

fn closure(
    common: &Common,
    basefield: Option<String>,
    anchors: &[String],
) -> Result<Output, Failure> {
    let q = query(common, basefield)?;
    let anchors: Vec<Waypoint> = anchors
        .iter()
        .map(|a| waypoint(&q.doc, a))
        .collect::<Result<_, _>>()?;
    if anchors.is_empty() {
        return Err(geometry_err(geometry::GeometryError::EmptyAnchorSet));
    }
    let set = geometry::closure(&q.graph, &anchors);
    let mut rows = Vec::new();
    for w in &set {
        let d = geometry::anchor_distance(&q.graph, &anchors, w).map_err(geometry_err)?;
        rows.push((w.id().to_string(), d));
    }
    if common.json {
        ok(pretty(&json!({
            "basefield": q.base,
            "anchors": anchors.iter().map(Waypoint::id).collect::<Vec<_>>(),
            "closure": rows.iter().map(|(id, d)| json!({ "id": id, "anchor_distance": d })).collect::<Vec<_>>(),
        })))
    } else {
        let rows: Vec<Vec<String>> = rows
            .into_iter()
            .map(|(id, d)| vec![id, d.to_string()])
            .collect();
        ok(table(&["waypoint", "anchor distance"], &rows))
    }
}

fn refine(common: &Common, gamma: &str, eta: &str) -> Result<Output, Failure> {
    let doc = load(common)?;
    let g = lookup(doc.routeway(gamma))?;
    let h = lookup(doc.routeway(eta))?;
    let err = |e: routeway::refine::RefineError| Failure::query(e.code(), e.to_string());
    let witness = refines(&g, &h).map_err(err)?;
    let equivalent = presentation_equivalent(&g, &h).map_err(err)?;
    if common.json {
        return ok(pretty(&json!({
            "gamma": gamma,
            "eta": eta,
            "refines": witness.is_some(),
            "witness": witness.as_ref().map(|w| &w.blocks),
            "presentation_equivalent": equivalent,
        })));
    }
    let mut text = match &witness {
        Some(w) => {
            let mut t = format!("{gamma} refines to {eta}\n");
            let rows: Vec<Vec<String>> = w
                .blocks
                .iter()
                .map(|b| {
                    vec![
                        (b.unit + 1).to_string(),
                        format!("{}..{}", b.range.start + 1, b.range.end),
                    ]
                })
                .collect();
            t.push_str(&table(
                &[&format!("{gamma} unit"), &format!("{eta} units")],
                &rows,
            ));
            t
        }
        None => format!("{gamma} does not refine to {eta}\n"),
    };
    text.push_str(&format!("presentation-equivalent: {equivalent}\n"));
    ok(text)
}

fn parse_binding(s: &str) -> Result<(String, String), Failure> {
    let (k, v) = s
        .split_once("=:")
        .or_else(|| s.split_once('='))
        .ok_or_else(|| {
            Failure::query(
                "bad-binding",
                format!("`{s}` is not of the form param=term"),
            )
        })?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn simulate(
    common: &Common,
    template: &str,
    bindings: &[String],
    holds: &[String],
    fails: &[String],
    instance_invalid: bool,
) -> Result<Output, Failure> {
    let doc = load(common)?;
    let t = lookup(doc.parameterized(template))?;
    let pairs = bindings
        .iter()
        .map(|b| parse_binding(b))
        .collect::<Result<Vec<_>, _>>()?;
    let s = Substitution::new(pairs).map_err(|e| Failure::query(e.code(), e.to_string()))?;
    let mut declared = BTreeMap::new();
    for h in holds {
        declared.insert(h.clone(), true);
    }
    for h in fails {
        if declared.insert(h.clone(), false).is_some() {
            return Err(Failure::query(
                "conflicting-hypothesis",
                format!("`{h}` is declared both to hold and to fail"),
            ));
        }
    }
    let mut result = instantiate_routeway(&t, &s, &declared)
        .map_err(|e| Failure::query(e.code(), e.to_string()))?;
    if instance_invalid {
        result.declare_instance_invalid();
    }
    if common.json {
        return ok(pretty(&json!({
            "template": template,
            "bindings": s,
            "verdict": result.verdict,
            "hypotheses": result.hypothesis_status,
            "routeway": render::routeway_json(&result.routeway),
            "annotations": result.annotations,
        })));
    }
    let mut text = render::statements(&result.routeway);
    let verdict = serde_json::to_value(result.verdict).expect("verdict serializes");
    text.push_str(&format!(
        "verdict: {}\n",
        verdict.as_str().unwrap_or_default()
    ));
    for (k, v) in &result.annotations {
        text.push_str(&format!("compass {k}: {v}\n"));
    }
    ok(text)
}

fn coverage(common: &Common, atlas: Option<String>) -> Result<Output, Failure> {
    let doc = load(common)?;
    let id = match atlas {
        Some(a) => a,
        None => doc
            .atlases
            .first()
            .map(|a| a.id.clone())
            .ok_or_else(|| Failure::query("no-atlas", "the document declares no atlas"))?,
    };
    let a = lookup(doc.atlas(&id))?;
    let decl = doc
        .atlases
        .iter()
        .find(|x| x.id == id)
        .expect("atlas resolved above");
    let report = atlas_coverage(&a);
    let witness = |w: &routeway::model::CoverageWitness| {
        let map = &decl.roadmaps[w.roadmap];
        let way = doc
            .roadmaps
            .iter()
            .find(|m| &m.id == map)
            .map(|m| m.routeways[w.routeway].clone())
            .unwrap_or_default();
        (map.clone(), way)
    };
    if common.json {
        return ok(pretty(&json!({
            "atlas": id,
            "covering": report.is_covering(),
            "targets": report.targets.iter().map(|t| json!({
                "target": t.target,
                "witness": t.witness.as_ref().map(|w| {
                    let (m, r) = witness(w);
                    json!({ "roadmap": m, "routeway": r })
                }),
            })).collect::<Vec<_>>(),
        })));
    }
    let rows: Vec<Vec<String>> = report
        .targets
        .iter()
        .map(|t| match &t.witness {
            Some(w) => {
                let (m, r) = witness(w);
                vec![t.target.clone(), m, r]
            }
            None => vec![t.target.clone(), "uncovered".into(), String::new()],
        })
        .collect();
    let mut text = table(&["target", "roadmap", "routeway"], &rows);
    text.push_str(&format!("covering: {}\n", report.is_covering()));
    ok(text)
}

fn filtration_cmd(
    common: &Common,
    filtration: Option<String>,
    pairs: &[String],
) -> Result<Output, Failure> {
    let doc = load(common)?;
    let id = match filtration {
        Some(f) => f,
        None => doc
            .filtrations
            .first()
            .map(|f| f.id.clone())
            .ok_or_else(|| {
                Failure::query("no-filtration", "the document declares no filtration")
            })?,
    };
    let fields = lookup(doc.filtration(&id))?;
    let graphs = fields
        .iter()
        .map(|b| graph(&doc, b.id()))
        .collect::<Result<Vec<_>, _>>()?;
    let queried: Vec<(Waypoint, Waypoint)> = if pairs.is_empty() {
        let ws = &doc.waypoints;
        ws.iter()
            .flat_map(|a| {
                ws.iter()
                    .filter(move |b| a.id() != b.id())
                    .map(move |b| (a.clone(), b.clone()))
            })
            .collect()
    } else {
        pairs
            .iter()
            .map(|p| {
                let (a, b) = p.split_once(':').ok_or_else(|| {
                    Failure::query("bad-pair", format!("`{p}` is not of the form FROM:TO"))
                })?;
                Ok((waypoint(&doc, a)?, waypoint(&doc, b)?))
            })
            .collect::<Result<_, Failure>>()?
    };
    let refs: Vec<&RouteGraph> = graphs.iter().collect();
    let report = filtration_report(&refs, &queried).map_err(geometry_err)?;
    if common.json {
        return ok(pretty(&json!({
            "filtration": id,
            "pairs": report.pairs,
            "stages": report.stages,
            "violations": report.violations,
            "monotone": report.is_monotone(),
        })));
    }
    let mut header = vec!["from", "to"];
    header.extend(report.stages.iter().map(|s| s.basefield.as_str()));
    let rows: Vec<Vec<String>> = report
        .pairs
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let mut row = vec![a.clone(), b.clone()];
            row.extend(report.stages.iter().map(|s| s.distances[i].to_string()));
            row
        })
        .collect();
    let mut text = table(&header, &rows);
    if !report.is_monotone() {
        text.push_str(&format!(
            "{} pair(s) got farther apart\n",
            report.violations.len()
        ));
    }
    ok(text)
}

fn matrix(common: &Common, basefield: Option<String>) -> Result<Output, Failure> {
    let q = query(common, basefield)?;
    let m = DistanceMatrix::compute(&q.graph);
    let ids: Vec<&str> = q.graph.vertices().iter().map(Waypoint::id).collect();
    if common.json {
        let rows: Vec<&[Distance]> = (0..m.len()).map(|i| m.row(i)).collect();
        return ok(pretty(
            &json!({ "basefield": q.base, "vertices": ids, "distances": rows }),
        ));
    }
    let mut header = vec![""];
    header.extend(ids.iter().copied());
    let rows: Vec<Vec<String>> = (0..m.len())
        .map(|i| {
            let mut row = vec![ids[i].to_string()];
            row.extend(m.row(i).iter().map(Distance::to_string));
            row
        })
        .collect();
    ok(table(&header, &rows))
}

fn export(
    common: &Common,
    basefield: Option<String>,
    roadmap: Option<String>,
    anchors: &[String],
    dot: Option<&Path>,
) -> Result<Output, Failure> {
    let doc = load(common)?;
    let anchors: Vec<Waypoint> = anchors
        .iter()
        .map(|a| waypoint(&doc, a))
        .collect::<Result<_, _>>()?;
    let graph = match roadmap {
        Some(r) => ExportGraph::from_roadmap(&lookup(doc.roadmap(&r))?, &anchors),
        None => {
            let base = basefield_id(&doc, basefield)?;
            ExportGraph::from_graph(&graph(&doc, &base)?, &anchors)
        }
    };
    if let Some(path) = dot {
        fs::write(path, graph.to_dot())
            .map_err(|e| Failure::query("io-error", format!("{}: {e}", path.display())))?;
        return ok(if common.json {
            graph.to_json()
        } else {
            String::new()
        });
    }
    ok(if common.json {
        graph.to_json()
    } else {
        graph.to_dot()
    })
}
