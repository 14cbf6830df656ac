//! Random graph generators and brute-force oracles shared by the
//! integration tests. The oracles work on plain edge lists and never call
//! the library's search code.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use routeway::{build_graph, BaseField, RouteGraph, RouteUnit, Routeway, Trail, Waypoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn wp(i: usize) -> Waypoint {
    Waypoint::single(format!("v{i}"), format!("s{i}"))
}

pub fn trail(k: usize) -> Arc<Trail> {
    Arc::new(Trail::new(format!("t{k}"), format!("fact {k}")))
}

/// A labelled directed multigraph on `0..n`; edge `k` uses trail `labels[k]`.
#[derive(Clone, Debug)]
pub struct Quiver {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub labels: Vec<usize>,
}

impl Quiver {
    /// `n` in `1..=max_n`, up to `max_m` edges, labels from a pool of `trails`.
    pub fn random(r: &mut impl Rng, max_n: usize, max_m: usize, trails: usize) -> Self {
        let n = r.gen_range(1..=max_n);
        let m = r.gen_range(0..=max_m);
        let edges: Vec<(usize, usize)> = (0..m)
            .map(|_| (r.gen_range(0..n), r.gen_range(0..n)))
            .collect();
        let labels = (0..m).map(|_| r.gen_range(0..trails)).collect();
        Self { n, edges, labels }
    }

    pub fn unit(&self, k: usize) -> RouteUnit {
        let (a, b) = self.edges[k];
        RouteUnit::new(wp(a), wp(b), trail(self.labels[k]))
    }

    pub fn units(&self) -> Vec<RouteUnit> {
        (0..self.edges.len()).map(|k| self.unit(k)).collect()
    }

    pub fn all_trails(&self) -> BaseField {
        let ids: BTreeSet<usize> = self.labels.iter().copied().collect();
        BaseField::new("all", ids.into_iter().map(trail))
    }

    pub fn graph(&self) -> RouteGraph {
        build_graph(&self.units(), &self.all_trails())
            .unwrap()
            .graph
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&k| self.edges[k].0 == v)
    }

    /// A random walk of at most `max_len` edges as a routeway.
    pub fn random_walk(&self, r: &mut impl Rng, max_len: usize) -> Routeway {
        let start = r.gen_range(0..self.n);
        let mut v = start;
        let mut units = Vec::new();
        for _ in 0..r.gen_range(0..=max_len) {
            let out: Vec<usize> = self.out_edges(v).collect();
            let Some(&k) = out.choose(r) else { break };
            units.push(self.unit(k));
            v = self.edges[k].1;
        }
        Routeway::new(wp(start), units).unwrap()
    }
}

/// Length of a shortest walk `a ⇝ b`, found by growing the set of
/// vertices reachable in exactly `k` steps until `b` appears.
pub fn walk_distance(q: &Quiver, a: usize, b: usize) -> Option<usize> {
    let mut layer = vec![false; q.n];
    layer[a] = true;
    for k in 0..=q.n {
        if layer[b] {
            return Some(k);
        }
        let mut next = vec![false; q.n];
        for &(x, y) in &q.edges {
            if layer[x] {
                next[y] = true;
            }
        }
        layer = next;
    }
    None
}

/// Every walk `a ⇝ b` of minimal length, as vertex sequences.
pub fn minimal_walks(q: &Quiver, a: usize, b: usize) -> Vec<Vec<usize>> {
    let Some(d) = walk_distance(q, a, b) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut path = vec![a];
    fn go(q: &Quiver, b: usize, left: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if left == 0 {
            if v == b {
                out.push(path.clone());
            }
            return;
        }
        for &(x, y) in &q.edges {
            if x == v {
                path.push(y);
                go(q, b, left - 1, path, out);
                path.pop();
            }
        }
    }
    go(q, b, d, &mut path, &mut out);
    out
}

/// Ids of the vertices on some minimal walk.
pub fn interval_oracle(q: &Quiver, a: usize, b: usize) -> BTreeSet<String> {
    minimal_walks(q, a, b)
        .into_iter()
        .flatten()
        .map(|v| wp(v).id().to_string())
        .collect()
}

/// Whether `f` lies on every minimal walk.
pub fn essential_oracle(q: &Quiver, f: usize, a: usize, b: usize) -> bool {
    minimal_walks(q, a, b).iter().all(|w| w.contains(&f))
}

/// Vertices reachable from any anchor, by repeated edge relaxation.
pub fn reach_oracle(q: &Quiver, anchors: &[usize]) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = anchors.iter().copied().collect();
    loop {
        let grown: Vec<usize> = q
            .edges
            .iter()
            .filter(|(x, y)| seen.contains(x) && !seen.contains(y))
            .map(|&(_, y)| y)
            .collect();
        if grown.is_empty() {
            return seen;
        }
        seen.extend(grown);
    }
}

/// Whether `eta` splits into `gamma.len()` nonempty consecutive blocks
/// whose endpoints match the units of `gamma`, trying every split.
pub fn refines_oracle(gamma: &Routeway, eta: &Routeway) -> bool {
    fn go(g: &[RouteUnit], e: &[RouteUnit]) -> bool {
        match g.split_first() {
            None => e.is_empty(),
            Some((u, rest)) => (1..=e.len()).any(|k| {
                e[0].initial() == u.initial()
                    && e[k - 1].terminal() == u.terminal()
                    && go(rest, &e[k..])
            }),
        }
    }
    gamma.start() == eta.start() && gamma.end() == eta.end() && go(gamma.units(), eta.units())
}

pub fn ids(ws: &[Waypoint]) -> BTreeSet<String> {
    ws.iter().map(|w| w.id().to_string()).collect()
}

/// Replaces each unit of `r` by a chain of 1..=`max_block` units through
/// fresh waypoints named after `tag`.
pub fn expand(
    r: &Routeway,
    rng: &mut impl Rng,
    max_block: usize,
    tag: &str,
    base_trails: usize,
) -> Routeway {
    let mut units = Vec::new();
    for (i, u) in r.units().iter().enumerate() {
        let k = rng.gen_range(1..=max_block);
        let mut from = u.initial().clone();
        for j in 0..k {
            let to = if j + 1 == k {
                u.terminal().clone()
            } else {
                Waypoint::single(format!("{tag}_{i}_{j}"), format!("{tag} mid {i} {j}"))
            };
            units.push(RouteUnit::new(
                from,
                to.clone(),
                trail(rng.gen_range(0..base_trails)),
            ));
            from = to;
        }
    }
    Routeway::new(r.start().clone(), units).unwrap()
}

/// A chain through `len` fresh waypoints named after `tag`.
pub fn chain(tag: &str, len: usize, rng: &mut impl Rng, trails: usize) -> Routeway {
    let pts: Vec<Waypoint> = (0..=len)
        .map(|i| Waypoint::single(format!("{tag}{i}"), format!("{tag} point {i}")))
        .collect();
    let units = pts
        .windows(2)
        .map(|w| RouteUnit::new(w[0].clone(), w[1].clone(), trail(rng.gen_range(0..trails))))
        .collect();
    Routeway::new(pts[0].clone(), units).unwrap()
}

const STATEMENT_BITS: &[&str] = &[
    "x<y",
    "f is onto",
    "a \"quoted\" word",
    "back\\slash",
    "tab\there",
    "|G| = p^2",
    "2x<2y",
    "ω ≥ 0",
];

fn statement(r: &mut impl Rng) -> String {
    let base = STATEMENT_BITS.choose(r).unwrap();
    format!("{base} {}", r.gen_range(0..1000))
}

fn quoted(s: &str) -> String {
    let mut out = String::from("\"");
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

fn statements(r: &mut impl Rng) -> String {
    match r.gen_range(0..3) {
        0 => format!("({}, {})", quoted(&statement(r)), quoted(&statement(r))),
        _ => quoted(&statement(r)),
    }
}

fn term(r: &mut impl Rng) -> String {
    match r.gen_range(0..4) {
        0 => format!("a{}", r.gen_range(0..5)),
        1 => format!("{}", r.gen_range(-9..100)),
        2 => "1.5".to_string(),
        _ => quoted(&format!("k + {}", r.gen_range(0..9))),
    }
}

/// Source text of a random document that resolves without errors.
pub fn random_document(r: &mut impl Rng) -> String {
    let mut out = String::new();
    if r.gen_bool(0.5) {
        out.push_str("version 1\n");
    }
    let n_trails = r.gen_range(1..6);
    let mut params: Vec<Vec<String>> = Vec::new();
    let mut trail_src = Vec::new();
    for t in 0..n_trails {
        let ps: Vec<String> = (0..r.gen_range(0..3)).map(|i| format!("p{i}")).collect();
        let mut s = format!("trail T{t}: {}", quoted(&statement(r)));
        if !ps.is_empty() {
            s.push_str(&format!(" params ({})", ps.join(", ")));
        }
        if r.gen_bool(0.3) {
            s.push_str(&format!(" hypotheses ({})", quoted("p0>0")));
        }
        if r.gen_bool(0.4) {
            s.push_str(&format!(
                " premise {} conclusion {}",
                statements(r),
                statements(r)
            ));
        }
        params.push(ps);
        trail_src.push(s);
    }
    // Some trails at top level, the rest inline in the first base field.
    let inline = r.gen_range(0..=n_trails);
    for s in &trail_src[inline..] {
        out.push_str(s);
        out.push('\n');
    }
    out.push_str("basefield B0 {\n");
    for s in &trail_src[..inline] {
        out.push_str(&format!("  {s}\n"));
    }
    if inline < n_trails && r.gen_bool(0.5) {
        out.push_str(&format!("  use T{}\n", inline));
    }
    out.push_str("}\n");
    let n_fields = r.gen_range(1..4);
    for b in 1..n_fields {
        let uses: Vec<String> = (0..n_trails)
            .filter(|_| r.gen_bool(0.4))
            .map(|t| format!("T{t}"))
            .collect();
        let body = if uses.is_empty() {
            String::new()
        } else {
            format!("use {}", uses.join(", "))
        };
        out.push_str(&format!("basefield B{b} extends B{} {{ {body} }}\n", b - 1));
    }
    let n_wp = r.gen_range(2..8);
    for w in 0..n_wp {
        out.push_str(&format!("waypoint W{w}: {}", statements(r)));
        if r.gen_bool(0.3) {
            out.push_str(&format!(" display {}", quoted(&statement(r))));
        }
        out.push('\n');
    }
    let mut routeways: Vec<(String, usize, usize, usize)> = Vec::new();
    for g in 0..r.gen_range(0..4) {
        let len = r.gen_range(0..5);
        let mut pts = vec![r.gen_range(0..n_wp)];
        let mut body = String::new();
        let mut open = false;
        for _ in 0..len {
            let from = if !open || r.gen_bool(0.85) {
                *pts.last().unwrap()
            } else {
                r.gen_range(0..n_wp)
            };
            if !open || from != *pts.last().unwrap() {
                body.push_str(&format!("\n  W{from}"));
                open = true;
            }
            let to = r.gen_range(0..n_wp);
            let arrow = if r.gen_bool(0.1) {
                "=>".to_string()
            } else {
                let t = r.gen_range(0..n_trails);
                let open_tok = if r.gen_bool(0.2) { "<=[" } else { "=[" };
                let binds: Vec<String> = params[t]
                    .iter()
                    .map(|p| format!("{p}=:{}", term(r)))
                    .collect();
                let with = if binds.is_empty() || r.gen_bool(0.15) {
                    String::new()
                } else {
                    format!(" with {}", binds.join(", "))
                };
                format!("{open_tok}T{t}{with}]=>")
            };
            body.push_str(&format!(" {arrow} W{to}"));
            pts.push(to);
        }
        let (start, end) = (pts[0], *pts.last().unwrap());
        let endpoints = if len == 0 || r.gen_bool(0.3) {
            format!(" from W{start} to W{end}")
        } else {
            String::new()
        };
        let ps = if r.gen_bool(0.3) { " params (k)" } else { "" };
        let b = r.gen_range(0..n_fields);
        out.push_str(&format!(
            "routeway g{g} in B{b}{endpoints}{ps} {{{body}\n}}\n"
        ));
        routeways.push((format!("g{g}"), start, end, len));
    }
    for (i, (g, s, e, _)) in routeways.iter().enumerate() {
        if r.gen_bool(0.5) {
            out.push_str(&format!("roadmap R{i} from W{s} to W{e} {{ {g} }}\n"));
            if r.gen_bool(0.5) {
                out.push_str(&format!("atlas X{i} targets (W{e}, W{s}) {{ R{i} }}\n"));
            }
        }
    }
    if r.gen_bool(0.5) {
        let fs: Vec<String> = (0..n_fields).map(|b| format!("B{b}")).collect();
        out.push_str(&format!("filtration F {{ {} }}\n", fs.join(", ")));
    }
    for (g, _, _, len) in &routeways {
        if *len > 0 && r.gen_bool(0.4) {
            out.push_str(&format!(
                "compass {g}[{}]: {}\n",
                r.gen_range(1..=*len),
                quoted(&statement(r))
            ));
        }
    }
    out
}

/// `src` with a few random character-level edits.
pub fn mutate(src: &str, r: &mut impl Rng) -> String {
    const ALPHABET: &[char] = &[
        '{', '}', '(', ')', '[', ']', '=', '<', '>', ':', ',', '"', '\\', '#', '\n', ' ', '-', '.',
        '1', 'a', '_', 'é',
    ];
    const WORDS: &[&str] = &[
        "trail ",
        "basefield ",
        "extends ",
        "use ",
        "waypoint ",
        "display ",
        "routeway ",
        " in ",
        " from ",
        " to ",
        "params ",
        "hypotheses ",
        "premise ",
        "conclusion ",
        "roadmap ",
        "atlas ",
        "targets ",
        "filtration ",
        "compass ",
        "with ",
        "=[",
        "]=>",
        "<=[",
        "=>",
        "=:",
        "version 2",
        "version 1",
    ];
    let mut chars: Vec<char> = src.chars().collect();
    for _ in 0..r.gen_range(1..=4) {
        let at = r.gen_range(0..=chars.len());
        match r.gen_range(0..5) {
            0 => chars.insert(at, *ALPHABET.choose(r).unwrap()),
            1 if at < chars.len() => {
                let end = (at + r.gen_range(1..8)).min(chars.len());
                chars.drain(at..end);
            }
            2 => {
                let w: Vec<char> = WORDS.choose(r).unwrap().chars().collect();
                chars.splice(at..at, w);
            }
            3 if !chars.is_empty() => {
                let from = r.gen_range(0..chars.len());
                let end = (from + r.gen_range(1..20)).min(chars.len());
                let piece: Vec<char> = chars[from..end].to_vec();
                chars.splice(at..at, piece);
            }
            _ if at < chars.len() => chars[at] = *ALPHABET.choose(r).unwrap(),
            _ => {}
        }
    }
    chars.into_iter().collect()
}
