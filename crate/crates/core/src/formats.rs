//! Line-oriented text formats for digraphs, maps, rays and presentations.
//!
//! Every format skips blank lines and lines starting with `#`. Digraph files
//! accept three extension lines beyond `root` and `edge`: `vertex <id>` (fixes
//! vertex order and allows isolated vertices), `frontier <id>` and
//! `note <text>`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::digraph::{DiGraph, Vertex};
use crate::embedding::PartialSelfEmbedding;
use crate::error::{parse_err, Error, Result};
use crate::monoid::Presentation;
use crate::rays::{RayKind, RayPrefix};

/// Non-comment lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => parse_err(line, other.to_string()),
    }
}

fn lookup(d: &DiGraph, line: usize, name: &str) -> Result<Vertex> {
    d.vertex(name).map_err(|e| at_line(line, e))
}

fn args<'a>(line: usize, rest: &'a str, n: usize, what: &str) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != n {
        return Err(parse_err(line, format!("`{what}` takes {n} id(s), got {}", parts.len())));
    }
    Ok(parts)
}

pub fn parse_digraph(text: &str) -> Result<DiGraph> {
    let mut d = DiGraph::new();
    let mut seen_header = false;
    let mut root: Option<(usize, String)> = None;
    let mut frontier = Vec::new();
    for (no, l) in lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        if !seen_header {
            if kw != "digraph" || !rest.is_empty() {
                return Err(parse_err(no, "expected `digraph` header"));
            }
            seen_header = true;
            continue;
        }
        match kw {
            "root" => {
                if root.is_some() {
                    return Err(parse_err(no, "second `root` line"));
                }
                root = Some((no, args(no, rest, 1, "root")?[0].to_owned()));
            }
            "vertex" => {
                d.add_vertex(args(no, rest, 1, "vertex")?[0]).map_err(|e| at_line(no, e))?;
            }
            "edge" => {
                let a = args(no, rest, 2, "edge")?;
                d.add_edge_named(a[0], a[1]).map_err(|e| at_line(no, e))?;
            }
            "frontier" => frontier.push((no, args(no, rest, 1, "frontier")?[0].to_owned())),
            "note" => {
                let note = if d.window_note().is_empty() {
                    rest.to_owned()
                } else {
                    format!("{} {rest}", d.window_note())
                };
                d.set_window_note(note);
            }
            "digraph" => return Err(parse_err(no, "repeated `digraph` header")),
            other => return Err(parse_err(no, format!("unknown keyword `{other}`"))),
        }
    }
    if !seen_header {
        return Err(parse_err(1, "expected `digraph` header"));
    }
    if let Some((no, r)) = root {
        let v = d.add_vertex(r).map_err(|e| at_line(no, e))?;
        d.set_root(v)?;
    }
    for (no, f) in frontier {
        let v = lookup(&d, no, &f)?;
        d.mark_frontier(v)?;
    }
    Ok(d)
}

/// Writes `d` so that [`parse_digraph`] restores the same vertex indices,
/// edge order, root, frontier and note.
pub fn write_digraph(d: &DiGraph) -> String {
    let mut out = String::from("digraph\n");
    if let Some(r) = d.root() {
        let _ = writeln!(out, "root {}", d.name(r));
    }
    if !d.window_note().is_empty() {
        let _ = writeln!(out, "note {}", d.window_note().replace('\n', " "));
    }
    for v in d.vertices() {
        let _ = writeln!(out, "vertex {}", d.name(v));
    }
    for v in d.vertices() {
        for &w in d.out_neighbors(v) {
            let _ = writeln!(out, "edge {} {}", d.name(v), d.name(w));
        }
    }
    for &f in d.frontier() {
        let _ = writeln!(out, "frontier {}", d.name(f));
    }
    out
}

/// Map file: `base <id>` (defaults to the digraph root), `map <src> <dst>`
/// lines, and optional `trimmed <id>` lines.
pub fn parse_map(d: &DiGraph, text: &str) -> Result<PartialSelfEmbedding> {
    let mut base = None;
    let mut map = BTreeMap::new();
    let mut trimmed = Vec::new();
    for (no, l) in lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "base" => {
                if base.is_some() {
                    return Err(parse_err(no, "second `base` line"));
                }
                base = Some(lookup(d, no, args(no, rest, 1, "base")?[0])?);
            }
            "map" => {
                let a = args(no, rest, 2, "map")?;
                let (s, t) = (lookup(d, no, a[0])?, lookup(d, no, a[1])?);
                if map.insert(s, t).is_some() {
                    return Err(parse_err(no, format!("`{}` is mapped twice", a[0])));
                }
            }
            "trimmed" => trimmed.push(lookup(d, no, args(no, rest, 1, "trimmed")?[0])?),
            other => return Err(parse_err(no, format!("unknown keyword `{other}`"))),
        }
    }
    let base = match base {
        Some(b) => b,
        None => d.require_root()?,
    };
    Ok(PartialSelfEmbedding::new(base, map).with_trimmed(trimmed))
}

pub fn write_map(d: &DiGraph, g: &PartialSelfEmbedding) -> String {
    let mut out = format!("base {}\n", d.name(g.base()));
    for (s, t) in g.pairs() {
        let _ = writeln!(out, "map {} {}", d.name(s), d.name(t));
    }
    for &t in g.trimmed() {
        let _ = writeln!(out, "trimmed {}", d.name(t));
    }
    out
}

/// Ray file: a single `ray <kind> <id> <id> ...` line.
pub fn parse_ray(d: &DiGraph, text: &str) -> Result<RayPrefix> {
    let mut found = None;
    for (no, l) in lines(text) {
        if found.is_some() {
            return Err(parse_err(no, "a ray file holds one `ray` line"));
        }
        let mut parts = l.split_whitespace();
        if parts.next() != Some("ray") {
            return Err(parse_err(no, "expected `ray <kind> <id> ...`"));
        }
        let kind: RayKind = parts
            .next()
            .ok_or_else(|| parse_err(no, "missing ray kind"))?
            .parse()
            .map_err(|e: Error| at_line(no, e))?;
        let vs = parts.map(|n| lookup(d, no, n)).collect::<Result<Vec<_>>>()?;
        found = Some(RayPrefix::new(d, vs, kind).map_err(|e| at_line(no, e))?);
    }
    found.ok_or_else(|| parse_err(1, "no `ray` line"))
}

pub fn write_ray(d: &DiGraph, r: &RayPrefix) -> String {
    let mut out = format!("ray {}", r.kind().as_str());
    for &v in r.vertices() {
        out.push(' ');
        out.push_str(d.name(v));
    }
    out.push('\n');
    out
}

/// Presentation file: one `gens a b ...` line, then `rel <word>=<word>` lines.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut gens: Option<Vec<String>> = None;
    let mut rels: Vec<(usize, String)> = Vec::new();
    for (no, l) in lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "gens" => {
                if gens.is_some() {
                    return Err(parse_err(no, "second `gens` line"));
                }
                gens = Some(rest.split_whitespace().map(str::to_owned).collect());
            }
            "rel" => {
                if gens.is_none() {
                    return Err(parse_err(no, "`rel` before `gens`"));
                }
                rels.push((no, rest.trim().to_owned()));
            }
            other => return Err(parse_err(no, format!("unknown keyword `{other}`"))),
        }
    }
    let gens = gens.ok_or_else(|| parse_err(1, "missing `gens` line"))?;
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    let p = Presentation::free(&refs).map_err(|e| at_line(1, e))?;
    let mut parsed = Vec::new();
    for (no, r) in rels {
        let (l, rr) = r.split_once('=').ok_or_else(|| parse_err(no, "relation lacks `=`"))?;
        parsed.push((p.parse_word(l).map_err(|e| at_line(no, e))?, p.parse_word(rr).map_err(|e| at_line(no, e))?));
    }
    Presentation::new(gens, parsed)
}

pub fn write_presentation(p: &Presentation) -> String {
    let mut out = format!("gens {}\n", p.generators().join(" "));
    for (l, r) in p.relations() {
        let _ = writeln!(out, "rel {}={}", p.format_word(l), p.format_word(r));
    }
    out
}

/// A JSON array of vertex ids.
pub fn parse_vertex_set(d: &DiGraph, json: &str) -> Result<BTreeSet<Vertex>> {
    let names: Vec<String> = serde_json::from_str(json)?;
    names.iter().map(|n| d.vertex(n)).collect()
}
