//! Parameterized fixtures: calibration shapes and the example digraphs,
//! each with a canonical root, named self-embeddings and named rays.

use std::collections::{BTreeMap, BTreeSet};

use crate::digraph::{DiGraph, Vertex};
use crate::embedding::PartialSelfEmbedding;
use crate::error::{Error, Result};
use crate::rays::{RayKind, RayPrefix};

/// Catalog usage text, one line per entry.
pub const CATALOG: &str = "\
path n=10                 directed path x0 -> ... -> xn; map shift
cycle n=3                 directed cycle c0 -> ... -> c(n-1) -> c0; map rotate
out_tree k=2 depth=4      out-tree over k letters (free monoid ball); maps left_<letter>
grid n=4                  (i,j) with i+j <= n, edges +a and +b; maps shift_a, shift_b
bidirected_tree degree=3 depth=4  tree with antiparallel edges; map identity
ex_counter depth=12       ray with two rays per spine vertex, linked from index 2 on; map shift
ex_shift n=2 depth=5      ray plus n double rays with K4 gadgets; map shift
ex_directions depth=8 I=1,4,9,...  branching rays at indices in I; maps g<i>
graph_ends n=3 depth=5    antiparallel ray plus n-1 double rays; map shift";

const NAMES: [&str; 9] = [
    "path",
    "cycle",
    "out_tree",
    "grid",
    "bidirected_tree",
    "ex_counter",
    "ex_shift",
    "ex_directions",
    "graph_ends",
];

/// Upper bound on fixture size, to catch parameter typos early.
const MAX_VERTICES: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureSpec {
    pub name: String,
    pub params: BTreeMap<String, u64>,
    /// Index set for `ex_directions`; squares when absent.
    pub index_set: Option<Vec<u64>>,
}

impl FixtureSpec {
    pub fn new(name: &str) -> Self {
        FixtureSpec {
            name: name.to_owned(),
            params: BTreeMap::new(),
            index_set: None,
        }
    }

    pub fn with(mut self, key: &str, value: u64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    pub fn with_index_set(mut self, set: Vec<u64>) -> Self {
        self.index_set = Some(set);
        self
    }

    /// Builds a spec from `key=value` strings; `I=1,4,9` sets the index set.
    pub fn parse(name: &str, assignments: &[String]) -> Result<Self> {
        let mut spec = FixtureSpec::new(name);
        for a in assignments {
            let (k, v) = a.split_once('=').ok_or_else(|| usage(&format!("parameter `{a}` is not key=value")))?;
            if k == "I" {
                let set = v
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.trim().parse::<u64>().map_err(|_| usage(&format!("bad index `{s}`"))))
                    .collect::<Result<Vec<_>>>()?;
                spec.index_set = Some(set);
            } else {
                let v = v.parse::<u64>().map_err(|_| usage(&format!("parameter {k} needs a non-negative integer")))?;
                spec.params.insert(k.to_owned(), v);
            }
        }
        Ok(spec)
    }

    fn take(&self, allowed: &[(&str, u64)]) -> Result<Vec<u64>> {
        for k in self.params.keys() {
            if !allowed.iter().any(|(a, _)| a == k) {
                return Err(usage(&format!("{} does not take parameter `{k}`", self.name)));
            }
        }
        Ok(allowed.iter().map(|(k, def)| self.params.get(*k).copied().unwrap_or(*def)).collect())
    }
}

fn usage(msg: &str) -> Error {
    Error::InvalidParam(format!("{msg}\ncatalog:\n{CATALOG}"))
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg))
    }
}

/// A generated window with its canonical root, maps and rays.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub spec: FixtureSpec,
    pub graph: DiGraph,
    pub root: Vertex,
    pub maps: BTreeMap<String, PartialSelfEmbedding>,
    pub rays: BTreeMap<String, RayPrefix>,
}

impl Fixture {
    pub fn v(&self, name: &str) -> Vertex {
        self.graph.vertex(name).unwrap_or_else(|_| panic!("fixture has no vertex {name}"))
    }

    pub fn map(&self, name: &str) -> &PartialSelfEmbedding {
        &self.maps[name]
    }

    pub fn ray(&self, name: &str) -> &RayPrefix {
        &self.rays[name]
    }
}

pub fn catalog_names() -> &'static [&'static str] {
    &NAMES
}

pub fn make_fixture(spec: &FixtureSpec) -> Result<Fixture> {
    if spec.index_set.is_some() && spec.name != "ex_directions" {
        return Err(usage(&format!("{} does not take an index set", spec.name)));
    }
    let mut fx = match spec.name.as_str() {
        "path" => {
            let p = spec.take(&[("n", 10)])?;
            path(p[0])?
        }
        "cycle" => {
            let p = spec.take(&[("n", 3)])?;
            cycle(p[0])?
        }
        "out_tree" => {
            let p = spec.take(&[("k", 2), ("depth", 4)])?;
            out_tree(p[0], p[1])?
        }
        "grid" => {
            let p = spec.take(&[("n", 4)])?;
            grid(p[0])?
        }
        "bidirected_tree" => {
            let p = spec.take(&[("degree", 3), ("depth", 4)])?;
            bidirected_tree(p[0], p[1])?
        }
        "ex_counter" => {
            let p = spec.take(&[("depth", 12)])?;
            ex_counter(p[0])?
        }
        "ex_shift" => {
            let p = spec.take(&[("n", 2), ("depth", 5)])?;
            ex_shift(p[0], p[1])?
        }
        "ex_directions" => {
            let p = spec.take(&[("depth", 8)])?;
            let set = match &spec.index_set {
                Some(s) => s.clone(),
                None => (1..).map(|k: u64| k * k).take_while(|&s| s <= p[0]).collect(),
            };
            ex_directions(&set, p[0])?
        }
        "graph_ends" => {
            let p = spec.take(&[("n", 3), ("depth", 5)])?;
            graph_ends(p[0], p[1])?
        }
        other => return Err(usage(&format!("unknown fixture `{other}`"))),
    };
    fx.spec = spec.clone();
    Ok(fx)
}

struct Builder {
    d: DiGraph,
}

impl Builder {
    fn new() -> Self {
        Builder { d: DiGraph::new() }
    }

    fn v(&mut self, name: impl Into<String>) -> Vertex {
        self.d.add_vertex(name).expect("generated ids are valid")
    }

    fn e(&mut self, a: Vertex, b: Vertex) {
        self.d.add_edge(a, b).expect("generated edges are distinct");
    }

    fn both(&mut self, a: Vertex, b: Vertex) {
        self.e(a, b);
        self.e(b, a);
    }

    fn finish(mut self, spec: FixtureSpec, root: Vertex, frontier: impl IntoIterator<Item = Vertex>, note: String) -> Fixture {
        self.d.set_root(root).expect("root exists");
        for f in frontier {
            self.d.mark_frontier(f).expect("frontier exists");
        }
        self.d.set_window_note(note);
        Fixture {
            spec,
            graph: self.d,
            root,
            maps: BTreeMap::new(),
            rays: BTreeMap::new(),
        }
    }
}

/// Map given by a partial function on vertex ids; vertices it sends outside
/// the window are recorded as trimmed.
fn name_map(d: &DiGraph, base: Vertex, f: impl Fn(&str) -> Option<String>) -> PartialSelfEmbedding {
    let mut pairs = Vec::new();
    let mut trimmed = Vec::new();
    for v in d.vertices() {
        match f(d.name(v)).and_then(|n| d.vertex(&n).ok()) {
            Some(w) => pairs.push((v, w)),
            None => trimmed.push(v),
        }
    }
    PartialSelfEmbedding::from_pairs(base, pairs).with_trimmed(trimmed)
}

fn ray(d: &DiGraph, names: &[String], kind: RayKind) -> RayPrefix {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    RayPrefix::from_names(d, &refs, kind).expect("generated rays are paths")
}

pub fn path(n: u64) -> Result<Fixture> {
    require((1..=MAX_VERTICES).contains(&n), "path needs 1 <= n")?;
    let mut b = Builder::new();
    let vs: Vec<Vertex> = (0..=n).map(|i| b.v(format!("x{i}"))).collect();
    for w in vs.windows(2) {
        b.e(w[0], w[1]);
    }
    let mut fx = b.finish(FixtureSpec::new("path").with("n", n), vs[0], [vs[n as usize]], format!("path x0..x{n} (ray truncated at depth {n})"));
    let shift = name_map(&fx.graph, vs[0], |s| {
        let i: u64 = s[1..].parse().ok()?;
        Some(format!("x{}", i + 1))
    });
    fx.maps.insert("shift".into(), shift);
    let names: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    fx.rays.insert("x".into(), ray(&fx.graph, &names, RayKind::Ray));
    Ok(fx)
}

pub fn cycle(n: u64) -> Result<Fixture> {
    require((1..=MAX_VERTICES).contains(&n), "cycle needs 1 <= n")?;
    let mut b = Builder::new();
    let vs: Vec<Vertex> = (0..n).map(|i| b.v(format!("c{i}"))).collect();
    for i in 0..n as usize {
        b.e(vs[i], vs[(i + 1) % n as usize]);
    }
    let mut fx = b.finish(FixtureSpec::new("cycle").with("n", n), vs[0], [], format!("directed cycle of length {n} (complete)"));
    let rotate = name_map(&fx.graph, vs[0], |s| {
        let i: u64 = s[1..].parse().ok()?;
        Some(format!("c{}", (i + 1) % n))
    });
    fx.maps.insert("rotate".into(), rotate);
    Ok(fx)
}

fn letters(k: u64) -> Vec<String> {
    (0..k)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

pub fn out_tree(k: u64, depth: u64) -> Result<Fixture> {
    require(k >= 1 && depth >= 1, "out_tree needs k >= 1 and depth >= 1")?;
    let size = (0..=depth).try_fold(0u64, |acc, t| k.checked_pow(t as u32).and_then(|p| acc.checked_add(p)));
    require(size.is_some_and(|s| s <= MAX_VERTICES), "out_tree is too large")?;
    let ls = letters(k);
    let sep = if k <= 26 { "" } else { "." };
    let name = |w: &[usize]| {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.iter().map(|&i| ls[i].as_str()).collect::<Vec<_>>().join(sep)
        }
    };
    let mut b = Builder::new();
    let root = b.v("1");
    let mut level: Vec<(Vec<usize>, Vertex)> = vec![(Vec::new(), root)];
    let mut all: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (w, v) in &level {
            for i in 0..k as usize {
                let mut c = w.clone();
                c.push(i);
                let cv = b.v(name(&c));
                b.e(*v, cv);
                all.push(c.clone());
                next.push((c, cv));
            }
        }
        level = next;
    }
    let frontier: Vec<Vertex> = level.iter().map(|(_, v)| *v).collect();
    let mut fx = b.finish(
        FixtureSpec::new("out_tree").with("k", k).with("depth", depth),
        root,
        frontier,
        format!("{k}-ary out-tree truncated at depth {depth}"),
    );
    for (i, l) in ls.iter().enumerate() {
        let mut pairs = Vec::new();
        let mut trimmed = Vec::new();
        for w in &all {
            let v = fx.graph.vertex(&name(w)).expect("tree vertex");
            if (w.len() as u64) < depth {
                let mut img = vec![i];
                img.extend_from_slice(w);
                pairs.push((v, fx.graph.vertex(&name(&img)).expect("image in tree")));
            } else {
                trimmed.push(v);
            }
        }
        fx.maps.insert(format!("left_{l}"), PartialSelfEmbedding::from_pairs(root, pairs).with_trimmed(trimmed));
        let spine: Vec<String> = (0..=depth as usize).map(|t| name(&vec![i; t])).collect();
        fx.rays.insert(format!("{l}_ray"), ray(&fx.graph, &spine, RayKind::Ray));
    }
    Ok(fx)
}

pub fn grid_name(i: u64, j: u64) -> String {
    format!("({i},{j})")
}

fn parse_grid(s: &str) -> Option<(u64, u64)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

pub fn grid(n: u64) -> Result<Fixture> {
    require((1..=2000).contains(&n), "grid needs 1 <= n <= 2000")?;
    let mut b = Builder::new();
    for s in 0..=n {
        for i in 0..=s {
            b.v(grid_name(i, s - i));
        }
    }
    for s in 0..n {
        for i in 0..=s {
            let j = s - i;
            let v = b.v(grid_name(i, j));
            let right = b.v(grid_name(i + 1, j));
            let up = b.v(grid_name(i, j + 1));
            b.e(v, right);
            b.e(v, up);
        }
    }
    let root = b.v(grid_name(0, 0));
    let frontier: Vec<Vertex> = (0..=n).map(|i| b.v(grid_name(i, n - i))).collect();
    let mut fx = b.finish(FixtureSpec::new("grid").with("n", n), root, frontier, format!("N x N quadrant cut at i+j <= {n}"));
    fx.maps.insert(
        "shift_a".into(),
        name_map(&fx.graph, root, |s| parse_grid(s).map(|(i, j)| grid_name(i + 1, j))),
    );
    fx.maps.insert(
        "shift_b".into(),
        name_map(&fx.graph, root, |s| parse_grid(s).map(|(i, j)| grid_name(i, j + 1))),
    );
    Ok(fx)
}

pub fn bidirected_tree(degree: u64, depth: u64) -> Result<Fixture> {
    require(degree >= 2 && depth >= 1, "bidirected_tree needs degree >= 2 and depth >= 1")?;
    let size = (1..=depth).try_fold(1u64, |acc, t| {
        degree
            .checked_mul((degree - 1).checked_pow(t as u32 - 1)?)
            .and_then(|p| acc.checked_add(p))
    });
    require(size.is_some_and(|s| s <= MAX_VERTICES), "bidirected_tree is too large")?;
    let mut b = Builder::new();
    let root = b.v("t");
    let mut level = vec![("t".to_string(), root)];
    for t in 0..depth {
        let kids = if t == 0 { degree } else { degree - 1 };
        let mut next = Vec::new();
        for (name, v) in &level {
            for c in 0..kids {
                let cn = if degree <= 10 { format!("{name}{c}") } else { format!("{name}.{c}") };
                let cv = b.v(cn.clone());
                b.both(*v, cv);
                next.push((cn, cv));
            }
        }
        level = next;
    }
    let frontier: Vec<Vertex> = level.iter().map(|(_, v)| *v).collect();
    let mut fx = b.finish(
        FixtureSpec::new("bidirected_tree").with("degree", degree).with("depth", depth),
        root,
        frontier,
        format!("{degree}-regular tree with antiparallel edges, radius {depth} around t"),
    );
    let id = PartialSelfEmbedding::identity(&fx.graph, root);
    fx.maps.insert("identity".into(), id);
    Ok(fx)
}

pub fn ex_counter(depth: u64) -> Result<Fixture> {
    require((2..=2000).contains(&depth), "ex_counter needs 2 <= depth <= 2000")?;
    let mut b = Builder::new();
    let x: Vec<Vertex> = (1..=depth).map(|i| b.v(format!("x{i}"))).collect();
    for w in x.windows(2) {
        b.e(w[0], w[1]);
    }
    let mut frontier = vec![*x.last().expect("depth >= 2")];
    for i in 1..=depth {
        let xi = x[i as usize - 1];
        let mut prev = (xi, xi);
        for j in 1..=depth {
            let a = b.v(format!("a{i}_{j}"));
            let bb = b.v(format!("b{i}_{j}"));
            b.e(prev.0, a);
            b.e(prev.1, bb);
            if i >= 2 {
                let p = b.v(format!("p{i}_{j}"));
                let q = b.v(format!("q{i}_{j}"));
                b.e(a, p);
                b.e(p, bb);
                b.e(bb, q);
                b.e(q, a);
            }
            prev = (a, bb);
        }
        frontier.push(prev.0);
        frontier.push(prev.1);
    }
    let mut fx = b.finish(
        FixtureSpec::new("ex_counter").with("depth", depth),
        x[0],
        frontier,
        format!("spine x1..x{depth}, side rays of {depth} vertices each"),
    );
    let shift = name_map(&fx.graph, x[0], |s| {
        let (head, rest) = s.split_at(1);
        let (i, j) = match rest.split_once('_') {
            Some((i, j)) => (i.parse::<u64>().ok()?, Some(j)),
            None => (rest.parse::<u64>().ok()?, None),
        };
        match j {
            Some(j) => Some(format!("{head}{}_{j}", i + 1)),
            None => Some(format!("{head}{}", i + 1)),
        }
    });
    fx.maps.insert("shift".into(), shift);
    for i in 1..=depth {
        for (label, letter) in [("R1", 'a'), ("R2", 'b')] {
            let mut names = vec![format!("x{i}")];
            names.extend((1..=depth).map(|j| format!("{letter}{i}_{j}")));
            fx.rays.insert(format!("{label}_{i}"), ray(&fx.graph, &names, RayKind::Ray));
        }
    }
    Ok(fx)
}

/// Out-degree-3 gadget attached to each double-ray vertex: the complete
/// digraph on four vertices, entered at its vertices 0 and 1.
const GADGET: usize = 4;

pub fn ex_shift(n: u64, depth: u64) -> Result<Fixture> {
    require(n >= 1 && depth >= 1 && n * (2 * depth + 1) <= MAX_VERTICES / 5, "ex_shift needs n >= 1 and depth >= 1")?;
    let d = depth as i64;
    let mut b = Builder::new();
    let x: Vec<Vertex> = (0..=depth).map(|j| b.v(format!("x{j}"))).collect();
    let y = |i: u64, j: i64| format!("y{i}_{j}");
    let z = |i: u64, j: i64, c: usize| format!("z{i}_{j}_{c}");
    for i in 1..=n {
        for j in -d..=d {
            b.v(y(i, j));
        }
    }
    for j in 0..=depth as usize {
        if j < depth as usize {
            b.e(x[j], x[j + 1]);
        }
        for i in 1..=n {
            let t = b.v(y(i, -(j as i64)));
            b.e(x[j], t);
        }
    }
    for i in 1..=n {
        for j in -d..=d {
            let yv = b.v(y(i, j));
            if j < d {
                let next = b.v(y(i, j + 1));
                b.e(yv, next);
            }
            let g: Vec<Vertex> = (0..GADGET).map(|c| b.v(z(i, j, c))).collect();
            b.e(yv, g[0]);
            b.e(yv, g[1]);
            for (a, &ga) in g.iter().enumerate() {
                for (c, &gc) in g.iter().enumerate() {
                    if a != c {
                        b.e(ga, gc);
                    }
                }
            }
        }
    }
    let mut frontier = vec![x[depth as usize]];
    for i in 1..=n {
        frontier.push(b.v(y(i, d)));
    }
    let mut fx = b.finish(
        FixtureSpec::new("ex_shift").with("n", n).with("depth", depth),
        x[0],
        frontier,
        format!("x0..x{depth}, {n} double rays y_-{depth}..y_{depth}, K4 gadgets joined at vertices 0 and 1"),
    );
    let shift = name_map(&fx.graph, x[0], |s| {
        if let Some(j) = s.strip_prefix('x') {
            return Some(format!("x{}", j.parse::<i64>().ok()? + 1));
        }
        let (kind, rest) = s.split_at(1);
        let parts: Vec<&str> = rest.split('_').collect();
        let i: u64 = parts.first()?.parse().ok()?;
        let j: i64 = parts.get(1)?.parse().ok()?;
        match kind {
            "y" => Some(y(i, j - 1)),
            "z" => Some(z(i, j - 1, parts.get(2)?.parse().ok()?)),
            _ => None,
        }
    });
    fx.maps.insert("shift".into(), shift);
    let xs: Vec<String> = (0..=depth).map(|j| format!("x{j}")).collect();
    fx.rays.insert("x".into(), ray(&fx.graph, &xs, RayKind::Ray));
    for i in 1..=n {
        let plus: Vec<String> = (0..=d).map(|j| y(i, j)).collect();
        let minus: Vec<String> = (-d..=0).map(|j| y(i, j)).collect();
        fx.rays.insert(format!("y{i}_plus"), ray(&fx.graph, &plus, RayKind::Ray));
        fx.rays.insert(format!("y{i}_minus"), ray(&fx.graph, &minus, RayKind::AntiRay));
    }
    Ok(fx)
}

/// Vertex `(p; j)`: position `j` on the ray reached through branch indices `p`.
fn dir_name(p: &[u64], j: u64) -> String {
    if p.is_empty() {
        format!("x_{j}")
    } else {
        let path: Vec<String> = p.iter().map(u64::to_string).collect();
        format!("x{}_{j}", path.join("."))
    }
}

/// Index pairs `(m, n)` for which the shifted branch pattern coincides with
/// the original on the window; such windows admit partial shifts of the
/// main ray that the full digraph does not.
pub fn shift_coincidences(index_set: &[u64], depth: u64) -> Vec<(u64, u64)> {
    let set: BTreeSet<u64> = index_set.iter().copied().filter(|&i| i <= depth).collect();
    let mut out = Vec::new();
    for m in 0..=depth {
        for n in 1..=depth - m {
            let shifted: BTreeSet<u64> = set.iter().filter(|&&i| i >= m && i + n <= depth).map(|&i| i + n).collect();
            let tail: BTreeSet<u64> = set.iter().filter(|&&i| i >= m + n).copied().collect();
            if !shifted.is_empty() && shifted == tail {
                out.push((m, n));
            }
        }
    }
    out
}

pub fn ex_directions(index_set: &[u64], depth: u64) -> Result<Fixture> {
    require((1..=64).contains(&depth), "ex_directions needs 1 <= depth <= 64")?;
    require(!index_set.contains(&0), "ex_directions needs 0 not in I")?;
    let set: BTreeSet<u64> = index_set.iter().copied().filter(|&i| i <= depth).collect();
    let mut b = Builder::new();
    let root = b.v(dir_name(&[], 0));
    // Depth-first growth keeps sibling order stable: successor first, then branch.
    let mut frontier = Vec::new();
    let mut stack: Vec<(Vec<u64>, u64, u64)> = vec![(Vec::new(), 0, 0)];
    let mut count: u64 = 0;
    while let Some((p, j, weight)) = stack.pop() {
        count += 1;
        require(count <= MAX_VERTICES, "ex_directions is too large")?;
        let v = b.v(dir_name(&p, j));
        if weight == depth {
            frontier.push(v);
            continue;
        }
        let next = b.v(dir_name(&p, j + 1));
        b.e(v, next);
        let mut children = vec![(p.clone(), j + 1, weight + 1)];
        if set.contains(&j) && !(p.is_empty() && j == 0) {
            let mut q = p.clone();
            q.push(j);
            let c = b.v(dir_name(&q, 1));
            b.e(v, c);
            children.push((q, 1, weight + 1));
        }
        for c in children.into_iter().rev() {
            stack.push(c);
        }
    }
    let coincidences = shift_coincidences(&set.iter().copied().collect::<Vec<_>>(), depth);
    let set_text: Vec<String> = set.iter().map(u64::to_string).collect();
    let mut fx = b.finish(
        FixtureSpec::new("ex_directions").with("depth", depth).with_index_set(set.iter().copied().collect()),
        root,
        frontier,
        format!(
            "branching rays, I = {{{}}}, total index weight <= {depth}; {} window shift coincidences",
            set_text.join(","),
            coincidences.len()
        ),
    );
    for &i in &set {
        let g = name_map(&fx.graph, root, |s| {
            let (head, j) = s.rsplit_once('_')?;
            let j: u64 = j.parse().ok()?;
            let p: Vec<u64> = match head.strip_prefix('x') {
                Some("") => Vec::new(),
                Some(path) => path.split('.').map(|t| t.parse().ok()).collect::<Option<Vec<u64>>>()?,
                None => return None,
            };
            if p.is_empty() && j == 0 {
                return Some(dir_name(&[], i));
            }
            let mut q = vec![i];
            q.extend(p);
            Some(dir_name(&q, j))
        });
        fx.maps.insert(format!("g{i}"), g);
    }
    let main: Vec<String> = (0..=depth).map(|j| dir_name(&[], j)).collect();
    fx.rays.insert("R".into(), ray(&fx.graph, &main, RayKind::Ray));
    Ok(fx)
}

pub fn graph_ends(n: u64, depth: u64) -> Result<Fixture> {
    require(n >= 1 && depth >= 1 && n * (2 * depth + 1) <= MAX_VERTICES, "graph_ends needs n >= 1 and depth >= 1")?;
    let d = depth as i64;
    let mut b = Builder::new();
    let x: Vec<Vertex> = (0..=depth).map(|j| b.v(format!("x{j}"))).collect();
    for w in x.windows(2) {
        b.both(w[0], w[1]);
    }
    let y = |i: u64, j: i64| format!("y{i}_{j}");
    let mut frontier = vec![x[depth as usize]];
    for i in 1..n {
        let ys: Vec<Vertex> = (-d..=d).map(|j| b.v(y(i, j))).collect();
        for w in ys.windows(2) {
            b.both(w[0], w[1]);
        }
        for j in 0..=depth as usize {
            b.both(x[j], ys[j + depth as usize]);
        }
        frontier.push(ys[0]);
        frontier.push(*ys.last().expect("non-empty"));
    }
    let mut fx = b.finish(
        FixtureSpec::new("graph_ends").with("n", n).with("depth", depth),
        x[0],
        frontier,
        format!("undirected ray x0..x{depth} with {} double rays, edges doubled", n - 1),
    );
    let shift = name_map(&fx.graph, x[0], |s| {
        if let Some(j) = s.strip_prefix('x') {
            return Some(format!("x{}", j.parse::<i64>().ok()? + 1));
        }
        let (i, j) = s.strip_prefix('y')?.split_once('_')?;
        Some(y(i.parse().ok()?, j.parse::<i64>().ok()? + 1))
    });
    fx.maps.insert("shift".into(), shift);
    let xs: Vec<String> = (0..=depth).map(|j| format!("x{j}")).collect();
    fx.rays.insert("x".into(), ray(&fx.graph, &xs, RayKind::Ray));
    for i in 1..n {
        let minus: Vec<String> = (0..=d).map(|j| y(i, -j)).collect();
        let plus: Vec<String> = (0..=d).map(|j| y(i, j)).collect();
        fx.rays.insert(format!("y{i}_minus"), ray(&fx.graph, &minus, RayKind::Ray));
        fx.rays.insert(format!("y{i}_plus"), ray(&fx.graph, &plus, RayKind::Ray));
    }
    Ok(fx)
}
