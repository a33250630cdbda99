//! Independent reference computations used as test oracles.
//!
//! Nothing here calls the library's distance, geodesic or ball code; the
//! digraph is read only through its adjacency lists.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use hypermono::gallery::{make_fixture, Fixture, FixtureSpec};
use hypermono::DiGraph;

pub const INF: u32 = u32::MAX;

/// Adjacency as plain index lists.
pub fn adjacency(d: &DiGraph) -> Vec<Vec<usize>> {
    d.vertices().map(|v| d.out_neighbors(v).iter().map(|w| w.index()).collect()).collect()
}

pub fn reverse(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            rev[v].push(u);
        }
    }
    rev
}

/// Queue-based BFS distances from `s` along `adj`.
pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut dist = vec![INF; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if dist[v] == INF {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

pub fn all_pairs(adj: &[Vec<usize>]) -> Vec<Vec<u32>> {
    (0..adj.len()).map(|s| bfs(adj, s)).collect()
}

/// Every simple path from `s`, by exhaustive depth-first search.
pub fn simple_paths_from(adj: &[Vec<usize>], s: usize, mut visit: impl FnMut(&[usize])) {
    fn go(adj: &[Vec<usize>], path: &mut Vec<usize>, on: &mut [bool], visit: &mut dyn FnMut(&[usize])) {
        visit(path);
        let u = *path.last().unwrap();
        for &v in &adj[u] {
            if !on[v] {
                on[v] = true;
                path.push(v);
                go(adj, path, on, visit);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; adj.len()];
    on[s] = true;
    go(adj, &mut vec![s], &mut on, &mut visit);
}

/// Shortest simple-path lengths from `s` and the set of all shortest paths
/// to each target, by exhaustive search over simple paths.
pub fn path_search(adj: &[Vec<usize>], s: usize) -> (Vec<u32>, Vec<BTreeSet<Vec<usize>>>) {
    let n = adj.len();
    let mut best = vec![INF; n];
    let mut geos: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); n];
    simple_paths_from(adj, s, |p| {
        let t = *p.last().unwrap();
        let len = (p.len() - 1) as u32;
        if len < best[t] {
            best[t] = len;
            geos[t].clear();
        }
        if len == best[t] {
            geos[t].insert(p.to_vec());
        }
    });
    (best, geos)
}

/// Vertices within `r` of `s` on the given side (`adj` or its reverse).
pub fn ball(adj: &[Vec<usize>], s: usize, r: u32) -> Vec<usize> {
    bfs(adj, s).iter().enumerate().filter(|(_, &d)| d <= r).map(|(i, _)| i).collect()
}

/// Thinness of one triangle by direct evaluation of the per-vertex cost over
/// every admissible labeling.
pub fn thinness_oracle(dist: &[Vec<u32>], sides: &[Vec<usize>; 3]) -> u32 {
    let ends = |s: &Vec<usize>| [s[0], *s.last().unwrap()];
    let mut worst = 0;
    for p in 0..3 {
        for q in 0..3 {
            for r in 0..3 {
                if p == q || q == r || p == r {
                    continue;
                }
                let (sp, sq, sr) = (&sides[p], &sides[q], &sides[r]);
                if !ends(sq).contains(&sp[0]) || !ends(sr).contains(sp.last().unwrap()) {
                    continue;
                }
                for &x in sp {
                    let from_q = sq.iter().map(|&y| dist[y][x]).min().unwrap();
                    let to_r = sr.iter().map(|&y| dist[x][y]).min().unwrap();
                    worst = worst.max(from_q.min(to_r));
                }
            }
        }
    }
    worst
}

pub fn fixture(name: &str, params: &[(&str, u64)]) -> Fixture {
    let mut spec = FixtureSpec::new(name);
    for (k, v) in params {
        spec = spec.with(k, *v);
    }
    make_fixture(&spec).unwrap()
}

/// One instance of every catalog entry small enough for exhaustive search.
pub fn small_fixtures() -> Vec<Fixture> {
    let mut out = vec![
        fixture("path", &[("n", 10)]),
        fixture("cycle", &[("n", 5)]),
        fixture("out_tree", &[("k", 2), ("depth", 4)]),
        fixture("grid", &[("n", 6)]),
        fixture("bidirected_tree", &[("degree", 3), ("depth", 3)]),
        fixture("ex_counter", &[("depth", 3)]),
        fixture("ex_shift", &[("n", 2), ("depth", 1)]),
        fixture("ex_shift", &[("n", 1), ("depth", 2)]),
        fixture("graph_ends", &[("n", 3), ("depth", 3)]),
    ];
    out.push(make_fixture(&FixtureSpec::new("ex_directions").with("depth", 5)).unwrap());
    out
}
