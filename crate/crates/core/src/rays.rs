//! Ray and anti-ray prefixes: order, equivalence, tail containment and the
//! truncated Gromov-product surrogate behind the visual semimetric.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::digraph::{BallSide, DiGraph, ExtDistance, Vertex};
use crate::error::{Error, Result};
use crate::exec::par_map;

const INF: u32 = u32::MAX;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayKind {
    Ray,
    AntiRay,
}

impl RayKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RayKind::Ray => "ray",
            RayKind::AntiRay => "anti_ray",
        }
    }
}

impl fmt::Display for RayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ray" => Ok(RayKind::Ray),
            "anti_ray" | "anti-ray" | "antiray" => Ok(RayKind::AntiRay),
            other => Err(Error::InvalidParam(format!("unknown ray kind `{other}` (expected ray or anti_ray)"))),
        }
    }
}

/// Finite prefix of a ray, or finite suffix of an anti-ray.
///
/// Vertices are stored first-to-last in path order for both kinds, so an
/// anti-ray's sink is its last vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayPrefix {
    vertices: Vec<Vertex>,
    kind: RayKind,
    geodesic: bool,
}

impl RayPrefix {
    pub fn new(d: &DiGraph, vertices: Vec<Vertex>, kind: RayKind) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParam("ray prefix needs at least one vertex".into()));
        }
        for &v in &vertices {
            d.check(v)?;
        }
        for w in vertices.windows(2) {
            if !d.has_edge(w[0], w[1]) {
                return Err(Error::NotAPath(d.name(w[0]).to_owned(), d.name(w[1]).to_owned()));
            }
        }
        // A path is geodesic iff its end-to-end distance equals its length;
        // then every subpath is geodesic too.
        let first = vertices[0];
        let last = *vertices.last().expect("non-empty");
        let geodesic = d.distances().raw(first, last) as usize == vertices.len() - 1;
        Ok(RayPrefix { vertices, kind, geodesic })
    }

    pub fn from_names(d: &DiGraph, names: &[&str], kind: RayKind) -> Result<Self> {
        let vs = names.iter().map(|n| d.vertex(n)).collect::<Result<Vec<_>>>()?;
        Self::new(d, vs, kind)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn kind(&self) -> RayKind {
        self.kind
    }

    pub fn geodesic(&self) -> bool {
        self.geodesic
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices from index `from` on, as a prefix of the same kind.
    pub fn suffix(&self, from: usize) -> Option<RayPrefix> {
        (from < self.vertices.len()).then(|| RayPrefix {
            vertices: self.vertices[from..].to_vec(),
            kind: self.kind,
            geodesic: self.geodesic,
        })
    }

    fn revalidate(&self, d: &DiGraph) -> Result<()> {
        for &v in &self.vertices {
            d.check(v)?;
        }
        if !d.is_path(&self.vertices) {
            return Err(Error::InvalidParam("ray prefix is not a directed path in this digraph".into()));
        }
        Ok(())
    }
}

/// Window verdict for the ray order or ray equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub holds: bool,
    pub matched_count: usize,
    pub bound_m: u32,
    pub threshold_k: usize,
    /// First unmatched vertex on the failing side.
    pub witness: Option<Vertex>,
}

/// `R1 ≤ R2` on the window: at least `k` vertices of `R1` within `M` of `R2`.
///
/// Distance is measured from the `R1` vertex toward `R2`.
pub fn ray_leq_window(d: &DiGraph, r1: &RayPrefix, r2: &RayPrefix, m: u32, k: usize) -> Result<EquivalenceVerdict> {
    if k == 0 {
        return Err(Error::InvalidParam("threshold k must be at least 1".into()));
    }
    r1.revalidate(d)?;
    r2.revalidate(d)?;
    let to_r2 = d.bfs_from_set(&r2.vertices, BallSide::In);
    let mut matched = 0;
    let mut unmatched = None;
    for &v in &r1.vertices {
        if to_r2[v.index()] <= m {
            matched += 1;
        } else if unmatched.is_none() {
            unmatched = Some(v);
        }
    }
    let holds = matched >= k;
    Ok(EquivalenceVerdict {
        holds,
        matched_count: matched,
        bound_m: m,
        threshold_k: k,
        witness: if holds { None } else { unmatched },
    })
}

/// `R1 ≤ R2` and `R2 ≤ R1` on the window.
pub fn equivalence_window(d: &DiGraph, r1: &RayPrefix, r2: &RayPrefix, m: u32, k: usize) -> Result<EquivalenceVerdict> {
    let ab = ray_leq_window(d, r1, r2, m, k)?;
    let ba = ray_leq_window(d, r2, r1, m, k)?;
    let witness = if !ab.holds { ab.witness } else { ba.witness };
    Ok(EquivalenceVerdict {
        holds: ab.holds && ba.holds,
        matched_count: ab.matched_count.min(ba.matched_count),
        bound_m: m,
        threshold_k: k,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailReport {
    pub holds: bool,
    /// Earliest index of `R2` from which every vertex lies in the ball.
    pub split: Option<usize>,
    pub radius: u32,
}

/// Whether some non-empty suffix of `R2` lies in `B⁺_{6δ}(R1)`.
pub fn tail_containment(d: &DiGraph, r1: &RayPrefix, r2: &RayPrefix, delta: u32) -> Result<TailReport> {
    r1.revalidate(d)?;
    r2.revalidate(d)?;
    let radius = delta.saturating_mul(6);
    let from_r1 = d.bfs_from_set(&r1.vertices, BallSide::Out);
    let mut split = None;
    for (i, v) in r2.vertices.iter().enumerate().rev() {
        if from_r1[v.index()] <= radius {
            split = Some(i);
        } else {
            break;
        }
    }
    Ok(TailReport {
        holds: split.is_some(),
        split,
        radius,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoEstimate {
    pub value: ExtDistance,
    pub tail_from: usize,
    /// Longest input sequence length.
    pub depth: usize,
    /// Index pairs joined by at least one geodesic.
    pub pair_count: usize,
}

/// Truncated liminf of `d(o, P)` over geodesics `P` from `S1[i]` to `S2[j]`,
/// for `i, j ≥ tail_from`.
///
/// `d(o, P)` is the distance from `o` to the nearest vertex of `P`. A vertex
/// `w` lies on some `x`–`y` geodesic exactly when `d(x,w) + d(w,y) = d(x,y)`,
/// so no geodesic is enumerated. With no connecting geodesic the value is 0.
pub fn rho_truncated(d: &DiGraph, o: Vertex, s1: &[Vertex], s2: &[Vertex], tail_from: usize) -> Result<RhoEstimate> {
    d.check(o)?;
    for &v in s1.iter().chain(s2) {
        d.check(v)?;
    }
    let dist = d.distances();
    let from_o = dist.row(o);
    let n = d.len();
    let xs: Vec<Vertex> = s1.iter().skip(tail_from).copied().collect();
    let ys: Vec<Vertex> = s2.iter().skip(tail_from).copied().collect();
    let per_x = par_map(&xs, |&x| {
        let row_x = dist.row(x);
        let mut best = INF;
        let mut pairs = 0;
        for &y in &ys {
            let dxy = row_x[y.index()];
            if dxy == INF {
                continue;
            }
            pairs += 1;
            for w in 0..n {
                let w = Vertex::from_index(w);
                let (a, b) = (row_x[w.index()], dist.raw(w, y));
                if a != INF && b != INF && a + b == dxy {
                    best = best.min(from_o[w.index()]);
                }
            }
        }
        (best, pairs)
    });
    let pair_count = per_x.iter().map(|&(_, p)| p).sum();
    let best = per_x.iter().map(|&(b, _)| b).min().unwrap_or(INF);
    let value = if pair_count == 0 {
        ExtDistance::ZERO
    } else {
        ExtDistance::from_raw(best)
    };
    Ok(RhoEstimate {
        value,
        tail_from,
        depth: s1.len().max(s2.len()),
        pair_count,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct VisualInterval {
    pub lower: f64,
    pub upper: f64,
}

/// `[a^{-ρ}/C, C·a^{-ρ}]`.
pub fn visual_interval(rho: f64, a: f64, c: f64) -> Result<VisualInterval> {
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(Error::InvalidParam(format!("rho must be a finite non-negative number, got {rho}")));
    }
    if !(a.is_finite() && a > 1.0) {
        return Err(Error::InvalidParam(format!("base a must exceed 1, got {a}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParam(format!("constant C must be positive, got {c}")));
    }
    let base = a.powf(-rho);
    Ok(VisualInterval {
        lower: base / c,
        upper: base * c,
    })
}
