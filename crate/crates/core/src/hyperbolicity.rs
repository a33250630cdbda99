//! Thin triangles, window estimates of δ, and the constants derived from it.

use num_rational::Ratio;
use serde::Serialize;

use crate::digraph::{BallSide, DiGraph, DirectedPath, Vertex};
use crate::error::{Error, Result};
use crate::exec::par_map;

const INF: u32 = u32::MAX;

/// Endpoint index pairs joined by the three side slots.
pub const SLOT_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

/// Three endpoints and one geodesic side per endpoint pair.
///
/// Side `k` joins the endpoints in `SLOT_PAIRS[k]`, in either direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicTriangle {
    endpoints: [Vertex; 3],
    sides: [DirectedPath; 3],
}

impl GeodesicTriangle {
    pub fn new(d: &DiGraph, endpoints: [Vertex; 3], sides: [DirectedPath; 3]) -> Result<Self> {
        for (k, side) in sides.iter().enumerate() {
            d.check_path(side)?;
            let (a, b) = SLOT_PAIRS[k];
            let (ea, eb) = (endpoints[a], endpoints[b]);
            let ends = (side.first(), side.last());
            if ends != (ea, eb) && ends != (eb, ea) {
                return Err(Error::InvalidParam(format!(
                    "side {k} must join {} and {}",
                    d.name(ea),
                    d.name(eb)
                )));
            }
            if !d.is_geodesic(side) {
                return Err(Error::NotGeodesic(format!(
                    "triangle side {} -> {}",
                    d.name(side.first()),
                    d.name(side.last())
                )));
            }
        }
        Ok(GeodesicTriangle { endpoints, sides })
    }

    pub fn endpoints(&self) -> [Vertex; 3] {
        self.endpoints
    }

    pub fn sides(&self) -> &[DirectedPath; 3] {
        &self.sides
    }
}

/// Which side plays `P`, `Q` and `R` in the containment `P ⊆ B⁺_δ(Q) ∪ B⁻_δ(R)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Labeling {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThinnessReport {
    pub delta_required: u32,
    pub worst_labeling: Labeling,
    pub worst_vertex: Vertex,
}

/// The labelings allowed for a triangle whose sides have the given endpoints.
///
/// `P` must start at an endpoint of `Q` and end at an endpoint of `R`.
fn admissible(ends: &[(Vertex, Vertex); 3]) -> Vec<Labeling> {
    let mut out = Vec::new();
    for p in 0..3 {
        let (j, k) = match p {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for (q, r) in [(j, k), (k, j)] {
            let (s, e) = ends[p];
            let touches = |i: usize, v: Vertex| ends[i].0 == v || ends[i].1 == v;
            if touches(q, s) && touches(r, e) {
                out.push(Labeling { p, q, r });
            }
        }
    }
    out
}

/// Per-vertex cost `min(d(Q, p), d(p, R))`.
fn vertex_cost(d: &DiGraph, p: Vertex, q: &DirectedPath, r: &DirectedPath) -> u32 {
    let dist = d.distances();
    let from_q = q.vertices().iter().map(|&x| dist.raw(x, p)).min().unwrap_or(INF);
    let to_r = r.vertices().iter().map(|&x| dist.raw(p, x)).min().unwrap_or(INF);
    from_q.min(to_r)
}

/// Smallest δ for which the triangle is δ-thin, over every admissible labeling.
pub fn triangle_thinness(d: &DiGraph, t: &GeodesicTriangle) -> Result<ThinnessReport> {
    for side in &t.sides {
        if !d.is_geodesic(side) {
            return Err(Error::NotGeodesic(format!(
                "triangle side {} -> {}",
                d.name(side.first()),
                d.name(side.last())
            )));
        }
    }
    let ends = [0, 1, 2].map(|k| (t.sides[k].first(), t.sides[k].last()));
    let labelings = admissible(&ends);
    let first = labelings.first().copied().unwrap_or(Labeling { p: 0, q: 1, r: 2 });
    let mut report = ThinnessReport {
        delta_required: 0,
        worst_labeling: first,
        worst_vertex: t.sides[first.p].first(),
    };
    for lab in labelings {
        let (p, q, r) = (&t.sides[lab.p], &t.sides[lab.q], &t.sides[lab.r]);
        for &v in p.vertices() {
            let c = vertex_cost(d, v, q, r);
            if c > report.delta_required {
                report = ThinnessReport {
                    delta_required: c,
                    worst_labeling: lab,
                    worst_vertex: v,
                };
            }
        }
    }
    Ok(report)
}

/// Windowed lower bound for δ.
#[derive(Clone, Debug)]
pub struct DeltaEstimate {
    pub delta_hat: u32,
    pub radius: u32,
    pub cap: usize,
    pub rooted: bool,
    /// Endpoints considered, i.e. `|B⁺_radius(o)|`.
    pub endpoint_count: usize,
    /// Ordered endpoint pairs whose geodesic list was cut at `cap`.
    pub truncated_pairs: usize,
    /// A triangle realizing `delta_hat`, with its thinness re-computed.
    pub witness: Option<(GeodesicTriangle, ThinnessReport)>,
}

/// Geodesics joining one unordered endpoint pair, with their distance profiles.
struct PairSides {
    /// `dirs[0]`: lower → higher ball index; `dirs[1]`: the reverse.
    dirs: [Vec<DirectedPath>; 2],
    /// Union of vertices over `dirs[k]`, in vertex order.
    support: [Vec<Vertex>; 2],
    /// `a[p] = max over sides S of min_{s∈S} d(s, p)`.
    a: Vec<u32>,
    /// `b[p] = max over sides S of min_{s∈S} d(p, s)`.
    b: Vec<u32>,
    truncated: usize,
}

impl PairSides {
    fn is_empty(&self) -> bool {
        self.dirs[0].is_empty() && self.dirs[1].is_empty()
    }

    fn all_sides(&self) -> impl Iterator<Item = &DirectedPath> {
        self.dirs[0].iter().chain(self.dirs[1].iter())
    }
}

fn pair_sides(d: &DiGraph, u: Vertex, v: Vertex, cap: usize) -> PairSides {
    let n = d.len();
    let dist = d.distances();
    let mut truncated = 0;
    let dirs: [Vec<DirectedPath>; 2] = if u == v {
        [vec![DirectedPath::trivial(u)], Vec::new()]
    } else {
        let mut fetch = |a: Vertex, b: Vertex| {
            let g = d.geodesics(a, b, cap).expect("ball vertices are valid");
            if g.truncated {
                truncated += 1;
            }
            g.paths
        };
        [fetch(u, v), fetch(v, u)]
    };
    let support = [0, 1].map(|k| {
        let mut s: Vec<Vertex> = dirs[k].iter().flat_map(|p| p.vertices().iter().copied()).collect();
        s.sort_unstable();
        s.dedup();
        s
    });
    let mut a = vec![0u32; n];
    let mut b = vec![0u32; n];
    let mut from_side = vec![INF; n];
    let mut to_side = vec![INF; n];
    for side in dirs.iter().flatten() {
        from_side.fill(INF);
        to_side.fill(INF);
        for &s in side.vertices() {
            let row = dist.row(s);
            for p in 0..n {
                from_side[p] = from_side[p].min(row[p]);
                to_side[p] = to_side[p].min(dist.raw(Vertex::from_index(p), s));
            }
        }
        for p in 0..n {
            a[p] = a[p].max(from_side[p]);
            b[p] = b[p].max(to_side[p]);
        }
    }
    PairSides {
        dirs,
        support,
        a,
        b,
        truncated,
    }
}

/// Lexicographic position of a candidate worst vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    x: usize,
    y: usize,
    z: usize,
    slot: usize,
    dir: usize,
    lab: usize,
    p: Vertex,
}

/// Max thinness over all geodesic triangles with endpoints in `B⁺_radius(o)`.
///
/// At most `cap` geodesics are enumerated per ordered endpoint pair, so the
/// value is a lower bound even for the window itself once caps bite. The
/// triangles are never materialized: for a fixed side `P` and labeling, the
/// worst choice of `Q` and `R` can be taken independently per vertex of `P`.
pub fn delta_estimate(d: &DiGraph, o: Vertex, radius: u32, cap: usize) -> Result<DeltaEstimate> {
    if cap == 0 {
        return Err(Error::InvalidParam("geodesic cap must be at least 1".into()));
    }
    let rooted = d.verify_root(o)?.rooted;
    let ball = d.ball(o, radius, BallSide::Out)?;
    let m = ball.len();
    let pair_index = |i: usize, j: usize| i * m + j;
    let pairs_flat: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let computed = par_map(&pairs_flat, |&(i, j)| pair_sides(d, ball[i], ball[j], cap));
    let mut table: Vec<Option<PairSides>> = (0..m * m).map(|_| None).collect();
    let mut truncated_pairs = 0;
    for (&(i, j), ps) in pairs_flat.iter().zip(computed) {
        truncated_pairs += ps.truncated;
        table[pair_index(i, j)] = Some(ps);
    }
    let pair = |i: usize, j: usize| table[pair_index(i, j)].as_ref().expect("i <= j");

    let xs: Vec<usize> = (0..m).collect();
    let per_x = par_map(&xs, |&x| {
        let mut best: Option<(u32, Key)> = None;
        for y in x..m {
            for z in y..m {
                let e = [x, y, z];
                let slots = SLOT_PAIRS.map(|(a, b)| pair(e[a], e[b]));
                if slots.iter().any(|s| s.is_empty()) {
                    continue;
                }
                let slot_ends = SLOT_PAIRS.map(|(a, b)| (ball[e[a]], ball[e[b]]));
                for slot in 0..3 {
                    for dir in 0..2 {
                        if slots[slot].dirs[dir].is_empty() {
                            continue;
                        }
                        let mut ends = slot_ends;
                        if dir == 1 {
                            ends[slot] = (slot_ends[slot].1, slot_ends[slot].0);
                        }
                        let labs: Vec<Labeling> = admissible(&ends).into_iter().filter(|l| l.p == slot).collect();
                        for (li, lab) in labs.iter().enumerate() {
                            let (qa, rb) = (&slots[lab.q].a, &slots[lab.r].b);
                            for &p in &slots[slot].support[dir] {
                                let val = qa[p.index()].min(rb[p.index()]);
                                if best.map_or(true, |(bv, _)| val > bv) {
                                    best = Some((
                                        val,
                                        Key {
                                            x,
                                            y,
                                            z,
                                            slot,
                                            dir,
                                            lab: li,
                                            p,
                                        },
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        best
    });
    let mut best: Option<(u32, Key)> = None;
    for cand in per_x.into_iter().flatten() {
        if best.map_or(true, |(bv, _)| cand.0 > bv) {
            best = Some(cand);
        }
    }

    let witness = match best {
        None => None,
        Some((val, key)) => {
            let e = [key.x, key.y, key.z];
            let slots = SLOT_PAIRS.map(|(a, b)| pair(e[a], e[b]));
            let mut slot_ends = SLOT_PAIRS.map(|(a, b)| (ball[e[a]], ball[e[b]]));
            if key.dir == 1 {
                slot_ends[key.slot] = (slot_ends[key.slot].1, slot_ends[key.slot].0);
            }
            let lab = admissible(&slot_ends).into_iter().filter(|l| l.p == key.slot).nth(key.lab).expect("labeling recorded");
            let dist = d.distances();
            let p_side = slots[key.slot].dirs[key.dir].iter().find(|s| s.contains(key.p)).expect("support vertex lies on a side").clone();
            let argmax = |ps: &PairSides, score: &dyn Fn(&DirectedPath) -> u32| {
                let mut chosen: Option<(&DirectedPath, u32)> = None;
                for s in ps.all_sides() {
                    let v = score(s);
                    if chosen.map_or(true, |(_, cv)| v > cv) {
                        chosen = Some((s, v));
                    }
                }
                chosen.expect("non-empty pair").0.clone()
            };
            let q_side = argmax(slots[lab.q], &|s| s.vertices().iter().map(|&w| dist.raw(w, key.p)).min().unwrap_or(INF));
            let r_side = argmax(slots[lab.r], &|s| s.vertices().iter().map(|&w| dist.raw(key.p, w)).min().unwrap_or(INF));
            let mut sides: [Option<DirectedPath>; 3] = [None, None, None];
            sides[lab.p] = Some(p_side);
            sides[lab.q] = Some(q_side);
            sides[lab.r] = Some(r_side);
            let sides = sides.map(|s| s.expect("each slot filled once"));
            let tri = GeodesicTriangle::new(d, e.map(|i| ball[i]), sides)?;
            let report = triangle_thinness(d, &tri)?;
            debug_assert_eq!(report.delta_required, val);
            Some((tri, report))
        }
    };

    Ok(DeltaEstimate {
        delta_hat: best.map_or(0, |(v, _)| v),
        radius,
        cap,
        rooted,
        endpoint_count: m,
        truncated_pairs,
        witness,
    })
}

/// Constants derived from δ and the bounded-ball function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constants {
    #[serde(rename = "delta_hat")]
    pub delta: u64,
    /// `phi_table[r]` for `r = 0..=delta+1`.
    #[serde(rename = "phi_hat")]
    pub phi_table: Vec<u64>,
    pub lambda_fellow: u64,
    #[serde(rename = "kappa")]
    pub kappa_projectivity: u64,
    pub n_ball_bound: u64,
}

/// Radius used for the ball-size bound `N`: `(2δ+1)φ(δ+1)+2δ`.
pub fn orbit_ball_radius(delta: u64, phi1: u64) -> u64 {
    (2 * delta + 1) * phi1 + 2 * delta
}

pub fn lambda_fellow(delta: u64, phi1: u64) -> u64 {
    6 * delta + 2 * delta * phi1
}

pub fn kappa_projectivity(delta: u64, phi1: u64) -> u64 {
    (12 * delta + 4 * delta * phi1 + 1) * phi1
}

impl Constants {
    /// Measures φ̂ on the window and derives every constant from `delta`.
    pub fn from_window(d: &DiGraph, delta: u32) -> Self {
        let phi_table: Vec<u64> = d.phi_table(delta + 1).into_iter().map(u64::from).collect();
        let phi1 = phi_table[delta as usize + 1];
        let radius = orbit_ball_radius(delta as u64, phi1).min(u32::MAX as u64) as u32;
        let verts: Vec<Vertex> = d.vertices().collect();
        let sizes = par_map(&verts, |&u| d.two_sided_ball(u, radius).len() as u64);
        let n_ball_bound = sizes.into_iter().max().unwrap_or(1).max(1);
        Self::from_parts(delta as u64, phi_table, n_ball_bound)
    }

    pub fn from_parts(delta: u64, phi_table: Vec<u64>, n_ball_bound: u64) -> Self {
        let phi1 = phi_table.get(delta as usize + 1).copied().unwrap_or(0);
        Constants {
            delta,
            lambda_fellow: lambda_fellow(delta, phi1),
            kappa_projectivity: kappa_projectivity(delta, phi1),
            phi_table,
            n_ball_bound,
        }
    }

    /// `φ̂(δ+1)`.
    pub fn phi_delta_plus_1(&self) -> u64 {
        self.phi_table.get(self.delta as usize + 1).copied().unwrap_or(0)
    }

    /// True when the derived fields match their formulas.
    pub fn is_consistent(&self) -> bool {
        let phi1 = self.phi_delta_plus_1();
        self.phi_table.len() == self.delta as usize + 2
            && self.lambda_fellow == lambda_fellow(self.delta, phi1)
            && self.kappa_projectivity == kappa_projectivity(self.delta, phi1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FellowReport {
    pub holds: bool,
    pub lambda: u64,
    /// First vertex of `R` too far from `P ∪ Q`, and on which side.
    pub violation: Option<(Vertex, BallSide)>,
}

fn require_geodesic(d: &DiGraph, p: &DirectedPath, from: Vertex, to: Vertex, what: &str) -> Result<()> {
    d.check_path(p)?;
    if p.first() != from || p.last() != to || !d.is_geodesic(p) {
        return Err(Error::NotGeodesic(format!("{what} must be a {}-{} geodesic", d.name(from), d.name(to))));
    }
    Ok(())
}

/// Checks that an `x`–`z` geodesic stays within `lambda_fellow` of `P ∪ Q` on both sides.
#[allow(clippy::too_many_arguments)]
pub fn fellow_travel_check(
    d: &DiGraph,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    p: &DirectedPath,
    q: &DirectedPath,
    r: &DirectedPath,
    consts: &Constants,
) -> Result<FellowReport> {
    require_geodesic(d, p, x, y, "P")?;
    require_geodesic(d, q, y, z, "Q")?;
    require_geodesic(d, r, x, z, "R")?;
    let lambda = consts.lambda_fellow;
    let union: Vec<Vertex> = p.vertices().iter().chain(q.vertices()).copied().collect();
    let out = d.bfs_from_set(&union, BallSide::Out);
    let inn = d.bfs_from_set(&union, BallSide::In);
    let within = |v: u32| v != INF && u64::from(v) <= lambda;
    let mut violation = None;
    for &w in r.vertices() {
        if !within(out[w.index()]) {
            violation = Some((w, BallSide::Out));
            break;
        }
        if !within(inn[w.index()]) {
            violation = Some((w, BallSide::In));
            break;
        }
    }
    Ok(FellowReport {
        holds: violation.is_none(),
        lambda,
        violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiGeodesicReport {
    pub holds: bool,
    /// Positions `(i, j)` on the path of the first violating pair.
    pub violation: Option<(usize, usize)>,
    pub pairs_checked: usize,
}

/// Checks `d_P(u, v) ≤ γ·d(u, v) + slack` for every `u` before `v` on `P`.
///
/// Pairs with infinite graph distance hold vacuously.
pub fn quasi_geodesic_check(d: &DiGraph, p: &DirectedPath, gamma: Ratio<u64>, slack: u64) -> Result<QuasiGeodesicReport> {
    d.check_path(p)?;
    if gamma < Ratio::from_integer(1) {
        return Err(Error::InvalidParam("gamma must be at least 1".into()));
    }
    let dist = d.distances();
    let (num, den) = (u128::from(*gamma.numer()), u128::from(*gamma.denom()));
    let vs = p.vertices();
    let mut pairs_checked = 0;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let dd = dist.raw(vs[i], vs[j]);
            if dd == INF {
                continue;
            }
            pairs_checked += 1;
            let along = (j - i) as u128;
            if along * den > num * u128::from(dd) + u128::from(slack) * den {
                return Ok(QuasiGeodesicReport {
                    holds: false,
                    violation: Some((i, j)),
                    pairs_checked,
                });
            }
        }
    }
    Ok(QuasiGeodesicReport {
        holds: true,
        violation: None,
        pairs_checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceInequalityReport {
    /// `φ̂(δ+1)` used for both bounds.
    pub factor: u64,
    /// The second bound is stated with an unnamed function of δ; `factor`
    /// stands in for it.
    pub f_substituted: bool,
    pub triples_checked: usize,
    pub triangle_violation: Option<[Vertex; 3]>,
    pub pairs_checked: usize,
    pub reverse_violation: Option<[Vertex; 2]>,
}

/// Checks the two distance inequalities for hyperbolic digraphs on `verts`:
/// `d(x,y) ≤ (d(x,z)+d(y,z))·φ(δ+1)` for distinct triples with all six
/// distances finite, and `d(x,y) ≤ (d(y,x)+1)·φ(δ+1)` when both are finite.
pub fn distance_inequalities(d: &DiGraph, verts: &[Vertex], consts: &Constants) -> DistanceInequalityReport {
    let dist = d.distances();
    let factor = consts.phi_delta_plus_1();
    let fin = |a: Vertex, b: Vertex| {
        let v = dist.raw(a, b);
        (v != INF).then_some(u64::from(v))
    };
    let mut report = DistanceInequalityReport {
        factor,
        f_substituted: true,
        triples_checked: 0,
        triangle_violation: None,
        pairs_checked: 0,
        reverse_violation: None,
    };
    for &x in verts {
        for &y in verts {
            if x == y {
                continue;
            }
            if let (Some(xy), Some(yx)) = (fin(x, y), fin(y, x)) {
                report.pairs_checked += 1;
                if xy > (yx + 1) * factor && report.reverse_violation.is_none() {
                    report.reverse_violation = Some([x, y]);
                }
                for &z in verts {
                    if z == x || z == y {
                        continue;
                    }
                    let (Some(xz), Some(zx), Some(yz), Some(zy)) = (fin(x, z), fin(z, x), fin(y, z), fin(z, y)) else {
                        continue;
                    };
                    let _ = (zx, zy);
                    report.triples_checked += 1;
                    if xy > (xz + yz) * factor && report.triangle_violation.is_none() {
                        report.triangle_violation = Some([x, y, z]);
                    }
                }
            }
        }
    }
    report
}
