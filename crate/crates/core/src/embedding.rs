//! Self-embeddings on windows: verification, certificates, directions and
//! the fixed-point evidence report.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::digraph::{BallSide, DiGraph, DirectedPath, ExtDistance, Vertex};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::hyperbolicity::{quasi_geodesic_check, QuasiGeodesicReport};
use crate::rays::{equivalence_window, rho_truncated, EquivalenceVerdict, RayKind, RayPrefix, RhoEstimate};

/// Geodesics enumerated per target when building a direction.
pub const DIRECTION_GEODESIC_CAP: usize = 256;

/// Injective vertex map on a finite domain, with its base vertex.
///
/// `trimmed` lists vertices dropped from the domain because their image
/// would leave the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSelfEmbedding {
    map: BTreeMap<Vertex, Vertex>,
    base: Vertex,
    trimmed: Vec<Vertex>,
}

impl PartialSelfEmbedding {
    pub fn new(base: Vertex, map: BTreeMap<Vertex, Vertex>) -> Self {
        PartialSelfEmbedding {
            map,
            base,
            trimmed: Vec::new(),
        }
    }

    pub fn from_pairs(base: Vertex, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        Self::new(base, pairs.into_iter().collect())
    }

    pub fn identity(d: &DiGraph, base: Vertex) -> Self {
        Self::from_pairs(base, d.vertices().map(|v| (v, v)))
    }

    pub fn with_trimmed(mut self, trimmed: Vec<Vertex>) -> Self {
        self.trimmed = trimmed;
        self
    }

    pub fn apply(&self, v: Vertex) -> Option<Vertex> {
        self.map.get(&v).copied()
    }

    /// `g^k(v)`, if every step stays in the domain.
    pub fn iterate(&self, v: Vertex, k: u32) -> Option<Vertex> {
        let mut cur = v;
        for _ in 0..k {
            cur = self.apply(cur)?;
        }
        Some(cur)
    }

    pub fn domain(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.map.keys().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn trimmed(&self) -> &[Vertex] {
        &self.trimmed
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `self ∘ inner`, defined where `inner(v)` lies in `self`'s domain.
    pub fn compose(&self, inner: &PartialSelfEmbedding) -> PartialSelfEmbedding {
        let mut trimmed = inner.trimmed.clone();
        let mut map = BTreeMap::new();
        for (v, w) in inner.pairs() {
            match self.apply(w) {
                Some(x) => {
                    map.insert(v, x);
                }
                None => trimmed.push(v),
            }
        }
        trimmed.sort_unstable();
        trimmed.dedup();
        PartialSelfEmbedding {
            map,
            base: inner.base,
            trimmed,
        }
    }

    /// `g^k` for `k ≥ 1`; `k = 0` gives the identity on the domain.
    pub fn power(&self, k: u32) -> PartialSelfEmbedding {
        if k == 0 {
            return Self::from_pairs(self.base, self.domain().map(|v| (v, v)));
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = self.compose(&out);
        }
        out
    }

    /// Restriction to vertices satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(Vertex) -> bool) -> PartialSelfEmbedding {
        PartialSelfEmbedding {
            map: self.map.iter().filter(|(&v, _)| keep(v)).map(|(&a, &b)| (a, b)).collect(),
            base: self.base,
            trimmed: self.trimmed.clone(),
        }
    }

    fn check_in(&self, d: &DiGraph) -> Result<()> {
        d.check(self.base)?;
        for (a, b) in self.pairs() {
            d.check(a)?;
            d.check(b)?;
        }
        Ok(())
    }

    /// Name pairs for serialization.
    pub fn excerpt(&self, d: &DiGraph, on: impl IntoIterator<Item = Vertex>) -> Vec<(String, String)> {
        on.into_iter()
            .filter_map(|v| self.apply(v).map(|w| (d.name(v).to_owned(), d.name(w).to_owned())))
            .collect()
    }
}

/// First failing clause of [`verify_embedding`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    Injectivity { u: Vertex, v: Vertex, image: Vertex },
    EdgeLost { u: Vertex, v: Vertex },
    NonEdgeGained { u: Vertex, v: Vertex },
    DistanceChanged { u: Vertex, v: Vertex, before: ExtDistance, after: ExtDistance },
}

impl Violation {
    pub fn describe(&self, d: &DiGraph) -> String {
        let n = |v: &Vertex| d.name(*v).to_owned();
        match self {
            Violation::Injectivity { u, v, image } => format!("injectivity: {} and {} both map to {}", n(u), n(v), n(image)),
            Violation::EdgeLost { u, v } => format!("edge {} -> {} is not mapped to an edge", n(u), n(v)),
            Violation::NonEdgeGained { u, v } => format!("non-edge {} -> {} is mapped to an edge", n(u), n(v)),
            Violation::DistanceChanged { u, v, before, after } => {
                format!("distance {} -> {} changes from {before} to {after}", n(u), n(v))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCheck {
    pub ok: bool,
    pub violation: Option<Violation>,
    /// Whether the distance-preservation clause was applied.
    pub distance_clause: bool,
    pub finite_pairs_checked: usize,
}

/// Injectivity plus preservation of edges and non-edges over all domain pairs.
///
/// When every non-frontier vertex has the same out-degree, finite distances
/// between domain pairs must also be preserved exactly.
pub fn verify_embedding(d: &DiGraph, g: &PartialSelfEmbedding) -> Result<EmbeddingCheck> {
    g.check_in(d)?;
    let distance_clause = d.interior_out_degree().is_some();
    let fail = |violation, finite_pairs_checked| EmbeddingCheck {
        ok: false,
        violation: Some(violation),
        distance_clause,
        finite_pairs_checked,
    };
    let mut seen: HashMap<Vertex, Vertex> = HashMap::new();
    for (v, w) in g.pairs() {
        if let Some(&u) = seen.get(&w) {
            return Ok(fail(Violation::Injectivity { u, v, image: w }, 0));
        }
        seen.insert(w, v);
    }
    let dom: Vec<(Vertex, Vertex)> = g.pairs().collect();
    let results = par_map(&dom, |&(u, gu)| {
        let dist = d.distances();
        let mut finite = 0usize;
        for &(v, gv) in &dom {
            let e = d.has_edge(u, v);
            let ge = d.has_edge(gu, gv);
            if e && !ge {
                return (Some(Violation::EdgeLost { u, v }), finite);
            }
            if !e && ge {
                return (Some(Violation::NonEdgeGained { u, v }), finite);
            }
            if distance_clause {
                let before = dist.get(u, v);
                if before.is_finite() {
                    finite += 1;
                    let after = dist.get(gu, gv);
                    if after != before {
                        return (Some(Violation::DistanceChanged { u, v, before, after }), finite);
                    }
                }
            }
        }
        (None, finite)
    });
    let mut finite_pairs_checked = 0;
    for (violation, finite) in results {
        finite_pairs_checked += finite;
        if let Some(v) = violation {
            return Ok(fail(v, finite_pairs_checked));
        }
    }
    Ok(EmbeddingCheck {
        ok: true,
        violation: None,
        distance_clause,
        finite_pairs_checked,
    })
}

/// Evidence object; vertex data is stored by name so it can be re-checked
/// from its serialized form alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Certificate {
    /// `g^power` fixes `B⁺_r(o) ∪ B⁻_r(o)` pointwise, `r = ball_radius`.
    Elliptic {
        power: u32,
        ball_radius: u32,
        requested_radius: u32,
        base: String,
        fixed: Vec<String>,
        /// `g` on every vertex visited while iterating over the ball.
        map_excerpt: Vec<(String, String)>,
    },
    /// `o ∉ U` and `g(U ∪ {o}) ⊆ U` wherever `g` is defined on the window.
    NonEllipticTranslation {
        base: String,
        u: Vec<String>,
        map_excerpt: Vec<(String, String)>,
        /// Members of `U` whose image lies outside the window.
        unchecked: Vec<String>,
    },
    /// Ping-pong sets for two maps.
    PingPongFree {
        u: Vec<String>,
        v: Vec<String>,
        m1_excerpt: Vec<(String, String)>,
        m2_excerpt: Vec<(String, String)>,
        unchecked_m1: Vec<String>,
        unchecked_m2: Vec<String>,
    },
    Unknown {
        powers_tried: u32,
        reason: String,
    },
}

impl Certificate {
    pub fn tag(&self) -> &'static str {
        match self {
            Certificate::Elliptic { .. } => "Elliptic",
            Certificate::NonEllipticTranslation { .. } => "NonEllipticTranslation",
            Certificate::PingPongFree { .. } => "PingPongFree",
            Certificate::Unknown { .. } => "Unknown",
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Certificate::Unknown { .. })
    }

    /// Re-validates the certificate from its stored data against `d`.
    ///
    /// `Unknown` carries no claim and always re-checks.
    pub fn recheck(&self, d: &DiGraph) -> Result<bool> {
        let names = |xs: &[String]| xs.iter().map(|s| d.vertex(s)).collect::<Result<Vec<_>>>();
        let excerpt_map = |xs: &[(String, String)]| -> Result<PartialSelfEmbedding> {
            let pairs = xs.iter().map(|(a, b)| Ok((d.vertex(a)?, d.vertex(b)?))).collect::<Result<Vec<_>>>()?;
            let base = pairs.first().map(|p| p.0).unwrap_or(Vertex::from_index(0));
            Ok(PartialSelfEmbedding::from_pairs(base, pairs))
        };
        match self {
            Certificate::Elliptic {
                power,
                ball_radius,
                base,
                fixed,
                map_excerpt,
                ..
            } => {
                let o = d.vertex(base)?;
                let fixed = names(fixed)?;
                if fixed != d.two_sided_ball(o, *ball_radius) {
                    return Ok(false);
                }
                let g = excerpt_map(map_excerpt)?;
                if !verify_embedding(d, &g)?.ok {
                    return Ok(false);
                }
                Ok(*power >= 1 && fixed.iter().all(|&v| g.iterate(v, *power) == Some(v)))
            }
            Certificate::NonEllipticTranslation {
                base,
                u,
                map_excerpt,
                unchecked,
            } => {
                let o = d.vertex(base)?;
                let u: BTreeSet<Vertex> = names(u)?.into_iter().collect();
                let g = excerpt_map(map_excerpt)?;
                let unchecked: BTreeSet<Vertex> = names(unchecked)?.into_iter().collect();
                Ok(translation_holds(d, &g, o, &u)? == Some(unchecked))
            }
            Certificate::PingPongFree {
                u,
                v,
                m1_excerpt,
                m2_excerpt,
                unchecked_m1,
                unchecked_m2,
            } => {
                let u: BTreeSet<Vertex> = names(u)?.into_iter().collect();
                let v: BTreeSet<Vertex> = names(v)?.into_iter().collect();
                let m1 = excerpt_map(m1_excerpt)?;
                let m2 = excerpt_map(m2_excerpt)?;
                let both: BTreeSet<Vertex> = u.union(&v).copied().collect();
                let un1: BTreeSet<Vertex> = names(unchecked_m1)?.into_iter().collect();
                let un2: BTreeSet<Vertex> = names(unchecked_m2)?.into_iter().collect();
                let dom_ok = |m: &PartialSelfEmbedding, un: &BTreeSet<Vertex>| {
                    m.domain().all(|x| both.contains(&x)) && both.iter().filter(|x| m.apply(**x).is_none()).copied().collect::<BTreeSet<_>>() == *un
                };
                let injective = |m: &PartialSelfEmbedding| {
                    let imgs: BTreeSet<Vertex> = m.pairs().map(|p| p.1).collect();
                    imgs.len() == m.len()
                };
                Ok(u.is_disjoint(&v)
                    && dom_ok(&m1, &un1)
                    && dom_ok(&m2, &un2)
                    && injective(&m1)
                    && injective(&m2)
                    && m1.pairs().all(|(_, y)| u.contains(&y))
                    && m2.pairs().all(|(_, y)| v.contains(&y)))
            }
            Certificate::Unknown { .. } => Ok(true),
        }
    }
}

/// Largest radius `≤ requested` whose out-ball around `o` is not cut by the
/// window: no frontier vertex strictly inside it.
pub fn effective_radius(d: &DiGraph, o: Vertex, requested: u32) -> u32 {
    let dist = d.distances();
    d.frontier().iter().map(|&f| dist.raw(o, f)).fold(requested, u32::min)
}

/// Least power `≤ max_power` fixing the two-sided ball around the base pointwise.
pub fn elliptic_certificate(d: &DiGraph, g: &PartialSelfEmbedding, ball_radius: u32, max_power: u32) -> Result<Certificate> {
    g.check_in(d)?;
    let o = g.base();
    let radius = effective_radius(d, o, ball_radius);
    let ball = d.two_sided_ball(o, radius);
    for p in 1..=max_power {
        if ball.iter().all(|&v| g.iterate(v, p) == Some(v)) {
            let mut visited = BTreeSet::new();
            for &v in &ball {
                let mut cur = v;
                for _ in 0..p {
                    visited.insert(cur);
                    cur = g.apply(cur).expect("orbit defined");
                }
            }
            return Ok(Certificate::Elliptic {
                power: p,
                ball_radius: radius,
                requested_radius: ball_radius,
                base: d.name(o).to_owned(),
                fixed: d.names_of(&ball),
                map_excerpt: g.excerpt(d, visited.iter().copied()),
            });
        }
    }
    Ok(Certificate::Unknown {
        powers_tried: max_power,
        reason: format!("no power up to {max_power} fixes the radius-{radius} ball around {}", d.name(o)),
    })
}

/// Checks `o ∉ U` and `g(U ∪ {o}) ⊆ U` where defined, with `g(o)` required.
///
/// Returns the members of `U` without an image, or `None` if the condition fails.
fn translation_holds(d: &DiGraph, g: &PartialSelfEmbedding, o: Vertex, u: &BTreeSet<Vertex>) -> Result<Option<BTreeSet<Vertex>>> {
    d.check(o)?;
    if u.contains(&o) || u.is_empty() {
        return Ok(None);
    }
    match g.apply(o) {
        Some(go) if u.contains(&go) => {}
        _ => return Ok(None),
    }
    let mut unchecked = BTreeSet::new();
    for &x in u {
        match g.apply(x) {
            Some(y) if u.contains(&y) => {}
            Some(_) => return Ok(None),
            None => {
                unchecked.insert(x);
            }
        }
    }
    Ok(Some(unchecked))
}

/// Searches for `U` with `o ∉ U` and `g(U ∪ {o}) ⊆ U`.
///
/// Candidates, in order: the forward orbit of `g(o)`, then everything
/// reachable from `g(o)`.
pub fn translation_certificate(d: &DiGraph, g: &PartialSelfEmbedding) -> Result<Certificate> {
    g.check_in(d)?;
    let o = g.base();
    let Some(go) = g.apply(o) else {
        return Ok(Certificate::Unknown {
            powers_tried: 0,
            reason: format!("{} has no image in the window", d.name(o)),
        });
    };
    let mut orbit = BTreeSet::new();
    let mut cur = Some(go);
    while let Some(v) = cur {
        if !orbit.insert(v) {
            break;
        }
        cur = g.apply(v);
    }
    let reach = d.bfs(go, BallSide::Out);
    let closure: BTreeSet<Vertex> = d.vertices().filter(|v| reach[v.index()] != u32::MAX).collect();
    for u in [orbit, closure] {
        if let Some(unchecked) = translation_holds(d, g, o, &u)? {
            let mut touched = u.clone();
            touched.insert(o);
            return Ok(Certificate::NonEllipticTranslation {
                base: d.name(o).to_owned(),
                u: d.names_of(&u),
                map_excerpt: g.excerpt(d, touched.iter().copied()),
                unchecked: d.names_of(&unchecked),
            });
        }
    }
    Ok(Certificate::Unknown {
        powers_tried: 0,
        reason: "neither the orbit of g(o) nor its out-closure avoids o".into(),
    })
}

/// Shared geodesic prefix toward `gⁿ(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionPrefix {
    pub prefix: RayPrefix,
    /// `support_counts[i]`: sampled geodesics containing edge `i` of the prefix.
    pub support_counts: Vec<u32>,
    /// Stopped before `depth` because fewer than two geodesics supported the next edge.
    pub truncated: bool,
    /// Powers `n` whose target `gⁿ(v)` was in the window and reachable.
    pub samples_used: Vec<u32>,
    pub geodesic_cap: usize,
}

/// Nested-majority direction from the base vertex.
pub fn direction_prefix(d: &DiGraph, g: &PartialSelfEmbedding, depth: usize, samples: u32) -> Result<DirectionPrefix> {
    direction_prefix_from(d, g, g.base(), depth, samples)
}

/// Nested-majority direction from `v`: among `v`–`gⁿ(v)` geodesics for
/// `n = 1..=samples`, repeatedly take the next edge shared by the most
/// remaining geodesics (ties go to the earlier out-neighbour) and keep only
/// the geodesics using it.
pub fn direction_prefix_from(d: &DiGraph, g: &PartialSelfEmbedding, v: Vertex, depth: usize, samples: u32) -> Result<DirectionPrefix> {
    g.check_in(d)?;
    d.check(v)?;
    let mut pool: Vec<Vec<Vertex>> = Vec::new();
    let mut samples_used = Vec::new();
    for n in 1..=samples {
        let Some(t) = g.iterate(v, n) else { break };
        let set = d.geodesics(v, t, DIRECTION_GEODESIC_CAP)?;
        if set.paths.is_empty() {
            continue;
        }
        samples_used.push(n);
        pool.extend(set.paths.into_iter().map(DirectedPath::into_vertices));
    }
    let mut prefix = vec![v];
    let mut support_counts = Vec::new();
    let mut truncated = false;
    for step in 0..depth {
        let cur = prefix[step];
        let mut tally: BTreeMap<usize, u32> = BTreeMap::new();
        for p in &pool {
            if let Some(&next) = p.get(step + 1) {
                let pos = d.out_neighbors(cur).iter().position(|&w| w == next).expect("geodesic edge");
                *tally.entry(pos).or_default() += 1;
            }
        }
        let best = tally.iter().fold(None, |acc: Option<(usize, u32)>, (&pos, &c)| match acc {
            Some((_, bc)) if bc >= c => acc,
            _ => Some((pos, c)),
        });
        match best {
            Some((pos, count)) if count >= 2 => {
                let next = d.out_neighbors(cur)[pos];
                pool.retain(|p| p.get(step + 1) == Some(&next));
                prefix.push(next);
                support_counts.push(count);
            }
            _ => {
                truncated = true;
                break;
            }
        }
    }
    Ok(DirectionPrefix {
        prefix: RayPrefix::new(d, prefix, RayKind::Ray)?,
        support_counts,
        truncated,
        samples_used,
        geodesic_cap: DIRECTION_GEODESIC_CAP,
    })
}

/// Image of a prefix under `g`, cut to the longest run of defined images.
pub fn image_prefix(d: &DiGraph, g: &PartialSelfEmbedding, r: &RayPrefix) -> Result<(Option<RayPrefix>, usize)> {
    let images: Vec<Option<Vertex>> = r.vertices().iter().map(|&v| g.apply(v)).collect();
    let mut best: (usize, usize) = (0, 0);
    let mut start = 0;
    for i in 0..=images.len() {
        if i == images.len() || images[i].is_none() {
            if i - start > best.1 - best.0 {
                best = (start, i);
            }
            start = i + 1;
        }
    }
    let trimmed = images.len() - (best.1 - best.0);
    if best.1 == best.0 {
        return Ok((None, trimmed));
    }
    let vs: Vec<Vertex> = images[best.0..best.1].iter().map(|v| v.expect("defined run")).collect();
    Ok((Some(RayPrefix::new(d, vs, r.kind())?), trimmed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionFix {
    pub verdict: EquivalenceVerdict,
    /// Prefix vertices whose image left the window or the kept run.
    pub trimmed: usize,
}

/// `g(R) ~ R` on the window, for a ray or anti-ray prefix `R`.
pub fn fixes_direction_window(d: &DiGraph, g: &PartialSelfEmbedding, r: &RayPrefix, m: u32, k: usize) -> Result<DirectionFix> {
    g.check_in(d)?;
    let (image, trimmed) = image_prefix(d, g, r)?;
    let verdict = match image {
        Some(img) => equivalence_window(d, &img, r, m, k)?,
        None => EquivalenceVerdict {
            holds: false,
            matched_count: 0,
            bound_m: m,
            threshold_k: k,
            witness: r.vertices().first().copied(),
        },
    };
    Ok(DirectionFix { verdict, trimmed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicCandidate {
    pub fixed: DirectionFix,
    /// Truncated ρ between the candidate and the direction; finite positive
    /// values separate the two boundary points on the window.
    pub rho: RhoEstimate,
}

/// Window check of a caller-supplied anti-ray candidate for a second fixed point.
pub fn hyperbolic_candidate_check(
    d: &DiGraph,
    g: &PartialSelfEmbedding,
    anti_ray: &RayPrefix,
    direction: &DirectionPrefix,
    m: u32,
    k: usize,
) -> Result<HyperbolicCandidate> {
    if anti_ray.kind() != RayKind::AntiRay {
        return Err(Error::InvalidParam("candidate must be an anti-ray prefix".into()));
    }
    let fixed = fixes_direction_window(d, g, anti_ray, m, k)?;
    let rev: Vec<Vertex> = anti_ray.vertices().iter().rev().copied().collect();
    let rho = rho_truncated(d, g.base(), &rev, direction.prefix.vertices(), 0)?;
    Ok(HyperbolicCandidate { fixed, rho })
}

/// Constants from the orbit quasi-isometry argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitConstants {
    pub lambda: u64,
    pub kappa: u64,
    pub gamma: u64,
    pub c: u64,
}

/// `λ = (2δ+1)φ+2δ`, `κ = 2λφ`, `γ = 2N·d0`, `c = 4(1+κ)N·d0·(1+2N·d0)`.
pub fn orbit_constants(delta: u64, phi1: u64, n: u64, d0: u64) -> Result<OrbitConstants> {
    let overflow = || Error::InvalidParam("orbit constants overflow u64".into());
    let m = |a: u64, b: u64| a.checked_mul(b).ok_or_else(overflow);
    let lambda = m(2 * delta + 1, phi1)?.checked_add(2 * delta).ok_or_else(overflow)?;
    let kappa = m(m(2, lambda)?, phi1)?;
    let nd = m(n, d0)?;
    let gamma = m(2, nd)?;
    let c = m(m(m(4, 1 + kappa)?, nd)?, 1 + gamma)?;
    Ok(OrbitConstants { lambda, kappa, gamma, c })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCheck {
    pub holds: bool,
    /// Iterates `g^i(P')` that stayed inside the window.
    pub iterations_checked: u32,
    pub requested: u32,
    pub path_length: usize,
    pub report: QuasiGeodesicReport,
}

/// Concatenates `g^i(P')` for a `v`–`g(v)` geodesic `P'` and checks it is a
/// `(γ, c)`-quasi-geodesic.
pub fn orbit_quasigeodesic_check(d: &DiGraph, g: &PartialSelfEmbedding, v: Vertex, count: u32, consts: &OrbitConstants) -> Result<OrbitCheck> {
    g.check_in(d)?;
    let gv = g
        .apply(v)
        .ok_or_else(|| Error::InvalidParam(format!("{} has no image in the window", d.name(v))))?;
    let set = d.geodesics(v, gv, 1)?;
    let seg = set
        .paths
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidParam(format!("d({}, g({})) is infinite", d.name(v), d.name(v))))?;
    let mut verts = vec![v];
    let mut cur: Vec<Vertex> = seg.into_vertices();
    let mut iterations_checked = 0;
    for i in 0..count {
        if i > 0 {
            let next: Option<Vec<Vertex>> = cur.iter().map(|&x| g.apply(x)).collect();
            match next {
                Some(n) => cur = n,
                None => break,
            }
        }
        verts.extend_from_slice(&cur[1..]);
        iterations_checked += 1;
    }
    let path = DirectedPath::new(verts)?;
    let report = quasi_geodesic_check(d, &path, Ratio::from_integer(consts.gamma.max(1)), consts.c)?;
    Ok(OrbitCheck {
        holds: report.holds,
        iterations_checked,
        requested: count,
        path_length: path.len(),
        report,
    })
}

#[derive(Clone, Debug)]
pub struct FpaParams {
    pub ball_radius: u32,
    pub max_power: u32,
    pub depth: usize,
    pub samples: u32,
    pub m: u32,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct GeneratorEvidence {
    pub name: String,
    pub check: EmbeddingCheck,
    pub elliptic: Certificate,
    pub translation: Certificate,
    pub direction: Option<DirectionPrefix>,
}

#[derive(Clone, Debug)]
pub struct FpaReport {
    pub generators: Vec<GeneratorEvidence>,
    /// `fixes[i][j]`: generator `i` fixes the direction of generator `j`.
    pub fixes: Vec<Vec<Option<bool>>>,
    /// Direction classes under window equivalence, as generator indices.
    pub direction_classes: Vec<Vec<usize>>,
    pub case_i: bool,
    /// At most two direction classes, each fixed by every generator.
    pub case_ii_iii: bool,
    /// A pair of non-elliptic generators not fixing each other's direction.
    pub case_iv: Option<(usize, usize)>,
}

/// Collects window evidence for each case of the fixed-point trichotomy.
pub fn fpa_window_report(d: &DiGraph, gens: &[(String, PartialSelfEmbedding)], params: &FpaParams) -> Result<FpaReport> {
    let mut ordered: Vec<&(String, PartialSelfEmbedding)> = gens.iter().collect();
    ordered.sort_by(|a, b| a.0.cmp(&b.0));
    let evidence = par_map(&ordered, |(name, g)| -> Result<GeneratorEvidence> {
        let check = verify_embedding(d, g)?;
        let elliptic = elliptic_certificate(d, g, params.ball_radius, params.max_power)?;
        let translation = translation_certificate(d, g)?;
        let direction = if elliptic.is_unknown() {
            Some(direction_prefix(d, g, params.depth, params.samples)?)
        } else {
            None
        };
        Ok(GeneratorEvidence {
            name: name.clone(),
            check,
            elliptic,
            translation,
            direction,
        })
    });
    let generators = evidence.into_iter().collect::<Result<Vec<_>>>()?;
    let n = generators.len();
    let mut fixes = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some(dir) = &generators[j].direction {
                let g = &ordered[i].1;
                fixes[i][j] = Some(fixes_direction_window(d, g, &dir.prefix, params.m, params.k)?.verdict.holds);
            }
        }
    }
    let mut direction_classes: Vec<Vec<usize>> = Vec::new();
    for (j, ev) in generators.iter().enumerate() {
        let Some(dir) = &ev.direction else { continue };
        let mut placed = false;
        for class in direction_classes.iter_mut() {
            let rep = generators[class[0]].direction.as_ref().expect("class members have directions");
            if equivalence_window(d, &rep.prefix, &dir.prefix, params.m, params.k)?.holds {
                class.push(j);
                placed = true;
                break;
            }
        }
        if !placed {
            direction_classes.push(vec![j]);
        }
    }
    let all_elliptic = n > 0 && generators.iter().all(|g| matches!(g.elliptic, Certificate::Elliptic { .. }));
    let case_i = all_elliptic && generators.windows(2).all(|w| ordered_base_eq(&w[0].elliptic, &w[1].elliptic));
    let any_directions = !direction_classes.is_empty();
    let all_fixed = fixes.iter().flatten().all(|f| *f != Some(false));
    let case_ii_iii = any_directions && direction_classes.len() <= 2 && all_fixed;
    let mut case_iv = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            if fixes[i][j] == Some(false) && fixes[j][i] == Some(false) {
                case_iv = Some((i, j));
                break 'outer;
            }
        }
    }
    Ok(FpaReport {
        generators,
        fixes,
        direction_classes,
        case_i,
        case_ii_iii,
        case_iv,
    })
}

fn ordered_base_eq(a: &Certificate, b: &Certificate) -> bool {
    match (a, b) {
        (Certificate::Elliptic { base: x, .. }, Certificate::Elliptic { base: y, .. }) => x == y,
        _ => false,
    }
}
