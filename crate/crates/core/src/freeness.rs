//! Ping-pong certificates for free submonoids, attractor sets, and a
//! brute-force word-collision oracle.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::digraph::{BallSide, DiGraph, Vertex};
use crate::embedding::{direction_prefix_from, Certificate, DirectionPrefix, PartialSelfEmbedding};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::hyperbolicity::kappa_projectivity;

const INF: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PingPongInstance {
    pub m1: PartialSelfEmbedding,
    pub m2: PartialSelfEmbedding,
    pub u: BTreeSet<Vertex>,
    pub v: BTreeSet<Vertex>,
    pub domain: BTreeSet<Vertex>,
}

impl PingPongInstance {
    /// Instance with `domain = U ∪ V`.
    pub fn new(m1: PartialSelfEmbedding, m2: PartialSelfEmbedding, u: BTreeSet<Vertex>, v: BTreeSet<Vertex>) -> Self {
        let domain = u.union(&v).copied().collect();
        PingPongInstance { m1, m2, u, v, domain }
    }
}

/// Failed ping-pong condition with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum PingPongViolation {
    /// `U ∩ V ≠ ∅`.
    NotDisjoint { vertex: Vertex },
    /// `m1(x) ∉ U` for some `x ∈ U ∪ V`.
    FirstNotInU { vertex: Vertex, image: Vertex },
    /// `m2(x) ∉ V` for some `x ∈ U ∪ V`.
    SecondNotInV { vertex: Vertex, image: Vertex },
    /// A map is not injective on `U ∪ V`.
    NotInjective { map: u8, a: Vertex, b: Vertex },
}

impl PingPongViolation {
    pub fn describe(&self, d: &DiGraph) -> String {
        let n = |v: &Vertex| d.name(*v).to_owned();
        match self {
            PingPongViolation::NotDisjoint { vertex } => format!("U and V share {}", n(vertex)),
            PingPongViolation::FirstNotInU { vertex, image } => format!("m1({}) = {} is not in U", n(vertex), n(image)),
            PingPongViolation::SecondNotInV { vertex, image } => format!("m2({}) = {} is not in V", n(vertex), n(image)),
            PingPongViolation::NotInjective { map, a, b } => format!("m{map} identifies {} and {}", n(a), n(b)),
        }
    }
}

fn injective_on(m: &PartialSelfEmbedding, set: &BTreeSet<Vertex>, which: u8) -> Option<PingPongViolation> {
    let mut seen: HashMap<Vertex, Vertex> = HashMap::new();
    for &x in set {
        if let Some(y) = m.apply(x) {
            if let Some(&a) = seen.get(&y) {
                return Some(PingPongViolation::NotInjective { map: which, a, b: x });
            }
            seen.insert(y, x);
        }
    }
    None
}

/// Verifies `U ∩ V = ∅`, `m1(U ∪ V) ⊆ U`, `m2(U ∪ V) ⊆ V` and injectivity on
/// `U ∪ V`, wherever the maps are defined on the window.
pub fn check_pingpong(d: &DiGraph, inst: &PingPongInstance) -> Result<std::result::Result<Certificate, PingPongViolation>> {
    for &x in inst.u.iter().chain(&inst.v) {
        d.check(x)?;
        if !inst.domain.contains(&x) {
            return Err(Error::InvalidParam(format!("{} is in U or V but not in the domain", d.name(x))));
        }
    }
    if let Some(&x) = inst.u.intersection(&inst.v).next() {
        return Ok(Err(PingPongViolation::NotDisjoint { vertex: x }));
    }
    let both: BTreeSet<Vertex> = inst.u.union(&inst.v).copied().collect();
    for (m, which) in [(&inst.m1, 1u8), (&inst.m2, 2u8)] {
        if let Some(v) = injective_on(m, &both, which) {
            return Ok(Err(v));
        }
    }
    for &x in &both {
        if let Some(y) = inst.m1.apply(x) {
            if !inst.u.contains(&y) {
                return Ok(Err(PingPongViolation::FirstNotInU { vertex: x, image: y }));
            }
        }
    }
    for &x in &both {
        if let Some(y) = inst.m2.apply(x) {
            if !inst.v.contains(&y) {
                return Ok(Err(PingPongViolation::SecondNotInV { vertex: x, image: y }));
            }
        }
    }
    let unchecked = |m: &PartialSelfEmbedding| d.names_of(both.iter().filter(|&&x| m.apply(x).is_none()));
    Ok(Ok(Certificate::PingPongFree {
        u: d.names_of(&inst.u),
        v: d.names_of(&inst.v),
        m1_excerpt: inst.m1.excerpt(d, both.iter().copied()),
        m2_excerpt: inst.m2.excerpt(d, both.iter().copied()),
        unchecked_m1: unchecked(&inst.m1),
        unchecked_m2: unchecked(&inst.m2),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttractorKit {
    pub s: BTreeSet<Vertex>,
    pub kappa: u64,
    pub u_plus: BTreeSet<Vertex>,
}

/// `U⁺`: every `x` such that some `o`–`x` geodesic meets `B⁺_κ(S)`, with κ
/// from δ and `φ(δ+1)`.
pub fn build_attractor(d: &DiGraph, o: Vertex, s: &BTreeSet<Vertex>, delta: u64, phi1: u64) -> Result<AttractorKit> {
    build_attractor_with_kappa(d, o, s, kappa_projectivity(delta, phi1))
}

/// [`build_attractor`] with an explicit κ.
///
/// `w` lies on some `o`–`x` geodesic iff `d(o,w) + d(w,x) = d(o,x) < ∞`.
pub fn build_attractor_with_kappa(d: &DiGraph, o: Vertex, s: &BTreeSet<Vertex>, kappa: u64) -> Result<AttractorKit> {
    d.check(o)?;
    for &x in s {
        d.check(x)?;
    }
    let seeds: Vec<Vertex> = s.iter().copied().collect();
    let radius = kappa.min(u64::from(INF - 1)) as u32;
    let near = d.set_ball(&seeds, radius, BallSide::Out);
    let dist = d.distances();
    let from_o = dist.row(o);
    let verts: Vec<Vertex> = d.vertices().collect();
    let hits = par_map(&verts, |&x| {
        let dox = from_o[x.index()];
        dox != INF
            && near.iter().any(|&w| {
                let (a, b) = (from_o[w.index()], dist.raw(w, x));
                a != INF && b != INF && a + b == dox
            })
    });
    let u_plus = verts.into_iter().zip(hits).filter(|(_, h)| *h).map(|(v, _)| v).collect();
    Ok(AttractorKit {
        s: s.clone(),
        kappa,
        u_plus,
    })
}

#[derive(Clone, Debug)]
pub struct PingPongParams {
    pub max_power: u32,
    /// Index of the direction-prefix vertex used as the attractor seed.
    pub anchor_depth: usize,
    pub depth: usize,
    pub samples: u32,
    pub kappa: u64,
}

#[derive(Clone, Debug)]
pub struct PingPongSearch {
    pub direction_g: DirectionPrefix,
    pub direction_h: DirectionPrefix,
    pub attractor_u: AttractorKit,
    pub attractor_v: AttractorKit,
    /// `(n, m, instance, certificate)` on success.
    pub found: Option<(u32, u32, PingPongInstance, Certificate)>,
    pub failure: Option<String>,
    /// Smallest number of vertices of `U⁺ ∪ V⁺` escaping `U⁺` under some `gⁿ`, with that `n`.
    pub closest_g: Option<(u32, usize)>,
    pub closest_h: Option<(u32, usize)>,
}

fn seed(dir: &DirectionPrefix, depth: usize) -> Vertex {
    let vs = dir.prefix.vertices();
    vs[depth.min(vs.len() - 1)]
}

/// Smallest power whose image of `both` stays in `target`, plus the closest miss.
fn attracting_power(
    g: &PartialSelfEmbedding,
    both: &BTreeSet<Vertex>,
    target: &BTreeSet<Vertex>,
    max_power: u32,
) -> (Option<u32>, Option<(u32, usize)>) {
    let mut closest: Option<(u32, usize)> = None;
    let mut gp = g.clone();
    for n in 1..=max_power {
        if n > 1 {
            gp = g.compose(&gp);
        }
        let escaping = both.iter().filter(|&&x| gp.apply(x).is_some_and(|y| !target.contains(&y))).count();
        if escaping == 0 {
            return (Some(n), closest);
        }
        if closest.map_or(true, |(_, c)| escaping < c) {
            closest = Some((n, escaping));
        }
    }
    (None, closest)
}

/// Finds powers `gⁿ`, `hᵐ` playing ping-pong on attractor sets seeded by the
/// directions of `g` and `h`.
pub fn search_pingpong(d: &DiGraph, g: &PartialSelfEmbedding, h: &PartialSelfEmbedding, o: Vertex, params: &PingPongParams) -> Result<PingPongSearch> {
    let direction_g = direction_prefix_from(d, g, o, params.depth, params.samples)?;
    let direction_h = direction_prefix_from(d, h, o, params.depth, params.samples)?;
    let su: BTreeSet<Vertex> = [seed(&direction_g, params.anchor_depth)].into();
    let sv: BTreeSet<Vertex> = [seed(&direction_h, params.anchor_depth)].into();
    let attractor_u = build_attractor_with_kappa(d, o, &su, params.kappa)?;
    let attractor_v = build_attractor_with_kappa(d, o, &sv, params.kappa)?;
    let mut out = PingPongSearch {
        direction_g,
        direction_h,
        attractor_u,
        attractor_v,
        found: None,
        failure: None,
        closest_g: None,
        closest_h: None,
    };
    let (u, v) = (&out.attractor_u.u_plus, &out.attractor_v.u_plus);
    if let Some(&x) = u.intersection(v).next() {
        out.failure = Some(format!("attractor sets are not disjoint (both contain {})", d.name(x)));
        return Ok(out);
    }
    let both: BTreeSet<Vertex> = u.union(v).copied().collect();
    let (n, closest_g) = attracting_power(g, &both, u, params.max_power);
    let (m, closest_h) = attracting_power(h, &both, v, params.max_power);
    out.closest_g = closest_g;
    out.closest_h = closest_h;
    let (Some(n), Some(m)) = (n, m) else {
        out.failure = Some(format!("no powers up to {} map U+ ∪ V+ into the attractors", params.max_power));
        return Ok(out);
    };
    let inst = PingPongInstance::new(g.power(n), h.power(m), u.clone(), v.clone());
    match check_pingpong(d, &inst)? {
        Ok(cert) => out.found = Some((n, m, inst, cert)),
        Err(viol) => out.failure = Some(format!("packaged instance failed its own check: {}", viol.describe(d))),
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeVerdict {
    pub max_len: usize,
    pub words: usize,
    /// Number of distinct evaluation tuples.
    pub distinct: usize,
    pub free: bool,
    /// Colliding word pairs in canonical order (length, then `m1 < m2`).
    pub collisions: Vec<(String, String)>,
    pub collision_count: usize,
    pub probes_used: Vec<Vertex>,
    pub probes_trimmed: Vec<Vertex>,
}

/// Reported collision pairs are capped at this many.
pub const MAX_REPORTED_COLLISIONS: usize = 64;

/// Canonical words over `{1, 2}`: by length, then lexicographic.
fn words_up_to(l: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..l {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for x in [1u8, 2] {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn word_label(w: &[u8]) -> String {
    w.iter().map(|x| format!("m{x}")).collect()
}

/// Evaluates `w(p) = m_{i1}(m_{i2}(…m_{ik}(p)))`.
fn evaluate(w: &[u8], m1: &PartialSelfEmbedding, m2: &PartialSelfEmbedding, p: Vertex) -> Option<Vertex> {
    let mut cur = p;
    for &x in w.iter().rev() {
        cur = if x == 1 { m1.apply(cur)? } else { m2.apply(cur)? };
    }
    Some(cur)
}

/// Evaluates every non-empty word of length `≤ L` over `{m1, m2}` on the probes
/// and reports whether all evaluation tuples are distinct.
///
/// Probes on which some word leaves the window are dropped and listed.
pub fn brute_force_free(d: &DiGraph, m1: &PartialSelfEmbedding, m2: &PartialSelfEmbedding, max_len: usize, probes: &[Vertex]) -> Result<FreeVerdict> {
    if max_len == 0 {
        return Err(Error::InvalidParam("word length bound must be at least 1".into()));
    }
    if max_len > 20 {
        return Err(Error::InvalidParam("word length bound above 20 is not supported".into()));
    }
    for &p in probes {
        d.check(p)?;
    }
    let words = words_up_to(max_len);
    let mut probes_used = Vec::new();
    let mut probes_trimmed = Vec::new();
    let mut columns: Vec<Vec<Vertex>> = Vec::new();
    for &p in probes {
        let col = par_map(&words, |w| evaluate(w, m1, m2, p));
        match col.into_iter().collect::<Option<Vec<Vertex>>>() {
            Some(c) => {
                probes_used.push(p);
                columns.push(c);
            }
            None => probes_trimmed.push(p),
        }
    }
    let mut first: HashMap<Vec<Vertex>, usize> = HashMap::new();
    let mut collisions = Vec::new();
    let mut collision_count = 0;
    for (i, w) in words.iter().enumerate() {
        let tuple: Vec<Vertex> = columns.iter().map(|c| c[i]).collect();
        match first.get(&tuple) {
            Some(&j) => {
                collision_count += 1;
                if collisions.len() < MAX_REPORTED_COLLISIONS {
                    collisions.push((word_label(&words[j]), word_label(w)));
                }
            }
            None => {
                first.insert(tuple, i);
            }
        }
    }
    Ok(FreeVerdict {
        max_len,
        words: words.len(),
        distinct: first.len(),
        free: collision_count == 0,
        collisions,
        collision_count,
        probes_used,
        probes_trimmed,
    })
}
