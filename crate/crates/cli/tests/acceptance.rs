//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the test harness so the lines are always printed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use hypermono::embedding::{
    elliptic_certificate, fixes_direction_window, orbit_quasigeodesic_check, orbit_constants, translation_certificate, verify_embedding,
};
use hypermono::freeness::{brute_force_free, check_pingpong, search_pingpong, PingPongParams};
use hypermono::gallery::{catalog_names, make_fixture, FixtureSpec};
use hypermono::hyperbolicity::{delta_estimate, Constants};
use hypermono::monoid::{cayley_ball, complete, growth_table, left_mul_embedding, preceq_window, CayleyBall, GrowthTable, PreceqOutcome, Presentation};
use hypermono::rays::equivalence_window;
use hypermono::{Certificate, DiGraph, ExtDistance, PartialSelfEmbedding, PingPongInstance, Vertex};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > budget {
        Err(format!("took {:.2?}, budget {:.2?}", t, budget))
    } else {
        Ok(())
    }
}

fn ball(gens: &[&str], rels: &[&str], r: u32) -> CayleyBall {
    let rs = complete(&Presentation::parse(gens, rels).unwrap(), 64, 16).unwrap();
    cayley_ball(&rs, r).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut fixtures = 0;
    let mut pairs = 0;
    for fx in small_fixtures() {
        let d = &fx.graph;
        ensure!(d.len() <= 60, "{} has {} vertices", fx.spec.name, d.len());
        let adj = adjacency(d);
        let vs: Vec<Vertex> = d.vertices().collect();
        for &u in &vs {
            let (best, geos) = path_search(&adj, u.index());
            for &w in &vs {
                let expect = if best[w.index()] == INF {
                    ExtDistance::Infinite
                } else {
                    ExtDistance::Finite(best[w.index()])
                };
                ensure!(d.distance(u, w).unwrap() == expect, "{} distance {} -> {}", fx.spec.name, d.name(u), d.name(w));
                let got = d.geodesics(u, w, usize::MAX).unwrap();
                let set: BTreeSet<Vec<usize>> = got.paths.iter().map(|p| p.vertices().iter().map(|x| x.index()).collect()).collect();
                ensure!(set == geos[w.index()] && got.paths.len() == set.len(), "{} geodesics {} -> {}", fx.spec.name, d.name(u), d.name(w));
                pairs += 1;
            }
        }
        fixtures += 1;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{fixtures} fixtures, {pairs} ordered pairs exact"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for (name, params) in [
        ("path", &[("n", 10)][..]),
        ("out_tree", &[("k", 2), ("depth", 5)][..]),
        ("bidirected_tree", &[("degree", 3), ("depth", 5)][..]),
    ] {
        let fx = fixture(name, params);
        let e = delta_estimate(&fx.graph, fx.root, 5, 64).unwrap();
        ensure!(e.delta_hat == 0, "{name}: delta_hat = {}", e.delta_hat);
    }
    let g4 = fixture("grid", &[("n", 4)]);
    let g8 = fixture("grid", &[("n", 8)]);
    let a = delta_estimate(&g4.graph, g4.root, 4, 64).unwrap().delta_hat;
    let b = delta_estimate(&g8.graph, g8.root, 8, 64).unwrap().delta_hat;
    ensure!(b > a, "grid(8) {b} <= grid(4) {a}");
    within(start, Duration::from_secs(10))?;
    Ok(format!("trees and path 0; grid(4) {a} < grid(8) {b}"))
}

/// Fraction of finite domain-pair distances preserved, by independent BFS.
fn preserved(d: &DiGraph, g: &PartialSelfEmbedding) -> (usize, usize) {
    let dist = all_pairs(&adjacency(d));
    let dom: Vec<(Vertex, Vertex)> = g.pairs().collect();
    let (mut kept, mut total) = (0, 0);
    for &(x, gx) in &dom {
        for &(y, gy) in &dom {
            let before = dist[x.index()][y.index()];
            if before != INF {
                total += 1;
                if dist[gx.index()][gy.index()] == before {
                    kept += 1;
                }
            }
        }
    }
    (kept, total)
}

fn criterion_3() -> Outcome {
    let mut summary = Vec::new();
    for fx in [fixture("out_tree", &[("k", 2), ("depth", 6)]), fixture("out_tree", &[("k", 3), ("depth", 4)]), fixture("ex_shift", &[("n", 2), ("depth", 5)])] {
        let d = &fx.graph;
        ensure!(d.interior_out_degree().is_some(), "{} lacks constant interior out-degree", fx.spec.name);
        for (m, g) in &fx.maps {
            for k in 1..=3 {
                let gk = g.power(k);
                let chk = verify_embedding(d, &gk).unwrap();
                if !chk.ok {
                    continue;
                }
                ensure!(chk.distance_clause, "{}/{m}^{k}: distance clause not applied", fx.spec.name);
                let (kept, total) = preserved(d, &gk);
                ensure!(kept == total && total > 0, "{}/{m}^{k}: {kept}/{total} distances preserved", fx.spec.name);
                summary.push(format!("{}/{m}^{k} {kept}/{total}", fx.spec.name));
            }
        }
    }
    Ok(summary.join(", "))
}

fn cone(d: &DiGraph, prefix: &str) -> BTreeSet<Vertex> {
    d.vertices().filter(|&v| d.name(v).starts_with(prefix)).collect()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let free = ball(&["a", "b"], &[], 7);
    let d = free.digraph();
    let o = d.root().unwrap();
    let (ma, mb) = (left_mul_embedding(&free, &[0]).unwrap(), left_mul_embedding(&free, &[1]).unwrap());
    let inst = PingPongInstance::new(ma.clone(), mb.clone(), cone(d, "a"), cone(d, "b"));
    let cert = check_pingpong(d, &inst).unwrap();
    ensure!(cert.is_ok(), "cone instance rejected: {:?}", cert.err());
    let v = brute_force_free(d, &ma, &mb, 6, &[o]).unwrap();
    ensure!(v.free && v.distinct == 126 && v.words == 126, "oracle {}/{}", v.distinct, v.words);

    let comm = ball(&["a", "b"], &["ba=ab"], 7);
    let cd = comm.digraph();
    let (ca, cb) = (left_mul_embedding(&comm, &[0]).unwrap(), left_mul_embedding(&comm, &[1]).unwrap());
    let cv = brute_force_free(cd, &ca, &cb, 2, &[cd.root().unwrap()]).unwrap();
    let as_letters = |w: &str| w.replace("m1", "a").replace("m2", "b");
    let first = cv.collisions.first().map(|(x, y)| (as_letters(x), as_letters(y)));
    ensure!(!cv.free && first == Some(("ab".into(), "ba".into())), "commutative collisions {:?}", cv.collisions);

    let delta = delta_estimate(d, o, 6, 64).unwrap().delta_hat;
    let c = Constants::from_window(d, delta);
    let params = PingPongParams {
        max_power: 20,
        anchor_depth: 1,
        depth: 6,
        samples: 8,
        kappa: c.kappa_projectivity,
    };
    let s = search_pingpong(d, &ma, &mb, o, &params).unwrap();
    let powers = s.found.as_ref().map(|f| (f.0, f.1));
    ensure!(powers == Some((1, 1)), "search found {powers:?}: {:?}", s.failure);
    within(start, Duration::from_secs(5))?;
    Ok("cone instance certified; 126/126 distinct; commutative collides at (ab, ba); search (1, 1)".into())
}

fn criterion_5() -> Outcome {
    let free = growth_table(&ball(&["a", "b"], &[], 12));
    for (t, &c) in free.counts.iter().enumerate() {
        ensure!(c == (1u64 << (t + 1)) - 1, "free growth at t={t}: {c}");
    }
    let comm = growth_table(&ball(&["a", "b"], &["ba=ab"], 12));
    for (t, &c) in comm.counts.iter().enumerate() {
        let t = t as u64;
        ensure!(c == (t + 1) * (t + 2) / 2, "commutative growth at t={t}: {c}");
    }
    let theta = growth_table(&ball(&["a", "b"], &[], 10)).rate_estimate();
    ensure!(theta >= 1.9, "rate estimate {theta}");
    let poly = GrowthTable::from_fn(32, |t| t as u64);
    let exp = GrowthTable::from_fn(32, |t| 1u64 << t);
    let r = preceq_window(&poly, &exp, 8, 1).unwrap();
    ensure!(r.outcome == PreceqOutcome::WindowWitness { k: 1, l: 1 }, "poly vs exp: {:?}", r.outcome);
    let exp32 = GrowthTable::from_fn(32, |t| 1u64 << t);
    let poly_long = GrowthTable::from_fn(256, |t| t as u64);
    let r = preceq_window(&exp32, &poly_long, 8, 8).unwrap();
    ensure!(
        matches!(&r.outcome, PreceqOutcome::WindowFalsification { failures } if failures.len() == 64),
        "exp vs poly: {:?}",
        r.outcome
    );
    Ok(format!("growth exact to t=12; theta {theta:.4}; poly <= exp at (1,1); exp <= poly falsified on 64 pairs"))
}

fn certificate_pattern(name: &str, params: &[(&str, u64)], m: u32, k: usize) -> Result<String, String> {
    let fx = fixture(name, params);
    let d = &fx.graph;
    let g = fx.map("shift");
    ensure!(verify_embedding(d, g).unwrap().ok, "{name} shift does not verify");
    let tr = translation_certificate(d, g).unwrap();
    ensure!(matches!(tr, Certificate::NonEllipticTranslation { .. }), "{name}: no translation certificate");
    let el = elliptic_certificate(d, g, 6, 20).unwrap();
    ensure!(el.is_unknown(), "{name}: elliptic certificate {}", el.tag());
    let mut fixed = 0;
    for (r, ray) in &fx.rays {
        let f = fixes_direction_window(d, g, ray, m, k).unwrap();
        ensure!(f.verdict.holds, "{name}: direction {r} not fixed");
        fixed += 1;
    }
    Ok(format!("{name}: translation, no elliptic to power 20, {fixed} prefixes fixed"))
}

fn criterion_6() -> Outcome {
    let fx = fixture("ex_counter", &[("depth", 12)]);
    let d = &fx.graph;
    ensure!(verify_embedding(d, fx.map("shift")).unwrap().ok, "ex_counter shift does not verify");
    for i in 1..=12 {
        let v = equivalence_window(d, fx.ray(&format!("R1_{i}")), fx.ray(&format!("R2_{i}")), 2, 5).unwrap();
        ensure!(v.holds == (i >= 2), "ex_counter pair {i}: equivalence {}", v.holds);
    }
    let a = certificate_pattern("ex_shift", &[("n", 2), ("depth", 5)], 2, 3)?;
    ensure!(fixture("ex_shift", &[("n", 2)]).rays.len() == 5, "ex_shift should carry 2n+1 rays");
    let b = certificate_pattern("graph_ends", &[("n", 3), ("depth", 5)], 2, 3)?;
    Ok(format!("ex_counter pairs 2..12 equivalent, pair 1 not; {a}; {b}"))
}

fn criterion_7() -> Outcome {
    let free = ball(&["a", "b"], &[], 7);
    let d = free.digraph();
    let o = d.root().unwrap();
    let ma = left_mul_embedding(&free, &[0]).unwrap();
    let tr = translation_certificate(d, &ma).unwrap();
    ensure!(matches!(tr, Certificate::NonEllipticTranslation { .. }), "no translation certificate for a");
    let mut orbit = vec![o];
    while let Some(n) = ma.apply(*orbit.last().unwrap()) {
        orbit.push(n);
    }
    let distinct: BTreeSet<Vertex> = orbit.iter().copied().collect();
    ensure!(distinct.len() == orbit.len() && orbit.len() == 8, "orbit {:?}", d.names_of(&orbit));
    let delta = delta_estimate(d, o, 6, 64).unwrap().delta_hat;
    let c = Constants::from_window(d, delta);
    let d0 = d.distance(o, ma.apply(o).unwrap()).unwrap().finite().unwrap();
    let pc = orbit_constants(c.delta, c.phi_delta_plus_1(), c.n_ball_bound, u64::from(d0)).unwrap();
    let oc = orbit_quasigeodesic_check(d, &ma, o, 20, &pc).unwrap();
    ensure!(oc.holds && oc.iterations_checked == 7, "orbit check {:?}", oc);
    Ok(format!("orbit of length {} injective; gamma {}, c {}; {} iterates", orbit.len(), pc.gamma, pc.c, oc.iterations_checked))
}

fn criterion_8() -> Outcome {
    let mut emitted = 0;
    let mut pairs = 0;
    let mut subjects: Vec<(String, DiGraph, Vec<(String, PartialSelfEmbedding)>)> = Vec::new();
    for name in catalog_names() {
        let fx = make_fixture(&FixtureSpec::new(name)).unwrap();
        let maps = fx.maps.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        subjects.push((name.to_string(), fx.graph, maps));
    }
    let free = ball(&["a", "b"], &[], 5);
    let maps = vec![("a".into(), left_mul_embedding(&free, &[0]).unwrap()), ("b".into(), left_mul_embedding(&free, &[1]).unwrap())];
    subjects.push(("free_ball".into(), free.digraph().clone(), maps));
    for (label, d, maps) in &subjects {
        for (m, g) in maps {
            let el = elliptic_certificate(d, g, 6, 20).unwrap();
            let tr = translation_certificate(d, g).unwrap();
            ensure!(el.is_unknown() || tr.is_unknown(), "{label}/{m}: both certificates produced");
            pairs += 1;
            for cert in [el, tr] {
                if cert.is_unknown() {
                    continue;
                }
                let text = serde_json::to_string(&cert).unwrap();
                let back: Certificate = serde_json::from_str(&text).unwrap();
                ensure!(serde_json::to_string(&back).unwrap() == text, "{label}/{m}: serialization not stable");
                ensure!(back.recheck(d).unwrap(), "{label}/{m}: {} does not re-validate", back.tag());
                emitted += 1;
            }
        }
    }
    Ok(format!("{pairs} maps, {emitted} certificates re-validated from JSON, none conflicting"))
}

fn hypermono(dir: &Path, threads: &str, args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypermono"))
        .args(args)
        .current_dir(dir)
        .env("HYPERMONO_THREADS", threads)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("free2.pres"), "gens a b\n").unwrap();
    std::fs::write(dir.join("comm2.pres"), "gens a b\nrel ab=ba\n").unwrap();
    let setup: [&[&str]; 4] = [
        &["gallery", "path", "--param", "n=10", "--out", "path10"],
        &["gallery", "out_tree", "--param", "k=2", "--param", "depth=7", "--out", "free2ball"],
        &["gallery", "ex_counter", "--out", "counter"],
        &["gallery", "ex_shift", "--out", "shift"],
    ];
    for args in setup {
        let (_, code) = hypermono(dir, "0", args);
        ensure!(code == 0, "setup {args:?} exited {code}");
    }
    let commands: Vec<(&[&str], i32)> = vec![
        (&["cayley", "free2.pres", "--radius", "3"], 0),
        (&["cayley", "comm2.pres", "--radius", "6"], 0),
        (&["analyze", "path10/path.dg"], 0),
        (&["analyze", "shift/ex_shift.dg"], 0),
        (&["classify", "path10/path.dg", "path10/shift.map"], 0),
        (&["classify", "shift/ex_shift.dg", "shift/shift.map"], 0),
        (&["pingpong", "free2ball/out_tree.dg", "free2ball/left_a.map", "free2ball/left_b.map", "--search", "--oracle", "6"], 0),
        (&["rays", "counter/ex_counter.dg", "counter/R1_2.ray", "counter/R2_2.ray", "--M", "2", "--k", "5"], 0),
        (&["rays", "counter/ex_counter.dg", "counter/R1_1.ray", "counter/R2_1.ray", "--M", "2", "--k", "5"], 1),
        (&["gallery", "ex_directions", "--out", "dirs"], 0),
    ];
    for (args, want) in &commands {
        let (a, ca) = hypermono(dir, "0", args);
        let (b, cb) = hypermono(dir, "8", args);
        ensure!(ca == *want && cb == *want, "{args:?} exited {ca}/{cb}, expected {want}");
        ensure!(a == b, "{args:?}: reports differ between 0 and 8 workers");
        ensure!(!a.is_empty(), "{args:?}: empty report");
    }
    Ok(format!("{} commands byte-identical across worker counts", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("distance/geodesic oracle agreement", criterion_1),
        ("hyperbolicity calibration", criterion_2),
        ("self-embeddings preserve distances on constant out-degree", criterion_3),
        ("ping-pong and word oracle", criterion_4),
        ("growth exactness and comparison", criterion_5),
        ("example digraph behavior", criterion_6),
        ("infinite-order evidence", criterion_7),
        ("certificate soundness", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {title} ({t:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {title} ({t:.2} s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
