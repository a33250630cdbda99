mod common;

use std::collections::BTreeSet;

use common::*;
use hypermono::freeness::{build_attractor_with_kappa, search_pingpong, PingPongParams};
use hypermono::hyperbolicity::{delta_estimate, triangle_thinness, Constants, GeodesicTriangle};
use hypermono::monoid::{cayley_ball, complete, growth_table, left_mul_embedding, Presentation, Word};
use hypermono::rays::{rho_truncated, tail_containment, ray_leq_window};
use hypermono::{BallSide, DiGraph, ExtDistance, Vertex};

#[test]
fn distances_and_geodesics_match_path_search() {
    for fx in small_fixtures() {
        let d = &fx.graph;
        assert!(d.len() <= 60, "{} has {} vertices", fx.spec.name, d.len());
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
                assert_eq!(d.distance(u, w).unwrap(), expect, "{}: {} -> {}", fx.spec.name, d.name(u), d.name(w));
                let got = d.geodesics(u, w, usize::MAX).unwrap();
                let got_set: BTreeSet<Vec<usize>> = got.paths.iter().map(|p| p.vertices().iter().map(|x| x.index()).collect()).collect();
                assert_eq!(got_set, geos[w.index()], "{}: geodesics {} -> {}", fx.spec.name, d.name(u), d.name(w));
                assert_eq!(got.paths.len(), got_set.len());
                assert_eq!(got.total, geos[w.index()].len() as u64);
                assert_eq!(d.count_geodesics(u, w), geos[w.index()].len() as u64);
                assert!(!got.truncated);
            }
        }
    }
}

#[test]
fn geodesic_cap_truncates_in_order() {
    let fx = fixture("grid", &[("n", 6)]);
    let d = &fx.graph;
    let (a, b) = (fx.v("(0,0)"), fx.v("(3,3)"));
    let all = d.geodesics(a, b, usize::MAX).unwrap();
    assert_eq!(all.total, 20);
    let few = d.geodesics(a, b, 5).unwrap();
    assert!(few.truncated);
    assert_eq!(few.total, 20);
    assert_eq!(few.paths[..], all.paths[..5]);
}

#[test]
fn balls_match_bfs_oracle() {
    for fx in small_fixtures() {
        let d = &fx.graph;
        let adj = adjacency(d);
        let rev = reverse(&adj);
        for u in d.vertices() {
            for r in 0..4 {
                let out: Vec<usize> = d.ball(u, r, BallSide::Out).unwrap().iter().map(|x| x.index()).collect::<BTreeSet<_>>().into_iter().collect();
                let inn: Vec<usize> = d.ball(u, r, BallSide::In).unwrap().iter().map(|x| x.index()).collect::<BTreeSet<_>>().into_iter().collect();
                assert_eq!(out, ball(&adj, u.index(), r));
                assert_eq!(inn, ball(&rev, u.index(), r));
            }
        }
    }
}

fn triangle(d: &DiGraph, sides: [&[&str]; 3]) -> GeodesicTriangle {
    let paths = sides.map(|s| d.path_from_names(s).unwrap());
    let e = [paths[0].first(), paths[1].first(), paths[1].last()];
    GeodesicTriangle::new(d, e, paths).unwrap()
}

#[test]
fn grid_staircase_triangle() {
    let fx = fixture("grid", &[("n", 6)]);
    let d = &fx.graph;
    let t = triangle(
        d,
        [
            &["(0,0)", "(1,0)", "(1,1)"],
            &["(1,1)", "(2,1)", "(2,2)"],
            &["(0,0)", "(0,1)", "(1,1)", "(1,2)", "(2,2)"],
        ],
    );
    let dist = all_pairs(&adjacency(d));
    let sides = [0, 1, 2].map(|k| t.sides()[k].vertices().iter().map(|v| v.index()).collect::<Vec<_>>());
    let oracle = thinness_oracle(&dist, &sides);
    let report = triangle_thinness(d, &t).unwrap();
    assert_eq!(report.delta_required, oracle);
    // Frozen from the oracle.
    assert_eq!(oracle, 1);
}

#[test]
fn estimate_agrees_with_triangle_enumeration() {
    // Enumerate every triangle on ball endpoints with all geodesic sides and
    // take the worst thinness; the estimate must match it when nothing is capped.
    for fx in [fixture("grid", &[("n", 4)]), fixture("ex_counter", &[("depth", 3)]), fixture("graph_ends", &[("n", 2), ("depth", 2)])] {
        let d = &fx.graph;
        let radius = 3;
        let adj = adjacency(d);
        let rev = reverse(&adj);
        let dist = all_pairs(&adj);
        let mut pts: BTreeSet<usize> = ball(&adj, fx.root.index(), radius).into_iter().collect();
        pts.extend(ball(&rev, fx.root.index(), radius));
        let pts: Vec<usize> = pts.into_iter().collect();
        let geos: Vec<(Vec<u32>, Vec<BTreeSet<Vec<usize>>>)> = (0..d.len()).map(|s| path_search(&adj, s)).collect();
        let sides_between = |a: usize, b: usize| -> Vec<Vec<usize>> {
            let mut out: Vec<Vec<usize>> = geos[a].1[b].iter().cloned().collect();
            if a != b {
                out.extend(geos[b].1[a].iter().cloned());
            }
            out
        };
        let mut worst = 0;
        for (i, &x) in pts.iter().enumerate() {
            for (j, &y) in pts.iter().enumerate().skip(i) {
                for &z in pts.iter().skip(j) {
                    for s0 in sides_between(x, y) {
                        for s1 in sides_between(y, z) {
                            for s2 in sides_between(x, z) {
                                worst = worst.max(thinness_oracle(&dist, &[s0.clone(), s1.clone(), s2]));
                            }
                        }
                    }
                }
            }
        }
        let est = delta_estimate(d, fx.root, radius, usize::MAX).unwrap();
        assert_eq!(est.truncated_pairs, 0);
        assert_eq!(est.delta_hat, worst, "{}", fx.spec.name);
        if let Some((t, rep)) = &est.witness {
            assert_eq!(triangle_thinness(d, t).unwrap().delta_required, rep.delta_required);
            assert_eq!(rep.delta_required, est.delta_hat);
        }
    }
}

/// Largest finite distance inside any out- or in-ball of radius `r`.
fn phi_oracle(d: &DiGraph, r: u32) -> u32 {
    let adj = adjacency(d);
    let rev = reverse(&adj);
    let dist = all_pairs(&adj);
    let mut best = 0;
    for v in 0..d.len() {
        for side in [&adj, &rev] {
            let b = ball(side, v, r);
            for &y in &b {
                for &z in &b {
                    if dist[y][z] != INF {
                        best = best.max(dist[y][z]);
                    }
                }
            }
        }
    }
    best
}

#[test]
fn phi_tables() {
    let tree = fixture("out_tree", &[("k", 2), ("depth", 5)]);
    assert_eq!(tree.graph.phi_witness(3), phi_oracle(&tree.graph, 3));
    assert_eq!(tree.graph.phi_witness(3), 3);
    let bt = fixture("bidirected_tree", &[("degree", 3), ("depth", 4)]);
    assert_eq!(bt.graph.phi_witness(2), phi_oracle(&bt.graph, 2));
    assert_eq!(bt.graph.phi_witness(2), 4);
    for fx in small_fixtures() {
        for r in 0..3 {
            assert_eq!(fx.graph.phi_witness(r), phi_oracle(&fx.graph, r), "{} r={r}", fx.spec.name);
        }
    }
}

#[test]
fn grid_estimate_grows_with_the_window() {
    let small = fixture("grid", &[("n", 4)]);
    let large = fixture("grid", &[("n", 8)]);
    let a = delta_estimate(&small.graph, small.root, 4, 64).unwrap().delta_hat;
    let b = delta_estimate(&large.graph, large.root, 8, 64).unwrap().delta_hat;
    assert!(b > a, "grid(8) gave {b}, grid(4) gave {a}");
    // Frozen values.
    assert_eq!((a, b), (2, 4));
}

#[test]
fn ex_counter_tails() {
    let fx = fixture("ex_counter", &[("depth", 8)]);
    let d = &fx.graph;
    let delta = delta_estimate(d, fx.root, 4, 64).unwrap().delta_hat;
    assert_eq!(delta, 2);
    for i in 2..=4 {
        let (r1, r2) = (fx.ray(&format!("R1_{i}")), fx.ray(&format!("R2_{i}")));
        let t = tail_containment(d, r1, r2, delta).unwrap();
        assert!(t.holds);
        // Every vertex of the tail is within 2 of R1, so the ray order holds at M = 2.
        assert!(ray_leq_window(d, r2, r1, 2, r2.len()).unwrap().holds);
    }
    // The first pair shares only x1; the window is shorter than 6δ̂, so tail
    // containment cannot separate it, but the order at M = 2 does.
    assert!(!ray_leq_window(d, fx.ray("R2_1"), fx.ray("R1_1"), 2, 5).unwrap().holds);
}

/// Liminf of `d(o, P)` over explicitly enumerated geodesics between tail vertices.
fn rho_oracle(d: &DiGraph, o: Vertex, s1: &[Vertex], s2: &[Vertex], from: usize) -> ExtDistance {
    let adj = adjacency(d);
    let from_o = bfs(&adj, o.index());
    let mut best = INF;
    let mut any = false;
    for &x in &s1[from..] {
        let (_, geos) = path_search(&adj, x.index());
        for &y in &s2[from..] {
            for p in &geos[y.index()] {
                any = true;
                best = best.min(p.iter().map(|&w| from_o[w]).min().unwrap());
            }
        }
    }
    if !any {
        ExtDistance::ZERO
    } else if best == INF {
        ExtDistance::Infinite
    } else {
        ExtDistance::Finite(best)
    }
}

#[test]
fn rho_matches_geodesic_enumeration() {
    let fx = fixture("ex_shift", &[("n", 2), ("depth", 3)]);
    let d = &fx.graph;
    let names = ["x", "y1_plus", "y1_minus", "y2_plus", "y2_minus"];
    for a in names {
        for b in names {
            for from in 0..3 {
                let (s1, s2) = (fx.ray(a).vertices(), fx.ray(b).vertices());
                let got = rho_truncated(d, fx.root, s1, s2, from).unwrap();
                assert_eq!(got.value, rho_oracle(d, fx.root, s1, s2, from), "{a} {b} from {from}");
            }
        }
    }
    // Frozen: geodesics from x_i to y1_j run up the double ray through y1_0, one step from the root.
    let r = rho_truncated(d, fx.root, fx.ray("x").vertices(), fx.ray("y1_plus").vertices(), 2).unwrap();
    assert_eq!(r.value, ExtDistance::Finite(1));
}

fn attractor_oracle(d: &DiGraph, o: Vertex, s: &BTreeSet<Vertex>, kappa: u32) -> BTreeSet<usize> {
    let adj = adjacency(d);
    let mut near = BTreeSet::new();
    for x in s {
        near.extend(ball(&adj, x.index(), kappa));
    }
    let (_, geos) = path_search(&adj, o.index());
    (0..d.len()).filter(|&x| geos[x].iter().any(|p| p.iter().any(|w| near.contains(w)))).collect()
}

#[test]
fn attractors_match_geodesic_enumeration() {
    for fx in [fixture("grid", &[("n", 5)]), fixture("out_tree", &[("k", 2), ("depth", 4)]), fixture("graph_ends", &[("n", 3), ("depth", 3)])] {
        let d = &fx.graph;
        let vs: Vec<Vertex> = d.vertices().collect();
        for (i, &seed) in vs.iter().enumerate().step_by(3) {
            for kappa in 0..3 {
                let mut s = BTreeSet::from([seed]);
                if i + 1 < vs.len() {
                    s.insert(vs[i + 1]);
                }
                let kit = build_attractor_with_kappa(d, fx.root, &s, u64::from(kappa)).unwrap();
                let got: BTreeSet<usize> = kit.u_plus.iter().map(|v| v.index()).collect();
                assert_eq!(got, attractor_oracle(d, fx.root, &s, kappa), "{} seed {}", fx.spec.name, d.name(seed));
            }
        }
    }
}

/// Equivalence classes of words of length `≤ t` under a length-preserving
/// presentation, by closure under applying relations in both directions.
fn homogeneous_growth(gens: usize, rels: &[(Word, Word)], t: usize) -> Vec<u64> {
    let mut counts = Vec::new();
    let mut total = 0u64;
    let mut layer: Vec<Word> = vec![Vec::new()];
    for len in 0..=t {
        if len > 0 {
            layer = layer.iter().flat_map(|w| (0..gens as u16).map(move |s| [w.as_slice(), &[s]].concat())).collect();
        }
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        for w in &layer {
            if seen.contains(w) {
                continue;
            }
            total += 1;
            let mut stack = vec![w.clone()];
            seen.insert(w.clone());
            while let Some(x) = stack.pop() {
                for (l, r) in rels {
                    for (a, b) in [(l, r), (r, l)] {
                        for p in 0..=x.len().saturating_sub(a.len()) {
                            if x.len() >= a.len() && &x[p..p + a.len()] == a.as_slice() {
                                let y = [&x[..p], b.as_slice(), &x[p + a.len()..]].concat();
                                if seen.insert(y.clone()) {
                                    stack.push(y);
                                }
                            }
                        }
                    }
                }
            }
        }
        counts.push(total);
    }
    counts
}

#[test]
fn growth_matches_word_enumeration() {
    let cases: [(&[&str], &[&str]); 4] = [
        (&["a", "b"], &[]),
        (&["a", "b"], &["ba=ab"]),
        (&["a", "b", "c"], &["ba=ab", "ca=ac"]),
        (&["a", "b", "c"], &["ba=ab", "cb=bc", "ca=ac"]),
    ];
    for (gens, rels) in cases {
        let p = Presentation::parse(gens, rels).unwrap();
        let rs = complete(&p, 64, 16).unwrap();
        assert!(rs.confluent());
        let t = 7;
        let table = growth_table(&cayley_ball(&rs, t).unwrap());
        assert_eq!(table.counts, homogeneous_growth(gens.len(), p.relations(), t as usize), "{gens:?} {rels:?}");
    }
}

#[test]
fn growth_closed_forms() {
    let free = complete(&Presentation::free(&["a", "b"]).unwrap(), 64, 16).unwrap();
    let t = growth_table(&cayley_ball(&free, 12).unwrap());
    for (i, &c) in t.counts.iter().enumerate() {
        assert_eq!(c, (1u64 << (i + 1)) - 1);
    }
    let comm = complete(&Presentation::parse(&["a", "b"], &["ba=ab"]).unwrap(), 64, 16).unwrap();
    let t = growth_table(&cayley_ball(&comm, 12).unwrap());
    for (i, &c) in t.counts.iter().enumerate() {
        let i = i as u64;
        assert_eq!(c, (i + 1) * (i + 2) / 2);
    }
}

#[test]
fn ex_shift_counts() {
    let fx = fixture("ex_shift", &[("n", 2), ("depth", 5)]);
    let (n, d) = (2u64, 5u64);
    let v_formula = (d + 1) + 5 * n * (2 * d + 1);
    let e_formula = d + n * (d + 1) + 2 * n * d + 2 * n * (2 * d + 1) + 12 * n * (2 * d + 1);
    let recount_v = fx.graph.vertices().count() as u64;
    let recount_e: u64 = fx.graph.vertices().map(|v| fx.graph.out_neighbors(v).len() as u64).sum();
    assert_eq!((recount_v, recount_e), (v_formula, e_formula));
    assert_eq!((v_formula, e_formula), (116, 345));
    assert_eq!(fx.graph.edge_count() as u64, e_formula);
    assert_eq!(fx.graph.interior_out_degree(), Some(3));
    assert_eq!(fx.rays.len(), 5);
}

#[test]
fn free_monoid_search_finds_first_powers() {
    let rs = complete(&Presentation::free(&["a", "b"]).unwrap(), 64, 16).unwrap();
    let b = cayley_ball(&rs, 7).unwrap();
    let d = b.digraph();
    let o = d.root().unwrap();
    let est = delta_estimate(d, o, 6, 64).unwrap();
    let c = Constants::from_window(d, est.delta_hat);
    let params = PingPongParams {
        max_power: 20,
        anchor_depth: 1,
        depth: 4,
        samples: 6,
        kappa: c.kappa_projectivity,
    };
    let ma = left_mul_embedding(&b, &[0]).unwrap();
    let mb = left_mul_embedding(&b, &[1]).unwrap();
    let s = search_pingpong(d, &ma, &mb, o, &params).unwrap();
    let (n, m, inst, _) = s.found.expect("search succeeds");
    assert_eq!((n, m), (1, 1));
    // Cone of a and cone of b.
    let cone = |x: &str| -> BTreeSet<Vertex> { d.vertices().filter(|&v| d.name(v).starts_with(x)).collect() };
    assert_eq!(inst.u, cone("a"));
    assert_eq!(inst.v, cone("b"));
}
