use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use hypermono::embedding::{
    direction_prefix, elliptic_certificate, fixes_direction_window, fpa_window_report, orbit_quasigeodesic_check, orbit_constants,
    translation_certificate, verify_embedding, FpaParams,
};
use hypermono::formats::{parse_digraph, parse_map, parse_presentation, parse_ray, parse_vertex_set, write_digraph, write_map, write_ray};
use hypermono::freeness::{brute_force_free, check_pingpong, search_pingpong, PingPongParams};
use hypermono::gallery::{make_fixture, FixtureSpec, CATALOG};
use hypermono::hyperbolicity::{delta_estimate, Constants, DeltaEstimate};
use hypermono::monoid::{cancellativity_window, cayley_ball, complete, growth_table, left_mul_embedding};
use hypermono::rays::{equivalence_window, ray_leq_window, rho_truncated, tail_containment, visual_interval};
use hypermono::{Certificate, DiGraph, ExtDistance, PartialSelfEmbedding, Vertex};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::report::{name, names, read, rename, to_value, CmdResult, Failure, Report};
use crate::WindowArgs;

fn load_digraph(path: &Path, report: &mut Report) -> CmdResult<DiGraph> {
    let text = read(path, report)?;
    let d = parse_digraph(&text).map_err(|e| Failure::at(path, e))?;
    report.window("vertices", d.len());
    report.window("edges", d.edge_count());
    report.window("frontier_size", d.frontier().len());
    report.window("window_note", d.window_note());
    Ok(d)
}

fn load_map(d: &DiGraph, path: &Path, report: &mut Report) -> CmdResult<PartialSelfEmbedding> {
    let text = read(path, report)?;
    parse_map(d, &text).map_err(|e| Failure::at(path, e))
}

fn base_vertex(d: &DiGraph, w: &WindowArgs, report: &mut Report) -> CmdResult<Vertex> {
    let o = match &w.root {
        Some(r) => d.vertex(r)?,
        None => d.require_root().map_err(|_| Failure::input("no --root given and the digraph has no root line"))?,
    };
    report.window("root", d.name(o));
    report.window("radius", w.radius);
    report.window("cap", w.cap);
    Ok(o)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "map".into())
}

fn estimate_json(d: &DiGraph, est: &DeltaEstimate) -> Value {
    let witness = est.witness.as_ref().map(|(t, rep)| {
        json!({
            "endpoints": names(d, &t.endpoints()),
            "sides": t.sides().iter().map(|s| names(d, s.vertices())).collect::<Vec<_>>(),
            "delta_required": rep.delta_required,
            "worst_vertex": name(d, rep.worst_vertex),
            "worst_labeling": {"p": rep.worst_labeling.p, "q": rep.worst_labeling.q, "r": rep.worst_labeling.r},
        })
    });
    json!({
        "delta_hat": est.delta_hat,
        "endpoint_count": est.endpoint_count,
        "truncated_pairs": est.truncated_pairs,
        "rooted": est.rooted,
        "witness": witness,
    })
}

/// δ̂ and the constants derived from it, recorded in the report.
fn window_constants(d: &DiGraph, o: Vertex, w: &WindowArgs, report: &mut Report) -> CmdResult<Constants> {
    let est = delta_estimate(d, o, w.radius, w.cap)?;
    report.result("delta_estimate", estimate_json(d, &est));
    let consts = Constants::from_window(d, est.delta_hat);
    report.result("constants", to_value(&consts));
    report.say(format!("delta_hat = {} (radius {}, cap {})", est.delta_hat, w.radius, w.cap));
    Ok(consts)
}

pub fn analyze(report: &mut Report, path: &Path, w: &WindowArgs) -> CmdResult<()> {
    let d = load_digraph(path, report)?;
    let o = base_vertex(&d, w, report)?;
    let rc = d.verify_root(o)?;
    report.result("root_check", json!({"rooted": rc.rooted, "witness": rc.witness.map(|v| d.name(v).to_owned())}));
    let consts = window_constants(&d, o, w, report)?;
    report.say(format!("phi_hat = {:?}", consts.phi_table));
    report.say(format!(
        "lambda_fellow = {}, kappa = {}, N = {}",
        consts.lambda_fellow, consts.kappa_projectivity, consts.n_ball_bound
    ));
    if !rc.rooted {
        report.say(format!("note: {} does not reach every vertex", d.name(o)));
    }
    Ok(())
}

pub struct CayleyArgs {
    pub presentation: PathBuf,
    pub radius: u32,
    pub growth_csv: Option<PathBuf>,
    pub max_rules: usize,
    pub max_len: usize,
    pub assume_confluent: bool,
    pub emit: Option<PathBuf>,
}

pub fn cayley(report: &mut Report, a: &CayleyArgs) -> CmdResult<()> {
    let text = read(&a.presentation, report)?;
    let p = parse_presentation(&text).map_err(|e| Failure::at(&a.presentation, e))?;
    report.window("radius", a.radius);
    report.window("max_rules", a.max_rules);
    report.window("max_len", a.max_len);
    let mut rs = complete(&p, a.max_rules, a.max_len)?;
    if a.assume_confluent {
        rs = rs.assume_confluent();
    }
    let rules: Vec<String> = rs.rules().iter().map(|(l, r)| format!("{}={}", rs.format_word(l), rs.format_word(r))).collect();
    report.result(
        "completion",
        json!({"rules": rules, "confluent": rs.confluent(), "limits_hit": rs.limits_hit(), "assumed": rs.assumed()}),
    );
    if !rs.confluent() && !rs.assumed() {
        report.fail(format!(
            "completion did not produce a confluent system (limits hit: {}); rerun with larger limits or --assume-confluent",
            rs.limits_hit()
        ));
        return Ok(());
    }
    let ball = cayley_ball(&rs, a.radius)?;
    let d = ball.digraph();
    report.result(
        "ball",
        json!({"elements": ball.len(), "edges": d.edge_count(), "frontier": d.frontier().len(), "window_note": d.window_note()}),
    );
    let table = growth_table(&ball);
    report.result("growth", json!({"counts": table.counts, "rate_estimate": table.rate_estimate(), "csv": table.to_csv()}));
    let canc = cancellativity_window(&ball)?;
    let side = |w: &Option<(Vec<u16>, Vec<u16>, Vec<u16>)>| {
        w.as_ref()
            .map(|(x, y, s)| json!({"x": rs.format_word(x), "y": rs.format_word(y), "generator": rs.format_word(s)}))
    };
    report.result(
        "cancellativity",
        json!({"left_ok": canc.left.is_none(), "right_ok": canc.right.is_none(), "left_witness": side(&canc.left), "right_witness": side(&canc.right)}),
    );
    if let Some(path) = &a.growth_csv {
        std::fs::write(path, table.to_csv()).map_err(|e| Failure::at(path, e))?;
        report.result("growth_csv_path", path.display().to_string());
    }
    if let Some(dir) = &a.emit {
        std::fs::create_dir_all(dir).map_err(|e| Failure::at(dir, e))?;
        let mut files = vec![("ball.dg".to_string(), write_digraph(d))];
        for (i, gen) in rs.generators().iter().enumerate() {
            let g = left_mul_embedding(&ball, &[i as u16])?;
            files.push((format!("left_{gen}.map"), write_map(d, &g)));
        }
        let mut listed = Vec::new();
        for (file, text) in files {
            let path = dir.join(&file);
            std::fs::write(&path, &text).map_err(|e| Failure::at(&path, e))?;
            listed.push(json!({"file": file, "sha256": hex::encode(Sha256::digest(text.as_bytes()))}));
        }
        report.result("emitted", Value::Array(listed));
    }
    report.say(format!("{} elements within radius {}", ball.len(), a.radius));
    for line in table.to_csv().lines() {
        report.say(line.to_owned());
    }
    report.say(format!("growth rate estimate {:.4}", table.rate_estimate()));
    Ok(())
}

pub struct ClassifyArgs {
    pub digraph: PathBuf,
    pub map: PathBuf,
    pub max_power: u32,
    pub depth: usize,
    pub samples: u32,
    pub m: Option<u32>,
    pub k: usize,
    pub window: WindowArgs,
}

fn cert_json(d: &DiGraph, c: &Certificate) -> CmdResult<Value> {
    let mut v = to_value(c);
    v["rechecks"] = json!(c.recheck(d)?);
    Ok(v)
}

fn check_embedding(d: &DiGraph, g: &PartialSelfEmbedding, label: &str, report: &mut Report) -> CmdResult<bool> {
    let chk = verify_embedding(d, g)?;
    let violation = chk.violation.as_ref().map(|v| v.describe(d));
    report.result(
        &format!("{label}_embedding"),
        json!({"ok": chk.ok, "violation": violation, "distance_clause": chk.distance_clause, "finite_pairs_checked": chk.finite_pairs_checked, "domain": g.len(), "trimmed": g.trimmed().len()}),
    );
    if !chk.ok {
        report.fail(format!("{label} is not a self-embedding: {}", violation.unwrap_or_default()));
    }
    Ok(chk.ok)
}

pub fn classify(report: &mut Report, a: &ClassifyArgs) -> CmdResult<()> {
    let d = load_digraph(&a.digraph, report)?;
    let o = base_vertex(&d, &a.window, report)?;
    let g = load_map(&d, &a.map, report)?;
    let label = stem(&a.map);
    report.window("max_power", a.max_power);
    report.window("depth", a.depth);
    report.window("samples", a.samples);
    if !check_embedding(&d, &g, "map", report)? {
        return Ok(());
    }
    let consts = window_constants(&d, o, &a.window, report)?;
    let m = a.m.unwrap_or((12 * consts.delta).min(u64::from(u32::MAX)) as u32);
    report.window("M", m);
    report.window("k", a.k);

    let elliptic = elliptic_certificate(&d, &g, a.window.radius, a.max_power)?;
    let translation = translation_certificate(&d, &g)?;
    report.result("elliptic", cert_json(&d, &elliptic)?);
    report.result("translation", cert_json(&d, &translation)?);
    report.say(format!("{label}: elliptic {}, translation {}", elliptic.tag(), translation.tag()));

    let mut orbit = vec![g.base()];
    while let Some(next) = g.apply(*orbit.last().expect("non-empty")) {
        if orbit.len() > d.len() {
            break;
        }
        orbit.push(next);
    }
    let distinct: BTreeSet<Vertex> = orbit.iter().copied().collect();
    report.result("orbit", json!({"vertices": names(&d, &orbit), "injective": distinct.len() == orbit.len()}));

    if elliptic.is_unknown() {
        let dir = direction_prefix(&d, &g, a.depth, a.samples)?;
        let fix = fixes_direction_window(&d, &g, &dir.prefix, m, a.k)?;
        report.result(
            "direction",
            json!({
                "prefix": names(&d, dir.prefix.vertices()),
                "support_counts": dir.support_counts,
                "truncated": dir.truncated,
                "samples_used": dir.samples_used,
                "geodesic_cap": dir.geodesic_cap,
                "fixed_by_map": rename(&d, to_value(&fix.verdict), &["witness"]),
                "image_trimmed": fix.trimmed,
            }),
        );
        report.say(format!("direction prefix {}", dir.prefix.vertices().iter().map(|&v| d.name(v)).collect::<Vec<_>>().join(" ")));
        match d.distance(o, g.apply(o).unwrap_or(o))? {
            ExtDistance::Finite(d0) if g.apply(o).is_some() && d0 > 0 => {
                let pc = orbit_constants(consts.delta, consts.phi_delta_plus_1(), consts.n_ball_bound, u64::from(d0))?;
                let oc = orbit_quasigeodesic_check(&d, &g, o, a.max_power, &pc)?;
                report.say(format!(
                    "orbit quasi-geodesic (gamma {}, c {}): {} over {} iterates",
                    pc.gamma, pc.c, oc.holds, oc.iterations_checked
                ));
                report.result("orbit_quasigeodesic", json!({"constants": to_value(&pc), "check": to_value(&oc), "d0": d0}));
            }
            _ => report.result("orbit_quasigeodesic", json!({"skipped": "base vertex has no image at finite positive distance"})),
        }
    }

    let fpa = fpa_window_report(
        &d,
        &[(label.clone(), g.clone())],
        &FpaParams {
            ball_radius: a.window.radius,
            max_power: a.max_power,
            depth: a.depth,
            samples: a.samples,
            m,
            k: a.k,
        },
    )?;
    report.result(
        "fpa",
        json!({"case_i": fpa.case_i, "case_ii_iii": fpa.case_ii_iii, "case_iv": fpa.case_iv, "fixes": fpa.fixes, "direction_classes": fpa.direction_classes}),
    );
    if elliptic.is_unknown() && translation.is_unknown() {
        report.fail(format!("{label}: no certificate within the window"));
    }
    Ok(())
}

pub struct PingpongArgs {
    pub digraph: PathBuf,
    pub map1: PathBuf,
    pub map2: PathBuf,
    pub check: Option<Vec<PathBuf>>,
    pub oracle: Option<usize>,
    pub probe: Vec<String>,
    pub max_power: u32,
    pub depth: usize,
    pub samples: u32,
    pub anchor: usize,
    pub window: WindowArgs,
}

pub fn pingpong(report: &mut Report, a: &PingpongArgs) -> CmdResult<()> {
    let d = load_digraph(&a.digraph, report)?;
    let o = base_vertex(&d, &a.window, report)?;
    let m1 = load_map(&d, &a.map1, report)?;
    let m2 = load_map(&d, &a.map2, report)?;
    let ok1 = check_embedding(&d, &m1, "m1", report)?;
    let ok2 = check_embedding(&d, &m2, "m2", report)?;
    if !(ok1 && ok2) {
        return Ok(());
    }
    let (mut p1, mut p2) = (m1.clone(), m2.clone());
    let mut certificate = None;
    match &a.check {
        Some(sets) => {
            report.window("mode", "check");
            let u = parse_vertex_set(&d, &read(&sets[0], report)?).map_err(|e| Failure::at(&sets[0], e))?;
            let v = parse_vertex_set(&d, &read(&sets[1], report)?).map_err(|e| Failure::at(&sets[1], e))?;
            let inst = hypermono::PingPongInstance::new(m1.clone(), m2.clone(), u, v);
            match check_pingpong(&d, &inst)? {
                Ok(c) => certificate = Some(c),
                Err(viol) => {
                    report.result("violation", to_value(&viol));
                    report.fail(format!("ping-pong check failed: {}", viol.describe(&d)));
                }
            }
        }
        None => {
            report.window("mode", "search");
            report.window("max_power", a.max_power);
            report.window("depth", a.depth);
            report.window("samples", a.samples);
            report.window("anchor", a.anchor);
            let consts = window_constants(&d, o, &a.window, report)?;
            let params = PingPongParams {
                max_power: a.max_power,
                anchor_depth: a.anchor,
                depth: a.depth,
                samples: a.samples,
                kappa: consts.kappa_projectivity,
            };
            let s = search_pingpong(&d, &m1, &m2, o, &params)?;
            report.result(
                "search",
                json!({
                    "direction_m1": names(&d, s.direction_g.prefix.vertices()),
                    "direction_m2": names(&d, s.direction_h.prefix.vertices()),
                    "kappa": params.kappa,
                    "attractor_u_size": s.attractor_u.u_plus.len(),
                    "attractor_v_size": s.attractor_v.u_plus.len(),
                    "powers": s.found.as_ref().map(|f| [f.0, f.1]),
                    "failure": s.failure,
                    "closest_m1": s.closest_g,
                    "closest_m2": s.closest_h,
                }),
            );
            match s.found {
                Some((n, m, _, c)) => {
                    report.say(format!("ping-pong powers (n, m) = ({n}, {m})"));
                    p1 = m1.power(n);
                    p2 = m2.power(m);
                    certificate = Some(c);
                }
                None => report.fail(format!("no ping-pong instance: {}", s.failure.unwrap_or_default())),
            }
        }
    }
    if let Some(c) = &certificate {
        report.result("certificate", cert_json(&d, c)?);
        report.say("certificate: PingPongFree".to_string());
    }
    if let Some(l) = a.oracle {
        let probes: Vec<Vertex> = if a.probe.is_empty() {
            vec![o]
        } else {
            a.probe.iter().map(|p| d.vertex(p)).collect::<Result<_, _>>()?
        };
        report.window("oracle_length", l);
        let verdict = brute_force_free(&d, &p1, &p2, l, &probes)?;
        let mut v = to_value(&verdict);
        v = rename(&d, v, &["probes_used", "probes_trimmed"]);
        report.result("oracle", v);
        report.say(format!("oracle: {}/{} distinct", verdict.distinct, verdict.words));
        if !verdict.free {
            let (x, y) = verdict.collisions.first().cloned().unwrap_or_default();
            report.fail(format!("oracle collision: {x} = {y}"));
        }
    }
    Ok(())
}

pub struct RaysArgs {
    pub digraph: PathBuf,
    pub ray1: PathBuf,
    pub ray2: PathBuf,
    pub m: Option<u32>,
    pub k: usize,
    pub tail_from: usize,
    pub visual: Option<Vec<f64>>,
    pub window: WindowArgs,
}

pub fn rays(report: &mut Report, a: &RaysArgs) -> CmdResult<()> {
    let d = load_digraph(&a.digraph, report)?;
    let o = base_vertex(&d, &a.window, report)?;
    let r1 = parse_ray(&d, &read(&a.ray1, report)?).map_err(|e| Failure::at(&a.ray1, e))?;
    let r2 = parse_ray(&d, &read(&a.ray2, report)?).map_err(|e| Failure::at(&a.ray2, e))?;
    let consts = window_constants(&d, o, &a.window, report)?;
    let delta = consts.delta.min(u64::from(u32::MAX)) as u32;
    let m = a.m.unwrap_or(delta.saturating_mul(12));
    report.window("M", m);
    report.window("k", a.k);
    report.window("tail_from", a.tail_from);
    let verdict = |v| rename(&d, to_value(&v), &["witness"]);
    let leq12 = ray_leq_window(&d, &r1, &r2, m, a.k)?;
    let leq21 = ray_leq_window(&d, &r2, &r1, m, a.k)?;
    let eq = equivalence_window(&d, &r1, &r2, m, a.k)?;
    let tail12 = tail_containment(&d, &r1, &r2, delta)?;
    let tail21 = tail_containment(&d, &r2, &r1, delta)?;
    let rho = rho_truncated(&d, o, r1.vertices(), r2.vertices(), a.tail_from)?;
    report.result(
        "rays",
        json!({
            "ray1": {"kind": r1.kind().as_str(), "len": r1.len(), "geodesic": r1.geodesic()},
            "ray2": {"kind": r2.kind().as_str(), "len": r2.len(), "geodesic": r2.geodesic()},
        }),
    );
    report.result("leq_1_2", verdict(leq12.clone()));
    report.result("leq_2_1", verdict(leq21.clone()));
    report.result("equivalent", verdict(eq.clone()));
    report.result("tail_2_in_1", to_value(&tail12));
    report.result("tail_1_in_2", to_value(&tail21));
    let mut rho_v = to_value(&rho);
    rho_v["distance_to"] = json!("nearest vertex of the geodesic");
    report.result("rho", rho_v);
    if let Some(vc) = &a.visual {
        match rho.value {
            ExtDistance::Finite(r) => {
                let iv = visual_interval(f64::from(r), vc[0], vc[1])?;
                report.result("visual_interval", to_value(&iv));
            }
            ExtDistance::Infinite => report.result("visual_interval", json!({"lower": 0.0, "upper": 0.0})),
        }
    }
    report.say(format!(
        "R1 <= R2: {} ({} matched), R2 <= R1: {} ({} matched), rho = {}",
        leq12.holds, leq12.matched_count, leq21.holds, leq21.matched_count, rho.value
    ));
    if !eq.holds {
        report.fail(format!("rays are not equivalent at M = {m}, k = {}", a.k));
    }
    Ok(())
}

pub fn gallery(report: &mut Report, fixture: Option<&str>, params: &[String], out: &Path, list: bool) -> CmdResult<()> {
    if list {
        report.result("catalog", json!(CATALOG.lines().collect::<Vec<_>>()));
        report.say(CATALOG.to_string());
        return Ok(());
    }
    let Some(fixture) = fixture else {
        return Err(Failure::input(format!("missing fixture name; catalog:\n{CATALOG}")));
    };
    let spec = FixtureSpec::parse(fixture, params)?;
    let fx = make_fixture(&spec)?;
    std::fs::create_dir_all(out).map_err(|e| Failure::at(out, e))?;
    let mut files = Vec::new();
    let mut emit = |file: String, text: String| -> CmdResult<()> {
        let path = out.join(&file);
        std::fs::write(&path, &text).map_err(|e| Failure::at(&path, e))?;
        files.push(json!({"file": file, "sha256": hex::encode(Sha256::digest(text.as_bytes()))}));
        Ok(())
    };
    emit(format!("{fixture}.dg"), write_digraph(&fx.graph))?;
    for (m, g) in &fx.maps {
        emit(format!("{m}.map"), write_map(&fx.graph, g))?;
    }
    for (r, ray) in &fx.rays {
        emit(format!("{r}.ray"), write_ray(&fx.graph, ray))?;
    }
    report.window("fixture", fixture);
    report.window("params", to_value(&spec.params));
    report.window("index_set", to_value(&spec.index_set));
    report.window("window_note", fx.graph.window_note());
    report.result("vertices", fx.graph.len());
    report.result("edges", fx.graph.edge_count());
    report.result("root", name(&fx.graph, fx.root));
    report.result("files", Value::Array(files));
    report.say(format!(
        "{fixture}: {} vertices, {} edges, {} maps, {} rays written to {}",
        fx.graph.len(),
        fx.graph.edge_count(),
        fx.maps.len(),
        fx.rays.len(),
        out.display()
    ));
    Ok(())
}
