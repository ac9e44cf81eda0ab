//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use lmc_core::classical::{
    exact_prob_d2, exact_prob_d3, monte_carlo, neighborhood_oracle_prob, prob_satisfied_initial,
    q2_star, ClassicalParams,
};
use lmc_core::graph::{make_cycle, make_named, make_random_regular, Graph, NamedGraph};
use lmc_core::hamiltonian::{build_localmaxcut_hamiltonian, fourier_encode_clause, local_satisfaction_clause};
use lmc_core::optimize::{optimize_classical, optimize_qaoa};
use lmc_core::qaoa::{
    closed_form_f2, expectation_full, expectation_zk_value, tree_patch, zk_ball_d3, zk_edge_d2,
    zk_edge_d3, zk_pair_d2, PatchKind, QaoaAngles,
};
use lmc_core::statevector::qaoa_expectation_sv;
use lmc_core::VertexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lmc(err: lmc_core::LmcError) -> String {
    err.to_string()
}

fn c1_classical_d2() -> Check {
    let r = optimize_classical(2).map_err(lmc)?;
    let x = &r.argmax;
    ensure((r.value - 0.95).abs() <= 1e-6, format!("value {}", r.value))?;
    ensure((x[0] - 0.5).abs() <= 1e-3, format!("p {}", x[0]))?;
    ensure((x[3] - 0.8).abs() <= 1e-3, format!("q2 {}", x[3]))?;
    ensure(x[2] <= 1e-4, format!("q1 {}", x[2]))?;
    let q2s = q2_star(x[0], x[2]).map_err(lmc)?;
    ensure((x[3] - q2s).abs() <= 1e-4, format!("q2 {} vs q2* {q2s}", x[3]))?;
    Ok(format!("value {:.9} at p={:.6} q={:.6?}", r.value, x[0], &x[1..]))
}

fn c2_qaoa_d2() -> Check {
    let r = optimize_qaoa(2).map_err(lmc)?;
    ensure((r.value - 0.93937).abs() <= 1e-4 && r.value < 0.94, format!("value {}", r.value))?;
    Ok(format!("value {:.9} at gamma={:.6} beta={:.6}", r.value, r.argmax[0], r.argmax[1]))
}

fn c3_qaoa_d3() -> Check {
    let r = optimize_qaoa(3).map_err(lmc)?;
    ensure((r.value - 0.819292).abs() <= 1e-4 && r.value > 0.81, format!("value {}", r.value))?;
    Ok(format!("value {:.9} at gamma={:.6} beta={:.6}", r.value, r.argmax[0], r.argmax[1]))
}

fn c4_classical_d3() -> Check {
    let r = optimize_classical(3).map_err(lmc)?;
    ensure((r.value - 0.77).abs() <= 5e-3 && r.value < 0.8, format!("value {}", r.value))?;
    for (q, want) in r.argmax[1..].iter().zip([0.0, 0.0, 0.0, 1.0]) {
        ensure((q - want).abs() <= 1e-3, format!("argmax q {:?}", &r.argmax[1..]))?;
    }
    Ok(format!(
        "value {:.9} at p={:.6} q={:.6?} ({} distinct maxima)",
        r.value,
        r.argmax[0],
        &r.argmax[1..],
        r.maxima.len()
    ))
}

fn fixture_graphs() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = (3..=9).map(|n| (format!("C{n}"), make_cycle(n).unwrap())).collect();
    for g in [
        NamedGraph::K4,
        NamedGraph::Cube,
        NamedGraph::K33,
        NamedGraph::Petersen,
        NamedGraph::Heawood,
    ] {
        out.push((g.to_string(), make_named(g)));
    }
    out
}

fn random_angles(seed: u64, count: usize) -> Vec<QaoaAngles> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| QaoaAngles::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..PI)))
        .collect()
}

fn max_oracle_gap(g: &Graph, angles: &[QaoaAngles]) -> Result<f64, String> {
    let h = build_localmaxcut_hamiltonian(g).map_err(lmc)?;
    let mut worst = 0.0f64;
    for &a in angles {
        let e = expectation_full(&h, a).map_err(lmc)?;
        let s = qaoa_expectation_sv(&h, a).map_err(lmc)?;
        worst = worst.max((e - s).abs());
    }
    Ok(worst)
}

fn c5_oracle_equivalence() -> Check {
    let angles = random_angles(5, 50);
    let mut worst = 0.0f64;
    for (name, g) in fixture_graphs() {
        let gap = max_oracle_gap(&g, &angles)?;
        ensure(gap <= 1e-9, format!("{name}: gap {gap:e}"))?;
        worst = worst.max(gap);
    }
    Ok(format!("12 graphs x 50 angles, max gap {worst:.2e}"))
}

fn c6_closed_form_fidelity() -> Check {
    let patches: [(usize, PatchKind, fn(QaoaAngles) -> f64); 4] = [
        (2, PatchKind::Edge, zk_edge_d2),
        (2, PatchKind::Pair, zk_pair_d2),
        (3, PatchKind::Edge, zk_edge_d3),
        (3, PatchKind::Ball, zk_ball_d3),
    ];
    let grid: Vec<QaoaAngles> = (0..32)
        .flat_map(|i| (0..32).map(move |j| QaoaAngles::new(2.0 * PI * i as f64 / 32.0, PI * j as f64 / 32.0)))
        .collect();
    let mut worst = 0.0f64;
    for (d, kind, closed) in patches {
        let p = tree_patch(d, kind).map_err(lmc)?;
        for &a in &grid {
            let gap = (expectation_zk_value(&p.hamiltonian, p.k, a).map_err(lmc)? - closed(a)).abs();
            ensure(gap <= 1e-9, format!("patch ({d},{kind}) at {a:?}: gap {gap:e}"))?;
            worst = worst.max(gap);
        }
    }
    let coarse: Vec<QaoaAngles> = grid.iter().step_by(37).copied().collect();
    for n in [7, 8, 11] {
        let h = build_localmaxcut_hamiltonian(&make_cycle(n).unwrap()).map_err(lmc)?;
        for &a in &coarse {
            let gap = (expectation_full(&h, a).map_err(lmc)? - closed_form_f2(n as f64, a)).abs();
            ensure(gap <= 1e-9, format!("C{n} at {a:?}: gap {gap:e}"))?;
            worst = worst.max(gap);
        }
    }
    let mcgee = make_named(NamedGraph::McGee);
    let h = build_localmaxcut_hamiltonian(&mcgee).map_err(lmc)?;
    let n = mcgee.n() as f64;
    for &a in &coarse {
        let assembled = n * (0.5 - 0.75 * zk_edge_d3(a) + 0.25 * zk_ball_d3(a));
        let gap = (expectation_full(&h, a).map_err(lmc)? - assembled).abs();
        ensure(gap <= 1e-9, format!("McGee at {a:?}: gap {gap:e}"))?;
        worst = worst.max(gap);
    }
    Ok(format!("4 patches x 1024 angles, C_n and McGee assembled forms; max gap {worst:.2e}"))
}

fn c7_encoder_golden() -> Check {
    let h2 = fourier_encode_clause(&local_satisfaction_clause(2).map_err(lmc)?).map_err(lmc)?;
    let s = |v: &[usize]| VertexSet::from_vertices(v.iter().copied());
    let want2 = vec![(s(&[]), 0.75), (s(&[0, 1]), -0.25), (s(&[0, 2]), -0.25), (s(&[1, 2]), -0.25)];
    let mut got2: Vec<_> = h2.terms().collect();
    got2.sort_by_key(|t| t.0);
    let mut w2 = want2.clone();
    w2.sort_by_key(|t| t.0);
    ensure(got2 == w2, format!("d=2 terms {got2:?}"))?;
    let h3 = fourier_encode_clause(&local_satisfaction_clause(3).map_err(lmc)?).map_err(lmc)?;
    let mut want3 = vec![
        (s(&[]), 0.5),
        (s(&[0, 1]), -0.25),
        (s(&[0, 2]), -0.25),
        (s(&[0, 3]), -0.25),
        (s(&[0, 1, 2, 3]), 0.25),
    ];
    want3.sort_by_key(|t| t.0);
    let mut got3: Vec<_> = h3.terms().collect();
    got3.sort_by_key(|t| t.0);
    ensure(got3 == want3, format!("d=3 terms {got3:?}"))?;
    Ok("d=2: 3/4, -1/4 x3; d=3: 1/2, -1/4 x3, +1/4 (exact)".into())
}

fn c8_classical_exactness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        for d in [2, 3] {
            let params =
                ClassicalParams::new(rng.gen(), (0..=d).map(|_| rng.gen()).collect()).map_err(lmc)?;
            let exact = if d == 2 { exact_prob_d2(&params) } else { exact_prob_d3(&params) }.map_err(lmc)?;
            let oracle = neighborhood_oracle_prob(d, &params).map_err(lmc)?;
            let gap = (exact - oracle).abs();
            ensure(gap <= 1e-12, format!("d={d} {params:?}: gap {gap:e}"))?;
            worst = worst.max(gap);
        }
    }
    Ok(format!("200 points per degree, max gap {worst:.2e}"))
}

fn c9_initial_probability() -> Check {
    let mut parts = Vec::new();
    for (d, want) in [(2usize, 0.75), (3, 0.5), (4, 11.0 / 16.0)] {
        let closed = prob_satisfied_initial(d, 0.5).map_err(lmc)?;
        let oracle =
            neighborhood_oracle_prob(d, &ClassicalParams::new(0.5, vec![0.0; d + 1]).map_err(lmc)?).map_err(lmc)?;
        ensure(closed == want, format!("d={d}: closed {closed}"))?;
        ensure((oracle - want).abs() <= 1e-12, format!("d={d}: oracle {oracle}"))?;
        parts.push(format!("d={d}: {closed}"));
    }
    Ok(parts.join(", "))
}

fn c10_monte_carlo() -> Check {
    let cycle = make_cycle(10_000).map_err(lmc)?;
    let opt2 = ClassicalParams::new(0.5, vec![0.0, 0.0, 0.8]).map_err(lmc)?;
    let r2 = monte_carlo(&cycle, &opt2, 200, 10).map_err(lmc)?;
    ensure(
        (r2.mean - 0.95).abs() <= 4.0 * r2.stderr,
        format!("C_10000: {} ± {}", r2.mean, r2.stderr),
    )?;
    let cubic = make_random_regular(1000, 3, 5, 10, 500).map_err(lmc)?;
    ensure(cubic.girth().unwrap_or(usize::MAX) >= 5, "cubic girth below 5")?;
    let opt3 = ClassicalParams::new(0.3912, vec![0.0, 0.0, 0.0, 1.0]).map_err(lmc)?;
    let exact = exact_prob_d3(&opt3).map_err(lmc)?;
    let r3 = monte_carlo(&cubic, &opt3, 500, 10).map_err(lmc)?;
    ensure(
        (r3.mean - exact).abs() <= 4.0 * r3.stderr,
        format!("cubic: {} ± {} vs {exact}", r3.mean, r3.stderr),
    )?;
    Ok(format!(
        "C_10000 {:.5}±{:.5} vs 0.95; cubic {:.5}±{:.5} vs {:.5}",
        r2.mean, r2.stderr, r3.mean, r3.stderr, exact
    ))
}

fn reproduce_values(degree: u32) -> Result<(f64, f64), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lmc"))
        .args(["--format", "json", "--no-timestamp", "reproduce", "--degree", &degree.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("degree {degree}: exit {:?}", out.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let q = v["result"]["quantum_value"].as_f64().ok_or("missing quantum_value")?;
    let c = v["result"]["classical_value"].as_f64().ok_or("missing classical_value")?;
    Ok((q, c))
}

fn c11_separation_script() -> Check {
    let (q2, c2) = reproduce_values(2)?;
    ensure(c2 > q2, format!("degree 2: classical {c2} <= quantum {q2}"))?;
    let (q3, c3) = reproduce_values(3)?;
    ensure(q3 > c3, format!("degree 3: quantum {q3} <= classical {c3}"))?;
    let bad = Command::new(env!("CARGO_BIN_EXE_lmc"))
        .args(["reproduce", "--degree", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(!bad.status.success(), "degree 4 accepted")?;
    Ok(format!("d=2 classical {c2:.6} > quantum {q2:.6}; d=3 quantum {q3:.6} > classical {c3:.6}"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, &str, fn() -> Check, u64); 11] = [
        (1, "degree-2 classical optimum", c1_classical_d2, 10),
        (2, "degree-2 QAOA optimum", c2_qaoa_d2, 10),
        (3, "degree-3 QAOA optimum", c3_qaoa_d3, 10),
        (4, "degree-3 classical optimum", c4_classical_d3, 60),
        (5, "engine vs statevector", c5_oracle_equivalence, 60),
        (6, "closed-form fidelity", c6_closed_form_fidelity, 600),
        (7, "encoder golden values", c7_encoder_golden, 600),
        (8, "classical exactness", c8_classical_exactness, 30),
        (9, "initial satisfaction probability", c9_initial_probability, 600),
        (10, "Monte Carlo concordance", c10_monte_carlo, 120),
        (11, "separation via CLI", c11_separation_script, 600),
    ];
    let mut failures = Vec::new();
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{msg}; took {elapsed:.1?}, limit {limit}s"))
            }
            other => other,
        };
        match &result {
            Ok(msg) => println!("criterion {id:>2} PASS  {name} ({elapsed:.2?}): {msg}"),
            Err(msg) => {
                println!("criterion {id:>2} FAIL  {name} ({elapsed:.2?}): {msg}");
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

#[test]
#[ignore = "slow: 24-qubit dense simulation"]
fn acceptance_mcgee_oracle() {
    let start = Instant::now();
    let gap = max_oracle_gap(&make_named(NamedGraph::McGee), &random_angles(55, 3)).unwrap();
    println!("McGee: max gap {gap:.2e} in {:.1?}", start.elapsed());
    assert!(gap <= 1e-8);
    assert!(start.elapsed() <= Duration::from_secs(600));
}
