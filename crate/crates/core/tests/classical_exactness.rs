use lmc_core::classical::{
    exact_prob_d2, exact_prob_d3, monte_carlo, neighborhood_oracle_prob, prob_satisfied_initial,
    run_one_round, satisfied, ClassicalParams,
};
use lmc_core::graph::{make_cycle, make_random_regular};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng, d: usize) -> ClassicalParams {
    ClassicalParams::new(rng.gen(), (0..=d).map(|_| rng.gen()).collect()).unwrap()
}

#[test]
fn exact_forms_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for _ in 0..200 {
        let p2 = random_params(&mut rng, 2);
        let (a, b) = (exact_prob_d2(&p2).unwrap(), neighborhood_oracle_prob(2, &p2).unwrap());
        assert!((a - b).abs() <= 1e-12, "{p2:?}");
        assert!((0.0..=1.0).contains(&a));
        let p3 = random_params(&mut rng, 3);
        let (a, b) = (exact_prob_d3(&p3).unwrap(), neighborhood_oracle_prob(3, &p3).unwrap());
        assert!((a - b).abs() <= 1e-12, "{p3:?}");
        assert!((0.0..=1.0).contains(&a));
    }
}

#[test]
fn initial_satisfaction_matches_oracle() {
    for (d, want) in [(2, 0.75), (3, 0.5), (4, 11.0 / 16.0)] {
        let closed = prob_satisfied_initial(d, 0.5).unwrap();
        let oracle = neighborhood_oracle_prob(d, &ClassicalParams::new(0.5, vec![0.0; d + 1]).unwrap()).unwrap();
        assert_eq!(closed, want);
        assert!((oracle - want).abs() <= 1e-12);
    }
}

#[test]
fn satisfied_vertices_stay_satisfied_on_cycles() {
    let g = make_cycle(501).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..50 {
        let params = ClassicalParams::new(rng.gen(), vec![0.0, 0.0, rng.gen()]).unwrap();
        let r = run_one_round(&g, &params, trial).unwrap();
        for v in 0..g.n() {
            if satisfied(&g, &r.initial, v) {
                assert!(satisfied(&g, &r.cut, v), "trial {trial} vertex {v}");
            }
        }
    }
}

#[test]
fn stderr_shrinks_like_inverse_sqrt() {
    let g = make_cycle(200).unwrap();
    let params = ClassicalParams::new(0.5, vec![0.0, 0.0, 0.8]).unwrap();
    let small = monte_carlo(&g, &params, 100, 3).unwrap();
    let large = monte_carlo(&g, &params, 1600, 3).unwrap();
    let ratio = small.stderr / large.stderr;
    assert!((2.5..6.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn monte_carlo_concordance() {
    let cycle = make_cycle(10_000).unwrap();
    let opt2 = ClassicalParams::new(0.5, vec![0.0, 0.0, 0.8]).unwrap();
    let r = monte_carlo(&cycle, &opt2, 200, 11).unwrap();
    assert!((r.mean - 0.95).abs() <= 4.0 * r.stderr, "{} ± {}", r.mean, r.stderr);

    let cubic = make_random_regular(1000, 3, 5, 17, 200).unwrap();
    let opt3 = ClassicalParams::new(0.3912, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    let exact = exact_prob_d3(&opt3).unwrap();
    let r = monte_carlo(&cubic, &opt3, 500, 13).unwrap();
    assert!((r.mean - exact).abs() <= 4.0 * r.stderr, "{} ± {} vs {exact}", r.mean, r.stderr);
}
