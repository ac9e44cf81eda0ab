use lmc_core::classical::{satisfied_count, Cut};
use lmc_core::graph::{make_cycle, make_named, make_random_regular, Graph, NamedGraph};
use lmc_core::hamiltonian::{
    build_localmaxcut_hamiltonian, fourier_encode_clause, hamiltonian_from_clauses,
    local_satisfaction_clause, localmaxcut_clauses, Clause,
};
use lmc_core::subset::VertexSet;
use proptest::prelude::*;

fn s(v: &[usize]) -> VertexSet {
    VertexSet::from_vertices(v.iter().copied())
}

#[test]
fn golden_local_terms() {
    let h2 = fourier_encode_clause(&local_satisfaction_clause(2).unwrap()).unwrap();
    let want2 = [(s(&[]), 0.75), (s(&[0, 1]), -0.25), (s(&[0, 2]), -0.25), (s(&[1, 2]), -0.25)];
    assert_eq!(h2.terms().collect::<Vec<_>>().len(), 4);
    for (k, w) in want2 {
        assert_eq!(h2.weight(k), w);
    }
    let h3 = fourier_encode_clause(&local_satisfaction_clause(3).unwrap()).unwrap();
    let want3 = [
        (s(&[]), 0.5),
        (s(&[0, 1]), -0.25),
        (s(&[0, 2]), -0.25),
        (s(&[0, 3]), -0.25),
        (s(&[0, 1, 2, 3]), 0.25),
    ];
    assert_eq!(h3.terms().count(), 5);
    for (k, w) in want3 {
        assert_eq!(h3.weight(k), w);
    }
}

fn all_cuts_agree(g: &Graph) {
    let h = build_localmaxcut_hamiltonian(g).unwrap();
    for x in 0..1u64 << g.n() {
        let bits: Vec<bool> = (0..g.n()).map(|i| (x >> i) & 1 == 1).collect();
        let sat = satisfied_count(g, &Cut::from_bits(&bits)) as f64;
        assert_eq!(h.evaluate_classical(&bits).unwrap(), sat);
    }
}

#[test]
fn hamiltonian_counts_satisfied_vertices() {
    for n in 3..=12 {
        all_cuts_agree(&make_cycle(n).unwrap());
    }
    for name in [
        NamedGraph::K4,
        NamedGraph::Cube,
        NamedGraph::K33,
        NamedGraph::Petersen,
        NamedGraph::Heawood,
    ] {
        all_cuts_agree(&make_named(name));
    }
    all_cuts_agree(&make_random_regular(16, 4, 3, 3, 100).unwrap());
}

#[test]
fn accumulation_is_order_independent() {
    let g = make_named(NamedGraph::Petersen);
    let mut clauses = localmaxcut_clauses(&g).unwrap();
    let forward = hamiltonian_from_clauses(g.n(), &clauses).unwrap();
    clauses.reverse();
    clauses.swap(2, 7);
    let shuffled = hamiltonian_from_clauses(g.n(), &clauses).unwrap();
    assert_eq!(forward, shuffled);
}

#[test]
fn cycle_term_counts() {
    for n in 5..=20 {
        let h = build_localmaxcut_hamiltonian(&make_cycle(n).unwrap()).unwrap();
        assert_eq!(h.num_terms(), 1 + 2 * n);
    }
}

proptest! {
    #[test]
    fn encoder_reconstructs(k in 1usize..=8, seed in any::<u64>()) {
        let table: Vec<f64> = (0..1u64 << k)
            .map(|x| ((x.wrapping_mul(seed | 1).rotate_left(17) % 7) as f64) / 4.0)
            .collect();
        let clause = Clause::new((0..k).collect(), table.clone()).unwrap();
        let h = fourier_encode_clause(&clause).unwrap();
        for (x, want) in table.iter().enumerate() {
            prop_assert!((h.evaluate_bits(x as u64) - want).abs() < 1e-12);
        }
    }
}
