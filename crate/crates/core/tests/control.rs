use netperturb_core::control::{
    is_structurally_controllable, paths_and_generic_rank, reachability_and_matching, source_sccs,
};
use netperturb_core::generate::{random_controllable_system, random_system};
use netperturb_core::graph::reachable_from;
use netperturb_core::{StructuredSystem, SysEdge};
use netperturb_oracles as oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_system(max_n: usize, max_q: usize) -> impl Strategy<Value = StructuredSystem> {
    (1..=max_n, 0..=max_q).prop_flat_map(|(n, q)| {
        let a = proptest::collection::btree_set((0..n, 0..n), 0..=n * n);
        let b = proptest::collection::btree_set((0..q.max(1), 0..n), 0..=n * q);
        (Just(n), Just(q), a, b).prop_map(|(n, q, a, b)| {
            let b = if q == 0 { vec![] } else { b.into_iter().collect() };
            StructuredSystem::new(n, q, a.into_iter().collect(), b).unwrap()
        })
    })
}

#[test]
fn generic_rank_matches_numeric_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut numeric = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..150 {
        let n = rng.gen_range(1..=5);
        let q = rng.gen_range(0..=3);
        let p = rng.gen_range(0.1..0.6);
        let s = random_system(&mut rng, n, q, p);
        assert_eq!(s.generic_rank(), oracle::numeric_generic_rank(&s, &mut numeric), "{s:?}");
    }
}

#[test]
fn controllability_matches_kalman_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut numeric = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..150 {
        let n = rng.gen_range(1..=5);
        let q = rng.gen_range(0..=3);
        let p = rng.gen_range(0.1..0.6);
        let s = random_system(&mut rng, n, q, p);
        let ours = is_structurally_controllable(&s).controllable;
        assert_eq!(ours, oracle::kalman_controllable(&s, &mut numeric), "{s:?}");
        assert_eq!(ours, oracle::system_controllable(&s));
    }
}

#[test]
fn stem_is_controllable() {
    let s = StructuredSystem::new(2, 1, vec![(0, 1)], vec![(0, 0)]).unwrap();
    assert!(is_structurally_controllable(&s).controllable);
}

#[test]
fn no_inputs_means_uncontrollable() {
    let s = StructuredSystem::new(2, 0, vec![(0, 0), (1, 1), (0, 1)], vec![]).unwrap();
    let r = is_structurally_controllable(&s);
    assert!(!r.controllable);
    assert_eq!(r.unreachable_states, vec![0, 1]);
}

proptest! {
    #[test]
    fn both_criteria_agree(s in arb_system(5, 3)) {
        let r = is_structurally_controllable(&s);
        prop_assert_eq!(reachability_and_matching(&s), paths_and_generic_rank(&s));
        prop_assert_eq!(r.controllable, reachability_and_matching(&s));
        prop_assert_eq!(r.controllable, r.reachability_ok() && r.rank_ok());
        prop_assert!(s.generic_rank() <= s.n());
        prop_assert_eq!(r.rank_deficiency, s.n() - s.generic_rank());
    }

    #[test]
    fn adding_an_edge_keeps_controllability(seed in any::<u64>(), kind in any::<bool>(), f in 0usize..4, t in 0usize..4) {
        let s = random_controllable_system(&mut ChaCha8Rng::seed_from_u64(seed), 1..=4, 1..=2, 10);
        let e = if kind && s.q() > 0 {
            SysEdge::input(f % s.q(), t % s.n())
        } else {
            SysEdge::state(f % s.n(), t % s.n())
        };
        prop_assume!(s.edge_id(e).is_none());
        let bigger = StructuredSystem::from_sys_edges(s.n(), s.q(), s.edges().chain([e])).unwrap();
        prop_assert!(bigger.generic_rank() >= s.generic_rank());
        prop_assert!(is_structurally_controllable(&bigger).controllable);
    }

    #[test]
    fn deleting_in_edges_of_a_state_breaks_controllability(s in arb_system(4, 2), x in 0usize..4) {
        let x = x % s.n();
        let removed: Vec<usize> = s.edges().enumerate().filter(|(_, e)| e.to == x).map(|(i, _)| i).collect();
        prop_assert!(!is_structurally_controllable(&s.without_edges(&removed)).controllable);
    }

    #[test]
    fn source_scc_flags_match_reachability(s in arb_system(5, 2)) {
        let d = s.system_digraph();
        let roots: Vec<usize> = (s.n()..s.n() + s.q()).collect();
        let reached = reachable_from(&d, &roots);
        let mut covered = 0;
        for scc in source_sccs(&s) {
            covered += scc.states.len();
            prop_assert_eq!(scc.input_reachable, scc.states.iter().any(|x| reached.contains(x)));
        }
        prop_assert!(covered <= s.n());
    }
}
