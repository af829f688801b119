mod common;

use common::props::{
    big_quiver, formats_round_trip, label_lists, mutation_is_an_involution,
    mutation_matches_textbook_and_stays_skew, reduced_sequences_are_enforced, small_quiver,
};
use forkred_core::explore::{ExploreOptions, Explorer};
use forkred_core::generate::{random_framed_fork, rng, WeightRange};
use forkred_core::signs::{verify_trajectory, ConditionReading, TrajectoryMode};
use forkred_core::structure::detect_fork;
use forkred_core::{Execution, MutationSequence, Vertex};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn involution(q in small_quiver()) {
        mutation_is_an_involution(&q)?;
    }

    #[test]
    fn textbook_mutation_and_skew_symmetry(q in small_quiver()) {
        mutation_matches_textbook_and_stays_skew(&q)?;
    }

    #[test]
    fn reduced_enforcement(q in small_quiver(), labels in label_lists()) {
        reduced_sequences_are_enforced(&q, &labels)?;
    }

    #[test]
    fn round_trip_small(q in small_quiver()) {
        formats_round_trip(&q)?;
    }

    #[test]
    fn round_trip_big(q in big_quiver()) {
        formats_round_trip(&q)?;
    }

    #[test]
    fn mutating_a_sequence_then_its_reverse_is_identity(
        q in small_quiver(),
        raw in proptest::collection::vec(0usize..6, 0..10),
    ) {
        let mut w = MutationSequence::empty();
        for i in raw {
            let _ = w.push(Vertex::from_index(i % q.n()));
        }
        let mut rev = w.as_slice().to_vec();
        rev.reverse();
        let back = q.mutate_seq(&w).unwrap().mutate_seq(&MutationSequence::new(rev).unwrap()).unwrap();
        prop_assert_eq!(back, q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parallel_and_sequential_bfs_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 3 + (seed % 2) as usize;
        let (f, _) = random_framed_fork(n, WeightRange::new(2, 3).unwrap(), 0, &mut r).unwrap();
        let run = |execution| {
            let mut e = Explorer::new(f.clone(), ExploreOptions { max_nodes: 5_000, execution });
            let stats = e.run(5);
            (stats, e.nodes_in_order().into_iter().map(|n| (n.quiver, n.path)).collect::<Vec<_>>())
        };
        prop_assert_eq!(run(Execution::Parallel), run(Execution::Sequential));
    }

    #[test]
    fn random_fork_trajectories_are_clean(seed in any::<u64>(), extra in 0usize..4) {
        let mut r = rng(seed);
        let n = 3 + (seed % 4) as usize;
        let (f, _) = random_framed_fork(n, WeightRange::new(2, 4).unwrap(), extra, &mut r).unwrap();
        let cert = detect_fork(f.mutable_part()).unwrap();
        // Walk away from the current return so every prefix stays a fork.
        let mut cont = MutationSequence::empty();
        let mut last = cert.point_of_return;
        while cont.len() < 6 {
            let k = Vertex::from_index(r.random_range(0..n));
            if k != last {
                cont.push(k).unwrap();
                last = k;
            }
        }
        let report = verify_trajectory(&f, &cont, TrajectoryMode::Fork, ConditionReading::NeighboursOnly).unwrap();
        prop_assert!(report.is_clean(), "{:?}", report.violations);
    }
}
