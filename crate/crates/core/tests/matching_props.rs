mod common;

use clawfactor_core::graph::Graph;
use clawfactor_core::matching::{
    bipartite_matching_or_violator, max_matching_general, min_cycle_two_factor_bruteforce, neighborhood_of,
    two_factor, HallCertificate,
};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1usize..=max_n, 0.1f64..0.9, any::<u64>()).prop_map(|(n, p, s)| common::random_graph(n, p, s))
}

/// Random bipartite graph with sides `0..a` and `a..a + b`.
fn bipartite() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (1usize..=6, 1usize..=6, 0.1f64..0.8, any::<u64>()).prop_map(|(a, b, p, s)| {
        let full = common::random_graph(a + b, p, s);
        let edges: Vec<(usize, usize)> = full.edges().iter().copied().filter(|&(u, v)| u < a && v >= a).collect();
        (Graph::simple(a + b, edges), (0..a).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn blossom_is_maximum(g in graph(10)) {
        let m = max_matching_general(&g);
        prop_assert!(m.is_valid(&g));
        prop_assert_eq!(m.len(), common::max_matching(&g));
    }

    #[test]
    fn two_factor_existence_matches_enumeration(g in graph(9)) {
        let tf = two_factor(&g);
        prop_assert_eq!(tf.is_some(), common::has_two_factor(&g));
        if let Some(tf) = tf {
            let mut deg = vec![0; g.n()];
            for e in tf.edge_ids(&g) {
                let (a, b) = g.edge(e);
                deg[a] += 1;
                deg[b] += 1;
            }
            prop_assert!(deg.iter().all(|&d| d == 2));
        }
    }

    #[test]
    fn fewest_cycles_matches_enumeration(g in graph(8)) {
        let got = min_cycle_two_factor_bruteforce(&g, u64::MAX).unwrap().map(|p| p.1);
        prop_assert_eq!(got, common::min_two_factor_cycles(&g));
    }

    #[test]
    fn hall_certificates_are_sound((f, side) in bipartite()) {
        match bipartite_matching_or_violator(&f, &side).unwrap() {
            HallCertificate::Matching(m) => {
                prop_assert!(m.is_valid(&f));
                let mates = m.mates(&f);
                prop_assert!(side.iter().all(|&x| mates[x].is_some()));
            }
            HallCertificate::Violator(s) => {
                prop_assert!(neighborhood_of(&f, &s).len() < s.len());
                // Inclusion-minimal: dropping any element leaves a coverable set.
                for i in 0..s.len() {
                    let mut t = s.clone();
                    t.remove(i);
                    if !t.is_empty() {
                        prop_assert!(matches!(
                            bipartite_matching_or_violator(&induced_on(&f, &t), &t).unwrap(),
                            HallCertificate::Matching(_)
                        ));
                    }
                }
            }
        }
    }
}

/// Keeps only the edges at `side`, so the other vertices are independent.
fn induced_on(f: &Graph, side: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = f
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| side.contains(&u) || side.contains(&v))
        .collect();
    Graph::simple(f.n(), edges)
}
