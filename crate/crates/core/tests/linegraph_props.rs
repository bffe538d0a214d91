use clawfactor_core::graph::{find_isomorphism, Graph};
use clawfactor_core::linegraph::{line_graph, root_graph};
use proptest::prelude::*;

/// Random triangle-free graph: add edges in a random order, skipping any
/// that would close a triangle.
fn triangle_free() -> impl Strategy<Value = Graph> {
    (2usize..=9)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 1..20)))
        .prop_map(|(n, pairs)| {
            let mut g = Graph::empty(n);
            for (a, b) in pairs {
                if a != b && !g.has_edge(a, b) && g.neighbor_set(a).is_disjoint(g.neighbor_set(b)) {
                    g = g.with_edges([(a.min(b), a.max(b))]);
                }
            }
            g
        })
}

fn without_isolated(g: &Graph) -> Graph {
    let keep: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
    g.induced_subgraph(&keep)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn root_of_line_graph_is_the_original(h in triangle_free()) {
        prop_assume!(h.m() > 0);
        let l = line_graph(&h).unwrap();
        prop_assert!(l.verify());
        let r = root_graph(&l.line).unwrap();
        prop_assert!(r.verify());
        prop_assert!(find_isomorphism(&r.root, &without_isolated(&h)).is_some());
    }

    #[test]
    fn line_degrees_are_endpoint_sums(h in triangle_free()) {
        prop_assume!(h.m() > 0);
        let l = line_graph(&h).unwrap();
        prop_assert_eq!(l.line.m(), (0..h.n()).map(|v| h.degree(v) * h.degree(v).saturating_sub(1) / 2).sum::<usize>());
        for (e, &(a, b)) in h.edges().iter().enumerate() {
            prop_assert_eq!(l.line.degree(l.edge_to_vertex[e]), h.degree(a) + h.degree(b) - 2);
        }
    }
}
