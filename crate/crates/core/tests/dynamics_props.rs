use proptest::prelude::*;
use proptest::strategy::ValueTree;
use trine_core::dynamics::{predecessor, run_summary, run_to_mirror, step};
use trine_core::{Color, Coloring, MixedGraph};

fn build(n: usize, kinds: &[u8], tree: &[usize]) -> MixedGraph {
    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            let kind = if tree.get(v.wrapping_sub(1)) == Some(&u) { 1 } else { kinds[i] };
            match kind {
                1 => undirected.push((u, v)),
                2 => directed.push((u, v)),
                3 => directed.push((v, u)),
                4 => directed.extend([(u, v), (v, u)]),
                _ => {}
            }
            i += 1;
        }
    }
    MixedGraph::new(n, directed, undirected).unwrap()
}

/// Each unordered pair gets nothing, an undirected edge, one arc or both arcs.
fn graph(max_nodes: usize) -> impl Strategy<Value = MixedGraph> {
    (1..=max_nodes).prop_flat_map(|n| {
        prop::collection::vec(0u8..5, n * (n - 1) / 2).prop_map(move |kinds| build(n, &kinds, &[]))
    })
}

/// As `graph`, over a random undirected spanning tree.
fn weak_graph(max_nodes: usize) -> impl Strategy<Value = MixedGraph> {
    (2..=max_nodes).prop_flat_map(|n| {
        let tree: Vec<_> = (1..n).map(|v| 0..v).collect();
        (prop::collection::vec(0u8..5, n * (n - 1) / 2), tree)
            .prop_map(move |(kinds, tree)| build(n, &kinds, &tree))
    })
}

fn graph_and_coloring(max_nodes: usize) -> impl Strategy<Value = (MixedGraph, Coloring)> {
    graph(max_nodes).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), (0..3u64.pow(n as u32)).prop_map(move |i| Coloring::from_index(n, i)))
    })
}

fn with_start(g: impl Strategy<Value = MixedGraph>) -> impl Strategy<Value = (MixedGraph, Coloring)> {
    g.prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), (0..1u64 << n).prop_map(move |b| Coloring::from_ab_bits(n, b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn step_is_reversible((g, c) in graph_and_coloring(12)) {
        prop_assert_eq!(predecessor(&g, &step(&g, &c)), c.clone());
        prop_assert_eq!(step(&g, &predecessor(&g, &c)), c.clone());
        let back = step(&g, &step(&g, &c).transliterate()).transliterate();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn transforms_are_involutions((_g, c) in graph_and_coloring(8)) {
        prop_assert_eq!(c.transliterate().transliterate(), c.clone());
        prop_assert_eq!(c.complement().complement(), c);
    }

    #[test]
    fn c_becomes_b_and_b_comes_from_c((g, c) in graph_and_coloring(10)) {
        let next = step(&g, &c);
        for v in 0..g.node_count() {
            if c.get(v) == Color::C {
                prop_assert_eq!(next.get(v), Color::B);
            }
            if next.get(v) == Color::B {
                prop_assert_eq!(c.get(v), Color::C);
            }
        }
    }

    #[test]
    fn weak_implies_super_weak(g in graph(12)) {
        prop_assert!(!g.weak_computable() || g.super_weak_computable());
    }

    #[test]
    fn mirror_state_is_all_a_or_b((g, start) in with_start(graph(8))) {
        prop_assume!(g.super_weak_computable());
        let s = run_summary(&g, &start, 1_000_000).unwrap();
        if !s.is_degenerate() {
            prop_assert!(s.last_state.is_ab());
            prop_assert!(s.last_state.transliterate().is_ac());
        }
    }

    #[test]
    fn b_and_c_counts_balance((g, start) in with_start(weak_graph(8))) {
        prop_assert!(g.weak_computable());
        let s = run_summary(&g, &start, 1_000_000).unwrap();
        prop_assume!(!s.is_degenerate());
        prop_assert!(s.b_c_balanced());
        prop_assert!(s.uniform_lambda().is_some());
    }

    #[test]
    fn trajectory_mirrors_about_t((g, start) in with_start(graph(7))) {
        let r = run_to_mirror(&g, &start, 1_000_000).unwrap();
        let t = r.period();
        let mut forward = r.states.clone();
        let mut s = r.summary.mirror_state.clone();
        for _ in 0..t {
            forward.push(s.clone());
            s = step(&g, &s);
        }
        // forward[i] holds G_{i+1}
        for j in 1..=t {
            prop_assert_eq!(&forward[t + j - 1], &forward[t - j].transliterate());
        }
    }
}

#[test]
fn step_permutes_colorings_of_small_graphs() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..200 {
        let g = graph(4).new_tree(&mut runner).unwrap().current();
        let n = g.node_count();
        let total = 3u64.pow(n as u32);
        let mut hit = vec![false; total as usize];
        for i in 0..total {
            let j = step(&g, &Coloring::from_index(n, i)).to_index();
            assert!(!hit[j as usize], "step is not injective on {g:?}");
            hit[j as usize] = true;
        }
    }
}
