//! Whole-pipeline properties through the public API.

use balcut::cut_extract::{sparse_cut_or_certify, CutOrCert, SparseCutConfig};
use balcut::gen::{gen_bounded_degree, gen_dumbbell, gen_hypercube};
use balcut::io::{read_edge_list, write_edge_list};
use balcut::report::{verify_report, Report};
use balcut::verify::exact_balanced_sparsest_cut_min_side;
use balcut::{sparsity, Cut, DijkstraFactory};
use proptest::prelude::*;

fn brute_sparsity(edges: &[(usize, usize)], n: usize, mask: u64) -> f64 {
    let inside = |v: usize| mask >> v & 1 == 1;
    let cross = edges.iter().filter(|&&(u, v)| inside(u) != inside(v)).count();
    let size = mask.count_ones() as usize;
    cross as f64 / size.min(n - size) as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sparsity_matches_edge_count(n in 2usize..12, extra in 0usize..20, seed in 0u64..1000, mask in 1u64..2047) {
        let g = gen_bounded_degree(n, extra, 6, seed).unwrap();
        let mask = mask & ((1 << n) - 1);
        prop_assume!(mask != 0 && mask != (1 << n) - 1);
        let s = Cut::from_mask(n, mask);
        prop_assert_eq!(sparsity(&g, &s).unwrap(), brute_sparsity(g.edges(), n, mask));
        prop_assert_eq!(sparsity(&g, &s.complement()).unwrap(), sparsity(&g, &s).unwrap());
    }

    #[test]
    fn edge_list_roundtrip(n in 2usize..30, extra in 0usize..40, seed in 0u64..1000) {
        let g = gen_bounded_degree(n, extra, 8, seed).unwrap();
        let back = read_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }
}

#[test]
fn reports_verify_on_small_graphs() {
    let graphs = [gen_dumbbell(5).unwrap(), gen_hypercube(3).unwrap(), gen_bounded_degree(12, 10, 10, 7).unwrap()];
    for (seed, g) in graphs.iter().enumerate() {
        let run = sparse_cut_or_certify(g, &SparseCutConfig::new(g.n(), 0.2, 0.25, seed as u64), &DijkstraFactory).unwrap();
        if let CutOrCert::Certificate { implied_bound, implied_balance, .. } = &run.outcome {
            let min_side = ((implied_balance * g.n() as f64 - 1e-9).ceil() as usize).max(1);
            let (_, best) = exact_balanced_sparsest_cut_min_side(g, min_side).unwrap();
            assert!(best >= *implied_bound);
        }
        let report = Report::from_sparsity_run(g, &run, seed as u64, 0).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        let checks = verify_report(g, &back).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }
}
