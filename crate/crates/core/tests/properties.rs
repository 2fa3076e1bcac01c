use proptest::prelude::*;

use netaccess::axioms::{dominance_pairs, neumann_oracle_auto};
use netaccess::generalized::{existence_alpha_bound, reasonable_alpha, DEFAULT_ALPHA_TOL};
use netaccess::indices::{distance_sum, ranking_of, AccessibilityIndex, DEFAULT_TIE_TOL};
use netaccess::io::{emit_json, emit_matrix_csv, emit_network_edge_list, parse_edge_list, parse_json, parse_matrix_csv};
use netaccess::network::{metric_closure, permute, scale, Permutation};
use netaccess::random::{random_metric_network, RandomModel};
use netaccess::{generalized_distance_sum, TransportationNetwork};

fn network() -> impl Strategy<Value = TransportationNetwork> {
    (4usize..=9, any::<u64>(), any::<bool>()).prop_map(|(n, seed, euclid)| {
        let model = if euclid {
            RandomModel::EuclideanPoints
        } else {
            RandomModel::ClosureOfRandomWeights
        };
        random_metric_network(n, seed, model).unwrap()
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conservation_holds(net in network(), frac in 0.01f64..0.95) {
        let alpha = frac * existence_alpha_bound(&net).unwrap();
        let x = generalized_distance_sum(&net, alpha).unwrap();
        let d = distance_sum(&net).unwrap();
        let (sx, sd): (f64, f64) = (x.scores.iter().sum(), d.scores.iter().sum());
        prop_assert!(close(sx, sd, 1e-9));
    }

    #[test]
    fn scaling_commutes(net in network(), beta in 0.1f64..20.0, frac in 0.05f64..0.9) {
        let alpha = frac * existence_alpha_bound(&net).unwrap();
        let x = generalized_distance_sum(&net, alpha).unwrap();
        let y = generalized_distance_sum(&scale(&net, beta).unwrap(), alpha).unwrap();
        for i in 0..net.n() {
            prop_assert!(close(y[i], beta * x[i], 1e-10));
        }
    }

    #[test]
    fn relabeling_commutes(net in network(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut map: Vec<usize> = (0..net.n()).collect();
        map.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let sigma = Permutation::new(map).unwrap();
        let moved = permute(&net, &sigma).unwrap();
        for id in ["dsum", "dprod", "invdsum", "ecc-lex"] {
            let idx = AccessibilityIndex::from_id(id, None).unwrap();
            let a = idx.evaluate(&net).unwrap();
            let b = idx.evaluate(&moved).unwrap();
            for i in 0..net.n() {
                prop_assert!(close(a[i], b[sigma.apply(i)], 1e-12), "{}", id);
            }
        }
        let x = generalized_distance_sum(&net, 0.1).unwrap();
        let y = generalized_distance_sum(&moved, 0.1).unwrap();
        for i in 0..net.n() {
            prop_assert!(close(x[i], y[sigma.apply(i)], 1e-10));
        }
    }

    #[test]
    fn series_matches_solve(net in network(), frac in 0.05f64..0.5) {
        let alpha = frac * existence_alpha_bound(&net).unwrap();
        let x = generalized_distance_sum(&net, alpha).unwrap();
        let (s, _) = neumann_oracle_auto(&net, alpha).unwrap();
        for i in 0..net.n() {
            prop_assert!(close(x[i], s[i], 1e-8));
        }
    }

    #[test]
    fn dominance_is_preserved_below_alpha_hat(net in network(), frac in 0.01f64..0.999) {
        let alpha = frac * reasonable_alpha(&net, DEFAULT_ALPHA_TOL).unwrap().alpha_hat;
        let x = generalized_distance_sum(&net, alpha).unwrap();
        for p in dominance_pairs(&net).unwrap() {
            prop_assert!(x[p.dominator] < x[p.dominated]);
        }
    }

    #[test]
    fn text_formats_round_trip(net in network()) {
        prop_assert_eq!(&parse_json(&emit_json(&net)).unwrap(), &net);
        prop_assert_eq!(&parse_matrix_csv(&emit_matrix_csv(&net)).unwrap(), &net);
        // a metric network is its own closure
        let closed = metric_closure(&parse_edge_list(&emit_network_edge_list(&net)).unwrap()).unwrap();
        for i in 0..net.n() {
            for j in 0..net.n() {
                prop_assert!(close(closed.d(i, j), net.d(i, j), 1e-12));
            }
        }
    }

    #[test]
    fn ranking_classes_partition(scores in prop::collection::vec(-100.0f64..100.0, 1..20)) {
        let r = ranking_of(&scores, DEFAULT_TIE_TOL);
        let mut seen: Vec<usize> = r.order();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..scores.len()).collect::<Vec<_>>());
        let class = r.class_of();
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                if class[i] < class[j] {
                    prop_assert!(scores[i] < scores[j]);
                }
            }
        }
    }
}
