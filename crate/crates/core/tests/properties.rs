mod common;

use common::brute_force_j;
use nkoszul::koszul::KoszulEngine;
use nkoszul::linalg::Rationals;
use nkoszul::Presentation;
use proptest::prelude::*;
use rand::SeedableRng;

fn small_engine() -> impl Strategy<Value = KoszulEngine<Rationals>> {
    (1usize..=2, 2usize..=3, any::<u64>(), 0.0f64..=1.0).prop_map(|(g, s, seed, frac)| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dim = (frac * g.pow(s as u32) as f64).round() as usize;
        let p = Presentation::random(g, s, dim, &mut rng).unwrap();
        KoszulEngine::rational(&p, 2 * s + 1).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structural_identities(e in small_engine()) {
        for check in e.verify_identities().unwrap() {
            prop_assert!(check.passed, "{:?}", check);
        }
        prop_assert!(e.contraction_failures(e.top_index()).unwrap().is_empty());
    }

    #[test]
    fn tower_matches_intersection(e in small_engine()) {
        let p = e.algebra().presentation();
        let (g, s) = (p.num_generators(), p.degree());
        for n in 0..=e.max_degree() {
            prop_assert_eq!(e.tower().space(n), &brute_force_j(p.relations(), g, s, n));
        }
    }

    #[test]
    fn presentation_sequence_is_exact(e in small_engine()) {
        for degree in e.check_presentation_sequence().unwrap() {
            prop_assert!(degree.is_exact(), "{:?}", degree);
        }
    }

    #[test]
    fn verdicts_agree_and_exact_cases_resolve(e in small_engine()) {
        let i = e.top_index() - 1;
        let report = e.koszulity_report(i).unwrap();
        prop_assert_eq!(report.exact, e.tor_concentration(i).unwrap().concentrated);
        if report.exact {
            prop_assert!(e.compare_with_oracle(i).unwrap().diff.is_empty());
            if let Some(balance) = e.euler_balance(i).unwrap() {
                for b in balance {
                    prop_assert_eq!(b.alternating_sum, b.algebra_dim as i64);
                }
            }
        }
    }

    #[test]
    fn direct_and_composite_d_prime_agree(e in small_engine()) {
        for i in 1..=e.top_index() {
            prop_assert!(e.d_prime(i).unwrap().sub(&e.d_prime_direct(i).unwrap()).unwrap().is_zero());
        }
    }
}
