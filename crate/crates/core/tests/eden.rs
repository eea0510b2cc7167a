use latcomm::eden::{
    eden_step, exponent_fit, perimeter_expectation_exact, perimeter_expectation_mc, theorem_exponent, trial_rng,
    trajectory, EdenConfig, EdenState,
};
use latcomm::lattice::{average_perimeter, EnumerationCaps, Site};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn first_step_is_uniform_over_neighbours() {
    let mut hits = std::collections::BTreeMap::<Site, u32>::new();
    for t in 0..4000 {
        let s = eden_step(EdenState::new(2).unwrap(), &mut trial_rng(3, t));
        let grown = s.animal().sites().iter().copied().find(|v| !v.is_origin()).unwrap();
        *hits.entry(grown).or_default() += 1;
    }
    assert_eq!(hits.len(), 4);
    // 4000 draws, p = 1/4: five standard deviations is about 137.
    assert!(hits.values().all(|&h| (h as i64 - 1000).abs() < 137), "{hits:?}");
}

#[test]
fn exact_expectation_matches_hand_values() {
    let e = perimeter_expectation_exact(8, 2).unwrap();
    assert_eq!(e[..4], [r(4, 1), r(6, 1), r(8, 1), r(29, 3)]);
    assert_eq!(e.len(), 9);
    assert!(e.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn eden_and_uniform_histories_differ() {
    // Weighting by the Eden rule is not the uniform weight on histories:
    // p̄_{n+1} averages over histories of length n, Eden over clusters at step n.
    // A history has Eden probability ∏ 1/|p(L_i)|; the perimeters before step 3
    // are always 4, 6, 8, so the two first part ways at step 4.
    let e = perimeter_expectation_exact(8, 2).unwrap();
    let caps = EnumerationCaps::default();
    let mut differ = vec![];
    for n in 0..=7 {
        let p = average_perimeter(n + 1, 2, &caps).unwrap();
        if p != e[n] {
            differ.push(n);
        }
    }
    assert_eq!(differ.first(), Some(&4));
}

#[test]
fn monte_carlo_agrees_with_exact_values() {
    let cfg = EdenConfig { d: 2, steps: 6, seed: 11, trials: 4000 };
    let mc = perimeter_expectation_mc(&cfg).unwrap();
    let e = perimeter_expectation_exact(6, 2).unwrap();
    for (s, x) in mc.steps.iter().zip(&e) {
        let x = x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
        assert!((s.mean - x).abs() <= 4.0 * s.stderr + 1e-12, "step {}: {} vs {x}", s.step, s.mean);
    }
}

#[test]
fn growth_exponent_is_sublinear() {
    let cfg = EdenConfig { d: 2, steps: 5000, seed: 2, trials: 8 };
    let f = exponent_fit(&perimeter_expectation_mc(&cfg).unwrap().means()).unwrap();
    assert!(f.alpha < 1.0 && f.alpha > 0.3, "{f:?}");
    assert!((theorem_exponent(2) - 18.0 / 19.0).abs() < 1e-15);
}

#[test]
fn one_dimension_is_constant() {
    let cfg = EdenConfig { d: 1, steps: 50, seed: 0, trials: 3 };
    assert!(perimeter_expectation_mc(&cfg).unwrap().steps.iter().all(|s| s.mean == 2.0 && s.stderr == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn trajectories_are_reproducible(seed in any::<u64>(), trial in 0u64..1000, d in 1usize..=3) {
        let a = trajectory(d, 60, seed, trial).unwrap();
        prop_assert_eq!(&a, &trajectory(d, 60, seed, trial).unwrap());
        prop_assert_eq!(a[0], 2 * d as u64);
    }

    #[test]
    fn state_matches_recomputation(seed in any::<u64>(), d in 1usize..=3, steps in 0usize..200) {
        let mut rng = trial_rng(seed, 0);
        let mut s = EdenState::new(d).unwrap();
        for _ in 0..steps {
            s.advance(&mut rng);
        }
        prop_assert!(s.is_consistent());
        prop_assert_eq!(s.step() + 1, s.animal().len());
        prop_assert_eq!(s.perimeter_len(), s.animal().perimeter_edges().len());
    }
}
