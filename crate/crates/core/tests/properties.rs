//! Invariants of the distributions over randomly drawn states.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use spinphase::analysis::fwhm;
use spinphase::distributions::{
    number_distribution, phase_distribution, phase_distribution_oracle, q_function,
};
use spinphase::states::{cat_state, coherent_state, density_of, CoherentSpec, DensityMatrix};
use spinphase::SpinJ;

fn component() -> impl Strategy<Value = CoherentSpec> {
    (0.0..PI, -PI..PI, -1.0f64..1.0, -1.0f64..1.0)
        .prop_map(|(t, p, re, im)| CoherentSpec::new(t, p, Complex64::new(re, im)).unwrap())
}

fn random_state() -> impl Strategy<Value = DensityMatrix> {
    (1u32..=24, proptest::collection::vec(component(), 1..4)).prop_filter_map(
        "degenerate superposition",
        |(tj, comps)| {
            cat_state(SpinJ::from_twice(tj), &comps)
                .ok()
                .map(|s| density_of(&s.state))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_density_is_normalized_and_positive(rho in random_state()) {
        let n = 2 * rho.j().twice() as usize + 2 + 30;
        let d = phase_distribution(&rho, n).unwrap();
        prop_assert!((d.integral() - 1.0).abs() < 1e-12);
        prop_assert!(d.min() >= -1e-12);
        let b = rho.j().twice() as i64;
        for k in 0..=b {
            prop_assert_eq!(d.coefficient(-k), d.coefficient(k).conj());
        }
    }

    #[test]
    fn number_distribution_is_normalized(rho in random_state()) {
        let p = number_distribution(&rho).unwrap();
        prop_assert!((p.total() - 1.0).abs() < 1e-12);
        prop_assert!(p.probabilities().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn analytic_matches_quadrature(rho in random_state()) {
        let n = 2 * rho.j().twice() as usize + 2;
        let a = phase_distribution(&rho, n).unwrap();
        let o = phase_distribution_oracle(&rho, n, 0).unwrap();
        for (x, y) in a.grid_p().iter().zip(o.grid_p()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn q_function_is_a_probability(rho in random_state(), t in 0.0..PI, p in -PI..PI) {
        let q = q_function(&rho, t, p).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&q));
    }

    #[test]
    fn coherent_phase_shift_moves_density(beta in -PI..PI, shift in 0usize..256) {
        let j = SpinJ::integer(8);
        let n = 256;
        let step = 2.0 * PI / n as f64;
        let a = phase_distribution(&density_of(&coherent_state(j, 1.0, beta).unwrap()), n).unwrap();
        let b = phase_distribution(
            &density_of(&coherent_state(j, 1.0, beta + shift as f64 * step).unwrap()),
            n,
        )
        .unwrap();
        for i in 0..n {
            prop_assert!((a.grid_p()[i] - b.grid_p()[(i + shift) % n]).abs() < 1e-12);
        }
        prop_assert!((fwhm(&a).unwrap() - fwhm(&b).unwrap()).abs() < 1e-10);
    }
}
