//! Property tests on randomly drawn states, directions and programs.

use nalgebra::{DMatrix, DVector};
use prep_core::analytic::{qubit_decompose, spin1_decompose, spin1_is_prep, spin1_kappa_e};
use prep_core::angular::Spin;
use prep_core::bipartite::{partial_transpose, ppt_kappa, Subsystem};
use prep_core::density::{psd_check, scaled_state, LoadedState, StateFile};
use prep_core::linalg::{hs_norm, min_eigenvalue};
use prep_core::lpsolve::{boundary_kappa, simplex_solve, BoundaryOptions, LpStandardForm, LpStatus};
use prep_core::random::{random_classical, random_density, random_direction, rng_from_seed};
use prep_core::{Norm, ScaledFamily};
use proptest::prelude::*;

fn spin_strategy() -> impl Strategy<Value = Spin> {
    (1u32..=4).prop_map(|t| Spin::new(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qubit_states_always_decompose(seed in any::<u64>()) {
        let rho = random_density(2, &mut rng_from_seed(seed));
        let mix = qubit_decompose(&rho).unwrap();
        prop_assert!(mix.len() <= 2);
        prop_assert!(mix.residual(Spin::HALF, &rho) < 1e-12);
    }

    #[test]
    fn spin1_mixtures_pass_the_criterion(seed in any::<u64>(), points in 1usize..12) {
        let rho = random_classical(Spin::ONE, points, &mut rng_from_seed(seed));
        let (prep, _) = spin1_is_prep(&rho).unwrap();
        prop_assert!(prep);
        let mix = spin1_decompose(&rho).unwrap();
        prop_assert!(mix.len() <= 8);
        prop_assert!(mix.residual(Spin::ONE, &rho) < 1e-10);
    }

    #[test]
    fn spin1_verdict_flips_at_the_boundary(seed in any::<u64>()) {
        let fam = ScaledFamily::new(random_direction(3, &mut rng_from_seed(seed)), Norm::Trace).unwrap();
        let k = spin1_kappa_e(&fam).unwrap();
        prop_assume!(k.is_finite());
        prop_assert!(k <= fam.positivity_kappa() + 1e-9);
        prop_assert!(spin1_is_prep(&fam.state_matrix(k - 1e-8)).unwrap().0);
        prop_assert!(!spin1_is_prep(&fam.state_matrix(k + 1e-6)).unwrap().0);
    }

    #[test]
    fn grid_boundary_is_a_lower_bound(seed in any::<u64>()) {
        let fam = ScaledFamily::new(random_direction(3, &mut rng_from_seed(seed)), Norm::HilbertSchmidt).unwrap();
        let opts = BoundaryOptions { schedule: vec![200, 400], ..BoundaryOptions::default() };
        let r = boundary_kappa(&fam, Spin::ONE, &opts).unwrap();
        prop_assert!(r.kappa_e <= spin1_kappa_e(&fam).unwrap() * (1.0 + 1e-9));
        prop_assert!(r.residual < 1e-8);
        // At most one point per constraint, plus the trace.
        prop_assert!(r.mixture.len() <= 9);
    }

    #[test]
    fn positivity_and_ppt_edges_touch_zero(seed in any::<u64>()) {
        let (a, b) = (Spin::HALF, Spin::ONE);
        let fam = ScaledFamily::new(random_direction(6, &mut rng_from_seed(seed)), Norm::Trace).unwrap();
        let kp = fam.positivity_kappa();
        prop_assert!(min_eigenvalue(scaled_state(&fam, kp).matrix()).abs() < 1e-12);
        let kt = ppt_kappa(&fam, a, b).unwrap();
        let pt = partial_transpose(&fam.state_matrix(kt), 2, 3, Subsystem::A);
        prop_assert!(min_eigenvalue(&pt).abs() < 1e-12);
    }

    #[test]
    fn state_files_roundtrip(seed in any::<u64>(), spin in spin_strategy()) {
        let rho = random_density(spin.dim(), &mut rng_from_seed(seed));
        let text = StateFile::single(spin, &rho).to_json().unwrap();
        let back = StateFile::from_json(&text).unwrap().load(false).unwrap();
        let LoadedState::Single { spin: s, matrix } = back else { panic!("kind changed") };
        prop_assert_eq!(s, spin);
        prop_assert!(hs_norm(&(matrix - rho)) < 1e-14);
    }

    #[test]
    fn scaled_states_stay_states_up_to_positivity(seed in any::<u64>(), spin in spin_strategy(), t in 0.0f64..1.0) {
        let fam = ScaledFamily::new(random_direction(spin.dim(), &mut rng_from_seed(seed)), Norm::Trace).unwrap();
        let m = fam.state_matrix(t * fam.positivity_kappa());
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(psd_check(&m).unwrap().1);
    }

    #[test]
    fn simplex_meets_a_known_feasible_point(seed in any::<u64>(), m in 2usize..7, extra in 1usize..10) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let n = m + extra;
        let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
        let x = DVector::from_fn(n, |_, _| rng.random_range(0.0..1.0));
        let c = DVector::from_fn(n, |_, _| rng.random_range(0.1..1.0));
        let b = &a * &x;
        let lp = LpStandardForm::new(c.clone(), a, b).unwrap();
        let sol = simplex_solve(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp.residual(&sol.w) < 1e-9);
        prop_assert!(sol.w.iter().all(|&v| v >= 0.0));
        prop_assert!(sol.objective <= c.dot(&x) + 1e-9);
    }
}
