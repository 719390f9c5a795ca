use proptest::prelude::*;
use squeezed_core::asymptotic::{critical_fidelity, decompose, dicke_asymptotic, unique_asymptotic};
use squeezed_core::entanglement::{asymptotic_concurrence, concurrence, concurrence_x, thresholds};
use squeezed_core::liouvillian::{build_generator, CollectiveRhs};
use squeezed_core::{fidelity_antisymmetric, AtomParams, BathParams, Params};

fn bath() -> impl Strategy<Value = BathParams> {
    (0.0..4.0f64, 0.0..=1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(n, frac, phase)| BathParams::new(n, frac * (n * (n + 1.0)).sqrt(), phase))
}

fn separated() -> impl Strategy<Value = Params> {
    (bath(), 0.0..0.999f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_map(|(b, g, w, d)| Params::new(b, AtomParams::new(g, w, d)).unwrap())
}

fn dicke() -> impl Strategy<Value = Params> {
    (bath(), -3.0..3.0f64, -3.0..3.0f64).prop_map(|(b, w, d)| Params::new(b, AtomParams::dicke(w, d)).unwrap())
}

fn residual(p: &Params, rho: &squeezed_core::DensityMatrix) -> f64 {
    let rhs = CollectiveRhs::new(p);
    rhs.eval(rho.to_collective().matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn unique_state_is_valid_and_stationary(p in separated()) {
        let rho = unique_asymptotic(&p).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.min_eigenvalue() > -1e-12);
        prop_assert!(residual(&p, &rho) < 1e-10);
        let gen = build_generator(&p).apply(rho.matrix());
        prop_assert!(gen.iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn dicke_family_is_valid_and_stationary(p in dicke(), f in 0.0..=1.0f64) {
        let rho = dicke_asymptotic(&p, f).unwrap();
        prop_assert!(rho.min_eigenvalue() > -1e-12);
        prop_assert!((fidelity_antisymmetric(&rho) - f).abs() < 1e-12);
        prop_assert!(residual(&p, &rho) < 1e-10);
    }

    #[test]
    fn threshold_ordering(p in dicke()) {
        let t = thresholds(&p).unwrap();
        prop_assert!(t.f2 >= t.f_cr - 1e-12);
        prop_assert!(t.f1 <= t.f2 + 1e-12);
        prop_assert!((0.0..=1.0).contains(&t.f1) && (0.0..=1.0).contains(&t.f2));
        prop_assert!(asymptotic_concurrence(&p, 1.0).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn piecewise_concurrence_matches_state(p in dicke(), f in 0.0..=1.0f64) {
        let rho = dicke_asymptotic(&p, f).unwrap();
        let want = asymptotic_concurrence(&p, f).unwrap();
        prop_assert!((concurrence_x(&rho).unwrap() - want).abs() < 1e-10);
        prop_assert!((concurrence(&rho) - want).abs() < 1e-10);
    }

    #[test]
    fn decomposition_reconstructs(p in dicke(), s in 0.0..=1.0f64) {
        let f_cr = critical_fidelity(&p);
        let f = f_cr + s * (1.0 - f_cr);
        let mix = decompose(&p, f).unwrap();
        let target = dicke_asymptotic(&p, f).unwrap();
        prop_assert!(mix.reconstruct().max_abs_diff(&target) < 1e-10);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&mix.p));
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&mix.q));
        prop_assert!(mix.gibbs_weight() > -1e-12);
        prop_assert!(mix.gibbs.min_eigenvalue() >= -1e-12);
    }
}
