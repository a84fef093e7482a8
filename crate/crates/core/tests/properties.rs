//! Property tests for the invariants of each module.

use ckdv_core::classifier::required_estimates;
use ckdv_core::quadrature::lemmas::poly_decay_integral;
use ckdv_core::resonance::{h2_factored, ConvolutionPoint};
use ckdv_core::system::{gg_eigenvalues, DEFAULT_TOL};
use ckdv_core::{
    admissible_b, bilinear_critical, bracket, classify, diagonalize, dispersion_ratio, DiagonalSystem, GeneralSystem,
    PhaseFunction, Rational64, ResonanceTriple,
};
use ckdv_core::poly::Polynomial;
use proptest::prelude::*;

fn nonzero(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_filter("nonzero", |v: &f64| v.abs() > 1e-2)
}

/// A coefficient that is zero half the time, so zero patterns vary.
fn sparse() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), nonzero(-3.0, 3.0)]
}

fn diagonal_system() -> impl Strategy<Value = DiagonalSystem> {
    let a1 = prop::sample::select(vec![1.0, -1.0, 2.0, 0.5, -3.0]);
    let r = prop::sample::select(vec![-2.0, -0.5, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]);
    let linear = prop::array::uniform4(prop_oneof![3 => Just(0.0), 1 => nonzero(-2.0, 2.0)]);
    let quad = prop::array::uniform8(sparse());
    let tie = prop::array::uniform2(any::<bool>());
    (a1, r, linear, quad, tie).prop_map(|(a1, r, b, c, tie)| {
        let mut s = DiagonalSystem {
            a1,
            a2: r * a1,
            b11: b[0],
            b12: b[1],
            b21: b[2],
            b22: b[3],
            c11: c[0],
            c12: c[1],
            c21: c[2],
            c22: c[3],
            d11: c[4],
            d12: c[5],
            d21: c[6],
            d22: c[7],
        };
        if tie[0] {
            s.d12 = s.d11;
        }
        if tie[1] {
            s.d21 = s.d22;
        }
        s
    })
}

fn verdict_key(sys: &DiagonalSystem) -> (Option<Rational64>, Option<ckdv_core::Threshold>) {
    let v = classify(sys);
    (v.s_star, v.threshold_kind)
}

fn mat_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn swapping_the_equations_keeps_the_verdict(sys in diagonal_system()) {
        prop_assert_eq!(verdict_key(&sys), verdict_key(&sys.swapped()));
    }

    #[test]
    fn verdict_ignores_nonlinear_amplitude(sys in diagonal_system(), k in nonzero(-10.0, 10.0)) {
        prop_assert_eq!(verdict_key(&sys), verdict_key(&sys.scale_nonlinearity(k)));
    }

    #[test]
    fn verdict_dominates_every_required_estimate(sys in diagonal_system()) {
        let v = classify(&sys);
        if let (Some(s_star), Some(queries)) = (v.s_star, required_estimates(&sys)) {
            let hardest = queries
                .iter()
                .map(|q| bilinear_critical(q).unwrap().s_star.unwrap())
                .max();
            if let Some(h) = hardest {
                prop_assert!(s_star >= h, "{:?}", sys);
            }
        }
    }

    #[test]
    fn fully_coupled_verdict_is_the_hardest_estimate(sys in diagonal_system(), fill in prop::array::uniform8(nonzero(-3.0, 3.0))) {
        let sys = DiagonalSystem {
            c11: fill[0], c12: fill[1], c21: fill[2], c22: fill[3],
            d11: fill[4], d12: fill[5], d21: fill[6], d22: fill[7],
            ..sys
        };
        if let (Some(s_star), Some(queries)) = (classify(&sys).s_star, required_estimates(&sys)) {
            let hardest = queries.iter().map(|q| bilinear_critical(q).unwrap().s_star.unwrap()).max().unwrap();
            prop_assert_eq!(s_star, hardest, "{:?}", sys);
        }
    }

    #[test]
    fn diagonalization_recovers_the_eigenvalues(
        m in prop::array::uniform4(-2.0f64..2.0),
        a1 in nonzero(-4.0, 4.0),
        a2 in nonzero(-4.0, 4.0),
    ) {
        let mm = [[m[0], m[1]], [m[2], m[3]]];
        let det = mm[0][0] * mm[1][1] - mm[0][1] * mm[1][0];
        let norm = mm.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(det.abs() > 1e-3 && norm * norm / det.abs() < 100.0);
        prop_assume!((a1 - a2).abs() > 1e-2);
        let inv = [[mm[1][1] / det, -mm[0][1] / det], [-mm[1][0] / det, mm[0][0] / det]];
        let a = mat_mul(mat_mul(mm, [[a1, 0.0], [0.0, a2]]), inv);
        let zero = [[0.0; 2]; 2];
        let sys = GeneralSystem { dispersion: a, drift: zero, square: zero, mixed: zero };
        let (d, _) = diagonalize(&sys, DEFAULT_TOL).unwrap();
        let mut got = [d.a1, d.a2];
        let mut want = [a1, a2];
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(want) {
            prop_assert!((g - w).abs() <= 1e-9 * w.abs().max(1.0), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn gear_grimshaw_trace_determinant_and_sign(
        rho1 in 0.05f64..10.0,
        rho2 in 0.05f64..10.0,
        sigma3 in -3.0f64..3.0,
    ) {
        let (l1, l2) = gg_eigenvalues(rho1, rho2, sigma3);
        let k = rho2 * sigma3 * sigma3;
        prop_assert!((l1 + l2 - (rho1 + 1.0) / rho1).abs() <= 1e-12 * (1.0 + (rho1 + 1.0) / rho1));
        let scale = 1.0 + l1.abs() * l2.abs().max(1.0);
        prop_assert!((l1 * l2 - (1.0 - k) / rho1).abs() <= 1e-12 * scale);
        prop_assume!((k - 1.0).abs() > 1e-9);
        let named = ckdv_core::NamedSystem::GearGrimshaw { rho1, rho2, sigma1: 1.0, sigma2: 0.0, sigma3, sigma4: 0.0 };
        let (d, _) = named.diagonal_form(DEFAULT_TOL).unwrap();
        prop_assert_eq!(dispersion_ratio(&d).0 < 0.0, k > 1.0);
    }

    #[test]
    fn resonance_is_minus_the_modulation_sum(
        a1 in nonzero(-5.0, 5.0), a2 in nonzero(-5.0, 5.0),
        b1 in -5.0f64..5.0, b2 in -5.0f64..5.0,
        xi1 in -20.0f64..20.0, xi2 in -20.0f64..20.0,
        tau1 in -1e3f64..1e3, tau2 in -1e3f64..1e3,
    ) {
        let (p1, p2) = (PhaseFunction::new(a1, b1).unwrap(), PhaseFunction::new(a2, b2).unwrap());
        let t = ResonanceTriple::h2(p1, p2);
        let m = t.modulations(&ConvolutionPoint::new(xi1, tau1, xi2, tau2));
        let h = t.value(xi1, xi2);
        let scale = 1.0 + m.l1.abs().max(m.l2.abs()).max(m.l3.abs()).max(h.abs());
        prop_assert!((h + m.l1 + m.l2 + m.l3).abs() <= 1e-9 * scale);
        prop_assert!(m.max_bracket() >= bracket(h) / 3.0);
        if xi2.abs() > 1e-3 {
            prop_assert!((h2_factored(&p1, &p2, xi1, xi2) - h).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn admissible_b_is_a_nonempty_interval(num in -1300i64..2000) {
        let s = Rational64::new(num, 1200);
        let r = admissible_b(s).unwrap();
        prop_assert!(r.lower <= r.upper);
        if r.lower == r.upper {
            prop_assert_eq!(s, Rational64::new(-13, 12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decay_integrals_are_reflection_invariant(
        c in prop::array::uniform4(-3.0f64..3.0),
        lead in nonzero(-3.0, 3.0),
        rho in 0.6f64..2.0,
    ) {
        let p = Polynomial::new(vec![c[0], c[1], c[2], lead]);
        let a = poly_decay_integral(&p, rho).unwrap();
        let b = poly_decay_integral(&p.reflect(), rho).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-9 * a.value + a.est_error + b.est_error);
        prop_assert!(a.est_error >= 0.0 && a.value.is_finite());
    }

    #[test]
    fn decay_integrals_decrease_in_rho(
        c in prop::array::uniform3(-3.0f64..3.0),
        lead in nonzero(-3.0, 3.0),
        rho in 0.6f64..2.0,
    ) {
        let p = Polynomial::new(vec![c[0], c[1], lead]);
        let a = poly_decay_integral(&p, rho).unwrap();
        let b = poly_decay_integral(&p, rho + 0.25).unwrap();
        prop_assert!(b.value < a.value);
    }
}
