//! Property tests for the invariants that must hold for every input, not
//! just the scripted examples.

use num_complex::Complex64;
use proptest::prelude::*;
use tunneltime::hom::beamsplitter_coincidence;
use tunneltime::optics::{Incidence, Layer, LayerStack, Medium, Polarization};
use tunneltime::qm::{barrier_amplitude, reflection_amplitude, RectangularBarrier};

fn arb_polarization() -> impl Strategy<Value = Polarization> {
    prop_oneof![Just(Polarization::S), Just(Polarization::P)]
}

fn arb_stack() -> impl Strategy<Value = LayerStack> {
    let layer = (1.0f64..3.0, 0.0f64..400.0)
        .prop_map(|(n, d)| Layer::new(Medium::new(n).unwrap(), d).unwrap());
    (
        1.0f64..2.0,
        prop::collection::vec(layer, 0..8),
        1.0f64..2.0,
    )
        .prop_map(|(na, layers, ns)| {
            LayerStack::new(Medium::new(na).unwrap(), layers, Medium::new(ns).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Lossless stacks conserve energy at any incidence, including total
    /// internal reflection and evanescent interior layers.
    #[test]
    fn energy_conservation(
        stack in arb_stack(),
        lambda in 400.0f64..1000.0,
        angle in 0.0f64..1.4,
        pol in arb_polarization(),
    ) {
        let inc = Incidence::new(lambda, angle, pol).unwrap();
        let resp = stack.response(&inc);
        prop_assert!(
            (resp.flux_reflection + resp.flux_transmission - 1.0).abs() < 1e-10,
            "R + T = {}", resp.flux_reflection + resp.flux_transmission
        );
    }

    /// Transmission is reciprocal: the same flux goes through the reversed
    /// stack at the Snell-mapped angle (skipping configurations where the
    /// substrate side is evanescent).
    #[test]
    fn reciprocity(
        stack in arb_stack(),
        lambda in 400.0f64..1000.0,
        angle in 0.0f64..1.4,
        pol in arb_polarization(),
    ) {
        let s = stack.ambient().index() * angle.sin() / stack.substrate().index();
        prop_assume!(s < 0.999);
        let mapped = s.asin();
        let forward = stack.response(&Incidence::new(lambda, angle, pol).unwrap());
        let backward = stack
            .reversed()
            .response(&Incidence::new(lambda, mapped, pol).unwrap());
        prop_assert!(
            (forward.flux_transmission - backward.flux_transmission).abs() < 1e-10,
            "T fwd = {}, T bwd = {}", forward.flux_transmission, backward.flux_transmission
        );
    }

    /// S and P are the same configuration at normal incidence.
    #[test]
    fn s_equals_p_at_normal_incidence(
        stack in arb_stack(),
        lambda in 400.0f64..1000.0,
    ) {
        let s = stack.response(&Incidence::normal(lambda, Polarization::S).unwrap());
        let p = stack.response(&Incidence::normal(lambda, Polarization::P).unwrap());
        prop_assert!((s.r - p.r).norm() < 1e-13);
        prop_assert!((s.t - p.t).norm() < 1e-13);
    }

    /// Zero-thickness layers are exact identities wherever they are
    /// inserted.
    #[test]
    fn zero_thickness_layers_compose_as_identity(
        stack in arb_stack(),
        lambda in 400.0f64..1000.0,
        angle in 0.0f64..1.4,
        pol in arb_polarization(),
        ghost_index in 1.0f64..3.0,
        position_seed in 0usize..100,
    ) {
        let ghost = Layer::new(Medium::new(ghost_index).unwrap(), 0.0).unwrap();
        let mut layers = stack.layers().to_vec();
        let position = position_seed % (layers.len() + 1);
        layers.insert(position, ghost);
        let padded = LayerStack::new(stack.ambient(), layers, stack.substrate());
        let inc = Incidence::new(lambda, angle, pol).unwrap();
        let (a, b) = (stack.response(&inc), padded.response(&inc));
        prop_assert_eq!(a.r, b.r);
        prop_assert_eq!(a.t, b.t);
    }

    /// The rectangular barrier is unitary in every regime (tunneling,
    /// degenerate, over-barrier).
    #[test]
    fn barrier_unitarity(
        v0 in 0.1f64..10.0,
        e_frac in 0.05f64..3.0,
        d in 0.01f64..30.0,
    ) {
        let e = v0 * e_frac;
        // keep kappa*d and k'*d in floating-point comfort
        prop_assume!((2.0 * (v0 - e).abs()).sqrt() * d < 60.0);
        let b = RectangularBarrier::new(v0, d, e).unwrap();
        let t = barrier_amplitude(&b);
        let r = reflection_amplitude(&b);
        prop_assert!(
            (t.norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-12,
            "|t|^2 + |r|^2 = {}", t.norm_sqr() + r.norm_sqr()
        );
    }

    /// The two-photon coincidence null |r^2 + t^2|^2 = 0 holds for any
    /// 50/50 splitter with t = +/- i r, regardless of the overall phase.
    #[test]
    fn beamsplitter_null_for_any_global_phase(
        phase in 0.0f64..std::f64::consts::TAU,
        sign in prop::bool::ANY,
    ) {
        let r = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phase);
        let t = Complex64::new(0.0, if sign { 1.0 } else { -1.0 }) * r;
        let p = beamsplitter_coincidence(r, t).unwrap();
        prop_assert!(p < 1e-15, "coincidence probability {p}");
    }

    /// The delay-report fields satisfy their defining identities exactly.
    #[test]
    fn delay_report_identities(
        stack in arb_stack(),
        lambda in 500.0f64..900.0,
        angle in 0.0f64..1.2,
        pol in arb_polarization(),
    ) {
        let inc = Incidence::new(lambda, angle, pol).unwrap();
        let report = tunneltime::delay::photonic_wigner(&stack, &inc);
        prop_assume!(report.is_ok());
        let report = report.unwrap();
        let d = stack.total_thickness_nm();
        prop_assert_eq!(report.relative_fs, report.transit_fs - report.vacuum_fs);
        prop_assert_eq!(report.vacuum_fs, d / tunneltime::C_NM_PER_FS);
        let expected_velocity = d / (tunneltime::C_NM_PER_FS * report.transit_fs);
        prop_assert!(
            report.velocity_over_c == expected_velocity
                || (report.velocity_over_c.is_nan() && expected_velocity.is_nan()),
            "velocity {} vs {}", report.velocity_over_c, expected_velocity
        );
        if d > 0.0 && report.transit_fs > 0.0 {
            prop_assert_eq!(report.relative_fs < 0.0, report.velocity_over_c > 1.0);
        }
    }
}
