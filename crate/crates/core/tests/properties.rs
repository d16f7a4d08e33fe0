//! Property-based tests for the model invariants: passivity and
//! symmetry of the propagation exponent, convexity of the beamsplitter
//! spectrum map, complete positivity of the Gaussian channel, trace
//! conservation, and the weak-probe linearization.

use eitsim::entanglement_cv::{
    apply_loss_rotation, duan_criterion, epr_pair_from_squeezers, rotate_arm, Arm,
};
use eitsim::lambda_system::{
    bloch_rhs, implied_sigma_aa_rhs, steady_state, AtomicParams, BlochState, NoiseModel,
};
use eitsim::linear_response::{group_delay, propagation_exponent};
use eitsim::noise_spectra::output_value;
use eitsim::C64;
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = AtomicParams> {
    (
        0.2..1.5_f64,                 // g
        0.1..10.0_f64,                // density
        0.3..2.0_f64,                 // |omega_c|
        -std::f64::consts::PI..std::f64::consts::PI, // arg omega_c
        0.0..0.05_f64,                // gamma_bc'
        0.3..1.5_f64,                 // gamma_ba
        0.3..1.5_f64,                 // gamma_ac
    )
        .prop_map(|(g, n, oc, arg, gbc, gba, gac)| {
            let mut p = AtomicParams::dimensionless(g, n, C64::from_polar(oc, arg), gbc);
            p.gamma_ba = gba;
            p.gamma_ac = gac;
            p
        })
}

proptest! {
    // The medium is passive: Re Lambda >= 0 everywhere, for any
    // physical parameter draw.
    #[test]
    fn exponent_is_passive(p in arb_params(), w in -20.0..20.0_f64) {
        let l = propagation_exponent(&p, w).unwrap();
        prop_assert!(l.re >= -1e-15 * p.coupling_per_length().max(1.0), "Re Lambda = {}", l.re);
    }

    // Lambda(-w) = conj(Lambda(w)): absorption even, dispersion odd.
    #[test]
    fn exponent_conjugate_symmetry(p in arb_params(), w in 0.0..20.0_f64) {
        let plus = propagation_exponent(&p, w).unwrap();
        let minus = propagation_exponent(&p, -w).unwrap();
        prop_assert!((plus.conj() - minus).norm() <= 1e-12 * (1.0 + plus.norm()));
    }

    // The corrected output is a convex combination of S_in and 1, so it
    // lies between them and fixes the vacuum.
    #[test]
    fn output_is_convex_mix(
        p in arb_params(),
        w in -10.0..10.0_f64,
        s_in in 0.0..5.0_f64,
        length in 0.0..50.0_f64,
    ) {
        let out = output_value(NoiseModel::OffDiagonal, s_in, &p, w, length).unwrap();
        let lo = s_in.min(1.0) - 1e-12;
        let hi = s_in.max(1.0) + 1e-12;
        prop_assert!(out >= lo && out <= hi, "S_out {out} outside [{lo}, {hi}]");

        let vac = output_value(NoiseModel::OffDiagonal, 1.0, &p, w, length).unwrap();
        prop_assert!((vac - 1.0).abs() < 1e-14);
    }

    // Complete positivity fuzz: a physical two-mode state pushed
    // through the loss-rotation channel stays physical.
    #[test]
    fn channel_is_completely_positive(
        r in 0.0..1.5_f64,
        extra in 0.0..2.0_f64,
        rot_a in -3.2..3.2_f64,
        rot_b in -3.2..3.2_f64,
        t in 0.0..1.0_f64,
        phi in -3.2..3.2_f64,
    ) {
        // Random physical input: EPR pair, local rotations, then
        // isotropic classical noise.
        let mut cm = epr_pair_from_squeezers(r, 0.0);
        cm = rotate_arm(&cm, Arm::A, rot_a);
        cm = rotate_arm(&cm, Arm::B, rot_b);
        let mut noisy = cm.entries;
        for i in 0..4 {
            noisy[(i, i)] += extra;
        }
        cm.entries = noisy;
        prop_assert!(cm.is_physical(1e-7));

        let out = apply_loss_rotation(&cm, Arm::B, t, phi);
        prop_assert!(out.is_physical(1e-7), "T={t} phi={phi}");
        // Symmetry survives exactly.
        prop_assert!((out.entries - out.entries.transpose()).amax() < 1e-12);
    }

    // Duan sum of the raw EPR pair and its degradation under pure loss
    // match the closed forms for any r, T.
    #[test]
    fn duan_closed_form_under_loss(r in 0.01..1.5_f64, t in 0.0..1.0_f64) {
        let cm = epr_pair_from_squeezers(r, 0.0);
        prop_assert!((duan_criterion(&cm) - 4.0 * (-2.0 * r).exp()).abs() < 1e-10);
        let out = apply_loss_rotation(&cm, Arm::B, t, 0.0);
        let expect = 2.0
            * ((2.0 * r).cosh() * (1.0 + t) + (1.0 - t)
                - 2.0 * t.sqrt() * (2.0 * r).sinh());
        prop_assert!((duan_criterion(&out) - expect).abs() < 1e-10);
    }

    // d(sigma_bb + sigma_cc + sigma_aa)/dt = 0 identically.
    #[test]
    fn trace_is_conserved(
        p in arb_params(),
        bb in 0.0..1.0_f64,
        cc_frac in 0.0..1.0_f64,
        ba_re in -0.2..0.2_f64,
        ba_im in -0.2..0.2_f64,
        bc_re in -0.2..0.2_f64,
        bc_im in -0.2..0.2_f64,
        ac_re in -0.2..0.2_f64,
        ac_im in -0.2..0.2_f64,
        e_re in -0.3..0.3_f64,
        e_im in -0.3..0.3_f64,
    ) {
        let state = BlochState {
            sigma_bb: bb,
            sigma_cc: (1.0 - bb) * cc_frac,
            sigma_ba: C64::new(ba_re, ba_im),
            sigma_bc: C64::new(bc_re, bc_im),
            sigma_ac: C64::new(ac_re, ac_im),
        };
        let e = C64::new(e_re, e_im);
        let d = bloch_rhs(&state, &p, e);
        let d_aa = implied_sigma_aa_rhs(&state, &p, e);
        prop_assert!((d.d_sigma_bb + d.d_sigma_cc + d_aa).abs() < 1e-12);
    }

    // The group delay agrees with a plain central difference of the
    // dispersion at an independent step size.
    #[test]
    fn group_delay_matches_finite_difference(p in arb_params()) {
        let tau = group_delay(&p).unwrap();
        let h = 1e-5 * p.rate_scale();
        let plus = propagation_exponent(&p, h).unwrap();
        let minus = propagation_exponent(&p, -h).unwrap();
        let fd = -p.length * (plus.im - minus.im) / (2.0 * h);
        let scale = p.coupling_per_length() * p.length / p.omega_c.norm_sqr();
        prop_assert!((tau - fd).abs() <= 1e-6 * scale.max(1e-12), "{tau} vs {fd}");
    }

    // Weak probe: the steady sigma_ba matches the first-order formula
    // i g E gamma_bc' / (gamma_ba gamma_bc' + |Omega_c|^2) to O(eps^2),
    // and the population deficit scales as the probe power.
    #[test]
    fn weak_probe_linearization(p in arb_params(), e_amp in 1e-4..1e-2_f64) {
        let e = C64::new(e_amp, 0.0);
        let ss = steady_state(&p, e).unwrap();
        prop_assert!(ss.is_valid(1e-8));

        let denom = p.gamma_ba * p.gamma_bc_prime + p.omega_c.norm_sqr();
        let first_order = C64::i() * p.g * e * p.gamma_bc_prime / denom;
        let eps = p.g * e_amp / p.omega_c.norm();
        prop_assert!(
            (ss.sigma_ba - first_order).norm() <= 20.0 * eps * eps * (p.g * e_amp / denom.sqrt()),
            "sigma_ba {} vs first order {first_order}",
            ss.sigma_ba
        );

        let deficit1 = 1.0 - ss.sigma_bb;
        let ss2 = steady_state(&p, 2.0 * e).unwrap();
        let deficit2 = 1.0 - ss2.sigma_bb;
        if deficit1 > 1e-11 {
            let ratio = deficit2 / deficit1;
            prop_assert!((ratio - 4.0).abs() < 0.2, "quadratic scaling ratio {ratio}");
        }
    }
}

// The CP fuzz should exercise at least a thousand draws.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn channel_cp_high_volume(
        r in 0.0..2.0_f64,
        t in 0.0..1.0_f64,
        phi in -3.2..3.2_f64,
        extra in 0.0..1.0_f64,
    ) {
        let mut cm = epr_pair_from_squeezers(r, 0.0);
        for i in 0..4 {
            cm.entries[(i, i)] += extra;
        }
        let out = apply_loss_rotation(&cm, Arm::B, t, phi);
        prop_assert!(out.is_physical(1e-7));
    }
}
