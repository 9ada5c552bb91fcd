use std::f64::consts::PI;

use loopkit::coupling::{lmatch_bandwidth, linear_grid, mutual_inductance_coaxial, CoupledPair, Termination};
use loopkit::extraction::{deembed, s_from_z, z_from_s, DeembedSpec};
use loopkit::feedline::{current_ratio, reff_exact, reff_simplified, x_in_min, FeedlineSpec, LoadPoint};
use loopkit::presets;
use loopkit::resonator::{build_resonator, stub_esr, stub_esr_small_loop, LoopRlc, ModelOptions};
use loopkit::tline::{rlgc, Conductor, CrossSection, Dielectric};
use loopkit::Complex64;
use proptest::prelude::*;

fn loop_rlc() -> impl Strategy<Value = LoopRlc> {
    (0.05..2.0f64, 0.1e-6..1e-6f64, 10e-12..200e-12f64)
        .prop_map(|(r, l, c)| LoopRlc::from_rlc(r, l, c).unwrap())
}

proptest! {
    #[test]
    fn z_s_round_trip(r in 0.0..1e4f64, x in -1e4..1e4f64, z0 in 1.0..200.0f64) {
        let z = Complex64::new(r, x);
        let back = z_from_s(s_from_z(z, z0), z0).unwrap();
        prop_assert!((back - z).norm() <= 1e-12 * z.norm().max(z0));
    }

    #[test]
    fn deembedding_is_a_pure_phase(
        mag in 0.0..1.0f64,
        ang in -PI..PI,
        theta in 0.0..90.0f64,
        f in 1e6..1e9f64,
    ) {
        let s = Complex64::from_polar(mag, ang);
        let spec = DeembedSpec::new(17.6, theta, 30e6).unwrap();
        let out = deembed(&[f], &[s], &spec)[0];
        prop_assert!((out.norm() - mag).abs() <= 1e-15);
    }

    #[test]
    fn mutual_inductance_reciprocal_and_decaying(
        a1 in 0.01..0.3f64,
        a2 in 0.01..0.3f64,
        d in 0.001..1.0f64,
    ) {
        let m = mutual_inductance_coaxial(a1, a2, d).unwrap();
        prop_assert!(m > 0.0);
        let swapped = mutual_inductance_coaxial(a2, a1, d).unwrap();
        prop_assert!((m - swapped).abs() <= 1e-14 * m);
        prop_assert!(mutual_inductance_coaxial(a1, a2, d * 1.1).unwrap() < m);
    }

    #[test]
    fn efficiencies_are_passive(
        rlc in loop_rlc(),
        k in 0.0..0.9f64,
        f_scale in 0.5..1.5f64,
        r_l in 0.0..500.0f64,
        x_l in -500.0..500.0f64,
        r_s in 0.0..500.0f64,
        x_s in -500.0..500.0f64,
    ) {
        let pair = CoupledPair::symmetric(rlc.clone(), k * rlc.l).unwrap();
        let term = Termination::new(Complex64::new(r_l, x_l), Complex64::new(r_s, x_s)).unwrap();
        let (eta_p, eta) = pair.efficiency(&term, rlc.f0 * f_scale);
        prop_assert!((0.0..=1.0).contains(&eta));
        prop_assert!(eta_p >= 0.0 && eta_p <= eta * (1.0 + 1e-12));
    }

    #[test]
    fn transfer_is_reciprocal(
        a in loop_rlc(),
        b in loop_rlc(),
        k in 0.01..0.5f64,
        f_scale in 0.8..1.2f64,
        z1 in (1.0..100.0f64, -50.0..50.0f64),
        z2 in (1.0..100.0f64, -50.0..50.0f64),
    ) {
        let m = k * (a.l * b.l).sqrt();
        let forward = CoupledPair::new(a.clone(), b.clone(), m).unwrap();
        let reverse = CoupledPair::new(b, a.clone(), m).unwrap();
        let (za, zb) = (Complex64::new(z1.0, z1.1), Complex64::new(z2.0, z2.1));
        let f = a.f0 * f_scale;
        let g1 = forward.efficiency(&Termination { z_l: zb, z_s: za }, f).0;
        let g2 = reverse.efficiency(&Termination { z_l: za, z_s: zb }, f).0;
        prop_assert!((g1 - g2).abs() <= 1e-9 * g1.max(1e-300));
    }

    #[test]
    fn optimal_termination_beats_perturbations(
        rlc in loop_rlc(),
        k in 0.001..0.5f64,
        f_scale in 0.9..1.1f64,
        dr in -0.9..2.0f64,
        dx in -2.0..2.0f64,
    ) {
        let pair = CoupledPair::symmetric(rlc.clone(), k * rlc.l).unwrap();
        let f = rlc.f0 * f_scale;
        let z = pair.optimal_termination(f).unwrap();
        let best = pair.efficiency(&Termination::conjugate_source(z, z.conj()), f).1;
        let other = Complex64::new(z.re * (1.0 + dr), z.im + dx * z.re);
        let eta = pair.efficiency(&Termination::conjugate_source(other, other.conj()), f).1;
        prop_assert!(eta <= best * (1.0 + 1e-12));
    }

    #[test]
    fn x_in_min_is_optimal(
        alpha in 1e-4..0.05f64,
        beta in 0.5..3.0f64,
        z0_im in -2.0..2.0f64,
        l in 0.01..1.0f64,
        x in -300.0..300.0f64,
    ) {
        let feed = FeedlineSpec::new(Complex64::new(alpha, beta), Complex64::new(50.0, z0_im), l).unwrap();
        if let Ok(x_min) = x_in_min(&feed) {
            let at_min = reff_simplified(&feed, &LoadPoint::reactive(x_min)).unwrap();
            let elsewhere = reff_simplified(&feed, &LoadPoint::reactive(x)).unwrap();
            prop_assert!(at_min <= elsewhere + 1e-12 * elsewhere.abs());
        }
    }

    #[test]
    fn lossless_feed_annihilates(beta in 0.1..5.0f64, z0 in 5.0..150.0f64, l in 0.01..2.0f64, x in -500.0..500.0f64) {
        let feed = FeedlineSpec::new(Complex64::new(0.0, beta), Complex64::new(z0, 0.0), l).unwrap();
        prop_assert!(reff_exact(&feed, &LoadPoint::reactive(x)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn short_circuit_current_ratio(alpha in 0.0..0.1f64, beta in 0.1..5.0f64, l in 0.01..2.0f64) {
        let feed = FeedlineSpec::new(Complex64::new(alpha, beta), Complex64::new(50.0, -0.3), l).unwrap();
        let ratio = current_ratio(&feed, &LoadPoint::reactive(0.0)).unwrap();
        prop_assert_eq!(ratio.norm(), (feed.gamma * l).cosh().norm());
    }

    #[test]
    fn physical_feed_has_nonnegative_reff(
        w in 0.5e-3..10e-3f64,
        f in 1e6..1e9f64,
        l in 0.01..1.0f64,
        r in 0.0..100.0f64,
        x in -300.0..300.0f64,
    ) {
        let (_, d, c) = presets::feed_microstrip();
        let cs = CrossSection::Microstrip { width: w, height: 813e-6, thickness: 35e-6 };
        let feed = FeedlineSpec::from_line(&rlgc(&cs, &d, &c, f).unwrap(), l).unwrap();
        prop_assert!(reff_exact(&feed, &LoadPoint::new(r, x).unwrap()).unwrap() >= 0.0);
    }

    #[test]
    fn stripline_impedance_falls_with_width(w in 0.5e-3..20e-3f64, dw in 0.01e-3..1e-3f64) {
        let d = Dielectric::new(2.2, 0.0).unwrap();
        let z = |w: f64| CrossSection::Stripline { width: w, ground_spacing: 3.18e-3, thickness: 70e-6 }
            .impedance(&d).unwrap().z0;
        prop_assert!(z(w + dw) < z(w));
    }

    #[test]
    fn microstrip_impedance_falls_with_width(w in 0.2e-3..20e-3f64, dw in 0.01e-3..1e-3f64) {
        let d = Dielectric::new(3.0, 0.0).unwrap();
        let z = |w: f64| CrossSection::Microstrip { width: w, height: 813e-6, thickness: 35e-6 }
            .impedance(&d).unwrap().z0;
        prop_assert!(z(w + dw) < z(w));
    }

    #[test]
    fn line_losses_are_nonnegative(w in 1e-3..15e-3f64, tand in 0.0..0.01f64, f in 1e6..1e9f64) {
        let cs = CrossSection::Microstrip { width: w, height: 1.575e-3, thickness: 70e-6 };
        let line = rlgc(&cs, &Dielectric::new(2.2, tand).unwrap(), &Conductor::copper(70e-6).unwrap(), f).unwrap();
        prop_assert!(line.alpha_c > 0.0 && line.alpha_d >= 0.0);
        prop_assert!(line.gamma.re > 0.0 && line.gamma.im > 0.0);
    }

    #[test]
    fn resonator_identities(w in 2e-3..10e-3f64, theta_deg in 5.0..355.0f64) {
        let g = presets::stripline_loop(w).with_slit_angle(theta_deg.to_radians());
        let rlc = build_resonator(&g, &ModelOptions::default()).unwrap();
        let f0 = 1.0 / (2.0 * PI * (rlc.l * rlc.c).sqrt());
        prop_assert!((rlc.f0 - f0).abs() <= 1e-15 * f0);
        prop_assert_eq!(rlc.q(), 2.0 * PI * rlc.f0 * rlc.l / rlc.r);
        prop_assert_eq!(rlc.r, rlc.breakdown().unwrap().total());
    }
}

#[test]
fn loss_forms_agree_for_a_short_dielectric_loss_stub() {
    let g = presets::stripline_loop(10e-3);
    let line = rlgc(&g.cross_section, &g.dielectric, &Conductor::perfect(70e-6).unwrap(), 30e6).unwrap();
    let stub = 0.1 / line.beta();
    let exact = stub_esr(&line, stub).unwrap();
    let small = stub_esr_small_loop(&line, stub);
    assert!((exact - small).abs() / small < 0.05);
}

#[test]
fn peak_efficiency_decays_with_distance() {
    let rlc = build_resonator(&presets::microstrip_loop(10e-3), &ModelOptions::default()).unwrap();
    let grid = linear_grid(30e6, 50e6, 50e3).unwrap();
    let mut last = 1.0;
    for d in [0.1, 0.2, 0.4, 0.8, 1.6] {
        let pair = CoupledPair::coaxial(rlc.clone(), rlc.clone(), 0.09, 0.09, d).unwrap();
        let peak = loopkit::coupling::matched_efficiency_sweep(&pair, &grid, None)
            .unwrap()
            .peak;
        assert!(peak < last, "d = {d}: {peak} >= {last}");
        last = peak;
    }
    assert!(last < 0.05);
}

#[test]
fn lmatch_bandwidth_shrinks_with_q() {
    let base = LoopRlc::from_rlc(0.2, 0.364e-6, 45e-12).unwrap();
    let grid = linear_grid(30e6, 60e6, 10e3).unwrap();
    let mut last = f64::INFINITY;
    for r in [0.8, 0.4, 0.2, 0.1] {
        let pair = CoupledPair::symmetric(base.clone(), 0.02 * base.l)
            .unwrap()
            .with_resistance(r)
            .unwrap();
        let f = pair.loop1.f0;
        let (_, curve) = lmatch_bandwidth(&pair, f, 50.0, &grid).unwrap();
        let bw = curve.bandwidth.unwrap();
        assert!(bw < last, "R = {r}: {bw}");
        last = bw;
    }
}
