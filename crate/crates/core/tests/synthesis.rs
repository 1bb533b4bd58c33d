use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use revctl_core::synthesis::{
    detuning_at, envelope_and_phase, field_constant_phase, field_constant_population,
    quadrature_at, rwa_envelope, QuadratureComponents,
};
use revctl_core::system::sodium;
use revctl_core::units::{fs_to_au, per_fs_to_au};
use revctl_core::{
    field_at, preset, Complex64, FieldSynthesizer, PhaseTrajectory, PopulationTrajectory,
    SynthesisMode,
};

fn tf() -> f64 {
    fs_to_au(120.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn envelope_form_equals_quadrature_form(
        a in -1e-3..1e-3f64, b in -1e-3..1e-3f64, theta in -50.0..50.0f64, rate in -1.0..1.0f64,
    ) {
        let mu = sodium().mu();
        let q = QuadratureComponents { a, b, theta };
        let (v0, lambda) = envelope_and_phase(&q, rate, mu);
        let lhs = v0 * (theta + lambda).sin();
        let rhs = (2.0 / mu) * (a * theta.sin() + b * theta.cos());
        let scale = (2.0 / mu) * a.hypot(b);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
        if rate != 0.0 {
            prop_assert!(v0 == 0.0 || v0.signum() == rate.signum());
        }
    }

    #[test]
    fn general_route_reduces_to_constant_phase_form(
        pi in 0.05..0.45f64, pf in 0.55..0.95f64, rate in 0.02..0.1f64, phi0 in -PI..PI, u in 0.0..1.0f64,
    ) {
        let sys = sodium();
        let pop = PopulationTrajectory::tanh(pi, pf, per_fs_to_au(rate), 0.5 * tf()).unwrap();
        let phase = PhaseTrajectory::constant(phi0).unwrap();
        let t = u * tf();
        let g = field_at(&sys, &pop, &phase, t).unwrap();
        let c = field_constant_phase(&sys, &pop, phi0, t).unwrap();
        prop_assert!((g.epsilon - c.epsilon).abs() <= 1e-12 * (1.0 + c.envelope.abs()) * c.envelope.abs().max(1e-12));
        prop_assert!((g.envelope - c.envelope).abs() <= 1e-12 * c.envelope.abs().max(1e-12));
        prop_assert!(g.envelope > 0.0);
        prop_assert!(g.lambda.abs() < 1e-12);
        prop_assert!(g.detuning.abs() < 1e-12);
    }

    #[test]
    fn general_route_reduces_to_constant_population_form(
        p0 in prop_oneof![0.05..0.45f64, 0.55..0.95f64], pf in -1.0..1.0f64,
        w in prop_oneof![0.1..0.45f64, 0.55..0.9f64], u in 0.0..1.0f64,
    ) {
        let sys = sodium();
        let pop = PopulationTrajectory::constant(p0).unwrap();
        let phase = PhaseTrajectory::quadratic_vertex(0.0, pf, w * tf(), 0.0, tf()).unwrap();
        let t = u * tf();
        let g = FieldSynthesizer::new(sys, &pop, &phase).sample(t).unwrap();
        let c = field_constant_population(&sys, p0, &phase, t).unwrap();
        let scale = c.envelope.abs().max(1e-12);
        prop_assert!((g.epsilon - c.epsilon).abs() <= 1e-12 * scale);
        prop_assert!((g.envelope - c.envelope).abs() <= 1e-12 * scale);
        prop_assert!((g.detuning - c.detuning).abs() <= 1e-12 * (1.0 + c.detuning.abs()));
        prop_assert!((c.detuning - phase.eval(t).d1).abs() < 1e-15);
        let m = FieldSynthesizer::new(sys, &pop, &phase)
            .with_mode(SynthesisMode::ConstantPopulation)
            .sample(t)
            .unwrap();
        prop_assert!((m.epsilon - c.epsilon).abs() <= 1e-12 * scale);
    }

    #[test]
    fn envelope_reconstructs_the_real_field(
        name in prop::sample::select(vec!["fig2", "fig3", "fig4", "fig5", "fig6"]), u in 0.0..1.0f64,
    ) {
        let sc = preset(name).unwrap();
        let sys = sc.system;
        let t = sc.t0 + u * (sc.tf - sc.t0);
        let fs = field_at(&sys, &sc.population, &sc.phase, t).unwrap();
        let env = rwa_envelope(&fs);
        let carrier = Complex64::from_polar(1.0, -sys.omega0() * t);
        let rebuilt = 2.0 * (env * carrier).re;
        let scale = fs.envelope.abs().max(1e-12);
        prop_assert!((rebuilt - fs.epsilon).abs() <= 1e-10 * scale);
        prop_assert!((rebuilt - fs.envelope * fs.total_phase.sin()).abs() <= 1e-10 * scale);
        // direct form (1/μ)(B + iA) e^{−iΦ}
        let q = quadrature_at(&sc.population.eval(t), &sc.phase.eval(t), t, &sys).unwrap();
        let direct = Complex64::new(q.b, q.a) * Complex64::from_polar(1.0 / sys.mu(), -sc.phase.eval(t).value);
        prop_assert!((direct - env).norm() <= 1e-10 * scale);
    }

    #[test]
    fn detuning_matches_the_rate_of_the_modulation_phase(
        name in prop::sample::select(vec!["fig3", "fig4", "fig5", "fig6"]), u in 0.02..0.98f64,
    ) {
        let sc = preset(name).unwrap();
        let sys = sc.system;
        let t = sc.t0 + u * (sc.tf - sc.t0);
        // Λ carries ~1e-14 rad of rounding where |1 − 2P| is small, so a
        // smaller step is dominated by cancellation
        let h = 0.05;
        let p = sc.population.eval(t);
        // stay clear of the equal-population point and of turning points of P
        prop_assume!((1.0 - 2.0 * p.value).abs() > 1e-2);
        prop_assume!(p.d1.abs() > 1e-9);
        let l = |t: f64| field_at(&sys, &sc.population, &sc.phase, t).unwrap().lambda;
        let mut dl = l(t + h) - l(t - h);
        dl -= (dl / TAU).round() * TAU;
        let fd = sc.phase.eval(t).d1 + dl / (2.0 * h);
        let det = detuning_at(&sc.population, &sc.phase, t).unwrap();
        prop_assert!((fd - det).abs() <= 1e-6 * det.abs() + 1e-11, "fd {fd} vs {det}");
    }
}

#[test]
fn population_rising_with_flat_phase_gives_positive_envelope() {
    let sys = sodium();
    let pop = PopulationTrajectory::linear(0.2, 0.8, 0.0, tf()).unwrap();
    let phase = PhaseTrajectory::constant(0.3).unwrap();
    for k in 0..=10 {
        let t = tf() * k as f64 / 10.0;
        let fs = field_at(&sys, &pop, &phase, t).unwrap();
        assert!(fs.envelope > 0.0);
        assert!(fs.lambda.abs() < 1e-15);
    }
    let falling = PopulationTrajectory::linear(0.8, 0.2, 0.0, tf()).unwrap();
    let fs = field_at(&sys, &falling, &phase, 0.5 * tf()).unwrap();
    assert!(fs.envelope < 0.0);
}
