//! Independent steady-state ground truth for the weak-probe coherences.
//!
//! The three slowly-varying coherences on the probe leg obey a linear system
//! `dv/dt = M v + b` once the ground-state population is frozen at 1 and only
//! terms first order in the probe survive. This module builds `M` and `b`
//! with *per-field* drive phases and traveling-wave factors (the closed-form
//! model keeps only the collective phase), solves the steady state directly,
//! and cross-checks it by fixed-step time integration.
//!
//! Convention: each drive carries a complex amplitude `omega_j * exp(i phi_j)`,
//! so the collective phase is `phi2 + phi3 - phi1` and the phase triple
//! `(0, 0, phi)` reproduces [`ModelParams::phi`] exactly. The probe source is
//! `b = (i eps_p / 2, 0, 0)` and the susceptibility follows as
//! `chi = prefactor * rho_a1c / eps_p`.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::linalg::{matvec3, norm3, residual3, solve3, Mat3, Vec3};
use crate::params::{ModelParams, ProbeContext};

type C64 = Complex64;

/// Default weak-probe amplitude (gamma1 units). Any value works: the
/// linearized system is exactly linear in the probe.
pub const DEFAULT_PROBE_AMPLITUDE: f64 = 1e-3;

/// Relative residual above which the direct solve is declared singular.
pub const SINGULAR_RESIDUAL_TOL: f64 = 1e-8;

/// Per-field drive phases and propagation geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPhases {
    /// Phase of the standing-wave drive.
    pub phi1: f64,
    /// Phase of the lower-leg drive.
    pub phi2: f64,
    /// Phase of the loop drive.
    pub phi3: f64,
    /// Propagation angle of field 2 relative to the cavity axis.
    pub theta2: f64,
    /// Propagation angle of field 3 relative to the cavity axis.
    pub theta3: f64,
    /// Ratio of the traveling drives' wavevector to the standing-wave
    /// wavevector. Provably irrelevant to the probe response when
    /// `cos(theta2) = -cos(theta3)`.
    pub k_over_kappa: f64,
}

impl Default for FieldPhases {
    fn default() -> Self {
        // cos(theta2) = -cos(theta3) = -1/sqrt(2): the traveling factors of
        // fields 2 and 3 cancel in every closed loop of the coupling graph.
        FieldPhases {
            phi1: 0.0,
            phi2: 0.0,
            phi3: 0.0,
            theta2: 3.0 * FRAC_PI_4,
            theta3: FRAC_PI_4,
            k_over_kappa: 1.0,
        }
    }
}

impl FieldPhases {
    /// Phases `(0, 0, phi)`, matching the single-phase model convention.
    pub fn collective(phi: f64) -> Self {
        FieldPhases {
            phi3: phi,
            ..FieldPhases::default()
        }
    }

    /// The only phase combination observables depend on.
    pub fn collective_phase(&self) -> f64 {
        self.phi2 + self.phi3 - self.phi1
    }
}

/// Steady-state weak-probe coherences together with the probe amplitude
/// that sourced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceVector {
    pub rho_a1c: C64,
    pub rho_a2c: C64,
    pub rho_bc: C64,
    pub epsilon_p: f64,
}

impl CoherenceVector {
    /// Complex susceptibility `prefactor * rho_a1c / eps_p`; the imaginary
    /// part is probe absorption, the real part dispersion.
    pub fn chi(&self, prefactor: f64) -> C64 {
        prefactor * self.rho_a1c / self.epsilon_p
    }
}

/// Build the coherence system `dv/dt = M v + b` for
/// `v = (rho_a1c, rho_a2c, rho_bc)`.
pub fn build_linear_system(
    params: &ModelParams,
    ctx: &ProbeContext,
    phases: &FieldPhases,
    epsilon_p: f64,
) -> (Mat3, Vec3) {
    let i = C64::i();
    let half_i = C64::new(0.0, 0.5);
    let s = ctx.kx.sin();
    let delta = ctx.delta;

    let travel = |cos_theta: f64| -> C64 { (i * phases.k_over_kappa * ctx.kx * cos_theta).exp() };
    // Complex drive amplitudes.
    let w1 = params.omega1 * (i * phases.phi1).exp() * s;
    let w2 = params.omega2 * (i * phases.phi2).exp() * travel(phases.theta2.cos());
    let w3 = params.omega3 * (i * phases.phi3).exp() * travel(phases.theta3.cos());

    let m: Mat3 = [
        [-(i * delta + 0.5 * params.gamma1), half_i * w3, half_i * w1],
        [
            half_i * w3.conj(),
            -(i * delta + 0.5 * params.gamma2),
            half_i * w2,
        ],
        [half_i * w1.conj(), half_i * w2.conj(), -(i * delta)],
    ];
    let b: Vec3 = [half_i * epsilon_p, C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    (m, b)
}

/// Direct steady-state solve `v = -M^{-1} b` with the default probe amplitude.
pub fn steady_state_solve(
    params: &ModelParams,
    ctx: &ProbeContext,
    phases: &FieldPhases,
) -> Result<CoherenceVector> {
    steady_state_solve_with(params, ctx, phases, DEFAULT_PROBE_AMPLITUDE)
}

/// Direct steady-state solve with an explicit probe amplitude.
pub fn steady_state_solve_with(
    params: &ModelParams,
    ctx: &ProbeContext,
    phases: &FieldPhases,
    epsilon_p: f64,
) -> Result<CoherenceVector> {
    params.validate()?;
    let (m, b) = build_linear_system(params, ctx, phases, epsilon_p);
    let neg_b = [-b[0], -b[1], -b[2]];
    let v = solve3(&m, &neg_b).ok_or(Error::SingularSystem {
        residual: f64::INFINITY,
    })?;
    let residual = residual3(&m, &v, &neg_b);
    if residual > SINGULAR_RESIDUAL_TOL * norm3(&b) {
        return Err(Error::SingularSystem { residual });
    }
    Ok(CoherenceVector {
        rho_a1c: v[0],
        rho_a2c: v[1],
        rho_bc: v[2],
        epsilon_p,
    })
}

/// Step size satisfying the stability rule for the classical fourth-order
/// scheme on this system: well inside the stability region for the fastest
/// coupled frequency `|delta| + (omega1 + omega2 + omega3)/2`.
pub fn default_time_step(params: &ModelParams, ctx: &ProbeContext) -> f64 {
    let fast = 0.5 * (params.omega1 + params.omega2 + params.omega3) + ctx.delta.abs();
    0.02 / fast.max(params.gamma1).max(params.gamma2).max(1.0)
}

/// Fixed-step fourth-order time integration of `dv/dt = M v + b` from
/// `v(0) = 0` until the per-step change drops below `1e-12 * ||v||`, or
/// `t_max` is reached (then `NoConvergence` with the final step change).
///
/// `dt = None` uses [`default_time_step`].
pub fn steady_state_integrate(
    params: &ModelParams,
    ctx: &ProbeContext,
    phases: &FieldPhases,
    t_max: f64,
    dt: Option<f64>,
) -> Result<CoherenceVector> {
    params.validate()?;
    let epsilon_p = DEFAULT_PROBE_AMPLITUDE;
    let (m, b) = build_linear_system(params, ctx, phases, epsilon_p);
    let h = dt.unwrap_or_else(|| default_time_step(params, ctx));
    if !(h > 0.0) || !(t_max > 0.0) {
        return Err(Error::InvalidConfig(
            "integration needs dt > 0 and t_max > 0".into(),
        ));
    }

    let deriv = |v: &Vec3| -> Vec3 {
        let mv = matvec3(&m, v);
        [mv[0] + b[0], mv[1] + b[1], mv[2] + b[2]]
    };

    let mut v: Vec3 = [C64::new(0.0, 0.0); 3];
    let mut t = 0.0;
    let mut last_change = f64::INFINITY;
    let steps = (t_max / h).ceil() as usize;
    for _ in 0..steps {
        let k1 = deriv(&v);
        let v2 = add_scaled(&v, &k1, 0.5 * h);
        let k2 = deriv(&v2);
        let v3 = add_scaled(&v, &k2, 0.5 * h);
        let k3 = deriv(&v3);
        let v4 = add_scaled(&v, &k3, h);
        let k4 = deriv(&v4);

        let mut next = v;
        for idx in 0..3 {
            next[idx] += (h / 6.0) * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
        }
        let change = [next[0] - v[0], next[1] - v[1], next[2] - v[2]];
        last_change = norm3(&change);
        v = next;
        t += h;
        let scale = norm3(&v);
        if scale > 0.0 && last_change <= 1e-12 * scale {
            return Ok(CoherenceVector {
                rho_a1c: v[0],
                rho_a2c: v[1],
                rho_bc: v[2],
                epsilon_p,
            });
        }
    }
    let _ = t;
    Err(Error::NoConvergence {
        t_max,
        residual: last_change,
    })
}

fn add_scaled(v: &Vec3, k: &Vec3, factor: f64) -> Vec3 {
    [
        v[0] + factor * k[0],
        v[1] + factor * k[1],
        v[2] + factor * k[2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn relerr(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-12)
    }

    #[test]
    fn two_level_limit_is_lorentzian() {
        // All drives off: rho_a1c = (i eps/2) / (i delta + gamma1/2).
        let params = ModelParams::new(0.0, 0.0, 0.0);
        for delta in [-3.0, 0.0, 0.7, 12.0] {
            let ctx = ProbeContext::new(delta, 0.3);
            let got = steady_state_solve(&params, &ctx, &FieldPhases::default()).unwrap();
            let expect = C64::new(0.0, 0.5 * DEFAULT_PROBE_AMPLITUDE) / C64::new(0.5, delta);
            assert!((got.rho_a1c - expect).norm() < 1e-15 * expect.norm());
            assert_eq!(got.rho_a2c, C64::new(0.0, 0.0));
            assert_eq!(got.rho_bc, C64::new(0.0, 0.0));
            // Absorption is nonnegative in the bare two-level limit.
            assert!(got.chi(1.0).im >= 0.0);
        }
    }

    #[test]
    fn drives_off_matrix_is_diagonal() {
        let params = ModelParams::new(0.0, 0.0, 0.0).with_gamma2(2.0);
        let ctx = ProbeContext::new(1.5, 0.8);
        let (m, _) = build_linear_system(&params, &ctx, &FieldPhases::default(), 1.0);
        for r in 0..3 {
            for c in 0..3 {
                if r != c {
                    assert_eq!(m[r][c], C64::new(0.0, 0.0));
                }
            }
        }
        assert!((m[0][0] - C64::new(-0.5, -1.5)).norm() < 1e-15);
        assert!((m[1][1] - C64::new(-1.0, -1.5)).norm() < 1e-15);
        assert!((m[2][2] - C64::new(0.0, -1.5)).norm() < 1e-15);
    }

    #[test]
    fn node_decouples_probe_from_bc() {
        // sin(kx) = 0 removes the direct a1c <-> bc coupling.
        let params = ModelParams::new(30.0, 20.0, 20.0).with_gamma2(1.0);
        let ctx = ProbeContext::new(2.0, 0.0);
        let (m, _) = build_linear_system(&params, &ctx, &FieldPhases::default(), 1.0);
        assert_eq!(m[0][2], C64::new(0.0, 0.0));
        assert_eq!(m[2][0], C64::new(0.0, 0.0));
        assert!(m[0][1].norm() > 0.0);
        assert!(m[1][2].norm() > 0.0);
    }

    #[test]
    fn collective_phase_triple_matches_single_phase() {
        let params = ModelParams::new(25.0, 18.0, 12.0)
            .with_gamma2(0.7)
            .with_phi(1.7);
        let ctx = ProbeContext::new(4.0, 1.1);
        let spread = FieldPhases {
            phi1: 0.3,
            phi2: 0.9,
            phi3: 1.1,
            ..FieldPhases::default()
        };
        assert!((spread.collective_phase() - 1.7).abs() < 1e-15);
        let a = steady_state_solve(&params, &ctx, &spread).unwrap().chi(1.0);
        let b = steady_state_solve(&params, &ctx, &FieldPhases::collective(1.7))
            .unwrap()
            .chi(1.0);
        assert!((a - b).norm() < 1e-10 * a.norm().max(b.norm()));
    }

    #[test]
    fn probe_linearity_is_exact() {
        let params = ModelParams::new(30.0, 20.0, 20.0).with_gamma2(1.0);
        let ctx = ProbeContext::new(5.0, FRAC_PI_3);
        let phases = FieldPhases::default();
        let one = steady_state_solve_with(&params, &ctx, &phases, 1e-3).unwrap();
        let two = steady_state_solve_with(&params, &ctx, &phases, 2e-3).unwrap();
        // Same susceptibility; coherences double.
        assert!((two.rho_a1c / one.rho_a1c - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((two.rho_a2c / one.rho_a2c - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((two.rho_bc / one.rho_bc - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((one.chi(1.0) - two.chi(1.0)).norm() < 1e-14 * one.chi(1.0).norm());
    }

    #[test]
    fn traveling_phase_cancels_with_opposed_angles() {
        let params = ModelParams::new(20.0, 22.0, 25.0)
            .with_gamma2(1.0)
            .with_phi(0.4);
        let ctx = ProbeContext::new(5.0, 2.3);
        let base = FieldPhases::collective(0.4);
        let scaled = FieldPhases {
            k_over_kappa: 3.7,
            ..base
        };
        let a = steady_state_solve(&params, &ctx, &base).unwrap().chi(1.0);
        let b = steady_state_solve(&params, &ctx, &scaled).unwrap().chi(1.0);
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn integrate_two_level_relaxation() {
        // Drives off, delta = 0: v -> (i eps / gamma1, 0, 0).
        let params = ModelParams::new(0.0, 0.0, 0.0);
        let ctx = ProbeContext::new(0.0, 0.0);
        let got =
            steady_state_integrate(&params, &ctx, &FieldPhases::default(), 100.0, None).unwrap();
        let expect = C64::new(0.0, DEFAULT_PROBE_AMPLITUDE);
        assert!((got.rho_a1c - expect).norm() < 1e-9 * expect.norm());
    }

    #[test]
    fn integrate_agrees_with_solve() {
        // Strong-drive sub-half-wavelength regime, antinode.
        let params = ModelParams::new(20.0, 22.0, 25.0)
            .with_gamma2(1.0)
            .with_phi(0.0);
        let ctx = ProbeContext::new(5.0, FRAC_PI_2);
        let phases = FieldPhases::default();
        let solved = steady_state_solve(&params, &ctx, &phases).unwrap();
        let integrated = steady_state_integrate(&params, &ctx, &phases, 600.0, None).unwrap();
        let rel = (solved.rho_a1c - integrated.rho_a1c).norm() / solved.rho_a1c.norm();
        assert!(rel < 1e-7, "dual-oracle mismatch {rel:.3e}");
    }

    #[test]
    fn integrate_flat_case_reaches_unit_absorption() {
        // gamma2 = 0, phi = pi/2, delta = 0: chi'' = 1/gamma1 everywhere.
        let params = ModelParams::new(30.0, 20.0, 20.0).with_phi(FRAC_PI_2);
        let ctx = ProbeContext::new(0.0, 0.9);
        let phases = FieldPhases::collective(FRAC_PI_2);
        let got = steady_state_integrate(&params, &ctx, &phases, 600.0, None).unwrap();
        assert!(relerr(got.chi(1.0).im, 1.0) < 1e-7);
    }

    #[test]
    fn no_convergence_is_reported() {
        let params = ModelParams::new(30.0, 20.0, 20.0).with_gamma2(1.0);
        let ctx = ProbeContext::new(5.0, 1.0);
        let short = steady_state_integrate(&params, &ctx, &FieldPhases::default(), 0.05, None);
        assert!(matches!(short, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn kx_enters_only_through_sine() {
        let params = ModelParams::new(30.0, 20.0, 20.0)
            .with_gamma2(2.0)
            .with_phi(0.7);
        let phases = FieldPhases::collective(0.7);
        // Half-wave reflection in the closed-form model: chi(kx) = chi(pi - kx).
        // With default angles the traveling factors cancel for rho_a1c, so the
        // oracle shares the symmetry.
        let a = steady_state_solve(&params, &ProbeContext::new(5.0, 0.4), &phases)
            .unwrap()
            .chi(1.0);
        let b = steady_state_solve(&params, &ProbeContext::new(5.0, PI - 0.4), &phases)
            .unwrap()
            .chi(1.0);
        assert!((a - b).norm() < 1e-10 * a.norm());
    }
}
