//! Seeded self-verification: oracle-vs-closed-form equivalence, algebraic
//! representation equivalence, spectral identities and symmetry checks.
//!
//! Every suite draws its parameters from a deterministic stream, so a given
//! seed always produces byte-identical reports.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::chi::{compute_chi, compute_chi_gamma2zero};
use crate::dressed::{build_hamiltonian, eigensystem};
use crate::error::{Error, Result};
use crate::oracle::{steady_state_integrate, steady_state_solve, FieldPhases};
use crate::params::{ModelParams, ProbeContext};
use crate::roots::{chi_im_factored, solve_delta_cubic};

/// Options for the verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Draw count for the main random suites (at least 100).
    pub samples: usize,
    /// Seed for every deterministic stream.
    pub seed: u64,
    /// Draw count for the collective-phase and traveling-phase suites.
    pub phase_samples: usize,
    /// Draw count for the time-integration cross-check (expensive).
    pub integration_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 1000,
            seed: 42,
            phase_samples: 200,
            integration_samples: 16,
        }
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub note: String,
}

impl SuiteResult {
    fn new(name: &'static str, tolerance: f64) -> Self {
        SuiteResult {
            name,
            passed: true,
            checked: 0,
            skipped: 0,
            worst: 0.0,
            tolerance,
            note: String::new(),
        }
    }

    fn record(&mut self, err: f64) {
        self.checked += 1;
        if err > self.worst {
            self.worst = err;
        }
        if err > self.tolerance {
            self.passed = false;
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }
}

/// Full verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn failed_count(&self) -> usize {
        self.suites.iter().filter(|s| !s.passed).count()
    }

    /// Plain-text rendering, stable across runs for a fixed seed.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verification report");
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<28} {:<6} {:>8} {:>8} {:>14} {:>11}",
            "suite", "status", "checked", "skipped", "worst_rel_err", "tolerance"
        );
        for s in &self.suites {
            let _ = writeln!(
                out,
                "{:<28} {:<6} {:>8} {:>8} {:>14} {:>11}{}",
                s.name,
                if s.passed { "PASS" } else { "FAIL" },
                s.checked,
                s.skipped,
                format!("{:.3e}", s.worst),
                format!("{:.1e}", s.tolerance),
                if s.note.is_empty() {
                    String::new()
                } else {
                    format!("  [{}]", s.note)
                }
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "overall: {} ({}/{} suites passed)",
            if self.all_passed() { "PASS" } else { "FAIL" },
            self.suites.len() - self.failed_count(),
            self.suites.len()
        );
        out
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-12)
}

fn draw_params(rng: &mut ChaCha8Rng) -> (ModelParams, ProbeContext) {
    let params = ModelParams::new(
        rng.random_range(0.0..50.0),
        rng.random_range(0.0..50.0),
        rng.random_range(0.0..50.0),
    )
    .with_phi(rng.random_range(0.0..(2.0 * PI)))
    .with_gamma2(rng.random_range(0.0..10.0));
    let ctx = ProbeContext::new(rng.random_range(-30.0..30.0), rng.random_range(-PI..PI));
    (params, ctx)
}

/// Closed form versus the steady-state linear solve, absorption and
/// dispersion both, on unrestricted draws.
pub fn oracle_equivalence_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("oracle-vs-analytic", 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let analytic = match compute_chi(&params, &ctx) {
            Ok(chi) => chi,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        let oracle = match steady_state_solve(&params, &ctx, &FieldPhases::collective(params.phi)) {
            Ok(v) => v.chi(params.prefactor),
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        suite.record(rel_err(analytic.chi_im, oracle.im));
        suite.record(rel_err(analytic.chi_re, oracle.re));
    }
    suite
}

/// Linear solve versus fixed-step time integration on a moderately damped
/// domain (slow dark modes are physical, not solver artifacts) plus the
/// named closed-form cases.
pub fn dual_oracle_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("dual-oracle", 1e-7);
    suite.note = "draws from omega in [10,40], |delta| <= 10, gamma2 in [0.5,10]".into();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x64756f);
    let mut cases: Vec<(ModelParams, ProbeContext)> = vec![
        (
            ModelParams::new(20.0, 22.0, 25.0).with_gamma2(1.0),
            ProbeContext::new(5.0, PI / 2.0),
        ),
        (ModelParams::new(0.0, 0.0, 0.0), ProbeContext::new(0.0, 0.0)),
        (
            ModelParams::new(30.0, 20.0, 20.0).with_phi(PI / 2.0),
            ProbeContext::new(0.0, 0.9),
        ),
    ];
    for _ in 0..samples {
        let params = ModelParams::new(
            rng.random_range(10.0..40.0),
            rng.random_range(10.0..40.0),
            rng.random_range(10.0..40.0),
        )
        .with_phi(rng.random_range(0.0..(2.0 * PI)))
        .with_gamma2(rng.random_range(0.5..10.0));
        let ctx = ProbeContext::new(rng.random_range(-10.0..10.0), rng.random_range(-PI..PI));
        cases.push((params, ctx));
    }
    for (params, ctx) in cases {
        let phases = FieldPhases::collective(params.phi);
        let solved = match steady_state_solve(&params, &ctx, &phases) {
            Ok(v) => v,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        let integrated = match steady_state_integrate(&params, &ctx, &phases, 2000.0, None) {
            Ok(v) => v,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        let scale = solved.rho_a1c.norm().max(1e-12);
        suite.record((solved.rho_a1c - integrated.rho_a1c).norm() / scale);
    }
    suite
}

/// Direct `A`/`B` form versus the factored root-set representation.
pub(crate) fn representation_suite_with<F>(samples: usize, seed: u64, chi_im: F) -> SuiteResult
where
    F: Fn(&ModelParams, &ProbeContext) -> Option<f64>,
{
    let mut suite = SuiteResult::new("representation-factored", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x726570);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let direct = match chi_im(&params, &ctx) {
            Some(v) => v,
            None => {
                suite.skip();
                continue;
            }
        };
        let factored = match chi_im_factored(&params, &ctx) {
            Ok(v) => v * params.prefactor,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        suite.record(rel_err(direct, factored));
    }
    suite
}

pub fn representation_suite(samples: usize, seed: u64) -> SuiteResult {
    representation_suite_with(samples, seed, |params, ctx| {
        compute_chi(params, ctx).ok().map(|chi| chi.chi_im)
    })
}

/// At `gamma2 = 0` the full form, the factored form and the reduced witness
/// form must agree pairwise to near machine precision.
pub fn reduction_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("gamma2-zero-reduction", 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x726564);
    for _ in 0..samples {
        let (mut params, ctx) = draw_params(&mut rng);
        params.gamma2 = 0.0;
        let full = match compute_chi(&params, &ctx) {
            Ok(chi) => chi.chi_im,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        let reduced = match compute_chi_gamma2zero(&params, &ctx) {
            Ok(chi) => chi.chi_im,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        suite.record(rel_err(full, reduced));
        if let Ok(factored) = chi_im_factored(&params, &ctx) {
            suite.record(rel_err(factored * params.prefactor, reduced));
        }
    }
    suite
}

/// Dressed eigenvalues versus detuning-cubic roots.
pub fn spectral_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("spectral-identity", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x737065);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let roots = match solve_delta_cubic(&params, ctx.kx) {
            Ok(r) => r,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        let eig = eigensystem(&params, ctx.kx);
        let scale = roots.iter().fold(1.0_f64, |m, r| m.max(r.abs()));
        for j in 0..3 {
            suite.record((roots[j] - eig.states[j].lambda).abs() / scale);
        }
    }
    suite
}

/// Vieta identities for the cubic roots.
pub fn vieta_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("vieta", 1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x766965);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let roots = match solve_delta_cubic(&params, ctx.kx) {
            Ok(r) => r,
            Err(_) => {
                suite.skip();
                continue;
            }
        };
        let s = ctx.kx.sin();
        let p = params.omega1 * params.omega1 * s * s
            + params.omega2 * params.omega2
            + params.omega3 * params.omega3;
        let q = params.omega1 * params.omega2 * params.omega3 * s * params.phi.cos();
        let sum = roots[0] + roots[1] + roots[2];
        let pair = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        let prod = roots[0] * roots[1] * roots[2];
        let mag = roots.iter().fold(1.0_f64, |m, r| m.max(r.abs()));
        suite.record(sum.abs() / mag.max(1.0));
        suite.record((pair + p / 4.0).abs() / (p / 4.0).max(1.0));
        suite.record((prod - q / 4.0).abs() / (q / 4.0).abs().max(1.0));
    }
    suite
}

/// Eigenvector quality: residuals and orthonormality.
pub fn eigenvector_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("eigenvectors", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x656967);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let ham = build_hamiltonian(&params, ctx.kx);
        let scale = ham.norm();
        if scale == 0.0 {
            suite.skip();
            continue;
        }
        let eig = eigensystem(&params, ctx.kx);
        let vs: Vec<[num_complex::Complex64; 3]> =
            eig.states.iter().map(|s| [s.c_a1, s.c_a2, s.c_b]).collect();
        for j in 0..3 {
            let mut worst = 0.0_f64;
            for row in 0..3 {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for col in 0..3 {
                    acc += ham.matrix[row][col] * vs[j][col];
                }
                acc -= eig.states[j].lambda * vs[j][row];
                worst = worst.max(acc.norm());
            }
            suite.record(worst / scale);
            for k in (j + 1)..3 {
                let overlap = vs[j][0].conj() * vs[k][0]
                    + vs[j][1].conj() * vs[k][1]
                    + vs[j][2].conj() * vs[k][2];
                suite.record(overlap.norm());
            }
        }
    }
    suite
}

/// chi(phi) must equal chi(-phi) exactly (only cos phi enters).
pub fn phase_parity_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("phase-parity", 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x706172);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let plus = compute_chi(&params, &ctx);
        let minus = compute_chi(&params.with_phi(-params.phi), &ctx);
        match (plus, minus) {
            (Ok(p), Ok(m)) => {
                suite.record((p.chi_im - m.chi_im).abs());
                suite.record((p.chi_re - m.chi_re).abs());
            }
            _ => suite.skip(),
        }
    }
    suite
}

/// chi''(kx; pi) must mirror chi''(-kx; 0) and profiles reflect across the
/// antinode.
pub fn mirror_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("mirror-reflection", 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6972);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let pi_phase = compute_chi(&params.with_phi(params.phi + PI), &ctx);
        let mirrored = compute_chi(&params, &ProbeContext::new(ctx.delta, -ctx.kx));
        match (pi_phase, mirrored) {
            (Ok(p), Ok(m)) => suite.record(rel_err(p.chi_im, m.chi_im)),
            _ => suite.skip(),
        }
        // Half-wave reflection.
        let a = compute_chi(&params, &ctx);
        let b = compute_chi(&params, &ProbeContext::new(ctx.delta, PI - ctx.kx));
        match (a, b) {
            (Ok(x), Ok(y)) => suite.record(rel_err(x.chi_im, y.chi_im)),
            _ => suite.skip(),
        }
    }
    suite
}

/// Scaling the prefactor scales both response parts exactly.
pub fn prefactor_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("prefactor-linearity", 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x707265);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let factor: f64 = rng.random_range(0.1..10.0);
        let base = compute_chi(&params, &ctx);
        let scaled = compute_chi(&params.with_prefactor(factor), &ctx);
        match (base, scaled) {
            (Ok(b), Ok(s)) => {
                suite.record((s.chi_im - factor * b.chi_im).abs());
                suite.record((s.chi_re - factor * b.chi_re).abs());
            }
            _ => suite.skip(),
        }
    }
    suite
}

/// Only the collective phase matters: random per-field phase triples with
/// the same collective value give the same response.
pub fn collective_phase_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("collective-phase", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x636f6c);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let phases = FieldPhases {
            phi1: rng.random_range(0.0..(2.0 * PI)),
            phi2: rng.random_range(0.0..(2.0 * PI)),
            phi3: rng.random_range(0.0..(2.0 * PI)),
            ..FieldPhases::default()
        };
        let collective = FieldPhases::collective(phases.collective_phase());
        let a = steady_state_solve(&params, &ctx, &phases);
        let b = steady_state_solve(&params, &ctx, &collective);
        match (a, b) {
            (Ok(x), Ok(y)) => {
                let xa = x.chi(params.prefactor);
                let ya = y.chi(params.prefactor);
                suite.record((xa - ya).norm() / xa.norm().max(ya.norm()).max(1e-12));
            }
            _ => suite.skip(),
        }
    }
    suite
}

/// With opposed propagation angles the traveling phases cancel: the probe
/// response is independent of the wavevector ratio.
pub fn traveling_phase_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("traveling-phase", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x747276);
    for _ in 0..samples {
        let (params, ctx) = draw_params(&mut rng);
        let base = FieldPhases::collective(params.phi);
        let scaled = FieldPhases {
            k_over_kappa: rng.random_range(0.1..5.0),
            ..base
        };
        let a = steady_state_solve(&params, &ctx, &base);
        let b = steady_state_solve(&params, &ctx, &scaled);
        match (a, b) {
            (Ok(x), Ok(y)) => {
                let xa = x.chi(params.prefactor);
                let ya = y.chi(params.prefactor);
                suite.record((xa - ya).norm() / xa.norm().max(ya.norm()).max(1e-12));
            }
            _ => suite.skip(),
        }
    }
    suite
}

/// Run every suite. `samples` below 100 is rejected.
pub fn run_verification(opts: &VerifyOptions) -> Result<VerificationReport> {
    if opts.samples < 100 {
        return Err(Error::InvalidConfig(format!(
            "verification needs at least 100 samples, got {}",
            opts.samples
        )));
    }
    let s = opts.samples;
    let seed = opts.seed;
    let suites = vec![
        oracle_equivalence_suite(s, seed),
        dual_oracle_suite(opts.integration_samples, seed),
        representation_suite(s, seed),
        reduction_suite(s, seed),
        spectral_suite(s, seed),
        vieta_suite(s, seed),
        eigenvector_suite(s, seed),
        phase_parity_suite(s, seed),
        mirror_suite(s, seed),
        prefactor_suite(s, seed),
        collective_phase_suite(opts.phase_samples, seed),
        traveling_phase_suite(opts.phase_samples, seed),
    ];
    Ok(VerificationReport {
        seed,
        samples: s,
        suites,
    })
}
