//! Acceptance suite: every release criterion as one test, each printing a
//! PASS line with its measured figure of merit. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use atomloc::dressed::{build_hamiltonian, eigensystem};
use atomloc::scan::{find_peaks, scan_profile, ClassifyOptions, Regime};
use atomloc::verify::{
    collective_phase_suite, dual_oracle_suite, eigenvector_suite, mirror_suite,
    oracle_equivalence_suite, phase_parity_suite, reduction_suite, representation_suite,
    run_verification, spectral_suite, traveling_phase_suite, vieta_suite, VerifyOptions,
};
use atomloc::{classify_regime, solve_delta_cubic, ModelParams};

const SEED: u64 = 42;
const SAMPLES: usize = 1000;

const TOL_ORACLE: f64 = 1e-8;
const TOL_DUAL_ORACLE: f64 = 1e-7;
const TOL_REPRESENTATION: f64 = 1e-10;
const TOL_REDUCTION: f64 = 1e-12;
const TOL_SPECTRAL: f64 = 1e-10;
const TOL_VIETA: f64 = 1e-9;
const TOL_EIGENVECTOR: f64 = 1e-10;
const TOL_CLOSED_FORM: f64 = 1e-9;
const TOL_FLAT_SPREAD: f64 = 1e-12;
const TOL_MIRROR: f64 = 1e-12;
const TOL_PHASE_INVARIANCE: f64 = 1e-10;
const RUNTIME_BUDGET_SECS: f64 = 10.0;

/// Golden threshold for the no-localization case (fig6 parameters,
/// quadrature phase, delta = 5): frozen from the first oracle-backed run,
/// which measured a maximum peak prominence of 7.224e-5 against 0.994 for
/// the localized zero-phase case.
const FIG6_QUADRATURE_PROMINENCE_MAX: f64 = 1.5e-4;

fn fig3() -> ModelParams {
    ModelParams::new(30.0, 20.0, 20.0)
}

fn fig6() -> ModelParams {
    ModelParams::new(20.0, 22.0, 25.0).with_gamma2(1.0)
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let suite = oracle_equivalence_suite(SAMPLES, SEED);
    assert!(suite.checked >= 2 * SAMPLES - 100, "too many skips");
    assert!(
        suite.worst <= TOL_ORACLE,
        "closed form vs linear solve: worst {:.3e}",
        suite.worst
    );
    let dual = dual_oracle_suite(16, SEED);
    assert!(dual.checked >= 16);
    assert!(
        dual.worst <= TOL_DUAL_ORACLE,
        "solve vs integration: worst {:.3e}",
        dual.worst
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed <= RUNTIME_BUDGET_SECS,
        "oracle equivalence took {elapsed:.1} s"
    );
    println!(
        "ACCEPTANCE 1 oracle-equivalence: PASS (worst {:.3e}, dual {:.3e}, {:.2} s)",
        suite.worst, dual.worst, elapsed
    );
}

#[test]
fn criterion_2_representation_equivalence() {
    let rep = representation_suite(SAMPLES, SEED);
    assert!(
        rep.worst <= TOL_REPRESENTATION,
        "factored form: worst {:.3e}",
        rep.worst
    );
    let red = reduction_suite(SAMPLES, SEED);
    assert!(
        red.worst <= TOL_REDUCTION,
        "gamma2 = 0 reduction: worst {:.3e}",
        red.worst
    );
    println!(
        "ACCEPTANCE 2 representation-equivalence: PASS (factored {:.3e}, reduced {:.3e})",
        rep.worst, red.worst
    );
}

#[test]
fn criterion_3_spectral_identity() {
    let spectral = spectral_suite(SAMPLES, SEED);
    assert!(
        spectral.worst <= TOL_SPECTRAL,
        "eigenvalues vs cubic roots: worst {:.3e}",
        spectral.worst
    );
    let vieta = vieta_suite(SAMPLES, SEED);
    assert!(vieta.worst <= TOL_VIETA, "vieta: worst {:.3e}", vieta.worst);
    let vectors = eigenvector_suite(SAMPLES, SEED);
    assert!(
        vectors.worst <= TOL_EIGENVECTOR,
        "eigenvector residuals: worst {:.3e}",
        vectors.worst
    );
    println!(
        "ACCEPTANCE 3 spectral-identity: PASS (values {:.3e}, vieta {:.3e}, vectors {:.3e})",
        spectral.worst, vieta.worst, vectors.worst
    );
}

#[test]
fn criterion_4_closed_form_spot_checks() {
    // Quadrature phase, antinode: {-(1/2)sqrt(1700), 0, +(1/2)sqrt(1700)}.
    let quad = solve_delta_cubic(&fig3().with_phi(FRAC_PI_2), FRAC_PI_2).unwrap();
    let outer = 0.5 * 1700.0_f64.sqrt();
    let mut worst = (quad[0] + outer).abs();
    worst = worst.max(quad[1].abs()).max((quad[2] - outer).abs());

    // Zero phase, antinode: {-15, (30 -/+ sqrt(4100))/4}.
    let zero = solve_delta_cubic(&fig3(), FRAC_PI_2).unwrap();
    let disc = 4100.0_f64.sqrt();
    worst = worst
        .max((zero[0] + 15.0).abs())
        .max((zero[1] - (30.0 - disc) / 4.0).abs())
        .max((zero[2] - (30.0 + disc) / 4.0).abs());

    // The same numbers must come out of the dressed matrix route.
    for (params, expect) in [
        (fig3().with_phi(FRAC_PI_2), [-outer, 0.0, outer]),
        (fig3(), [-15.0, (30.0 - disc) / 4.0, (30.0 + disc) / 4.0]),
    ] {
        let eig = eigensystem(&params, FRAC_PI_2);
        let norm = build_hamiltonian(&params, FRAC_PI_2).norm();
        assert!(norm > 0.0);
        for j in 0..3 {
            worst = worst.max((eig.states[j].lambda - expect[j]).abs());
        }
    }

    assert!(worst <= TOL_CLOSED_FORM, "spot checks: worst {worst:.3e}");
    println!("ACCEPTANCE 4 closed-form-spot-checks: PASS (worst {worst:.3e})");
}

#[test]
fn criterion_5_flat_response_identity() {
    // gamma2 = 0, phi = pi/2, delta = 0: chi'' = 1/gamma1 everywhere.
    let profile = scan_profile(&fig3().with_phi(FRAC_PI_2), 0.0, 4001).unwrap();
    assert_eq!(profile.degenerate_points, 0);
    let max = profile.chi_im.iter().copied().fold(f64::MIN, f64::max);
    let min = profile.chi_im.iter().copied().fold(f64::MAX, f64::min);
    let mean = profile.chi_im.iter().sum::<f64>() / profile.chi_im.len() as f64;
    let spread = (max - min) / mean;
    assert!(spread <= TOL_FLAT_SPREAD, "relative spread {spread:.3e}");
    assert!((mean - 1.0).abs() <= 1e-12, "flat level {mean}");
    println!("ACCEPTANCE 5 flat-response-identity: PASS (spread {spread:.3e})");
}

#[test]
fn criterion_6_sub_half_wavelength_localization() {
    // Localized case: exactly two peaks, confined to one half-wavelength.
    // The delta = +5 line meets the zero-crossing branch where the cubic's
    // inhomogeneous term is negative, i.e. at sin kx < 0, so the occupied
    // half at phi = 0 is (-pi, 0) and the phi = pi mirror occupies (0, pi).
    let opts = ClassifyOptions::default();
    let profiles: Vec<_> = [0.0, FRAC_PI_2, PI]
        .into_iter()
        .map(|phi| scan_profile(&fig6().with_phi(phi), 5.0, 4001).unwrap())
        .collect();
    let class = classify_regime(&profiles, &opts).unwrap();

    let zero = &class.reports[0];
    assert_eq!(zero.regime, Regime::SubHalfWavelength);
    assert_eq!(zero.peaks.len(), 2, "phi = 0 peaks: {:?}", zero.peaks);
    assert!(zero.peaks.iter().all(|p| p.position.sin() < 0.0));
    assert!(zero.occupancy.lower && !zero.occupancy.upper);

    let pi_case = &class.reports[2];
    assert_eq!(pi_case.regime, Regime::SubHalfWavelength);
    assert_eq!(pi_case.peaks.len(), 2);
    assert!(pi_case.peaks.iter().all(|p| p.position.sin() > 0.0));
    assert!(pi_case.occupancy.upper && !pi_case.occupancy.lower);
    assert!(class.mirror.unwrap().consistent);

    // No localization at quadrature phase: every ripple stays below the
    // golden prominence threshold.
    let quad_profile = &profiles[1];
    let ripples = find_peaks(quad_profile, 1e-9);
    let max_prominence = ripples.iter().map(|p| p.prominence).fold(0.0_f64, f64::max);
    assert!(
        max_prominence < FIG6_QUADRATURE_PROMINENCE_MAX,
        "quadrature prominence {max_prominence:.3e}"
    );
    println!(
        "ACCEPTANCE 6 sub-half-wavelength: PASS (2+2 peaks, quadrature prominence {:.3e})",
        max_prominence
    );
}

#[test]
fn criterion_7_gamma2_trends() {
    // (a) phi = 0, delta = 13: outer-branch peaks decay and broaden.
    let inner = [(-13.0_f64 / 15.0).asin(), -PI - (-13.0_f64 / 15.0).asin()];
    let is_inner = |pos: f64| inner.iter().any(|p| (pos - p).abs() < 0.3);
    let mut heights = Vec::new();
    let mut widths = Vec::new();
    for gamma2 in [0.0, 1.0, 10.0] {
        let profile = scan_profile(&fig3().with_gamma2(gamma2), 13.0, 4001).unwrap();
        let peaks = find_peaks(&profile, 0.01);
        let outer: Vec<_> = peaks.iter().filter(|p| !is_inner(p.position)).collect();
        assert_eq!(outer.len(), 2, "gamma2 = {gamma2}: {peaks:?}");
        heights.push(outer.iter().map(|p| p.height).sum::<f64>() / 2.0);
        widths.push(outer.iter().map(|p| p.fwhm).sum::<f64>() / 2.0);
    }
    assert!(
        heights[0] > heights[1] && heights[1] > heights[2],
        "{heights:?}"
    );
    assert!(widths[0] < widths[1] && widths[1] < widths[2], "{widths:?}");

    // (b) phi = 0, delta = 5: line-branch peaks are gamma2-immune to < 1%.
    let mut line_heights = Vec::new();
    for gamma2 in [0.0, 1.0, 10.0] {
        let profile = scan_profile(&fig3().with_gamma2(gamma2), 5.0, 4001).unwrap();
        let peaks = find_peaks(&profile, 0.05);
        assert_eq!(peaks.len(), 2, "gamma2 = {gamma2}: {peaks:?}");
        line_heights.push(peaks.iter().map(|p| p.height).sum::<f64>() / 2.0);
    }
    let drift = line_heights[1..]
        .iter()
        .map(|h| (h - line_heights[0]).abs() / line_heights[0])
        .fold(0.0_f64, f64::max);
    assert!(drift < 0.01, "line-branch height drift {drift:.4}");

    // (c) phi = pi/2, delta = 0: flat at gamma2 = 0, node peaks at 10.
    let opts = ClassifyOptions::default();
    let flat = scan_profile(&fig3().with_phi(FRAC_PI_2), 0.0, 4001).unwrap();
    let flat_class = classify_regime(std::slice::from_ref(&flat), &opts).unwrap();
    assert_eq!(flat_class.reports[0].regime, Regime::Flat);
    let node = scan_profile(&fig3().with_phi(FRAC_PI_2).with_gamma2(10.0), 0.0, 4001).unwrap();
    let node_class = classify_regime(std::slice::from_ref(&node), &opts).unwrap();
    assert_eq!(node_class.reports[0].regime, Regime::NodeLocalization);
    assert!(!node_class.reports[0].peaks.is_empty());

    println!(
        "ACCEPTANCE 7 gamma2-trends: PASS (outer heights {heights:?}, line drift {drift:.2e})"
    );
}

#[test]
fn criterion_8_symmetries() {
    let parity = phase_parity_suite(SAMPLES, SEED);
    assert_eq!(parity.worst, 0.0, "phase parity must be exact");
    let mirror = mirror_suite(SAMPLES, SEED);
    assert!(
        mirror.worst <= TOL_MIRROR,
        "mirror worst {:.3e}",
        mirror.worst
    );
    let collective = collective_phase_suite(200, SEED);
    assert!(
        collective.worst <= TOL_PHASE_INVARIANCE,
        "collective phase worst {:.3e}",
        collective.worst
    );
    let traveling = traveling_phase_suite(200, SEED);
    assert!(
        traveling.worst <= TOL_PHASE_INVARIANCE,
        "traveling phase worst {:.3e}",
        traveling.worst
    );
    println!(
        "ACCEPTANCE 8 symmetries: PASS (parity exact, mirror {:.3e}, collective {:.3e}, traveling {:.3e})",
        mirror.worst, collective.worst, traveling.worst
    );
}

#[test]
fn criterion_9_determinism() {
    // In-process: same options, byte-identical rendered report.
    let opts = VerifyOptions {
        samples: 200,
        seed: SEED,
        phase_samples: 50,
        integration_samples: 4,
    };
    let a = run_verification(&opts).unwrap().render();
    let b = run_verification(&opts).unwrap().render();
    assert_eq!(a, b);

    // Process level: two runs of `verify --seed 42` write byte-identical
    // reports and exit 0.
    let bin = env!("CARGO_BIN_EXE_atomloc");
    let base = std::env::temp_dir().join(format!("atomloc-acceptance-{}", std::process::id()));
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out = base.join(run);
        let status = std::process::Command::new(bin)
            .args([
                "verify",
                "--seed",
                "42",
                "--samples",
                "200",
                "--out",
                out.to_str().unwrap(),
            ])
            .stdout(std::process::Stdio::null())
            .status()
            .expect("spawn atomloc");
        assert!(status.success());
        reports.push(std::fs::read(out.join("verify_report.txt")).unwrap());
    }
    assert_eq!(reports[0], reports[1], "verify reports differ between runs");
    println!("ACCEPTANCE 9 determinism: PASS (byte-identical reports)");
}
