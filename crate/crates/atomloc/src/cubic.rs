//! Trigonometric solver for the depressed cubic `4 d^3 - p d - q = 0` in the
//! three-real-root regime.
//!
//! For the physical coefficients here (`p = w1^2 sin^2 kx + w2^2 + w3^2`,
//! `q = w1 w2 w3 sin(kx) cos(phi)`), AM-GM gives `p^3 >= 27 q^2`, so the
//! discriminant condition for three real roots always holds; equality marks
//! isolated double roots. The arccos argument is clamped against rounding
//! and anything beyond tolerance is reported as a diagnostic error.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Scale-aware residual tolerance: `|4d^3 - pd - q| <= RESIDUAL_TOL * max(1, p^{3/2})`.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Relative slack allowed on the three-real-root discriminant condition.
const DISCRIMINANT_SLACK: f64 = 1e-9;

/// All three real roots of `4 d^3 - p d - q = 0`, ascending.
pub fn three_real_roots(p: f64, q: f64) -> Result<[f64; 3]> {
    if p <= 0.0 {
        // Physically p = 0 only with all drives off, where q = 0 too.
        if q == 0.0 {
            return Ok([0.0, 0.0, 0.0]);
        }
        return Err(Error::ComplexBranch { p, q });
    }

    // Monic form d^3 + A d + B with A = -p/4, B = -q/4; three real roots
    // need |3*sqrt(3)*q| <= p^{3/2}.
    let p_pow = p.powf(1.5);
    let arg = 3.0 * 3.0f64.sqrt() * q / p_pow;
    if arg.abs() > 1.0 + DISCRIMINANT_SLACK {
        return Err(Error::ComplexBranch { p, q });
    }
    let theta = arg.clamp(-1.0, 1.0).acos();
    let radius = (p / 3.0).sqrt();

    let mut roots = [
        radius * (theta / 3.0).cos(),
        radius * ((theta - TAU) / 3.0).cos(),
        radius * ((theta - 2.0 * TAU) / 3.0).cos(),
    ];

    // One Newton polish per root; skipped near double roots where the
    // derivative loses significance.
    for root in roots.iter_mut() {
        let f = 4.0 * *root * *root * *root - p * *root - q;
        let fp = 12.0 * *root * *root - p;
        if fp.abs() > 1e-8 * p.max(1.0) {
            *root -= f / fp;
        }
    }

    roots.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
    debug_assert!(
        roots
            .iter()
            .all(|d| (4.0 * d * d * d - p * d - q).abs() <= RESIDUAL_TOL * p_pow.max(1.0)),
        "cubic residual above tolerance for p = {p}, q = {q}"
    );
    Ok(roots)
}
