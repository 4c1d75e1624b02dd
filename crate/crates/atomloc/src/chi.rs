//! Closed-form weak-probe susceptibility of the loop-driven four-level
//! scheme and its equivalent reduced representation.
//!
//! The linear response at one `(delta, kx)` point is
//! `chi = prefactor * (omega2^2 - 4 delta^2 + 2 i gamma2 delta) / (A + i B)`,
//! with the real quantities `A`, `B` assembled in [`compute_denominator`].
//! The collective drive phase enters only through `cos(phi)` inside `A`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{ModelParams, ProbeContext};

/// Below this value of `Z = A^2 + B^2` the linear-response formula is
/// declared degenerate instead of returning huge values. `Z = 0` needs
/// `A = B = 0` simultaneously, a measure-zero parameter manifold.
pub const Z_GUARD: f64 = 1e-18;

/// The real and imaginary parts of the response denominator and their
/// squared modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Denominator {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

/// Dispersive and absorptive response at one probe point, together with
/// the denominator pieces that produced it (all in units of the prefactor
/// over gamma1-scaled rates).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Susceptibility {
    /// Dispersive part chi'.
    pub chi_re: f64,
    /// Absorptive part chi''.
    pub chi_im: f64,
    pub a_part: f64,
    pub b_part: f64,
    /// `a_part^2 + b_part^2`.
    pub z_part: f64,
}

/// Assemble `A`, `B`, `Z` for the response denominator `Y = A + iB`.
///
/// `A = -8 d^3 + 2 d (w1^2 sin^2 kx + w2^2 + w3^2) + 2 g1 g2 d
///      + 2 w1 w2 w3 cos(phi) sin(kx)`,
/// `B = 4 d^2 (g1 + g2) - g1 w2^2 - g2 w1^2 sin^2 kx`.
pub fn compute_denominator(params: &ModelParams, ctx: &ProbeContext) -> Denominator {
    let s = ctx.kx.sin();
    let d = ctx.delta;
    let cos_phi = params.phi.cos();
    let w1s_sq = params.omega1 * params.omega1 * s * s;
    let w2_sq = params.omega2 * params.omega2;
    let w3_sq = params.omega3 * params.omega3;

    let a = -8.0 * d * d * d
        + 2.0 * d * (w1s_sq + w2_sq + w3_sq)
        + 2.0 * params.gamma1 * params.gamma2 * d
        + 2.0 * params.omega1 * params.omega2 * params.omega3 * cos_phi * s;
    let b = 4.0 * d * d * (params.gamma1 + params.gamma2)
        - params.gamma1 * w2_sq
        - params.gamma2 * w1s_sq;
    Denominator {
        a,
        b,
        z: a * a + b * b,
    }
}

/// Closed-form susceptibility at one probe point.
///
/// Fails with [`Error::DegenerateDenominator`] when `Z` is below [`Z_GUARD`];
/// absorption and dispersion are otherwise total functions of valid inputs.
pub fn compute_chi(params: &ModelParams, ctx: &ProbeContext) -> Result<Susceptibility> {
    params.validate()?;
    let den = compute_denominator(params, ctx);
    if !(den.z > Z_GUARD) {
        return Err(Error::DegenerateDenominator {
            z: den.z,
            delta: ctx.delta,
            kx: ctx.kx,
        });
    }
    let d = ctx.delta;
    let num_re = params.omega2 * params.omega2 - 4.0 * d * d;
    let num_im = 2.0 * params.gamma2 * d;
    // chi = prefactor * (num_re + i num_im) * (A - iB) / Z, prefactor last so
    // scaling it rescales the output exactly.
    let chi_re = params.prefactor * ((num_re * den.a + num_im * den.b) / den.z);
    let chi_im = params.prefactor * ((num_im * den.a - num_re * den.b) / den.z);
    Ok(Susceptibility {
        chi_re,
        chi_im,
        a_part: den.a,
        b_part: den.b,
        z_part: den.z,
    })
}

/// The earlier reduced closed form, valid only for `gamma2 = 0`. Kept as an
/// independent consistency witness for [`compute_chi`]; the two must agree
/// pointwise whenever `gamma2 = 0`.
pub fn compute_chi_gamma2zero(params: &ModelParams, ctx: &ProbeContext) -> Result<Susceptibility> {
    params.validate()?;
    if params.gamma2 != 0.0 {
        return Err(Error::InvalidReduction(params.gamma2));
    }
    let s = ctx.kx.sin();
    let d = ctx.delta;
    let cos_phi = params.phi.cos();
    let w2_sq = params.omega2 * params.omega2;
    let lor = w2_sq - 4.0 * d * d;
    // D is the phase-dependent bracket; it equals -A at gamma2 = 0.
    let big_d = 8.0 * d * d * d
        - 2.0 * d * (params.omega1 * params.omega1 * s * s + w2_sq + params.omega3 * params.omega3)
        - 2.0 * params.omega1 * params.omega2 * params.omega3 * cos_phi * s;
    let den = params.gamma1 * params.gamma1 * lor * lor + big_d * big_d;
    if !(den > Z_GUARD) {
        return Err(Error::DegenerateDenominator {
            z: den,
            delta: ctx.delta,
            kx: ctx.kx,
        });
    }
    let chi_im = params.prefactor * (params.gamma1 * lor * lor / den);
    let chi_re = params.prefactor * (-(lor * big_d) / den);
    Ok(Susceptibility {
        chi_re,
        chi_im,
        a_part: -big_d,
        b_part: -params.gamma1 * lor,
        z_part: den,
    })
}
