//! Model parameters for the loop-driven four-level scheme.
//!
//! All rates and frequencies are expressed in units of the probe-transition
//! decay rate `gamma1`, which defaults to 1 so that bare figure-caption
//! numbers can be used directly. The overall susceptibility scale
//! (atom density and dipole moment collapsed into one positive prefactor)
//! defaults to 1; outputs are then `chi / N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Drive amplitudes, relative phase, decay rates and the susceptibility
/// prefactor of the four-level loop scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Standing-wave drive amplitude; the spatial coupling is `omega1 * sin(kx)`.
    pub omega1: f64,
    /// Drive amplitude on the lower leg of the loop.
    pub omega2: f64,
    /// Drive amplitude on the upper leg of the loop.
    pub omega3: f64,
    /// Collective relative phase of the three drives (radians).
    pub phi: f64,
    /// Decay rate of the probe transition (the frequency unit, > 0).
    pub gamma1: f64,
    /// Decay rate of the auxiliary upper level (>= 0).
    pub gamma2: f64,
    /// Overall susceptibility scale, > 0.
    pub prefactor: f64,
}

impl ModelParams {
    /// Parameters with the caption defaults `gamma1 = 1`, `gamma2 = 0`,
    /// `phi = 0`, unit prefactor.
    pub fn new(omega1: f64, omega2: f64, omega3: f64) -> Self {
        ModelParams {
            omega1,
            omega2,
            omega3,
            phi: 0.0,
            gamma1: 1.0,
            gamma2: 0.0,
            prefactor: 1.0,
        }
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_gamma1(mut self, gamma1: f64) -> Self {
        self.gamma1 = gamma1;
        self
    }

    pub fn with_gamma2(mut self, gamma2: f64) -> Self {
        self.gamma2 = gamma2;
        self
    }

    pub fn with_prefactor(mut self, prefactor: f64) -> Self {
        self.prefactor = prefactor;
        self
    }

    /// Check the domain invariants: nonnegative drives, `gamma1 > 0`,
    /// `gamma2 >= 0`, positive prefactor, everything finite. `phi` is not
    /// range-restricted.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega3", self.omega3),
            ("phi", self.phi),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("prefactor", self.prefactor),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        if self.omega1 < 0.0 || self.omega2 < 0.0 || self.omega3 < 0.0 {
            return Err(Error::InvalidParams(
                "drive amplitudes must be nonnegative".into(),
            ));
        }
        if self.gamma1 <= 0.0 {
            return Err(Error::InvalidParams("gamma1 must be positive".into()));
        }
        if self.gamma2 < 0.0 {
            return Err(Error::InvalidParams("gamma2 must be nonnegative".into()));
        }
        if self.prefactor <= 0.0 {
            return Err(Error::InvalidParams("prefactor must be positive".into()));
        }
        Ok(())
    }
}

/// One probe evaluation point: detuning and standing-wave phase.
///
/// `kx` is interpreted modulo 2π; every output depends on it only through
/// `sin(kx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeContext {
    /// Probe detuning from the dressed-free probe transition (signed).
    pub delta: f64,
    /// Dimensionless standing-wave position κx (radians).
    pub kx: f64,
}

impl ProbeContext {
    pub fn new(delta: f64, kx: f64) -> Self {
        ProbeContext { delta, kx }
    }
}

/// The four concrete level orderings that reduce to the same weak-probe
/// equations after summing per-transition spontaneous rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelVariant {
    A,
    B,
    C,
    D,
}

/// Per-transition spontaneous decay rates of a concrete level scheme.
///
/// Rates that cannot occur in a given variant must be zero; the mapping
/// rejects inconsistent sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelScheme {
    pub variant: LevelVariant,
    pub gamma_a1b: f64,
    pub gamma_a1c: f64,
    pub gamma_a2b: f64,
    pub gamma_a2c: f64,
    pub gamma_a2a1: f64,
    pub gamma_a1a2: f64,
}

impl LevelScheme {
    pub fn new(variant: LevelVariant) -> Self {
        LevelScheme {
            variant,
            gamma_a1b: 0.0,
            gamma_a1c: 0.0,
            gamma_a2b: 0.0,
            gamma_a2c: 0.0,
            gamma_a2a1: 0.0,
            gamma_a1a2: 0.0,
        }
    }
}

/// Effective decay pair for the weak-probe equations, plus whether the
/// caller must flip the sign of the collective phase (variant B reverses
/// the ordering of the two upper levels, which conjugates the loop drive).
/// Since the response depends on the phase only through its cosine, the
/// flip never changes observables; it is reported for completeness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappedDecays {
    pub gamma1: f64,
    pub gamma2: f64,
    pub flip_phase: bool,
}

/// Collapse a concrete level scheme onto the model's `(gamma1, gamma2)`.
pub fn map_level_scheme(scheme: &LevelScheme) -> Result<MappedDecays> {
    let rates = [
        ("gamma_a1b", scheme.gamma_a1b),
        ("gamma_a1c", scheme.gamma_a1c),
        ("gamma_a2b", scheme.gamma_a2b),
        ("gamma_a2c", scheme.gamma_a2c),
        ("gamma_a2a1", scheme.gamma_a2a1),
        ("gamma_a1a2", scheme.gamma_a1a2),
    ];
    for (name, rate) in rates {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidScheme(format!(
                "{name} must be a nonnegative finite rate, got {rate}"
            )));
        }
    }

    let forbidden: &[(&str, f64)] = match scheme.variant {
        LevelVariant::A => &[
            ("gamma_a2a1", scheme.gamma_a2a1),
            ("gamma_a1a2", scheme.gamma_a1a2),
        ],
        LevelVariant::B => &[("gamma_a1a2", scheme.gamma_a1a2)],
        LevelVariant::C => &[
            ("gamma_a2b", scheme.gamma_a2b),
            ("gamma_a2c", scheme.gamma_a2c),
            ("gamma_a2a1", scheme.gamma_a2a1),
        ],
        LevelVariant::D => &[
            ("gamma_a2c", scheme.gamma_a2c),
            ("gamma_a2a1", scheme.gamma_a2a1),
        ],
    };
    for (name, rate) in forbidden {
        if *rate != 0.0 {
            return Err(Error::InvalidScheme(format!(
                "{name} = {rate} cannot occur in variant {:?}",
                scheme.variant
            )));
        }
    }

    let mapped = match scheme.variant {
        LevelVariant::A => MappedDecays {
            gamma1: scheme.gamma_a1b + scheme.gamma_a1c,
            gamma2: scheme.gamma_a2b + scheme.gamma_a2c,
            flip_phase: false,
        },
        LevelVariant::B => MappedDecays {
            gamma1: scheme.gamma_a1b + scheme.gamma_a1c,
            gamma2: scheme.gamma_a2a1 + scheme.gamma_a2b + scheme.gamma_a2c,
            flip_phase: true,
        },
        LevelVariant::C => MappedDecays {
            gamma1: scheme.gamma_a1a2 + scheme.gamma_a1b + scheme.gamma_a1c,
            gamma2: 0.0,
            flip_phase: false,
        },
        LevelVariant::D => MappedDecays {
            gamma1: scheme.gamma_a1a2 + scheme.gamma_a1b + scheme.gamma_a1c,
            gamma2: scheme.gamma_a2b,
            flip_phase: false,
        },
    };
    Ok(mapped)
}
