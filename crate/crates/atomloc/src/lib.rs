//! Probe susceptibility and subwavelength atom localization for a
//! loop-driven four-level atom in a standing-wave cavity.
//!
//! The library computes the weak-probe linear response `chi = chi' + i chi''`
//! of an atom driven by three strong fields in a closed loop, one of them the
//! standing wave of a cavity. Because the coupling is `omega1 * sin(kx)`,
//! the absorption `chi''` carries position information: its spatial maxima
//! localize the atom to subwavelength precision, and the collective drive
//! phase selects where (and whether) the maxima appear.
//!
//! Everything is cross-checked against an independent steady-state oracle
//! that solves the coherence equations directly, both by linear solve and by
//! time integration. See the `examples/` directory for one runnable program
//! per capability and [`verify`] for the seeded self-check suites.

pub mod chi;
pub mod cli;
pub mod config;
pub mod cubic;
pub mod dressed;
pub mod error;
mod linalg;
pub mod oracle;
pub mod output;
pub mod params;
pub mod presets;
pub mod roots;
pub mod scan;
pub mod verify;

pub use chi::{
    compute_chi, compute_chi_gamma2zero, compute_denominator, Denominator, Susceptibility,
};
pub use error::{Error, Result};
pub use oracle::{
    build_linear_system, steady_state_integrate, steady_state_solve, CoherenceVector, FieldPhases,
};
pub use params::{
    map_level_scheme, LevelScheme, LevelVariant, MappedDecays, ModelParams, ProbeContext,
};
pub use roots::{
    branch_curves, denominator_roots, numerator_roots, solve_delta_cubic, DetuningBranches, RootSet,
};
pub use scan::{
    classify_regime, find_peaks, scan_profile, AbsorptionProfile, Peak, Regime, RegimeReport,
};

/// Tool version reported in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
