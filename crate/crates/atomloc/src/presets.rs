//! Figure presets: the parameter sets used for the reference plots.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PresetId {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PresetId::Fig3 => "fig3",
            PresetId::Fig4 => "fig4",
            PresetId::Fig5 => "fig5",
            PresetId::Fig6 => "fig6",
        };
        f.write_str(name)
    }
}

impl FromStr for PresetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "fig3" => Ok(PresetId::Fig3),
            "fig4" => Ok(PresetId::Fig4),
            "fig5" => Ok(PresetId::Fig5),
            "fig6" => Ok(PresetId::Fig6),
            other => Err(Error::InvalidConfig(format!(
                "unknown preset '{other}' (expected fig3, fig4, fig5 or fig6)"
            ))),
        }
    }
}

/// One phase row of a figure: the phase value and the detunings of its
/// line plots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiCase {
    pub phi: f64,
    pub deltas: Vec<f64>,
}

/// Full parameter set of one reference figure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigurePreset {
    pub id: PresetId,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub gamma1: f64,
    pub gamma2_list: Vec<f64>,
    pub phi_cases: Vec<PhiCase>,
    /// Contour export range: (delta_min, delta_max, steps).
    pub delta_range: (f64, f64, usize),
}

impl FigurePreset {
    /// Model parameters for one (gamma2, phi) cell of the figure.
    pub fn params(&self, gamma2: f64, phi: f64) -> ModelParams {
        ModelParams::new(self.omega1, self.omega2, self.omega3)
            .with_gamma1(self.gamma1)
            .with_gamma2(gamma2)
            .with_phi(phi)
    }

    /// Caption fields as key/value pairs for output headers.
    pub fn caption_fields(&self) -> Vec<(String, String)> {
        vec![
            ("preset".into(), self.id.to_string()),
            ("omega1".into(), format!("{}", self.omega1)),
            ("omega2".into(), format!("{}", self.omega2)),
            ("omega3".into(), format!("{}", self.omega3)),
            ("gamma1".into(), format!("{}", self.gamma1)),
            (
                "gamma2_list".into(),
                self.gamma2_list
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
            ),
        ]
    }
}

/// The preset table.
pub fn preset(id: PresetId) -> FigurePreset {
    match id {
        PresetId::Fig3 => FigurePreset {
            id,
            omega1: 30.0,
            omega2: 20.0,
            omega3: 20.0,
            gamma1: 1.0,
            gamma2_list: vec![0.0, 1.0, 10.0],
            phi_cases: vec![
                PhiCase {
                    phi: 0.0,
                    deltas: vec![0.0, 5.0, 13.0],
                },
                PhiCase {
                    phi: FRAC_PI_2,
                    deltas: vec![0.0, 12.0, 16.0],
                },
            ],
            delta_range: (-25.0, 25.0, 201),
        },
        PresetId::Fig4 => FigurePreset {
            id,
            omega1: 30.0,
            omega2: 20.0,
            omega3: 10.0,
            gamma1: 1.0,
            gamma2_list: vec![0.0, 1.0, 10.0],
            phi_cases: vec![
                PhiCase {
                    phi: 0.0,
                    deltas: vec![0.0, 5.0, 13.0],
                },
                PhiCase {
                    phi: FRAC_PI_2,
                    deltas: vec![0.0, 12.0, 16.0],
                },
            ],
            delta_range: (-25.0, 25.0, 201),
        },
        PresetId::Fig5 => FigurePreset {
            id,
            omega1: 30.0,
            omega2: 20.0,
            omega3: 20.0,
            gamma1: 1.0,
            gamma2_list: vec![10.0, 1e3, 1e4],
            phi_cases: vec![
                PhiCase {
                    phi: 0.0,
                    deltas: vec![0.0, 5.0, 13.0],
                },
                PhiCase {
                    phi: FRAC_PI_2,
                    deltas: vec![0.0, 12.0, 16.0],
                },
            ],
            delta_range: (-25.0, 25.0, 201),
        },
        PresetId::Fig6 => FigurePreset {
            id,
            omega1: 20.0,
            omega2: 22.0,
            omega3: 25.0,
            gamma1: 1.0,
            gamma2_list: vec![1.0],
            phi_cases: vec![
                PhiCase {
                    phi: 0.0,
                    deltas: vec![0.0, 5.0, 12.0],
                },
                PhiCase {
                    phi: FRAC_PI_2,
                    deltas: vec![0.0, 5.0, 12.0],
                },
                PhiCase {
                    phi: PI,
                    deltas: vec![0.0, 5.0, 12.0],
                },
            ],
            delta_range: (-25.0, 25.0, 201),
        },
    }
}
