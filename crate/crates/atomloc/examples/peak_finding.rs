//! Peak detection and localization-regime classification for the
//! well-separated-branch drive configuration.

use atomloc::scan::{classify_regime, scan_profile, ClassifyOptions};
use atomloc::ModelParams;
use std::f64::consts::{FRAC_PI_2, PI};

fn main() -> atomloc::Result<()> {
    let base = ModelParams::new(20.0, 22.0, 25.0).with_gamma2(1.0);
    let delta = 5.0;

    let profiles: Vec<_> = [0.0, FRAC_PI_2, PI]
        .into_iter()
        .map(|phi| scan_profile(&base.with_phi(phi), delta, 4001))
        .collect::<Result<_, _>>()?;
    let classification = classify_regime(&profiles, &ClassifyOptions::default())?;

    println!("drive (20, 22, 25), gamma2 = 1, probe detuning {delta}");
    for report in &classification.reports {
        println!(
            "\nphi = {:>6.4}: {:?}, occupancy lower: {} upper: {}",
            report.phi, report.regime, report.occupancy.lower, report.occupancy.upper
        );
        for p in &report.peaks {
            println!(
                "   peak at kx = {:+.4}  height {:.4}  fwhm {:.4}  prominence {:.4}",
                p.position, p.height, p.fwhm, p.prominence
            );
        }
    }
    if let Some(mirror) = classification.mirror {
        println!(
            "\nzero/pi mirror check: max position deviation {:.2e} (grid step {:.2e}) -> {}",
            mirror.max_position_deviation,
            mirror.grid_step,
            if mirror.consistent {
                "consistent"
            } else {
                "inconsistent"
            }
        );
    }
    Ok(())
}
