//! Absorption versus position for the equal-drive figure parameters,
//! showing how the auxiliary decay erodes the upper-branch peaks while the
//! line-branch peaks survive.

use atomloc::scan::{find_peaks, scan_profile};
use atomloc::ModelParams;

fn main() -> atomloc::Result<()> {
    let delta = 13.0;
    println!("drive (30, 20, 20), phi = 0, probe detuning {delta}");
    for gamma2 in [0.0, 1.0, 10.0] {
        let params = ModelParams::new(30.0, 20.0, 20.0).with_gamma2(gamma2);
        let profile = scan_profile(&params, delta, 4001)?;
        let peaks = find_peaks(&profile, 0.01);
        println!("\ngamma2 = {gamma2}: {} peaks", peaks.len());
        println!(
            "{:>10} {:>12} {:>10} {:>12}",
            "kx", "height", "fwhm", "prominence"
        );
        for p in &peaks {
            println!(
                "{:>10.4} {:>12.5} {:>10.4} {:>12.5}",
                p.position, p.height, p.fwhm, p.prominence
            );
        }
    }
    Ok(())
}
