//! The five resonance-detuning branches along the standing wave. For equal
//! leg drives at zero phase the zero-crossing branch coincides with the
//! line -(omega1/2) sin kx everywhere.

use atomloc::scan::kx_grid;
use atomloc::{branch_curves, ModelParams};

fn main() -> atomloc::Result<()> {
    let params = ModelParams::new(30.0, 20.0, 20.0);
    let grid = kx_grid(1001);
    let branches = branch_curves(&params, &grid)?;

    println!("drive (30, 20, 20), phi = 0");
    println!(
        "{:>8} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "kx", "delta1", "delta2", "delta3", "delta4", "delta5"
    );
    for i in (0..grid.len()).step_by(100) {
        println!(
            "{:>8.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}",
            branches.kx[i],
            branches.delta1[i],
            branches.delta2[i],
            branches.delta3[i],
            branches.delta4[i],
            branches.delta5[i],
        );
    }

    let max_dev = (0..grid.len())
        .map(|i| (branches.delta3[i] - branches.delta1[i]).abs())
        .fold(0.0_f64, f64::max);
    println!("\nmax |delta3 - delta1| over the grid: {max_dev:.2e}");
    Ok(())
}
