//! Cross-check the closed-form susceptibility against the steady-state
//! coherence solve, and the solve against time integration, at a handful of
//! seeded random points.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use atomloc::oracle::{steady_state_integrate, steady_state_solve, FieldPhases};
use atomloc::{compute_chi, ModelParams, ProbeContext};

fn main() -> atomloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!(
        "{:>28} {:>12} {:>12} {:>10}",
        "point (d, kx, phi, g2)", "chi'' exact", "chi'' solve", "rel err"
    );
    let mut worst = 0.0_f64;
    for _ in 0..8 {
        let params = ModelParams::new(
            rng.random_range(5.0..40.0),
            rng.random_range(5.0..40.0),
            rng.random_range(5.0..40.0),
        )
        .with_phi(rng.random_range(0.0..(2.0 * PI)))
        .with_gamma2(rng.random_range(0.0..10.0));
        let ctx = ProbeContext::new(rng.random_range(-20.0..20.0), rng.random_range(-PI..PI));

        let analytic = compute_chi(&params, &ctx)?;
        let oracle = steady_state_solve(&params, &ctx, &FieldPhases::collective(params.phi))?
            .chi(params.prefactor);
        let rel = (analytic.chi_im - oracle.im).abs() / oracle.im.abs().max(1e-12);
        worst = worst.max(rel);
        println!(
            "({:>6.2},{:>6.2},{:>5.2},{:>4.1}) {:>12.5e} {:>12.5e} {:>10.2e}",
            ctx.delta, ctx.kx, params.phi, params.gamma2, analytic.chi_im, oracle.im, rel
        );
    }
    println!("worst relative error: {worst:.2e}");

    // One integration cross-check at the strong-drive antinode.
    let params = ModelParams::new(20.0, 22.0, 25.0).with_gamma2(1.0);
    let ctx = ProbeContext::new(5.0, PI / 2.0);
    let phases = FieldPhases::default();
    let solved = steady_state_solve(&params, &ctx, &phases)?;
    let integrated = steady_state_integrate(&params, &ctx, &phases, 600.0, None)?;
    let rel = (solved.rho_a1c - integrated.rho_a1c).norm() / solved.rho_a1c.norm();
    println!("linear solve vs time integration at the antinode: rel err {rel:.2e}");
    Ok(())
}
