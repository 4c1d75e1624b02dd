//! Root structure of the absorption response: the factored representation
//! of `chi''`, its numerator/denominator root sets, and the five
//! position-dependent resonance branches.
//!
//! Setting `sin(kx)` equal to a denominator root gives the positions of
//! probe absorption maxima; solving the same conditions for the detuning
//! instead gives five curves `delta_i(kx)`. Two of them are the straight
//! lines `-/+ (omega1/2) sin(kx)`; the other three solve the depressed cubic
//! and coincide with the dressed-state eigenvalues.

use num_complex::Complex64;
use serde::Serialize;

use crate::cubic;
use crate::error::{Error, Result};
use crate::params::{ModelParams, ProbeContext};

type C64 = Complex64;

/// Numerator roots `L1, L2`, denominator roots `R1..R4` (in the `sin kx`
/// variable) and the position-independent dominance weights of the two
/// denominator root pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet {
    pub l1: C64,
    pub l2: C64,
    pub r1: f64,
    pub r2: f64,
    pub r3: C64,
    pub r4: C64,
    /// Weight of the `(R1, R2)` pair: `gamma2^2 omega1^4`.
    pub weight_r12: f64,
    /// Weight of the `(R3, R4)` pair: `4 delta^2 omega1^4`.
    pub weight_r34: f64,
}

/// Roots of the absorption numerator quadratic in `sin kx`.
///
/// Complex for any phase with `cos^2 phi < 1`; both collapse to
/// `-2 delta / omega1` at `phi = 0`, `omega2 = omega3`.
pub fn numerator_roots(params: &ModelParams, delta: f64) -> Result<(C64, C64)> {
    if params.omega1 * params.omega2 == 0.0 {
        return Err(Error::ZeroDrive(
            "numerator roots need omega1 and omega2 > 0".into(),
        ));
    }
    let cos_phi = params.phi.cos();
    let scale = 2.0 * delta * params.omega3 / (params.omega1 * params.omega2);
    // sqrt(cos^2 phi - 1) = i |sin phi|.
    let imag = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
    let l1 = scale * C64::new(-cos_phi, imag);
    let l2 = scale * C64::new(-cos_phi, -imag);
    Ok((l1, l2))
}

/// All four denominator roots plus their dominance weights.
///
/// `R3, R4` come from a closed form that divides by `delta`; they are
/// unavailable at exactly zero detuning (use the branch view instead) and
/// may be complex, in which case they predict no real positions.
pub fn denominator_roots(params: &ModelParams, delta: f64) -> Result<RootSet> {
    if params.omega1 == 0.0 {
        return Err(Error::ZeroDrive("denominator roots need omega1 > 0".into()));
    }
    if delta == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    let (l1, l2) = if params.omega2 > 0.0 {
        numerator_roots(params, delta)?
    } else {
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    };
    let cos_phi = params.phi.cos();
    let w1 = params.omega1;
    let w2 = params.omega2;
    let w3 = params.omega3;
    let r1 = -2.0 * delta / w1;
    let r2 = 2.0 * delta / w1;
    let disc = C64::new(
        w2 * w2 * w3 * w3 * cos_phi * cos_phi
            - 4.0 * delta * delta * (w2 * w2 + w3 * w3 - 4.0 * delta * delta),
        0.0,
    )
    .sqrt();
    let denom = 2.0 * delta * w1;
    let r3 = (-w2 * w3 * cos_phi + disc) / denom;
    let r4 = (-w2 * w3 * cos_phi - disc) / denom;
    let w1_4 = w1.powi(4);
    Ok(RootSet {
        l1,
        l2,
        r1,
        r2,
        r3,
        r4,
        weight_r12: params.gamma2 * params.gamma2 * w1_4,
        weight_r34: 4.0 * delta * delta * w1_4,
    })
}

/// The three cubic resonance detunings at one position, ascending.
///
/// `p = omega1^2 sin^2 kx + omega2^2 + omega3^2`,
/// `q = omega1 omega2 omega3 sin(kx) cos(phi)`.
pub fn solve_delta_cubic(params: &ModelParams, kx: f64) -> Result<[f64; 3]> {
    let s = kx.sin();
    let p = params.omega1 * params.omega1 * s * s
        + params.omega2 * params.omega2
        + params.omega3 * params.omega3;
    let q = params.omega1 * params.omega2 * params.omega3 * s * params.phi.cos();
    cubic::three_real_roots(p, q)
}

/// The five resonance curves sampled on a position grid, with the figure
/// labelling convention: `delta3` is the cubic branch through (or on) the
/// zero-detuning line, `delta4` the branch above it, `delta5` the branch
/// below. Labels follow each analytic branch through level crossings by
/// continuity, so past a crossing `delta3` may locally lie below `delta5`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetuningBranches {
    pub kx: Vec<f64>,
    pub delta1: Vec<f64>,
    pub delta2: Vec<f64>,
    pub delta3: Vec<f64>,
    pub delta4: Vec<f64>,
    pub delta5: Vec<f64>,
}

/// Sample all five branches over a strictly increasing `kx` grid.
pub fn branch_curves(params: &ModelParams, kx_grid: &[f64]) -> Result<DetuningBranches> {
    params.validate()?;
    if kx_grid.len() < 2 {
        return Err(Error::InvalidConfig(
            "kx grid needs at least 2 points".into(),
        ));
    }
    if kx_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "kx grid must be strictly increasing".into(),
        ));
    }

    let n = kx_grid.len();
    let sorted: Vec<[f64; 3]> = kx_grid
        .iter()
        .map(|&kx| solve_delta_cubic(params, kx))
        .collect::<Result<_>>()?;

    // Seed the labels at the grid point closest to a node: there the middle
    // root sits on the zero line and the outer roots straddle it.
    let seed = (0..n)
        .min_by(|&a, &b| {
            kx_grid[a]
                .sin()
                .abs()
                .partial_cmp(&kx_grid[b].sin().abs())
                .expect("finite grid")
        })
        .expect("non-empty grid");

    // tracked[j][i]: j = 0 lower, 1 middle (zero-crossing), 2 upper.
    let mut tracked = vec![[0.0_f64; 3]; n];
    tracked[seed] = sorted[seed];
    track_direction(&sorted, &mut tracked, seed, true);
    track_direction(&sorted, &mut tracked, seed, false);

    let sin_half = |kx: f64| 0.5 * params.omega1 * kx.sin();
    Ok(DetuningBranches {
        kx: kx_grid.to_vec(),
        delta1: kx_grid.iter().map(|&kx| -sin_half(kx)).collect(),
        delta2: kx_grid.iter().map(|&kx| sin_half(kx)).collect(),
        delta3: tracked.iter().map(|t| t[1]).collect(),
        delta4: tracked.iter().map(|t| t[2]).collect(),
        delta5: tracked.iter().map(|t| t[0]).collect(),
    })
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Propagate branch labels from the seed outward, matching each new sorted
/// triple to linear extrapolations of the already-labelled curves.
fn track_direction(sorted: &[[f64; 3]], tracked: &mut [[f64; 3]], seed: usize, forward: bool) {
    let n = sorted.len();
    let indices: Vec<usize> = if forward {
        ((seed + 1)..n).collect()
    } else {
        (0..seed).rev().collect()
    };
    for (step, &i) in indices.iter().enumerate() {
        let prev = if forward { i - 1 } else { i + 1 };
        let prev2 = if step >= 1 {
            Some(if forward { i - 2 } else { i + 2 })
        } else {
            None
        };
        let predicted: [f64; 3] = std::array::from_fn(|j| match prev2 {
            Some(p2) => 2.0 * tracked[prev][j] - tracked[p2][j],
            None => tracked[prev][j],
        });
        let best = PERMS
            .iter()
            .min_by(|pa, pb| {
                let cost = |perm: &[usize; 3]| -> f64 {
                    (0..3)
                        .map(|j| {
                            let d = sorted[i][perm[j]] - predicted[j];
                            d * d
                        })
                        .sum()
                };
                cost(pa).partial_cmp(&cost(pb)).expect("finite costs")
            })
            .expect("non-empty permutation set");
        for j in 0..3 {
            tracked[i][j] = sorted[i][best[j]];
        }
    }
}

/// Absorption `chi''/prefactor` reconstructed from the factored
/// representation: numerator and denominator assembled from the root sets
/// rather than from `A` and `B`. Used as the second algebraic route in the
/// representation-equivalence checks.
///
/// Unavailable where the roots themselves are (`delta = 0`, vanishing
/// `omega1` or `omega2`).
pub fn chi_im_factored(params: &ModelParams, ctx: &ProbeContext) -> Result<f64> {
    params.validate()?;
    if params.omega1 == 0.0 || params.omega2 == 0.0 {
        return Err(Error::ZeroDrive(
            "factored representation needs omega1 and omega2 > 0".into(),
        ));
    }
    let roots = denominator_roots(params, ctx.delta)?;
    let s = C64::new(ctx.kx.sin(), 0.0);
    let d = ctx.delta;
    let g1 = params.gamma1;
    let g2 = params.gamma2;
    let w2_sq = params.omega2 * params.omega2;
    let lor = w2_sq - 4.0 * d * d;

    let a_num = g1 * (4.0 * d * d * g2 * g2 + lor * lor);
    let b_num = g2 * params.omega1 * params.omega1 * w2_sq * ((s - roots.l1) * (s - roots.l2)).re;

    let pair12 = (s.re - roots.r1) * (s.re - roots.r2);
    let pair34 = (s - roots.r3) * (s - roots.r4);
    let denominator = g1 * (a_num + 2.0 * b_num)
        + roots.weight_r12 * pair12 * pair12
        + roots.weight_r34 * pair34.norm_sqr();
    if !(denominator > crate::chi::Z_GUARD) {
        return Err(Error::DegenerateDenominator {
            z: denominator,
            delta: ctx.delta,
            kx: ctx.kx,
        });
    }
    Ok((a_num + b_num) / denominator)
}
