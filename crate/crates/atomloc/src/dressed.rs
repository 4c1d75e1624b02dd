//! Dressed states of the strong-drive Hamiltonian: eigenvalues (the probe
//! resonance detunings), bare-basis amplitudes, and the resulting decay
//! rates that predict absorption peak sharpness.
//!
//! The eigenvalues here are computed directly from the 3×3 Hermitian matrix
//! (trigonometric analytic method plus a Newton polish on the matrix's own
//! characteristic polynomial), deliberately *not* by reusing the detuning
//! cubic: the secular identity between the two routes is a tested property,
//! not an implementation shortcut.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::Result;
use crate::linalg::{frobenius3, matvec3, norm3, solve3, Mat3, Vec3};
use crate::params::ModelParams;
use crate::roots::branch_curves;

type C64 = Complex64;

/// Propagation geometry of the two traveling drives.
///
/// Only `cos(theta2) + cos(theta3) = 0` matters for observables: it cancels
/// the traveling phases in every closed coupling loop. Both sign choices of
/// the pair appear in the source material; either is fine and both are
/// expressible here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleConvention {
    pub theta2: f64,
    pub theta3: f64,
    /// Traveling-drive wavevector over the standing-wave wavevector.
    /// Provably irrelevant to `|c_i|^2` and decay rates.
    pub k_over_kappa: f64,
}

impl Default for AngleConvention {
    fn default() -> Self {
        AngleConvention {
            theta2: 3.0 * FRAC_PI_4,
            theta3: FRAC_PI_4,
            k_over_kappa: 1.0,
        }
    }
}

/// The effective drive Hamiltonian in the bare basis (upper probe level,
/// auxiliary upper level, loop ground level), with the overall 1/2 of the
/// rotating-wave couplings included. Hermitian with zero diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    pub matrix: Mat3,
}

impl EffectiveHamiltonian {
    /// Frobenius norm, used to scale residual and degeneracy tolerances.
    pub fn norm(&self) -> f64 {
        frobenius3(&self.matrix)
    }
}

/// One dressed state: eigenvalue, normalized bare-basis amplitudes and the
/// spontaneous decay rate `|c_a1|^2 gamma1 + |c_a2|^2 gamma2` (the loop
/// ground level does not decay).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedState {
    pub lambda: f64,
    #[serde(skip)]
    pub c_a1: C64,
    #[serde(skip)]
    pub c_a2: C64,
    #[serde(skip)]
    pub c_b: C64,
    pub decay: f64,
}

/// Eigen-decomposition sorted by eigenvalue ascending. `degenerate` reports
/// (non-fatally) that two eigenvalues coincided within tolerance and the
/// eigenvectors were chosen orthogonal inside the degenerate subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem {
    pub states: [DressedState; 3],
    pub degenerate: bool,
}

/// Cubic branch labels in the pointwise sorted convention of
/// `solve_delta_cubic`: lower, middle, upper eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Delta5,
    Delta3,
    Delta4,
}

impl Branch {
    fn index(self) -> usize {
        match self {
            Branch::Delta5 => 0,
            Branch::Delta3 => 1,
            Branch::Delta4 => 2,
        }
    }
}

/// Build the effective Hamiltonian with the default angle convention.
pub fn build_hamiltonian(params: &ModelParams, kx: f64) -> EffectiveHamiltonian {
    build_hamiltonian_with(params, kx, &AngleConvention::default())
}

/// Build the effective Hamiltonian with an explicit angle convention.
pub fn build_hamiltonian_with(
    params: &ModelParams,
    kx: f64,
    angles: &AngleConvention,
) -> EffectiveHamiltonian {
    let i = C64::i();
    let zero = C64::new(0.0, 0.0);
    let s = kx.sin();
    let travel2 = (i * angles.k_over_kappa * kx * angles.theta2.cos()).exp();
    let travel3 = (i * angles.k_over_kappa * kx * angles.theta3.cos()).exp();
    let h12 = 0.5 * params.omega3 * (-i * params.phi).exp() * travel3;
    let h13 = C64::new(0.5 * params.omega1 * s, 0.0);
    let h23 = 0.5 * params.omega2 * travel2;
    EffectiveHamiltonian {
        matrix: [
            [zero, h12, h13],
            [h12.conj(), zero, h23],
            [h13.conj(), h23.conj(), zero],
        ],
    }
}

/// Eigenvalues of a 3×3 Hermitian matrix, ascending, by the analytic
/// trigonometric method with one Newton polish per value on the matrix's
/// characteristic polynomial.
fn hermitian_eigenvalues(h: &Mat3) -> [f64; 3] {
    let trace = h[0][0].re + h[1][1].re + h[2][2].re;
    let q = trace / 3.0;
    let p1 = h[0][1].norm_sqr() + h[0][2].norm_sqr() + h[1][2].norm_sqr();
    let p2 =
        (h[0][0].re - q).powi(2) + (h[1][1].re - q).powi(2) + (h[2][2].re - q).powi(2) + 2.0 * p1;
    if p2 <= 0.0 {
        return [q, q, q];
    }
    let p = (p2 / 6.0).sqrt();

    let shifted: Mat3 = std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let mut v = h[r][c] / p;
            if r == c {
                v -= q / p;
            }
            v
        })
    });
    let r = (det3(&shifted).re / 2.0).clamp(-1.0, 1.0);
    let phase = r.acos() / 3.0;
    let hi = q + 2.0 * p * phase.cos();
    let lo = q + 2.0 * p * (phase + 2.0 * PI / 3.0).cos();
    let mid = trace - hi - lo;

    // Characteristic polynomial p(x) = x^3 - tr x^2 + m2 x - det from the
    // matrix itself; one Newton step per eigenvalue.
    let m2 = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).re
        + (h[0][0] * h[2][2] - h[0][2] * h[2][0]).re
        + (h[1][1] * h[2][2] - h[1][2] * h[2][1]).re;
    let det = det3(h).re;
    let mut eig = [lo, mid, hi];
    for x in eig.iter_mut() {
        let f = ((*x - trace) * *x + m2) * *x - det;
        let fp = (3.0 * *x - 2.0 * trace) * *x + m2;
        if fp.abs() > 1e-8 * p2.max(1.0) {
            *x -= f / fp;
        }
    }
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eig
}

fn det3(m: &Mat3) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn cross(u: &Vec3, w: &Vec3) -> Vec3 {
    [
        u[1] * w[2] - u[2] * w[1],
        u[2] * w[0] - u[0] * w[2],
        u[0] * w[1] - u[1] * w[0],
    ]
}

fn normalize(v: &mut Vec3) {
    let n = norm3(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

/// Null vector of `H - lambda I` for a simple eigenvalue: the largest cross
/// product of two rows (every row is orthogonal to the eigenvector in the
/// bilinear sense).
fn null_vector_simple(k: &Mat3) -> Option<Vec3> {
    let rows = [k[0], k[1], k[2]];
    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[1], &rows[2]),
        cross(&rows[0], &rows[2]),
    ];
    let best = candidates
        .into_iter()
        .max_by(|a, b| norm3(a).partial_cmp(&norm3(b)).expect("finite norms"))?;
    if norm3(&best) == 0.0 {
        return None;
    }
    let mut v = best;
    normalize(&mut v);
    Some(v)
}

/// Orthonormal basis of the null space when `H - lambda I` has rank one:
/// the Hermitian-orthogonal complement of the conjugated largest row.
fn null_basis_rank_one(k: &Mat3) -> [Vec3; 2] {
    let rows = [k[0], k[1], k[2]];
    let row = rows
        .into_iter()
        .max_by(|a, b| norm3(a).partial_cmp(&norm3(b)).expect("finite norms"))
        .expect("three rows");
    let mut w = [row[0].conj(), row[1].conj(), row[2].conj()];
    normalize(&mut w);
    // Start from the axis least aligned with w.
    let axis = (0..3)
        .min_by(|&a, &b| w[a].norm().partial_cmp(&w[b].norm()).expect("finite"))
        .expect("three axes");
    let mut e = [C64::new(0.0, 0.0); 3];
    e[axis] = C64::new(1.0, 0.0);
    let overlap = w[0].conj() * e[0] + w[1].conj() * e[1] + w[2].conj() * e[2];
    let mut v1 = [
        e[0] - overlap * w[0],
        e[1] - overlap * w[1],
        e[2] - overlap * w[2],
    ];
    normalize(&mut v1);
    let mut v2 = cross(&w, &v1);
    for z in v2.iter_mut() {
        *z = z.conj();
    }
    normalize(&mut v2);
    [v1, v2]
}

/// Relative gap below which two eigenvalues are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Full eigen-decomposition with the default angle convention.
pub fn eigensystem(params: &ModelParams, kx: f64) -> Eigensystem {
    eigensystem_with(params, kx, &AngleConvention::default())
}

/// Full eigen-decomposition with an explicit angle convention.
pub fn eigensystem_with(params: &ModelParams, kx: f64, angles: &AngleConvention) -> Eigensystem {
    let ham = build_hamiltonian_with(params, kx, angles);
    let h = &ham.matrix;
    let scale = ham.norm();
    let eig = hermitian_eigenvalues(h);

    if scale == 0.0 {
        // Undriven atom: every bare state is an eigenstate at zero shift.
        let basis = [
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ];
        let states = std::array::from_fn(|j| make_state(params, 0.0, basis[j]));
        return Eigensystem {
            states,
            degenerate: true,
        };
    }

    let gap_tol = DEGENERACY_TOL * scale;
    let pair_degenerate = [
        (eig[1] - eig[0]).abs() <= gap_tol,
        (eig[2] - eig[1]).abs() <= gap_tol,
    ];
    let degenerate = pair_degenerate[0] || pair_degenerate[1];

    let mut vectors = [[C64::new(0.0, 0.0); 3]; 3];
    if degenerate {
        // The two close eigenvalues share a rank-one shifted matrix; take an
        // orthonormal basis there and the simple vector for the isolated one.
        let (da, db, iso) = if pair_degenerate[0] {
            (0, 1, 2)
        } else {
            (1, 2, 0)
        };
        let shifted_deg = shift(h, 0.5 * (eig[da] + eig[db]));
        let basis = null_basis_rank_one(&shifted_deg);
        vectors[da] = basis[0];
        vectors[db] = basis[1];
        let shifted_iso = shift(h, eig[iso]);
        vectors[iso] = null_vector_simple(&shifted_iso)
            .unwrap_or_else(|| null_basis_rank_one(&shifted_iso)[0]);
    } else {
        for j in 0..3 {
            let shifted = shift(h, eig[j]);
            vectors[j] = match null_vector_simple(&shifted) {
                Some(v) => v,
                None => null_basis_rank_one(&shifted)[0],
            };
        }
    }

    // Residual polish by one shifted inverse-power step where needed.
    let mut states = [make_state(params, 0.0, vectors[0]); 3];
    for j in 0..3 {
        let mut v = vectors[j];
        if eigen_residual(h, &v, eig[j]) > 1e-12 * scale {
            let regularized = shift(h, eig[j] + 1e-11 * scale);
            if let Some(mut y) = solve3(&regularized, &v) {
                normalize(&mut y);
                if eigen_residual(h, &y, eig[j]) < eigen_residual(h, &v, eig[j]) {
                    v = y;
                }
            }
        }
        states[j] = make_state(params, eig[j], v);
    }

    Eigensystem { states, degenerate }
}

fn shift(h: &Mat3, lambda: f64) -> Mat3 {
    let mut k = *h;
    for idx in 0..3 {
        k[idx][idx] -= C64::new(lambda, 0.0);
    }
    k
}

fn eigen_residual(h: &Mat3, v: &Vec3, lambda: f64) -> f64 {
    let hv = matvec3(h, v);
    let r = [
        hv[0] - lambda * v[0],
        hv[1] - lambda * v[1],
        hv[2] - lambda * v[2],
    ];
    norm3(&r)
}

fn make_state(params: &ModelParams, lambda: f64, v: Vec3) -> DressedState {
    DressedState {
        lambda,
        c_a1: v[0],
        c_a2: v[1],
        c_b: v[2],
        decay: v[0].norm_sqr() * params.gamma1 + v[1].norm_sqr() * params.gamma2,
    }
}

/// Decay rate of the dressed state resonant with the chosen cubic branch:
/// larger decay means a wider, lower absorption peak where that branch
/// crosses the probe detuning.
pub fn predict_peak_sharpness(params: &ModelParams, kx: f64, branch: Branch) -> f64 {
    eigensystem(params, kx).states[branch.index()].decay
}

/// Eigenvalues and decay rates sampled on a grid, relabelled to follow the
/// tracked figure branches of [`branch_curves`] (so the `delta3` column of
/// the roots output and the `lambda3` column here describe the same branch).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DressedCurves {
    pub kx: Vec<f64>,
    pub lambda3: Vec<f64>,
    pub lambda4: Vec<f64>,
    pub lambda5: Vec<f64>,
    pub decay3: Vec<f64>,
    pub decay4: Vec<f64>,
    pub decay5: Vec<f64>,
}

/// Sample the dressed spectrum over a strictly increasing `kx` grid.
pub fn dressed_curves(params: &ModelParams, kx_grid: &[f64]) -> Result<DressedCurves> {
    let branches = branch_curves(params, kx_grid)?;
    let n = kx_grid.len();
    let mut curves = DressedCurves {
        kx: kx_grid.to_vec(),
        lambda3: Vec::with_capacity(n),
        lambda4: Vec::with_capacity(n),
        lambda5: Vec::with_capacity(n),
        decay3: Vec::with_capacity(n),
        decay4: Vec::with_capacity(n),
        decay5: Vec::with_capacity(n),
    };
    for i in 0..n {
        let eig = eigensystem(params, kx_grid[i]);
        let pick = |target: f64| -> &DressedState {
            eig.states
                .iter()
                .min_by(|a, b| {
                    (a.lambda - target)
                        .abs()
                        .partial_cmp(&(b.lambda - target).abs())
                        .expect("finite eigenvalues")
                })
                .expect("three states")
        };
        let s3 = pick(branches.delta3[i]);
        curves.lambda3.push(s3.lambda);
        curves.decay3.push(s3.decay);
        let s4 = pick(branches.delta4[i]);
        curves.lambda4.push(s4.lambda);
        curves.decay4.push(s4.decay);
        let s5 = pick(branches.delta5[i]);
        curves.lambda5.push(s5.lambda);
        curves.decay5.push(s5.decay);
    }
    Ok(curves)
}
