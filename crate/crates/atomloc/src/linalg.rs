//! Small fixed-size complex linear algebra used by the steady-state solver
//! and the dressed-state eigenvector polish. Direct elimination only; the
//! systems here are always 3×3.

use num_complex::Complex64;

pub(crate) type C64 = Complex64;
pub(crate) type Mat3 = [[C64; 3]; 3];
pub(crate) type Vec3 = [C64; 3];

pub(crate) fn matvec3(m: &Mat3, v: &Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub(crate) fn norm3(v: &Vec3) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

/// ‖M x − b‖₂.
pub(crate) fn residual3(m: &Mat3, x: &Vec3, b: &Vec3) -> f64 {
    let mx = matvec3(m, x);
    let r = [mx[0] - b[0], mx[1] - b[1], mx[2] - b[2]];
    norm3(&r)
}

/// Solve M x = b by Gaussian elimination with partial pivoting.
///
/// An exactly-zero pivot column marks a free variable (a decoupled mode,
/// e.g. an undriven undamped coherence); it is set to zero and elimination
/// continues. Inconsistent systems come back with a large residual, which
/// the callers check; `None` only means every column was empty.
pub(crate) fn solve3(m: &Mat3, b: &Vec3) -> Option<Vec3> {
    let mut a = *m;
    let mut rhs = *b;
    // pivot row (if any) for each column, in elimination order.
    let mut pivots: [Option<usize>; 3] = [None; 3];
    let mut next_row = 0_usize;

    for col in 0..3 {
        let mut pivot_row = next_row;
        let mut pivot_mag = 0.0;
        for row in next_row..3 {
            let mag = a[row][col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag == 0.0 {
            continue; // free variable
        }
        if pivot_row != next_row {
            a.swap(next_row, pivot_row);
            rhs.swap(next_row, pivot_row);
        }
        for row in (next_row + 1)..3 {
            let factor = a[row][col] / a[next_row][col];
            for k in col..3 {
                let sub = factor * a[next_row][k];
                a[row][k] -= sub;
            }
            let sub = factor * rhs[next_row];
            rhs[row] -= sub;
        }
        pivots[col] = Some(next_row);
        next_row += 1;
    }
    if next_row == 0 {
        return None;
    }

    let mut x = [C64::new(0.0, 0.0); 3];
    for col in (0..3).rev() {
        let Some(row) = pivots[col] else {
            continue; // free variable stays zero
        };
        let mut sum = rhs[row];
        for k in (col + 1)..3 {
            sum -= a[row][k] * x[k];
        }
        x[col] = sum / a[row][col];
    }
    Some(x)
}

/// Frobenius norm of a 3×3 complex matrix.
pub(crate) fn frobenius3(m: &Mat3) -> f64 {
    m.iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}
