//! Point location from distances to four non-coplanar reference points.
//!
//! Subtracting the sphere equations `|x_j - a|^2 = v_j^2` pairwise gives the
//! linear system
//!
//! ```text
//! 2 X0 a = X1 - [v1^2 - v2^2, v2^2 - v3^2, v3^2 - v4^2]^T
//! ```
//!
//! with `X0` the rows `x_j - x_{j+1}` and `X1` the differences `|x_j|^2 -
//! |x_{j+1}|^2`. It is solved by an LU factorisation with partial pivoting.

use crate::error::InverseError;
use crate::geometry::Vec3;

/// Relative determinant threshold below which receivers count as coplanar.
pub const COPLANAR_REL_TOL: f64 = 1e-12;

fn difference_matrix(p: &[Vec3; 4]) -> [[f64; 3]; 3] {
    let row = |j: usize| (p[j] - p[j + 1]).to_array();
    [row(0), row(1), row(2)]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `(det X0, threshold)` with `threshold = 1e-12 * ||X0||_F^3`.
pub fn coplanarity(p: &[Vec3; 4]) -> (f64, f64) {
    let m = difference_matrix(p);
    let frob = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    (det3(&m), COPLANAR_REL_TOL * frob.powi(3))
}

#[derive(Debug, Clone, Copy)]
struct Lu3 {
    lu: [[f64; 3]; 3],
    perm: [usize; 3],
}

impl Lu3 {
    fn factor(mut a: [[f64; 3]; 3]) -> Self {
        let mut perm = [0, 1, 2];
        for col in 0..3 {
            let pivot = (col..3)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            perm.swap(col, pivot);
            for row in col + 1..3 {
                let f = a[row][col] / a[col][col];
                a[row][col] = f;
                let pivot_row = a[col];
                for (x, p) in a[row].iter_mut().zip(pivot_row).skip(col + 1) {
                    *x -= f * p;
                }
            }
        }
        Self { lu: a, perm }
    }

    fn solve(&self, b: [f64; 3]) -> [f64; 3] {
        let mut y = [b[self.perm[0]], b[self.perm[1]], b[self.perm[2]]];
        for i in 1..3 {
            for k in 0..i {
                y[i] -= self.lu[i][k] * y[k];
            }
        }
        for i in (0..3).rev() {
            for k in i + 1..3 {
                y[i] -= self.lu[i][k] * y[k];
            }
            y[i] /= self.lu[i][i];
        }
        y
    }
}

/// Pre-factored locator for a fixed set of four receivers.
#[derive(Debug, Clone, Copy)]
pub struct Trilaterator {
    positions: [Vec3; 4],
    lu: Lu3,
    squared_norm_diff: [f64; 3],
}

impl Trilaterator {
    pub fn new(positions: [Vec3; 4]) -> Result<Self, InverseError> {
        let (det, threshold) = coplanarity(&positions);
        if !(det.abs() > threshold) {
            return Err(InverseError::CoplanarReceivers { det, threshold });
        }
        let sq = positions.map(Vec3::norm_squared);
        Ok(Self {
            positions,
            lu: Lu3::factor(difference_matrix(&positions)),
            squared_norm_diff: [sq[0] - sq[1], sq[1] - sq[2], sq[2] - sq[3]],
        })
    }

    pub fn positions(&self) -> &[Vec3; 4] {
        &self.positions
    }

    /// Source position from the four receiver distances.
    pub fn locate(&self, v: [f64; 4]) -> Vec3 {
        // v_j^2 - v_k^2 as a product to avoid cancellation between large squares
        let b = [0, 1, 2].map(|j| {
            let dv2 = (v[j] - v[j + 1]) * (v[j] + v[j + 1]);
            0.5 * (self.squared_norm_diff[j] - dv2)
        });
        Vec3::from(self.lu.solve(b))
    }
}

/// One-shot trilateration; see [`Trilaterator`].
pub fn trilaterate(positions: &[Vec3; 4], v: [f64; 4]) -> Result<Vec3, InverseError> {
    Ok(Trilaterator::new(*positions)?.locate(v))
}
