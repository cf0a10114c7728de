//! Classical fixed-step fourth-order Runge-Kutta for scalar ODEs
//! `y' = f(t, y)` whose right-hand side may fail.

/// One RK4 step from `(t, y)`. Returns `(y_next, k1)` where `k1 = f(t, y)`.
pub fn rk4_step<E>(
    f: &mut impl FnMut(f64, f64) -> Result<f64, E>,
    t: f64,
    y: f64,
    h: f64,
) -> Result<(f64, f64), E> {
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, y + 0.5 * h * k1)?;
    let k3 = f(t + 0.5 * h, y + 0.5 * h * k2)?;
    let k4 = f(t + h, y + h * k3)?;
    Ok((y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), k1))
}

/// Node values of a fixed-step integration, with the slope at each node for
/// cubic Hermite dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub h: f64,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

impl Trajectory {
    pub fn node_time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    pub fn t_end(&self) -> f64 {
        self.node_time(self.y.len() - 1)
    }

    /// Cubic Hermite interpolation between nodes; exact at nodes.
    pub fn at(&self, t: f64) -> f64 {
        let u = (t - self.t0) / self.h;
        let last = self.y.len() - 1;
        let k = (u.floor().max(0.0) as usize).min(last.saturating_sub(1));
        let s = u - k as f64;
        if s.abs() <= 1e-9 {
            return self.y[k];
        }
        if (s - 1.0).abs() <= 1e-9 {
            return self.y[k + 1];
        }
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (m0, m1) = (self.dy[k] * self.h, self.dy[k + 1] * self.h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1
    }
}

/// Integrates from `(t0, y0)` with `steps` RK4 steps of size `h`. On failure
/// returns the error together with the nodes completed so far.
pub fn integrate<E>(
    mut f: impl FnMut(f64, f64) -> Result<f64, E>,
    t0: f64,
    y0: f64,
    h: f64,
    steps: usize,
) -> Result<Trajectory, (E, Trajectory)> {
    let mut traj = Trajectory {
        t0,
        h,
        y: Vec::with_capacity(steps + 1),
        dy: Vec::with_capacity(steps + 1),
    };
    let mut y = y0;
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        match rk4_step(&mut f, t, y, h) {
            Ok((next, k1)) => {
                traj.y.push(y);
                traj.dy.push(k1);
                y = next;
            }
            Err(e) => {
                traj.y.push(y);
                return Err((e, traj));
            }
        }
    }
    let t_last = t0 + steps as f64 * h;
    match f(t_last, y) {
        Ok(d) => {
            traj.y.push(y);
            traj.dy.push(d);
            Ok(traj)
        }
        Err(e) => {
            traj.y.push(y);
            Err((e, traj))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn decay(_t: f64, y: f64) -> Result<f64, Infallible> {
        Ok(-y)
    }

    #[test]
    fn linear_solution_is_exact() {
        let traj = integrate(|_, _| Ok::<_, Infallible>(3.0), 0.0, 1.0, 0.1, 10).unwrap();
        for (k, y) in traj.y.iter().enumerate() {
            assert!((y - (1.0 + 0.3 * k as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |h: f64| {
            let n = (1.0 / h).round() as usize;
            let traj = integrate(decay, 0.0, 1.0, h, n).unwrap();
            (traj.y[n] - (-1.0f64).exp()).abs()
        };
        let order = (err(0.1) / err(0.05)).log2();
        assert!(order > 3.9 && order < 4.1, "order {order}");
    }

    #[test]
    fn hermite_dense_output() {
        let traj = integrate(decay, 0.0, 1.0, 0.01, 100).unwrap();
        for t in [0.005, 0.333, 0.8712] {
            assert!((traj.at(t) - (-t).exp()).abs() < 1e-9);
        }
        assert_eq!(traj.at(0.5), traj.y[50]);
    }

    #[test]
    fn failure_returns_partial_nodes() {
        let res = integrate(
            |t, _| if t > 0.42 { Err("boom") } else { Ok(1.0) },
            0.0,
            0.0,
            0.1,
            10,
        );
        let (e, partial) = res.unwrap_err();
        assert_eq!(e, "boom");
        assert_eq!(partial.y.len(), 5);
    }
}
