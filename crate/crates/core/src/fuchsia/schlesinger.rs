//! Isomonodromic flow
//! dA₀/dt = [A_t, A₀]/t,  dA_t/dt = −[A_t, A₀]/t − ½[A_t, σ₃].

use super::matrix::Matrix2C;
use super::ode::{integrate, OdeOptions};
use super::system::SystemSpec;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

fn rhs(a0: &Matrix2C, at: &Matrix2C, t: C64) -> (Matrix2C, Matrix2C) {
    let c = at.commutator(a0).scale(1.0 / t);
    let d0 = c;
    let dt = -c - at.commutator(&Matrix2C::sigma3()) * 0.5;
    (d0, dt)
}

/// Flows `sys` along the polyline `path` in t. `path[0]` must equal `sys.t`.
pub fn schlesinger_flow(sys: &SystemSpec, path: &[C64], opts: &OdeOptions) -> Result<SystemSpec> {
    if let Some(first) = path.first() {
        if (*first - sys.t).norm() > 1e-14 * sys.t.norm().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "flow path starts at {first}, system sits at {}",
                sys.t
            )));
        }
    }
    let mut a0 = sys.a0;
    let mut at = sys.at;
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return Err(Error::ZeroT);
        }
        let dt = b - a;
        let mut y0 = [C64::new(0.0, 0.0); 8];
        y0[..4].copy_from_slice(&a0.to_array());
        y0[4..].copy_from_slice(&at.to_array());
        let (y, _) = integrate(
            |s, y: &[C64; 8]| {
                let t = a + dt * s;
                let (d0, d1) = rhs(
                    &Matrix2C::from_array(&y[..4]),
                    &Matrix2C::from_array(&y[4..]),
                    t,
                );
                let mut out = [C64::new(0.0, 0.0); 8];
                out[..4].copy_from_slice(&(d0 * dt).to_array());
                out[4..].copy_from_slice(&(d1 * dt).to_array());
                out
            },
            0.0,
            1.0,
            y0,
            opts,
        )?;
        a0 = Matrix2C::from_array(&y[..4]);
        at = Matrix2C::from_array(&y[4..]);
    }
    Ok(SystemSpec {
        a0,
        at,
        t: *path.last().unwrap_or(&sys.t),
    })
}

/// Flow along the straight segment from `sys.t` to `target`.
pub fn flow_to(sys: &SystemSpec, target: C64, opts: &OdeOptions) -> Result<SystemSpec> {
    schlesinger_flow(sys, &[sys.t, target], opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsia::system::system_from_rabi;
    use crate::rabi::RabiParams;

    #[test]
    fn conserved_quantities() {
        let sys = system_from_rabi(&RabiParams::new(0.3, 0.5, 0.21));
        let opts = OdeOptions::default();
        let end = flow_to(&sys, C64::new(-0.05, 0.0), &opts).unwrap();
        assert!((end.a0.trace() - sys.a0.trace()).norm() < 1e-10);
        assert!((end.at.trace() - sys.at.trace()).norm() < 1e-10);
        assert!((end.a0.det() - sys.a0.det()).norm() < 1e-8);
        assert!((end.at.det() - sys.at.det()).norm() < 1e-8);
        // diagonal of A₀ + A_t is fixed by the flow
        let s0 = sys.a0 + sys.at;
        let s1 = end.a0 + end.at;
        assert!((s0.a[0][0] - s1.a[0][0]).norm() < 1e-10);
        assert!((s0.a[1][1] - s1.a[1][1]).norm() < 1e-10);
    }

    #[test]
    fn round_trip() {
        let sys = system_from_rabi(&RabiParams::new(0.2, 0.4, -0.1));
        let opts = OdeOptions::default();
        let mid = flow_to(&sys, C64::new(-0.3, 0.05), &opts).unwrap();
        let back = flow_to(&mid, sys.t, &opts).unwrap();
        assert!((back.a0 - sys.a0).max_abs() < 1e-9);
        assert!((back.at - sys.at).max_abs() < 1e-9);
    }

    #[test]
    fn wrong_start_rejected() {
        let sys = system_from_rabi(&RabiParams::new(0.2, 0.4, -0.1));
        let r = schlesinger_flow(
            &sys,
            &[C64::new(-0.5, 0.0), C64::new(-0.4, 0.0)],
            &OdeOptions::default(),
        );
        assert!(r.is_err());
    }
}
