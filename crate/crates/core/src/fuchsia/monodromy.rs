//! Transport of fundamental matrices along polylines and loop monodromies.

use super::matrix::Matrix2C;
use super::ode::{integrate, OdeOptions};
use super::system::SystemSpec;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Minimum distance from a singular point, relative to |t|.
pub const SAFETY_FRACTION: f64 = 1e-3;

fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (a - p).norm();
    }
    let u = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * u - p).norm()
}

/// Transports Φ along a polyline: Φ(end) for Φ(path[0]) = `phi`.
pub fn integrate_path(
    sys: &SystemSpec,
    path: &[C64],
    phi: Matrix2C,
    opts: &OdeOptions,
) -> Result<Matrix2C> {
    let safety = SAFETY_FRACTION * sys.t.norm().max(1e-300);
    let mut phi = phi;
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        for p in [C64::new(0.0, 0.0), sys.t] {
            let d = segment_distance(a, b, p);
            if d < safety {
                return Err(Error::PathTooClose { distance: d });
            }
        }
        let dz = b - a;
        let (y, _) = integrate(
            |s, y: &[C64; 4]| {
                let m = sys.coefficient(a + dz * s) * Matrix2C::from_array(y);
                (m * dz).to_array()
            },
            0.0,
            1.0,
            phi.to_array(),
            opts,
        )?;
        phi = Matrix2C::from_array(&y);
    }
    Ok(phi)
}

/// Counterclockwise circle as a closed polyline starting at angle `start`.
pub fn circle(center: C64, radius: f64, start: f64, segments: usize) -> Vec<C64> {
    (0..=segments)
        .map(|k| center + C64::from_polar(radius, start + 2.0 * PI * k as f64 / segments as f64))
        .collect()
}

/// Loop radius and basepoint shared by both loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopGeometry {
    pub radius: f64,
    pub basepoint: C64,
    pub segments: usize,
}

impl LoopGeometry {
    /// Radius min(|t|/3, 1/3), basepoint on the positive real axis.
    pub fn for_t(t: C64) -> Self {
        let radius = (t.norm() / 3.0).min(1.0 / 3.0);
        Self {
            radius,
            basepoint: C64::new(radius, 0.0),
            segments: 32,
        }
    }

    /// Closed loop around z = 0 starting and ending at the basepoint.
    pub fn loop_zero(&self) -> Vec<C64> {
        circle(
            C64::new(0.0, 0.0),
            self.radius,
            self.basepoint.arg(),
            self.segments,
        )
    }

    /// Closed loop around z = t through the upper half plane.
    pub fn loop_t(&self, t: C64) -> Vec<C64> {
        let r = self.radius;
        let lift = C64::new(0.0, 1.5 * r);
        let up = [
            self.basepoint,
            self.basepoint + lift,
            t + lift,
            t + C64::new(0.0, r),
        ];
        let mut path = up.to_vec();
        path.extend(circle(t, r, PI / 2.0, self.segments).into_iter().skip(1));
        path.extend(up.iter().rev().skip(1));
        path
    }
}

/// Loop monodromies at a common basepoint with Φ(basepoint) = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyPair {
    /// Raw monodromies of the system as given.
    pub m0_raw: Matrix2C,
    pub mt_raw: Matrix2C,
    /// Determinant-normalized: raw times e^{−iπ Tr A_i}, unit determinant.
    pub m0: Matrix2C,
    pub mt: Matrix2C,
    /// (M_t M₀)^{−1}.
    pub minf: Matrix2C,
}

impl MonodromyPair {
    pub fn trace0(&self) -> C64 {
        self.m0.trace()
    }

    pub fn trace_t(&self) -> C64 {
        self.mt.trace()
    }

    /// Tr(M_t M₀) = 2cos πσ.
    pub fn trace_composite(&self) -> C64 {
        (self.mt * self.m0).trace()
    }

    /// σ with Re σ ∈ [0, 1] from the composite trace.
    pub fn sigma(&self) -> C64 {
        (self.trace_composite() / 2.0).acos() / PI
    }
}

pub fn monodromy_pair(sys: &SystemSpec, opts: &OdeOptions) -> Result<MonodromyPair> {
    monodromy_pair_with(sys, &LoopGeometry::for_t(sys.t), opts)
}

pub fn monodromy_pair_with(
    sys: &SystemSpec,
    geom: &LoopGeometry,
    opts: &OdeOptions,
) -> Result<MonodromyPair> {
    let id = Matrix2C::identity();
    let m0_raw = integrate_path(sys, &geom.loop_zero(), id, opts)?;
    let mt_raw = integrate_path(sys, &geom.loop_t(sys.t), id, opts)?;
    let i = C64::new(0.0, 1.0);
    let m0 = m0_raw * (-i * PI * sys.a0.trace()).exp();
    let mt = mt_raw * (-i * PI * sys.at.trace()).exp();
    let minf = (mt * m0)
        .inverse()
        .ok_or_else(|| Error::Degenerate("singular composite monodromy".into()))?;
    Ok(MonodromyPair {
        m0_raw,
        mt_raw,
        m0,
        mt,
        minf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsia::system::system_from_rabi;
    use crate::rabi::RabiParams;

    fn opts() -> OdeOptions {
        OdeOptions::default()
    }

    #[test]
    fn contractible_loop_is_trivial() {
        let sys = system_from_rabi(&RabiParams::new(0.2, 0.4, 0.3));
        let path = circle(C64::new(0.3, 0.3), 0.1, 0.0, 16);
        let m = integrate_path(&sys, &path, Matrix2C::identity(), &opts()).unwrap();
        assert!((m - Matrix2C::identity()).max_abs() < 1e-9);
    }

    #[test]
    fn decoupled_zero_loop() {
        let sys = system_from_rabi(&RabiParams::new(0.3, 0.0, 0.17));
        let th = sys.a0.trace();
        let pair = monodromy_pair(&sys, &opts()).unwrap();
        let (a, b) = pair.m0_raw.eigenvalues();
        let want = (C64::new(0.0, 2.0 * PI) * th).exp();
        let ok = ((a - want).norm() < 1e-8 && (b - 1.0).norm() < 1e-8)
            || ((b - want).norm() < 1e-8 && (a - 1.0).norm() < 1e-8);
        assert!(ok, "{a} {b} {want}");
    }

    #[test]
    fn determinant_law() {
        let sys = system_from_rabi(&RabiParams::new(0.25, 0.6, 0.37));
        let pair = monodromy_pair(&sys, &opts()).unwrap();
        let want = (C64::new(0.0, 2.0 * PI) * sys.a0.trace()).exp();
        assert!((pair.m0_raw.det() - want).norm() < 1e-8);
        assert!((pair.m0.det() - 1.0).norm() < 1e-8);
        assert!((pair.mt.det() - 1.0).norm() < 1e-8);
        let th = sys.a0.trace();
        assert!((pair.trace0() - (th * PI).cos() * 2.0).norm() < 1e-6);
        assert!((pair.trace_t() - (th * PI).cos() * 2.0).norm() < 1e-6);
        let prod = pair.minf * pair.mt * pair.m0;
        assert!((prod - Matrix2C::identity()).max_abs() < 1e-12);
    }

    #[test]
    fn concatenated_loop() {
        let sys = system_from_rabi(&RabiParams::new(0.2, 0.5, 0.1));
        let g = LoopGeometry::for_t(sys.t);
        let mut path = g.loop_zero();
        path.extend(g.loop_t(sys.t).into_iter().skip(1));
        let m = integrate_path(&sys, &path, Matrix2C::identity(), &opts()).unwrap();
        let pair = monodromy_pair(&sys, &opts()).unwrap();
        assert!((m - pair.mt_raw * pair.m0_raw).max_abs() < 1e-6);
    }

    #[test]
    fn rejects_path_through_pole() {
        let sys = system_from_rabi(&RabiParams::new(0.2, 0.5, 0.1));
        let path = [C64::new(-0.1, 0.0), C64::new(0.1, 0.0)];
        assert!(matches!(
            integrate_path(&sys, &path, Matrix2C::identity(), &opts()),
            Err(Error::PathTooClose { .. })
        ));
    }
}
