//! Frobenius solutions at z = 0 and z = t and the connection coefficient
//! between them.

use super::matrix::Matrix2C;
use super::monodromy::integrate_path;
use super::ode::OdeOptions;
use super::system::{system_from_rabi, SystemSpec};
use crate::error::{Error, Result};
use crate::rabi::RabiParams;
use num_complex::Complex64 as C64;

const TAIL_TOL: f64 = 1e-14;
const MAX_TERMS: usize = 2000;

/// Distance to the nearest integer below which a Frobenius exponent counts as
/// resonant.
pub const RESONANCE_TOL: f64 = 1e-8;

/// (z−c)^ρ Σ_k y_k (z−c)^k solving Φ' = (σ₃/2 + A_c/(z−c) + A_o/(z−o)) Φ.
#[derive(Debug, Clone)]
pub struct FrobeniusSeries {
    pub center: C64,
    pub exponent: C64,
    pub coeffs: Vec<[C64; 2]>,
}

impl FrobeniusSeries {
    /// Builds terms until they fall below `TAIL_TOL` at `radius`.
    pub fn new(
        a_center: &Matrix2C,
        a_other: &Matrix2C,
        center: C64,
        other: C64,
        exponent: C64,
        leading: [C64; 2],
        radius: f64,
    ) -> Result<Self> {
        let d = other - center;
        let half_s3 = Matrix2C::sigma3() * 0.5;
        let mut coeffs = vec![leading];
        // running Σ_{j<k} d^{−(k−j)} y_j
        let mut acc = [C64::new(0.0, 0.0); 2];
        let scale = leading[0].norm().max(leading[1].norm());
        let mut small = 0;
        for k in 1..MAX_TERMS {
            let prev = coeffs[k - 1];
            acc = [(acc[0] + prev[0]) / d, (acc[1] + prev[1]) / d];
            let a = half_s3.apply(prev);
            let b = a_other.apply(acc);
            let rhs = [a[0] - b[0], a[1] - b[1]];
            let lhs = Matrix2C::identity() * (exponent + k as f64) - *a_center;
            if lhs.det().norm() < RESONANCE_TOL {
                return Err(Error::Resonant(format!(
                    "Frobenius exponents at {center} differ by the integer {k}"
                )));
            }
            let y = lhs
                .solve(rhs)
                .ok_or_else(|| Error::Resonant("singular Frobenius recursion".into()))?;
            coeffs.push(y);
            let term = y[0].norm().max(y[1].norm()) * radius.powi(k as i32);
            if term < TAIL_TOL * scale {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        Ok(Self {
            center,
            exponent,
            coeffs,
        })
    }

    pub fn eval(&self, z: C64) -> [C64; 2] {
        let w = z - self.center;
        let mut s = [C64::new(0.0, 0.0); 2];
        for y in self.coeffs.iter().rev() {
            s = [s[0] * w + y[0], s[1] * w + y[1]];
        }
        let p = if self.exponent == C64::new(0.0, 0.0) {
            C64::new(1.0, 0.0)
        } else {
            (self.exponent * w.ln()).exp()
        };
        [s[0] * p, s[1] * p]
    }
}

/// v with (m − λ) v = 0, read off the first nonzero row of m − λ. No
/// rescaling, so v stays analytic in the entries of m.
fn eigenvector(m: &Matrix2C, lambda: C64) -> [C64; 2] {
    let a = *m - Matrix2C::identity() * lambda;
    let tiny = 1e-13 * (1.0 + m.max_abs());
    let row = [a.a[0], a.a[1]]
        .into_iter()
        .find(|r| r[0].norm() + r[1].norm() > tiny);
    match row {
        Some(r) => [r[1], -r[0]],
        None => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    }
}

fn near_integer(x: C64) -> bool {
    (x - x.re.round()).norm() < RESONANCE_TOL
}

/// Connection data for a system whose residues each have a zero eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection {
    /// Coefficient on the solution analytic at t.
    pub analytic: C64,
    /// Coefficient on the branching solution (z−t)^{θ_t}·(…).
    pub branch: C64,
}

/// Continues the solution analytic at 0 (exponent 0) to z = t and splits it
/// into the local solutions there.
pub fn connection(sys: &SystemSpec, opts: &OdeOptions) -> Result<Connection> {
    let t = sys.t;
    let th0 = sys.a0.trace();
    let tht = sys.at.trace();
    if sys.a0.det().norm() > 1e-12 * (1.0 + th0.norm())
        || sys.at.det().norm() > 1e-12 * (1.0 + tht.norm())
    {
        return Err(Error::InvalidParameter(
            "residues must have a zero eigenvalue".into(),
        ));
    }
    if near_integer(th0) || near_integer(tht) {
        return Err(Error::Resonant(format!(
            "integer local exponents ({th0}, {tht})"
        )));
    }
    let r = t.norm() / 4.0;
    let za = t / 4.0;
    let zb = t * 0.75;
    let zero = C64::new(0.0, 0.0);

    let v0 = eigenvector(&sys.a0, zero);
    let f0 = FrobeniusSeries::new(&sys.a0, &sys.at, zero, t, zero, v0, r)?;
    let psi = f0.eval(za);
    let col = Matrix2C::from_columns(psi, [zero, zero]);
    let moved = integrate_path(sys, &[za, zb], col, opts)?.column(0);

    let u = eigenvector(&sys.at, zero);
    let w = eigenvector(&sys.at, tht);
    let fu = FrobeniusSeries::new(&sys.at, &sys.a0, t, zero, zero, u, r)?;
    let fw = FrobeniusSeries::new(&sys.at, &sys.a0, t, zero, tht, w, r)?;
    let basis = Matrix2C::from_columns(fu.eval(zb), fw.eval(zb));
    let c = basis
        .solve(moved)
        .ok_or_else(|| Error::Degenerate("local solutions at t are dependent".into()))?;
    Ok(Connection {
        analytic: c[0],
        branch: c[1],
    })
}

/// Branch coefficient of the Rabi solution analytic at z = 0. It vanishes
/// exactly when E is an eigenvalue.
pub fn connection_offdiag(p: &RabiParams, opts: &OdeOptions) -> Result<C64> {
    if p.delta == 0.0 {
        return Err(Error::Degenerate("Δ = 0 decouples the system".into()));
    }
    Ok(connection(&system_from_rabi(p), opts)?.branch)
}
