//! Ratios D_n = C(θ, σ+n)/C(θ, σ) of the Barnes-G structure constants
//!
//! C(θ, σ) = Π_{ε=±} G(1+θ∞+εσ) G(1+θ_t+θ₀+εσ) G(1+θ_t−θ₀+εσ) / G(1+2εσ),
//!
//! reduced to Gamma products through G(1+z) = Γ(z) G(z).
//!
//! Some reciprocal Gamma factors can sit exactly on a pole. The ratio is then
//! zero, not an error: the corresponding shifted term drops out of the sum.

use crate::blocks::ThetaTriple;
use crate::error::{Error, Result};
use crate::special::{log_gamma, pole_of};
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;

/// A factor accumulated in log space, or an exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
enum LogValue {
    Zero,
    Log(C64),
}

impl LogValue {
    fn mul(self, other: LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Log(a), LogValue::Log(b)) => LogValue::Log(a + b),
            _ => LogValue::Zero,
        }
    }

    fn exp(self) -> C64 {
        match self {
            LogValue::Zero => C64::new(0.0, 0.0),
            LogValue::Log(l) => l.exp(),
        }
    }
}

fn shift_args(theta: &ThetaTriple) -> [C64; 3] {
    [
        theta.thetainf,
        theta.thetat + theta.theta0,
        theta.thetat - theta.theta0,
    ]
}

/// log Γ(z) in the numerator; a pole here is a resonance.
fn num(z: C64) -> Result<LogValue> {
    log_gamma(z)
        .map(LogValue::Log)
        .map_err(|_| Error::Resonant(format!("gamma pole at {z} in a structure-constant ratio")))
}

/// −log Γ(z) in the denominator; a pole gives an exact zero.
fn den(z: C64) -> LogValue {
    if pole_of(z).is_some() {
        LogValue::Zero
    } else {
        match log_gamma(z) {
            Ok(l) => LogValue::Log(-l),
            Err(_) => LogValue::Zero,
        }
    }
}

/// log of D_1(σ) = C(σ+1)/C(σ).
fn log_unit_ratio(theta: &ThetaTriple, sigma: C64) -> Result<LogValue> {
    let mut acc = LogValue::Log(C64::new(0.0, 0.0));
    for b in shift_args(theta) {
        acc = acc.mul(num(1.0 + b + sigma)?).mul(den(b - sigma));
    }
    acc = acc
        .mul(num(-2.0 * sigma)?)
        .mul(num(-1.0 - 2.0 * sigma)?)
        .mul(den(1.0 + 2.0 * sigma))
        .mul(den(2.0 + 2.0 * sigma));
    Ok(acc)
}

fn log_ratio(theta: &ThetaTriple, sigma: C64, n: i32) -> Result<LogValue> {
    let mut acc = LogValue::Log(C64::new(0.0, 0.0));
    if n >= 0 {
        for k in 0..n {
            acc = acc.mul(log_unit_ratio(theta, sigma + k as f64)?);
        }
    } else {
        for k in 1..=(-n) {
            match log_unit_ratio(theta, sigma - k as f64)? {
                LogValue::Zero => {
                    return Err(Error::Resonant(format!(
                        "structure constant vanishes at sigma = {}",
                        sigma - (k - 1) as f64
                    )))
                }
                LogValue::Log(l) => acc = acc.mul(LogValue::Log(-l)),
            }
        }
    }
    Ok(acc)
}

/// D_n(σ) = C(θ, σ+n)/C(θ, σ), accumulated in log space.
pub fn constant_ratio(theta: &ThetaTriple, sigma: C64, n: i32) -> Result<C64> {
    Ok(log_ratio(theta, sigma, n)?.exp())
}

/// Same ratio as a direct product of Gamma values, without log-space
/// accumulation. Overflows for large shifts.
pub fn constant_ratio_direct(theta: &ThetaTriple, sigma: C64, n: i32) -> Result<C64> {
    let g = |z: C64| -> Result<C64> { Ok(log_gamma(z)?.exp()) };
    let unit = |s: C64| -> Result<C64> {
        let mut acc = C64::new(1.0, 0.0);
        for b in shift_args(theta) {
            acc *= g(1.0 + b + s)?;
            if pole_of(b - s).is_none() {
                acc /= g(b - s)?;
            } else {
                return Ok(C64::new(0.0, 0.0));
            }
        }
        acc *= g(-2.0 * s)? * g(-1.0 - 2.0 * s)?;
        for z in [1.0 + 2.0 * s, 2.0 + 2.0 * s] {
            if pole_of(z).is_some() {
                return Ok(C64::new(0.0, 0.0));
            }
            acc /= g(z)?;
        }
        Ok(acc)
    };
    let mut acc = C64::new(1.0, 0.0);
    if n >= 0 {
        for k in 0..n {
            acc *= unit(sigma + k as f64)?;
        }
    } else {
        for k in 1..=(-n) {
            let u = unit(sigma - k as f64)?;
            if u == C64::new(0.0, 0.0) {
                return Err(Error::Resonant("structure constant vanishes".into()));
            }
            acc /= u;
        }
    }
    Ok(acc)
}

/// D_n for −N ≤ n ≤ N.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantRatioTable {
    pub n_window: usize,
    pub values: BTreeMap<i32, C64>,
}

impl ConstantRatioTable {
    pub fn new(theta: &ThetaTriple, sigma: C64, n_window: usize) -> Result<Self> {
        let w = n_window as i32;
        let mut values = BTreeMap::new();
        values.insert(0, C64::new(1.0, 0.0));
        let mut up = LogValue::Log(C64::new(0.0, 0.0));
        for n in 1..=w {
            up = up.mul(log_unit_ratio(theta, sigma + (n - 1) as f64)?);
            values.insert(n, up.exp());
        }
        for n in 1..=w {
            values.insert(-n, constant_ratio(theta, sigma, -n)?);
        }
        Ok(Self { n_window, values })
    }

    pub fn get(&self, n: i32) -> Option<C64> {
        self.values.get(&n).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn zero_shift_is_one() {
        let th = ThetaTriple::real(0.3, 0.5, 0.1);
        assert_eq!(constant_ratio(&th, C64::new(0.2, 0.3), 0).unwrap(), c(1.0));
    }

    #[test]
    fn cocycle_two() {
        let th = ThetaTriple::real(0.8, 0.8, 0.0);
        let s = c(2.2);
        let d2 = constant_ratio(&th, s, 2).unwrap();
        let d11 = constant_ratio(&th, s, 1).unwrap() * constant_ratio(&th, s + 1.0, 1).unwrap();
        assert!((d2 - d11).norm() < 1e-10 * d2.norm());
    }

    #[test]
    fn inverse_shift() {
        let th = ThetaTriple::new(C64::new(0.21, 0.1), c(0.4), c(-0.3));
        let s = C64::new(0.37, 0.2);
        let a = constant_ratio(&th, s, -2).unwrap();
        let b = constant_ratio(&th, s - 2.0, 2).unwrap();
        assert!((a * b - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn exact_zero_on_reciprocal_pole() {
        // θ_t + θ₀ − σ = 0 puts 1/Γ(0) in D_1
        let th = ThetaTriple::real(0.35, 0.35, 0.0);
        let d1 = constant_ratio(&th, c(0.7), 1).unwrap();
        assert_eq!(d1, c(0.0));
        let table = ConstantRatioTable::new(&th, c(0.7), 3).unwrap();
        assert_eq!(table.get(3), Some(c(0.0)));
        assert!(table.get(-3).unwrap().norm() > 0.0);
    }

    #[test]
    fn vanishing_base_is_resonant() {
        let th = ThetaTriple::real(0.35, 0.35, 0.0);
        assert!(matches!(
            constant_ratio(&th, c(1.7), -1),
            Err(Error::Resonant(_))
        ));
    }

    #[test]
    fn half_integer_sigma_is_resonant() {
        let th = ThetaTriple::real(0.3, 0.2, 0.0);
        assert!(constant_ratio(&th, c(0.5), 1).is_err());
    }
}
