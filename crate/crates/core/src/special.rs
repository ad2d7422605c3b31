//! Complex log-gamma and reciprocal gamma.
//!
//! Lanczos approximation (g = 671/128, 14 terms) on the right half plane and
//! the reflection formula elsewhere.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Relative distance below which an argument counts as a pole.
pub const POLE_TOL: f64 = 1e-13;

/// Returns the non-positive integer `z` sits on, if any.
pub fn pole_of(z: C64) -> Option<i64> {
    let r = z.re.round();
    if r <= 0.0 && (z - r).norm() <= POLE_TOL * r.abs().max(1.0) {
        Some(r as i64)
    } else {
        None
    }
}

fn lanczos(z: C64) -> C64 {
    let tmp = z + LANCZOS_G;
    let mut ser = C64::new(0.999_999_999_999_997_1, 0.0);
    let mut y = z;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    (z + 0.5) * tmp.ln() - tmp + (ser * SQRT_2PI).ln() - z.ln()
}

/// log Γ(z).
///
/// For Re z ≥ 1/2 this is the branch continuous from the positive real axis.
/// Elsewhere the imaginary part is fixed only modulo 2π.
pub fn log_gamma(z: C64) -> Result<C64> {
    if let Some(p) = pole_of(z) {
        return Err(Error::GammaPole(p as f64));
    }
    if z.re >= 0.5 {
        Ok(lanczos(z))
    } else {
        let s = (z * PI).sin();
        Ok(C64::new(PI.ln(), 0.0) - s.ln() - lanczos(1.0 - z))
    }
}

pub fn gamma(z: C64) -> Result<C64> {
    Ok(log_gamma(z)?.exp())
}

/// 1/Γ(z), exactly zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => C64::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Stirling series after shifting the argument to Re z ≥ 20.
    fn stirling(z: C64) -> C64 {
        let bern = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
        ];
        let mut w = z;
        let mut shift = C64::new(0.0, 0.0);
        while w.re < 20.0 {
            shift += w.ln();
            w += 1.0;
        }
        let mut s = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
        let mut wp = w;
        for (k, b) in bern.iter().enumerate() {
            let k = (k + 1) as f64;
            s += b / (2.0 * k * (2.0 * k - 1.0) * wp);
            wp *= w * w;
        }
        s - shift
    }

    #[test]
    fn known_values() {
        assert!(log_gamma(C64::new(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(C64::new(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
        let g5 = gamma(C64::new(5.0, 0.0)).unwrap();
        assert!((g5.re - 24.0).abs() < 1e-12);
    }

    #[test]
    fn matches_stirling() {
        let z = C64::new(3.7, 1.2);
        let d = log_gamma(z).unwrap() - stirling(z);
        assert!(d.norm() < 1e-12, "{d}");
        for &(re, im) in &[(0.6, -3.0), (12.5, 7.0), (40.0, -20.0), (1.0, 30.0)] {
            let z = C64::new(re, im);
            let a = log_gamma(z).unwrap();
            let b = stirling(z);
            assert!(
                (a - b).norm() < 1e-12 * b.norm().max(1.0),
                "{z}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn reflection_region() {
        for &(re, im) in &[(-2.3, 0.4), (-0.5, 0.0), (0.2, -1.1), (-7.9, 2.0)] {
            let z = C64::new(re, im);
            let a = gamma(z).unwrap();
            // Γ(z) = Γ(z + 1)/z
            let b = gamma(z + 1.0).unwrap() / z;
            assert!((a - b).norm() < 1e-12 * b.norm(), "{z}");
        }
    }

    #[test]
    fn poles() {
        assert_eq!(log_gamma(C64::new(0.0, 0.0)), Err(Error::GammaPole(0.0)));
        assert_eq!(log_gamma(C64::new(-3.0, 0.0)), Err(Error::GammaPole(-3.0)));
        assert_eq!(rgamma(C64::new(-2.0, 0.0)), C64::new(0.0, 0.0));
        assert!(log_gamma(C64::new(-3.0, 1e-6)).is_ok());
    }
}
