//! Adaptive Dormand-Prince 8(5,3) for complex-valued states on a real
//! parameter interval. Step control follows Hairer's DOP853 with the
//! combined 5th/3rd order error estimate.

use super::tableau::{A, B, C, E3, E5, STAGES};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 200_000,
        }
    }
}

/// Accepted/rejected step counts of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn rms<const D: usize>(v: &[C64; D], scale: &[f64; D]) -> f64 {
    (v.iter()
        .zip(scale)
        .map(|(x, s)| (x.norm() / s).powi(2))
        .sum::<f64>()
        / D as f64)
        .sqrt()
}

fn axpy<const D: usize>(y: &[C64; D], h: f64, k: &[C64; D]) -> [C64; D] {
    let mut out = *y;
    for i in 0..D {
        out[i] += k[i] * h;
    }
    out
}

/// Integrates y' = f(s, y) from `s0` to `s1`.
pub fn integrate<const D: usize, F>(
    mut f: F,
    s0: f64,
    s1: f64,
    y0: [C64; D],
    opts: &OdeOptions,
) -> Result<([C64; D], OdeStats)>
where
    F: FnMut(f64, &[C64; D]) -> [C64; D],
{
    let mut stats = OdeStats::default();
    if s1 == s0 {
        return Ok((y0, stats));
    }
    let dir = (s1 - s0).signum();
    let mut s = s0;
    let mut y = y0;
    let mut f0 = f(s, &y);
    stats.evaluations += 1;

    let scale0: [f64; D] = std::array::from_fn(|i| opts.atol + y[i].norm() * opts.rtol);
    let d0 = rms(&y, &scale0);
    let d1 = rms(&f0, &scale0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min((s1 - s0).abs());
    let y1 = axpy(&y, dir * h0, &f0);
    let f1 = f(s + dir * h0, &y1);
    stats.evaluations += 1;
    let diff: [C64; D] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = rms(&diff, &scale0) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 8.0)
    };
    let mut h_abs = (100.0 * h0).min(h1).min((s1 - s0).abs());

    let mut k = [[C64::new(0.0, 0.0); D]; STAGES + 1];
    while dir * (s1 - s) > 0.0 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::TooManySteps(opts.max_steps));
        }
        let min_step = 10.0 * (next_toward(s, dir) - s).abs();
        let mut rejected = false;
        loop {
            if h_abs < min_step {
                return Err(Error::StepUnderflow { at: s });
            }
            let mut s_new = s + dir * h_abs;
            if dir * (s_new - s1) > 0.0 {
                s_new = s1;
            }
            let h = s_new - s;
            let habs = h.abs();

            k[0] = f0;
            for st in 1..STAGES {
                let mut yi = y;
                for (j, kj) in k.iter().enumerate().take(st) {
                    let a = A[st][j];
                    if a != 0.0 {
                        for i in 0..D {
                            yi[i] += kj[i] * (h * a);
                        }
                    }
                }
                k[st] = f(s + C[st] * h, &yi);
            }
            let mut y_new = y;
            for (j, kj) in k.iter().enumerate().take(STAGES) {
                for i in 0..D {
                    y_new[i] += kj[i] * (h * B[j]);
                }
            }
            let f_new = f(s_new, &y_new);
            k[STAGES] = f_new;
            stats.evaluations += STAGES;

            let scale: [f64; D] =
                std::array::from_fn(|i| opts.atol + y[i].norm().max(y_new[i].norm()) * opts.rtol);
            let mut e5 = 0.0;
            let mut e3 = 0.0;
            for i in 0..D {
                let mut a5 = C64::new(0.0, 0.0);
                let mut a3 = C64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate() {
                    a5 += kj[i] * E5[j];
                    a3 += kj[i] * E3[j];
                }
                e5 += (a5.norm() / scale[i]).powi(2);
                e3 += (a3.norm() / scale[i]).powi(2);
            }
            let err = if e5 == 0.0 && e3 == 0.0 {
                0.0
            } else {
                habs * e5 / ((e5 + 0.01 * e3) * D as f64).sqrt()
            };

            if err < 1.0 {
                let mut factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    MAX_FACTOR.min(SAFETY * err.powf(ERROR_EXPONENT))
                };
                if rejected {
                    factor = factor.min(1.0);
                }
                h_abs = habs * factor;
                s = s_new;
                y = y_new;
                f0 = f_new;
                stats.accepted += 1;
                break;
            }
            h_abs = habs * MIN_FACTOR.max(SAFETY * err.powf(ERROR_EXPONENT));
            rejected = true;
            stats.rejected += 1;
        }
    }
    Ok((y, stats))
}

fn next_toward(s: f64, dir: f64) -> f64 {
    let bits = s.to_bits();
    if s == 0.0 {
        return dir * f64::from_bits(1);
    }
    if (s > 0.0) == (dir > 0.0) {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let lam = C64::new(-0.5, 2.0);
        let (y, st) = integrate(
            |_, y: &[C64; 1]| [lam * y[0]],
            0.0,
            3.0,
            [C64::new(1.0, 0.0)],
            &OdeOptions::default(),
        )
        .unwrap();
        let want = (lam * 3.0).exp();
        assert!((y[0] - want).norm() < 1e-11, "{} vs {want}", y[0]);
        assert!(st.accepted > 0);
    }

    #[test]
    fn backwards_oscillator() {
        let (y, _) = integrate(
            |_, y: &[C64; 2]| [y[1], -y[0]],
            2.0,
            0.0,
            [C64::new(2f64.sin(), 0.0), C64::new(2f64.cos(), 0.0)],
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(y[0].norm() < 1e-12);
        assert!((y[1] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn blow_up_underflows() {
        let r = integrate(
            |s, _: &[C64; 1]| [C64::new(1.0 / (1.0 - s).powi(3), 0.0)],
            0.0,
            2.0,
            [C64::new(0.0, 0.0)],
            &OdeOptions::default(),
        );
        assert!(r.is_err());
    }
}
