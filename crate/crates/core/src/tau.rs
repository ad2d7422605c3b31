//! Truncated small-t expansion of the Painlevé V tau function.
//!
//! The sum Σ_n C(σ+n) sⁿ t^{(σ+n)²} ℬ(σ+n; t) is stored divided by
//! C(σ) t^{σ²}. Each term is a power of t times e^{−θ_t t}, so the
//! t-derivatives are exact.
//!
//! Exponents here are in series units. A Fuchsian system whose local
//! monodromies have eigenvalues e^{±iπθ} corresponds to series exponents θ/2
//! and series σ equal to half the composite monodromy parameter; see
//! [`MonodromyData::series_theta`].
//!
//! Powers of t use the branch 0 ≤ arg t < 2π, so t on the negative real axis
//! has arg t = π and small complex perturbations stay on the same sheet.

use crate::blocks::{level_sums, BlockForm, BlockTruncation, ThetaTriple};
use crate::constants::ConstantRatioTable;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// |t| above which the truncated series is reported as outside its tested range.
pub const CONVERGENCE_WARN_RADIUS: f64 = 0.5;

/// Monodromy labels of a Fuchsian system class, in monodromy units:
/// Tr M_i = 2cos πθ_i and Tr(M_t M₀) = 2cos πσ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyData {
    pub theta0: C64,
    pub thetat: C64,
    pub thetainf: C64,
    pub sigma: C64,
    pub s: Option<C64>,
}

impl MonodromyData {
    /// Exponents as they enter the series (halved).
    pub fn series_theta(&self) -> ThetaTriple {
        ThetaTriple::new(self.theta0 / 2.0, self.thetat / 2.0, self.thetainf / 2.0)
    }

    pub fn series_sigma(&self) -> C64 {
        self.sigma / 2.0
    }

    /// s₁s₂ implied by σ and θ∞.
    pub fn stokes_product(&self) -> C64 {
        stokes_product(self.thetainf, self.sigma)
    }
}

/// s₁s₂ = (2cos πσ − 2cos πθ∞) e^{−iπθ∞}.
pub fn stokes_product(thetainf: C64, sigma: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    ((sigma * PI).cos() * 2.0 - (thetainf * PI).cos() * 2.0) * (-i * PI * thetainf).exp()
}

/// log t with 0 ≤ arg t < 2π.
pub fn log_t(t: C64) -> C64 {
    let mut arg = t.im.atan2(t.re);
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    C64::new(t.norm().ln(), arg)
}

#[derive(Debug, Clone)]
struct ShiftTerm {
    n: i32,
    ratio: C64,
    exponent: C64,
    coeffs: Vec<C64>,
}

/// τ̃ and its first two t-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauValues {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
    /// Σ |term|, used to judge cancellation.
    pub scale: f64,
}

/// Truncated tau expansion for fixed (θ, σ, s).
#[derive(Debug, Clone)]
pub struct TauSeries {
    pub theta: ThetaTriple,
    pub sigma: C64,
    pub s: C64,
    pub trunc: BlockTruncation,
    pub n_window: usize,
    pub form: BlockForm,
    terms: Vec<ShiftTerm>,
}

impl TauSeries {
    pub fn new(
        theta: ThetaTriple,
        sigma: C64,
        s: C64,
        trunc: BlockTruncation,
        n_window: usize,
    ) -> Result<Self> {
        Self::with_form(theta, sigma, s, trunc, n_window, BlockForm::default())
    }

    pub fn with_form(
        theta: ThetaTriple,
        sigma: C64,
        s: C64,
        trunc: BlockTruncation,
        n_window: usize,
        form: BlockForm,
    ) -> Result<Self> {
        let table = ConstantRatioTable::new(&theta, sigma, n_window)?;
        let mut terms = Vec::new();
        for (&n, &ratio) in &table.values {
            if ratio == C64::new(0.0, 0.0) {
                continue;
            }
            let sn = sigma + n as f64;
            terms.push(ShiftTerm {
                n,
                ratio,
                exponent: sn * sn - sigma * sigma,
                coeffs: level_sums(form, &theta, sn, trunc)?,
            });
        }
        Ok(Self {
            theta,
            sigma,
            s,
            trunc,
            n_window,
            form,
            terms,
        })
    }

    /// Series for a system with the given monodromy data.
    pub fn from_monodromy(
        data: &MonodromyData,
        s: C64,
        trunc: BlockTruncation,
        n_window: usize,
    ) -> Result<Self> {
        Self::new(data.series_theta(), data.series_sigma(), s, trunc, n_window)
    }

    /// Same coefficients with a different s.
    pub fn with_s(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.s = s;
        out
    }

    /// Shifts n that contribute (nonzero structure-constant ratio).
    pub fn active_shifts(&self) -> Vec<i32> {
        self.terms.iter().map(|t| t.n).collect()
    }

    /// ((θ₀−θ_t)² − θ∞²) in series units, the power in τ = t^κ/τ̃.
    pub fn kappa(&self) -> C64 {
        let d = self.theta.theta0 - self.theta.thetat;
        d * d - self.theta.thetainf * self.theta.thetainf
    }

    /// Normalized τ̃ with its first and second t-derivatives.
    pub fn evaluate(&self, t: C64) -> Result<TauValues> {
        if t.norm() == 0.0 {
            return Err(Error::ZeroT);
        }
        if t.norm() > CONVERGENCE_WARN_RADIUS {
            log::warn!("|t| = {} is outside the tested convergence range", t.norm());
        }
        let lt = log_t(t);
        let mut v = TauValues {
            value: C64::new(0.0, 0.0),
            d1: C64::new(0.0, 0.0),
            d2: C64::new(0.0, 0.0),
            scale: 0.0,
        };
        let inv_t = 1.0 / t;
        let damp = -self.theta.thetat * t;
        for term in &self.terms {
            let base = term.ratio * self.s.powi(term.n);
            for (m, &c) in term.coeffs.iter().enumerate() {
                if c == C64::new(0.0, 0.0) {
                    continue;
                }
                let p = term.exponent + m as f64;
                let f = base * c * (p * lt + damp).exp();
                let g = p * inv_t - self.theta.thetat;
                v.value += f;
                v.d1 += g * f;
                v.d2 += (g * g - p * inv_t * inv_t) * f;
                v.scale += f.norm();
            }
        }
        Ok(v)
    }

    pub fn tau_tilde(&self, t: C64) -> Result<C64> {
        Ok(self.evaluate(t)?.value)
    }

    fn checked(&self, t: C64) -> Result<TauValues> {
        let v = self.evaluate(t)?;
        if v.value.norm() <= 1e-14 * v.scale || v.value.norm() == 0.0 {
            return Err(Error::ZeroCrossing {
                t_re: t.re,
                t_im: t.im,
            });
        }
        Ok(v)
    }

    /// d/dt and d²/dt² of log τ̃ for the normalized series.
    pub fn dlog_tau_tilde(&self, t: C64) -> Result<(C64, C64)> {
        let v = self.checked(t)?;
        let a = v.d1 / v.value;
        Ok((a, v.d2 / v.value - a * a))
    }

    /// d^k/dt^k log τ (k = 1, 2) for τ = t^κ / (t^{σ²} τ̃).
    pub fn dlog_tau(&self, t: C64, order: u8) -> Result<C64> {
        let (a, b) = self.dlog_tau_tilde(t)?;
        let shift = self.kappa() - self.sigma * self.sigma;
        match order {
            1 => Ok(shift / t - a),
            2 => Ok(-shift / (t * t) - b),
            _ => Err(Error::InvalidParameter(format!(
                "derivative order {order} not in {{1, 2}}"
            ))),
        }
    }
}
