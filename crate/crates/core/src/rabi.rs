//! Rabi spectrum from the tau-function initial conditions.
//!
//! With θ = E + g² and t = −4g², a level E is a pair (E, s) for which
//!
//! d log τ/dt = θ/2 + Δ²/(4g²),   d² log τ/dt² = Δ²/(16g⁴)
//!
//! at t, where τ carries composite monodromy σ_n = 2(θ + n). These equations
//! also admit roots that are not levels (typically a level shifted by an
//! integer), so every root is checked against the numerically integrated
//! composite monodromy of the Rabi system before it is accepted.

use crate::blocks::BlockTruncation;
use crate::error::{Error, Result};
use crate::fuchsia::{monodromy_pair, system_from_rabi, OdeOptions};
use crate::tau::{MonodromyData, TauSeries};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Coupling g, splitting Δ and a candidate energy E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiParams {
    pub g: f64,
    pub delta: f64,
    pub e: C64,
}

impl RabiParams {
    pub fn new(g: f64, delta: f64, e: f64) -> Self {
        Self {
            g,
            delta,
            e: C64::new(e, 0.0),
        }
    }

    pub fn with_energy(&self, e: C64) -> Self {
        Self { e, ..*self }
    }

    /// θ₀ = θ_t = E + g².
    pub fn theta(&self) -> C64 {
        self.e + self.g * self.g
    }

    /// t = −4g².
    pub fn t(&self) -> f64 {
        -4.0 * self.g * self.g
    }
}

/// θ₀ = θ_t = E + g², θ∞ = 0, σ = 2(E + g² + n).
pub fn monodromy_from_rabi(p: &RabiParams, n: i32) -> MonodromyData {
    let th = p.theta();
    MonodromyData {
        theta0: th,
        thetat: th,
        thetainf: C64::new(0.0, 0.0),
        sigma: (th + n as f64) * 2.0,
        s: None,
    }
}

/// Right-hand sides of the two initial conditions.
pub fn targets(p: &RabiParams) -> (C64, C64) {
    let g2 = p.g * p.g;
    let d2 = p.delta * p.delta;
    (
        p.theta() / 2.0 + d2 / (4.0 * g2),
        C64::new(d2 / (16.0 * g2 * g2), 0.0),
    )
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub trunc: BlockTruncation,
    pub n_window: usize,
    /// Convergence threshold on ‖(r₁, r₂)‖.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest |Im E| accepted for a physical level.
    pub im_tol: f64,
    /// Largest |Tr(M_tM₀) − 2cos πσ_n| accepted for a physical level.
    pub monodromy_tol: f64,
    /// Number of best s-grid points used as Newton starts.
    pub s_starts: usize,
    pub ode: OdeOptions,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            trunc: BlockTruncation::new(10),
            n_window: 4,
            tol: 1e-9,
            max_iter: 40,
            im_tol: 1e-6,
            monodromy_tol: 1e-4,
            s_starts: 16,
            ode: OdeOptions::default(),
        }
    }
}

fn series(p: &RabiParams, n: i32, s: C64, cfg: &SolverConfig) -> Result<TauSeries> {
    TauSeries::from_monodromy(&monodromy_from_rabi(p, n), s, cfg.trunc, cfg.n_window)
}

fn residuals_for(ser: &TauSeries, p: &RabiParams) -> Result<[C64; 2]> {
    let t = C64::new(p.t(), 0.0);
    let (a, b) = targets(p);
    Ok([ser.dlog_tau(t, 1)? - a, ser.dlog_tau(t, 2)? - b])
}

/// (r₁, r₂) at (E, s) for quantization label n.
pub fn residuals(p: &RabiParams, n: i32, s: C64, cfg: &SolverConfig) -> Result<(C64, C64)> {
    let r = residuals_for(&series(p, n, s, cfg)?, p)?;
    Ok((r[0], r[1]))
}

fn norm2(r: &[C64; 2]) -> f64 {
    (r[0].norm_sqr() + r[1].norm_sqr()).sqrt()
}

/// Outcome of one level search.
#[derive(Debug, Clone, PartialEq)]
pub enum LevelStatus {
    /// Root found and confirmed by the monodromy check.
    Converged,
    /// Δ = 0: closed-form level m − g², no root finding.
    Decoupled,
    /// Root of the equations whose monodromy does not match σ_n.
    Spurious,
    /// Root with |Im E| above tolerance.
    Complex,
    NotConverged,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub n: i32,
    pub e: f64,
    pub e_complex: C64,
    /// Composite monodromy σ_n = 2(θ + n).
    pub sigma: C64,
    pub s: C64,
    pub residual_norm: f64,
    /// (N, L)
    pub truncation: (usize, usize),
    pub converged: bool,
    pub status: LevelStatus,
    /// |Tr(M_tM₀) − 2cos πσ_n| at the root, when computed.
    pub monodromy_defect: Option<f64>,
    pub iterations: usize,
}

impl SpectralResult {
    fn failed(n: i32, e: C64, cfg: &SolverConfig, status: LevelStatus) -> Self {
        Self {
            n,
            e: e.re,
            e_complex: e,
            sigma: (e + n as f64) * 2.0,
            s: C64::new(f64::NAN, f64::NAN),
            residual_norm: f64::INFINITY,
            truncation: (cfg.n_window, cfg.trunc.max_level),
            converged: false,
            status,
            monodromy_defect: None,
            iterations: 0,
        }
    }
}

/// |Tr(M_tM₀) − 2cos πσ_n| for the Rabi system at real energy `e`.
pub fn monodromy_defect(g: f64, delta: f64, e: f64, n: i32, opts: &OdeOptions) -> Result<f64> {
    let p = RabiParams::new(g, delta, e);
    let pair = monodromy_pair(&system_from_rabi(&p), opts)?;
    let sigma = monodromy_from_rabi(&p, n).sigma;
    Ok((pair.trace_composite() - (sigma * PI).cos() * 2.0).norm())
}

/// Best `count` points of an 8×8 grid s = ρe^{iφ}, ρ ∈ [10⁻³, 10³], ranked by
/// ‖(r₁, r₂)‖.
fn s_candidates(p: &RabiParams, n: i32, cfg: &SolverConfig, count: usize) -> Result<Vec<C64>> {
    let base = series(p, n, C64::new(1.0, 0.0), cfg)?;
    let mut scored = Vec::new();
    for i in 0..8 {
        let rho = 10f64.powf(-3.0 + 6.0 * i as f64 / 7.0);
        for j in 0..8 {
            let s = C64::from_polar(rho, 2.0 * PI * j as f64 / 8.0);
            if let Ok(r) = residuals_for(&base.with_s(s), p) {
                let v = norm2(&r);
                if v.is_finite() {
                    scored.push((v, s));
                }
            }
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(scored.into_iter().take(count).map(|x| x.1).collect())
}

struct NewtonOutcome {
    e: C64,
    s: C64,
    residual: f64,
    iterations: usize,
}

fn newton(
    g: f64,
    delta: f64,
    n: i32,
    e0: C64,
    s0: C64,
    cfg: &SolverConfig,
) -> Result<NewtonOutcome> {
    let p0 = RabiParams { g, delta, e: e0 };
    let eval = |e: C64, s: C64| -> Result<[C64; 2]> {
        let p = p0.with_energy(e);
        residuals_for(&series(&p, n, s, cfg)?, &p)
    };
    let (mut e, mut s) = (e0, s0);
    let mut r = eval(e, s)?;
    let mut rn = norm2(&r);
    for it in 0..cfg.max_iter {
        if rn < cfg.tol {
            return Ok(NewtonOutcome {
                e,
                s,
                residual: rn,
                iterations: it,
            });
        }
        let p = p0.with_energy(e);
        let here = series(&p, n, s, cfg)?;
        let hs = 1e-7 * s.norm().max(1e-3);
        let he = 1e-7 * e.norm().max(1.0);
        let rs_p = residuals_for(&here.with_s(s + hs), &p)?;
        let rs_m = residuals_for(&here.with_s(s - hs), &p)?;
        let re_p = eval(e + he, s)?;
        let re_m = eval(e - he, s)?;
        let je = [
            (re_p[0] - re_m[0]) / (2.0 * he),
            (re_p[1] - re_m[1]) / (2.0 * he),
        ];
        let js = [
            (rs_p[0] - rs_m[0]) / (2.0 * hs),
            (rs_p[1] - rs_m[1]) / (2.0 * hs),
        ];
        let det = je[0] * js[1] - js[0] * je[1];
        if !det.is_finite() || det.norm() == 0.0 {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: rn,
            });
        }
        let de = -(r[0] * js[1] - js[0] * r[1]) / det;
        let ds = -(je[0] * r[1] - r[0] * je[1]) / det;
        let mut lam = 1.0;
        let mut accepted = false;
        while lam > 1e-4 {
            let (en, sn) = (e + de * lam, s + ds * lam);
            if let Ok(rnew) = eval(en, sn) {
                let v = norm2(&rnew);
                if v.is_finite() && v < rn {
                    e = en;
                    s = sn;
                    r = rnew;
                    rn = v;
                    accepted = true;
                    break;
                }
            }
            lam /= 2.0;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: rn,
            });
        }
    }
    if rn < cfg.tol {
        Ok(NewtonOutcome {
            e,
            s,
            residual: rn,
            iterations: cfg.max_iter,
        })
    } else {
        Err(Error::NoConvergence {
            iterations: cfg.max_iter,
            residual: rn,
        })
    }
}

fn decoupled(g: f64, n: i32, e_seed: f64, cfg: &SolverConfig) -> SpectralResult {
    let m = (e_seed + g * g).round().max(0.0);
    let e = m - g * g;
    SpectralResult {
        n,
        e,
        e_complex: C64::new(e, 0.0),
        sigma: C64::new(2.0 * (m + n as f64), 0.0),
        s: C64::new(0.0, 0.0),
        residual_norm: 0.0,
        truncation: (cfg.n_window, cfg.trunc.max_level),
        converged: true,
        status: LevelStatus::Decoupled,
        monodromy_defect: None,
        iterations: 0,
    }
}

/// Newton search for one level with a fixed label n, starting from E_seed and
/// the best s-grid points.
pub fn solve_level(
    g: f64,
    delta: f64,
    n: i32,
    e_seed: f64,
    cfg: &SolverConfig,
) -> Result<SpectralResult> {
    if g.is_nan() || g <= 0.0 {
        return Err(Error::InvalidParameter(format!("g = {g} must be positive")));
    }
    if delta == 0.0 {
        return Ok(decoupled(g, n, e_seed, cfg));
    }
    if g > 0.35 {
        log::warn!("g = {g} is beyond the tested range g ≤ 0.35");
    }
    let p = RabiParams::new(g, delta, e_seed);
    let e0 = C64::new(e_seed, 0.0);
    let starts = match s_candidates(&p, n, cfg, cfg.s_starts) {
        Ok(s) => s,
        Err(_) => {
            // the seed itself may sit on a resonance
            let nudged = RabiParams::new(g, delta, e_seed + 1e-4);
            s_candidates(&nudged, n, cfg, cfg.s_starts)?
        }
    };
    let mut best: Option<SpectralResult> = None;
    let mut last_err = Error::NoConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    };
    for s0 in starts {
        let out = match newton(g, delta, n, e0, s0, cfg) {
            Ok(o) => o,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let mut res = SpectralResult {
            n,
            e: out.e.re,
            e_complex: out.e,
            sigma: monodromy_from_rabi(&p.with_energy(out.e), n).sigma,
            s: out.s,
            residual_norm: out.residual,
            truncation: (cfg.n_window, cfg.trunc.max_level),
            converged: false,
            status: LevelStatus::NotConverged,
            monodromy_defect: None,
            iterations: out.iterations,
        };
        if out.e.im.abs() > cfg.im_tol {
            res.status = LevelStatus::Complex;
        } else {
            match monodromy_defect(g, delta, out.e.re, n, &cfg.ode) {
                Ok(d) => {
                    res.monodromy_defect = Some(d);
                    if d < cfg.monodromy_tol {
                        res.status = LevelStatus::Converged;
                        res.converged = true;
                        return Ok(res);
                    }
                    res.status = LevelStatus::Spurious;
                }
                Err(e) => res.status = LevelStatus::Failed(e.to_string()),
            }
        }
        if best.is_none() {
            best = Some(res);
        }
    }
    best.ok_or(last_err)
}

/// Seeds for the lowest `count` levels from second-order perturbation theory
/// in g. Near-degenerate pairs (m, +), (m+1, −) are diagonalized together.
pub fn perturbative_seeds(g: f64, delta: f64, count: usize) -> Vec<f64> {
    let d = delta.abs();
    let g2 = g * g;
    let mut seeds = vec![-d - g2 / (1.0 + 2.0 * d)];
    let mut m = 0usize;
    while seeds.len() < count + 4 {
        let mf = m as f64;
        let a = mf + d + g2 * mf / (1.0 + 2.0 * d);
        let b = mf + 1.0 - d - g2 * (mf + 2.0) / (1.0 + 2.0 * d);
        let c = g * (mf + 1.0).sqrt();
        let mean = (a + b) / 2.0;
        let split = (((a - b) / 2.0).powi(2) + c * c).sqrt();
        seeds.push(mean - split);
        seeds.push(mean + split);
        m += 1;
    }
    seeds.sort_by(|a, b| a.total_cmp(b));
    seeds.truncate(count);
    seeds
}

/// Preferred label for an energy: the largest n ≤ 0 with σ_n/2 = θ + n near
/// the origin.
pub fn preferred_label(g: f64, e: f64) -> i32 {
    -((e + g * g).round().max(0.0) as i32)
}

/// Solves the lowest levels. Each seed tries labels n from the window
/// [−(count+2), count+2], nearest to the preferred label first, and keeps
/// the first confirmed root. Results are deduplicated and sorted by E.
pub fn spectrum(g: f64, delta: f64, count: usize, cfg: &SolverConfig) -> Vec<SpectralResult> {
    let seeds = perturbative_seeds(g, delta, count);
    if delta == 0.0 {
        let mut out: Vec<SpectralResult> = (0..count)
            .map(|m| decoupled(g, 0, m as f64 - g * g, cfg))
            .collect();
        out.dedup_by(|a, b| (a.e - b.e).abs() < 1e-6);
        return out;
    }
    let window = (count + 2) as i32;
    let mut results: Vec<SpectralResult> = seeds
        .par_iter()
        .map(|&seed| {
            let pref = preferred_label(g, seed);
            let mut labels: Vec<i32> = (-window..=window).collect();
            labels.sort_by_key(|&n| ((n - pref).abs(), -n));
            let mut fallback: Option<SpectralResult> = None;
            for n in labels {
                match solve_level(g, delta, n, seed, cfg) {
                    Ok(r) if r.converged => return r,
                    Ok(r) => {
                        if fallback.is_none() {
                            fallback = Some(r);
                        }
                    }
                    Err(e) => {
                        if fallback.is_none() && !matches!(e, Error::Resonant(_)) {
                            fallback = Some(SpectralResult::failed(
                                n,
                                C64::new(seed, 0.0),
                                cfg,
                                LevelStatus::Failed(e.to_string()),
                            ));
                        }
                    }
                }
            }
            fallback.unwrap_or_else(|| {
                SpectralResult::failed(
                    pref,
                    C64::new(seed, 0.0),
                    cfg,
                    LevelStatus::Failed("no label produced a root".into()),
                )
            })
        })
        .collect();
    results.sort_by(|a, b| b.converged.cmp(&a.converged).then(a.e.total_cmp(&b.e)));
    let mut kept: Vec<SpectralResult> = Vec::new();
    for r in results {
        if r.converged && kept.iter().any(|k| k.converged && (k.e - r.e).abs() < 1e-6) {
            continue;
        }
        kept.push(r);
    }
    kept.sort_by(|a, b| a.e.total_cmp(&b.e));
    kept
}
