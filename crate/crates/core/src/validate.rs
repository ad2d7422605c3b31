//! Cross-check battery: solver against the Fock oracle, monodromy traces,
//! connection coefficients, isomonodromic invariance, the apparent
//! singularity, tau-function derivatives and the combinatorics.

use crate::blocks::{block_coeff, BlockForm, BlockTruncation, ThetaTriple};
use crate::constants::constant_ratio;
use crate::fuchsia::{
    apparent_singularity_residual, connection_offdiag, flow_to, hamiltonian_check, monodromy_pair,
    reduce_to_scalar, system_from_rabi, OdeOptions,
};
use crate::oracle::{eigenvalues, FockTruncation};
use crate::partitions::{partitions_of, Partition};
use crate::rabi::{monodromy_from_rabi, spectrum, RabiParams, SolverConfig, SpectralResult};
use crate::tau::TauSeries;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckFamily {
    Decoupled,
    Uncoupled,
    Oracle,
    Monodromy,
    Connection,
    Schlesinger,
    Apparent,
    Tau,
    Hamiltonian,
    Combinatorics,
}

impl CheckFamily {
    pub const ALL: [CheckFamily; 10] = [
        CheckFamily::Decoupled,
        CheckFamily::Uncoupled,
        CheckFamily::Oracle,
        CheckFamily::Monodromy,
        CheckFamily::Connection,
        CheckFamily::Schlesinger,
        CheckFamily::Apparent,
        CheckFamily::Tau,
        CheckFamily::Hamiltonian,
        CheckFamily::Combinatorics,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckFamily::Decoupled => "decoupled",
            CheckFamily::Uncoupled => "uncoupled",
            CheckFamily::Oracle => "oracle",
            CheckFamily::Monodromy => "monodromy",
            CheckFamily::Connection => "connection",
            CheckFamily::Schlesinger => "schlesinger",
            CheckFamily::Apparent => "apparent",
            CheckFamily::Tau => "tau",
            CheckFamily::Hamiltonian => "hamiltonian",
            CheckFamily::Combinatorics => "combinatorics",
        }
    }
}

impl fmt::Display for CheckFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckFamily::ALL
            .iter()
            .find(|f| f.name() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = CheckFamily::ALL.iter().map(|f| f.name()).collect();
                format!(
                    "unknown check family '{s}', expected one of {}",
                    names.join(", ")
                )
            })
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub family: CheckFamily,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub metric: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateConfig {
    pub gs: Vec<f64>,
    pub deltas: Vec<f64>,
    pub levels: usize,
    pub solver: SolverConfig,
    pub fock: FockTruncation,
    /// Added to σ_n in the monodromy-trace check. Nonzero values exercise the
    /// failure path.
    pub sigma_offset: f64,
    pub seed: u64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            gs: vec![0.1, 0.2, 0.3],
            deltas: vec![0.2, 0.5, 0.7],
            levels: 4,
            solver: SolverConfig::default(),
            fock: FockTruncation::new(80),
            sigma_offset: 0.0,
            seed: 7,
        }
    }
}

struct Solved {
    g: f64,
    delta: f64,
    levels: Vec<SpectralResult>,
    oracle: Vec<f64>,
}

fn solve_grid(cfg: &ValidateConfig) -> Vec<Solved> {
    let mut out = Vec::new();
    for &g in &cfg.gs {
        for &delta in &cfg.deltas {
            out.push(Solved {
                g,
                delta,
                levels: spectrum(g, delta, cfg.levels, &cfg.solver),
                oracle: eigenvalues(g, delta, cfg.fock),
            });
        }
    }
    out
}

fn result(family: CheckFamily, metric: f64, threshold: f64, detail: String) -> CheckResult {
    CheckResult {
        family,
        passed: metric.is_finite() && metric < threshold,
        metric,
        threshold,
        detail,
    }
}

fn failed(family: CheckFamily, threshold: f64, detail: String) -> CheckResult {
    CheckResult {
        family,
        passed: false,
        metric: f64::INFINITY,
        threshold,
        detail,
    }
}

/// Runs the requested families (all when `only` is empty), in the order of
/// [`CheckFamily::ALL`].
pub fn run(cfg: &ValidateConfig, only: &[CheckFamily]) -> Vec<CheckResult> {
    let wanted = |f: CheckFamily| only.is_empty() || only.contains(&f);
    let needs_grid = [
        CheckFamily::Oracle,
        CheckFamily::Monodromy,
        CheckFamily::Hamiltonian,
    ]
    .iter()
    .any(|&f| wanted(f));
    let grid = if needs_grid {
        solve_grid(cfg)
    } else {
        Vec::new()
    };
    let opts = cfg.solver.ode;
    let mut out = Vec::new();
    for fam in CheckFamily::ALL {
        if !wanted(fam) {
            continue;
        }
        out.push(match fam {
            CheckFamily::Decoupled => check_decoupled(cfg),
            CheckFamily::Uncoupled => check_uncoupled(cfg),
            CheckFamily::Oracle => check_oracle(&grid, cfg),
            CheckFamily::Monodromy => check_monodromy(&grid, cfg, &opts),
            CheckFamily::Connection => check_connection(cfg, &opts),
            CheckFamily::Schlesinger => check_schlesinger(&opts),
            CheckFamily::Apparent => check_apparent(cfg, &opts),
            CheckFamily::Tau => check_tau(cfg),
            CheckFamily::Hamiltonian => check_hamiltonian(&grid, cfg, &opts),
            CheckFamily::Combinatorics => check_combinatorics(),
        });
    }
    out
}

fn check_decoupled(cfg: &ValidateConfig) -> CheckResult {
    let mut worst: f64 = 0.0;
    for &g in &cfg.gs {
        let ev = eigenvalues(g, 0.0, cfg.fock);
        for (k, e) in ev.iter().take(5).enumerate() {
            let m = (k / 2) as f64;
            worst = worst.max((e - (m - g * g)).abs());
        }
    }
    result(
        CheckFamily::Decoupled,
        worst,
        1e-8,
        "Δ = 0: lowest 5 oracle levels vs m − g² (each m twice)".into(),
    )
}

fn check_uncoupled(cfg: &ValidateConfig) -> CheckResult {
    let mut worst: f64 = 0.0;
    for &d in &cfg.deltas {
        let ev = eigenvalues(0.0, d, cfg.fock);
        let mut want: Vec<f64> = (0..=cfg.fock.n_max)
            .flat_map(|n| [n as f64 - d, n as f64 + d])
            .collect();
        want.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in ev.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
    }
    result(
        CheckFamily::Uncoupled,
        worst,
        1e-10,
        "g = 0: oracle spectrum vs n ± Δ".into(),
    )
}

fn nearest(ev: &[f64], e: f64) -> f64 {
    ev.iter()
        .map(|x| (x - e).abs())
        .fold(f64::INFINITY, f64::min)
}

fn check_oracle(grid: &[Solved], cfg: &ValidateConfig) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut converged = 0;
    let mut total = 0;
    for s in grid {
        for r in &s.levels {
            total += 1;
            if r.converged {
                converged += 1;
                worst = worst.max(nearest(&s.oracle[..cfg.levels + 2], r.e));
            }
        }
    }
    let mut res = result(
        CheckFamily::Oracle,
        worst,
        1e-5,
        format!("{converged}/{total} levels converged; max |E − E_oracle|"),
    );
    if converged == 0 {
        res.passed = false;
    }
    res
}

fn check_monodromy(grid: &[Solved], cfg: &ValidateConfig, opts: &OdeOptions) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for s in grid {
        for r in s.levels.iter().filter(|r| r.converged) {
            let p = RabiParams::new(s.g, s.delta, r.e);
            let pair = match monodromy_pair(&system_from_rabi(&p), opts) {
                Ok(p) => p,
                Err(e) => return failed(CheckFamily::Monodromy, 1e-4, e.to_string()),
            };
            let sigma = monodromy_from_rabi(&p, r.n).sigma + cfg.sigma_offset;
            worst = worst.max((pair.trace_composite() - (sigma * PI).cos() * 2.0).norm());
            count += 1;
        }
    }
    result(
        CheckFamily::Monodromy,
        worst,
        1e-4,
        format!("|Tr(M_tM₀) − 2cos πσ_n| over {count} roots"),
    )
}

fn check_connection(cfg: &ValidateConfig, opts: &OdeOptions) -> CheckResult {
    let mut on: f64 = 0.0;
    let mut off = f64::INFINITY;
    for &g in &cfg.gs {
        for &d in &cfg.deltas {
            let ev = eigenvalues(g, d, cfg.fock);
            for k in 0..cfg.levels {
                let a = connection_offdiag(&RabiParams::new(g, d, ev[k]), opts);
                let b = connection_offdiag(&RabiParams::new(g, d, 0.5 * (ev[k] + ev[k + 1])), opts);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        on = on.max(a.norm());
                        off = off.min(b.norm());
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        return failed(CheckFamily::Connection, 1e-5, e.to_string())
                    }
                }
            }
        }
    }
    let mut res = result(
        CheckFamily::Connection,
        on,
        1e-5,
        format!("max at eigenvalues {on:.3e}; min at midpoints {off:.3e} (must exceed 1e-3)"),
    );
    res.passed &= off > 1e-3;
    res
}

fn check_schlesinger(opts: &OdeOptions) -> CheckResult {
    let mut mono: f64 = 0.0;
    let mut traces: f64 = 0.0;
    for (g, d, e) in [(0.3, 0.5, 0.21), (0.3, 0.2, -0.4), (0.3, 0.7, 1.3)] {
        let sys = system_from_rabi(&RabiParams::new(g, d, e));
        let base = match monodromy_pair(&sys, opts) {
            Ok(b) => b,
            Err(e) => return failed(CheckFamily::Schlesinger, 1e-5, e.to_string()),
        };
        let mut cur = sys;
        for i in 1..=8 {
            let t = C64::new(-0.36 + 0.04 * i as f64, 0.0);
            let step = flow_to(&cur, t, opts).and_then(|c| Ok((c, monodromy_pair(&c, opts)?)));
            let (next, m) = match step {
                Ok(x) => x,
                Err(e) => return failed(CheckFamily::Schlesinger, 1e-5, e.to_string()),
            };
            cur = next;
            mono = mono
                .max((m.trace0() - base.trace0()).norm())
                .max((m.trace_t() - base.trace_t()).norm())
                .max((m.trace_composite() - base.trace_composite()).norm());
            traces = traces
                .max((cur.a0.trace() - sys.a0.trace()).norm())
                .max((cur.at.trace() - sys.at.trace()).norm());
        }
    }
    let mut res = result(
        CheckFamily::Schlesinger,
        mono,
        1e-5,
        format!("monodromy traces drift {mono:.3e}; Tr A_i drift {traces:.3e} (limit 1e-10)"),
    );
    res.passed &= traces < 1e-10;
    res
}

fn check_apparent(cfg: &ValidateConfig, opts: &OdeOptions) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let e = rng.gen_range(-1.0..2.0);
        let g = rng.gen_range(0.05..0.35);
        let d = rng.gen_range(0.1..0.8);
        let sys = system_from_rabi(&RabiParams::new(g, d, e));
        let r = flow_to(&sys, sys.t * C64::new(1.0, 1.0), opts).and_then(|s| reduce_to_scalar(&s));
        match r {
            Ok(r) => {
                worst = worst.max(apparent_singularity_residual(
                    &r,
                    &r.theta(C64::new(0.0, 0.0)),
                ))
            }
            Err(e) => return failed(CheckFamily::Apparent, 1e-10, e.to_string()),
        }
    }
    result(
        CheckFamily::Apparent,
        worst,
        1e-10,
        "100 random systems, reduced after an off-axis flow".into(),
    )
}

/// Relative mismatch of analytic vs 5-point finite-difference derivatives.
pub fn tau_derivative_mismatch(ser: &TauSeries, t: C64) -> crate::error::Result<(f64, f64)> {
    let h = 1e-3 * t.norm();
    let v0 = ser.tau_tilde(t)?;
    let kappa = ser.kappa() - ser.sigma * ser.sigma;
    let f = |k: f64| -> crate::error::Result<C64> {
        let tt = t + h * k;
        let ratio = ser.tau_tilde(tt)? / v0;
        Ok(kappa * (tt / t).ln() - ratio.ln())
    };
    let (m2, m1, p1, p2) = (f(-2.0)?, f(-1.0)?, f(1.0)?, f(2.0)?);
    let d1 = (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h);
    let d2 = (-m2 + m1 * 16.0 + p1 * 16.0 - p2) / (12.0 * h * h);
    let a1 = ser.dlog_tau(t, 1)?;
    let a2 = ser.dlog_tau(t, 2)?;
    Ok(((d1 - a1).norm() / a1.norm(), (d2 - a2).norm() / a2.norm()))
}

fn check_tau(cfg: &ValidateConfig) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 1);
    let (mut w1, mut w2): (f64, f64) = (0.0, 0.0);
    let mut done = 0;
    while done < 20 {
        let th = ThetaTriple::new(
            C64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.2..0.2)),
            C64::new(rng.gen_range(-0.6..0.6), 0.0),
            C64::new(rng.gen_range(-0.3..0.3), 0.0),
        );
        let sigma = C64::new(rng.gen_range(0.05..0.45), rng.gen_range(-0.1..0.1));
        let s = C64::from_polar(rng.gen_range(0.2..3.0), rng.gen_range(0.0..2.0 * PI));
        let t = C64::new(-rng.gen_range(0.05..0.3), 0.0);
        let ser = match TauSeries::new(th, sigma, s, BlockTruncation::new(10), 4) {
            Ok(x) => x,
            Err(_) => continue,
        };
        if let Ok((a, b)) = tau_derivative_mismatch(&ser, t) {
            w1 = w1.max(a);
            w2 = w2.max(b);
            done += 1;
        }
    }
    let mut res = result(
        CheckFamily::Tau,
        w1,
        1e-6,
        format!("order 1 rel {w1:.3e}; order 2 rel {w2:.3e} (limit 1e-5)"),
    );
    res.passed &= w2 < 1e-5;
    res
}

fn check_hamiltonian(grid: &[Solved], cfg: &ValidateConfig, opts: &OdeOptions) -> CheckResult {
    let root = grid.iter().find_map(|s| {
        let t0 = -4.0 * s.g * s.g;
        if !(-0.3..=-0.1).contains(&t0) {
            return None;
        }
        s.levels
            .iter()
            .find(|r| r.converged)
            .map(|r| (s.g, s.delta, r.clone()))
    });
    let Some((g, d, r)) = root.or_else(|| {
        grid.iter().find_map(|s| {
            s.levels
                .iter()
                .find(|r| r.converged)
                .map(|r| (s.g, s.delta, r.clone()))
        })
    }) else {
        return failed(CheckFamily::Hamiltonian, 1e-5, "no converged root".into());
    };
    let p = RabiParams::new(g, d, r.e);
    let md = monodromy_from_rabi(&p, r.n);
    let ser = match TauSeries::from_monodromy(&md, r.s, cfg.solver.trunc, cfg.solver.n_window) {
        Ok(s) => s,
        Err(e) => return failed(CheckFamily::Hamiltonian, 1e-5, e.to_string()),
    };
    let ts: Vec<C64> = (0..=10)
        .map(|i| C64::new(-0.3 + 0.02 * i as f64, 0.0))
        .collect();
    match hamiltonian_check(&system_from_rabi(&p), &ser, &ts, opts) {
        Ok(dev) => result(
            CheckFamily::Hamiltonian,
            dev,
            1e-5,
            format!("g = {g}, Δ = {d}, E = {:.10}, t ∈ [−0.3, −0.1]", r.e),
        ),
        Err(e) => failed(CheckFamily::Hamiltonian, 1e-5, e.to_string()),
    }
}

/// p(n) from Euler's pentagonal-number recurrence.
pub fn euler_partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc = 0i64;
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
            k += 1;
        }
        p[m] = acc;
    }
    p[n] as u64
}

fn check_combinatorics() -> CheckResult {
    let mut bad = Vec::new();
    for n in 0..=12 {
        if partitions_of(n).len() as u64 != euler_partition_count(n) {
            bad.push(format!("p({n})"));
        }
    }
    let th = ThetaTriple::real(1.0, 1.0, 0.0);
    let one = Partition::new(vec![1]).unwrap_or_default();
    let e = Partition::empty();
    let a = block_coeff(BlockForm::Linear, &th, C64::new(3.0, 0.0), &one, &e);
    let b = block_coeff(BlockForm::Linear, &th, C64::new(3.0, 0.0), &e, &one);
    if a != Ok(C64::new(7.5, 0.0)) || b != Ok(C64::new(-1.5, 0.0)) {
        bad.push("block hand values".into());
    }
    let th = ThetaTriple::real(0.8, 0.8, 0.0);
    let sigma = C64::new(2.2, 0.0);
    let mut worst: f64 = 0.0;
    for m in -3i32..=3 {
        for n in -3i32..=3 {
            if (m + n).abs() > 3 {
                continue;
            }
            let r = constant_ratio(&th, sigma, m + n).and_then(|mn| {
                Ok((
                    mn,
                    constant_ratio(&th, sigma, m)? * constant_ratio(&th, sigma + m as f64, n)?,
                ))
            });
            match r {
                Ok((x, y)) => worst = worst.max((x - y).norm() / x.norm()),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    let mut res = result(
        CheckFamily::Combinatorics,
        worst,
        1e-10,
        if bad.is_empty() {
            "partition counts, block hand values, cocycle".into()
        } else {
            format!("failures: {}", bad.join(", "))
        },
    );
    res.passed &= bad.is_empty();
    res
}
