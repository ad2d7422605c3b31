mod args;
mod report;

use args::{Cli, Command, Format, Output, Tolerances, Truncation};
use clap::Parser;
use isorabi::fuchsia::{connection_offdiag, monodromy_pair, system_from_rabi};
use isorabi::oracle::eigenvalues;
use isorabi::validate::{self, tau_derivative_mismatch};
use isorabi::{
    BlockTruncation, Complex64, FockTruncation, OdeOptions, RabiParams, SolverConfig, TauSeries,
    ThetaTriple, ValidateConfig,
};
use report::{cnum, emit, matrix, num, Report};
use serde_json::{json, Value};
use std::process::ExitCode;

const SPECTRUM_COLUMNS: [&str; 9] = [
    "n",
    "sigma",
    "E",
    "s_re",
    "s_im",
    "residual",
    "oracle_E",
    "abs_err",
    "converged",
];

enum Failure {
    Usage(String),
    Run(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn require(ok: bool, msg: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Usage(msg.to_string()))
    }
}

fn ode(t: &Tolerances) -> Result<OdeOptions, Failure> {
    require(
        t.rtol > 0.0 && t.atol > 0.0,
        "--rtol and --atol must be positive",
    )?;
    Ok(OdeOptions {
        rtol: t.rtol,
        atol: t.atol,
        ..OdeOptions::default()
    })
}

fn solver(t: &Tolerances, trunc: Option<&Truncation>) -> Result<SolverConfig, Failure> {
    require(
        t.tol > 0.0 && t.im_tol > 0.0 && t.monodromy_tol > 0.0 && t.max_iter > 0,
        "solver tolerances must be positive",
    )?;
    let mut cfg = SolverConfig {
        tol: t.tol,
        max_iter: t.max_iter,
        im_tol: t.im_tol,
        monodromy_tol: t.monodromy_tol,
        ode: ode(t)?,
        ..SolverConfig::default()
    };
    if let Some(tr) = trunc {
        require(tr.max_level >= 1, "--max-level must be at least 1")?;
        cfg.trunc = BlockTruncation::new(tr.max_level);
        cfg.n_window = tr.n_window;
    }
    Ok(cfg)
}

fn write(report: &Report, output: &Output, columns: &[&str]) -> Result<(), Failure> {
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json())
                .map_err(|e| Failure::Run(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => report.to_csv(columns),
    };
    emit(&text, output.out.as_deref()).map_err(|e| Failure::Run(format!("writing output: {e}")))
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Spectrum {
            g,
            delta,
            levels,
            with_oracle,
            n_max,
            trunc,
            tols,
            output,
        } => {
            require(g > 0.0, "--g must be positive")?;
            require(delta >= 0.0, "--delta must be non-negative")?;
            require(levels >= 1, "--levels must be at least 1")?;
            require(n_max >= 1, "--n-max must be at least 1")?;
            let cfg = solver(&tols, Some(&trunc))?;
            spectrum(
                g,
                delta,
                levels,
                with_oracle.then_some(n_max),
                &cfg,
                &output,
            )
        }
        Command::Oracle {
            g,
            delta,
            levels,
            n_max,
            output,
        } => {
            require(g >= 0.0, "--g must be non-negative")?;
            require(delta >= 0.0, "--delta must be non-negative")?;
            require(
                levels >= 1 && levels <= 2 * (n_max + 1),
                "--levels must be in 1..=2(n_max+1)",
            )?;
            let mut r = Report::new("oracle");
            r.param("g", num(g).into());
            r.param("delta", num(delta).into());
            r.param("n_max", n_max.into());
            for (k, e) in eigenvalues(g, delta, FockTruncation::new(n_max))
                .into_iter()
                .take(levels)
                .enumerate()
            {
                r.results.push(json!({ "k": k, "E": num(e) }));
            }
            write(&r, &output, &["k", "E"])?;
            Ok(true)
        }
        Command::Tau {
            theta0,
            thetat,
            thetainf,
            sigma,
            s,
            t,
            trunc,
            output,
        } => {
            require(t.norm() > 0.0, "--t must be nonzero")?;
            require(trunc.max_level >= 1, "--max-level must be at least 1")?;
            tau(
                ThetaTriple::new(theta0, thetat, thetainf),
                sigma,
                s,
                t,
                &trunc,
                &output,
            )
        }
        Command::Monodromy {
            g,
            delta,
            e,
            tols,
            output,
        } => {
            require(g > 0.0, "--g must be positive")?;
            require(delta >= 0.0, "--delta must be non-negative")?;
            monodromy(g, delta, e, &ode(&tols)?, &output)
        }
        Command::Validate {
            only,
            levels,
            sigma_offset,
            seed,
            tols,
            output,
        } => {
            require(levels >= 1, "--levels must be at least 1")?;
            let cfg = ValidateConfig {
                levels,
                solver: solver(&tols, None)?,
                sigma_offset,
                seed,
                ..ValidateConfig::default()
            };
            validate_cmd(&cfg, &only, &output)
        }
    }
}

fn spectrum(
    g: f64,
    delta: f64,
    levels: usize,
    oracle_n_max: Option<usize>,
    cfg: &SolverConfig,
    output: &Output,
) -> Result<bool, Failure> {
    let mut r = Report::new("spectrum");
    r.param("g", num(g).into());
    r.param("delta", num(delta).into());
    r.param("levels", levels.into());
    r.param("shifts", cfg.n_window.into());
    r.param("max_level", cfg.trunc.max_level.into());
    if let Some(n) = oracle_n_max {
        r.param("n_max", n.into());
    }
    let res = isorabi::spectrum(g, delta, levels, cfg);
    let oracle = oracle_n_max.map(|n| eigenvalues(g, delta, FockTruncation::new(n)));
    for lvl in &res {
        let near = oracle.as_ref().and_then(|ev| {
            ev.iter()
                .copied()
                .min_by(|a, b| (a - lvl.e).abs().total_cmp(&(b - lvl.e).abs()))
        });
        if !lvl.converged {
            eprintln!(
                "warning: level near E = {} not converged ({:?})",
                lvl.e, lvl.status
            );
        }
        r.results.push(json!({
            "n": lvl.n,
            "sigma": num(lvl.sigma.re),
            "E": num(lvl.e),
            "E_complex": cnum(lvl.e_complex),
            "s_re": num(lvl.s.re),
            "s_im": num(lvl.s.im),
            "residual": num(lvl.residual_norm),
            "oracle_E": near.map(num),
            "abs_err": near.map(|x| num((x - lvl.e).abs())),
            "converged": lvl.converged,
            "status": format!("{:?}", lvl.status),
            "monodromy_defect": lvl.monodromy_defect.map(num),
            "iterations": lvl.iterations,
        }));
    }
    if res.len() < levels {
        eprintln!("warning: {} of {levels} levels found", res.len());
    }
    write(&r, output, &SPECTRUM_COLUMNS)?;
    Ok(true)
}

fn tau(
    theta: ThetaTriple,
    sigma: Complex64,
    s: Complex64,
    t: Complex64,
    trunc: &Truncation,
    output: &Output,
) -> Result<bool, Failure> {
    let ser = TauSeries::new(
        theta,
        sigma,
        s,
        BlockTruncation::new(trunc.max_level),
        trunc.n_window,
    )
    .map_err(|e| Failure::Run(e.to_string()))?;
    let run = |e: isorabi::Error| Failure::Run(e.to_string());
    let value = ser.tau_tilde(t).map_err(run)?;
    let d1 = ser.dlog_tau(t, 1).map_err(run)?;
    let d2 = ser.dlog_tau(t, 2).map_err(run)?;
    let (e1, e2) = tau_derivative_mismatch(&ser, t).map_err(run)?;

    let mut r = Report::new("tau");
    r.param("theta0", cnum(theta.theta0));
    r.param("thetat", cnum(theta.thetat));
    r.param("thetainf", cnum(theta.thetainf));
    r.param("sigma", cnum(sigma));
    r.param("s", cnum(s));
    r.param("t", cnum(t));
    r.param("shifts", trunc.n_window.into());
    r.param("max_level", trunc.max_level.into());
    r.results.push(json!({
        "tau_tilde": cnum(value),
        "dlog_tau": cnum(d1),
        "d2log_tau": cnum(d2),
    }));
    r.check(
        "derivative order 1",
        e1 < 1e-6,
        e1,
        1e-6,
        "relative gap to 5-point finite difference",
    );
    r.check(
        "derivative order 2",
        e2 < 1e-5,
        e2,
        1e-5,
        "relative gap to 5-point finite difference",
    );
    let flat = json!({
        "tau_re": num(value.re), "tau_im": num(value.im),
        "dlog_re": num(d1.re), "dlog_im": num(d1.im),
        "d2log_re": num(d2.re), "d2log_im": num(d2.im),
        "self_check": e1 < 1e-6 && e2 < 1e-5,
    });
    if output.format == Format::Csv {
        r.results = vec![flat];
    }
    write(
        &r,
        output,
        &[
            "tau_re",
            "tau_im",
            "dlog_re",
            "dlog_im",
            "d2log_re",
            "d2log_im",
            "self_check",
        ],
    )?;
    Ok(true)
}

fn monodromy(
    g: f64,
    delta: f64,
    e: f64,
    opts: &OdeOptions,
    output: &Output,
) -> Result<bool, Failure> {
    let p = RabiParams::new(g, delta, e);
    let run = |e: isorabi::Error| Failure::Run(e.to_string());
    let pair = monodromy_pair(&system_from_rabi(&p), opts).map_err(run)?;
    let offdiag = if delta == 0.0 {
        None
    } else {
        Some(connection_offdiag(&p, opts).map_err(run)?)
    };
    let mut r = Report::new("monodromy");
    r.param("g", num(g).into());
    r.param("delta", num(delta).into());
    r.param("E", num(e).into());
    r.results.push(json!({
        "M0": matrix(&pair.m0),
        "Mt": matrix(&pair.mt),
        "M0_raw": matrix(&pair.m0_raw),
        "Mt_raw": matrix(&pair.mt_raw),
        "trace_M0": cnum(pair.trace0()),
        "trace_Mt": cnum(pair.trace_t()),
        "trace_MtM0": cnum(pair.trace_composite()),
        "sigma": cnum(pair.sigma()),
        "connection_offdiag": offdiag.map(cnum),
        "connection_offdiag_abs": offdiag.map(|z| num(z.norm())),
    }));
    if output.format == Format::Csv {
        let tr = pair.trace_composite();
        r.results = vec![json!({
            "trace_MtM0_re": num(tr.re),
            "trace_MtM0_im": num(tr.im),
            "sigma_re": num(pair.sigma().re),
            "offdiag_abs": offdiag.map(|z| num(z.norm())),
        })];
    }
    write(
        &r,
        output,
        &["trace_MtM0_re", "trace_MtM0_im", "sigma_re", "offdiag_abs"],
    )?;
    Ok(true)
}

fn validate_cmd(
    cfg: &ValidateConfig,
    only: &[isorabi::CheckFamily],
    output: &Output,
) -> Result<bool, Failure> {
    let results = validate::run(cfg, only);
    let mut r = Report::new("validate");
    r.param(
        "gs",
        Value::Array(cfg.gs.iter().map(|&x| num(x).into()).collect()),
    );
    r.param(
        "deltas",
        Value::Array(cfg.deltas.iter().map(|&x| num(x).into()).collect()),
    );
    r.param("levels", cfg.levels.into());
    r.param("sigma_offset", num(cfg.sigma_offset).into());
    r.param("seed", cfg.seed.into());
    for c in &results {
        r.check(c.family.name(), c.passed, c.metric, c.threshold, &c.detail);
        eprintln!(
            "{:<14} {}  {:>10.3e} (limit {:.0e})  {}",
            c.family.name(),
            if c.passed { "PASS" } else { "FAIL" },
            c.metric,
            c.threshold,
            c.detail
        );
    }
    if output.format == Format::Csv {
        r.results = r.checks.clone();
    }
    write(
        &r,
        output,
        &["name", "passed", "metric", "threshold", "detail"],
    )?;
    let failed: Vec<&str> = results
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.family.name())
        .collect();
    if failed.is_empty() {
        Ok(true)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(false)
    }
}
