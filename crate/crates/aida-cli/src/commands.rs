//! Subcommand implementations.

use crate::cli::{OptimizeArgs, StabilityArgs, SuiteArgs, SweepArgs};
use crate::csvio::{self, fmt_real};
use aida::config::{AidaConfig, EpsMode};
use aida::stability::{analytic_boundary_eta, analyze, HessianSpectrum};
use aida::trajectory::{min_grad_norm, steps_to_grad_threshold, TrajectoryRecord};
use aida::{problems, Error, Problem};
use std::fmt::Write as _;
use std::path::Path;

/// Failure modes mapped to process exit codes: usage 1, numeric 2,
/// unsupported analysis regime 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Unsupported(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported analysis regime: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<(), CliError>;

fn emit(path: Option<&Path>, content: &str) -> CliResult {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(p, content)?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad {what} value {s:?}: {e}")))
        })
        .collect()
}

fn config_comments(problem: &str, cfg: &AidaConfig, steps: usize, log_every: usize) -> Vec<String> {
    vec![
        format!("problem={problem}"),
        format!(
            "p={} q={} beta1={} beta2={} lr={:e} eps={:e} mu={:e} eps_mode={}",
            cfg.p, cfg.q, cfg.beta1, cfg.beta2, cfg.eta, cfg.epsilon, cfg.mu, cfg.eps_mode
        ),
        format!("steps={steps} log_every={log_every}"),
    ]
}

fn resolve_problem(
    name: &str,
    gamma: Option<f64>,
    himmelblau_classical: bool,
) -> Result<Problem, CliError> {
    if let Some(c) = gamma {
        if name != "quad" {
            return Err(CliError::Usage(
                "--gamma only applies to the quad problem".into(),
            ));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(CliError::Usage(format!("--gamma must be > 0, got {c}")));
        }
        return Ok(problems::quad(c));
    }
    if name == "fun1" && himmelblau_classical {
        return Ok(problems::extended_himmelblau(true));
    }
    problems::get_problem(name).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn optimize(args: &OptimizeArgs) -> CliResult {
    let mut problem = resolve_problem(&args.problem, args.gamma, args.himmelblau_classical)?;
    if let Some(raw) = &args.x0 {
        let values = parse_list(raw, "x0")?;
        problem.x0 = if values.len() == 1 {
            vec![values[0]; problem.n]
        } else if values.len() == problem.n {
            values
        } else {
            return Err(CliError::Usage(format!(
                "--x0 needs 1 or {} values, got {}",
                problem.n,
                values.len()
            )));
        };
    }
    let cfg = args.hyper.to_config();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be >= 1".into()));
    }
    let log_every = args
        .log_every
        .unwrap_or(if args.problem == "quad" { 1 } else { 100 });
    if log_every == 0 {
        return Err(CliError::Usage("--log-every must be >= 1".into()));
    }

    let mut comments = config_comments(&problem.name, &cfg, args.steps, log_every);
    if problem.n == 1 {
        comments.push(format!("x0={}", fmt_real(problem.x0[0])));
    }

    match aida::run(&problem, &cfg, args.steps, log_every) {
        Ok(records) => {
            emit(
                args.out.as_deref(),
                &csvio::render_trajectory(&records, &comments, None),
            )?;
            Ok(())
        }
        Err(failure) => {
            let marker = format!("{} at step {}", failure.error, failure.step);
            emit(
                args.out.as_deref(),
                &csvio::render_trajectory(&failure.partial, &comments, Some(&marker)),
            )?;
            Err(CliError::Numeric(marker))
        }
    }
}

fn parse_phi_range(range: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--sweep-phi expects LO:HI:STEP, got {range:?}"
        )));
    }
    let nums = parse_list(&parts.join(","), "sweep-phi")?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0 && hi >= lo) {
        return Err(CliError::Usage(
            "--sweep-phi needs hi >= lo, step > 0".into(),
        ));
    }
    let count = ((hi - lo) / step).round() as usize;
    Ok((0..=count)
        .map(|k| lo + step * k as f64)
        .filter(|&phi| phi <= hi + 0.5 * step)
        .collect())
}

fn spectrum_from_args(args: &StabilityArgs) -> Result<HessianSpectrum, CliError> {
    if let Some(list) = &args.gamma {
        let gammas = parse_list(list, "gamma")?;
        return HessianSpectrum::new(gammas).map_err(|e| CliError::Usage(e.to_string()));
    }
    let Some(name) = &args.problem else {
        if args.hyper.q > 1.0 {
            // The q > 1 report does not depend on the Hessian spectrum.
            return Ok(HessianSpectrum::new(vec![1.0]).expect("positive"));
        }
        return Err(CliError::Usage(
            "supply --gamma or --problem with --at-opt".into(),
        ));
    };
    if !args.at_opt {
        return Err(CliError::Usage(
            "--problem requires --at-opt to pick the expansion point".into(),
        ));
    }
    let problem = problems::get_problem(name).map_err(|e| CliError::Usage(e.to_string()))?;
    let Some(xstar) = problem.xstar.clone() else {
        return Err(CliError::Usage(format!(
            "{name} has no registered optimum; supply --gamma instead"
        )));
    };
    let hessian =
        problems::fd_hessian(&problem, &xstar, 1e-4).map_err(|e| CliError::Usage(e.to_string()))?;
    let gammas =
        aida::linalg::symmetric_eigs(&hessian).map_err(|e| CliError::Usage(e.to_string()))?;
    HessianSpectrum::new(gammas).map_err(|e| {
        CliError::Usage(format!(
            "hessian at the optimum is not positive definite: {e}"
        ))
    })
}

fn fmt_complex(z: aida::Complex64) -> String {
    format!(
        "{}{}{}i",
        fmt_real(z.re),
        if z.im < 0.0 { "-" } else { "+" },
        fmt_real(z.im.abs())
    )
}

pub fn stability(args: &StabilityArgs) -> CliResult {
    if let Some(range) = &args.sweep_phi {
        let phis = parse_phi_range(range)?;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# phi sweep: beta1={} mu={:e}",
            args.hyper.beta1, args.hyper.mu
        );
        let _ = writeln!(out, "phi,abs_lambda2,abs_lambda3");
        for phi in phis {
            let (l2, l3) =
                aida::stability::adamw_eigs_from_phi(args.hyper.beta1, args.hyper.mu, phi);
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_real(phi),
                fmt_real(l2.norm()),
                fmt_real(l3.norm())
            );
        }
        return emit(args.out.as_deref(), &out);
    }

    let spectrum = spectrum_from_args(args)?;
    let cfg = args.hyper.to_config();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = analyze(&spectrum, &cfg).map_err(|e| match e {
        Error::UnsupportedRegime(msg) => CliError::Unsupported(msg),
        other => CliError::Usage(other.to_string()),
    })?;

    let join = |v: &[f64]| v.iter().map(|&x| fmt_real(x)).collect::<Vec<_>>().join(",");
    println!("gammas={}", join(spectrum.gammas()));
    println!("phis={}", join(&report.phis));
    println!(
        "lambdas={}",
        report
            .lambdas
            .iter()
            .map(|&z| fmt_complex(z))
            .collect::<Vec<_>>()
            .join(";")
    );
    println!("rho={}", fmt_real(report.rho));
    let opt_bool = |v: Option<bool>| match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "n/a",
    };
    println!("cond_adamw_holds={}", opt_bool(report.cond_adamw_holds));
    println!("cond_aida_holds={}", opt_bool(report.cond_aida_holds));
    println!("verdict={}", report.verdict);
    Ok(())
}

fn parse_setups(raw: &[String]) -> Result<Vec<(f64, f64)>, CliError> {
    if raw.is_empty() {
        return Ok(vec![(2.0, 1.0), (2.0, 2.0), (1.0, 2.0)]);
    }
    raw.iter()
        .map(|s| {
            let nums = parse_list(s, "setup")?;
            if nums.len() != 2 {
                return Err(CliError::Usage(format!(
                    "--setups expects \"P,Q\", got {s:?}"
                )));
            }
            Ok((nums[0], nums[1]))
        })
        .collect()
}

fn setup_tag(p: f64, q: f64) -> String {
    let trim = |v: f64| {
        if v.fract() == 0.0 {
            format!("{}", v as i64)
        } else {
            format!("{v}")
        }
    };
    format!("p{}q{}", trim(p), trim(q))
}

/// Parameters of the ten-problem benchmark runs.
fn suite_config(p: f64, q: f64) -> AidaConfig {
    AidaConfig {
        beta1: 0.9,
        beta2: 0.99,
        eta: 1e-3,
        epsilon: 1e-50,
        mu: 0.0,
        p,
        q,
        eps_mode: EpsMode::InsidePower,
    }
}

pub fn suite(args: &SuiteArgs) -> CliResult {
    if args.steps == 0 || args.log_every == 0 {
        return Err(CliError::Usage(
            "--steps and --log-every must be >= 1".into(),
        ));
    }
    let setups = parse_setups(&args.setups)?;
    std::fs::create_dir_all(&args.out_dir)?;

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "# benchmark suite: beta1=0.9 beta2=0.99 mu=0 lr=0.001 eps=1e-50 eps_mode=inside"
    );
    let _ = writeln!(
        summary,
        "# steps={} log_every={} threshold_ratio={}",
        args.steps, args.log_every, args.threshold
    );
    let _ = writeln!(
        summary,
        "problem,p,q,final_grad_norm,min_grad_norm,steps_to_threshold"
    );

    for name in problems::benchmark_names() {
        let problem = problems::get_problem(name).expect("registered problem");
        for &(p, q) in &setups {
            let cfg = suite_config(p, q);
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let comments = config_comments(name, &cfg, args.steps, args.log_every);
            let path = args.out_dir.join(format!("{name}_{}.csv", setup_tag(p, q)));
            let (records, failure) = match aida::run(&problem, &cfg, args.steps, args.log_every) {
                Ok(records) => (records, None),
                Err(f) => {
                    let marker = format!("{} at step {}", f.error, f.step);
                    (f.partial.clone(), Some(marker))
                }
            };
            csvio::write_trajectory(&path, &records, &comments, failure.as_deref())?;

            if let Some(marker) = &failure {
                let _ = writeln!(
                    summary,
                    "# run failed: {name} {}: {marker}",
                    setup_tag(p, q)
                );
            }
            let final_g = records
                .last()
                .map(|r| fmt_real(r.grad_norm))
                .unwrap_or_default();
            let min_g = if records.is_empty() {
                String::new()
            } else {
                fmt_real(min_grad_norm(&records))
            };
            let t = match steps_to_grad_threshold(&records, args.threshold) {
                Some(step) => step.to_string(),
                None => String::new(),
            };
            let _ = writeln!(summary, "{name},{p},{q},{final_g},{min_g},{t}");
        }
    }
    std::fs::write(args.out_dir.join("summary.csv"), summary)?;
    Ok(())
}

/// Merges same-cadence trajectories into a multi-column distance table.
fn panel_table(header: &str, runs: &[&[TrajectoryRecord]]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    let rows = runs.iter().map(|r| r.len()).min().unwrap_or(0);
    for i in 0..rows {
        let mut line = runs[0][i].step.to_string();
        for run in runs {
            let dist = run[i].dist_to_opt.expect("quad has a known optimum");
            line.push(',');
            line.push_str(&fmt_real(dist));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn sweep(args: &SweepArgs) -> CliResult {
    if args.steps == 0 || args.log_every == 0 {
        return Err(CliError::Usage(
            "--steps and --log-every must be >= 1".into(),
        ));
    }
    let eps_list = parse_list(&args.eps_list, "eps-list")?;
    std::fs::create_dir_all(&args.out_dir)?;
    let problem = problems::quad(10.0);
    let spectrum = HessianSpectrum::new(vec![10.0]).expect("positive curvature");

    let run_or_partial = |cfg: &AidaConfig| -> Vec<TrajectoryRecord> {
        match aida::run(&problem, cfg, args.steps, args.log_every) {
            Ok(records) => records,
            Err(f) => f.partial,
        }
    };

    match args.figure {
        2 => {
            // Shared panel parameters; per-panel eta values derive from
            // the stability boundary unless overridden.
            let base = AidaConfig {
                beta1: 0.9,
                beta2: 0.999,
                eta: 1.0,
                epsilon: 1e-10,
                mu: 1e-10,
                p: 2.0,
                q: 1.0,
                eps_mode: EpsMode::InsidePower,
            };
            let eta_override = match &args.eta_list {
                Some(list) => Some(parse_list(list, "eta-list")?),
                None => None,
            };
            for &eps in &eps_list {
                let panel_cfg = AidaConfig {
                    epsilon: eps,
                    ..base
                };
                let etas = eta_override.clone().unwrap_or_else(|| {
                    let boundary = analytic_boundary_eta(&spectrum, &panel_cfg);
                    vec![0.25 * boundary, 10.0 * boundary]
                });
                for eta in etas {
                    let mut runs = Vec::new();
                    for q in [1.0, 2.0] {
                        let cfg = AidaConfig {
                            eta,
                            q,
                            ..panel_cfg
                        };
                        runs.push(run_or_partial(&cfg));
                    }
                    let mut out = String::new();
                    let _ = writeln!(
                        out,
                        "# quad gamma=10 x0=1e-10 beta1=0.9 beta2=0.999 mu=1e-10 eps_mode=inside"
                    );
                    let _ = writeln!(
                        out,
                        "# panel eps={} eta={} (eta derived from the stability boundary)",
                        fmt_real(eps),
                        fmt_real(eta)
                    );
                    out.push_str(&panel_table(
                        "step,dist_p2q1,dist_p2q2",
                        &[&runs[0], &runs[1]],
                    ));
                    let path = args
                        .out_dir
                        .join(format!("fig2_eps{eps:e}_eta{eta:.3e}.csv"));
                    std::fs::write(path, out)?;
                }
            }
            Ok(())
        }
        3 => {
            let beta2_list = parse_list(&args.beta2_list, "beta2-list")?;
            let mu_list = parse_list(&args.mu_list, "mu-list")?;
            for &beta2 in &beta2_list {
                for &eps in &eps_list {
                    for &mu in &mu_list {
                        let c22 = AidaConfig {
                            beta1: 0.9,
                            beta2,
                            eta: 1e-3,
                            epsilon: eps,
                            mu,
                            p: 2.0,
                            q: 2.0,
                            eps_mode: EpsMode::InsidePower,
                        };
                        let c12 = AidaConfig {
                            p: 1.0,
                            q: 2.0,
                            eps_mode: EpsMode::OutsidePower,
                            ..c22
                        };
                        let r22 = run_or_partial(&c22);
                        let r12 = run_or_partial(&c12);
                        let mut out = String::new();
                        let _ = writeln!(
                            out,
                            "# quad gamma=10 x0=1e-10 beta1=0.9 lr=1e-3; \
                             (2,2) inside, (1,2) outside"
                        );
                        let _ = writeln!(
                            out,
                            "# panel beta2={beta2} eps={} mu={} (default grid values)",
                            fmt_real(eps),
                            fmt_real(mu)
                        );
                        out.push_str(&panel_table("step,dist_p2q2,dist_p1q2", &[&r22, &r12]));
                        let path = args
                            .out_dir
                            .join(format!("fig3_beta2{beta2}_eps{eps:e}_mu{mu:e}.csv"));
                        std::fs::write(path, out)?;
                    }
                }
            }
            Ok(())
        }
        other => Err(CliError::Usage(format!(
            "--figure must be 2 or 3, got {other}"
        ))),
    }
}
