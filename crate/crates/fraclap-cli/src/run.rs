//! Command dispatch and CSV report emission.
//!
//! Every report is a UTF-8 CSV with two `#` header comments: a title line
//! and the full resolved config as JSON.  Complex columns are split into
//! `_re`/`_im`; floats print in shortest round-trip form.  Grid rows are
//! computed in parallel (input order is preserved by the map helpers) and
//! written by grid index, so files are deterministic for a given config.

use std::fmt::Write as _;
use std::path::Path;

use clap::Parser;
use fraclap_core::laplace::{probe_asymptotics, verify_theorem, LaplaceQuery, Regime};
use fraclap_core::mellin::ContourConfig;
use fraclap_core::operators::{
    eval_i, eval_j, kernel_ki, kernel_kj, ki_h_spec, kj_h_spec, power_image_i, power_image_j,
};
use fraclap_core::{par, Complex64};

use crate::config::{resolve, Cli, CommandKind, Cx, RunConfig, SideArg, WhichArg};
use crate::CliError;

pub fn main_impl() -> Result<(), CliError> {
    let cli = Cli::parse();
    init_threads()?;
    let (kind, flags) = cli.command.split();
    let (cfg, out) = resolve(kind, flags)?;
    let report = execute(&cfg)?;
    emit(&cfg, out.as_deref(), &report)
}

/// `FRACLAP_THREADS` caps the worker pool; 0 (or unset) keeps automatic
/// sizing.  Sequential builds still validate the value, then ignore it.
fn init_threads() -> Result<(), CliError> {
    let Some(raw) = std::env::var_os("FRACLAP_THREADS") else {
        return Ok(());
    };
    let raw = raw.to_string_lossy();
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Validation(format!(
            "FRACLAP_THREADS must be a non-negative integer (0 = auto), got {raw:?}"
        ))
    })?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

struct Report {
    header: &'static str,
    rows: Vec<String>,
    summary: Vec<String>,
}

fn side_name(side: SideArg) -> &'static str {
    match side {
        SideArg::I => "I",
        SideArg::J => "J",
    }
}

fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::ZeroPlus => "zero-plus",
        Regime::Infinity => "infinity",
    }
}

fn grid_rows(xs: &[f64], vals: &[Complex64]) -> Vec<String> {
    xs.iter()
        .zip(vals)
        .enumerate()
        .map(|(i, (x, v))| format!("{i},{x},{},{}", v.re, v.im))
        .collect()
}

fn grid_summary(cfg: &RunConfig, what: String) -> Vec<String> {
    vec![format!(
        "{what}: {} points on [{}, {}]",
        cfg.x_count, cfg.x_start, cfg.x_stop
    )]
}

fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.operator_params()?;
    let lambda = cfg.lambda.0;
    let s = cfg.s.0;
    let contour = ContourConfig::default();
    match cfg.command {
        CommandKind::EvalPower => {
            let image = match cfg.side {
                SideArg::I => power_image_i(&params, lambda),
                SideArg::J => power_image_j(&params, lambda),
            }
            .map_err(CliError::from_core)?;
            let xs = cfg.grid();
            let vals = par::map(&xs, |&x| image.eval(x));
            Ok(Report {
                header: "index,x,value_re,value_im",
                rows: grid_rows(&xs, &vals),
                summary: grid_summary(
                    cfg,
                    format!("image of x^({}) under side {}", cfg.lambda, side_name(cfg.side)),
                ),
            })
        }
        CommandKind::EvalOperator => {
            let phi = cfg.phi()?;
            let xs = cfg.grid();
            let vals = par::try_map(&xs, |&x| match cfg.side {
                SideArg::I => eval_i(&params, &phi, x, cfg.tol),
                SideArg::J => eval_j(&params, &phi, x, cfg.tol),
            })
            .map_err(CliError::from_core)?;
            Ok(Report {
                header: "index,x,value_re,value_im",
                rows: grid_rows(&xs, &vals),
                summary: grid_summary(
                    cfg,
                    format!(
                        "side {} applied to {} x^({}) e^(-{} x)",
                        side_name(cfg.side),
                        cfg.phi_c,
                        cfg.phi_p,
                        cfg.phi_q
                    ),
                ),
            })
        }
        CommandKind::Kernel => {
            let xs = cfg.grid();
            let vals = par::try_map(&xs, |&x| {
                match cfg.which {
                    WhichArg::KI => kernel_ki(&params, lambda, s, x, &contour),
                    WhichArg::KJ => kernel_kj(&params, lambda, s, x, &contour),
                }
                .map(|sv| sv.value())
            })
            .map_err(CliError::from_core)?;
            let name = match cfg.which {
                WhichArg::KI => "K_I",
                WhichArg::KJ => "K_J",
            };
            Ok(Report {
                header: "index,x,value_re,value_im",
                rows: grid_rows(&xs, &vals),
                summary: grid_summary(cfg, format!("{name} at s = {}", cfg.s)),
            })
        }
        CommandKind::Verify => {
            let query = LaplaceQuery {
                params,
                lambda,
                s,
                phi: cfg.phi()?,
                side: cfg.side.side(),
            };
            let r = verify_theorem(&query).map_err(CliError::from_core)?;
            Ok(Report {
                header: "lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,lhs_cost,rhs_cost",
                rows: vec![format!(
                    "{},{},{},{},{},{},{},{}",
                    r.lhs.re,
                    r.lhs.im,
                    r.rhs.re,
                    r.rhs.im,
                    r.abs_err,
                    r.rel_err,
                    r.lhs_quadrature_cost,
                    r.rhs_quadrature_cost
                )],
                summary: vec![
                    format!(
                        "side {}: rel err {:.3e}, abs err {:.3e}",
                        side_name(cfg.side),
                        r.rel_err,
                        r.abs_err
                    ),
                    format!("lhs = {}, rhs = {}", Cx(r.lhs), Cx(r.rhs)),
                    format!(
                        "outer integrand evaluations: {} lhs, {} rhs",
                        r.lhs_quadrature_cost, r.rhs_quadrature_cost
                    ),
                ],
            })
        }
        CommandKind::Indices => {
            let mut rows = Vec::new();
            let mut summary = Vec::new();
            for k in 0..=params.order() {
                let spec = match cfg.which {
                    WhichArg::KI => ki_h_spec(&params, lambda, k),
                    WhichArg::KJ => kj_h_spec(&params, lambda, k),
                }
                .map_err(CliError::from_core)?;
                let ix = spec.indices();
                rows.push(format!(
                    "{k},{},{},{},{},{},{}",
                    ix.delta, ix.a_star, ix.a1_star, ix.delta_star, ix.mu_star.re, ix.mu_star.im
                ));
                summary.push(format!(
                    "k={k}: Delta={}, a*={}, a1*={}, delta*={}, mu*={}",
                    ix.delta,
                    ix.a_star,
                    ix.a1_star,
                    ix.delta_star,
                    Cx(ix.mu_star)
                ));
            }
            Ok(Report {
                header: "k,delta,a_star,a1_star,delta_star,mu_star_re,mu_star_im",
                rows,
                summary,
            })
        }
        CommandKind::Asymptotics => {
            let side = cfg.which.side();
            let mut rows = Vec::new();
            let mut summary = Vec::new();
            for regime in [Regime::ZeroPlus, Regime::Infinity] {
                let est = probe_asymptotics(&params, lambda, s, side, regime)
                    .map_err(CliError::from_core)?;
                let rho = est
                    .rho_values
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(";");
                rows.push(format!(
                    "{},{},{},{},{},{rho}",
                    regime_name(regime),
                    est.fitted_rate,
                    est.target_rate,
                    est.window.0,
                    est.window.1
                ));
                summary.push(format!(
                    "{}: fitted rate {:.6}, predicted {:.6} (window [{}, {}])",
                    regime_name(regime),
                    est.fitted_rate,
                    est.target_rate,
                    est.window.0,
                    est.window.1
                ));
            }
            Ok(Report {
                header: "regime,fitted_rate,target_rate,window_lo,window_hi,rho",
                rows,
                summary,
            })
        }
    }
}

fn emit(cfg: &RunConfig, out: Option<&Path>, report: &Report) -> Result<(), CliError> {
    let mut text = String::new();
    writeln!(text, "# fraclap {} report", cfg.command.name()).unwrap();
    writeln!(
        text,
        "# config: {}",
        serde_json::to_string(cfg).expect("config serializes")
    )
    .unwrap();
    writeln!(text, "{}", report.header).unwrap();
    for row in &report.rows {
        writeln!(text, "{row}").unwrap();
    }
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            for line in &report.summary {
                println!("{line}");
            }
            println!("report: {}", path.display());
        }
        None => {
            print!("{text}");
            for line in &report.summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}
