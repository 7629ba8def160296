//! Command-line front end. Every command writes its artifacts and a
//! `manifest.json` into the output directory.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::asymptotics::{coppel_envelope, log_envelope, tail_audit};
use crate::energy::{compute_h, energy_identity, kernel_simplicity, theta};
use crate::error::{arg, Error, Result};
use crate::io::{write_columns, write_json, OutDir};
use crate::model::Model;
use crate::operators::{assemble, k_grid, s_curves, weight_plan, write_borders, WeightPlan};
use crate::profile::{compute_profile, estimate_c_star, FrontProfile, GridSpec, ProfileOpts, ShootOpts};
use crate::spectra::{regularization_sweep, spectrum_report, Verdict, TOL_STAB};
use crate::Complex64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_FRONT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "degenerate-fronts",
    version,
    about = "Fronts of degenerate Fisher-KPP equations and their spectra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the front profile.
    Profile(Common),
    /// Estimate the minimal speed by bisection.
    Cstar {
        #[command(flatten)]
        common: Common,
        /// Bracket `lo,hi`.
        #[arg(long, default_value = "0.1,3.0")]
        bracket: String,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Eigenvalues of the discretised operator and a stability verdict.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weight: WeightArgs,
        /// Also write the matrix in MatrixMarket format.
        #[arg(long)]
        export_matrix: bool,
    },
    /// Analytic border curves.
    Borders {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long, default_value_t = 20.0)]
        k_max: f64,
        #[arg(long, default_value_t = 2001)]
        k_points: usize,
    },
    /// Admissible exponential weights.
    WeightPlan(Common),
    /// Energy identity for `u = phi_x`.
    Energy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda_im: f64,
        /// Window `xl,xr`; defaults to the central 60% of the grid.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Decay of the tails against both asymptotic regimes.
    TailAudit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Drift of the rightmost localized eigenvalues as `eps -> 0`.
    RegSweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weight: WeightArgs,
        /// Number of tracked eigenvalues.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON run configuration; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub x_minus: Option<f64>,
    #[arg(long)]
    pub x_plus: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol_stab: Option<f64>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    /// Weight `a`, or `auto` for the midpoint of the admissible interval.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Comma-separated regularisation parameters.
    #[arg(long)]
    pub eps: Option<String>,
}

/// Run configuration as read from a JSON file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub c: Option<f64>,
    pub a: Option<WeightChoice>,
    pub eps: Option<Vec<f64>>,
    pub h: Option<f64>,
    pub x_minus: Option<f64>,
    pub x_plus: Option<f64>,
    pub out: Option<PathBuf>,
    pub tol_stab: Option<f64>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightChoice {
    Value(f64),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl std::str::FromStr for WeightChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(WeightChoice::Auto(AutoTag::Auto))
        } else {
            s.trim()
                .parse()
                .map(WeightChoice::Value)
                .map_err(|_| Error::Argument(format!("bad weight {s:?}")))
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Argument(format!("bad number {t:?} in {s:?}")))
        })
        .collect()
}

impl RunConfig {
    fn merge(common: &Common, weight: Option<&WeightArgs>) -> Result<Self> {
        let file: RunConfig = match &common.config {
            Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            None => RunConfig::default(),
        };
        let (a, eps) = match weight {
            Some(w) => (
                w.a.as_deref().map(str::parse).transpose()?,
                w.eps.as_deref().map(parse_list).transpose()?,
            ),
            None => (None, None),
        };
        Ok(RunConfig {
            alpha: common.alpha.or(file.alpha),
            beta: common.beta.or(file.beta),
            c: common.c.or(file.c),
            a: a.or(file.a),
            eps: eps.or(file.eps),
            h: common.h.or(file.h),
            x_minus: common.x_minus.or(file.x_minus),
            x_plus: common.x_plus.or(file.x_plus),
            out: common.out.clone().or(file.out),
            tol_stab: common.tol_stab.or(file.tol_stab),
            jobs: common.jobs.or(file.jobs),
        })
    }

    pub fn model(&self) -> Result<Model> {
        let (alpha, beta) = (self.alpha.unwrap_or(1.0), self.beta.unwrap_or(0.0));
        if !(alpha >= 0.0 && beta >= 0.0) {
            return arg(format!("alpha and beta must be >= 0, got {alpha}, {beta}"));
        }
        Ok(Model::linear_quadratic(alpha, beta))
    }

    pub fn speed(&self) -> f64 {
        self.c.unwrap_or(1.0)
    }

    /// Explicit grid, or the automatic truncation with any given side kept.
    pub fn grid(&self, model: &Model) -> Result<GridSpec> {
        let h = self.h.unwrap_or(0.04);
        let auto = GridSpec::auto(model, self.speed(), h)?;
        GridSpec::new(
            h,
            self.x_minus.unwrap_or(auto.x_minus),
            self.x_plus.unwrap_or(auto.x_plus),
        )
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

/// Writes the hypothesis report and fails on violations.
fn checked_model(cfg: &RunConfig, out: &mut OutDir) -> Result<Model> {
    let model = cfg.model()?;
    let report = model.check_hypotheses(101)?;
    write_json(&out.file("hypotheses.json"), &report)?;
    if !report.passed {
        let list: Vec<String> = report
            .violations
            .iter()
            .map(|v| format!("{:?} at u = {} (observed {})", v.hypothesis, v.u, v.observed))
            .collect();
        return Err(Error::HypothesisViolated(list.join("; ")));
    }
    Ok(model)
}

fn c_star_for(model: &Model) -> Result<f64> {
    match model.known_c_star() {
        Some(k) if !k.approximate => Ok(k.value),
        _ => estimate_c_star(model, (0.05, 5.0), 1e-5, &ShootOpts::default()),
    }
}

fn profile_for(cfg: &RunConfig, model: &Model) -> Result<FrontProfile> {
    let c = cfg.speed();
    let grid = cfg.grid(model)?;
    compute_profile(model, c, &grid, &ShootOpts::default(), &ProfileOpts::default()).map_err(|e| match e {
        Error::NoFront { c, classification } => {
            let hint = match model.known_c_star() {
                Some(k) if c < k.value => format!(" (c < c* = {:.5})", k.value),
                _ => String::new(),
            };
            Error::NoFront {
                c,
                classification: format!("{classification}{hint}"),
            }
        }
        other => other,
    })
}

fn resolve_weight(cfg: &RunConfig, plan: &WeightPlan) -> (f64, bool) {
    match cfg.a {
        Some(WeightChoice::Value(a)) => (a, false),
        Some(WeightChoice::Auto(_)) => match plan.recommended_a {
            Some(a) => (a, false),
            None => (0.0, true),
        },
        None => (0.0, false),
    }
}

/// Weight for commands that do not report the plan; `auto` with an empty
/// plan falls back to `a = 0`.
fn chosen_weight(cfg: &RunConfig, model: &Model) -> Result<f64> {
    match cfg.a {
        Some(WeightChoice::Auto(_)) => Ok(resolve_weight(cfg, &weight_plan(model, cfg.speed(), c_star_for(model)?)?).0),
        Some(WeightChoice::Value(a)) => Ok(a),
        None => Ok(0.0),
    }
}

fn config_json(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null)
}

type Outcome = (OutDir, RunConfig, serde_json::Value);

fn cmd_profile(common: &Common) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, None)?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let p = profile_for(&cfg, &model)?;
    p.write_csv(&out.file("profile.csv"))?;
    p.write_sidecar(&out.file("profile.json"))?;
    let res = crate::profile::sup_norm(&crate::profile::profile_residual(&p, &model));
    println!(
        "profile: c = {}, N = {}, h = {}, residual sup = {res:.3e}",
        p.c,
        p.len(),
        p.h
    );
    Ok((out, cfg, json!({ "n": p.len(), "residual_sup": res })))
}

fn cmd_cstar(common: &Common, bracket: &str, tol: f64) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, None)?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let b = parse_list(bracket)?;
    if b.len() != 2 {
        return arg(format!("bracket needs two values, got {bracket:?}"));
    }
    let est = estimate_c_star(&model, (b[0], b[1]), tol, &ShootOpts::default())?;
    let known = model.known_c_star();
    let summary = json!({ "c_star": est, "tol": tol, "bracket": b, "known": known });
    write_json(&out.file("cstar.json"), &summary)?;
    match known {
        Some(k) => println!(
            "c* = {est:.6} (closed form {:.6}{})",
            k.value,
            if k.approximate { ", approximate" } else { "" }
        ),
        None => println!("c* = {est:.6}"),
    }
    Ok((out, cfg, summary))
}

fn cmd_weight_plan(common: &Common) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, None)?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let plan = weight_plan(&model, cfg.speed(), c_star_for(&model)?)?;
    write_json(&out.file("weight_plan.json"), &plan)?;
    if plan.empty {
        println!("weight plan: empty (c = {} <= threshold {:.5})", plan.c, plan.threshold);
    } else {
        println!(
            "weight plan: a in ({:.5}, {:.5}), recommended a = {:.5}",
            plan.a_lower,
            plan.a_upper,
            plan.recommended_a.unwrap_or(f64::NAN)
        );
    }
    Ok((out, cfg, serde_json::to_value(plan)?))
}

fn single_eps(cfg: &RunConfig) -> Result<f64> {
    match cfg.eps.as_deref() {
        None => Ok(0.0),
        Some([e]) => Ok(*e),
        Some(list) => arg(format!("expected a single eps, got {list:?}")),
    }
}

fn cmd_spectrum(common: &Common, weight: &WeightArgs, export: bool) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, Some(weight))?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let c = cfg.speed();
    let plan = weight_plan(&model, c, c_star_for(&model)?)?;
    write_json(&out.file("weight_plan.json"), &plan)?;
    let (a, all_weights_fail) = resolve_weight(&cfg, &plan);
    let eps = single_eps(&cfg)?;
    let p = profile_for(&cfg, &model)?;
    let report = spectrum_report(&p, &model, eps, a, cfg.tol_stab.unwrap_or(TOL_STAB))?;
    report.write_json(&out.file("spectrum.json"))?;
    report.write_csv(&out.file("eigenvalues.csv"))?;
    let k = k_grid(20.0, 2001);
    let (sp, sm) = s_curves(&model, c, a, &k);
    write_borders(&out.file("borders.csv"), &k, &sp, &sm)?;
    if export {
        assemble(&p, &model, eps, a)?.write_matrix_market(&out.file("operator.mtx"))?;
    }
    let verdict = if all_weights_fail {
        "unstable-in-all-weights".to_string()
    } else {
        format!("{:?}", report.verdict).to_lowercase()
    };
    println!(
        "spectrum: a = {a:.5}, eps = {eps}, N = {}, verdict {verdict}, rightmost {:.6}, border {:.6}",
        report.n,
        report.rightmost_any.map_or(f64::NAN, |z| z.re),
        report.border_bound
    );
    let summary = json!({
        "a": a,
        "eps": eps,
        "verdict": verdict,
        "stable": report.verdict == Verdict::Stable,
        "rightmost": report.rightmost_any,
        "rightmost_delocalized": report.rightmost_delocalized,
        "border_bound": report.border_bound,
        "weight_plan_empty": plan.empty,
    });
    Ok((out, cfg, summary))
}

fn cmd_borders(common: &Common, weight: &WeightArgs, k_max: f64, k_points: usize) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, Some(weight))?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let c = cfg.speed();
    let a = chosen_weight(&cfg, &model)?;
    let eps = single_eps(&cfg)?;
    if k_points == 0 {
        return arg("k_points must be positive");
    }
    let k = k_grid(k_max, k_points);
    let plus = crate::operators::dispersion_curve(&model, c, eps, a, crate::operators::Side::Plus, &k);
    let minus = crate::operators::dispersion_curve(&model, c, eps, a, crate::operators::Side::Minus, &k);
    write_borders(&out.file("borders.csv"), &k, &plus, &minus)?;
    let bound = crate::operators::consistent_splitting_bound(&model, c, eps, a);
    println!("borders: a = {a:.5}, eps = {eps}, rightmost Re = {bound:.6}");
    Ok((out, cfg, json!({ "a": a, "eps": eps, "rightmost_re": bound })))
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    match parse_list(s)?.as_slice() {
        [l, r] => Ok((*l, *r)),
        _ => arg(format!("window needs two values, got {s:?}")),
    }
}

fn cmd_energy(common: &Common, lambda: Complex64, window: Option<&str>) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, None)?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let p = profile_for(&cfg, &model)?;
    let win = match window {
        Some(s) => parse_window(s)?,
        None => {
            let (lo, hi) = (p.x(0), p.x_plus());
            let pad = 0.2 * (hi - lo);
            (lo + pad, hi - pad)
        }
    };
    let u: Vec<Complex64> = p.phi_x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let report = energy_identity(&u, lambda, &p, &model, win, p.anchor)?;
    write_json(&out.file("energy.json"), &report)?;
    let th = theta(&p, &model, p.anchor)?;
    let hh = compute_h(&p, &model);
    let psi: Vec<f64> = th.iter().zip(&p.phi_x).map(|(t, v)| (-t).exp() * v).collect();
    write_columns(
        &out.file("energy_fields.csv"),
        &["x", "theta", "H", "psi"],
        &[&p.xs(), &th, &hh, &psi],
    )?;
    let cv = kernel_simplicity(&u, &p)?;
    println!(
        "energy: lambda = {lambda}, window = ({:.3}, {:.3}){}, lhs = {:.6e}, rhs = {:.6e}, boundary = {:.6e}, relative residual = {:.3e}",
        report.window.0,
        report.window.1,
        if report.shrunk { " (shrunk)" } else { "" },
        report.lhs,
        report.rhs,
        report.boundary_term,
        report.relative_residual
    );
    Ok((
        out,
        cfg,
        json!({ "relative_residual": report.relative_residual, "kernel_cv": cv, "shrunk": report.shrunk }),
    ))
}

fn cmd_tail_audit(common: &Common, weight: &WeightArgs) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, Some(weight))?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let c = cfg.speed();
    let a = chosen_weight(&cfg, &model)?;
    let p = profile_for(&cfg, &model)?;
    let audit = tail_audit(&p, &model, a, None)?;
    write_json(&out.file("tail_audit.json"), &audit)?;
    let (r0, r1) = crate::asymptotics::right_window(&p);
    let xs: Vec<f64> = (r0..=r1).map(|i| p.x(i)).collect();
    let log_phi_x: Vec<f64> = (r0..=r1).map(|i| p.phi_x[i].abs().ln()).collect();
    let th = theta(&p, &model, p.anchor)?;
    let env: Vec<f64> = (r0..=r1).map(|i| th[i] + log_envelope(&model, c, p.x(i))).collect();
    let zeta = coppel_envelope(&model, c, &xs)?;
    let single: Vec<f64> = xs
        .iter()
        .map(|x| log_phi_x[0] - model.fp0() / c * (x - xs[0]))
        .collect();
    write_columns(
        &out.file("tail_curves.csv"),
        &[
            "x",
            "log_abs_phi_x",
            "log_single_exponential",
            "theta_plus_log_zeta",
            "zeta",
        ],
        &[&xs, &log_phi_x, &single, &env, &zeta],
    )?;
    println!(
        "tail audit: left rate {:.6} (eta = {:.6})",
        audit.left.fitted_rate, p.rate_minus
    );
    for s in &audit.right {
        println!(
            "  {:<16} rate {:>9.5} (predicted {:>8.5}) r2 {:.6} {:?}, envelope r2 {:.4}, regime {:?}{}",
            s.name,
            s.report.fitted_rate,
            s.report.predicted_rate,
            s.report.r_squared,
            s.report.classification,
            s.envelope_r2,
            s.regime,
            if s.report.growing { ", growing" } else { "" }
        );
    }
    let summary = json!({
        "left_rate": audit.left.fitted_rate,
        "right": audit.right.iter().map(|s| json!({"name": s.name, "rate": s.report.fitted_rate, "regime": s.regime, "r2": s.regime_r2})).collect::<Vec<_>>(),
    });
    Ok((out, cfg, summary))
}

fn cmd_reg_sweep(common: &Common, weight: &WeightArgs, count: usize) -> Result<Outcome> {
    let cfg = RunConfig::merge(common, Some(weight))?;
    let mut out = OutDir::create(&cfg.out_dir())?;
    let model = checked_model(&cfg, &mut out)?;
    let a = chosen_weight(&cfg, &model)?;
    let eps = cfg.eps.clone().unwrap_or_else(|| vec![1e-1, 1e-2, 1e-3, 1e-4]);
    let p = profile_for(&cfg, &model)?;
    let table = regularization_sweep(&p, &model, a, &eps, count)?;
    write_json(&out.file("drift.json"), &table)?;
    let mut w = csv::Writer::from_path(out.file("drift.csv"))?;
    w.write_record(["eps", "drift", "collision", "translation_drift", "translation_residual"])?;
    for r in &table.rows {
        w.serialize((r.eps, r.drift, r.collision, r.translation_drift, r.translation_residual))?;
    }
    w.flush()?;
    for r in &table.rows {
        println!(
            "eps {:>8.1e}: drift {:.4e}{}, translation drift {:.4e}",
            r.eps,
            r.drift,
            if r.collision { " (collision)" } else { "" },
            r.translation_drift
        );
    }
    match table.slope {
        Some(s) => println!("slope {s:.4}"),
        None => println!("slope unavailable"),
    }
    Ok((out, cfg, json!({ "slope": table.slope, "a": a })))
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Profile(c) | Command::WeightPlan(c) => c,
        Command::Cstar { common, .. }
        | Command::Spectrum { common, .. }
        | Command::Borders { common, .. }
        | Command::Energy { common, .. }
        | Command::TailAudit { common, .. }
        | Command::RegSweep { common, .. } => common,
    }
}

fn name_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Profile(_) => "profile",
        Command::Cstar { .. } => "cstar",
        Command::Spectrum { .. } => "spectrum",
        Command::Borders { .. } => "borders",
        Command::WeightPlan(_) => "weight-plan",
        Command::Energy { .. } => "energy",
        Command::TailAudit { .. } => "tail-audit",
        Command::RegSweep { .. } => "reg-sweep",
    }
}

/// Runs one parsed command and writes its manifest.
pub fn run(cli: &Cli) -> Result<()> {
    let jobs = match &common_of(&cli.command).config {
        Some(_) => RunConfig::merge(common_of(&cli.command), None)?.jobs,
        None => common_of(&cli.command).jobs,
    };
    if let Some(j) = jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let (out, cfg, summary) = match &cli.command {
        Command::Profile(c) => cmd_profile(c)?,
        Command::Cstar { common, bracket, tol } => cmd_cstar(common, bracket, *tol)?,
        Command::Spectrum {
            common,
            weight,
            export_matrix,
        } => cmd_spectrum(common, weight, *export_matrix)?,
        Command::Borders {
            common,
            weight,
            k_max,
            k_points,
        } => cmd_borders(common, weight, *k_max, *k_points)?,
        Command::WeightPlan(c) => cmd_weight_plan(c)?,
        Command::Energy {
            common,
            lambda,
            lambda_im,
            window,
        } => cmd_energy(common, Complex64::new(*lambda, *lambda_im), window.as_deref())?,
        Command::TailAudit { common, weight } => cmd_tail_audit(common, weight)?,
        Command::RegSweep { common, weight, count } => cmd_reg_sweep(common, weight, *count)?,
    };
    out.finish(name_of(&cli.command), config_json(&cfg), summary)?;
    Ok(())
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoFront { .. } => EXIT_NO_FRONT,
        Error::HypothesisViolated(_) => EXIT_HYPOTHESIS,
        Error::Numerical(_) | Error::Integration { .. } | Error::OnFredholmBorder { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
