//! Decay-rate measurements and the Liouville-Green machinery near the
//! degenerate state.
//!
//! An eigenfunction can be written `u = C exp(theta) zeta` where `zeta`
//! solves `zeta'' = F zeta` with `F = lambda/D + rho_x/2 + rho^2/4` and
//! `rho = -c/D - 2 f / (D phi_x)`. As `phi -> 0`, `F phi^2 -> c^2/(4 D'(0)^2)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::energy::theta;
use crate::error::{arg, Error, Result};
use crate::model::Model;
use crate::operators::Side;
use crate::profile::{center_manifold_coeffs, FrontProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    SingleExponential,
    FasterThanExponential,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub side: Side,
    /// Rate of decay towards the far end of `side`; negative means growth.
    pub fitted_rate: f64,
    pub predicted_rate: f64,
    pub r_squared: f64,
    pub classification: DecayClass,
    pub growing: bool,
    /// Rates fitted on consecutive sub-windows.
    pub local_rates: Vec<f64>,
    pub window: (f64, f64),
    /// `2 f'(0) / c`, the exponent of `F` on the right.
    pub beta: f64,
}

const SUBWINDOWS: usize = 8;

fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    (slope, my - slope * mx, r2)
}

/// Least-squares fit of `log samples` against `x` on a tail window.
pub fn fit_decay(xs: &[f64], samples: &[f64], predicted: f64, side: Side) -> Result<DecayReport> {
    if samples.iter().any(|&s| !(s > 0.0)) {
        return arg("decay fit needs strictly positive samples");
    }
    let logs: Vec<f64> = samples.iter().map(|s| s.ln()).collect();
    fit_log_decay(xs, &logs, predicted, side)
}

/// As [`fit_decay`] with the logarithms supplied, for data beyond the range
/// of `f64`.
pub fn fit_log_decay(xs: &[f64], logs: &[f64], predicted: f64, side: Side) -> Result<DecayReport> {
    if xs.is_empty() {
        return arg("empty decay window");
    }
    let span = (xs[xs.len() - 1] - xs[0]).abs();
    if predicted.abs() > 0.0 && span * predicted.abs() < 5.0 - 1e-9 {
        return arg(format!("window spans {:.2} e-foldings, need 5", span * predicted.abs()));
    }
    fit_unchecked(xs, logs, predicted, side)
}

fn fit_unchecked(xs: &[f64], logs: &[f64], predicted: f64, side: Side) -> Result<DecayReport> {
    if xs.len() != logs.len() || xs.len() < 2 * SUBWINDOWS {
        return arg(format!("need at least {} matching samples", 2 * SUBWINDOWS));
    }
    let sign = match side {
        Side::Plus => -1.0,
        Side::Minus => 1.0,
    };
    let (slope, _, r2) = line_fit(xs, logs);
    let fitted_rate = sign * slope;
    let m = xs.len() / SUBWINDOWS;
    // local rates ordered towards the far end of the side
    let mut local_rates: Vec<f64> = (0..SUBWINDOWS)
        .map(|k| {
            let end = if k + 1 == SUBWINDOWS { xs.len() } else { (k + 1) * m };
            sign * line_fit(&xs[k * m..end], &logs[k * m..end]).0
        })
        .collect();
    if side == Side::Minus {
        local_rates.reverse();
    }
    let increasing = local_rates.windows(2).all(|w| w[1] > w[0]);
    let first = local_rates[0];
    let last = local_rates[SUBWINDOWS - 1];
    let classification = if increasing && first > 0.0 && last > 1.2 * first {
        DecayClass::FasterThanExponential
    } else if r2 >= 0.98 {
        DecayClass::SingleExponential
    } else {
        DecayClass::Inconclusive
    };
    Ok(DecayReport {
        side,
        fitted_rate,
        predicted_rate: predicted,
        r_squared: r2,
        classification,
        growing: fitted_rate < 0.0,
        local_rates,
        window: (xs[0].min(xs[xs.len() - 1]), xs[0].max(xs[xs.len() - 1])),
        beta: f64::NAN,
    })
}

/// `rho` on the grid; where `D(phi) < 1e-8` the two-term expansion
/// `c/(D'(0) phi) + (c/D'(0)) (2 kappa - D''(0)/(2 D'(0)))` is used, with
/// `kappa = f''(0)/(2 f'(0)) - h2/h1`.
pub fn rho(profile: &FrontProfile, model: &Model) -> Result<Vec<f64>> {
    let c = profile.c;
    let (h1, h2) = center_manifold_coeffs(model, c)?;
    let (alpha, beta) = (model.dp0(), 0.5 * model.dpp(0.0));
    let kappa = model.fpp0() / (2.0 * model.fp0()) - h2 / h1;
    let offset = (c / alpha) * (2.0 * kappa - beta / alpha);
    profile
        .phi
        .iter()
        .zip(&profile.phi_x)
        .map(|(&p, &px)| {
            if !(px < 0.0) {
                return Err(Error::Domain(format!("phi_x = {px} is not negative")));
            }
            let d = model.d(p);
            Ok(if d < 1e-8 {
                c / (alpha * p) + offset
            } else {
                (-c * px - 2.0 * model.f(p)) / (d * px)
            })
        })
        .collect()
}

fn derivative(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (y[1] - y[0]) / h
            } else if i == n - 1 {
                (y[n - 1] - y[n - 2]) / h
            } else {
                (y[i + 1] - y[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// `F(x, lambda) = lambda/D(phi) + rho_x/2 + rho^2/4`.
pub fn f_potential(profile: &FrontProfile, model: &Model, lambda: Complex64) -> Result<Vec<Complex64>> {
    let r = rho(profile, model)?;
    let rx = derivative(&r, profile.h);
    Ok((0..profile.len())
        .map(|i| lambda / model.d(profile.phi[i]) + 0.5 * rx[i] + 0.25 * r[i] * r[i])
        .collect())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoppelReport {
    pub window_integral: f64,
    pub tail_bound: f64,
    pub total: f64,
    pub window: (f64, f64),
}

/// `int |F''| F^{-3/2} dx` over the samples plus the tail beyond them,
/// assuming `F ~ K e^{beta x}` there.
pub fn coppel_check(xs: &[f64], f: &[f64], beta: f64) -> Result<CoppelReport> {
    if xs.len() != f.len() || xs.len() < 3 {
        return arg("coppel_check needs at least 3 matching samples");
    }
    if let Some(i) = f.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::HypothesisViolated(format!("F = {} <= 0 at x = {}", f[i], xs[i])));
    }
    let h = xs[1] - xs[0];
    let n = f.len();
    let mut g = vec![0.0; n];
    for i in 1..n - 1 {
        let fxx = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        g[i] = fxx.abs() * f[i].powf(-1.5);
    }
    g[0] = 2.0 * g[1] - g[2];
    g[n - 1] = 2.0 * g[n - 2] - g[n - 3];
    let g: Vec<f64> = g.into_iter().map(|v: f64| v.max(0.0)).collect();
    let window_integral = 0.5 * h * (g[0] + g[n - 1]) + h * g[1..n - 1].iter().sum::<f64>();
    let tail_bound = if beta > 0.0 { 2.0 * beta / f[n - 1].sqrt() } else { 0.0 };
    Ok(CoppelReport {
        window_integral,
        tail_bound,
        total: window_integral + tail_bound,
        window: (xs[0], xs[n - 1]),
    })
}

/// `log zeta = f'(0) x / (2c) - c^2 / (2 D'(0) f'(0)) e^{f'(0) x / c}`.
pub fn log_envelope(model: &Model, c: f64, x: f64) -> f64 {
    let k = model.fp0() / c;
    0.5 * k * x - c * c / (2.0 * model.dp0() * model.fp0()) * (k * x).exp()
}

/// Envelope `zeta` normalised to 1 at `x_grid[0]`.
pub fn coppel_envelope(model: &Model, c: f64, x_grid: &[f64]) -> Result<Vec<f64>> {
    if !(c > 0.0) {
        return arg(format!("speed must be positive, got {c}"));
    }
    let Some(&x0) = x_grid.first() else { return Ok(vec![]) };
    let l0 = log_envelope(model, c, x0);
    Ok(x_grid.iter().map(|&x| (log_envelope(model, c, x) - l0).exp()).collect())
}

/// `r^2` of `log samples` regressed on `regressor`.
pub fn envelope_r2(logs: &[f64], regressor: &[f64]) -> f64 {
    line_fit(regressor, logs).2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SingleExponential,
    DoubleExponential,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesAudit {
    pub name: String,
    pub report: DecayReport,
    /// Fit against `theta + log zeta`.
    pub envelope_r2: f64,
    pub regime: Regime,
    /// `r^2` belonging to the selected regime.
    pub regime_r2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailAudit {
    pub c: f64,
    pub a: f64,
    pub beta: f64,
    pub right_window: (f64, f64),
    pub left_window: (f64, f64),
    pub left: DecayReport,
    pub right: Vec<SeriesAudit>,
}

fn regime_of(report: &DecayReport, env_r2: f64) -> (Regime, f64) {
    match report.classification {
        DecayClass::FasterThanExponential if env_r2 >= 0.98 => (Regime::DoubleExponential, env_r2),
        DecayClass::SingleExponential => (Regime::SingleExponential, report.r_squared),
        _ => (Regime::Inconclusive, report.r_squared.max(env_r2)),
    }
}

/// Classifies `logs` on `xs` against both tail models.
pub fn audit_series(
    name: &str,
    xs: &[f64],
    logs: &[f64],
    envelope: &[f64],
    predicted: f64,
    beta: f64,
) -> Result<SeriesAudit> {
    // weighted data may decay slowly or grow, so the window length is not checked
    let mut report = fit_unchecked(xs, logs, predicted, Side::Plus)?;
    report.beta = beta;
    let env = envelope_r2(logs, envelope);
    let (regime, regime_r2) = regime_of(&report, env);
    Ok(SeriesAudit {
        name: name.to_string(),
        report,
        envelope_r2: env,
        regime,
        regime_r2,
    })
}

/// Right-tail window of integrated data: from `phi = 1e-3` to the start of
/// the exponential extension, never within the last tenth of the domain.
pub fn right_window(profile: &FrontProfile) -> (usize, usize) {
    let n = profile.len();
    let span = profile.x_plus() - profile.x(0);
    let mut x_end = profile.x_plus() - 0.1 * span;
    if let Some(xc) = profile.right_cut {
        x_end = x_end.min(xc - profile.h);
    }
    let start = profile.phi.iter().position(|&p| p <= 1e-3).unwrap_or(n / 2);
    (start, profile.index_of(x_end).max(start + 1))
}

/// Left-tail window of integrated data: from the left cut to `1 - phi = 1e-3`.
pub fn left_window(profile: &FrontProfile) -> (usize, usize) {
    let span = profile.x_plus() - profile.x(0);
    let x_start = profile.left_cut.max(profile.x(0) + 0.1 * span);
    let i0 = profile.index_of(x_start) + 1;
    let i1 = profile.phi.iter().position(|&p| 1.0 - p >= 1e-3).unwrap_or(i0 + 1);
    (i0, i1.max(i0 + 1))
}

/// Decay of the profile, its derivative and optional eigenvector, with and
/// without the weight `e^{ax}`, against the single-exponential rate and the
/// `exp(theta) zeta` envelope.
pub fn tail_audit(profile: &FrontProfile, model: &Model, a: f64, eigvec: Option<&[Complex64]>) -> Result<TailAudit> {
    let c = profile.c;
    let beta = 2.0 * model.fp0() / c;
    let (l0, l1) = left_window(profile);
    let lx: Vec<f64> = (l0..l1).map(|i| profile.x(i)).collect();
    let ly: Vec<f64> = (l0..l1).map(|i| 1.0 - profile.phi[i]).collect();
    let mut left = fit_decay(&lx, &ly, profile.rate_minus, Side::Minus)?;
    left.beta = beta;

    let (r0, r1) = right_window(profile);
    let xs: Vec<f64> = (r0..=r1).map(|i| profile.x(i)).collect();
    let th = theta(profile, model, profile.anchor.clamp(profile.x(0), profile.x_plus()))?;
    let envelope: Vec<f64> = (r0..=r1)
        .map(|i| th[i] + log_envelope(model, c, profile.x(i)))
        .collect();
    let k = model.fp0() / c;

    let mut series: Vec<(String, Vec<f64>)> = vec![
        ("phi".into(), (r0..=r1).map(|i| profile.phi[i].ln()).collect()),
        ("phi_x".into(), (r0..=r1).map(|i| profile.phi_x[i].abs().ln()).collect()),
    ];
    if let Some(u) = eigvec {
        if u.len() != profile.len() {
            return arg(format!(
                "eigenvector has {} samples, grid has {}",
                u.len(),
                profile.len()
            ));
        }
        let logs: Vec<f64> = (r0..=r1).map(|i| u[i].norm().max(f64::MIN_POSITIVE).ln()).collect();
        series.push(("eigvec".into(), logs));
    }
    let weighted: Vec<(String, Vec<f64>)> = series
        .iter()
        .map(|(n, logs)| {
            (
                format!("weighted_{n}"),
                logs.iter().zip(&xs).map(|(l, x)| l + a * x).collect(),
            )
        })
        .collect();

    let mut right = Vec::new();
    for (name, logs) in &series {
        right.push(audit_series(name, &xs, logs, &envelope, k, beta)?);
    }
    if a != 0.0 {
        for (name, logs) in &weighted {
            right.push(audit_series(name, &xs, logs, &envelope, k - a, beta)?);
        }
    }
    Ok(TailAudit {
        c,
        a,
        beta,
        right_window: (profile.x(r0), profile.x(r1)),
        left_window: (profile.x(l0), profile.x(l1 - 1)),
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::*;
    use approx::assert_relative_eq;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn exact_exponential() {
        let xs = grid(0.0, 5.0, 501);
        let ys: Vec<f64> = xs.iter().map(|x| (-2.0 * x).exp()).collect();
        let r = fit_decay(&xs, &ys, 2.0, Side::Plus).unwrap();
        assert_relative_eq!(r.fitted_rate, 2.0, max_relative = 1e-10);
        assert_relative_eq!(r.r_squared, 1.0, epsilon = 1e-12);
        assert_eq!(r.classification, DecayClass::SingleExponential);
        let ys: Vec<f64> = xs.iter().map(|x| (-(x.exp())).exp()).collect();
        let r = fit_decay(&xs, &ys, 1.0, Side::Plus).unwrap();
        assert_eq!(r.classification, DecayClass::FasterThanExponential);
        assert!(fit_decay(&xs, &vec![-1.0; 501], 1.0, Side::Plus).is_err());
        assert!(fit_decay(&xs[..100], &ys[..100], 1.0, Side::Plus).is_err());
    }

    #[test]
    fn left_side_sign() {
        let xs = grid(-20.0, -10.0, 201);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * (0.7 * x).exp()).collect();
        let r = fit_decay(&xs, &ys, 0.7, Side::Minus).unwrap();
        assert_relative_eq!(r.fitted_rate, 0.7, max_relative = 1e-10);
        assert!(!r.growing);
    }

    #[test]
    fn coppel_synthetic() {
        let xs = grid(0.0, 60.0, 60001);
        let f: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
        let r = coppel_check(&xs, &f, 1.0).unwrap();
        assert!((r.total - 2.0).abs() < 1e-3, "{r:?}");
        let r = coppel_check(&xs, &vec![1.0; xs.len()], 0.0).unwrap();
        assert_eq!(r.total, 0.0);
        assert!(matches!(
            coppel_check(&xs, &vec![-1.0; xs.len()], 1.0),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn envelope_shape() {
        let m = Model::linear_quadratic(1.0, 0.0);
        let xs = grid(-5.0, 5.0, 1001);
        let z = coppel_envelope(&m, 1.0, &xs).unwrap();
        assert_eq!(z[0], 1.0);
        for (x, v) in xs.iter().zip(&z) {
            let want = (0.5 * x - 0.5 * x.exp() - (-2.5 - 0.5 * (-5f64).exp())).exp();
            assert_relative_eq!(*v, want, max_relative = 1e-10);
        }
        let dz: Vec<f64> = z.windows(2).map(|w| w[1] - w[0]).collect();
        let flips = dz.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
        assert_eq!(flips, 1);
        let i = dz.iter().position(|&d| d < 0.0).unwrap();
        assert!(xs[i].abs() < 0.02);
        let l = |x: f64| log_envelope(&m, 1.0, x);
        assert!(l(4.0) - l(3.0) < l(3.0) - l(2.0));
    }

    #[test]
    fn profile_potential_limits() {
        let m = Model::linear_quadratic(1.0, 0.0);
        let g = GridSpec::new(0.02, 40.0, 40.0).unwrap();
        let p = compute_profile(&m, 1.0, &g, &ShootOpts::default(), &ProfileOpts::default()).unwrap();
        let r = rho(&p, &m).unwrap();
        let i = p.phi.iter().position(|&v| v < 1e-6).unwrap();
        assert_relative_eq!(r[i] * p.phi[i], 1.0, max_relative = 1e-4);
        let i0 = p.index_of(0.0);
        let direct = -1.0 / m.d(p.phi[i0]) - 2.0 * m.f(p.phi[i0]) / (m.d(p.phi[i0]) * p.phi_x[i0]);
        assert_relative_eq!(r[i0], direct);
        let f1 = f_potential(&p, &m, Complex64::new(1.0, 0.0)).unwrap();
        let f2 = f_potential(&p, &m, Complex64::new(-0.5, 2.0)).unwrap();
        for j in (0..p.len()).step_by(97) {
            let d = m.d(p.phi[j]).max(1e-300);
            let want = Complex64::new(1.5, -2.0) / d;
            assert!((f1[j] - f2[j] - want).norm() <= 1e-9 * want.norm() + 1e-13 * f1[j].norm());
        }
        let audit = tail_audit(&p, &m, 1.3, None).unwrap();
        assert!((audit.left.fitted_rate / p.rate_minus - 1.0).abs() < 0.02);
        let w = audit.right.iter().find(|s| s.name == "weighted_phi").unwrap();
        assert!(w.report.growing);
    }
}
