//! Eigenvalues of the discretised operators, localisation of eigenvectors,
//! stability verdicts and regularisation drift.

use std::path::Path;

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::model::Model;
use crate::operators::{assemble, consistent_splitting_bound, Boundary, OperatorMatrix};
use crate::profile::FrontProfile;

/// Largest matrix accepted by [`eigen_decomp`].
pub const MAX_DENSE: usize = 6000;
/// Eigenvectors with at least this score count as point-spectrum candidates.
pub const LOCALIZED: f64 = 0.9;
pub const TOL_STAB: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Sorted by descending real part, then descending imaginary part.
    pub values: Vec<Complex64>,
    /// Unit-norm eigenvectors, one per value.
    pub vectors: Option<Vec<Vec<Complex64>>>,
}

fn order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

fn dense(m: &OperatorMatrix) -> Mat<f64> {
    Mat::from_fn(m.n(), m.n(), |i, j| m.get(i, j))
}

/// All eigenvalues by Hessenberg reduction and shifted QR; eigenvectors of
/// tridiagonal matrices by complex inverse iteration.
pub fn eigen_decomp(m: &OperatorMatrix, want_vectors: bool) -> Result<Eigen> {
    let n = m.n();
    if n > MAX_DENSE {
        return arg(format!("dense eigensolve limited to N <= {MAX_DENSE}, got {n}"));
    }
    let a = dense(m);
    if want_vectors && m.boundary == Boundary::Periodic {
        let e = a
            .eigen()
            .map_err(|e| Error::Numerical(format!("QR iteration did not converge: {e:?}")))?;
        let s = e.S().column_vector();
        let u = e.U();
        let mut pairs: Vec<(Complex64, Vec<Complex64>)> = (0..n)
            .map(|j| {
                let mut v: Vec<Complex64> = (0..n).map(|i| u[(i, j)]).collect();
                normalize(&mut v);
                (s[j], v)
            })
            .collect();
        pairs.sort_by(|x, y| order(&x.0, &y.0));
        let (values, vectors) = pairs.into_iter().unzip();
        return Ok(Eigen {
            values,
            vectors: Some(vectors),
        });
    }
    let mut values = a
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("QR iteration did not converge: {e:?}")))?;
    values.sort_by(order);
    let vectors = want_vectors.then(|| values.par_iter().map(|&l| inverse_iteration(m, l)).collect());
    Ok(Eigen { values, vectors })
}

fn normalize(v: &mut [Complex64]) {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        v.iter_mut().for_each(|z| *z /= nrm);
    }
}

/// LU factors of a complex tridiagonal matrix with partial pivoting.
struct TriLu {
    dl: Vec<Complex64>,
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    du2: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl TriLu {
    fn new(m: &OperatorMatrix, shift: Complex64) -> Self {
        let n = m.n();
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut dl: Vec<Complex64> = (1..n).map(|i| c(m.lower[i])).collect();
        let mut d: Vec<Complex64> = m.diag.iter().map(|&x| c(x) - shift).collect();
        let mut du: Vec<Complex64> = (0..n - 1).map(|i| c(m.upper[i])).collect();
        let mut du2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        let scale = m.diag.iter().map(|x| x.abs()).fold(1.0, f64::max);
        let tiny = 1e-300f64.max(f64::EPSILON * scale * 1e-3);
        for i in 0..n - 1 {
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() == 0.0 {
                    d[i] = c(tiny);
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].norm() == 0.0 {
            d[n - 1] = c(tiny);
        }
        TriLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [Complex64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                let t = self.dl[i] * b[i];
                b[i + 1] -= t;
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn inverse_iteration(m: &OperatorMatrix, lambda: Complex64) -> Vec<Complex64> {
    let n = m.n();
    let lu = TriLu::new(m, lambda);
    // deterministic, non-symmetric start vector
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            Complex64::new(((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5, 0.0)
        })
        .collect();
    for _ in 0..3 {
        lu.solve(&mut v);
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            v = vec![Complex64::new(0.0, 0.0); n];
            break;
        }
        normalize(&mut v);
    }
    v
}

/// Fraction of the discrete L2 mass of `v` on the middle half of the grid.
pub fn localization_score(v: &[Complex64]) -> f64 {
    let n = v.len();
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let (lo, hi) = (n / 4, n - n / 4);
    let inner: f64 = v[lo..hi].iter().map(|z| z.norm_sqr()).sum();
    inner / total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

/// Eigenvalues of one discretised operator, with the analytic border.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eps: f64,
    pub a: f64,
    pub h: f64,
    pub n: usize,
    pub eigenvalues: Vec<Complex64>,
    pub localization_scores: Vec<f64>,
    pub rightmost_any: Option<Complex64>,
    pub rightmost_localized: Option<Complex64>,
    pub rightmost_delocalized: Option<Complex64>,
    /// Right edge of the analytic border curves.
    pub border_bound: f64,
    pub tol_stab: f64,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

/// Sign of the largest real part, with a `tol` band counted as marginal.
pub fn stability_verdict(report: &SpectrumReport, tol: f64) -> Verdict {
    match report.rightmost_any {
        None => Verdict::Marginal,
        Some(z) if z.re > tol => Verdict::Unstable,
        Some(z) if z.re < -tol => Verdict::Stable,
        Some(_) => Verdict::Marginal,
    }
}

fn rightmost(values: &[Complex64], keep: impl Fn(usize) -> bool) -> Option<Complex64> {
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(_, z)| *z)
        .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.abs().total_cmp(&b.im.abs()).reverse()))
}

/// Builds a report from a decomposition with eigenvectors.
pub fn report_from(m: &OperatorMatrix, model: &Model, c: f64, eig: &Eigen, tol: f64) -> SpectrumReport {
    let scores: Vec<f64> = match &eig.vectors {
        Some(vs) => vs.iter().map(|v| localization_score(v)).collect(),
        None => vec![0.0; eig.values.len()],
    };
    let mut warnings = Vec::new();
    if eig.values.is_empty() {
        warnings.push("empty spectrum: verdict is marginal by convention".to_string());
    }
    let mut r = SpectrumReport {
        eps: m.eps,
        a: m.a,
        h: m.h,
        n: m.n(),
        rightmost_any: rightmost(&eig.values, |_| true),
        rightmost_localized: rightmost(&eig.values, |i| scores[i] >= LOCALIZED),
        rightmost_delocalized: rightmost(&eig.values, |i| scores[i] < LOCALIZED),
        eigenvalues: eig.values.clone(),
        localization_scores: scores,
        border_bound: consistent_splitting_bound(model, c, m.eps, m.a),
        tol_stab: tol,
        verdict: Verdict::Marginal,
        warnings,
    };
    r.verdict = stability_verdict(&r, tol);
    r
}

/// Assembles `L^eps_a`, solves, scores and judges.
pub fn spectrum_report(profile: &FrontProfile, model: &Model, eps: f64, a: f64, tol: f64) -> Result<SpectrumReport> {
    let m = assemble(profile, model, eps, a)?;
    let eig = eigen_decomp(&m, true)?;
    Ok(report_from(&m, model, profile.c, &eig, tol))
}

impl SpectrumReport {
    pub fn localized(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.eigenvalues
            .iter()
            .zip(&self.localization_scores)
            .filter(|(_, &s)| s >= LOCALIZED)
            .map(|(z, s)| (*z, *s))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        crate::io::write_json(path, self)
    }

    /// CSV with columns `re, im, score`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["re", "im", "score"])?;
        for (z, s) in self.eigenvalues.iter().zip(&self.localization_scores) {
            w.serialize((z.re, z.im, s))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One `eps` of a regularisation sweep.
#[derive(Debug, Clone, Serialize)]
pub struct DriftRow {
    pub eps: f64,
    pub eigenvalues: Vec<Complex64>,
    pub drift: f64,
    pub collision: bool,
    /// Shift of the Rayleigh quotient of `e^{ax} phi_x` relative to `eps = 0`.
    pub translation_drift: f64,
    /// `|L^eps_a v| / |v|` for `v = e^{ax} phi_x`.
    pub translation_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftTable {
    pub a: f64,
    pub h: f64,
    pub n: usize,
    pub count: usize,
    pub base: Vec<Complex64>,
    pub base_collision: bool,
    pub rows: Vec<DriftRow>,
    /// Least-squares slope of `log drift` against `log eps`.
    pub slope: Option<f64>,
}

fn top_localized(p: &FrontProfile, model: &Model, eps: f64, a: f64, count: usize) -> Result<Vec<Complex64>> {
    let m = assemble(p, model, eps, a)?;
    let eig = eigen_decomp(&m, true)?;
    let vs = eig.vectors.as_ref().expect("vectors requested");
    Ok(eig
        .values
        .iter()
        .zip(vs)
        .filter(|(_, v)| localization_score(v) >= LOCALIZED)
        .take(count)
        .map(|(z, _)| *z)
        .collect())
}

fn has_collision(vals: &[Complex64]) -> bool {
    vals.iter()
        .enumerate()
        .any(|(i, a)| vals[i + 1..].iter().any(|b| (a - b).norm() <= 1e-10))
}

/// Greedy nearest-pair matching; returns the largest matched distance.
pub fn matched_drift(base: &[Complex64], other: &[Complex64]) -> f64 {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(base.len() * other.len());
    for (i, a) in base.iter().enumerate() {
        for (j, b) in other.iter().enumerate() {
            pairs.push(((a - b).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let (mut used_a, mut used_b) = (vec![false; base.len()], vec![false; other.len()]);
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
            matched += 1;
        }
    }
    if matched < base.len() {
        f64::INFINITY
    } else {
        worst
    }
}

fn translation_mode(p: &FrontProfile, model: &Model, eps: f64, a: f64) -> Result<(f64, f64)> {
    let m = assemble(p, model, eps, a)?;
    let v: Vec<f64> = (1..p.len() - 1).map(|i| (a * p.x(i)).exp() * p.phi_x[i]).collect();
    let lv = m.apply(&v);
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let rq = v.iter().zip(&lv).map(|(x, y)| x * y).sum::<f64>() / vv;
    let res = (lv.iter().map(|y| y * y).sum::<f64>() / vv).sqrt();
    Ok((rq, res))
}

/// Tracks the `count` rightmost localized eigenvalues as `eps` decreases.
/// `eps_list` must be positive and strictly decreasing; a trailing zero is
/// allowed and reproduces the reference exactly.
pub fn regularization_sweep(
    profile: &FrontProfile,
    model: &Model,
    a: f64,
    eps_list: &[f64],
    count: usize,
) -> Result<DriftTable> {
    if eps_list.is_empty() || count == 0 {
        return arg("need a non-empty eps list and count > 0");
    }
    for (k, w) in eps_list.windows(2).enumerate() {
        let trailing_zero = k + 2 == eps_list.len() && w[1] == 0.0;
        if !(w[1] < w[0]) || (!(w[1] > 0.0) && !trailing_zero) {
            return arg(format!(
                "eps list must be positive and strictly decreasing: {eps_list:?}"
            ));
        }
    }
    if !(eps_list[0] > 0.0) {
        return arg("eps list must start with a positive value");
    }
    let base = top_localized(profile, model, 0.0, a, count)?;
    let (rq0, _) = translation_mode(profile, model, 0.0, a)?;
    let rows: Vec<DriftRow> = eps_list
        .par_iter()
        .map(|&eps| -> Result<DriftRow> {
            let vals = if eps == 0.0 {
                base.clone()
            } else {
                top_localized(profile, model, eps, a, count)?
            };
            let (rq, res) = translation_mode(profile, model, eps, a)?;
            Ok(DriftRow {
                eps,
                drift: matched_drift(&base, &vals),
                collision: has_collision(&vals),
                eigenvalues: vals,
                translation_drift: (rq - rq0).abs(),
                translation_residual: res,
            })
        })
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.eps > 0.0 && r.drift > 0.0 && r.drift.is_finite())
        .map(|r| (r.eps.ln(), r.drift.ln()))
        .collect();
    Ok(DriftTable {
        a,
        h: profile.h,
        n: profile.len() - 2,
        count,
        base_collision: has_collision(&base),
        base,
        rows,
        slope: fit_slope(&pts),
    })
}

/// Least-squares slope through `(x, y)`; `None` with fewer than two points.
pub fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::k_grid;
    use approx::assert_relative_eq;

    #[test]
    fn dirichlet_laplacian() {
        let n = 60;
        let h = 1.0 / (n + 1) as f64;
        let m = OperatorMatrix::constant(1.0, 0.0, 0.0, n, h, Boundary::Dirichlet).unwrap();
        let e = eigen_decomp(&m, false).unwrap();
        let l = 1.0;
        for (j, z) in e.values.iter().enumerate() {
            let k = (j + 1) as f64 * std::f64::consts::PI / l;
            // exact eigenvalues of the discrete stencil
            let discrete = -4.0 / (h * h) * (k * h / 2.0).sin().powi(2);
            assert_relative_eq!(z.re, discrete, max_relative = 1e-10);
            if j < 5 {
                assert!((z.re + k * k).abs() < 1e-2 * k * k);
            }
            assert!(z.im.abs() < 1e-8);
        }
    }

    #[test]
    fn diagonal_matrix() {
        let mut m = OperatorMatrix::constant(0.0, 0.0, 0.0, 4, 1.0, Boundary::Dirichlet).unwrap();
        m.diag = vec![3.0, -1.0, 2.0, 0.5];
        m.lower = vec![0.0; 4];
        m.upper = vec![0.0; 4];
        let e = eigen_decomp(&m, true).unwrap();
        let re: Vec<f64> = e.values.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![3.0, 2.0, 0.5, -1.0]);
        let v = &e.vectors.unwrap()[0];
        assert_relative_eq!(v[0].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_iteration_residual() {
        let m = OperatorMatrix::constant(1.0, 3.0, 0.2, 40, 0.1, Boundary::Dirichlet).unwrap();
        let e = eigen_decomp(&m, true).unwrap();
        for (l, v) in e.values.iter().zip(e.vectors.as_ref().unwrap()) {
            let r = m.apply_complex(v);
            let res: f64 = r.iter().zip(v).map(|(a, b)| (a - b * l).norm_sqr()).sum::<f64>().sqrt();
            assert!(res < 1e-6 * l.norm().max(1.0), "{l} {res}");
        }
    }

    #[test]
    fn scores() {
        let n = 200;
        let fourier: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, 0.3 * j as f64)).collect();
        assert_relative_eq!(localization_score(&fourier), 0.5, epsilon = 1e-12);
        let mut bump = vec![Complex64::new(0.0, 0.0); n];
        bump[99] = Complex64::new(1.0, 0.0);
        bump[100] = Complex64::new(2.0, 0.0);
        bump[101] = Complex64::new(1.0, 0.0);
        assert_eq!(localization_score(&bump), 1.0);
    }

    #[test]
    fn verdicts() {
        let mut r = SpectrumReport {
            eps: 0.0,
            a: 0.0,
            h: 0.1,
            n: 0,
            eigenvalues: vec![],
            localization_scores: vec![],
            rightmost_any: None,
            rightmost_localized: None,
            rightmost_delocalized: None,
            border_bound: 0.0,
            tol_stab: TOL_STAB,
            verdict: Verdict::Marginal,
            warnings: vec![],
        };
        assert_eq!(stability_verdict(&r, TOL_STAB), Verdict::Marginal);
        r.rightmost_any = Some(Complex64::new(-0.1, 0.0));
        assert_eq!(stability_verdict(&r, TOL_STAB), Verdict::Stable);
        r.rightmost_any = Some(Complex64::new(1e-7, 3.0));
        assert_eq!(stability_verdict(&r, TOL_STAB), Verdict::Marginal);
        r.rightmost_any = Some(Complex64::new(0.5, 0.0));
        assert_eq!(stability_verdict(&r, TOL_STAB), Verdict::Unstable);
    }

    #[test]
    fn periodic_symbol() {
        let (b2, b1, b0) = (0.7, 1.3, -0.4);
        let n = 64;
        let l = 2.0 * std::f64::consts::PI;
        let h = l / n as f64;
        let m = OperatorMatrix::constant(b2, b1, b0, n, h, Boundary::Periodic).unwrap();
        let e = eigen_decomp(&m, true).unwrap();
        for j in 0..n as i64 {
            let k = (j - n as i64 / 2) as f64;
            let kh = k * h;
            let discrete = Complex64::new(b0 - 4.0 * b2 / (h * h) * (kh / 2.0).sin().powi(2), b1 * kh.sin() / h);
            let best = e
                .values
                .iter()
                .map(|z| (z - discrete).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9 * (1.0 + discrete.norm()));
        }
        let _ = k_grid(1.0, 3);
    }

    #[test]
    fn matching() {
        let a = [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)];
        let b = [Complex64::new(-1.1, 0.0), Complex64::new(0.05, 0.0)];
        assert_relative_eq!(matched_drift(&a, &b), 0.1, epsilon = 1e-12);
        assert_eq!(matched_drift(&a, &a), 0.0);
        assert_eq!(matched_drift(&a, &b[..1]), f64::INFINITY);
        assert!(has_collision(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 5e-11)]));
        assert_relative_eq!(fit_slope(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap(), 2.0);
    }
}
