//! Linearised operators about the front and their constant-coefficient limits.
//!
//! `L^eps_a w = b2 w_xx + b1 w_x + b0 w` with
//! `b2 = D(phi) + eps`, `b1 = 2 D(phi)_x + c - 2 a b2`,
//! `b0 = D(phi)_xx + f'(phi) + a^2 b2 - a (2 D(phi)_x + c)`
//! is the conjugate `e^{ax} L^eps e^{-ax}` of the regularised linearisation
//! `L^eps u = ((D(phi) + eps) u)_xx + c u_x + f'(phi) u`.

use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::model::Model;
use crate::profile::FrontProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Values outside the grid pinned to zero.
    Dirichlet,
    /// Wrap-around; only for constant coefficients.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `x -> +inf`, where `phi -> 0`.
    Plus,
    /// `x -> -inf`, where `phi -> 1`.
    Minus,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        }
    }

    /// Limit value of the profile on this side.
    pub fn state(&self) -> f64 {
        match self {
            Side::Plus => 0.0,
            Side::Minus => 1.0,
        }
    }
}

/// Variable coefficients on the full profile grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub b2: Vec<f64>,
    pub b1: Vec<f64>,
    pub b0: Vec<f64>,
}

/// Pointwise coefficients of `L^eps_a` from `phi`, `phi_x`.
pub fn coefficients(profile: &FrontProfile, model: &Model, eps: f64, a: f64) -> Coefficients {
    let c = profile.c;
    let phi_xx = profile.phi_xx(model);
    let n = profile.len();
    let (mut b2, mut b1, mut b0) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        let (p, px, pxx) = (profile.phi[i], profile.phi_x[i], phi_xx[i]);
        let d_x = model.dp(p) * px;
        let d_xx = model.dpp(p) * px * px + model.dp(p) * pxx;
        let a2 = model.d(p) + eps;
        let a1 = 2.0 * d_x + c;
        let a0 = d_xx + model.fp(p);
        b2[i] = a2;
        b1[i] = a1 - 2.0 * a * a2;
        b0[i] = a0 + a * a * a2 - a * a1;
    }
    Coefficients { b2, b1, b0 }
}

/// Tridiagonal matrix, plus wrap-around corners for periodic assemblies.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    /// `lower[i]` multiplies unknown `i-1` in row `i`; `lower[0]` is the
    /// periodic corner `(0, n-1)`.
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    /// `upper[i]` multiplies unknown `i+1` in row `i`; `upper[n-1]` is the
    /// periodic corner `(n-1, 0)`.
    pub upper: Vec<f64>,
    pub h: f64,
    /// Coordinate of the first unknown.
    pub x_first: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    pub eps: f64,
    pub a: f64,
    pub boundary: Boundary,
    pub coeffs: Coefficients,
}

fn stencil(b2: f64, b1: f64, b0: f64, h: f64) -> (f64, f64, f64) {
    let h2 = h * h;
    (b2 / h2 - b1 / (2.0 * h), -2.0 * b2 / h2 + b0, b2 / h2 + b1 / (2.0 * h))
}

impl OperatorMatrix {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_first + i as f64 * self.h
    }

    /// Constant-coefficient `b2 d^2 + b1 d + b0` on `n` unknowns with spacing `h`.
    pub fn constant(b2: f64, b1: f64, b0: f64, n: usize, h: f64, boundary: Boundary) -> Result<Self> {
        if n < 3 || !(h > 0.0) {
            return arg(format!("need n >= 3 and h > 0, got {n}, {h}"));
        }
        let (l, d, u) = stencil(b2, b1, b0, h);
        let mut lower = vec![l; n];
        let mut upper = vec![u; n];
        if boundary == Boundary::Dirichlet {
            lower[0] = 0.0;
            upper[n - 1] = 0.0;
        }
        let x_first = if boundary == Boundary::Dirichlet { h } else { 0.0 };
        let span = match boundary {
            Boundary::Dirichlet => (n + 1) as f64 * h,
            Boundary::Periodic => n as f64 * h,
        };
        Ok(OperatorMatrix {
            lower,
            diag: vec![d; n],
            upper,
            h,
            x_first,
            x_minus: 0.0,
            x_plus: span,
            eps: 0.0,
            a: 0.0,
            boundary,
            coeffs: Coefficients {
                b2: vec![b2; n],
                b1: vec![b1; n],
                b0: vec![b0; n],
            },
        })
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let n = self.n();
        if i == j {
            self.diag[i]
        } else if j + 1 == i {
            self.lower[i]
        } else if i + 1 == j {
            self.upper[i]
        } else if i == 0 && j == n - 1 {
            self.lower[0]
        } else if i == n - 1 && j == 0 {
            self.upper[n - 1]
        } else {
            0.0
        }
    }

    fn corners(&self) -> (f64, f64) {
        match self.boundary {
            Boundary::Periodic => (self.lower[0], self.upper[self.n() - 1]),
            Boundary::Dirichlet => (0.0, 0.0),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        let (top, bottom) = self.corners();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                if i == 0 {
                    s += top * x[n - 1];
                }
                if i == n - 1 {
                    s += bottom * x[0];
                }
                s
            })
            .collect()
    }

    pub fn apply_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        let (top, bottom) = self.corners();
        (0..n)
            .map(|i| {
                let mut s = x[i] * self.diag[i];
                if i > 0 {
                    s += x[i - 1] * self.lower[i];
                }
                if i + 1 < n {
                    s += x[i + 1] * self.upper[i];
                }
                if i == 0 {
                    s += x[n - 1] * top;
                }
                if i == n - 1 {
                    s += x[0] * bottom;
                }
                s
            })
            .collect()
    }

    /// MatrixMarket coordinate export (1-based indices).
    pub fn write_matrix_market(&self, path: &Path) -> Result<()> {
        let n = self.n();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in [i.wrapping_sub(1), i, i + 1] {
                if j < n && self.get(i, j) != 0.0 {
                    entries.push((i, j));
                }
            }
        }
        if self.boundary == Boundary::Periodic && n > 2 {
            entries.push((0, n - 1));
            entries.push((n - 1, 0));
        }
        entries.sort_by_key(|&(i, j)| (j, i));
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(
            w,
            "% eps={} a={} h={} boundary={:?}",
            self.eps, self.a, self.h, self.boundary
        )?;
        writeln!(w, "{n} {n} {}", entries.len())?;
        for (i, j) in entries {
            writeln!(w, "{} {} {:e}", i + 1, j + 1, self.get(i, j))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `L^eps_a` on the interior of the profile grid with Dirichlet rows.
pub fn assemble(profile: &FrontProfile, model: &Model, eps: f64, a: f64) -> Result<OperatorMatrix> {
    if !(eps >= 0.0) || !a.is_finite() {
        return arg(format!("need eps >= 0 and finite a, got {eps}, {a}"));
    }
    if profile.len() < 5 {
        return arg("profile grid too short");
    }
    let coeffs = coefficients(profile, model, eps, a);
    let n = profile.len() - 2;
    let (mut lower, mut diag, mut upper) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for r in 0..n {
        let i = r + 1;
        let (l, d, u) = stencil(coeffs.b2[i], coeffs.b1[i], coeffs.b0[i], profile.h);
        if !(l.is_finite() && d.is_finite() && u.is_finite()) {
            return Err(Error::Numerical(format!("non-finite stencil at x = {}", profile.x(i))));
        }
        if r > 0 {
            lower[r] = l;
        }
        diag[r] = d;
        if r + 1 < n {
            upper[r] = u;
        }
    }
    let interior = |v: &[f64]| v[1..=n].to_vec();
    Ok(OperatorMatrix {
        lower,
        diag,
        upper,
        h: profile.h,
        x_first: profile.x(1),
        x_minus: profile.x_minus(),
        x_plus: profile.x_plus(),
        eps,
        a,
        boundary: Boundary::Dirichlet,
        coeffs: Coefficients {
            b2: interior(&coeffs.b2),
            b1: interior(&coeffs.b1),
            b0: interior(&coeffs.b0),
        },
    })
}

/// `lambda(k) = D^eps(u) (a^2 - k^2) - a c + f'(u) + i k (c - 2 a D^eps(u))`
/// at the limit state `u` of `side`.
pub fn dispersion_curve(model: &Model, c: f64, eps: f64, a: f64, side: Side, k: &[f64]) -> Vec<Complex64> {
    let u = side.state();
    let de = model.d(u) + eps;
    let re0 = de * a * a - a * c + model.fp(u);
    let im = c - 2.0 * a * de;
    k.iter().map(|&k| Complex64::new(re0 - de * k * k, k * im)).collect()
}

/// Right edge of both border curves: `lambda` lies in the consistent
/// splitting region iff `Re lambda` exceeds this value.
pub fn consistent_splitting_bound(model: &Model, c: f64, eps: f64, a: f64) -> f64 {
    [Side::Plus, Side::Minus]
        .iter()
        .map(|s| {
            let u = s.state();
            (model.d(u) + eps) * a * a - a * c + model.fp(u)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Limits of the coefficients at one end and the associated first-order system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticData {
    pub side: Side,
    pub b2: f64,
    pub b1: f64,
    pub b0: f64,
}

impl AsymptoticData {
    pub fn new(model: &Model, c: f64, eps: f64, a: f64, side: Side) -> Self {
        let u = side.state();
        let de = model.d(u) + eps;
        AsymptoticData {
            side,
            b2: de,
            b1: c - 2.0 * a * de,
            b0: a * a * de - a * c + model.fp(u),
        }
    }

    /// `[[0, 1], [(lambda - b0)/b2, -b1/b2]]`
    pub fn matrix(&self, lambda: Complex64) -> Result<[[Complex64; 2]; 2]> {
        self.nondegenerate()?;
        let z = Complex64::new(0.0, 0.0);
        Ok([
            [z, Complex64::new(1.0, 0.0)],
            [(lambda - self.b0) / self.b2, Complex64::new(-self.b1 / self.b2, 0.0)],
        ])
    }

    fn nondegenerate(&self) -> Result<()> {
        if self.b2 == 0.0 {
            return Err(Error::Domain(format!("b2 vanishes on the {} side", self.side.as_str())));
        }
        Ok(())
    }

    /// Roots of `b2 z^2 + b1 z + b0 - lambda = 0`, ordered by real part.
    pub fn roots(&self, lambda: Complex64) -> Result<(Complex64, Complex64)> {
        self.nondegenerate()?;
        let p = Complex64::new(self.b1 / self.b2, 0.0);
        let q = (self.b0 - lambda) / self.b2;
        let d = (p * p - 4.0 * q).sqrt();
        let big = if (p.conj() * d).re >= 0.0 {
            -(p + d) * 0.5
        } else {
            -(p - d) * 0.5
        };
        let small = if big == Complex64::new(0.0, 0.0) { big } else { q / big };
        Ok(if big.re <= small.re { (big, small) } else { (small, big) })
    }
}

/// Morse indices of the asymptotic systems at `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    /// Unstable dimension at `+inf`.
    pub dim_u_plus: usize,
    /// Stable dimension at `-inf`.
    pub dim_s_minus: usize,
    pub index: i64,
}

pub fn morse_index_report(model: &Model, c: f64, eps: f64, a: f64, lambda: Complex64) -> Result<MorseReport> {
    if !(eps > 0.0) {
        return arg(format!("Morse indices need eps > 0, got {eps}"));
    }
    let count = |side: Side, unstable: bool| -> Result<usize> {
        let (z1, z2) = AsymptoticData::new(model, c, eps, a, side).roots(lambda)?;
        let mut n = 0;
        for z in [z1, z2] {
            if z.re.abs() <= 1e-12 * z.norm().max(1.0) {
                return Err(Error::OnFredholmBorder { re: z.re.abs() });
            }
            if (z.re > 0.0) == unstable {
                n += 1;
            }
        }
        Ok(n)
    };
    let dim_u_plus = count(Side::Plus, true)?;
    let dim_s_minus = count(Side::Minus, false)?;
    Ok(MorseReport {
        dim_u_plus,
        dim_s_minus,
        index: dim_u_plus as i64 - dim_s_minus as i64,
    })
}

/// Admissible exponential weights for a given speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightPlan {
    pub c: f64,
    pub c_star: f64,
    pub threshold: f64,
    pub speed_ok: bool,
    pub a_lower: f64,
    pub a_upper: f64,
    pub recommended_a: Option<f64>,
    pub empty: bool,
}

/// Interval `(f'(0)/c, a0(c))`, `a0(c) = (c + sqrt(c^2 - 4 D(1) f'(1))) / (2 D(1))`,
/// on which both border curves lie in the open left half-plane.
pub fn weight_plan(model: &Model, c: f64, c_star: f64) -> Result<WeightPlan> {
    if !(c > 0.0) {
        return arg(format!("speed must be positive, got {c}"));
    }
    let threshold = model.speed_threshold(c_star)?;
    let d1 = model.d1();
    let a_lower = model.fp0() / c;
    let a_upper = (c + (c * c - 4.0 * d1 * model.fp1()).sqrt()) / (2.0 * d1);
    let speed_ok = c > threshold;
    let empty = !(speed_ok && a_lower < a_upper);
    Ok(WeightPlan {
        c,
        c_star,
        threshold,
        speed_ok,
        a_lower,
        a_upper,
        recommended_a: (!empty).then_some(0.5 * (a_lower + a_upper)),
        empty,
    })
}

/// Border curves of the conjugated operator without regularisation.
pub fn s_curves(model: &Model, c: f64, a: f64, k: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let fp0 = model.fp0();
    let plus = k.iter().map(|&k| Complex64::new(fp0 - a * c, c * k)).collect();
    let (d1, fp1) = (model.d1(), model.fp1());
    let minus = k
        .iter()
        .map(|&k| Complex64::new(-d1 * k * k + a * a * d1 - a * c + fp1, (c - 2.0 * a * d1) * k))
        .collect();
    (plus, minus)
}

/// `n` evenly spaced wavenumbers on `[-k_max, k_max]`.
pub fn k_grid(k_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|j| -k_max + 2.0 * k_max * j as f64 / (n - 1) as f64)
        .collect()
}

/// CSV with columns `k, side, re, im`.
pub fn write_borders(path: &Path, k: &[f64], plus: &[Complex64], minus: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "side", "re", "im"])?;
    for (side, curve) in [(Side::Plus, plus), (Side::Minus, minus)] {
        for (k, z) in k.iter().zip(curve) {
            w.serialize((k, side.as_str(), z.re, z.im))?;
        }
    }
    w.flush()?;
    Ok(())
}
