//! Energy identity for eigenfunctions of the unweighted linearisation.
//!
//! With `theta = -(c/2) int_{x0}^x ds / D(phi)`, `w = e^{-theta} u` and
//! `psi = e^{-theta} phi_x`, an eigenfunction satisfies
//! `lambda <D w, w> = -|D psi (w/psi)_x|^2` up to boundary terms.
//! Everything is evaluated in a discrete summation-by-parts form, so the
//! identity holds to round-off for solutions of the discrete `w`-equation
//! `(A_i psi_i psi_{i+1} (s_{i+1} - s_i) - A_{i-1} psi_{i-1} psi_i (s_i - s_{i-1})) / h^2
//!   = lambda D_i psi_i w_i`, `s = w/psi`, `A_i = D(phi)^2` at `x_{i+1/2}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::model::Model;
use crate::profile::FrontProfile;

/// Largest `|theta|` kept inside an energy window.
pub const THETA_MAX: f64 = 300.0;

/// `theta` on the grid, zero at the node nearest `x0`.
pub fn theta(profile: &FrontProfile, model: &Model, x0: f64) -> Result<Vec<f64>> {
    if !(x0 >= profile.x(0) && x0 <= profile.x_plus()) {
        return arg(format!("x0 = {x0} outside the grid"));
    }
    let n = profile.len();
    let c = profile.c;
    let i0 = profile.index_of(x0);
    let tail = profile.right_cut.map(|xc| (xc, profile.index_of(xc)));
    let integrand = |i: usize| -> Result<f64> {
        let d = model.d(profile.phi[i]);
        if !(d > 1e-300) {
            return Err(Error::Numerical(format!("D(phi) = {d} at x = {}", profile.x(i))));
        }
        Ok(-c / (2.0 * d))
    };
    // exact integral over a cell of the exponential tail phi = phi_c exp(-k (x - x_c))
    let cell = |i: usize| -> Result<f64> {
        if let Some((xc, ic)) = tail {
            if i >= ic {
                let k = profile.rate_plus;
                let pc = profile.phi[ic];
                let (xa, xb) = (profile.x(i) - xc, profile.x(i + 1) - xc);
                return Ok(-c / (2.0 * model.dp0() * pc * k) * ((k * xb).exp() - (k * xa).exp()));
            }
        }
        Ok(0.5 * profile.h * (integrand(i)? + integrand(i + 1)?))
    };
    let mut th = vec![0.0; n];
    for i in i0..n - 1 {
        th[i + 1] = th[i] + cell(i)?;
    }
    for i in (0..i0).rev() {
        th[i] = th[i + 1] - cell(i)?;
    }
    Ok(th)
}

/// `H = -(c/2) D(phi)_x / D(phi) - c^2 / (4 D(phi)) + D(phi)_xx + f'(phi)`, with
/// `phi_xx` taken from the center manifold where `D(phi) < 1e-8`.
pub fn compute_h(profile: &FrontProfile, model: &Model) -> Vec<f64> {
    let c = profile.c;
    let phi_xx = profile.phi_xx(model);
    (0..profile.len())
        .map(|i| {
            let (p, px) = (profile.phi[i], profile.phi_x[i]);
            let d = model.d(p);
            let dx_over_d = model.dp(p) * px / d;
            let d_xx = model.dpp(p) * px * px + model.dp(p) * phi_xx[i];
            -0.5 * c * dx_over_d - c * c / (4.0 * d) + d_xx + model.fp(p)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub lambda: Complex64,
    /// `lambda <D w, w>`
    pub lhs: Complex64,
    /// `-|D psi (w/psi)_x|^2`
    pub rhs: f64,
    pub boundary_term: Complex64,
    pub relative_residual: f64,
    pub window: (f64, f64),
    pub requested_window: (f64, f64),
    /// The window was cut back to keep `|theta| <= THETA_MAX`.
    pub shrunk: bool,
}

/// Grid data on an energy window.
struct Window {
    l: usize,
    r: usize,
    psi: Vec<f64>,
    /// `D(phi)^2` at the midpoints `l + 1/2 .. r - 1/2`.
    a: Vec<f64>,
    shrunk: bool,
}

fn window(profile: &FrontProfile, model: &Model, theta: &[f64], x_l: f64, x_r: f64) -> Result<Window> {
    let (lo, hi) = (profile.x(0), profile.x_plus());
    if !(x_l >= lo - 1e-12 && x_r <= hi + 1e-12 && x_l < x_r) {
        return arg(format!("window ({x_l}, {x_r}) outside the grid [{lo}, {hi}]"));
    }
    let (mut l, mut r) = (profile.index_of(x_l), profile.index_of(x_r));
    let ok = |i: usize| theta[i].abs() <= THETA_MAX && (-theta[i]).exp() * profile.phi_x[i].abs() >= 1e-300;
    let (l0, r0) = (l, r);
    while l < r && !ok(l) {
        l += 1;
    }
    while r > l && !ok(r) {
        r -= 1;
    }
    if r < l + 2 {
        return Err(Error::Numerical("energy window collapsed".into()));
    }
    let psi = (l..=r).map(|i| (-theta[i]).exp() * profile.phi_x[i]).collect();
    let a = (l..r)
        .map(|i| model.d(0.5 * (profile.phi[i] + profile.phi[i + 1])).powi(2))
        .collect();
    Ok(Window {
        l,
        r,
        psi,
        a,
        shrunk: (l, r) != (l0, r0),
    })
}

/// Evaluates both sides of the identity on `[x_l, x_r]` for `u` sampled on
/// the full profile grid, with `theta` anchored at `x0`.
pub fn energy_identity(
    u: &[Complex64],
    lambda: Complex64,
    profile: &FrontProfile,
    model: &Model,
    (x_l, x_r): (f64, f64),
    x0: f64,
) -> Result<EnergyReport> {
    if u.len() != profile.len() {
        return arg(format!("u has {} samples, grid has {}", u.len(), profile.len()));
    }
    let th = theta(profile, model, x0)?;
    let win = window(profile, model, &th, x_l, x_r)?;
    let (l, r, h) = (win.l, win.r, profile.h);
    let s: Vec<Complex64> = (l..=r).map(|i| u[i] / profile.phi_x[i]).collect();
    let m = r - l;

    let mut lhs = Complex64::new(0.0, 0.0);
    for k in 1..m {
        let i = l + k;
        let w = u[i] * (-th[i]).exp();
        lhs += model.d(profile.phi[i]) * w.norm_sqr() * h;
    }
    lhs *= lambda;

    let flux = |k: usize| (s[k + 1] - s[k]) * (win.a[k] * win.psi[k] * win.psi[k + 1]);
    let mut rhs = 0.0;
    for k in 0..m {
        let ds = (s[k + 1] - s[k]) / h;
        rhs -= win.a[k] * win.psi[k] * win.psi[k + 1] * ds.norm_sqr() * h;
    }
    let boundary_term = (s[m].conj() * flux(m - 1) - s[0].conj() * flux(0)) / h;

    let scale = lhs.norm().max(rhs.abs()).max(f64::MIN_POSITIVE);
    let relative_residual = (lhs - rhs - boundary_term).norm() / scale;
    Ok(EnergyReport {
        lambda,
        lhs,
        rhs,
        boundary_term,
        relative_residual,
        window: (profile.x(l), profile.x(r)),
        requested_window: (x_l, x_r),
        shrunk: win.shrunk,
    })
}

/// Coefficient of variation of `(e^{-theta} u0) / psi = u0 / phi_x` over the
/// middle half of the grid, where `|phi_x|` is not negligible.
pub fn kernel_simplicity(u0: &[Complex64], profile: &FrontProfile) -> Result<f64> {
    if u0.len() != profile.len() {
        return arg(format!("u0 has {} samples, grid has {}", u0.len(), profile.len()));
    }
    let n = profile.len();
    let peak = profile.phi_x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ratios: Vec<Complex64> = (n / 4..n - n / 4)
        .filter(|&i| profile.phi_x[i].abs() >= 1e-6 * peak)
        .map(|i| u0[i] / profile.phi_x[i])
        .collect();
    if ratios.is_empty() {
        return Err(Error::Numerical("no usable samples for the kernel check".into()));
    }
    let k = ratios.len() as f64;
    let mean = ratios.iter().sum::<Complex64>() / k;
    let var = ratios.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / k;
    Ok(var.sqrt() / mean.norm().max(f64::MIN_POSITIVE))
}

/// Pads an interior vector (Dirichlet unknowns) with zero end values.
pub fn pad_interior(v: &[Complex64]) -> Vec<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    std::iter::once(z)
        .chain(v.iter().copied())
        .chain(std::iter::once(z))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::*;
    use approx::assert_relative_eq;

    fn setup() -> (Model, FrontProfile) {
        let m = Model::linear_quadratic(1.0, 0.0);
        let g = GridSpec::new(0.02, 40.0, 40.0).unwrap();
        let p = compute_profile(&m, 1.0, &g, &ShootOpts::default(), &ProfileOpts::default()).unwrap();
        (m, p)
    }

    #[test]
    fn theta_properties() {
        let (m, p) = setup();
        let th = theta(&p, &m, 0.0).unwrap();
        let i0 = p.index_of(0.0);
        assert_eq!(th[i0], 0.0);
        assert!(th.windows(2).all(|w| w[1] < w[0]));
        // phi ~ C e^{-x} gives theta ~ -(1/(2C)) e^x on the right
        let k = p.index_of(30.0);
        let amp = p.phi[k] * 30f64.exp();
        for x in [8.0, 12.0, 30.0] {
            let i = p.index_of(x);
            let ratio = th[i] / (-0.5 * x.exp() / amp);
            assert!((ratio - 1.0).abs() < 0.05, "{x} {ratio}");
        }
        assert!(theta(&p, &m, 100.0).is_err());
    }

    #[test]
    fn h_limits() {
        let (m, p) = setup();
        let hh = compute_h(&p, &m);
        assert_relative_eq!(hh[0], -1.25, epsilon = 1e-6);
        let n = p.len();
        assert!(hh[n - 1] < -1e10);
        assert!(hh[n - 1] < hh[n / 2]);
    }

    #[test]
    fn kernel_of_phi_x() {
        let (_, p) = setup();
        let u: Vec<Complex64> = p.phi_x.iter().map(|&v| Complex64::new(2.0 * v, 0.0)).collect();
        assert!(kernel_simplicity(&u, &p).unwrap() <= 1e-10);
        let u: Vec<Complex64> = (0..p.len())
            .map(|i| {
                let x = p.x(i);
                Complex64::new(p.phi_x[i] + 0.1 * x * (-x * x).exp(), 0.0)
            })
            .collect();
        assert!(kernel_simplicity(&u, &p).unwrap() > 1e-2);
    }

    #[test]
    fn multiple_of_psi() {
        let (m, p) = setup();
        let u: Vec<Complex64> = p.phi_x.iter().map(|&v| Complex64::new(4.0 * v, 0.0)).collect();
        let r = energy_identity(&u, Complex64::new(0.0, 0.0), &p, &m, (-20.0, 5.0), 0.0).unwrap();
        assert_eq!(r.rhs, 0.0);
        assert_eq!(r.lhs, Complex64::new(0.0, 0.0));
        assert_eq!(r.relative_residual, 0.0);
    }

    #[test]
    fn window_shrinks() {
        let (m, p) = setup();
        let u: Vec<Complex64> = p.phi_x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let r = energy_identity(&u, Complex64::new(0.0, 0.0), &p, &m, (-24.0, 24.0), 0.0).unwrap();
        assert!(r.shrunk);
        assert!(r.window.1 < 7.0);
        assert!(energy_identity(&u, Complex64::new(0.0, 0.0), &p, &m, (-50.0, 0.0), 0.0).is_err());
    }
}
