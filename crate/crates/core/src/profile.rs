//! Monotone fronts `phi(xi)` with `phi(-inf) = 1`, `phi(+inf) = 0`.
//!
//! The front is a heteroclinic orbit of the desingularised system
//! `dphi/dtau = D(phi) v`, `dv/dtau = -c v - D'(phi) v^2 - f(phi)`, which is
//! regular at the degenerate state. Shooting in `tau` classifies the orbit,
//! and the profile on a uniform `xi` grid is then rebuilt from the regular
//! `xi`-form away from the degeneracy, the center manifold `v = H(phi)` near
//! it, and exponential tails beyond that.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::model::Model;
use crate::ode::{Dopri5, IntegratorOpts};

/// Unstable eigenvalue `eta` at `(1, 0)` and its eigenvector `(1, eta)`.
pub fn linearization_at_one(model: &Model, c: f64) -> Result<(f64, [f64; 2])> {
    if !(c > 0.0) {
        return arg(format!("speed must be positive, got {c}"));
    }
    let d1 = model.d1();
    let disc = c * c - 4.0 * d1 * model.fp1();
    // -c + sqrt(disc) cancels badly for large c
    let eta = -2.0 * model.fp1() / (c + disc.sqrt());
    debug_assert!(eta > 0.0 && d1 > 0.0);
    Ok((eta, [1.0, eta]))
}

/// First two coefficients of the center manifold `v = h1 phi + h2 phi^2 + ...`
/// at the degenerate saddle-node `(0, 0)`.
pub fn center_manifold_coeffs(model: &Model, c: f64) -> Result<(f64, f64)> {
    if !(c > 0.0) {
        return arg(format!("speed must be positive, got {c}"));
    }
    let (fp0, fpp0, dp0) = (model.fp0(), model.fpp0(), model.dp0());
    let h1 = -fp0 / c;
    let h2 = -(fpp0 * c * c + 4.0 * dp0 * fp0 * fp0) / (2.0 * c.powi(3));
    Ok((h1, h2))
}

/// Taylor coefficients `[h_0, h_1, ..., h_order]` of the center manifold,
/// from the invariance relation `D H' H = -c H - D' H^2 - f`.
pub fn center_manifold_series(model: &Model, c: f64, order: usize) -> Result<Vec<f64>> {
    if !(c > 0.0) {
        return arg(format!("speed must be positive, got {c}"));
    }
    let n = order.max(1);
    // D and f are quadratic polynomials for the shipped families
    let taylor = |v0: f64, v1: f64, v2: f64| {
        let mut t = vec![0.0; n + 1];
        t[0] = v0;
        t[1] = v1;
        if n >= 2 {
            t[2] = v2 / 2.0;
        }
        t
    };
    let dc = taylor(model.d(0.0), model.dp(0.0), model.dpp(0.0));
    let dpc = taylor(model.dp(0.0), model.dpp(0.0), 0.0);
    let fc = taylor(model.f(0.0), model.fp(0.0), model.fpp(0.0));
    let conv = |a: &[f64], b: &[f64]| {
        let mut out = vec![0.0; n + 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
                out[i + j] += ai * bj;
            }
        }
        out
    };
    let mut h = vec![0.0; n + 1];
    for m in 1..=n {
        let h2 = conv(&h, &h);
        let t1 = conv(&dpc, &h2);
        let hp: Vec<f64> = (0..=n)
            .map(|k| if k < n { (k + 1) as f64 * h[k + 1] } else { 0.0 })
            .collect();
        let t2 = conv(&conv(&hp, &dc), &h);
        h[m] = -(fc[m] + t1[m] + t2[m]) / c;
    }
    Ok(h)
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_deriv(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &a)| acc * x + k as f64 * a)
}

/// Fate of the unstable manifold of `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// Reaches `(0, 0)` along the center manifold.
    Smooth,
    /// Ends at `(0, -c/D'(0))`: the threshold-speed wave.
    Sharp,
    /// `v` returns to zero before `phi` does.
    Undershoot,
    /// Passes below `v = -c/D'(0)`.
    Overshoot,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Smooth => "smooth",
            Classification::Sharp => "sharp",
            Classification::Undershoot => "undershoot",
            Classification::Overshoot => "overshoot",
        };
        f.write_str(s)
    }
}

/// A shot orbit in the `tau` parametrisation.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub c: f64,
    pub delta0: f64,
    pub tau_samples: Vec<f64>,
    /// `(phi, v)` pairs.
    pub states: Vec<[f64; 2]>,
    pub classification: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOpts {
    /// Offset from `(1, 0)` along the unstable eigenvector.
    pub delta0: f64,
    /// The fate of the orbit is decided once `phi` falls below this level.
    pub phi_classify: f64,
    /// Half-width of the band around `v = -c/D'(0)` counted as sharp.
    pub tol_v: f64,
    pub integrator: IntegratorOpts,
}

impl Default for ShootOpts {
    fn default() -> Self {
        ShootOpts {
            delta0: 1e-6,
            phi_classify: 1e-4,
            tol_v: 1e-3,
            integrator: IntegratorOpts::default(),
        }
    }
}

/// Integrates the `tau`-system from `(1 - delta0, -delta0 eta)` and classifies
/// the orbit.
pub fn shoot_orbit(model: &Model, c: f64, opts: &ShootOpts) -> Result<Orbit> {
    if !(c > 0.0) {
        return arg(format!("speed must be positive, got {c}"));
    }
    if !(opts.delta0 > 0.0 && opts.delta0 <= 1e-4) {
        return arg(format!("delta0 must lie in (0, 1e-4], got {}", opts.delta0));
    }
    let (eta, _) = linearization_at_one(model, c)?;
    let m = *model;
    let mut rhs = move |_t: f64, y: &[f64; 2]| {
        let (p, v) = (y[0], y[1]);
        [m.d(p) * v, -c * v - m.dp(p) * v * v - m.f(p)]
    };
    let y0 = [1.0 - opts.delta0, -opts.delta0 * eta];
    let mut st = Dopri5::new(&mut rhs, 0.0, y0, opts.integrator);
    let v_sharp = -c / model.dp0();
    let mut tau_samples = vec![0.0];
    let mut states = vec![y0];

    let classification = loop {
        st.step(&mut rhs, f64::INFINITY)?;
        let [p, v] = st.y();
        tau_samples.push(st.t());
        states.push([p, v]);
        // below the line v = -c/D'(0) the orbit can never come back when D'' >= 0
        if v < v_sharp - opts.tol_v {
            break Classification::Overshoot;
        }
        if v >= 0.0 && p > 0.0 {
            break Classification::Undershoot;
        }
        if p <= opts.phi_classify {
            break if (v - v_sharp).abs() <= opts.tol_v {
                Classification::Sharp
            } else {
                Classification::Smooth
            };
        }
    };
    Ok(Orbit {
        c,
        delta0: opts.delta0,
        tau_samples,
        states,
        classification,
    })
}

/// Bisection for the minimal front speed on the smooth / non-smooth boundary.
pub fn estimate_c_star(model: &Model, bracket: (f64, f64), tol: f64, opts: &ShootOpts) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo && tol > 0.0) {
        return arg(format!("need 0 < c_lo < c_hi and tol > 0, got ({lo}, {hi}), {tol}"));
    }
    let smooth = |c: f64| -> Result<bool> { Ok(shoot_orbit(model, c, opts)?.classification == Classification::Smooth) };
    if smooth(lo)? {
        return arg(format!("c_lo = {lo} already gives a smooth front"));
    }
    if !smooth(hi)? {
        return arg(format!("c_hi = {hi} does not give a smooth front"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if smooth(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Uniform grid on `[-x_minus, x_plus]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub h: f64,
    pub x_minus: f64,
    pub x_plus: f64,
}

impl GridSpec {
    pub fn new(h: f64, x_minus: f64, x_plus: f64) -> Result<Self> {
        if !(h > 0.0 && x_minus > 0.0 && x_plus > 0.0) {
            return arg(format!("grid needs h, X_-, X_+ > 0, got {h}, {x_minus}, {x_plus}"));
        }
        Ok(GridSpec { h, x_minus, x_plus })
    }

    /// Truncation where the predicted tail magnitudes fall below `1e-10`,
    /// rounded up to whole units.
    pub fn auto(model: &Model, c: f64, h: f64) -> Result<Self> {
        let (eta, _) = linearization_at_one(model, c)?;
        let ln10 = std::f64::consts::LN_10;
        let x_plus = (10.0 * c / model.fp0() * ln10).ceil();
        let x_minus = (10.0 * ln10 / eta).ceil();
        Self::new(h, x_minus, x_plus)
    }

    pub fn n(&self) -> usize {
        ((self.x_minus + self.x_plus) / self.h).round() as usize + 1
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.x_minus + i as f64 * self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOpts {
    /// Below this `phi` the center manifold replaces the `xi`-form.
    pub phi_switch: f64,
    /// Below this `phi` the exponential tail takes over.
    pub phi_stop: f64,
    pub cm_order: usize,
    pub integrator: IntegratorOpts,
}

impl Default for ProfileOpts {
    fn default() -> Self {
        ProfileOpts {
            phi_switch: 1e-3,
            phi_stop: 1e-9,
            cm_order: 12,
            integrator: IntegratorOpts {
                rtol: 1e-10,
                atol: 1e-14,
                ..Default::default()
            },
        }
    }
}

/// Front sampled on a uniform grid together with its tail data.
#[derive(Debug, Clone)]
pub struct FrontProfile {
    pub xi0: f64,
    pub h: f64,
    pub phi: Vec<f64>,
    pub phi_x: Vec<f64>,
    pub c: f64,
    /// `eta`, the rate of `1 - phi` at `-inf`.
    pub rate_minus: f64,
    /// `f'(0)/c`, the rate of `phi` at `+inf`.
    pub rate_plus: f64,
    /// Position with `phi = 1/2`.
    pub anchor: f64,
    /// Left of this point `phi = 1 - delta0 exp(eta (x - left_cut))`.
    pub left_cut: f64,
    pub delta0: f64,
    /// Start of the center-manifold segment.
    pub switch: Option<f64>,
    /// Start of the exponential right tail.
    pub right_cut: Option<f64>,
    /// Center manifold coefficients used in the reconstruction.
    pub cm: Vec<f64>,
}

impl FrontProfile {
    /// Profile from raw samples (no tail regions).
    pub fn from_samples(model: &Model, c: f64, xi0: f64, h: f64, phi: Vec<f64>, phi_x: Vec<f64>) -> Result<Self> {
        if phi.len() != phi_x.len() || phi.len() < 3 {
            return arg("phi and phi_x need equal length >= 3");
        }
        let (eta, _) = linearization_at_one(model, c)?;
        let cm = center_manifold_series(model, c, 12)?;
        let anchor_idx = nearest(&phi, 0.5);
        Ok(FrontProfile {
            xi0,
            h,
            rate_minus: eta,
            rate_plus: model.fp0() / c,
            anchor: xi0 + h * anchor_idx as f64,
            left_cut: xi0,
            delta0: 0.0,
            switch: None,
            right_cut: None,
            cm,
            c,
            phi,
            phi_x,
        })
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xi0 + i as f64 * self.h
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn x_minus(&self) -> f64 {
        -self.xi0
    }

    pub fn x_plus(&self) -> f64 {
        self.x(self.len() - 1)
    }

    /// Grid index closest to `x`.
    pub fn index_of(&self, x: f64) -> usize {
        (((x - self.xi0) / self.h).round().max(0.0) as usize).min(self.len() - 1)
    }

    /// `phi_xx` from the profile equation where `D(phi) >= 1e-8`, else from
    /// the center manifold `phi_xx = H'(phi) phi_x`.
    pub fn phi_xx(&self, model: &Model) -> Vec<f64> {
        self.phi
            .iter()
            .zip(&self.phi_x)
            .map(|(&p, &px)| {
                let d = model.d(p);
                if d >= 1e-8 {
                    (-self.c * px - model.dp(p) * px * px - model.f(p)) / d
                } else {
                    poly_deriv(&self.cm, p) * px
                }
            })
            .collect()
    }

    pub fn meta(&self) -> ProfileMeta {
        ProfileMeta {
            c: self.c,
            h: self.h,
            n: self.len(),
            x_minus: self.x_minus(),
            x_plus: self.x_plus(),
            tail_rates: TailRates {
                rate_minus: self.rate_minus,
                rate_plus: self.rate_plus,
            },
            anchor: self.anchor,
            left_cut: self.left_cut,
            switch: self.switch,
            right_cut: self.right_cut,
        }
    }

    /// CSV with columns `xi, phi, phi_x`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["xi", "phi", "phi_x"])?;
        for i in 0..self.len() {
            w.serialize((self.x(i), self.phi[i], self.phi_x[i]))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_sidecar(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut f, &self.meta())?;
        writeln!(f)?;
        Ok(())
    }
}

fn nearest(phi: &[f64], target: f64) -> usize {
    phi.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRates {
    pub rate_minus: f64,
    pub rate_plus: f64,
}

/// JSON sidecar of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub c: f64,
    pub h: f64,
    pub n: usize,
    #[serde(rename = "X_minus")]
    pub x_minus: f64,
    #[serde(rename = "X_plus")]
    pub x_plus: f64,
    pub tail_rates: TailRates,
    pub anchor: f64,
    pub left_cut: f64,
    pub switch: Option<f64>,
    pub right_cut: Option<f64>,
}

fn xi_rhs(model: Model, c: f64) -> impl FnMut(f64, &[f64; 2]) -> [f64; 2] {
    move |_x, y| {
        let (p, v) = (y[0], y[1]);
        [v, (-c * v - model.dp(p) * v * v - model.f(p)) / model.d(p)]
    }
}

/// Arc length `xi = int D(phi) dtau` along the orbit (trapezoid) at which
/// `phi` first reaches 1/2.
fn half_crossing_xi(orbit: &Orbit, model: &Model) -> Option<f64> {
    let mut xi = 0.0;
    for k in 1..orbit.states.len() {
        let (p0, p1) = (orbit.states[k - 1][0], orbit.states[k][0]);
        let dxi = 0.5 * (model.d(p0) + model.d(p1)) * (orbit.tau_samples[k] - orbit.tau_samples[k - 1]);
        if p1 <= 0.5 {
            let s = (p0 - 0.5) / (p0 - p1);
            return Some(xi + s * dxi);
        }
        xi += dxi;
    }
    None
}

/// Rebuilds `phi` on the grid from a smooth orbit.
pub fn reconstruct_profile(
    orbit: &Orbit,
    model: &Model,
    c: f64,
    grid: &GridSpec,
    opts: &ProfileOpts,
) -> Result<FrontProfile> {
    if orbit.classification != Classification::Smooth {
        return Err(Error::NoFront {
            c,
            classification: orbit.classification.to_string(),
        });
    }
    let (eta, _) = linearization_at_one(model, c)?;
    let delta0 = orbit.delta0;
    let y0 = [1.0 - delta0, -delta0 * eta];
    let mut rhs = xi_rhs(*model, c);

    // locate phi = 1/2 in the xi-form, starting from the orbit's estimate
    let guess =
        half_crossing_xi(orbit, model).ok_or_else(|| Error::Numerical("orbit never reaches phi = 1/2".into()))?;
    let mut st = Dopri5::new(&mut rhs, 0.0, y0, opts.integrator);
    let mut before = st.clone();
    while st.y()[0] > 0.5 {
        before = st.clone();
        st.step(&mut rhs, f64::INFINITY)?;
    }
    let (sa, sb) = (before.t(), st.t());
    let mut s = guess.clamp(sa, sb);
    for _ in 0..60 {
        let mut probe = before.clone();
        probe.advance_to(&mut rhs, s)?;
        let [p, v] = probe.y();
        let ds = (p - 0.5) / v;
        s = (s - ds).clamp(sa, sb);
        if ds.abs() <= 1e-15 * (1.0 + s.abs()) {
            break;
        }
    }
    let x_start = -s;

    let n = grid.n();
    let mut phi = vec![0.0; n];
    let mut phi_x = vec![0.0; n];
    let cm = center_manifold_series(model, c, opts.cm_order)?;
    let rate_plus = model.fp0() / c;

    let mut i = 0;
    while i < n && grid.node(i) < x_start {
        let e = delta0 * (eta * (grid.node(i) - x_start)).exp();
        phi[i] = 1.0 - e;
        phi_x[i] = -eta * e;
        i += 1;
    }

    let mut st = Dopri5::new(&mut rhs, x_start, y0, opts.integrator);
    let mut switch = None;
    while i < n {
        st.advance_to(&mut rhs, grid.node(i))?;
        let [p, v] = st.y();
        phi[i] = p;
        phi_x[i] = v;
        i += 1;
        if p <= opts.phi_switch {
            switch = Some(grid.node(i - 1));
            break;
        }
    }

    let mut right_cut = None;
    if let Some(xs) = switch {
        let cm_ref = cm.clone();
        let mut h_rhs = move |_x: f64, y: &[f64; 1]| [poly(&cm_ref, y[0])];
        let opts1 = IntegratorOpts {
            atol: opts.phi_stop * 1e-12,
            ..opts.integrator
        };
        let mut st1 = Dopri5::new(&mut h_rhs, xs, [phi[i - 1]], opts1);
        while i < n {
            st1.advance_to(&mut h_rhs, grid.node(i))?;
            let p = st1.y()[0];
            phi[i] = p;
            phi_x[i] = poly(&cm, p);
            i += 1;
            if p < opts.phi_stop {
                right_cut = Some(grid.node(i - 1));
                break;
            }
        }
        if let Some(xc) = right_cut {
            let pc = phi[i - 1];
            while i < n {
                let p = pc * (-rate_plus * (grid.node(i) - xc)).exp();
                phi[i] = p;
                phi_x[i] = -rate_plus * p;
                i += 1;
            }
        }
    }

    for k in 0..n {
        if !(phi[k] > 0.0 && phi[k] < 1.0 && phi_x[k] < 0.0) {
            return Err(Error::Numerical(format!(
                "reconstructed profile not monotone at xi = {}: phi = {}, phi_x = {}",
                grid.node(k),
                phi[k],
                phi_x[k]
            )));
        }
    }

    Ok(FrontProfile {
        xi0: grid.node(0),
        h: grid.h,
        phi,
        phi_x,
        c,
        rate_minus: eta,
        rate_plus,
        anchor: 0.0,
        left_cut: x_start,
        delta0,
        switch,
        right_cut,
        cm,
    })
}

/// Shoots and reconstructs in one go.
pub fn compute_profile(
    model: &Model,
    c: f64,
    grid: &GridSpec,
    shoot: &ShootOpts,
    opts: &ProfileOpts,
) -> Result<FrontProfile> {
    let orbit = shoot_orbit(model, c, shoot)?;
    reconstruct_profile(&orbit, model, c, grid, opts)
}

/// Conservative central-difference residual of `(D(phi) phi_x)_x + c phi_x + f(phi)`
/// at the interior nodes.
pub fn profile_residual(profile: &FrontProfile, model: &Model) -> Vec<f64> {
    let p = &profile.phi;
    let (h, c) = (profile.h, profile.c);
    (1..p.len() - 1)
        .map(|i| {
            let dl = model.d(0.5 * (p[i - 1] + p[i]));
            let dr = model.d(0.5 * (p[i] + p[i + 1]));
            (dr * (p[i + 1] - p[i]) - dl * (p[i] - p[i - 1])) / (h * h)
                + c * (p[i + 1] - p[i - 1]) / (2.0 * h)
                + model.f(p[i])
        })
        .collect()
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model_a() -> Model {
        Model::linear_quadratic(1.0, 0.0)
    }

    #[test]
    fn eta_closed_form() {
        let (eta, v) = linearization_at_one(&model_a(), 1.0).unwrap();
        assert_relative_eq!(eta, (5f64.sqrt() - 1.0) / 2.0, epsilon = 1e-14);
        assert_eq!(v, [1.0, eta]);
        let (eta2, _) = linearization_at_one(&model_a(), 2.0).unwrap();
        assert_relative_eq!(eta2, 2f64.sqrt() - 1.0, epsilon = 1e-14);
        let (eta_big, _) = linearization_at_one(&model_a(), 1e6).unwrap();
        assert_relative_eq!(eta_big * 1e6, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn center_manifold() {
        assert_eq!(center_manifold_coeffs(&model_a(), 1.0).unwrap(), (-1.0, -1.0));
        let (h1, h2) = center_manifold_coeffs(&Model::linear_quadratic(2.0, 0.0), 1.0).unwrap();
        assert_eq!((h1, h2), (-1.0, -3.0));
        let s = center_manifold_series(&model_a(), 1.0, 6).unwrap();
        assert_eq!(s, vec![0.0, -1.0, -1.0, -5.0, -33.0, -266.0, -2492.0]);
        let m = Model::linear_quadratic(1.3, 0.4);
        let (h1, h2) = center_manifold_coeffs(&m, 0.9).unwrap();
        let s = center_manifold_series(&m, 0.9, 4).unwrap();
        assert_relative_eq!(s[1], h1, epsilon = 1e-14);
        assert_relative_eq!(s[2], h2, epsilon = 1e-14);
    }

    #[test]
    fn shooting_classifies() {
        let o = shoot_orbit(&model_a(), 1.0, &ShootOpts::default()).unwrap();
        assert_eq!(o.classification, Classification::Smooth);
        assert!(o.states[0][1] < 0.0);
        let o = shoot_orbit(&model_a(), 0.5, &ShootOpts::default()).unwrap();
        assert_ne!(o.classification, Classification::Smooth);
        let bad = ShootOpts {
            delta0: 1e-3,
            ..Default::default()
        };
        assert!(shoot_orbit(&model_a(), 1.0, &bad).is_err());
    }

    #[test]
    fn bracket_validation() {
        let o = ShootOpts::default();
        assert!(estimate_c_star(&model_a(), (1.0, 2.0), 1e-4, &o).is_err());
        assert!(estimate_c_star(&model_a(), (0.1, 0.2), 1e-4, &o).is_err());
        assert!(estimate_c_star(&model_a(), (0.5, 0.4), 1e-4, &o).is_err());
    }

    #[test]
    fn residual_of_constants() {
        let m = model_a();
        let p = FrontProfile::from_samples(&m, 1.0, 0.0, 0.1, vec![1.0; 5], vec![0.0; 5]).unwrap();
        assert!(profile_residual(&p, &m).iter().all(|&r| r == 0.0));
        let p = FrontProfile::from_samples(&m, 1.0, 0.0, 0.1, vec![0.5; 5], vec![0.0; 5]).unwrap();
        assert!(profile_residual(&p, &m).iter().all(|&r| r == 0.25));
    }

    #[test]
    fn reconstructed_front() {
        let m = model_a();
        let g = GridSpec::new(0.02, 40.0, 40.0).unwrap();
        let p = compute_profile(&m, 1.0, &g, &ShootOpts::default(), &ProfileOpts::default()).unwrap();
        assert_eq!(p.len(), 4001);
        let i0 = p.index_of(0.0);
        assert!((p.phi[i0] - 0.5).abs() < 1e-8);
        assert!(p.phi[0] > 1.0 - 1e-8);
        assert!(p.phi[p.len() - 1] < 1e-8);
        assert!(p.phi_x.iter().all(|&v| v < 0.0));
        assert!(p.switch.is_some() && p.right_cut.is_some());
        // differenced phi against phi_x
        let err = (1..p.len() - 1)
            .map(|i| ((p.phi[i + 1] - p.phi[i - 1]) / (2.0 * p.h) - p.phi_x[i]).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn auto_grid() {
        let g = GridSpec::auto(&model_a(), 1.0, 0.01).unwrap();
        assert_eq!(g.x_plus, 24.0);
        assert_eq!(g.x_minus, 38.0);
    }
}
