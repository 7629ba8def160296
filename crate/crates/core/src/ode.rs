//! Embedded Runge-Kutta 4(5) integrator (Dormand-Prince) with adaptive steps.

use crate::error::{Error, Result};

/// Step-size control parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOpts {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOpts {
    fn default() -> Self {
        IntegratorOpts {
            rtol: 1e-10,
            atol: 1e-10,
            h_init: 1e-3,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrator state. The last derivative is reused as the first stage of the
/// next step, and the step size carries over between calls.
#[derive(Debug, Clone)]
pub struct Dopri5<const N: usize> {
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    steps: usize,
    opts: IntegratorOpts,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new<F>(rhs: &mut F, t0: f64, y0: [f64; N], opts: IntegratorOpts) -> Self
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let k1 = rhs(t0, &y0);
        Dopri5 {
            t: t0,
            y: y0,
            k1,
            h: opts.h_init,
            steps: 0,
            opts,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> [f64; N] {
        self.y
    }

    /// Derivative at the current point.
    pub fn dy(&self) -> [f64; N] {
        self.k1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn fail(&self) -> Error {
        Error::Integration {
            steps: self.steps,
            t: self.t,
            state: self.y.to_vec(),
        }
    }

    /// Takes one accepted step, never passing `t_limit`. Returns `true` when
    /// the step ended exactly at `t_limit`.
    pub fn step<F>(&mut self, rhs: &mut F, t_limit: f64) -> Result<bool>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let dir = if t_limit >= self.t { 1.0 } else { -1.0 };
        loop {
            if self.steps >= self.opts.max_steps {
                return Err(self.fail());
            }
            let remaining = (t_limit - self.t).abs();
            let mut h = self.h.abs().min(self.opts.h_max);
            let hits_limit = h >= remaining;
            if hits_limit {
                h = remaining;
            }
            let h = dir * h;
            if h == 0.0 || !h.is_finite() {
                return Err(self.fail());
            }
            let (t, y, k1) = (self.t, &self.y, &self.k1);
            let k2 = rhs(t + C2 * h, &axpy(y, h, &[(A21, k1)]));
            let k3 = rhs(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
            let k4 = rhs(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(
                t + C5 * h,
                &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + h,
                &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = axpy(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let t_new = if hits_limit { t_limit } else { t + h };
            let k7 = rhs(t_new, &y_new);

            let mut err = 0.0;
            let mut finite = true;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
                finite &= y_new[i].is_finite() && k7[i].is_finite();
            }
            let err = (err / N as f64).sqrt();
            self.steps += 1;

            if finite && err <= 1.0 {
                let fac = if err == 0.0 {
                    10.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 10.0)
                };
                // a clamped final step says nothing about the natural step size
                if !hits_limit || fac < 1.0 {
                    self.h = h.abs() * fac;
                }
                self.t = t_new;
                self.y = y_new;
                self.k1 = k7;
                return Ok(hits_limit);
            }
            let fac = if finite {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            self.h = h.abs() * fac;
        }
    }

    /// Integrates until `t == target` exactly.
    pub fn advance_to<F>(&mut self, rhs: &mut F, target: f64) -> Result<()>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        while self.t != target {
            self.step(rhs, target)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut f = |_t: f64, y: &[f64; 1]| [-y[0]];
        let mut s = Dopri5::new(&mut f, 0.0, [1.0], IntegratorOpts::default());
        s.advance_to(&mut f, 5.0).unwrap();
        assert_eq!(s.t(), 5.0);
        assert!((s.y()[0] - (-5.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let mut f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut s = Dopri5::new(&mut f, 0.0, [1.0, 0.0], IntegratorOpts::default());
        s.advance_to(&mut f, -3.0).unwrap();
        assert!((s.y()[0] - 3.0f64.cos()).abs() < 1e-9);
        assert!((s.y()[1] - 3.0f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn step_budget() {
        let mut f = |_t: f64, y: &[f64; 1]| [y[0]];
        let opts = IntegratorOpts {
            max_steps: 3,
            ..Default::default()
        };
        let mut s = Dopri5::new(&mut f, 0.0, [1.0], opts);
        match s.advance_to(&mut f, 100.0) {
            Err(Error::Integration { steps, .. }) => assert_eq!(steps, 3),
            other => panic!("expected integration error, got {other:?}"),
        }
    }
}
