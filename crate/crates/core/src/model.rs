//! Diffusion and reaction families, hypothesis checks and speed thresholds.
//!
//! The equation is `u_t = (D(u) u_x)_x + f(u)` with a diffusion coefficient
//! that vanishes at `u = 0` and a Fisher-KPP reaction connecting the unstable
//! state `u = 0` to the stable state `u = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};

/// Diffusion coefficient families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diffusion {
    /// `D(u) = alpha u + beta u^2`.
    LinearQuadratic { alpha: f64, beta: f64 },
}

/// Reaction families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reaction {
    /// `f(u) = u (1 - u)`.
    Logistic,
}

/// Which of the two model functions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Diffusion,
    Reaction,
}

/// A `(D, f)` pair together with the scalars the stability analysis keeps
/// asking for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct Model {
    diffusion: Diffusion,
    reaction: Reaction,
    fp0: f64,
    fp1: f64,
    d1: f64,
    dp0: f64,
    fpp0: f64,
}

impl Model {
    pub fn new(diffusion: Diffusion, reaction: Reaction) -> Self {
        let mut m = Model {
            diffusion,
            reaction,
            fp0: 0.0,
            fp1: 0.0,
            d1: 0.0,
            dp0: 0.0,
            fpp0: 0.0,
        };
        m.fp0 = m.fp(0.0);
        m.fp1 = m.fp(1.0);
        m.d1 = m.d(1.0);
        m.dp0 = m.dp(0.0);
        m.fpp0 = m.fpp(0.0);
        m
    }

    /// `D(u) = alpha u + beta u^2` with the logistic reaction.
    pub fn linear_quadratic(alpha: f64, beta: f64) -> Self {
        Self::new(Diffusion::LinearQuadratic { alpha, beta }, Reaction::Logistic)
    }

    pub fn diffusion(&self) -> Diffusion {
        self.diffusion
    }

    pub fn reaction(&self) -> Reaction {
        self.reaction
    }

    /// `f'(0)`
    pub fn fp0(&self) -> f64 {
        self.fp0
    }

    /// `f'(1)`
    pub fn fp1(&self) -> f64 {
        self.fp1
    }

    /// `D(1)`
    pub fn d1(&self) -> f64 {
        self.d1
    }

    /// `D'(0)`
    pub fn dp0(&self) -> f64 {
        self.dp0
    }

    /// `f''(0)`
    pub fn fpp0(&self) -> f64 {
        self.fpp0
    }

    /// Closed-form value of `D`, `D'`, `D''`, `f`, `f'` or `f''` at `u`.
    pub fn eval(&self, u: f64, which: Which, order: u8) -> Result<f64> {
        match (which, order) {
            (Which::Diffusion, 0) => Ok(self.d(u)),
            (Which::Diffusion, 1) => Ok(self.dp(u)),
            (Which::Diffusion, 2) => Ok(self.dpp(u)),
            (Which::Reaction, 0) => Ok(self.f(u)),
            (Which::Reaction, 1) => Ok(self.fp(u)),
            (Which::Reaction, 2) => Ok(self.fpp(u)),
            _ => arg(format!("derivative order {order} not supported (0..=2)")),
        }
    }

    #[inline]
    pub fn d(&self, u: f64) -> f64 {
        match self.diffusion {
            Diffusion::LinearQuadratic { alpha, beta } => u * (alpha + beta * u),
        }
    }

    #[inline]
    pub fn dp(&self, u: f64) -> f64 {
        match self.diffusion {
            Diffusion::LinearQuadratic { alpha, beta } => alpha + 2.0 * beta * u,
        }
    }

    #[inline]
    pub fn dpp(&self, _u: f64) -> f64 {
        match self.diffusion {
            Diffusion::LinearQuadratic { beta, .. } => 2.0 * beta,
        }
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        match self.reaction {
            Reaction::Logistic => u * (1.0 - u),
        }
    }

    #[inline]
    pub fn fp(&self, u: f64) -> f64 {
        match self.reaction {
            Reaction::Logistic => 1.0 - 2.0 * u,
        }
    }

    #[inline]
    pub fn fpp(&self, _u: f64) -> f64 {
        match self.reaction {
            Reaction::Logistic => -2.0,
        }
    }

    /// Samples the structural hypotheses on a uniform grid of `[0, 1]` and
    /// records the worst offender of each violated inequality.
    pub fn check_hypotheses(&self, n_samples: usize) -> Result<HypothesisReport> {
        if n_samples < 3 {
            return arg(format!("need at least 3 samples, got {n_samples}"));
        }
        let grid: Vec<f64> = (0..n_samples).map(|j| j as f64 / (n_samples - 1) as f64).collect();
        let interior = &grid[1..n_samples - 1];
        let mut violations = Vec::new();

        let mut exact_zero = |id: Hypothesis, u: f64, value: f64| {
            if value != 0.0 {
                violations.push(Violation {
                    hypothesis: id,
                    u,
                    observed: value,
                });
            }
        };
        exact_zero(Hypothesis::DiffusionVanishesAtZero, 0.0, self.d(0.0));
        exact_zero(Hypothesis::ReactionVanishesAtZero, 0.0, self.f(0.0));
        exact_zero(Hypothesis::ReactionVanishesAtOne, 1.0, self.f(1.0));

        // Positivity checks: keep the smallest observed value if it is <= 0.
        let mut worst_nonpositive = |id: Hypothesis, pts: &[f64], g: &dyn Fn(f64) -> f64| {
            let worst = pts.iter().map(|&u| (u, g(u))).min_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((u, v)) = worst {
                if v <= 0.0 {
                    violations.push(Violation {
                        hypothesis: id,
                        u,
                        observed: v,
                    });
                }
            }
        };
        worst_nonpositive(Hypothesis::DiffusionPositive, &grid[1..], &|u| self.d(u));
        worst_nonpositive(Hypothesis::DiffusionIncreasing, &grid, &|u| self.dp(u));
        worst_nonpositive(Hypothesis::ReactionPositive, interior, &|u| self.f(u));
        worst_nonpositive(Hypothesis::UnstableAtZero, &[0.0], &|u| self.fp(u));
        worst_nonpositive(Hypothesis::StableAtOne, &[1.0], &|u| -self.fp(u));

        Ok(HypothesisReport {
            passed: violations.is_empty(),
            violations,
        })
    }

    /// `max{c_star, f'(0) sqrt(D(1)) / sqrt(f'(0) - f'(1))}`: above this speed a
    /// stabilising exponential weight exists.
    pub fn speed_threshold(&self, c_star: f64) -> Result<f64> {
        if !(c_star > 0.0) {
            return arg(format!("c_star must be positive, got {c_star}"));
        }
        let gap = self.fp0 - self.fp1;
        if !(gap > 0.0) {
            return Err(Error::Domain(format!("f'(0) - f'(1) = {gap} is not positive")));
        }
        Ok(c_star.max(self.fp0 * self.d1.sqrt() / gap.sqrt()))
    }

    /// Closed-form minimal speed where one is known: exact for `D = alpha u`,
    /// first order in `beta` for `D = u + beta u^2` with `beta <= 0.2`.
    pub fn known_c_star(&self) -> Option<KnownCStar> {
        if self.reaction != Reaction::Logistic {
            return None;
        }
        let Diffusion::LinearQuadratic { alpha, beta } = self.diffusion;
        if alpha > 0.0 && beta == 0.0 {
            Some(KnownCStar {
                value: (alpha / 2.0).sqrt(),
                approximate: false,
            })
        } else if alpha == 1.0 && beta > 0.0 && beta <= 0.2 {
            Some(KnownCStar {
                value: (1.0 + beta / 5.0) / std::f64::consts::SQRT_2,
                approximate: true,
            })
        } else {
            None
        }
    }
}

/// A closed-form minimal speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnownCStar {
    pub value: f64,
    /// `true` when the value is a small-parameter expansion.
    pub approximate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    DiffusionVanishesAtZero,
    DiffusionPositive,
    DiffusionIncreasing,
    ReactionVanishesAtZero,
    ReactionVanishesAtOne,
    UnstableAtZero,
    StableAtOne,
    ReactionPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub hypothesis: Hypothesis,
    pub u: f64,
    pub observed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

#[derive(Serialize, Deserialize)]
struct DiffusionJson {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    #[serde(rename = "D")]
    d: DiffusionJson,
    f: Reaction,
}

impl TryFrom<ModelJson> for Model {
    type Error = String;

    fn try_from(m: ModelJson) -> Result<Self, String> {
        let DiffusionJson { alpha, beta } = m.d;
        if !(alpha.is_finite() && beta.is_finite()) || alpha < 0.0 || beta < 0.0 {
            return Err(format!("alpha and beta must be finite and >= 0, got ({alpha}, {beta})"));
        }
        Ok(Model::new(Diffusion::LinearQuadratic { alpha, beta }, m.f))
    }
}

impl From<Model> for ModelJson {
    fn from(m: Model) -> Self {
        let Diffusion::LinearQuadratic { alpha, beta } = m.diffusion;
        ModelJson {
            d: DiffusionJson { alpha, beta },
            f: m.reaction,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        let a = Model::linear_quadratic(1.0, 0.0);
        assert_eq!(a.eval(0.0, Which::Diffusion, 0).unwrap(), 0.0);
        assert_eq!(a.eval(0.0, Which::Reaction, 1).unwrap(), 1.0);
        let b = Model::linear_quadratic(1.0, 0.1);
        assert_relative_eq!(b.eval(1.0, Which::Diffusion, 0).unwrap(), 1.1, epsilon = 1e-15);
        assert!(matches!(a.eval(0.5, Which::Reaction, 3), Err(Error::Argument(_))));
    }

    #[test]
    fn cached_scalars() {
        let m = Model::linear_quadratic(2.0, 0.5);
        assert_eq!(m.fp0(), 1.0);
        assert_eq!(m.fp1(), -1.0);
        assert_eq!(m.d1(), 2.5);
        assert_eq!(m.dp0(), 2.0);
        assert_eq!(m.fpp0(), -2.0);
    }

    #[test]
    fn hypotheses() {
        assert!(Model::linear_quadratic(1.0, 0.0).check_hypotheses(101).unwrap().passed);
        assert!(Model::linear_quadratic(1.0, 0.1).check_hypotheses(101).unwrap().passed);

        let r = Model::linear_quadratic(0.0, 1.0).check_hypotheses(101).unwrap();
        assert!(!r.passed);
        assert_eq!(r.violations.len(), 1);
        let v = r.violations[0];
        assert_eq!(v.hypothesis, Hypothesis::DiffusionIncreasing);
        assert_eq!(v.u, 0.0);
        assert_eq!(v.observed, 0.0);

        assert!(Model::linear_quadratic(1.0, 0.0).check_hypotheses(2).is_err());
    }

    #[test]
    fn speed_threshold_examples() {
        let s2 = std::f64::consts::SQRT_2;
        let a = Model::linear_quadratic(1.0, 0.0);
        assert_relative_eq!(a.speed_threshold(1.0 / s2).unwrap(), 1.0 / s2, epsilon = 1e-15);

        let b = Model::linear_quadratic(1.0, 0.1);
        let t = b.speed_threshold((1.0 + 0.1 / 5.0) / s2).unwrap();
        assert_relative_eq!(t, 1.1f64.sqrt() / s2, epsilon = 1e-15);
        assert!((t - 0.74162).abs() < 1e-5);

        let c = Model::linear_quadratic(2.0, 0.0);
        assert_relative_eq!(c.speed_threshold(1.0).unwrap(), 1.0, epsilon = 1e-15);

        assert!(a.speed_threshold(0.0).is_err());
    }

    #[test]
    fn known_c_star_cases() {
        let k = Model::linear_quadratic(1.0, 0.0).known_c_star().unwrap();
        assert!(!k.approximate);
        assert!((k.value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);

        let k = Model::linear_quadratic(1.0, 0.1).known_c_star().unwrap();
        assert!(k.approximate);
        assert!((k.value - 0.72125).abs() < 1e-5);

        assert!(Model::linear_quadratic(3.0, 0.5).known_c_star().is_none());
    }

    #[test]
    fn json_shape() {
        let m = Model::linear_quadratic(1.0, 0.1);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"D":{"alpha":1.0,"beta":0.1},"f":"logistic"}"#);
        let back: Model = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Model>(r#"{"D":{"alpha":-1,"beta":0},"f":"logistic"}"#).is_err());
    }

    proptest! {
        #[test]
        fn degeneracy_and_positivity(alpha in 0.01f64..5.0, beta in 0.0f64..5.0) {
            let m = Model::linear_quadratic(alpha, beta);
            prop_assert!(m.check_hypotheses(101).unwrap().passed);
            prop_assert_eq!(m.eval(0.0, Which::Diffusion, 0).unwrap(), 0.0);
            prop_assert!(m.eval(1e-12, Which::Diffusion, 0).unwrap() > 0.0);
        }

        #[test]
        fn threshold_monotone(alpha in 0.01f64..5.0, beta in 0.0f64..5.0,
                              c1 in 0.01f64..3.0, dc in 0.0f64..3.0, db in 0.0f64..3.0) {
            let m = Model::linear_quadratic(alpha, beta);
            let t1 = m.speed_threshold(c1).unwrap();
            prop_assert!(m.speed_threshold(c1 + dc).unwrap() >= t1);
            // larger D(1) at fixed f
            let m2 = Model::linear_quadratic(alpha, beta + db);
            prop_assert!(m2.speed_threshold(c1).unwrap() >= t1);
        }
    }
}
