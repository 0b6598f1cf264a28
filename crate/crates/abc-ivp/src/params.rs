//! Fractional-order parameters and the uniform time grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Choice of the normalization function AB(α).
///
/// Both satisfy AB(0) = AB(1) = 1. `Unit` fixes AB ≡ 1; `GammaForm` uses
/// AB(α) = 1 − α + α/Γ(α).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Unit,
    GammaForm,
}

impl Normalization {
    pub fn evaluate(self, alpha: f64) -> f64 {
        match self {
            Normalization::Unit => 1.0,
            Normalization::GammaForm => 1.0 - alpha + alpha / special::gamma_unchecked(alpha),
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Normalization::Unit),
            "gamma" | "gamma_form" => Ok(Normalization::GammaForm),
            other => Err(Error::Parse(format!(
                "unknown normalization {other:?}, expected \"unit\" or \"gamma\""
            ))),
        }
    }
}

/// Fractional order α ∈ (0, 1) together with its normalization AB(α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcParams {
    alpha: f64,
    ab_of_alpha: f64,
    kind: Normalization,
}

impl AbcParams {
    pub fn new(alpha: f64, kind: Normalization) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
            return Err(Error::Domain(format!(
                "fractional order must lie in (0, 1), got {alpha}"
            )));
        }
        let ab_of_alpha = kind.evaluate(alpha);
        if !ab_of_alpha.is_finite() || ab_of_alpha <= 0.0 {
            return Err(Error::Domain(format!(
                "normalization AB({alpha}) = {ab_of_alpha} must be positive"
            )));
        }
        Ok(Self {
            alpha,
            ab_of_alpha,
            kind,
        })
    }

    pub fn unit(alpha: f64) -> Result<Self> {
        Self::new(alpha, Normalization::Unit)
    }

    pub fn gamma_form(alpha: f64) -> Result<Self> {
        Self::new(alpha, Normalization::GammaForm)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ab(&self) -> f64 {
        self.ab_of_alpha
    }

    pub fn normalization(&self) -> Normalization {
        self.kind
    }

    /// Coefficient (1 − α)/AB(α) of the pointwise term of the inverse operator.
    pub fn ab_f(&self) -> f64 {
        (1.0 - self.alpha) / self.ab_of_alpha
    }

    /// Coefficient α/(AB(α)·Γ(α)) of the kernel integral of the inverse operator.
    pub fn ab_g(&self) -> f64 {
        self.alpha / (self.ab_of_alpha * special::gamma_unchecked(self.alpha))
    }
}

/// Uniform mesh t_k = k·h on [0, T] with the auxiliary start-up nodes h/4 and h/2.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    t_end: f64,
    n_steps: usize,
    h: f64,
}

impl Grid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if !t_end.is_finite() || t_end <= 0.0 {
            return Err(Error::Domain(format!(
                "final time must be positive and finite, got {t_end}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::Domain("grid needs at least one step".into()));
        }
        Ok(Self {
            t_end,
            n_steps,
            h: t_end / n_steps as f64,
        })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node t_k = k·h.
    pub fn node(&self, k: usize) -> f64 {
        k as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(|k| self.node(k))
    }

    /// Auxiliary start-up nodes (t_{1/4}, t_{1/2}) = (h/4, h/2).
    pub fn startup_nodes(&self) -> (f64, f64) {
        (0.25 * self.h, 0.5 * self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_order_outside_unit_interval() {
        assert!(AbcParams::unit(0.0).is_err());
        assert!(AbcParams::unit(1.0).is_err());
        assert!(AbcParams::unit(-0.3).is_err());
        assert!(AbcParams::unit(f64::NAN).is_err());
        assert!(AbcParams::unit(0.5).is_ok());
    }

    #[test]
    fn gamma_form_normalization_value() {
        let p = AbcParams::gamma_form(0.5).unwrap();
        // 1 - 0.5 + 0.5/Γ(0.5)
        let expect = 0.5 + 0.5 / std::f64::consts::PI.sqrt();
        assert!((p.ab() - expect).abs() < 1e-15);
    }

    #[test]
    fn gamma_form_tends_to_one_at_both_ends() {
        // AB(α) → 1 as α → 0+ and α → 1−
        for alpha in [1e-6, 1.0 - 1e-6] {
            let ab = Normalization::GammaForm.evaluate(alpha);
            assert!(
                (ab - 1.0).abs() < 1e-4,
                "AB({alpha}) = {ab} not within 1e-4 of 1"
            );
        }
    }

    #[test]
    fn grid_nodes_are_strictly_increasing_and_cover_t_end() {
        let g = Grid::new(2.0, 40).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes.len(), 41);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        // h·N reproduces T up to one ulp
        assert!((g.h() * g.n_steps() as f64 - g.t_end()).abs() <= f64::EPSILON * g.t_end());
        let (q, half) = g.startup_nodes();
        assert!(0.0 < q && q < half && half < g.node(1));
    }

    #[test]
    fn grid_rejects_degenerate_input() {
        assert!(Grid::new(0.0, 10).is_err());
        assert!(Grid::new(-1.0, 10).is_err());
        assert!(Grid::new(1.0, 0).is_err());
    }
}
