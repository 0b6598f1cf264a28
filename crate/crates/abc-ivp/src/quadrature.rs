//! Convolution-quadrature weights for the power kernel (t−s)^{α−1}.
//!
//! All panels have unit width in the scaled variable u = (t_target − s)/h,
//! so every weight reduces to centered kernel moments
//!
//! ν_p(c) = ∫_c^{c+1} u^{α−1} (u − c)^p du,   p ∈ {0, 1, 2},
//!
//! combined with the quadratic Lagrange basis expanded in powers of (u − c).
//! The centered expansion keeps all three terms at the same magnitude
//! O(c^{α−1}), so the assembly stays accurate for arbitrarily distant
//! panels; the raw moments (d^{α+p} − c^{α+p})/(α+p) would cancel O(c²)
//! digits. For c beyond 16 the moments themselves switch to a binomial
//! series in 1/c that is exact to round-off.

use crate::error::{Error, Result};
use crate::params::{AbcParams, Grid};

/// d^q − c^q for 0 ≤ c < d.
///
/// When the panel is narrow relative to c the difference is formed as
/// c^q·expm1(q·log1p((d−c)/c)) to avoid cancellation; direct subtraction
/// would lose a factor c/(d−c) of precision, which already breaks the
/// 1e-13 panel-sum identity near c ≈ 10³.
pub fn power_diff(q: f64, c: f64, d: f64) -> f64 {
    debug_assert!(0.0 <= c && c < d);
    if c > 0.0 && d - c <= 0.5 * c {
        c.powf(q) * (q * ((d - c) / c).ln_1p()).exp_m1()
    } else {
        d.powf(q) - c.powf(q)
    }
}

/// ∫_c^d u^{α−1} du, the kernel mass of one panel (in u-units).
pub fn kernel_integral(alpha: f64, c: f64, d: f64) -> f64 {
    power_diff(alpha, c, d) / alpha
}

/// Switch-over point between the direct moment formula and the 1/c series.
const SERIES_CUTOFF: f64 = 16.0;

/// Centered moments ν_p = ∫_c^{c+1} u^{α−1}(u−c)^p du for p = 0, 1, 2.
fn centered_moments(alpha: f64, c: f64) -> [f64; 3] {
    if c == 0.0 {
        return [1.0 / alpha, 1.0 / (alpha + 1.0), 1.0 / (alpha + 2.0)];
    }
    if c <= SERIES_CUTOFF {
        let d = c + 1.0;
        let mu: [f64; 3] = [
            power_diff(alpha, c, d) / alpha,
            power_diff(alpha + 1.0, c, d) / (alpha + 1.0),
            power_diff(alpha + 2.0, c, d) / (alpha + 2.0),
        ];
        return [
            mu[0],
            mu[1] - c * mu[0],
            mu[2] - 2.0 * c * mu[1] + c * c * mu[0],
        ];
    }
    // ν_p = c^{α−1} Σ_m binom(α−1, m) c^{−m} / (p+m+1)
    let scale = c.powf(alpha - 1.0);
    let mut out = [0.0_f64; 3];
    for (p, slot) in out.iter_mut().enumerate() {
        let mut sum = 0.0;
        let mut binom = 1.0;
        let mut c_pow = 1.0;
        for m in 0..48 {
            let term = binom * c_pow / (p as f64 + m as f64 + 1.0);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            binom *= (alpha - 1.0 - m as f64) / (m as f64 + 1.0);
            c_pow /= c;
        }
        *slot = scale * sum;
    }
    out
}

/// Weights of the three-node stencil {t_{k−1}, t_k, t_{k+1}} on the panel
/// [t_k, t_{k+1}] at distance c = target − 1 − k (u-units, no h^α factor).
/// Order matches the basis index j = 0, 1, 2 ↔ nodes k−1, k, k+1.
pub fn standard_panel_weights(alpha: f64, c: f64) -> [f64; 3] {
    let [n0, n1, n2] = centered_moments(alpha, c);
    [
        0.5 * (n2 - n1),
        2.0 * n1 - n2,
        0.5 * (n2 - 3.0 * n1 + 2.0 * n0),
    ]
}

/// Weights of the first-panel stencil {t_0, t_{1/2}, t_1} on [t_0, t_1]
/// at distance c = target − 1 (u-units, no h^α factor).
pub fn half_node_panel_weights(alpha: f64, c: f64) -> [f64; 3] {
    let [n0, n1, n2] = centered_moments(alpha, c);
    [
        2.0 * n2 - n1,
        4.0 * (n1 - n2),
        2.0 * n2 - 3.0 * n1 + n0,
    ]
}

/// Coefficients b⁰, b¹, b² and scale B = hᵅ/(α(α+1)(α+2)) making
/// B·Σ_j bʲ ψ_{n+j−2} reproduce ∫_{t_n}^{t_{n+1}} (t_{n+1}−s)^{α−1} ψ(s) ds
/// exactly for every quadratic ψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementWeights {
    pub b: [f64; 3],
    pub scale: f64,
}

impl IncrementWeights {
    /// B·Σ bʲ vⱼ for nodal values v = (ψ_{n−2}, ψ_{n−1}, ψ_n).
    pub fn apply(&self, values: [f64; 3]) -> f64 {
        self.scale * (self.b[0] * values[0] + self.b[1] * values[1] + self.b[2] * values[2])
    }
}

pub fn increment_weights(params: &AbcParams, h: f64) -> Result<IncrementWeights> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Domain(format!("step size must be positive, got {h}")));
    }
    let a = params.alpha();
    Ok(IncrementWeights {
        b: [
            0.5 * (a + 4.0),
            -2.0 * (a + 3.0),
            0.5 * (2.0 * a * a + 9.0 * a + 12.0),
        ],
        scale: h.powf(a) / (a * (a + 1.0) * (a + 2.0)),
    })
}

/// All quadrature weights aʲ'ᵏ of one target step: the history panels
/// k = 0..n−1 and the current panel k = n. The first panel interpolates on
/// {t_0, t_{1/2}, t_1}; every later panel on {t_{k−1}, t_k, t_{k+1}}.
#[derive(Debug, Clone)]
pub struct LagWeightTable {
    target: usize,
    alpha: f64,
    /// weights[k][j] = aʲ'ᵏ_target, h^α included.
    weights: Vec<[f64; 3]>,
}

impl LagWeightTable {
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// aʲ'ᵏ for this target.
    pub fn weight(&self, j: usize, k: usize) -> f64 {
        self.weights[k][j]
    }

    pub fn panel(&self, k: usize) -> [f64; 3] {
        self.weights[k]
    }

    pub fn panels(&self) -> &[[f64; 3]] {
        &self.weights
    }
}

/// Builds the weight table aʲ'ᵏ_target for k = 0..target−1, j = 0..2.
pub fn lag_weights(params: &AbcParams, grid: &Grid, target: usize) -> Result<LagWeightTable> {
    if target < 1 || target > grid.n_steps() {
        return Err(Error::Domain(format!(
            "target step must lie in 1..={}, got {target}",
            grid.n_steps()
        )));
    }
    let alpha = params.alpha();
    let h_alpha = grid.h().powf(alpha);
    let n = target - 1;
    let mut weights = Vec::with_capacity(target);
    for k in 0..=n {
        let c = (n - k) as f64;
        let raw = if k == 0 {
            half_node_panel_weights(alpha, c)
        } else {
            standard_panel_weights(alpha, c)
        };
        weights.push([h_alpha * raw[0], h_alpha * raw[1], h_alpha * raw[2]]);
    }
    Ok(LagWeightTable {
        target,
        alpha,
        weights,
    })
}

/// Per-run weight cache for the solver.
///
/// The weights depend on the panel distance c = target − 1 − k only, so a
/// single pair of O(N) families serves every target; an explicit O(N²)
/// triangular table would repeat the same values (and could not reach the
/// N = 10⁵ stress regime).
#[derive(Debug, Clone)]
pub struct WeightTable {
    h_alpha: f64,
    /// standard stencil, indexed by distance c = 0..=N−2 (h^α included)
    standard: Vec<[f64; 3]>,
    /// first-panel stencil, indexed by distance c = 1..=N−1 (h^α included)
    half: Vec<[f64; 3]>,
    increment: IncrementWeights,
}

impl WeightTable {
    pub fn new(params: &AbcParams, grid: &Grid) -> Result<Self> {
        let alpha = params.alpha();
        let h_alpha = grid.h().powf(alpha);
        let n_steps = grid.n_steps();
        let scale = |w: [f64; 3]| [h_alpha * w[0], h_alpha * w[1], h_alpha * w[2]];
        let standard = (0..n_steps.saturating_sub(1))
            .map(|c| scale(standard_panel_weights(alpha, c as f64)))
            .collect();
        let half = (1..n_steps)
            .map(|c| scale(half_node_panel_weights(alpha, c as f64)))
            .collect();
        Ok(Self {
            h_alpha,
            standard,
            half,
            increment: increment_weights(params, grid.h())?,
        })
    }

    pub fn h_alpha(&self) -> f64 {
        self.h_alpha
    }

    /// Standard-stencil panel at distance c (h^α included).
    pub fn standard_panel(&self, c: usize) -> [f64; 3] {
        self.standard[c]
    }

    /// First-panel weights at distance c ≥ 1 (h^α included).
    pub fn half_node_panel(&self, c: usize) -> [f64; 3] {
        self.half[c - 1]
    }

    /// Current-panel weights aʲ'ⁿ of the corrector (distance 0).
    pub fn corrector_panel(&self) -> [f64; 3] {
        self.standard[0]
    }

    pub fn increment(&self) -> &IncrementWeights {
        &self.increment
    }
}

/// Start-up kernel weights: w_i = ∫_0^U u^{α−1} ℓ_i(u) du where ℓ_i is the
/// Lagrange basis over the given u-nodes (1, 2 or 3 of them, h^α excluded).
pub(crate) fn startup_kernel_weights(alpha: f64, u_end: f64, nodes: &[f64]) -> Vec<f64> {
    let m = |p: usize| u_end.powf(alpha + p as f64) / (alpha + p as f64);
    match nodes {
        [_] => vec![m(0)],
        [z0, z1] => {
            let (m0, m1) = (m(0), m(1));
            vec![(m1 - z1 * m0) / (z0 - z1), (m1 - z0 * m0) / (z1 - z0)]
        }
        [z0, z1, z2] => {
            let (m0, m1, m2) = (m(0), m(1), m(2));
            let w = |zi: f64, za: f64, zb: f64| {
                (m2 - (za + zb) * m1 + za * zb * m0) / ((zi - za) * (zi - zb))
            };
            vec![w(*z0, *z1, *z2), w(*z1, *z0, *z2), w(*z2, *z0, *z1)]
        }
        _ => unreachable!("start-up interpolation uses at most three nodes"),
    }
}
