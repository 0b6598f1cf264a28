//! Benchmark problems with known exact solutions and the fractional
//! SI epidemic model with its equilibrium structure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{AbcParams, Grid, Normalization};
use crate::solver::ProblemSpec;
use crate::special;

/// D^α y = tⁿ, y(0) = 1 on [0, 2], with the closed-form solution
/// y(t) = 1 + (1−α)/AB·tⁿ + α·Γ(n+1)/(AB·Γ(α+n+1))·t^{α+n}.
pub fn power_forcing_problem(exponent: u32, params: &AbcParams) -> Result<ProblemSpec> {
    if exponent > 10 {
        return Err(Error::Domain(format!(
            "forcing exponent must lie in 0..=10, got {exponent}"
        )));
    }
    let n = exponent as i32;
    let alpha = params.alpha();
    let ab = params.ab();
    let ab_f = params.ab_f();
    let power_coeff =
        alpha * special::gamma_unchecked(exponent as f64 + 1.0)
            / (ab * special::gamma_unchecked(alpha + exponent as f64 + 1.0));
    let problem = ProblemSpec::new(
        format!("tpow{exponent}"),
        2.0,
        vec![1.0],
        Box::new(move |t, _y, dy| dy[0] = t.powi(n)),
    )?;
    Ok(problem.with_exact(Box::new(move |t| {
        vec![1.0 + ab_f * t.powi(n) + power_coeff * t.powf(alpha + exponent as f64)]
    })))
}

/// D^α y = t − y, y(0) = 0 on [0, 1]; exact solution built from the
/// two-parameter Mittag-Leffler function.
pub fn linear_problem(params: &AbcParams) -> Result<ProblemSpec> {
    let p = *params;
    let problem = ProblemSpec::new(
        "linear",
        1.0,
        vec![0.0],
        Box::new(|t, y, dy| dy[0] = t - y[0]),
    )?;
    Ok(problem.with_exact(Box::new(move |t| {
        vec![special::linear_ivp_exact(t, &p).expect("t within [0, 1]")]
    })))
}

/// Incidence function φ(v) of the SI model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incidence {
    /// φ(v) = v
    Bilinear,
    /// φ(v) = v/(1 + 0.01·v)
    Saturated,
}

impl Incidence {
    pub fn phi(self, v: f64) -> f64 {
        match self {
            Incidence::Bilinear => v,
            Incidence::Saturated => v / (1.0 + 0.01 * v),
        }
    }

    pub fn phi_prime(self, v: f64) -> f64 {
        match self {
            Incidence::Bilinear => 1.0,
            Incidence::Saturated => {
                let d = 1.0 + 0.01 * v;
                1.0 / (d * d)
            }
        }
    }

    /// φ′(0), needed by the reproduction number; both choices give 1.
    pub fn phi_prime_at_zero(self) -> f64 {
        1.0
    }
}

impl std::str::FromStr for Incidence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bilinear" => Ok(Incidence::Bilinear),
            "saturated" => Ok(Incidence::Saturated),
            other => Err(Error::Parse(format!(
                "unknown incidence {other:?}, expected \"bilinear\" or \"saturated\""
            ))),
        }
    }
}

/// Rates of the SI model du = Λ − γ·u·φ(v) − μu, dv = γ·u·φ(v) − σv
/// with σ = σ̃ + μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicParams {
    pub lambda_birth: f64,
    pub gamma_transmission: f64,
    pub mu: f64,
    pub sigma_tilde: f64,
    pub incidence: Incidence,
}

impl EpidemicParams {
    pub fn new(
        lambda_birth: f64,
        gamma_transmission: f64,
        mu: f64,
        sigma_tilde: f64,
        incidence: Incidence,
    ) -> Result<Self> {
        for (name, v) in [
            ("lambda", lambda_birth),
            ("gamma", gamma_transmission),
            ("mu", mu),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!("rate {name} must be positive, got {v}")));
            }
        }
        if !sigma_tilde.is_finite() || sigma_tilde < 0.0 {
            return Err(Error::Domain(format!(
                "disease death rate must be nonnegative, got {sigma_tilde}"
            )));
        }
        let ep = Self {
            lambda_birth,
            gamma_transmission,
            mu,
            sigma_tilde,
            incidence,
        };
        ep.check_incidence()?;
        Ok(ep)
    }

    /// Verifies φ(0) = 0 and 0 < v·φ′(v) ≤ φ(v) on a log-spaced grid.
    fn check_incidence(&self) -> Result<()> {
        if self.incidence.phi(0.0) != 0.0 {
            return Err(Error::Domain("incidence must vanish at v = 0".into()));
        }
        let mut v = 1e-6;
        while v <= 1e2 {
            let phi = self.incidence.phi(v);
            let slope = v * self.incidence.phi_prime(v);
            if !slope.is_finite() || slope <= 0.0 || slope > phi * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "incidence violates 0 < v·phi'(v) <= phi(v) at v = {v}"
                )));
            }
            v *= 3.16227766;
        }
        Ok(())
    }

    /// Total removal rate σ = σ̃ + μ.
    pub fn sigma(&self) -> f64 {
        self.sigma_tilde + self.mu
    }

    /// Basic reproduction number R₀ = Λγφ′(0)/(μσ).
    pub fn r0(&self) -> f64 {
        self.lambda_birth * self.gamma_transmission * self.incidence.phi_prime_at_zero()
            / (self.mu * self.sigma())
    }

    /// Population bound Λ/μ of the feasible region.
    pub fn feasible_bound(&self) -> f64 {
        self.lambda_birth / self.mu
    }
}

/// Equilibrium structure of one parameter set.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    pub r0: f64,
    pub disease_free: (f64, f64),
    /// Present exactly when r0 > 1.
    pub endemic: Option<(f64, f64)>,
    pub feasible_region_bound: f64,
}

/// Computes R₀, the disease-free point (Λ/μ, 0) and, for R₀ > 1, the
/// endemic point: closed form for the bilinear incidence, bisection on
/// γ·u(v)·φ(v) − σv with u(v) = (Λ − σv)/μ for the saturated one.
pub fn equilibria(ep: &EpidemicParams) -> Result<EquilibriumReport> {
    let r0 = ep.r0();
    let sigma = ep.sigma();
    let bound = ep.feasible_bound();
    let endemic = if r0 > 1.0 {
        let (u, v) = match ep.incidence {
            Incidence::Bilinear => {
                let u = sigma / ep.gamma_transmission;
                let v = (ep.lambda_birth - ep.mu * u) / sigma;
                (u, v)
            }
            Incidence::Saturated => {
                let residual = |v: f64| {
                    let u = (ep.lambda_birth - sigma * v) / ep.mu;
                    ep.gamma_transmission * u * ep.incidence.phi(v) - sigma * v
                };
                let mut lo = 1e-12 * bound;
                let mut hi = bound;
                if !(residual(lo) > 0.0 && residual(hi) < 0.0) {
                    return Err(Error::RootNotBracketed(format!(
                        "no endemic state in (0, {bound}] although r0 = {r0} > 1"
                    )));
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    if residual(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let v = 0.5 * (lo + hi);
                ((ep.lambda_birth - sigma * v) / ep.mu, v)
            }
        };
        let res1 = ep.lambda_birth - ep.gamma_transmission * u * ep.incidence.phi(v) - ep.mu * u;
        let res2 = ep.gamma_transmission * u * ep.incidence.phi(v) - sigma * v;
        if res1.abs() > 1e-10 || res2.abs() > 1e-10 {
            return Err(Error::ConvergenceFailure(format!(
                "endemic state residuals too large: ({res1}, {res2})"
            )));
        }
        Some((u, v))
    } else {
        None
    };
    Ok(EquilibriumReport {
        r0,
        disease_free: (bound, 0.0),
        endemic,
        feasible_region_bound: bound,
    })
}

/// Builds the two-component SI problem. Initial data must be strictly
/// positive and lie in the feasible region u + v ≤ Λ/μ.
pub fn si_problem(ep: &EpidemicParams, u0: f64, v0: f64, t_end: f64) -> Result<ProblemSpec> {
    let bound = ep.feasible_bound();
    if !u0.is_finite()
        || !v0.is_finite()
        || u0 <= 0.0
        || v0 <= 0.0
        || u0 + v0 > bound * (1.0 + 1e-12)
    {
        return Err(Error::OutsideFeasibleRegion { u0, v0, bound });
    }
    let ep = *ep;
    ProblemSpec::new(
        "si",
        t_end,
        vec![u0, v0],
        Box::new(move |_t, y, dy| {
            let transfer = ep.gamma_transmission * y[0] * ep.incidence.phi(y[1]);
            dy[0] = ep.lambda_birth - transfer - ep.mu * y[0];
            dy[1] = transfer - ep.sigma() * y[1];
        }),
    )
}

/// Lyapunov function of the disease-free regime, V = (u−u⁰)²/(2u⁰) + v.
pub fn disease_free_lyapunov(ep: &EpidemicParams, u: f64, v: f64) -> f64 {
    let u0 = ep.feasible_bound();
    (u - u0) * (u - u0) / (2.0 * u0) + v
}

/// Lyapunov function of the endemic regime,
/// L = u*·F(u/u*) + v*·F(v/v*) with F(x) = x − 1 − ln x.
pub fn endemic_lyapunov(endemic: (f64, f64), u: f64, v: f64) -> f64 {
    let f = |x: f64| x - 1.0 - x.ln();
    endemic.0 * f(u / endemic.0) + endemic.1 * f(v / endemic.1)
}

/// The four published parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Set1,
    Set2,
    Set3,
    Set4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Set1, Preset::Set2, Preset::Set3, Preset::Set4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Set1 => "set1",
            Preset::Set2 => "set2",
            Preset::Set3 => "set3",
            Preset::Set4 => "set4",
        }
    }

    pub fn epidemic_params(self, incidence: Incidence) -> EpidemicParams {
        let (lambda, gamma, mu, sigma_tilde) = match self {
            Preset::Set1 => (0.3, 0.1, 0.44, 0.38),
            Preset::Set2 => (0.03, 0.4, 0.0365, 0.0135),
            Preset::Set3 => (0.3, 0.1, 0.32, 0.5),
            Preset::Set4 => (0.03, 0.4, 0.032, 0.018),
        };
        EpidemicParams::new(lambda, gamma, mu, sigma_tilde, incidence)
            .expect("preset rates are valid")
    }

    /// Initial data (u₀, Λ/μ − u₀) used for the published simulations.
    pub fn default_initial_data(self) -> Vec<(f64, f64)> {
        let us: &[f64] = match self {
            Preset::Set1 => &[0.52],
            Preset::Set2 => &[0.6],
            Preset::Set3 | Preset::Set4 => &[0.8, 0.7, 0.6, 0.25],
        };
        let bound = self
            .epidemic_params(Incidence::Bilinear)
            .feasible_bound();
        us.iter().map(|&u| (u, bound - u)).collect()
    }

    /// Fractional orders used for the published simulations.
    pub fn default_alphas(self) -> Vec<f64> {
        match self {
            Preset::Set1 | Preset::Set2 => vec![0.8, 0.85, 0.9, 0.99],
            Preset::Set3 | Preset::Set4 => vec![0.99],
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set1" => Ok(Preset::Set1),
            "set2" => Ok(Preset::Set2),
            "set3" => Ok(Preset::Set3),
            "set4" => Ok(Preset::Set4),
            other => Err(Error::Parse(format!(
                "unknown preset {other:?}, expected set1..set4"
            ))),
        }
    }
}

/// On-disk description of a custom epidemic run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub lambda: f64,
    pub gamma: f64,
    pub mu: f64,
    pub sigma_tilde: f64,
    pub incidence: Incidence,
    pub alpha: f64,
    pub ab_normalization: Normalization,
    pub u0: f64,
    pub v0: f64,
    pub t_end: f64,
    pub n_steps: usize,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }

    pub fn epidemic_params(&self) -> Result<EpidemicParams> {
        EpidemicParams::new(
            self.lambda,
            self.gamma,
            self.mu,
            self.sigma_tilde,
            self.incidence,
        )
    }

    pub fn abc_params(&self) -> Result<AbcParams> {
        AbcParams::new(self.alpha, self.ab_normalization)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.t_end, self.n_steps)
    }
}
