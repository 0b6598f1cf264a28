//! Predictor-corrector time stepper for D^α y = f(t, y), y(0) = y₀.
//!
//! Each step splits the kernel integral of the inverse operator into a lag
//! part over [0, t_n] and an increment part over [t_n, t_{n+1}]. The lag
//! part is assembled once per step and shared by predictor and corrector;
//! the corrector performs a single correction using the right-hand side
//! evaluated at the predicted state, so a step costs exactly two rhs
//! evaluations once the start-up ladder has produced the states at
//! t_{1/4}, t_{1/2}, t_1 and t_2.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::kahan::KahanVec;
use crate::params::{AbcParams, Grid};
use crate::quadrature::{startup_kernel_weights, WeightTable};

/// Right-hand side f(t, y) writing its value into `dy`.
pub type RhsFn = dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync;
/// Exact solution t ↦ y(t), when known.
pub type ExactFn = dyn Fn(f64) -> Vec<f64> + Send + Sync;

/// An initial value problem for the fractional derivative with
/// Mittag-Leffler kernel.
pub struct ProblemSpec {
    dimension: usize,
    t_end: f64,
    y0: Vec<f64>,
    rhs: Box<RhsFn>,
    exact: Option<Box<ExactFn>>,
    label: String,
}

impl ProblemSpec {
    pub fn new(
        label: impl Into<String>,
        t_end: f64,
        y0: Vec<f64>,
        rhs: Box<RhsFn>,
    ) -> Result<Self> {
        if y0.is_empty() {
            return Err(Error::Domain("state dimension must be at least 1".into()));
        }
        if !t_end.is_finite() || t_end <= 0.0 {
            return Err(Error::Domain(format!(
                "final time must be positive, got {t_end}"
            )));
        }
        Ok(Self {
            dimension: y0.len(),
            t_end,
            y0,
            rhs,
            exact: None,
            label: label.into(),
        })
    }

    pub fn with_exact(mut self, exact: Box<ExactFn>) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y0(&self) -> &[f64] {
        &self.y0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact solution at t, if the problem carries one.
    pub fn exact(&self, t: f64) -> Option<Vec<f64>> {
        self.exact.as_ref().map(|f| f(t))
    }
}

/// Which coefficient set the predictor stages use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PredictorScheme {
    /// Constant-reproducing extrapolation: the nonlocal predictor term uses
    /// 3f_n − 3f_{n−1} + f_{n−2} and the start-up extrapolations use
    /// 6, −8, +3 (coefficients sum to one).
    #[default]
    Corrected,
    /// Alternative set for comparison: f_{n−2} − 3f_{n−1} − 3f_n in the
    /// main loop, 6, −8, −3 in the start-up, and no kernel prefactor on the
    /// final start-up stage integrals.
    Literal,
}

/// Counters recorded along a solve.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveStats {
    pub rhs_evaluations: usize,
    pub lag_assemblies: usize,
    pub wall: Duration,
}

/// Discrete solution: states at the grid nodes plus the auxiliary
/// start-up points.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    startup_points: Vec<(f64, Vec<f64>)>,
    pub includes_startup_nodes: bool,
    stats: SolveStats,
}

impl Trajectory {
    pub fn dimension(&self) -> usize {
        self.states[0].len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k]
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }

    /// Auxiliary start-up points (t_{1/4}, y) and (t_{1/2}, y).
    pub fn startup_points(&self) -> &[(f64, Vec<f64>)] {
        &self.startup_points
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }
}

fn lin_comb(y0: &[f64], parts: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y0.to_vec();
    for (scale, v) in parts {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += scale * x;
        }
    }
    out
}

fn weighted(dim: usize, parts: &[(f64, &[f64])]) -> Vec<f64> {
    lin_comb(&vec![0.0; dim], parts)
}

/// Running state of one solve: history of nodal states and rhs values,
/// the per-run weight cache, and the current lag term.
pub struct SolverState<'p> {
    problem: &'p ProblemSpec,
    params: AbcParams,
    grid: Grid,
    weights: WeightTable,
    scheme: PredictorScheme,
    y_nodes: Vec<Vec<f64>>,
    f_nodes: Vec<Vec<f64>>,
    y_quarter: Vec<f64>,
    f_quarter: Vec<f64>,
    y_half: Vec<f64>,
    f_half: Vec<f64>,
    lag_cache: Option<(usize, Vec<f64>)>,
    predicted: Option<(usize, Vec<f64>)>,
    rhs_evaluations: usize,
    lag_assemblies: usize,
}

impl<'p> SolverState<'p> {
    /// Runs the start-up ladder producing the states at t_{1/4}, t_{1/2},
    /// t_1 and t_2 with constant → linear → quadratic interpolation of the
    /// kernel integral at each point.
    pub fn startup(problem: &'p ProblemSpec, params: AbcParams, grid: Grid) -> Result<Self> {
        Self::startup_with(problem, params, grid, PredictorScheme::default())
    }

    pub fn startup_with(
        problem: &'p ProblemSpec,
        params: AbcParams,
        grid: Grid,
        scheme: PredictorScheme,
    ) -> Result<Self> {
        if grid.n_steps() < 3 {
            return Err(Error::Domain(format!(
                "the predictor stencil needs at least 3 steps, got {}",
                grid.n_steps()
            )));
        }
        // solving on a shorter horizon is fine; reaching past it is not
        if grid.t_end() > problem.t_end() * (1.0 + 1e-9) {
            return Err(Error::Domain(format!(
                "grid covers [0, {}] but the problem ends at {}",
                grid.t_end(),
                problem.t_end()
            )));
        }
        let weights = WeightTable::new(&params, &grid)?;
        let mut state = Self {
            problem,
            params,
            grid,
            weights,
            scheme,
            y_nodes: Vec::new(),
            f_nodes: Vec::new(),
            y_quarter: Vec::new(),
            f_quarter: Vec::new(),
            y_half: Vec::new(),
            f_half: Vec::new(),
            lag_cache: None,
            predicted: None,
            rhs_evaluations: 0,
            lag_assemblies: 0,
        };
        state.run_startup()?;
        Ok(state)
    }

    fn eval_rhs(&mut self, t: f64, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.problem.dimension];
        (self.problem.rhs)(t, y, &mut out);
        self.rhs_evaluations += 1;
        if let Some(component) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteRhs { t, component });
        }
        Ok(out)
    }

    /// h^α · Σ wᵢ vᵢ with the start-up kernel weights over [0, u_end·h].
    fn startup_integral(&self, u_end: f64, nodes: &[f64], values: &[&[f64]]) -> Vec<f64> {
        let alpha = self.params.alpha();
        let h_alpha = self.weights.h_alpha();
        let w = startup_kernel_weights(alpha, u_end, nodes);
        let mut acc = KahanVec::zeros(self.problem.dimension);
        for (wi, vi) in w.iter().zip(values) {
            acc.add_scaled(h_alpha * wi, vi);
        }
        acc.into_vec()
    }

    fn run_startup(&mut self) -> Result<()> {
        let ab_f = self.params.ab_f();
        let ab_g = self.params.ab_g();
        let h = self.grid.h();
        let (t_quarter, t_half) = self.grid.startup_nodes();
        let dim = self.problem.dimension;
        let y0 = self.problem.y0.clone();
        let f0 = self.eval_rhs(0.0, &y0)?;

        // extrapolation sign and final-block prefactor of the t_2 stage
        let (ext_sign, t2_prefactor) = match self.scheme {
            PredictorScheme::Corrected => (3.0, ab_g),
            PredictorScheme::Literal => (-3.0, 1.0),
        };

        // t_{1/4}: constant predictor, linear corrector
        let f_frozen = self.eval_rhs(t_quarter, &y0)?;
        let int0 = self.startup_integral(0.25, &[0.0], &[&f0]);
        let y_pred = lin_comb(&y0, &[(ab_f, &f_frozen), (ab_g, &int0)]);
        let f_pred = self.eval_rhs(t_quarter, &y_pred)?;
        let int1 = self.startup_integral(0.25, &[0.25, 0.0], &[&f0, &f_pred]);
        let y_quarter = lin_comb(&y0, &[(ab_f, &f_pred), (ab_g, &int1)]);
        let f_quarter = self.eval_rhs(t_quarter, &y_quarter)?;

        // t_{1/2}: constant, linear, then quadratic over {0, 1/4, 1/2}
        let extrap = weighted(dim, &[(2.0, &f_quarter), (-1.0, &f0)]);
        let int0 = self.startup_integral(0.5, &[0.0], &[&f_quarter]);
        let y_p1 = lin_comb(&y0, &[(ab_f, &extrap), (ab_g, &int0)]);
        let f_p1 = self.eval_rhs(t_half, &y_p1)?;
        let int1 = self.startup_integral(0.5, &[0.25, 0.0], &[&f_quarter, &f_p1]);
        let y_p2 = lin_comb(&y0, &[(ab_f, &f_p1), (ab_g, &int1)]);
        let f_p2 = self.eval_rhs(t_half, &y_p2)?;
        let int2 = self.startup_integral(0.5, &[0.5, 0.25, 0.0], &[&f0, &f_quarter, &f_p2]);
        let y_half = lin_comb(&y0, &[(ab_f, &f_p2), (ab_g, &int2)]);
        let f_half = self.eval_rhs(t_half, &y_half)?;

        // t_1: quadratic extrapolation from {0, 1/4, 1/2}, then the ladder
        let extrap = weighted(
            dim,
            &[(6.0, &f_half), (-8.0, &f_quarter), (ext_sign, &f0)],
        );
        let int0 = self.startup_integral(1.0, &[0.0], &[&f_half]);
        let y_p1 = lin_comb(&y0, &[(ab_f, &extrap), (ab_g, &int0)]);
        let f_p1 = self.eval_rhs(h, &y_p1)?;
        let int1 = self.startup_integral(1.0, &[0.5, 0.0], &[&f_half, &f_p1]);
        let y_p2 = lin_comb(&y0, &[(ab_f, &f_p1), (ab_g, &int1)]);
        let f_p2 = self.eval_rhs(h, &y_p2)?;
        let int2 = self.startup_integral(1.0, &[1.0, 0.5, 0.0], &[&f0, &f_half, &f_p2]);
        let y_1 = lin_comb(&y0, &[(ab_f, &f_p2), (ab_g, &int2)]);
        let f_1 = self.eval_rhs(h, &y_1)?;

        // t_2: same ladder from {0, 1/2, 1}
        let extrap = weighted(dim, &[(6.0, &f_1), (-8.0, &f_half), (ext_sign, &f0)]);
        let int0 = self.startup_integral(2.0, &[0.0], &[&f_1]);
        let y_p1 = lin_comb(&y0, &[(ab_f, &extrap), (t2_prefactor, &int0)]);
        let f_p1 = self.eval_rhs(2.0 * h, &y_p1)?;
        let int1 = self.startup_integral(2.0, &[1.0, 0.0], &[&f_1, &f_p1]);
        let y_p2 = lin_comb(&y0, &[(ab_f, &f_p1), (t2_prefactor, &int1)]);
        let f_p2 = self.eval_rhs(2.0 * h, &y_p2)?;
        let int2 = self.startup_integral(2.0, &[2.0, 1.0, 0.0], &[&f0, &f_1, &f_p2]);
        let y_2 = lin_comb(&y0, &[(ab_f, &f_p2), (t2_prefactor, &int2)]);
        let f_2 = self.eval_rhs(2.0 * h, &y_2)?;

        self.y_quarter = y_quarter;
        self.f_quarter = f_quarter;
        self.y_half = y_half;
        self.f_half = f_half;
        self.y_nodes = vec![y0, y_1, y_2];
        self.f_nodes = vec![f0, f_1, f_2];
        Ok(())
    }

    pub fn params(&self) -> &AbcParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn problem(&self) -> &ProblemSpec {
        self.problem
    }

    /// Nodal state ỹ_k computed so far.
    pub fn y_at(&self, k: usize) -> &[f64] {
        &self.y_nodes[k]
    }

    /// Stored rhs value f̃_k.
    pub fn f_at(&self, k: usize) -> &[f64] {
        &self.f_nodes[k]
    }

    pub fn y_quarter(&self) -> &[f64] {
        &self.y_quarter
    }

    pub fn y_half(&self) -> &[f64] {
        &self.y_half
    }

    pub fn f_half(&self) -> &[f64] {
        &self.f_half
    }

    pub fn steps_computed(&self) -> usize {
        self.y_nodes.len() - 1
    }

    pub fn rhs_evaluations(&self) -> usize {
        self.rhs_evaluations
    }

    pub fn lag_assemblies(&self) -> usize {
        self.lag_assemblies
    }

    /// Lag term ỹ^lag_target: the kernel integral over [0, t_{target−1}]
    /// of the interpolated history, assembled once and cached for both the
    /// predictor and the corrector of this target.
    ///
    /// The first panel interpolates on {t_0, t_{1/2}, t_1}; later panels on
    /// {t_{k−1}, t_k, t_{k+1}}.
    pub fn lag_term(&mut self, target: usize) -> Result<Vec<f64>> {
        if target < 2 {
            return Err(Error::Precondition(format!(
                "lag term needs target >= 2, got {target}"
            )));
        }
        let n = target - 1;
        if self.f_nodes.len() <= n {
            return Err(Error::Precondition(format!(
                "lag term at target {target} needs history through node {n}, have {}",
                self.f_nodes.len() - 1
            )));
        }
        let mut acc = KahanVec::zeros(self.problem.dimension);
        let w = self.weights.half_node_panel(n);
        acc.add_scaled(w[0], &self.f_nodes[0]);
        acc.add_scaled(w[1], &self.f_half);
        acc.add_scaled(w[2], &self.f_nodes[1]);
        for k in 1..n {
            let w = self.weights.standard_panel(n - k);
            acc.add_scaled(w[0], &self.f_nodes[k - 1]);
            acc.add_scaled(w[1], &self.f_nodes[k]);
            acc.add_scaled(w[2], &self.f_nodes[k + 1]);
        }
        let ab_g = self.params.ab_g();
        let lag: Vec<f64> = acc.into_vec().into_iter().map(|x| ab_g * x).collect();
        self.lag_cache = Some((target, lag.clone()));
        self.lag_assemblies += 1;
        Ok(lag)
    }

    /// Explicit prediction ỹᴾ_target from the cached lag term, the
    /// extrapolated nonlocal term and the increment rule on
    /// {t_{n−2}, t_{n−1}, t_n}. No rhs evaluation happens here.
    pub fn predict(&mut self, target: usize) -> Result<Vec<f64>> {
        if target < 3 {
            return Err(Error::Precondition(format!(
                "prediction needs target >= 3 (stencil reaches f_{{n-2}}), got {target}"
            )));
        }
        let n = target - 1;
        if self.f_nodes.len() <= n {
            return Err(Error::Precondition(format!(
                "prediction at target {target} needs history through node {n}"
            )));
        }
        let lag = match &self.lag_cache {
            Some((t, lag)) if *t == target => lag.clone(),
            _ => {
                return Err(Error::Precondition(format!(
                    "lag term for target {target} has not been assembled"
                )))
            }
        };
        let ab_f = self.params.ab_f();
        let ab_g = self.params.ab_g();
        let (c_n, c_n1, c_n2) = match self.scheme {
            PredictorScheme::Corrected => (3.0, -3.0, 1.0),
            PredictorScheme::Literal => (-3.0, -3.0, 1.0),
        };
        let nonlocal = lin_comb(
            &vec![0.0; self.problem.dimension],
            &[
                (c_n, &self.f_nodes[n]),
                (c_n1, &self.f_nodes[n - 1]),
                (c_n2, &self.f_nodes[n - 2]),
            ],
        );
        let inc = self.weights.increment();
        let mut y_pred = self.problem.y0.clone();
        for i in 0..y_pred.len() {
            let inc_i = inc.apply([
                self.f_nodes[n - 2][i],
                self.f_nodes[n - 1][i],
                self.f_nodes[n][i],
            ]);
            y_pred[i] += ab_f * nonlocal[i] + lag[i] + ab_g * inc_i;
        }
        self.predicted = Some((target, y_pred.clone()));
        Ok(y_pred)
    }

    /// Single correction: evaluates the rhs once at the predicted state and
    /// reuses that value in both the nonlocal term and the current-panel
    /// quadrature slot.
    pub fn correct(&mut self, target: usize, predicted: &[f64]) -> Result<Vec<f64>> {
        match &self.predicted {
            Some((t, y)) if *t == target && y.as_slice() == predicted => {}
            _ => {
                return Err(Error::Precondition(format!(
                    "corrector at target {target} requires the prediction for the same target"
                )))
            }
        }
        let lag = match &self.lag_cache {
            Some((t, lag)) if *t == target => lag.clone(),
            _ => {
                return Err(Error::Precondition(format!(
                    "lag term for target {target} is stale"
                )))
            }
        };
        let n = target - 1;
        let t_target = self.grid.node(target);
        let f_pred = self.eval_rhs(t_target, predicted)?;
        let ab_f = self.params.ab_f();
        let ab_g = self.params.ab_g();
        let w = self.weights.corrector_panel();
        let mut y = self.problem.y0.clone();
        for i in 0..y.len() {
            let inc =
                w[0] * self.f_nodes[n - 1][i] + w[1] * self.f_nodes[n][i] + w[2] * f_pred[i];
            y[i] += ab_f * f_pred[i] + lag[i] + ab_g * inc;
        }
        Ok(y)
    }

    /// Advances one step: lag, predict, correct, then append the new state
    /// and its rhs value to the history.
    pub fn advance(&mut self, target: usize) -> Result<()> {
        self.lag_term(target)?;
        let predicted = self.predict(target)?;
        let y = self.correct(target, &predicted)?;
        let f = self.eval_rhs(self.grid.node(target), &y)?;
        self.y_nodes.push(y);
        self.f_nodes.push(f);
        Ok(())
    }

    fn into_trajectory(self, wall: Duration) -> Trajectory {
        let (t_quarter, t_half) = self.grid.startup_nodes();
        Trajectory {
            times: self.grid.nodes().collect(),
            states: self.y_nodes,
            startup_points: vec![(t_quarter, self.y_quarter), (t_half, self.y_half)],
            includes_startup_nodes: false,
            stats: SolveStats {
                rhs_evaluations: self.rhs_evaluations,
                lag_assemblies: self.lag_assemblies,
                wall,
            },
        }
    }
}

/// Runs the full scheme on the given grid.
pub fn solve(problem: &ProblemSpec, params: AbcParams, grid: Grid) -> Result<Trajectory> {
    solve_with(problem, params, grid, PredictorScheme::default())
}

pub fn solve_with(
    problem: &ProblemSpec,
    params: AbcParams,
    grid: Grid,
    scheme: PredictorScheme,
) -> Result<Trajectory> {
    let start = Instant::now();
    let mut state = SolverState::startup_with(problem, params, grid, scheme)?;
    for target in 3..=state.grid.n_steps() {
        state.advance(target)?;
    }
    Ok(state.into_trajectory(start.elapsed()))
}
