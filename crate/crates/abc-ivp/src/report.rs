//! Convergence and simulation reports: maximum-error tables with observed
//! orders, epidemic run summaries, and their CSV/JSON serializations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{self, EpidemicParams, EquilibriumReport};
use crate::params::{AbcParams, Grid, Normalization};
use crate::solver::{solve_with, PredictorScheme, ProblemSpec, Trajectory};

/// Formats a float with 17 significant digits, enough to reproduce the
/// exact bit pattern on re-parse.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Maximum absolute error over the interior grid nodes k = 1..N, measured
/// against the problem's exact solution in the componentwise maximum norm.
/// The auxiliary start-up nodes are not part of the maximum.
pub fn max_absolute_error(traj: &Trajectory, problem: &ProblemSpec) -> Result<f64> {
    if !problem.has_exact() {
        return Err(Error::Domain(format!(
            "problem {:?} has no exact solution to compare against",
            problem.label()
        )));
    }
    let mut worst = 0.0_f64;
    for (k, t) in traj.times().iter().enumerate().skip(1) {
        let exact = problem.exact(*t).expect("exact solution present");
        for (a, b) in exact.iter().zip(traj.state(k)) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Observed order of convergence under grid halving,
/// log₂(AE(N/2) / AE(N)).
pub fn observed_order(ae_coarse: f64, ae_fine: f64) -> f64 {
    (ae_coarse / ae_fine).log2()
}

/// One (N, AE, EOC, wall-time) row of a convergence table.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ae: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eoc: Option<f64>,
    pub seconds: f64,
}

/// Error table of one (problem, α, normalization) sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub alpha: f64,
    pub ab: Normalization,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV; the EOC field of the first row stays empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("problem,alpha,ab,n,ae,eoc,seconds\n");
        let ab = match self.ab {
            Normalization::Unit => "unit",
            Normalization::GammaForm => "gamma_form",
        };
        for row in &self.rows {
            let eoc = row.eoc.map(fmt_f64).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.problem,
                fmt_f64(self.alpha),
                ab,
                row.n,
                fmt_f64(row.ae),
                eoc,
                fmt_f64(row.seconds),
            ));
        }
        out
    }
}

/// Runs one problem over every (α, N) pair and collects error tables.
///
/// The step counts must double from entry to entry so that the observed
/// order is meaningful; the problem factory must attach an exact solution.
pub fn run_convergence(
    factory: impl Fn(&AbcParams) -> Result<ProblemSpec>,
    alphas: &[f64],
    step_counts: &[usize],
    ab: Normalization,
    scheme: PredictorScheme,
) -> Result<Vec<ConvergenceReport>> {
    if step_counts.is_empty() || alphas.is_empty() {
        return Err(Error::Domain(
            "convergence sweep needs at least one order and one step count".into(),
        ));
    }
    if step_counts.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Domain(format!(
            "step counts must double from entry to entry, got {step_counts:?}"
        )));
    }
    let mut reports = Vec::new();
    for &alpha in alphas {
        let params = AbcParams::new(alpha, ab)?;
        let problem = factory(&params)?;
        if !problem.has_exact() {
            return Err(Error::Domain(format!(
                "problem {:?} has no exact solution; convergence study refused",
                problem.label()
            )));
        }
        let mut rows: Vec<ConvergenceRow> = Vec::new();
        for &n in step_counts {
            let grid = Grid::new(problem.t_end(), n)?;
            let traj = solve_with(&problem, params, grid, scheme)?;
            let ae = max_absolute_error(&traj, &problem)?;
            let eoc = rows.last().map(|prev| observed_order(prev.ae, ae));
            rows.push(ConvergenceRow {
                n,
                ae,
                eoc,
                seconds: traj.stats().wall.as_secs_f64(),
            });
        }
        reports.push(ConvergenceReport {
            problem: problem.label().to_string(),
            alpha,
            ab,
            rows,
        });
    }
    Ok(reports)
}

/// Serializes a trajectory as CSV: header `t,y_0,...,y_{d-1}`, one row per
/// node, 17 significant digits. When the trajectory asks for start-up rows
/// they appear after t_0 prefixed with `#startup`.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let dim = traj.dimension();
    let mut out = String::from("t");
    for i in 0..dim {
        out.push_str(&format!(",y_{i}"));
    }
    out.push('\n');
    let push_row = |out: &mut String, prefix: &str, t: f64, state: &[f64]| {
        out.push_str(prefix);
        out.push_str(&fmt_f64(t));
        for v in state {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    };
    for (k, &t) in traj.times().iter().enumerate() {
        push_row(&mut out, "", t, traj.state(k));
        if k == 0 && traj.includes_startup_nodes {
            for (ts, ys) in traj.startup_points() {
                push_row(&mut out, "#startup,", *ts, ys);
            }
        }
    }
    out
}

/// Distances of one epidemic run's final state to the equilibria.
#[derive(Debug, Clone, Serialize)]
pub struct EpidemicRun {
    pub alpha: f64,
    pub u0: f64,
    pub v0: f64,
    pub final_state: (f64, f64),
    pub final_infective: f64,
    pub distance_to_disease_free: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_to_endemic: Option<f64>,
    /// Steps at which the disease-free Lyapunov function increased
    /// (diagnostic only; the continuous-time theory does not transfer
    /// verbatim to the discretization).
    pub lyapunov_increases: usize,
    pub seconds: f64,
}

/// Equilibrium data plus the per-run outcomes of an epidemic sweep.
#[derive(Debug, Clone, Serialize)]
pub struct EpidemicSummary {
    pub problem: String,
    pub incidence: models::Incidence,
    pub ab: Normalization,
    pub t_end: f64,
    pub n_steps: usize,
    #[serde(flatten)]
    pub equilibria: EquilibriumReport,
    pub runs: Vec<EpidemicRun>,
}

impl EpidemicSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Solves the SI model for every (α, initial data) pair and summarizes the
/// outcomes against the equilibrium report.
#[allow(clippy::too_many_arguments)]
pub fn run_epidemic(
    label: &str,
    ep: &EpidemicParams,
    alphas: &[f64],
    initial_data: &[(f64, f64)],
    t_end: f64,
    n_steps: usize,
    ab: Normalization,
    scheme: PredictorScheme,
) -> Result<(Vec<(String, Trajectory)>, EpidemicSummary)> {
    let equilibria = models::equilibria(ep)?;
    let mut trajectories = Vec::new();
    let mut runs = Vec::new();
    for &alpha in alphas {
        let params = AbcParams::new(alpha, ab)?;
        for &(u0, v0) in initial_data {
            let problem = models::si_problem(ep, u0, v0, t_end)?;
            let grid = Grid::new(t_end, n_steps)?;
            let traj = solve_with(&problem, params, grid, scheme)?;
            let last = traj.final_state();
            let final_state = (last[0], last[1]);
            let mut lyapunov_increases = 0usize;
            let mut prev = f64::INFINITY;
            for state in traj.states() {
                let v = models::disease_free_lyapunov(ep, state[0], state[1]);
                if v > prev {
                    lyapunov_increases += 1;
                }
                prev = v;
            }
            runs.push(EpidemicRun {
                alpha,
                u0,
                v0,
                final_state,
                final_infective: final_state.1,
                distance_to_disease_free: dist(final_state, equilibria.disease_free),
                distance_to_endemic: equilibria.endemic.map(|e| dist(final_state, e)),
                lyapunov_increases,
                seconds: traj.stats().wall.as_secs_f64(),
            });
            trajectories.push((format!("{label}-a{alpha}-u{u0}"), traj));
        }
    }
    let summary = EpidemicSummary {
        problem: label.to_string(),
        incidence: ep.incidence,
        ab,
        t_end,
        n_steps,
        equilibria,
        runs,
    };
    Ok((trajectories, summary))
}
