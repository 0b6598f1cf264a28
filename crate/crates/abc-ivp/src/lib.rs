//! A third-order predictor-corrector solver for nonlinear fractional
//! initial value problems whose derivative carries the Mittag-Leffler
//! kernel.
//!
//! The fractional equation D^α y = f(t, y), y(0) = y₀ is equivalent to a
//! Volterra integral equation whose kernel integral splits, at each grid
//! node, into a lag part over the history and an increment part over the
//! current panel. Both parts are discretized with quadratic Lagrange
//! interpolation, giving closed-form convolution weights; an explicit
//! extrapolation predictor and a single correction per step share one lag
//! assembly, so a step costs two right-hand-side evaluations.
//!
//! The crate bundles:
//!
//! - [`special`]: Gamma and two-parameter Mittag-Leffler evaluation;
//! - [`quadrature`]: the convolution weights and their identities;
//! - [`solver`]: the start-up ladder and the time stepper;
//! - [`models`]: benchmark problems with exact solutions and a fractional
//!   SI epidemic model with its equilibrium analysis;
//! - [`report`]: error tables, observed orders of convergence, and the
//!   CSV/JSON emitters behind the command line interface.
//!
//! # Example
//!
//! ```
//! use abc_ivp::{solve, AbcParams, Grid, ProblemSpec};
//!
//! // D^0.9 y = t - y, y(0) = 0, solved on [0, 1] with 40 steps
//! let problem = ProblemSpec::new(
//!     "relaxation",
//!     1.0,
//!     vec![0.0],
//!     Box::new(|t, y, dy| dy[0] = t - y[0]),
//! )
//! .unwrap();
//! let params = AbcParams::gamma_form(0.9).unwrap();
//! let grid = Grid::new(1.0, 40).unwrap();
//! let trajectory = solve(&problem, params, grid).unwrap();
//! assert_eq!(trajectory.states().len(), 41);
//! assert!(trajectory.final_state()[0] > 0.0);
//! ```

pub mod error;
mod kahan;
pub mod models;
pub mod params;
pub mod quadrature;
pub mod report;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use params::{AbcParams, Grid, Normalization};
pub use solver::{solve, solve_with, PredictorScheme, ProblemSpec, SolverState, Trajectory};
