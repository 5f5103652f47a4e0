//! Time-stepping engines and trajectory integration.

mod glrk;
mod prk;
mod rkn;
mod solver;

use thiserror::Error;

use crate::problems::{HamiltonianSystem, ProblemError, SecondOrderProblem};

pub use crate::tableau::{DiscretePrkTableau, DiscreteRknTableau};
pub use glrk::{glrk_step, GaussLegendreRk};
pub use prk::{prk_step, PrkStepper};
pub use rkn::{rkn_step, RknStepper};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegratorError {
    #[error("stage iteration did not converge after {iterations} iterations (last increment {last_increment:.3e})")]
    NonConvergence { iterations: usize, last_increment: f64 },
    #[error("stage iteration produced a non-finite value")]
    NonFinite,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid step request: {0}")]
    InvalidStep(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<IntegratorError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMode {
    #[default]
    FixedPoint,
    /// Fixed-point for half the budget, then simplified Newton.
    NewtonOnStall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialGuess {
    /// Every stage starts at `q₀` (and `p₀`).
    Replicated,
    /// Stage `i` starts on the line through the initial state with slope `C_i`.
    #[default]
    LinearInC,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub mode: SolverMode,
    /// Stop when the max-norm stage increment is at most this.
    pub tol: f64,
    pub max_iter: usize,
    pub initial_guess: InitialGuess,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { mode: SolverMode::FixedPoint, tol: 1e-13, max_iter: 100, initial_guess: InitialGuess::LinearInC }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), IntegratorError> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(IntegratorError::InvalidConfig("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(IntegratorError::InvalidConfig("max_iter must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub iterations: usize,
    pub newton: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
}

impl StepState {
    pub fn new(q: Vec<f64>, p: Vec<f64>, t: f64) -> Self {
        Self { q, p, t }
    }

    pub fn initial(problem: &SecondOrderProblem) -> Self {
        let (p, q) = problem.initial();
        Self::new(q.to_vec(), p.to_vec(), 0.0)
    }

    pub fn max_deviation(&self, other: &StepState) -> f64 {
        self.q.iter().zip(&other.q).chain(self.p.iter().zip(&other.p)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// A one-step method for second-order problems.
pub trait Stepper {
    /// Advances `state` by `h`. Negative `h` steps backwards in time.
    fn step(
        &self,
        problem: &SecondOrderProblem,
        state: &StepState,
        h: f64,
        cfg: &SolverConfig,
    ) -> Result<(StepState, SolveStats), IntegratorError>;
}

pub(crate) fn check_step(dim: usize, state: &StepState, h: f64) -> Result<(), IntegratorError> {
    if !h.is_finite() {
        return Err(IntegratorError::InvalidStep(format!("step size {h} is not finite")));
    }
    if state.q.len() != dim || state.p.len() != dim {
        return Err(IntegratorError::InvalidStep(format!(
            "state has dimensions ({}, {}) but the problem has {dim}",
            state.q.len(),
            state.p.len()
        )));
    }
    Ok(())
}

pub(crate) fn finite_state(state: StepState) -> Result<StepState, IntegratorError> {
    if state.q.iter().chain(&state.p).all(|v| v.is_finite()) {
        Ok(state)
    } else {
        Err(IntegratorError::NonFinite)
    }
}

/// Per-invariant values along a run and their max-norm deviation from the
/// initial value.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSeries {
    pub name: String,
    pub values: Vec<Vec<f64>>,
    pub errors: Vec<f64>,
}

impl InvariantSeries {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub h: f64,
    pub states: Vec<StepState>,
    pub invariants: Vec<InvariantSeries>,
    /// Max-norm distance to the exact solution, when the problem has one.
    pub solution_errors: Option<Vec<f64>>,
    /// Stage iterations per step (index 0 is the initial state, 0).
    pub iterations: Vec<usize>,
}

impl Trajectory {
    pub fn invariant(&self, name: &str) -> Option<&InvariantSeries> {
        self.invariants.iter().find(|s| s.name == name)
    }

    pub fn last(&self) -> &StepState {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

fn record(problem: &SecondOrderProblem, state: &StepState, series: &mut [InvariantSeries], sol: &mut Option<Vec<f64>>) {
    for (inv, s) in problem.invariants().iter().zip(series.iter_mut()) {
        let v = (inv.eval)(&state.p, &state.q);
        let err = v.iter().zip(s.values.first().unwrap_or(&v)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        s.errors.push(err);
        s.values.push(v);
    }
    if let (Some(errors), Some(exact)) = (sol.as_mut(), problem.exact_solution()) {
        let (p, q) = exact(state.t);
        errors.push(state.max_deviation(&StepState::new(q, p, state.t)));
    }
}

/// Runs `n_steps` steps of size `h` from `initial`. Times are `t₀ + n·h`.
pub fn integrate_from(
    stepper: &dyn Stepper,
    problem: &SecondOrderProblem,
    initial: StepState,
    h: f64,
    n_steps: usize,
    cfg: &SolverConfig,
    record_invariants: bool,
) -> Result<Trajectory, IntegratorError> {
    if n_steps == 0 {
        return Err(IntegratorError::InvalidStep("n_steps must be at least 1".into()));
    }
    check_step(problem.dim(), &initial, h)?;
    let t0 = initial.t;
    let mut invariants: Vec<InvariantSeries> = if record_invariants {
        problem
            .invariants()
            .iter()
            .map(|i| InvariantSeries { name: i.name.clone(), values: Vec::new(), errors: Vec::new() })
            .collect()
    } else {
        Vec::new()
    };
    let mut solution_errors = (record_invariants && problem.exact_solution().is_some()).then(Vec::new);
    record(problem, &initial, &mut invariants, &mut solution_errors);

    let mut states = Vec::with_capacity(n_steps + 1);
    let mut iterations = Vec::with_capacity(n_steps + 1);
    states.push(initial);
    iterations.push(0);
    for n in 1..=n_steps {
        let (mut next, stats) = stepper
            .step(problem, &states[n - 1], h, cfg)
            .map_err(|e| IntegratorError::AtStep { step: n, source: Box::new(e) })?;
        next.t = t0 + n as f64 * h;
        record(problem, &next, &mut invariants, &mut solution_errors);
        states.push(next);
        iterations.push(stats.iterations);
    }
    Ok(Trajectory { h, states, invariants, solution_errors, iterations })
}

/// [`integrate_from`] starting at the problem's default initial state, `t = 0`.
pub fn integrate(
    stepper: &dyn Stepper,
    problem: &SecondOrderProblem,
    h: f64,
    n_steps: usize,
    cfg: &SolverConfig,
    record_invariants: bool,
) -> Result<Trajectory, IntegratorError> {
    integrate_from(stepper, problem, StepState::initial(problem), h, n_steps, cfg, record_invariants)
}
