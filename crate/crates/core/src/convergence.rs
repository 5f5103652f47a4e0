//! Empirical order of convergence from global errors at a fixed end time.

use thiserror::Error;

use crate::integrator::{integrate, IntegratorError, SolverConfig, StepState, Stepper};
use crate::problems::SecondOrderProblem;

#[derive(Debug, Error)]
pub enum ConvergenceError {
    #[error("need at least 3 step sizes, got {0}")]
    TooFewSteps(usize),
    #[error("t_end = {t_end} is not an integer multiple of h = {h}")]
    NonIntegral { t_end: f64, h: f64 },
    #[error("step sizes and end time must be positive and finite")]
    NonPositive,
    #[error("problem `{0}` has no exact solution and no reference method was given")]
    NoReference(String),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
}

/// How the reference end state was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    Exact,
    /// Two runs of an order-`order` method at `h` and `h/2`, combined by
    /// Richardson extrapolation.
    Richardson {
        h: f64,
        order: usize,
    },
}

/// A reference integrator for problems without a known solution.
pub struct ReferenceMethod<'a> {
    pub stepper: &'a dyn Stepper,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceResult {
    pub hs: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub reference: Reference,
}

impl ConvergenceResult {
    /// `log₂(e(h_i)/e(h_{i+1}))` for consecutive step sizes.
    pub fn local_orders(&self) -> Vec<f64> {
        self.hs.windows(2).zip(self.errors.windows(2)).map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln()).collect()
    }
}

fn step_count(t_end: f64, h: f64) -> Result<usize, ConvergenceError> {
    let n = (t_end / h).round();
    if n < 1.0 || ((t_end / h) - n).abs() > 1e-9 * n.max(1.0) {
        return Err(ConvergenceError::NonIntegral { t_end, h });
    }
    Ok(n as usize)
}

fn end_state(
    stepper: &dyn Stepper,
    problem: &SecondOrderProblem,
    t_end: f64,
    h: f64,
    cfg: &SolverConfig,
) -> Result<StepState, ConvergenceError> {
    let n = step_count(t_end, h)?;
    Ok(integrate(stepper, problem, h, n, cfg, false)?.last().clone())
}

/// Least-squares slope of `log e` against `log h`.
pub fn fit_slope(hs: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Global max-norm error at `t_end` for each `h`, against the exact
/// solution when the problem has one, otherwise against a Richardson
/// extrapolation of `reference` run at `h_min/4` and `h_min/8`.
pub fn convergence_study(
    stepper: &dyn Stepper,
    problem: &SecondOrderProblem,
    t_end: f64,
    hs: &[f64],
    cfg: &SolverConfig,
    reference: Option<ReferenceMethod<'_>>,
) -> Result<ConvergenceResult, ConvergenceError> {
    if hs.len() < 3 {
        return Err(ConvergenceError::TooFewSteps(hs.len()));
    }
    if !(t_end > 0.0 && t_end.is_finite()) || hs.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(ConvergenceError::NonPositive);
    }
    for &h in hs {
        step_count(t_end, h)?;
    }

    let (target, kind) = match (problem.exact_solution(), reference) {
        (Some(exact), _) => {
            let (p, q) = exact(t_end);
            (StepState::new(q, p, t_end), Reference::Exact)
        }
        (None, Some(r)) => {
            let h_min = hs.iter().copied().fold(f64::INFINITY, f64::min);
            let h_ref = h_min / 4.0;
            let coarse = end_state(r.stepper, problem, t_end, h_ref, cfg)?;
            let fine = end_state(r.stepper, problem, t_end, h_ref / 2.0, cfg)?;
            let factor = 1.0 / (2f64.powi(r.order as i32) - 1.0);
            let blend = |f: &[f64], c: &[f64]| -> Vec<f64> { f.iter().zip(c).map(|(f, c)| f + (f - c) * factor).collect() };
            (
                StepState::new(blend(&fine.q, &coarse.q), blend(&fine.p, &coarse.p), t_end),
                Reference::Richardson { h: h_ref, order: r.order },
            )
        }
        (None, None) => return Err(ConvergenceError::NoReference(problem.name().to_string())),
    };

    let mut errors = Vec::with_capacity(hs.len());
    for &h in hs {
        errors.push(end_state(stepper, problem, t_end, h, cfg)?.max_deviation(&target));
    }
    Ok(ConvergenceResult { hs: hs.to_vec(), slope: fit_slope(hs, &errors), errors, reference: kind })
}
