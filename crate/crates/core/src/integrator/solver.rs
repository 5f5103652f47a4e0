//! Implicit stage equations written as fixed-point problems `x = G(x)`.

use nalgebra::{DMatrix, DVector};

use super::{IntegratorError, SolveStats, SolverConfig, SolverMode};
use crate::problems::ProblemError;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, |m, d| if d.is_nan() || m.is_nan() { f64::NAN } else { m.max(d) })
}

/// Iterates `x ← G(x)` until the max-norm increment drops to `cfg.tol`. In
/// [`SolverMode::NewtonOnStall`] the second half of the iteration budget
/// is spent on simplified Newton for `x − G(x) = 0` with a forward-difference
/// Jacobian.
pub(crate) fn solve<G>(x: &mut Vec<f64>, mut g: G, cfg: &SolverConfig) -> Result<SolveStats, IntegratorError>
where
    G: FnMut(&[f64], &mut [f64]) -> Result<(), ProblemError>,
{
    cfg.validate()?;
    let n = x.len();
    let mut next = vec![0.0; n];
    let fixed_budget = match cfg.mode {
        SolverMode::FixedPoint => cfg.max_iter,
        SolverMode::NewtonOnStall => cfg.max_iter.div_ceil(2),
    };

    let mut increment = f64::INFINITY;
    for it in 1..=fixed_budget {
        g(x, &mut next)?;
        increment = max_abs_diff(&next, x);
        std::mem::swap(x, &mut next);
        if !increment.is_finite() {
            return Err(IntegratorError::NonFinite);
        }
        if increment <= cfg.tol {
            return Ok(SolveStats { iterations: it, newton: false });
        }
    }
    if cfg.mode == SolverMode::FixedPoint {
        return Err(IntegratorError::NonConvergence { iterations: fixed_budget, last_increment: increment });
    }

    // J = I − ∂G/∂x, frozen at the stall point
    let mut gx = vec![0.0; n];
    g(x, &mut gx)?;
    let mut jac = DMatrix::<f64>::identity(n, n);
    let mut probe = x.clone();
    let mut column = vec![0.0; n];
    for j in 0..n {
        let delta = f64::EPSILON.sqrt() * x[j].abs().max(1.0);
        probe[j] = x[j] + delta;
        g(&probe, &mut column)?;
        probe[j] = x[j];
        for i in 0..n {
            jac[(i, j)] -= (column[i] - gx[i]) / delta;
        }
    }
    let lu = jac.lu();

    let newton_budget = cfg.max_iter - fixed_budget;
    for it in 1..=newton_budget {
        if it > 1 {
            g(x, &mut gx)?;
        }
        let residual = DVector::from_iterator(n, x.iter().zip(&gx).map(|(xi, gi)| gi - xi));
        let step = lu
            .solve(&residual)
            .ok_or(IntegratorError::NonConvergence { iterations: fixed_budget + it, last_increment: increment })?;
        increment = step.amax();
        for (xi, di) in x.iter_mut().zip(step.iter()) {
            *xi += di;
        }
        if !increment.is_finite() {
            return Err(IntegratorError::NonFinite);
        }
        if increment <= cfg.tol {
            return Ok(SolveStats { iterations: fixed_budget + it, newton: true });
        }
    }
    Err(IntegratorError::NonConvergence { iterations: cfg.max_iter, last_increment: increment })
}
