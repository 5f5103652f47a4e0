//! The quadrature-discretized csRKN scheme
//!
//! ```text
//! Q_i = q₀ + h C_i M p₀ − h² M Σ_j b_j Ā_ij ∇U(Q_j)
//! q₁  = q₀ + h M p₀     − h² M Σ_i b_i B̄_i  ∇U(Q_i)
//! p₁  = p₀              − h    Σ_i b_i B_i  ∇U(Q_i)
//! ```

use super::{check_step, finite_state, solver, InitialGuess, IntegratorError, SolveStats, SolverConfig, StepState, Stepper};
use crate::problems::{HamiltonianSystem, SecondOrderProblem};
use crate::quadrature::QuadRule;
use crate::tableau::{CsRknTableau, DiscreteRknTableau};

#[derive(Debug, Clone, PartialEq)]
pub struct RknStepper {
    tab: DiscreteRknTableau,
    /// `b_j Ā_ij`
    weighted_a_bar: Vec<Vec<f64>>,
    weighted_b_bar: Vec<f64>,
    weighted_b: Vec<f64>,
}

impl RknStepper {
    pub fn new(tab: DiscreteRknTableau) -> Self {
        let w = &tab.weights;
        let weighted_a_bar = tab.a_bar.iter().map(|row| row.iter().zip(w).map(|(a, b)| b * a).collect()).collect();
        let weighted_b_bar = tab.b_bar.iter().zip(w).map(|(x, b)| b * x).collect();
        let weighted_b = tab.b.iter().zip(w).map(|(x, b)| b * x).collect();
        Self { tab, weighted_a_bar, weighted_b_bar, weighted_b }
    }

    pub fn from_tableau(rkn: &CsRknTableau, rule: &QuadRule) -> Self {
        Self::new(rkn.discretize(rule))
    }

    pub fn tableau(&self) -> &DiscreteRknTableau {
        &self.tab
    }
}

impl Stepper for RknStepper {
    fn step(
        &self,
        prob: &SecondOrderProblem,
        s: &StepState,
        h: f64,
        cfg: &SolverConfig,
    ) -> Result<(StepState, SolveStats), IntegratorError> {
        let d = prob.dim();
        check_step(d, s, h)?;
        let k = self.tab.stages();
        let h2 = h * h;

        let mut mp0 = vec![0.0; d];
        prob.apply_mass(&s.p, &mut mp0);
        // q₀ + h C_i M p₀, the part of every stage that does not change
        let base: Vec<f64> =
            (0..k).flat_map(|i| (0..d).map(move |l| (i, l))).map(|(i, l)| s.q[l] + h * self.tab.c[i] * mp0[l]).collect();
        let mut stages = match cfg.initial_guess {
            InitialGuess::LinearInC => base.clone(),
            InitialGuess::Replicated => s.q.repeat(k),
        };

        let mut forces = vec![0.0; k * d];
        let mut acc = vec![0.0; d];
        let mut macc = vec![0.0; d];
        let stats = solver::solve(
            &mut stages,
            |x, out| {
                for j in 0..k {
                    prob.grad_u(&x[j * d..(j + 1) * d], &mut forces[j * d..(j + 1) * d])?;
                }
                for i in 0..k {
                    acc.iter_mut().for_each(|a| *a = 0.0);
                    for j in 0..k {
                        let w = self.weighted_a_bar[i][j];
                        for l in 0..d {
                            acc[l] += w * forces[j * d + l];
                        }
                    }
                    prob.apply_mass(&acc, &mut macc);
                    for l in 0..d {
                        out[i * d + l] = base[i * d + l] - h2 * macc[l];
                    }
                }
                Ok(())
            },
            cfg,
        )?;

        let mut forces = vec![0.0; k * d];
        for j in 0..k {
            prob.grad_u(&stages[j * d..(j + 1) * d], &mut forces[j * d..(j + 1) * d])?;
        }
        let mut sum_bar = vec![0.0; d];
        let mut sum_b = vec![0.0; d];
        for i in 0..k {
            for l in 0..d {
                sum_bar[l] += self.weighted_b_bar[i] * forces[i * d + l];
                sum_b[l] += self.weighted_b[i] * forces[i * d + l];
            }
        }
        let mut m_sum_bar = vec![0.0; d];
        prob.apply_mass(&sum_bar, &mut m_sum_bar);
        let q: Vec<f64> = (0..d).map(|l| s.q[l] + h * mp0[l] - h2 * m_sum_bar[l]).collect();
        let p: Vec<f64> = (0..d).map(|l| s.p[l] - h * sum_b[l]).collect();
        Ok((finite_state(StepState::new(q, p, s.t + h))?, stats))
    }
}

/// One step of the discretized csRKN scheme.
pub fn rkn_step(
    tab: &DiscreteRknTableau,
    prob: &SecondOrderProblem,
    h: f64,
    s: &StepState,
    cfg: &SolverConfig,
) -> Result<StepState, IntegratorError> {
    RknStepper::new(tab.clone()).step(prob, s, h, cfg).map(|(state, _)| state)
}
