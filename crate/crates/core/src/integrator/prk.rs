//! Partitioned RK steps for `ṗ = −∇_qH`, `q̇ = ∇_pH`:
//!
//! ```text
//! P_i = p₀ − h Σ_j a_ij ∇_qH(P_j, Q_j)      p₁ = p₀ − h Σ_i β_i ∇_qH(P_i, Q_i)
//! Q_i = q₀ + h Σ_j â_ij ∇_pH(P_j, Q_j)      q₁ = q₀ + h Σ_i β̂_i ∇_pH(P_i, Q_i)
//! ```
//!
//! A csPRK tableau sampled at quadrature nodes gives `a_ij = b_j A(c_i,c_j)`,
//! `â_ij = b_j Â(c_i,c_j)`, `β_i = b_i B(c_i)`, `β̂_i = b_i B̂(c_i)`.

use super::{check_step, finite_state, solver, InitialGuess, IntegratorError, SolveStats, SolverConfig, StepState, Stepper};
use crate::problems::{HamiltonianSystem, SecondOrderProblem};
use crate::quadrature::QuadRule;
use crate::tableau::{CsPrkTableau, DiscretePrkTableau};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PartitionedCoefficients {
    pub a: Vec<Vec<f64>>,
    pub a_hat: Vec<Vec<f64>>,
    pub beta: Vec<f64>,
    pub beta_hat: Vec<f64>,
}

impl PartitionedCoefficients {
    fn stages(&self) -> usize {
        self.beta.len()
    }

    pub(crate) fn step<H: HamiltonianSystem + ?Sized>(
        &self,
        ham: &H,
        s: &StepState,
        h: f64,
        cfg: &SolverConfig,
    ) -> Result<(StepState, SolveStats), IntegratorError> {
        let d = ham.dim();
        check_step(d, s, h)?;
        let k = self.stages();
        let n = 2 * d;

        let mut x = match cfg.initial_guess {
            InitialGuess::Replicated => [s.p.as_slice(), s.q.as_slice()].concat().repeat(k),
            InitialGuess::LinearInC => {
                let mut gq = vec![0.0; d];
                let mut gp = vec![0.0; d];
                ham.grad_q(&s.p, &s.q, &mut gq)?;
                ham.grad_p(&s.p, &s.q, &mut gp)?;
                let mut x = Vec::with_capacity(k * n);
                for i in 0..k {
                    let c: f64 = self.a[i].iter().sum();
                    let c_hat: f64 = self.a_hat[i].iter().sum();
                    x.extend((0..d).map(|l| s.p[l] - h * c * gq[l]));
                    x.extend((0..d).map(|l| s.q[l] + h * c_hat * gp[l]));
                }
                x
            }
        };

        let mut gq = vec![0.0; k * d];
        let mut gp = vec![0.0; k * d];
        let stats = solver::solve(
            &mut x,
            |x, out| {
                for j in 0..k {
                    let (pj, qj) = x[j * n..(j + 1) * n].split_at(d);
                    ham.grad_q(pj, qj, &mut gq[j * d..(j + 1) * d])?;
                    ham.grad_p(pj, qj, &mut gp[j * d..(j + 1) * d])?;
                }
                for i in 0..k {
                    for l in 0..d {
                        let mut sp = 0.0;
                        let mut sq = 0.0;
                        for j in 0..k {
                            sp += self.a[i][j] * gq[j * d + l];
                            sq += self.a_hat[i][j] * gp[j * d + l];
                        }
                        out[i * n + l] = s.p[l] - h * sp;
                        out[i * n + d + l] = s.q[l] + h * sq;
                    }
                }
                Ok(())
            },
            cfg,
        )?;

        let mut p = s.p.clone();
        let mut q = s.q.clone();
        let mut gq = vec![0.0; d];
        let mut gp = vec![0.0; d];
        for i in 0..k {
            let (pi, qi) = x[i * n..(i + 1) * n].split_at(d);
            ham.grad_q(pi, qi, &mut gq)?;
            ham.grad_p(pi, qi, &mut gp)?;
            for l in 0..d {
                p[l] -= h * self.beta[i] * gq[l];
                q[l] += h * self.beta_hat[i] * gp[l];
            }
        }
        Ok((finite_state(StepState::new(q, p, s.t + h))?, stats))
    }
}

/// The csPRK scheme discretized at the nodes of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PrkStepper {
    tab: DiscretePrkTableau,
    coeffs: PartitionedCoefficients,
}

impl PrkStepper {
    pub fn new(tab: DiscretePrkTableau) -> Self {
        let w = &tab.weights;
        let weigh = |m: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            m.iter().map(|row| row.iter().zip(w).map(|(a, b)| b * a).collect()).collect()
        };
        let coeffs = PartitionedCoefficients {
            a: weigh(&tab.a),
            a_hat: weigh(&tab.a_hat),
            beta: tab.b.iter().zip(w).map(|(x, b)| b * x).collect(),
            beta_hat: tab.b_hat.iter().zip(w).map(|(x, b)| b * x).collect(),
        };
        Self { tab, coeffs }
    }

    pub fn from_tableau(prk: &CsPrkTableau, rule: &QuadRule) -> Self {
        Self::new(DiscretePrkTableau::sample(prk, rule))
    }

    pub fn tableau(&self) -> &DiscretePrkTableau {
        &self.tab
    }

    /// Steps any Hamiltonian system, not only separable ones.
    pub fn step_hamiltonian<H: HamiltonianSystem + ?Sized>(
        &self,
        ham: &H,
        s: &StepState,
        h: f64,
        cfg: &SolverConfig,
    ) -> Result<(StepState, SolveStats), IntegratorError> {
        self.coeffs.step(ham, s, h, cfg)
    }
}

impl Stepper for PrkStepper {
    fn step(
        &self,
        prob: &SecondOrderProblem,
        s: &StepState,
        h: f64,
        cfg: &SolverConfig,
    ) -> Result<(StepState, SolveStats), IntegratorError> {
        self.coeffs.step(prob, s, h, cfg)
    }
}

/// One step of the csPRK scheme discretized by `rule`.
pub fn prk_step<H: HamiltonianSystem + ?Sized>(
    prk: &CsPrkTableau,
    rule: &QuadRule,
    ham: &H,
    h: f64,
    s: &StepState,
    cfg: &SolverConfig,
) -> Result<StepState, IntegratorError> {
    PrkStepper::from_tableau(prk, rule).step_hamiltonian(ham, s, h, cfg).map(|(state, _)| state)
}
