//! Gauss–Legendre collocation RK methods, used as symplectic references.

use super::prk::PartitionedCoefficients;
use super::{IntegratorError, SolveStats, SolverConfig, StepState, Stepper};
use crate::poly::UniPoly;
use crate::problems::{HamiltonianSystem, SecondOrderProblem};
use crate::quadrature::gauss_rule;

/// Largest supported stage count.
pub const MAX_GLRK_STAGES: usize = 6;

/// `s`-stage Gauss–Legendre RK (order `2s`), applied to `(p, q)` jointly.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendreRk {
    stages: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    a: Vec<Vec<f64>>,
    coeffs: PartitionedCoefficients,
}

fn lagrange_basis(nodes: &[f64], j: usize) -> UniPoly {
    nodes
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != j)
        .fold(UniPoly::constant(1.0), |acc, (_, &cm)| &acc * &UniPoly::new(vec![-cm, 1.0]).scale(1.0 / (nodes[j] - cm)))
}

impl GaussLegendreRk {
    pub fn new(stages: usize) -> Result<Self, IntegratorError> {
        if stages == 0 || stages > MAX_GLRK_STAGES {
            return Err(IntegratorError::InvalidStep(format!(
                "Gauss-Legendre RK supports 1..={MAX_GLRK_STAGES} stages, got {stages}"
            )));
        }
        let rule = gauss_rule(stages).expect("stage count is within the quadrature range");
        let nodes = rule.nodes().to_vec();
        let weights = rule.weights().to_vec();
        let basis: Vec<UniPoly> = (0..stages).map(|j| lagrange_basis(&nodes, j).antiderivative()).collect();
        let a: Vec<Vec<f64>> = nodes.iter().map(|&ci| basis.iter().map(|l| l.eval(ci)).collect()).collect();
        let coeffs = PartitionedCoefficients { a: a.clone(), a_hat: a.clone(), beta: weights.clone(), beta_hat: weights.clone() };
        Ok(Self { stages, nodes, weights, a, coeffs })
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

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

impl Stepper for GaussLegendreRk {
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

/// One Gauss–Legendre RK step.
pub fn glrk_step<H: HamiltonianSystem + ?Sized>(
    stages: usize,
    ham: &H,
    h: f64,
    s: &StepState,
    cfg: &SolverConfig,
) -> Result<StepState, IntegratorError> {
    GaussLegendreRk::new(stages)?.step_hamiltonian(ham, s, h, cfg).map(|(state, _)| state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::integrate;
    use crate::problems::{harmonic_oscillator, kepler};

    #[test]
    fn midpoint_is_cayley_rotation() {
        let prob = harmonic_oscillator();
        let h = 0.1;
        let (q0, p0) = (0.7, -0.4);
        let s = StepState::new(vec![q0], vec![p0], 0.0);
        let next = glrk_step(1, &prob, h, &s, &SolverConfig::default()).unwrap();
        // q̇ = p, ṗ = −q: ((1 − h²/4) I + h J)/(1 + h²/4) with J = [[0, 1], [−1, 0]]
        let den = 1.0 + h * h / 4.0;
        let q1 = ((1.0 - h * h / 4.0) * q0 + h * p0) / den;
        let p1 = (-h * q0 + (1.0 - h * h / 4.0) * p0) / den;
        assert!((next.q[0] - q1).abs() < 1e-15);
        assert!((next.p[0] - p1).abs() < 1e-15);
    }

    #[test]
    fn two_stage_coefficients() {
        let m = GaussLegendreRk::new(2).unwrap();
        for (row, &c) in m.a().iter().zip(m.nodes()) {
            assert!((row.iter().sum::<f64>() - c).abs() < 1e-14);
        }
        // classical values: a11 = 1/4, a12 = 1/4 − √3/6
        let r3 = 3f64.sqrt();
        assert!((m.a()[0][0] - 0.25).abs() < 1e-15);
        assert!((m.a()[0][1] - (0.25 - r3 / 6.0)).abs() < 1e-15);
        assert!((m.a()[1][0] - (0.25 + r3 / 6.0)).abs() < 1e-15);
        assert!((m.a()[1][1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn collocation_row_sums_for_more_stages() {
        for s in 1..=MAX_GLRK_STAGES {
            let m = GaussLegendreRk::new(s).unwrap();
            for (row, &c) in m.a().iter().zip(m.nodes()) {
                assert!((row.iter().sum::<f64>() - c).abs() < 1e-13);
            }
        }
        assert!(GaussLegendreRk::new(0).is_err());
        assert!(GaussLegendreRk::new(MAX_GLRK_STAGES + 1).is_err());
    }

    #[test]
    fn kepler_angular_momentum_conserved() {
        let prob = kepler();
        let traj = integrate(&GaussLegendreRk::new(2).unwrap(), &prob, 0.1, 10_000, &SolverConfig::default(), true).unwrap();
        assert!(traj.invariant("I").unwrap().max_error() < 1e-12);
    }
}
