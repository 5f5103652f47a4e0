//! Second-order systems `q̈ = −M∇U(q)` with their separable Hamiltonian
//! `H = ½pᵀMp + U(q)`, invariants, and known solutions.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest tolerated `|M_ij − M_ji|`.
pub const MASS_SYMMETRY_TOL: f64 = 1e-12;

/// Distance from the origin below which the Kepler force is refused.
pub const KEPLER_SINGULARITY_RADIUS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("mass matrix must be {dim}x{dim} ({len} entries given)")]
    MassShape { dim: usize, len: usize },
    #[error("mass matrix is not symmetric (|M_ij - M_ji| = {0:.3e})")]
    MassNotSymmetric(f64),
    #[error("initial state has wrong dimension (expected {expected})")]
    InitialDimension { expected: usize },
    #[error("gradient undefined at q = {q:?}: {reason}")]
    Domain { q: Vec<f64>, reason: &'static str },
}

pub type Potential = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type Gradient = Arc<dyn Fn(&[f64], &mut [f64]) -> Result<(), ProblemError> + Send + Sync>;
/// `(p, q) ↦ value`; vector invariants return several components.
pub type InvariantFn = Arc<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>;
/// `t ↦ (p, q)`.
pub type ExactSolution = Arc<dyn Fn(f64) -> (Vec<f64>, Vec<f64>) + Send + Sync>;

#[derive(Clone)]
pub struct Invariant {
    pub name: String,
    pub eval: InvariantFn,
}

/// A first-order Hamiltonian system `ṗ = −∇_qH`, `q̇ = ∇_pH`.
pub trait HamiltonianSystem {
    fn dim(&self) -> usize;
    fn hamiltonian(&self, p: &[f64], q: &[f64]) -> f64;
    fn grad_q(&self, p: &[f64], q: &[f64], out: &mut [f64]) -> Result<(), ProblemError>;
    fn grad_p(&self, p: &[f64], q: &[f64], out: &mut [f64]) -> Result<(), ProblemError>;
}

#[derive(Clone)]
pub struct SecondOrderProblem {
    name: String,
    dim: usize,
    mass: Vec<f64>,
    identity_mass: bool,
    potential: Potential,
    gradient: Gradient,
    invariants: Vec<Invariant>,
    exact: Option<ExactSolution>,
    p0: Vec<f64>,
    q0: Vec<f64>,
    poly_degree: Option<usize>,
}

impl fmt::Debug for SecondOrderProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecondOrderProblem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("mass", &self.mass)
            .field("invariants", &self.invariants.iter().map(|i| &i.name).collect::<Vec<_>>())
            .field("exact", &self.exact.is_some())
            .field("p0", &self.p0)
            .field("q0", &self.q0)
            .field("poly_degree", &self.poly_degree)
            .finish()
    }
}

impl SecondOrderProblem {
    /// Builds a problem with mass matrix `mass` (row-major, `dim × dim`).
    /// The energy `H` is always registered as the first invariant.
    pub fn new(
        name: impl Into<String>,
        mass: Vec<f64>,
        potential: Potential,
        gradient: Gradient,
        p0: Vec<f64>,
        q0: Vec<f64>,
    ) -> Result<Self, ProblemError> {
        let dim = q0.len();
        if p0.len() != dim {
            return Err(ProblemError::InitialDimension { expected: dim });
        }
        if mass.len() != dim * dim {
            return Err(ProblemError::MassShape { dim, len: mass.len() });
        }
        let mut asym = 0.0_f64;
        for i in 0..dim {
            for j in 0..i {
                asym = asym.max((mass[i * dim + j] - mass[j * dim + i]).abs());
            }
        }
        if asym >= MASS_SYMMETRY_TOL || asym.is_nan() {
            return Err(ProblemError::MassNotSymmetric(asym));
        }
        let identity_mass = (0..dim).all(|i| (0..dim).all(|j| mass[i * dim + j] == if i == j { 1.0 } else { 0.0 }));

        let mut problem = Self {
            name: name.into(),
            dim,
            mass,
            identity_mass,
            potential,
            gradient,
            invariants: Vec::new(),
            exact: None,
            p0,
            q0,
            poly_degree: None,
        };
        let energy = problem.clone();
        problem.invariants.push(Invariant { name: "H".into(), eval: Arc::new(move |p, q| vec![energy.hamiltonian(p, q)]) });
        Ok(problem)
    }

    pub fn with_invariant(mut self, name: impl Into<String>, eval: InvariantFn) -> Self {
        self.invariants.push(Invariant { name: name.into(), eval });
        self
    }

    pub fn with_exact_solution(mut self, exact: ExactSolution) -> Self {
        self.exact = Some(exact);
        self
    }

    /// Degree `ν` of a polynomial potential.
    pub fn with_poly_degree(mut self, nu: usize) -> Self {
        self.poly_degree = Some(nu);
        self
    }

    pub fn with_initial(mut self, p0: Vec<f64>, q0: Vec<f64>) -> Result<Self, ProblemError> {
        if p0.len() != self.dim || q0.len() != self.dim {
            return Err(ProblemError::InitialDimension { expected: self.dim });
        }
        self.p0 = p0;
        self.q0 = q0;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn potential(&self, q: &[f64]) -> f64 {
        (self.potential)(q)
    }

    pub fn grad_u(&self, q: &[f64], out: &mut [f64]) -> Result<(), ProblemError> {
        (self.gradient)(q, out)
    }

    /// `out = M v`.
    pub fn apply_mass(&self, v: &[f64], out: &mut [f64]) {
        if self.identity_mass {
            out.copy_from_slice(v);
            return;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.mass[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(m, x)| m * x).sum();
        }
    }

    pub fn invariants(&self) -> &[Invariant] {
        &self.invariants
    }

    pub fn exact_solution(&self) -> Option<&ExactSolution> {
        self.exact.as_ref()
    }

    pub fn initial(&self) -> (&[f64], &[f64]) {
        (&self.p0, &self.q0)
    }

    pub fn poly_degree(&self) -> Option<usize> {
        self.poly_degree
    }
}

impl HamiltonianSystem for SecondOrderProblem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn hamiltonian(&self, p: &[f64], q: &[f64]) -> f64 {
        let mut mp = vec![0.0; self.dim];
        self.apply_mass(p, &mut mp);
        0.5 * p.iter().zip(&mp).map(|(a, b)| a * b).sum::<f64>() + self.potential(q)
    }

    fn grad_q(&self, _p: &[f64], q: &[f64], out: &mut [f64]) -> Result<(), ProblemError> {
        self.grad_u(q, out)
    }

    fn grad_p(&self, p: &[f64], _q: &[f64], out: &mut [f64]) -> Result<(), ProblemError> {
        self.apply_mass(p, out);
        Ok(())
    }
}

/// `q̈ = ½q² − q`: `U = ½q² − q³/6`, `p₀ = 1`, `q₀ = 0`.
pub fn cubic_oscillator() -> SecondOrderProblem {
    SecondOrderProblem::new(
        "cubic",
        vec![1.0],
        Arc::new(|q| 0.5 * q[0] * q[0] - q[0].powi(3) / 6.0),
        Arc::new(|q, out| {
            out[0] = q[0] - 0.5 * q[0] * q[0];
            Ok(())
        }),
        vec![1.0],
        vec![0.0],
    )
    .expect("scalar problem is well formed")
    .with_poly_degree(3)
}

/// `q̈ = −sin q`: `U = −cos q`, `p₀ = 0.5`, `q₀ = 0`.
pub fn pendulum() -> SecondOrderProblem {
    SecondOrderProblem::new(
        "pendulum",
        vec![1.0],
        Arc::new(|q| -q[0].cos()),
        Arc::new(|q, out| {
            out[0] = q[0].sin();
            Ok(())
        }),
        vec![0.5],
        vec![0.0],
    )
    .expect("scalar problem is well formed")
}

fn kepler_radius(q: &[f64]) -> f64 {
    q[0].hypot(q[1])
}

/// Angular momentum `q₁p₂ − q₂p₁`.
pub fn angular_momentum(p: &[f64], q: &[f64]) -> f64 {
    q[0] * p[1] - q[1] * p[0]
}

/// In-plane components of `(p, 0) × (0, 0, I) − q/|q|`.
pub fn runge_lenz(p: &[f64], q: &[f64]) -> [f64; 2] {
    let i = angular_momentum(p, q);
    let r = kepler_radius(q);
    [p[1] * i - q[0] / r, -p[0] * i - q[1] / r]
}

/// Planar Kepler problem on the unit circular orbit, with invariants `H`,
/// `I` (angular momentum) and `L` (Runge–Lenz–Pauli vector).
pub fn kepler() -> SecondOrderProblem {
    SecondOrderProblem::new(
        "kepler",
        vec![1.0, 0.0, 0.0, 1.0],
        Arc::new(|q| -1.0 / kepler_radius(q)),
        Arc::new(|q, out| {
            let r = kepler_radius(q);
            if r.is_nan() || r < KEPLER_SINGULARITY_RADIUS {
                return Err(ProblemError::Domain { q: q.to_vec(), reason: "Kepler force is singular at the origin" });
            }
            let r3 = r * r * r;
            out[0] = q[0] / r3;
            out[1] = q[1] / r3;
            Ok(())
        }),
        vec![0.0, 1.0],
        vec![1.0, 0.0],
    )
    .expect("planar problem is well formed")
    .with_invariant("I", Arc::new(|p, q| vec![angular_momentum(p, q)]))
    .with_invariant("L", Arc::new(|p, q| runge_lenz(p, q).to_vec()))
    .with_exact_solution(Arc::new(|t| (vec![-t.sin(), t.cos()], vec![t.cos(), t.sin()])))
}

/// `q̈ = −q`, `U = ½q²`, with the rotation as exact solution.
pub fn harmonic_oscillator() -> SecondOrderProblem {
    SecondOrderProblem::new(
        "harmonic",
        vec![1.0],
        Arc::new(|q| 0.5 * q[0] * q[0]),
        Arc::new(|q, out| {
            out[0] = q[0];
            Ok(())
        }),
        vec![1.0],
        vec![0.0],
    )
    .expect("scalar problem is well formed")
    .with_poly_degree(2)
    .with_exact_solution(Arc::new(|t| (vec![t.cos()], vec![t.sin()])))
}

/// Looks up one of the named problems.
pub fn by_name(name: &str) -> Option<SecondOrderProblem> {
    match name {
        "cubic" | "cubic_oscillator" => Some(cubic_oscillator()),
        "pendulum" => Some(pendulum()),
        "kepler" => Some(kepler()),
        "harmonic" => Some(harmonic_oscillator()),
        _ => None,
    }
}

pub const PROBLEM_NAMES: &[&str] = &["cubic", "pendulum", "kepler", "harmonic"];

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn grad(prob: &SecondOrderProblem, q: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; q.len()];
        prob.grad_u(q, &mut g).unwrap();
        g
    }

    #[test]
    fn cubic_values() {
        let c = cubic_oscillator();
        assert_eq!(c.hamiltonian(&[1.0], &[0.0]), 0.5);
        assert_eq!(grad(&c, &[0.0]), vec![0.0]);
        assert_eq!(grad(&c, &[2.0]), vec![0.0]);
        assert_eq!(c.poly_degree(), Some(3));
    }

    #[test]
    fn pendulum_values() {
        let p = pendulum();
        assert_eq!(p.hamiltonian(&[0.5], &[0.0]), -0.875);
        assert_eq!(grad(&p, &[0.0]), vec![0.0]);
        assert!((grad(&p, &[std::f64::consts::FRAC_PI_2])[0] - 1.0).abs() < 1e-16);
        assert_eq!(p.poly_degree(), None);
    }

    #[test]
    fn kepler_initial_invariants() {
        let k = kepler();
        let (p, q) = k.initial();
        assert_eq!(k.hamiltonian(p, q), -0.5);
        assert_eq!(angular_momentum(p, q), 1.0);
        assert_eq!(runge_lenz(p, q), [0.0, 0.0]);
        let names: Vec<_> = k.invariants().iter().map(|i| i.name.as_str()).collect();
        assert_eq!(names, ["H", "I", "L"]);
    }

    #[test]
    fn kepler_exact_solution_solves_equation() {
        let k = kepler();
        let exact = k.exact_solution().unwrap();
        let t = 0.7;
        let (_, q) = exact(t);
        // q̈ of (cos t, sin t) is −q
        let qdd = [-t.cos(), -t.sin()];
        let g = grad(&k, &q);
        assert!((qdd[0] + g[0]).abs() < 1e-14 && (qdd[1] + g[1]).abs() < 1e-14);
    }

    #[test]
    fn kepler_invariants_constant_on_exact_orbit() {
        let k = kepler();
        let exact = k.exact_solution().unwrap();
        for inv in k.invariants() {
            let values: Vec<Vec<f64>> = (0..=10)
                .map(|i| {
                    let (p, q) = exact(0.5 * i as f64);
                    (inv.eval)(&p, &q)
                })
                .collect();
            for c in 0..values[0].len() {
                let (lo, hi) = values.iter().map(|v| v[c]).fold((f64::MAX, f64::MIN), |(a, b), x| (a.min(x), b.max(x)));
                assert!(hi - lo < 1e-13, "{} component {c} spread {}", inv.name, hi - lo);
            }
        }
    }

    #[test]
    fn kepler_origin_is_a_domain_error() {
        let k = kepler();
        let mut out = [0.0; 2];
        assert!(matches!(k.grad_u(&[0.0, 1e-13], &mut out), Err(ProblemError::Domain { .. })));
        assert!(matches!(k.grad_u(&[f64::NAN, 0.0], &mut out), Err(ProblemError::Domain { .. })));
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let eps = 1e-6;
        for prob in [cubic_oscillator(), pendulum(), kepler(), harmonic_oscillator()] {
            let d = prob.dim();
            for _ in 0..20 {
                let q: Vec<f64> = loop {
                    let q: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    if d == 1 || kepler_radius(&q) > 0.3 {
                        break q;
                    }
                };
                let g = grad(&prob, &q);
                for i in 0..d {
                    let mut plus = q.clone();
                    let mut minus = q.clone();
                    plus[i] += eps;
                    minus[i] -= eps;
                    let fd = (prob.potential(&plus) - prob.potential(&minus)) / (2.0 * eps);
                    assert!((fd - g[i]).abs() < 1e-6, "{} at {q:?}: fd {fd} vs {}", prob.name(), g[i]);
                }
            }
        }
    }

    #[test]
    fn mass_matrix_validation() {
        let u: Potential = Arc::new(|q| q[0] * q[0] + q[1] * q[1]);
        let g: Gradient = Arc::new(|q, out| {
            out[0] = 2.0 * q[0];
            out[1] = 2.0 * q[1];
            Ok(())
        });
        let asym = SecondOrderProblem::new("x", vec![2.0, 1.0, 0.5, 3.0], u.clone(), g.clone(), vec![0.0; 2], vec![0.0; 2]);
        assert!(matches!(asym, Err(ProblemError::MassNotSymmetric(_))));
        let bad = SecondOrderProblem::new("x", vec![1.0; 3], u.clone(), g.clone(), vec![0.0; 2], vec![0.0; 2]);
        assert!(matches!(bad, Err(ProblemError::MassShape { .. })));

        let prob = SecondOrderProblem::new("x", vec![2.0, 1.0, 1.0, 3.0], u, g, vec![1.0, -1.0], vec![0.0; 2]).unwrap();
        let mut mp = [0.0; 2];
        prob.apply_mass(&[1.0, -1.0], &mut mp);
        assert_eq!(mp, [1.0, -2.0]);
        // ½ pᵀMp = ½ (1 + 2) with p = (1, −1)
        assert_eq!(prob.hamiltonian(&[1.0, -1.0], &[0.0, 0.0]), 1.5);
    }
}
