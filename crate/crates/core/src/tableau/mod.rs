//! Continuous-stage coefficient tableaux.
//!
//! A [`CsPrkTableau`] carries the partitioned pair `(A, B)` / `(Â, B̂)`; a
//! [`CsRknTableau`] carries `(Ā, B̄, B, C)` and optionally the witness kernel
//! `A` from which the energy-preservation conditions can be checked in full.
//! Energy-preserving csPRK tableaux induce csRKN tableaux by eliminating the
//! momentum stages of a separable Hamiltonian ([`induce_rkn`]).

mod builtin;
mod discrete;
mod io;
mod verify;

use thiserror::Error;

use crate::poly::{shifted_legendre, BiPoly, PolyError, UniPoly};

pub use builtin::{builtin, ex1, ex2_prk, ex2_rkn_swapped, ex3_prk, ex3_rkn, ex3_rkn_swapped, BuiltinInfo, BUILTINS};
pub use discrete::{DiscretePrkTableau, DiscreteRknTableau};
pub use io::{parse_tableau, write_tableau, FormatError};
pub use verify::{verify_ep_prk, verify_ep_rkn, CheckStatus, ConditionCheck, VerificationReport, DEFAULT_TOLERANCE};

#[derive(Debug, Error)]
pub enum TableauError {
    #[error("csPRK tableau is not energy-preserving:\n{0}")]
    NotEnergyPreserving(Box<VerificationReport>),
    #[error("unknown builtin family `{0}`")]
    UnknownBuiltin(String),
    #[error("builtin `{name}` takes {expected} parameter(s), got {got}")]
    ParamCount { name: String, expected: usize, got: usize },
    #[error("high-order family needs s, r >= eta + 1 (eta = {eta}, s = {s}, r = {r})")]
    FamilyTooSmall { eta: usize, s: usize, r: usize },
    #[error("coefficient matrix shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(A, Â, B, B̂)` of a continuous-stage partitioned RK method.
#[derive(Debug, Clone, PartialEq)]
pub struct CsPrkTableau {
    pub a: BiPoly,
    pub a_hat: BiPoly,
    pub b: UniPoly,
    pub b_hat: UniPoly,
}

/// `(Ā, B̄, B, C)` of a continuous-stage RKN method, with optional witness `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsRknTableau {
    pub a_bar: BiPoly,
    pub b_bar: UniPoly,
    pub b: UniPoly,
    pub c: UniPoly,
    pub witness_a: Option<BiPoly>,
}

/// Either kind of tableau, as produced by [`builtin`] or read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Tableau {
    Rkn(CsRknTableau),
    Prk(CsPrkTableau),
}

impl Tableau {
    pub fn verify(&self, tol: f64) -> VerificationReport {
        match self {
            Tableau::Rkn(t) => verify_ep_rkn(t, tol),
            Tableau::Prk(t) => verify_ep_prk(t, tol),
        }
    }
}

/// `Σ_{i<s, j<r} α_ij (∫₀^τ L_i) L_j(σ)`.
fn legendre_series(alpha: &[Vec<f64>]) -> Result<BiPoly, TableauError> {
    let mut sum = BiPoly::zero();
    for (i, row) in alpha.iter().enumerate() {
        let integrated = shifted_legendre(i)?.antiderivative();
        for (j, &coef) in row.iter().enumerate() {
            if coef != 0.0 {
                let term = BiPoly::outer(&integrated, &shifted_legendre(j)?).scale(coef);
                sum = &sum + &term;
            }
        }
    }
    Ok(sum)
}

fn check_rectangular(alpha: &[Vec<f64>]) -> Result<(usize, usize), TableauError> {
    let s = alpha.len();
    let r = alpha.first().map_or(0, Vec::len);
    if s == 0 || r == 0 || alpha.iter().any(|row| row.len() != r) {
        return Err(TableauError::Shape(format!(
            "alpha must be a non-empty rectangular matrix, got row lengths {:?}",
            alpha.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    Ok((s, r))
}

/// Energy-preserving csPRK tableau from a Legendre coefficient matrix `α`
/// (`s × r`); the hatted coefficients use the transpose.
pub fn from_alpha_matrix(alpha: &[Vec<f64>]) -> Result<CsPrkTableau, TableauError> {
    let (s, r) = check_rectangular(alpha)?;
    let alpha_hat: Vec<Vec<f64>> = (0..r).map(|i| (0..s).map(|j| alpha[j][i]).collect()).collect();

    let mut b = UniPoly::zero();
    for (j, &coef) in alpha[0].iter().enumerate() {
        b = &b + &shifted_legendre(j)?.scale(coef);
    }
    let mut b_hat = UniPoly::zero();
    for (j, &coef) in alpha_hat[0].iter().enumerate() {
        b_hat = &b_hat + &shifted_legendre(j)?.scale(coef);
    }
    Ok(CsPrkTableau { a: legendre_series(alpha)?, a_hat: legendre_series(&alpha_hat)?, b, b_hat })
}

/// Order-`2η` family: identity on the leading `η × η` Legendre block, a free
/// `(s-η) × (r-η)` block below-right, `B = B̂ = 1`.
pub fn high_order_family(eta: usize, alpha_free: &[Vec<f64>], s: usize, r: usize) -> Result<CsPrkTableau, TableauError> {
    if eta == 0 || s < eta + 1 || r < eta + 1 {
        return Err(TableauError::FamilyTooSmall { eta, s, r });
    }
    let (fs, fr) = (s - eta, r - eta);
    let free_ok =
        if alpha_free.is_empty() { true } else { alpha_free.len() == fs && alpha_free.iter().all(|row| row.len() == fr) };
    if !free_ok {
        return Err(TableauError::Shape(format!("free block must be {fs} x {fr} (or empty for all zeros)")));
    }
    let mut alpha = vec![vec![0.0; r]; s];
    for (d, row) in alpha.iter_mut().enumerate().take(eta) {
        row[d] = 1.0;
    }
    for (i, row) in alpha_free.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            alpha[eta + i][eta + j] = v;
        }
    }
    from_alpha_matrix(&alpha)
}

/// `Â(τ,σ) = ∫₀^τ A'(σ,ζ) dζ`.
pub fn hat_of(a: &BiPoly) -> BiPoly {
    a.dtau().transpose().antider_tau()
}

/// Exchanges the roles of `(A, B)` and `(Â, B̂)`.
pub fn swap_roles(prk: &CsPrkTableau) -> CsPrkTableau {
    CsPrkTableau { a: prk.a_hat.clone(), a_hat: prk.a.clone(), b: prk.b_hat.clone(), b_hat: prk.b.clone() }
}

/// csRKN coefficients obtained by eliminating the `P` stages:
/// `C = ∫Â dσ`, `Ā = ∫ Â(τ,ρ) A(ρ,σ) dρ`, `B̄ = ∫ B̂(ρ) A(ρ,τ) dρ`.
///
/// The input must pass [`verify_ep_prk`] at [`DEFAULT_TOLERANCE`]; the
/// result carries `A` as its witness.
pub fn induce_rkn(prk: &CsPrkTableau) -> Result<CsRknTableau, TableauError> {
    let report = verify_ep_prk(prk, DEFAULT_TOLERANCE);
    if !report.overall {
        return Err(TableauError::NotEnergyPreserving(Box::new(report)));
    }
    let b_bar = BiPoly::from_sigma(&prk.b_hat).compose(&prk.a).at_tau(0.0);
    Ok(CsRknTableau {
        a_bar: prk.a_hat.compose(&prk.a),
        b_bar,
        b: prk.b.clone(),
        c: prk.a_hat.int_sigma(),
        witness_a: Some(prk.a.clone()),
    })
}

impl CsRknTableau {
    /// Samples the coefficients at the nodes of `rule`.
    pub fn discretize(&self, rule: &crate::quadrature::QuadRule) -> DiscreteRknTableau {
        DiscreteRknTableau::sample(self, rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_residual;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn alpha_one_is_avf() {
        let t = from_alpha_matrix(&[vec![1.0]]).unwrap();
        let tau = BiPoly::from_terms(&[(1, 0, 1.0)]);
        assert!(poly_residual(&t.a, &tau) < 1e-15);
        assert!(poly_residual(&t.a_hat, &tau) < 1e-15);
        assert_eq!(t.b, UniPoly::constant(1.0));
        assert_eq!(t.b_hat, UniPoly::constant(1.0));
        assert!(verify_ep_prk(&t, 1e-12).overall);
    }

    #[test]
    fn alpha_00_controls_consistency() {
        let t = from_alpha_matrix(&[vec![0.8, 0.1], vec![0.3, -0.2]]).unwrap();
        let report = verify_ep_prk(&t, DEFAULT_TOLERANCE);
        assert!(!report.overall);
        let int_b = report.check("int_B").unwrap();
        assert!((int_b.residual.unwrap() - 0.2).abs() < 1e-14);
        // the five structural identities still hold
        for name in ["A0", "A1_B", "Ahat0", "Ahat1_Bhat", "symmetry"] {
            assert_eq!(report.check(name).unwrap().status, CheckStatus::Pass, "{name}");
        }
    }

    #[test]
    fn alpha_reproduces_example_two() {
        // 2θx + 1 - θ = L_0 + (θ/√3) L_1, so ex2A is α = [[1], [θ/√3]]
        for theta in [0.0, 0.1, 0.35, -0.8] {
            let t = from_alpha_matrix(&[vec![1.0], vec![theta / SQRT3]]).unwrap();
            let reference = ex2_prk(theta);
            assert!(poly_residual(&t.a, &reference.a) < 1e-12);
            assert!(poly_residual(&t.a_hat, &reference.a_hat) < 1e-12);
            assert!(poly_residual(&t.b, &reference.b) < 1e-12);
            assert!(poly_residual(&t.b_hat, &reference.b_hat) < 1e-12);

            let transposed = from_alpha_matrix(&[vec![1.0, theta / SQRT3]]).unwrap();
            let swapped = swap_roles(&reference);
            assert!(poly_residual(&transposed.a, &swapped.a) < 1e-12);
            assert!(poly_residual(&transposed.a_hat, &swapped.a_hat) < 1e-12);
        }
    }

    #[test]
    fn high_order_examples() {
        let avf = high_order_family(1, &[], 2, 2).unwrap();
        let tau = BiPoly::from_terms(&[(1, 0, 1.0)]);
        assert!(poly_residual(&avf.a, &tau) < 1e-15);
        assert!(poly_residual(&avf.a_hat, &tau) < 1e-15);
        assert_eq!(avf.b, UniPoly::constant(1.0));

        let order4 = high_order_family(2, &[vec![0.0]], 3, 3).unwrap();
        let ex3 = ex3_prk(0.0, 0.0);
        assert!(poly_residual(&order4.a, &ex3.a) < 1e-12);
        assert!(poly_residual(&order4.a_hat, &ex3.a_hat) < 1e-12);

        let free = [vec![0.3, -0.7], vec![1.1, 0.25]];
        let t = high_order_family(2, &free, 4, 4).unwrap();
        let report = verify_ep_prk(&t, DEFAULT_TOLERANCE);
        assert!(report.overall, "{report}");
        assert!(report.max_residual() < 1e-10);
        assert_eq!(t.b, UniPoly::constant(1.0));
        assert_eq!(t.b_hat, UniPoly::constant(1.0));

        assert!(matches!(high_order_family(2, &[], 2, 3), Err(TableauError::FamilyTooSmall { .. })));
        assert!(matches!(high_order_family(1, &[vec![1.0, 2.0]], 2, 2), Err(TableauError::Shape(_))));
    }

    #[test]
    fn hat_examples() {
        let tau = BiPoly::from_terms(&[(1, 0, 1.0)]);
        assert_eq!(hat_of(&tau), tau);
        let f = BiPoly::from_terms(&[(2, 1, 1.0)]);
        assert!(poly_residual(&hat_of(&f), &f) < 1e-15);
        for a in [0.3, -1.0, 0.5] {
            let witness = BiPoly::from_terms(&[(2, 1, 12.0 * a), (1, 1, -12.0 * a), (1, 0, 1.0)]);
            let expected = BiPoly::from_terms(&[(2, 1, 12.0 * a), (2, 0, -6.0 * a), (1, 0, 1.0)]);
            assert!(poly_residual(&hat_of(&witness), &expected) < 1e-14);
        }
    }

    #[test]
    fn hat_satisfies_symmetry_identity() {
        let a = ex3_prk(0.4, -0.3).a;
        let h = hat_of(&a);
        assert!(h.at_tau(0.0).is_zero());
        assert!(poly_residual(&a.dtau(), &h.dtau().transpose()) < 1e-12);
    }

    #[test]
    fn swap_is_involution_and_preserves_ep() {
        let t = ex3_prk(0.1, 0.2);
        assert_eq!(swap_roles(&swap_roles(&t)), t);
        assert!(verify_ep_prk(&swap_roles(&t), DEFAULT_TOLERANCE).overall);
    }

    #[test]
    fn induce_example_two() {
        for theta in [0.0, 0.1, 0.3, -0.6] {
            let rkn = induce_rkn(&ex2_prk(theta)).unwrap();
            assert!(poly_residual(&rkn.a_bar, &BiPoly::from_terms(&[(1, 0, 0.5)])) < 1e-13);
            assert!(poly_residual(&rkn.b_bar, &UniPoly::constant(0.5)) < 1e-13);
            assert!(poly_residual(&rkn.b, &UniPoly::constant(1.0)) < 1e-13);
            assert!(poly_residual(&rkn.c, &UniPoly::x()) < 1e-13);
            assert!(verify_ep_rkn(&rkn, DEFAULT_TOLERANCE).overall);
        }
    }

    #[test]
    fn induce_swapped_example_two() {
        for theta in [0.0, 0.1, 0.2, 0.7] {
            let rkn = induce_rkn(&swap_roles(&ex2_prk(theta))).unwrap();
            let printed = ex2_rkn_swapped(theta);
            assert!(poly_residual(&rkn.a_bar, &printed.a_bar) < 1e-13);
            assert!(poly_residual(&rkn.b_bar, &printed.b_bar) < 1e-13);
            assert!(poly_residual(&rkn.b, &printed.b) < 1e-13);
            assert!(poly_residual(&rkn.c, &printed.c) < 1e-13);
            let bbar = UniPoly::new(vec![(1.0 - theta) / 2.0, theta]);
            assert!(poly_residual(&rkn.b_bar, &bbar) < 1e-13);
        }
    }

    #[test]
    fn induce_example_three() {
        for (t1, t2) in [(0.1, 0.0), (0.1, 0.2), (-0.5, 0.9)] {
            let rkn = induce_rkn(&ex3_prk(t1, t2)).unwrap();
            let printed = ex3_rkn(t1);
            assert!(poly_residual(&rkn.a_bar, &printed.a_bar) < 1e-12);
            assert!(poly_residual(&rkn.b_bar, &UniPoly::new(vec![1.0, -1.0])) < 1e-12);
            assert!(poly_residual(&rkn.c, &UniPoly::x()) < 1e-12);

            let swapped = induce_rkn(&swap_roles(&ex3_prk(t1, t2))).unwrap();
            let printed = ex3_rkn_swapped(t1, t2);
            assert!(poly_residual(&swapped.a_bar, &printed.a_bar) < 1e-12);
            assert!(poly_residual(&swapped.b_bar, &printed.b_bar) < 1e-12);
        }
    }

    #[test]
    fn induce_rejects_non_ep_input() {
        let mut t = ex2_prk(0.1);
        t.b = UniPoly::constant(1.01);
        assert!(matches!(induce_rkn(&t), Err(TableauError::NotEnergyPreserving(_))));
    }

    #[test]
    fn induced_c_derivative_is_b() {
        let mut sources = vec![
            from_alpha_matrix(&[vec![1.0, 0.2, -0.4], vec![0.5, 0.1, 0.0]]).unwrap(),
            high_order_family(2, &[vec![0.3, 0.1], vec![-0.2, 0.6]], 4, 4).unwrap(),
            high_order_family(3, &[], 4, 5).unwrap(),
        ];
        sources.push(swap_roles(&sources[0]));
        for prk in &sources {
            let rkn = induce_rkn(prk).unwrap();
            assert!(poly_residual(&rkn.c.derivative(), &rkn.b) < 1e-11);
            assert!((rkn.c.derivative().integral01() - 1.0).abs() < 1e-11);
        }
    }
}
