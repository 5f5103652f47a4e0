use std::fmt;

use super::{hat_of, CsPrkTableau, CsRknTableau};
use crate::poly::{nan_max, poly_residual, BiPoly, UniPoly};

/// Default pass threshold for coefficient residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub identity: &'static str,
    /// `None` when skipped.
    pub residual: Option<f64>,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<ConditionCheck>,
    pub tolerance: f64,
    /// Conjunction over the conditions that were evaluated.
    pub overall: bool,
    /// False when witness-dependent conditions were skipped, so a passing
    /// report only certifies the necessary conditions.
    pub sufficient: bool,
}

impl VerificationReport {
    fn new(tolerance: f64) -> Self {
        Self { checks: Vec::new(), tolerance, overall: true, sufficient: true }
    }

    fn record(&mut self, name: &'static str, identity: &'static str, residual: f64) {
        // NaN residuals must fail
        let status = if residual < self.tolerance { CheckStatus::Pass } else { CheckStatus::Fail };
        self.overall &= status == CheckStatus::Pass;
        self.checks.push(ConditionCheck { name, identity, residual: Some(residual), status });
    }

    fn skip(&mut self, name: &'static str, identity: &'static str) {
        self.sufficient = false;
        self.checks.push(ConditionCheck { name, identity, residual: None, status: CheckStatus::Skipped });
    }

    pub fn check(&self, name: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().filter_map(|c| c.residual).fold(0.0, nan_max)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skipped",
            };
            match c.residual {
                Some(r) => writeln!(f, "{:<11} {:<7} residual {:.3e}  {}", c.name, status, r, c.identity)?,
                None => writeln!(f, "{:<11} {:<7} {:<18} {}", c.name, status, "(no witness)", c.identity)?,
            }
        }
        let verdict = match (self.overall, self.sufficient) {
            (true, true) => "energy-preserving",
            (true, false) => "necessary conditions hold; sufficiency not certified",
            (false, _) => "not verified",
        };
        write!(f, "overall: {} (tol {:.1e}): {}", if self.overall { "pass" } else { "FAIL" }, self.tolerance, verdict)
    }
}

/// Checks the energy-preservation identities of a csPRK tableau and the
/// consistency conditions `∫B = ∫B̂ = 1`.
pub fn verify_ep_prk(prk: &CsPrkTableau, tol: f64) -> VerificationReport {
    let mut r = VerificationReport::new(tol);
    let zero = UniPoly::zero();
    r.record("A0", "A(0,s) = 0", poly_residual(&prk.a.at_tau(0.0), &zero));
    r.record("A1_B", "A(1,s) = B(s)", poly_residual(&prk.a.at_tau(1.0), &prk.b));
    r.record("Ahat0", "Ahat(0,s) = 0", poly_residual(&prk.a_hat.at_tau(0.0), &zero));
    r.record("Ahat1_Bhat", "Ahat(1,s) = Bhat(s)", poly_residual(&prk.a_hat.at_tau(1.0), &prk.b_hat));
    r.record("symmetry", "dA/dt(t,s) = dAhat/dt(s,t)", poly_residual(&prk.a.dtau(), &prk.a_hat.dtau().transpose()));
    r.record("int_B", "int_0^1 B = 1", (prk.b.integral01() - 1.0).abs());
    r.record("int_Bhat", "int_0^1 Bhat = 1", (prk.b_hat.integral01() - 1.0).abs());
    r
}

/// Checks the csRKN energy-preservation conditions. The necessary ones
/// (`epc1`, `epc2`, `epsymm`) are always evaluated; `epc3` and `epc4` need
/// the witness kernel and are skipped without it.
pub fn verify_ep_rkn(rkn: &CsRknTableau, tol: f64) -> VerificationReport {
    let mut r = VerificationReport::new(tol);
    let zero = UniPoly::zero();

    let epc1 = nan_max(rkn.c.eval(0.0).abs(), (rkn.c.eval(1.0) - 1.0).abs());
    r.record("epc1", "C(0) = 0, C(1) = 1", epc1);

    let epc2 = nan_max(poly_residual(&rkn.a_bar.at_tau(0.0), &zero), poly_residual(&rkn.a_bar.at_tau(1.0), &rkn.b_bar));
    r.record("epc2", "Abar(0,s) = 0, Abar(1,s) = Bbar(s)", epc2);

    let d = rkn.a_bar.dtau();
    let lhs = &d + &d.transpose();
    r.record("epsymm", "dAbar/dt(t,s) + dAbar/dt(s,t) = B(t)B(s)", poly_residual(&lhs, &BiPoly::outer(&rkn.b, &rkn.b)));

    const EPC3: &str = "A(0,s) = 0, A(1,s) = B(s) = C'(s)";
    const EPC4: &str = "Abar(t,s) = int_0^1 Ahat(t,r) A(r,s) dr";
    match &rkn.witness_a {
        Some(a) => {
            let epc3 = [poly_residual(&a.at_tau(1.0), &rkn.b), poly_residual(&rkn.b, &rkn.c.derivative())]
                .into_iter()
                .fold(poly_residual(&a.at_tau(0.0), &zero), nan_max);
            r.record("epc3", EPC3, epc3);
            r.record("epc4", EPC4, poly_residual(&rkn.a_bar, &hat_of(a).compose(a)));
        }
        None => {
            r.skip("epc3", EPC3);
            r.skip("epc4", EPC4);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::{ex1, ex2_prk, from_alpha_matrix, induce_rkn};

    #[test]
    fn from_alpha_output_is_clean() {
        let t = from_alpha_matrix(&[vec![1.0, 0.4, -0.2], vec![0.7, 0.0, 1.3], vec![-0.5, 0.9, 0.1]]).unwrap();
        let report = verify_ep_prk(&t, DEFAULT_TOLERANCE);
        assert!(report.overall, "{report}");
        assert!(report.max_residual() < 1e-12);
    }

    #[test]
    fn tampered_b_fails_boundary_row() {
        let mut t = ex2_prk(0.3);
        t.b = &t.b + &UniPoly::constant(0.01);
        let report = verify_ep_prk(&t, DEFAULT_TOLERANCE);
        assert!(!report.overall);
        let check = report.check("A1_B").unwrap();
        assert_eq!(check.status, CheckStatus::Fail);
        assert!((check.residual.unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn witness_example_passes() {
        let report = verify_ep_rkn(&ex1(0.3), DEFAULT_TOLERANCE);
        assert!(report.overall && report.sufficient, "{report}");
        assert_eq!(report.checks.len(), 5);
    }

    #[test]
    fn symmetry_condition_detects_bad_kernel() {
        let t = CsRknTableau {
            a_bar: BiPoly::from_terms(&[(1, 1, 1.0)]),
            b_bar: UniPoly::x(),
            b: UniPoly::constant(1.0),
            c: UniPoly::x(),
            witness_a: None,
        };
        let report = verify_ep_rkn(&t, DEFAULT_TOLERANCE);
        let check = report.check("epsymm").unwrap();
        assert_eq!(check.status, CheckStatus::Fail);
        assert_eq!(check.residual, Some(1.0));
        assert!(!report.overall);
    }

    #[test]
    fn corrupted_endpoint_reported() {
        let mut t = ex1(0.2);
        t.c = UniPoly::new(vec![0.0, 0.9]);
        let report = verify_ep_rkn(&t, DEFAULT_TOLERANCE);
        assert!((report.check("epc1").unwrap().residual.unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(report.check("epc1").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn nan_coefficients_fail() {
        let mut t = ex1(0.2);
        t.b = UniPoly::constant(f64::NAN);
        assert!(!verify_ep_rkn(&t, DEFAULT_TOLERANCE).overall);
    }

    #[test]
    fn induced_tableau_passes_with_witness() {
        let rkn = induce_rkn(&ex2_prk(0.4)).unwrap();
        let report = verify_ep_rkn(&rkn, DEFAULT_TOLERANCE);
        assert!(report.overall && report.sufficient, "{report}");
    }

    #[test]
    fn report_text_mentions_every_condition() {
        let mut t = ex1(0.1);
        t.witness_a = None;
        let text = verify_ep_rkn(&t, DEFAULT_TOLERANCE).to_string();
        for name in ["epc1", "epc2", "epsymm", "epc3", "epc4", "skipped", "sufficiency not certified"] {
            assert!(text.contains(name), "{text}");
        }
    }
}
