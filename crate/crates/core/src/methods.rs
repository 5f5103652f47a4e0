//! The eight benchmark methods, their quadrature presets, and a uniform way
//! to turn a method description into a [`Stepper`].

use std::fmt;

use thiserror::Error;

use crate::integrator::{GaussLegendreRk, IntegratorError, PrkStepper, RknStepper, Stepper};
use crate::quadrature::{gauss_rule, QuadratureError};
use crate::tableau::{builtin, Tableau, TableauError, BUILTINS};

#[derive(Debug, Error)]
pub enum MethodError {
    #[error("unknown method `{0}`")]
    Unknown(String),
    #[error("method `{0}` needs a quadrature point count")]
    MissingPoints(String),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkMethod {
    pub id: &'static str,
    /// Builtin family name, or `glrk` for the Gauss–Legendre references.
    pub family: &'static str,
    pub params: &'static [f64],
    /// Order as listed with the benchmark methods (III and IV measure 2).
    pub nominal_order: usize,
    pub energy_preserving: bool,
}

pub const BENCHMARK_METHODS: [BenchmarkMethod; 8] = [
    BenchmarkMethod { id: "I", family: "ex1", params: &[0.1], nominal_order: 2, energy_preserving: true },
    BenchmarkMethod { id: "II", family: "ex1", params: &[0.2], nominal_order: 2, energy_preserving: true },
    BenchmarkMethod { id: "III", family: "ex2_rkn_swapped", params: &[0.1], nominal_order: 1, energy_preserving: true },
    BenchmarkMethod { id: "IV", family: "ex2_rkn_swapped", params: &[0.2], nominal_order: 1, energy_preserving: true },
    BenchmarkMethod { id: "V", family: "ex3_rkn", params: &[0.1], nominal_order: 4, energy_preserving: true },
    BenchmarkMethod { id: "VI", family: "ex3_rkn", params: &[0.2], nominal_order: 4, energy_preserving: true },
    BenchmarkMethod { id: "GLRK2", family: "glrk", params: &[1.0], nominal_order: 2, energy_preserving: false },
    BenchmarkMethod { id: "GLRK4", family: "glrk", params: &[2.0], nominal_order: 4, energy_preserving: false },
];

pub fn benchmark_method(id: &str) -> Option<&'static BenchmarkMethod> {
    BENCHMARK_METHODS.iter().find(|m| m.id.eq_ignore_ascii_case(id))
}

/// Named experiment settings: the benchmark problem and the Gauss point
/// count used for each energy-preserving method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Cubic,
    Pendulum,
    Kepler,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Cubic, Preset::Pendulum, Preset::Kepler];

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "paper-fig1" => Some(Preset::Cubic),
            "paper-fig2" => Some(Preset::Pendulum),
            "paper-fig3" => Some(Preset::Kepler),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Cubic => "paper-fig1",
            Preset::Pendulum => "paper-fig2",
            Preset::Kepler => "paper-fig3",
        }
    }

    pub fn problem(self) -> &'static str {
        match self {
            Preset::Cubic => "cubic",
            Preset::Pendulum => "pendulum",
            Preset::Kepler => "kepler",
        }
    }

    /// Gauss points for a benchmark method; `None` for the GLRK references.
    pub fn quad_points(self, method_id: &str) -> Option<usize> {
        let m = benchmark_method(method_id)?;
        if !m.energy_preserving {
            return None;
        }
        let low = matches!(m.id, "III" | "IV");
        let high = matches!(m.id, "V" | "VI");
        Some(match self {
            Preset::Cubic => {
                if high {
                    4
                } else {
                    3
                }
            }
            Preset::Pendulum => {
                if low {
                    6
                } else {
                    4
                }
            }
            Preset::Kepler => {
                if low {
                    8
                } else if high {
                    4
                } else {
                    5
                }
            }
        })
    }

    pub fn steps(self) -> usize {
        10_000
    }

    pub fn h(self) -> f64 {
        0.1
    }
}

/// A runnable method description.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    /// A continuous-stage tableau (csRKN or csPRK) discretized by Gauss quadrature.
    Tableau {
        label: String,
        family: Option<&'static str>,
        tableau: Tableau,
    },
    GaussLegendre {
        stages: usize,
    },
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodSpec::Tableau { label, .. } => f.write_str(label),
            MethodSpec::GaussLegendre { stages } => write!(f, "GLRK{}", 2 * stages),
        }
    }
}

fn family_label(family: &str, params: &[f64]) -> String {
    let names = BUILTINS.iter().find(|b| b.name == family).map(|b| b.params).unwrap_or(&[]);
    let args: Vec<String> = names.iter().zip(params).map(|(n, v)| format!("{n}={v}")).collect();
    format!("{family}({})", args.join(","))
}

impl MethodSpec {
    /// Resolves a benchmark id (`I`..`VI`, `GLRK2`, `GLRK4`) or a builtin family
    /// name with its parameters.
    pub fn resolve(name: &str, params: &[f64]) -> Result<Self, MethodError> {
        if let Some(m) = benchmark_method(name) {
            if !params.is_empty() {
                return Err(TableauError::ParamCount { name: m.id.to_string(), expected: 0, got: params.len() }.into());
            }
            return Ok(Self::benchmark(m));
        }
        match name.to_ascii_lowercase().as_str() {
            "glrk2" => return Ok(MethodSpec::GaussLegendre { stages: 1 }),
            "glrk4" => return Ok(MethodSpec::GaussLegendre { stages: 2 }),
            _ => {}
        }
        let info = BUILTINS.iter().find(|b| b.name == name).ok_or_else(|| MethodError::Unknown(name.to_string()))?;
        Ok(MethodSpec::Tableau { label: family_label(name, params), family: Some(info.name), tableau: builtin(name, params)? })
    }

    pub fn benchmark(m: &BenchmarkMethod) -> Self {
        if m.family == "glrk" {
            MethodSpec::GaussLegendre { stages: m.params[0] as usize }
        } else {
            MethodSpec::Tableau {
                label: format!("{} {}", m.id, family_label(m.family, m.params)),
                family: Some(m.family),
                tableau: builtin(m.family, m.params).expect("benchmark methods name valid builtins"),
            }
        }
    }

    /// A tableau loaded from elsewhere (e.g. a file).
    pub fn from_tableau(label: impl Into<String>, tableau: Tableau) -> Self {
        MethodSpec::Tableau { label: label.into(), family: None, tableau }
    }

    /// The highest-order member of this method's family and its order, used
    /// as the reference integrator when no exact solution is known. Tableaux
    /// without a known family fall back to GLRK4.
    pub fn reference_member(&self) -> (MethodSpec, usize) {
        let member = |family: &str, params: &[f64]| MethodSpec::resolve(family, params).expect("builtin reference member");
        match self {
            MethodSpec::GaussLegendre { .. } => (MethodSpec::GaussLegendre { stages: 2 }, 4),
            MethodSpec::Tableau { family: Some(family), tableau, .. } => match *family {
                "ex1" => (member("ex1", &[0.5]), 4),
                "ex2_prk" => (member("ex2_prk", &[0.0]), 2),
                "ex2_rkn_swapped" => (member("ex2_rkn_swapped", &[0.0]), 2),
                "ex3_prk" | "ex3_rkn" | "ex3_rkn_swapped" => {
                    (MethodSpec::Tableau { label: self.to_string(), family: Some(family), tableau: tableau.clone() }, 4)
                }
                _ => (MethodSpec::GaussLegendre { stages: 2 }, 4),
            },
            MethodSpec::Tableau { family: None, .. } => (MethodSpec::GaussLegendre { stages: 2 }, 4),
        }
    }

    pub fn needs_quadrature(&self) -> bool {
        matches!(self, MethodSpec::Tableau { .. })
    }

    /// Builds a stepper; tableau methods need the Gauss point count `k`.
    pub fn stepper(&self, k: Option<usize>) -> Result<Box<dyn Stepper + Send + Sync>, MethodError> {
        match self {
            MethodSpec::GaussLegendre { stages } => Ok(Box::new(GaussLegendreRk::new(*stages)?)),
            MethodSpec::Tableau { label, tableau, .. } => {
                let k = k.ok_or_else(|| MethodError::MissingPoints(label.clone()))?;
                let rule = gauss_rule(k)?;
                Ok(match tableau {
                    Tableau::Rkn(t) => Box::new(RknStepper::from_tableau(t, &rule)),
                    Tableau::Prk(t) => Box::new(PrkStepper::from_tableau(t, &rule)),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_methods_with_orders() {
        let orders: Vec<usize> = BENCHMARK_METHODS.iter().map(|m| m.nominal_order).collect();
        assert_eq!(orders, [2, 2, 1, 1, 4, 4, 2, 4]);
        assert_eq!(benchmark_method("V").unwrap().params, &[0.1]);
        assert_eq!(benchmark_method("vi").unwrap().family, "ex3_rkn");
    }

    #[test]
    fn preset_point_counts() {
        let table = |p: Preset| -> Vec<Option<usize>> { BENCHMARK_METHODS.iter().map(|m| p.quad_points(m.id)).collect() };
        assert_eq!(table(Preset::Cubic), [Some(3), Some(3), Some(3), Some(3), Some(4), Some(4), None, None]);
        assert_eq!(table(Preset::Pendulum), [Some(4), Some(4), Some(6), Some(6), Some(4), Some(4), None, None]);
        assert_eq!(table(Preset::Kepler), [Some(5), Some(5), Some(8), Some(8), Some(4), Some(4), None, None]);
        for p in Preset::ALL {
            assert_eq!(Preset::parse(p.name()), Some(p));
        }
    }

    #[test]
    fn resolution() {
        assert!(matches!(MethodSpec::resolve("GLRK4", &[]), Ok(MethodSpec::GaussLegendre { stages: 2 })));
        assert!(matches!(MethodSpec::resolve("ex3_prk", &[0.1, 0.0]), Ok(MethodSpec::Tableau { tableau: Tableau::Prk(_), .. })));
        assert!(matches!(MethodSpec::resolve("nope", &[]), Err(MethodError::Unknown(_))));
        assert!(matches!(MethodSpec::resolve("I", &[0.3]), Err(MethodError::Tableau(_))));
        let spec = MethodSpec::resolve("III", &[]).unwrap();
        assert_eq!(spec.to_string(), "III ex2_rkn_swapped(theta=0.1)");
        assert!(matches!(spec.stepper(None), Err(MethodError::MissingPoints(_))));
        assert!(spec.stepper(Some(6)).is_ok());
    }

    #[test]
    fn reference_members() {
        let order = |id: &str| MethodSpec::resolve(id, &[]).unwrap().reference_member().1;
        assert_eq!([order("I"), order("III"), order("V"), order("GLRK2")], [4, 2, 4, 4]);
        let (m, _) = MethodSpec::resolve("II", &[]).unwrap().reference_member();
        assert_eq!(m.to_string(), "ex1(a=0.5)");
        let (m, _) = MethodSpec::resolve("IV", &[]).unwrap().reference_member();
        assert_eq!(m.to_string(), "ex2_rkn_swapped(theta=0)");
    }
}
