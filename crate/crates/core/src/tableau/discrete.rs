use super::{CsPrkTableau, CsRknTableau};
use crate::quadrature::QuadRule;

/// A continuous-stage RKN tableau sampled at the nodes of a `k`-point rule:
/// `Ā_ij = Ā(c_i, c_j)`, `B̄_i = B̄(c_i)`, `B_i = B(c_i)`, `C_i = C(c_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRknTableau {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub a_bar: Vec<Vec<f64>>,
    pub b_bar: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl DiscreteRknTableau {
    pub(crate) fn sample(rkn: &CsRknTableau, rule: &QuadRule) -> Self {
        let nodes = rule.nodes().to_vec();
        let a_bar = nodes.iter().map(|&ci| nodes.iter().map(|&cj| rkn.a_bar.eval(ci, cj)).collect()).collect();
        Self {
            a_bar,
            b_bar: nodes.iter().map(|&x| rkn.b_bar.eval(x)).collect(),
            b: nodes.iter().map(|&x| rkn.b.eval(x)).collect(),
            c: nodes.iter().map(|&x| rkn.c.eval(x)).collect(),
            weights: rule.weights().to_vec(),
            nodes,
        }
    }

    pub fn stages(&self) -> usize {
        self.nodes.len()
    }
}

/// A continuous-stage PRK tableau sampled at quadrature nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePrkTableau {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub a_hat: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub b_hat: Vec<f64>,
}

impl DiscretePrkTableau {
    pub fn sample(prk: &CsPrkTableau, rule: &QuadRule) -> Self {
        let nodes = rule.nodes().to_vec();
        let grid = |f: &crate::poly::BiPoly| -> Vec<Vec<f64>> {
            nodes.iter().map(|&ci| nodes.iter().map(|&cj| f.eval(ci, cj)).collect()).collect()
        };
        Self {
            a: grid(&prk.a),
            a_hat: grid(&prk.a_hat),
            b: nodes.iter().map(|&x| prk.b.eval(x)).collect(),
            b_hat: nodes.iter().map(|&x| prk.b_hat.eval(x)).collect(),
            weights: rule.weights().to_vec(),
            nodes,
        }
    }

    pub fn stages(&self) -> usize {
        self.nodes.len()
    }
}
