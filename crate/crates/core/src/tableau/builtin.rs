//! Closed-form tableau families, entered as printed rather than re-derived.

use super::{CsPrkTableau, CsRknTableau, Tableau, TableauError};
use crate::poly::{BiPoly, UniPoly};

#[derive(Debug, Clone, Copy)]
pub struct BuiltinInfo {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub rkn: bool,
    pub summary: &'static str,
}

pub const BUILTINS: &[BuiltinInfo] = &[
    BuiltinInfo {
        name: "ex1",
        params: &["a"],
        rkn: true,
        summary: "csRKN, Abar = a t^2 - 2a t s + t/2; order 2, order 4 and symmetric at a = 1/2",
    },
    BuiltinInfo {
        name: "ex2_prk",
        params: &["theta"],
        rkn: false,
        summary: "csPRK theta family, A = theta t^2 + (1-theta) t; order 1 (2 at theta = 0)",
    },
    BuiltinInfo {
        name: "ex2_rkn_swapped",
        params: &["theta"],
        rkn: true,
        summary: "csRKN induced from ex2_prk with roles swapped; stated order 1, converges at order 2",
    },
    BuiltinInfo { name: "ex3_prk", params: &["theta1", "theta2"], rkn: false, summary: "order-4 csPRK family" },
    BuiltinInfo {
        name: "ex3_rkn",
        params: &["theta1"],
        rkn: true,
        summary: "order-4 csRKN induced from ex3_prk (independent of theta2)",
    },
    BuiltinInfo {
        name: "ex3_rkn_swapped",
        params: &["theta1", "theta2"],
        rkn: true,
        summary: "order-4 csRKN induced from ex3_prk with roles swapped",
    },
];

/// Looks up a family by name and instantiates it with `params`.
pub fn builtin(name: &str, params: &[f64]) -> Result<Tableau, TableauError> {
    let info = BUILTINS.iter().find(|b| b.name == name).ok_or_else(|| TableauError::UnknownBuiltin(name.to_string()))?;
    if params.len() != info.params.len() {
        return Err(TableauError::ParamCount { name: name.to_string(), expected: info.params.len(), got: params.len() });
    }
    Ok(match name {
        "ex1" => Tableau::Rkn(ex1(params[0])),
        "ex2_prk" => Tableau::Prk(ex2_prk(params[0])),
        "ex2_rkn_swapped" => Tableau::Rkn(ex2_rkn_swapped(params[0])),
        "ex3_prk" => Tableau::Prk(ex3_prk(params[0], params[1])),
        "ex3_rkn" => Tableau::Rkn(ex3_rkn(params[0])),
        "ex3_rkn_swapped" => Tableau::Rkn(ex3_rkn_swapped(params[0], params[1])),
        _ => unreachable!("BUILTINS and the dispatch table disagree on `{name}`"),
    })
}

/// `Ā = aτ² − 2aτσ + τ/2`, `B̄ = a − 2aτ + 1/2`, `B = 1`, `C = τ`, with
/// witness `A = 12aτ²σ − 12aτσ + τ`.
pub fn ex1(a: f64) -> CsRknTableau {
    CsRknTableau {
        a_bar: BiPoly::from_terms(&[(2, 0, a), (1, 1, -2.0 * a), (1, 0, 0.5)]),
        b_bar: UniPoly::new(vec![a + 0.5, -2.0 * a]),
        b: UniPoly::constant(1.0),
        c: UniPoly::x(),
        witness_a: Some(BiPoly::from_terms(&[(2, 1, 12.0 * a), (1, 1, -12.0 * a), (1, 0, 1.0)])),
    }
}

/// `A = θτ² + (1−θ)τ`, `B = 1`, `Â = (2θσ + 1 − θ)τ`, `B̂ = 2θτ + 1 − θ`.
pub fn ex2_prk(theta: f64) -> CsPrkTableau {
    CsPrkTableau {
        a: BiPoly::from_terms(&[(2, 0, theta), (1, 0, 1.0 - theta)]),
        a_hat: BiPoly::from_terms(&[(1, 1, 2.0 * theta), (1, 0, 1.0 - theta)]),
        b: UniPoly::constant(1.0),
        b_hat: UniPoly::new(vec![1.0 - theta, 2.0 * theta]),
    }
}

/// `Ā = (θτ² + τ − θτ)(2θσ + 1 − θ)/2`, `B̄ = θτ + (1−θ)/2`, `B = 2B̄`,
/// `C = θτ² + (1−θ)τ`; witness `A = (2θσ + 1 − θ)τ`.
pub fn ex2_rkn_swapped(theta: f64) -> CsRknTableau {
    let c = UniPoly::new(vec![0.0, 1.0 - theta, theta]);
    let factor = UniPoly::new(vec![1.0 - theta, 2.0 * theta]);
    let b_bar = UniPoly::new(vec![(1.0 - theta) / 2.0, theta]);
    CsRknTableau {
        a_bar: BiPoly::outer(&c, &factor).scale(0.5),
        b: b_bar.scale(2.0),
        b_bar,
        c,
        witness_a: Some(BiPoly::from_terms(&[(1, 1, 2.0 * theta), (1, 0, 1.0 - theta)])),
    }
}

/// `6σ² − 6σ + 1`
fn q2() -> UniPoly {
    UniPoly::new(vec![1.0, -6.0, 6.0])
}

/// `20σ³ − 30σ² + 12σ − 1`
fn q3() -> UniPoly {
    UniPoly::new(vec![-1.0, 12.0, -30.0, 20.0])
}

/// The order-4 csPRK family with `B = B̂ = 1`.
pub fn ex3_prk(theta1: f64, theta2: f64) -> CsPrkTableau {
    let (t1, t2) = (theta1, theta2);
    let q2 = q2();
    let lin = |c0: f64, c1: f64| UniPoly::new(vec![c0, c1]);

    let a_rows = [
        UniPoly::zero(),
        &q2.scale(t1 - t2) + &lin(4.0, -6.0),
        &q2.scale(6.0 * t2 - 3.0 * t1) + &lin(-3.0, 6.0),
        q2.scale(2.0 * t1 - 10.0 * t2),
        UniPoly::new(vec![5.0, -30.0, 30.0]).scale(t2),
    ];

    let g = &q2.scale(t1) + &q3().scale(t2);
    let a_hat_rows = [UniPoly::zero(), &g + &lin(4.0, -6.0), (&g + &lin(1.0, -2.0)).scale(-3.0), g.scale(2.0)];

    CsPrkTableau {
        a: BiPoly::from_tau_rows(&a_rows),
        a_hat: BiPoly::from_tau_rows(&a_hat_rows),
        b: UniPoly::constant(1.0),
        b_hat: UniPoly::constant(1.0),
    }
}

/// Order-4 csRKN family with `B̄ = 1 − τ`, `B = 1`, `C = τ`; witness is
/// `ex3_prk(θ₁, 0).A` (the induced `Ā` does not depend on `θ₂`).
pub fn ex3_rkn(theta1: f64) -> CsRknTableau {
    let t1 = theta1;
    let a_bar = BiPoly::from_terms(&[
        (3, 1, 4.0 * t1),
        (3, 0, -2.0 * t1),
        (2, 2, -6.0 * t1),
        (2, 0, 2.0 * t1 + 5.0),
        (1, 2, 6.0 * t1),
        (1, 1, -4.0 * t1 - 10.0),
        (1, 0, 5.0),
    ])
    .scale(0.1);
    CsRknTableau {
        a_bar,
        b_bar: UniPoly::new(vec![1.0, -1.0]),
        b: UniPoly::constant(1.0),
        c: UniPoly::x(),
        witness_a: Some(ex3_prk(theta1, 0.0).a),
    }
}

/// Order-4 csRKN family from the swapped `ex3_prk`; witness is
/// `ex3_prk(θ₁, θ₂).Â`.
pub fn ex3_rkn_swapped(theta1: f64, theta2: f64) -> CsRknTableau {
    let (t1, t2) = (theta1, theta2);
    let a_bar = BiPoly::from_terms(&[
        (4, 1, 10.0 * t2),
        (4, 0, -5.0 * t2),
        (3, 1, -20.0 * t2 + 4.0 * t1),
        (3, 0, -2.0 * t1 + 10.0 * t2),
        (2, 3, -20.0 * t2),
        (2, 2, -6.0 * t1 + 30.0 * t2),
        (2, 0, 2.0 * t1 - 5.0 * t2 + 5.0),
        (1, 3, 20.0 * t2),
        (1, 2, 6.0 * t1 - 30.0 * t2),
        (1, 1, -4.0 * t1 + 10.0 * t2 - 10.0),
        (1, 0, 5.0),
    ])
    .scale(0.1);
    CsRknTableau {
        a_bar,
        b_bar: UniPoly::new(vec![1.0, -1.0]),
        b: UniPoly::constant(1.0),
        c: UniPoly::x(),
        witness_a: Some(ex3_prk(theta1, theta2).a_hat),
    }
}
