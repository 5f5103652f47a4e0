//! Plain-text tableau files.
//!
//! ```text
//! # optional comments
//! csrkn
//! Abar 2 1        <- name, degree in tau, degree in sigma
//! 0 0             <- row i holds the coefficients of tau^i sigma^0, tau^i sigma^1, ...
//! 0.5 -1
//! 0.5 0
//! Bbar 1          <- univariate blocks carry a single degree
//! 1 -1
//! B 0
//! 1
//! C 1
//! 0 1
//! ```
//!
//! A `csrkn` file has blocks `Abar`, `Bbar`, `B`, `C` and optionally the
//! witness `A`; a `csprk` file has `A`, `Ahat`, `B`, `Bhat`. Blocks may come
//! in any order. Values are written with 17 significant digits.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{CsPrkTableau, CsRknTableau, Tableau};
use crate::poly::{BiPoly, UniPoly, MAX_DEGREE};

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line (`csrkn` or `csprk`)")]
    MissingHeader,
    #[error("missing block `{0}`")]
    MissingBlock(&'static str),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn push_uni(out: &mut String, name: &str, p: &UniPoly) {
    let coeffs = if p.is_zero() { vec![0.0] } else { p.coeffs().to_vec() };
    let _ = writeln!(out, "{name} {}", coeffs.len() - 1);
    push_row(out, &coeffs);
}

fn push_bi(out: &mut String, name: &str, p: &BiPoly) {
    if p.is_zero() {
        let _ = writeln!(out, "{name} 0 0");
        push_row(out, &[0.0]);
        return;
    }
    let _ = writeln!(out, "{name} {} {}", p.deg_tau(), p.deg_sigma());
    for row in p.rows() {
        push_row(out, &row);
    }
}

fn push_row(out: &mut String, values: &[f64]) {
    let row: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
}

pub fn write_tableau(tab: &Tableau) -> String {
    let mut out = String::new();
    match tab {
        Tableau::Rkn(t) => {
            out.push_str("csrkn\n");
            push_bi(&mut out, "Abar", &t.a_bar);
            push_uni(&mut out, "Bbar", &t.b_bar);
            push_uni(&mut out, "B", &t.b);
            push_uni(&mut out, "C", &t.c);
            if let Some(a) = &t.witness_a {
                push_bi(&mut out, "A", a);
            }
        }
        Tableau::Prk(t) => {
            out.push_str("csprk\n");
            push_bi(&mut out, "A", &t.a);
            push_bi(&mut out, "Ahat", &t.a_hat);
            push_uni(&mut out, "B", &t.b);
            push_uni(&mut out, "Bhat", &t.b_hat);
        }
    }
    out
}

enum Block {
    Uni(UniPoly),
    Bi(BiPoly),
}

pub fn parse_tableau(text: &str) -> Result<Tableau, FormatError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim())).filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let (bivariate, univariate): (&[&'static str], &[&'static str]) = match header {
        "csrkn" => (&["Abar", "A"], &["Bbar", "B", "C"]),
        "csprk" => (&["A", "Ahat"], &["B", "Bhat"]),
        other => return Err(syntax(header_line, format!("unknown header `{other}`"))),
    };

    let mut blocks: HashMap<&'static str, Block> = HashMap::new();
    while let Some((line_no, line)) = lines.next() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let name = fields[0];
        let parse_deg = |s: &str| -> Result<usize, FormatError> {
            let d: usize = s.parse().map_err(|_| syntax(line_no, format!("bad degree `{s}`")))?;
            if d > MAX_DEGREE {
                return Err(syntax(line_no, format!("degree {d} exceeds {MAX_DEGREE}")));
            }
            Ok(d)
        };
        let mut read_row = |len: usize| -> Result<Vec<f64>, FormatError> {
            let (row_no, row) = lines.next().ok_or_else(|| syntax(line_no, format!("block `{name}` ends early")))?;
            let values = row
                .split_whitespace()
                .map(|tok| tok.parse::<f64>().map_err(|_| syntax(row_no, format!("bad number `{tok}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() != len {
                return Err(syntax(row_no, format!("expected {len} values, found {}", values.len())));
            }
            Ok(values)
        };

        if let Some(&k) = bivariate.iter().find(|&&k| k == name) {
            if fields.len() != 3 {
                return Err(syntax(line_no, format!("block `{name}` needs two degrees")));
            }
            let (dt, ds) = (parse_deg(fields[1])?, parse_deg(fields[2])?);
            let rows = (0..=dt).map(|_| read_row(ds + 1)).collect::<Result<Vec<_>, _>>()?;
            blocks.insert(k, Block::Bi(BiPoly::new(rows)));
        } else if let Some(&k) = univariate.iter().find(|&&k| k == name) {
            if fields.len() != 2 {
                return Err(syntax(line_no, format!("block `{name}` needs one degree")));
            }
            let d = parse_deg(fields[1])?;
            blocks.insert(k, Block::Uni(UniPoly::new(read_row(d + 1)?)));
        } else {
            return Err(syntax(line_no, format!("unexpected block `{name}` in a {header} file")));
        }
    }

    if header == "csrkn" {
        Ok(Tableau::Rkn(CsRknTableau {
            a_bar: take_bi(&mut blocks, "Abar")?,
            b_bar: take_uni(&mut blocks, "Bbar")?,
            b: take_uni(&mut blocks, "B")?,
            c: take_uni(&mut blocks, "C")?,
            witness_a: take_bi(&mut blocks, "A").ok(),
        }))
    } else {
        Ok(Tableau::Prk(CsPrkTableau {
            a: take_bi(&mut blocks, "A")?,
            a_hat: take_bi(&mut blocks, "Ahat")?,
            b: take_uni(&mut blocks, "B")?,
            b_hat: take_uni(&mut blocks, "Bhat")?,
        }))
    }
}

fn take_bi(blocks: &mut HashMap<&'static str, Block>, k: &'static str) -> Result<BiPoly, FormatError> {
    match blocks.remove(k) {
        Some(Block::Bi(p)) => Ok(p),
        _ => Err(FormatError::MissingBlock(k)),
    }
}

fn take_uni(blocks: &mut HashMap<&'static str, Block>, k: &'static str) -> Result<UniPoly, FormatError> {
    match blocks.remove(k) {
        Some(Block::Uni(p)) => Ok(p),
        _ => Err(FormatError::MissingBlock(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::{ex1, ex3_prk, ex3_rkn_swapped, induce_rkn};
    use proptest::prelude::*;

    #[test]
    fn round_trips_builtins() {
        for tab in [
            Tableau::Rkn(ex1(0.1)),
            Tableau::Rkn(ex3_rkn_swapped(0.2, 0.3)),
            Tableau::Prk(ex3_prk(0.1, -0.7)),
            Tableau::Rkn(induce_rkn(&ex3_prk(1.0 / 3.0, 0.2)).unwrap()),
        ] {
            let text = write_tableau(&tab);
            assert_eq!(parse_tableau(&text).unwrap(), tab, "{text}");
        }
    }

    #[test]
    fn reads_hand_written_file() {
        let text = "# midpoint-like\ncsrkn\nC 1\n0 1   # tau\nB 0\n1\nBbar 0\n0.5\nAbar 1 0\n0\n0.5\n";
        let Tableau::Rkn(t) = parse_tableau(text).unwrap() else { panic!("expected csrkn") };
        assert_eq!(t.a_bar, BiPoly::from_terms(&[(1, 0, 0.5)]));
        assert_eq!(t.c, UniPoly::x());
        assert!(t.witness_a.is_none());
    }

    #[test]
    fn zero_blocks_round_trip() {
        let mut t = ex1(0.0);
        t.witness_a = Some(BiPoly::zero());
        t.b_bar = UniPoly::zero();
        let tab = Tableau::Rkn(t);
        assert_eq!(parse_tableau(&write_tableau(&tab)).unwrap(), tab);
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(parse_tableau("# nothing\n"), Err(FormatError::MissingHeader));
        assert!(matches!(parse_tableau("csrk\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert_eq!(parse_tableau("csrkn\nB 0\n1\n"), Err(FormatError::MissingBlock("Abar")));
        assert!(matches!(parse_tableau("csprk\nAbar 0 0\n1\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_tableau("csrkn\nC 1\n0\n"), Err(FormatError::Syntax { line: 3, .. })));
        assert!(matches!(parse_tableau("csrkn\nC 1\n0 x\n"), Err(FormatError::Syntax { line: 3, .. })));
        assert!(matches!(parse_tableau("csrkn\nC 99\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_tableau("csrkn\nC 1\n"), Err(FormatError::Syntax { line: 2, .. })));
    }

    proptest! {
        #[test]
        fn values_survive_text(coeffs in proptest::collection::vec(-1e6f64..1e6, 1..12)) {
            let p = UniPoly::new(coeffs);
            let tab = Tableau::Prk(CsPrkTableau {
                a: BiPoly::outer(&p, &p),
                a_hat: BiPoly::from_tau(&p),
                b: p.clone(),
                b_hat: p,
            });
            prop_assert_eq!(parse_tableau(&write_tableau(&tab)).unwrap(), tab);
        }
    }
}
