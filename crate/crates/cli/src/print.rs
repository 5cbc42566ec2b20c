//! Canonical text for bracket tables, readable by [`crate::parse`].

use std::fmt::Write;

use num_traits::{One, Signed};
use pva_core::diffalg::{JetVar, MultiIndex, Rational};
use pva_core::lambda::BracketTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("entry ({0},{1}) contains unknown function symbols and has no file form")]
pub struct PrintError(pub usize, pub usize);

fn jet(v: &JetVar, names: &[String]) -> String {
    let name = &names[v.generator as usize];
    if v.index.is_zero() {
        name.clone()
    } else {
        format!("{name}_{}", v.index)
    }
}

fn powered(base: String, k: usize) -> String {
    if k == 1 {
        base
    } else {
        format!("{base}^{k}")
    }
}

fn lambda_factors(index: &MultiIndex, out: &mut Vec<String>) {
    for (k, e) in index.entries().enumerate() {
        if e > 0 {
            out.push(powered(format!("l{}", k + 1), e as usize));
        }
    }
}

fn jet_factors(jets: &[JetVar], names: &[String], out: &mut Vec<String>) {
    let mut i = 0;
    while i < jets.len() {
        let run = jets[i..].iter().take_while(|v| **v == jets[i]).count();
        out.push(powered(jet(&jets[i], names), run));
        i += run;
    }
}

fn push_term(out: &mut String, first: bool, c: &Rational, factors: &[String]) {
    let mag = c.abs();
    match (first, c.is_negative()) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    if factors.is_empty() {
        let _ = write!(out, "{mag}");
        return;
    }
    if !mag.is_one() {
        let _ = write!(out, "{mag}*");
    }
    out.push_str(&factors.join("*"));
}

/// Prints `D`, `gens` and every nonzero entry. Terms appear in the table's
/// canonical order, so equal tables print identically.
pub fn print_definition(names: &[String], table: &BracketTable) -> Result<String, PrintError> {
    let n = table.gens();
    let mut out = format!("D={};\ngens={};\n", table.space().dim(), names.join(","));
    for i in 0..n {
        for j in 0..n {
            let entry = table.entry(i, j);
            if entry.is_zero() {
                continue;
            }
            let mut line = String::new();
            let mut first = true;
            for (key, p) in entry.terms() {
                for (m, c) in p.terms() {
                    if !m.funcs.is_empty() {
                        return Err(PrintError(i, j));
                    }
                    let mut factors = Vec::new();
                    jet_factors(&m.jets, names, &mut factors);
                    lambda_factors(&key.lambda, &mut factors);
                    push_term(&mut line, first, c, &factors);
                    first = false;
                }
            }
            let _ = writeln!(out, "bracket({},{}) = {line};", names[i], names[j]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_bracket_file;

    #[test]
    fn euler_prints_and_reparses() {
        let d = parse_bracket_file("D=2; gens=w; bracket(w,w) = w_[1,0]*l2 - w_[0,1]*l1;").unwrap();
        let text = print_definition(&d.names, &d.table).unwrap();
        assert_eq!(parse_bracket_file(&text).unwrap().table, d.table);
        assert!(text.starts_with("D=2;\ngens=w;\nbracket(w,w) = "));
    }

    #[test]
    fn powers_and_constants() {
        let d = parse_bracket_file("D=1; gens=u; bracket(u,u) = -1/2*u*u*l1^3 + 7 - u_[2];").unwrap();
        let text = print_definition(&d.names, &d.table).unwrap();
        assert!(text.contains("u^2*l1^3"), "{text}");
        assert_eq!(parse_bracket_file(&text).unwrap().table, d.table);
    }
}
