//! Text rendering and parsing of polynomials.
//!
//! Grammar: terms in ascending monomial order joined by `" + "`; a term is
//! `<rational> * f1*f2*...`, a constant term is the rational alone, and zero
//! is `0`. Factors are variable labels with an optional `^e` for `e > 1`.

use std::fmt::Write;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::{Monomial, Polynomial, VarTable};
use crate::error::{Error, Result};

pub(super) fn render(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        write!(out, "{c}").expect("write to string");
        for (j, &(id, e)) in m.factors().iter().enumerate() {
            out.push_str(if j == 0 { " * " } else { "*" });
            out.push_str(&p.table().var(id).label);
            if e > 1 {
                write!(out, "^{e}").expect("write to string");
            }
        }
    }
    out
}

/// Parses the text form produced by [`Polynomial::canonical_text`].
///
/// Factors are multiplied in the order written, so a non-canonical input
/// such as `1 * g2*g1` is accepted and picks up the reordering sign.
pub fn parse(text: &str, table: &Arc<VarTable>) -> Result<Polynomial> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut acc = Polynomial::zero(table);
    for term in text.split(" + ") {
        let (coef, factors) = match term.split_once(" * ") {
            Some((c, f)) => (c.trim(), Some(f.trim())),
            None => (term.trim(), None),
        };
        let c: BigRational = coef
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {coef:?}")))?;
        let mut t = Polynomial::constant(table, c);
        if let Some(factors) = factors {
            for factor in factors.split('*') {
                let (label, e) = match factor.split_once('^') {
                    Some((l, e)) => {
                        let e: u32 = e
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        (l, e)
                    }
                    None => (factor, 1),
                };
                let id = table
                    .lookup(label)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {label:?}")))?;
                let v = Polynomial::term(table, Monomial::var(id), BigRational::one());
                t = &t * &v.pow(e);
            }
        }
        acc.add_scaled_assign(&t, &BigRational::one())?;
    }
    Ok(acc)
}
