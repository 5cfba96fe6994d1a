//! Exact division in the supercommutative ring.
//!
//! A divisor `b = b₀ + n` with nonzero body `b₀` (odd-free part) is a unit
//! times `b₀` up to a nilpotent: `b⁻¹ = Σ_k (−1)^k n^k b₀^{−k−1}`, and the
//! remaining division by the even polynomial `b₀^{K+1}` is ordinary
//! leading-term division. A divisor with zero body is handled only when it
//! is a single term.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};

pub(super) fn exact_div(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    a.check_table(b)?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(Polynomial::zero(a.table()));
    }
    let body = b.body();
    let q = if body.is_zero() {
        if b.len() != 1 {
            return Err(Error::UnsupportedDivisor);
        }
        divide_by_term(a, b)?
    } else {
        let nil = b - &body;
        let mut powers = vec![Polynomial::one(a.table())];
        loop {
            let next = powers.last().expect("nonempty") * &nil;
            if next.is_zero() {
                break;
            }
            powers.push(next);
        }
        let k_max = powers.len() - 1;
        // a · Σ (−1)^k n^k b₀^{K−k}, then divide by b₀^{K+1}.
        let mut series = Polynomial::zero(a.table());
        for (k, nk) in powers.iter().enumerate() {
            let t = nk * &body.pow((k_max - k) as u32);
            let sign = if k % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            series.add_scaled_assign(&t, &sign)?;
        }
        let numerator = a * &series;
        divide_by_even(&numerator, &body.pow(k_max as u32 + 1))?
    };
    let back = &q * b;
    if back != *a {
        let rem = a - &back;
        return Err(Error::NotDivisible {
            remainder: rem.canonical_text(),
        });
    }
    Ok(q)
}

/// Leading-term division by an odd-free polynomial. Such a divisor is not a
/// zero divisor, so exact divisibility forces each leading term to divide.
fn divide_by_even(a: &Polynomial, c: &Polynomial) -> Result<Polynomial> {
    let table = a.table().clone();
    let (lm_c, lc_c) = c
        .leading_term()
        .map(|(m, k)| (m.clone(), k.clone()))
        .expect("nonzero divisor");
    let mut rem = a.clone();
    let mut q = Polynomial::zero(&table);
    while let Some((lm, lc)) = rem.leading_term().map(|(m, k)| (m.clone(), k.clone())) {
        let Some(m) = lm.checked_div(&lm_c) else {
            return Err(Error::NotDivisible {
                remainder: rem.canonical_text(),
            });
        };
        let t = Polynomial::term(&table, m, lc / &lc_c);
        rem = rem.try_sub(&(&t * c))?;
        q.add_scaled_assign(&t, &BigRational::one())?;
    }
    Ok(q)
}

fn divide_by_term(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    let table = a.table().clone();
    let (mb, cb) = b.first_term().expect("single term");
    let mut q = Polynomial::zero(&table);
    for (ma, ca) in a.iter() {
        let quotient = ma.checked_div(mb).and_then(|m| {
            let (prod, neg) = Monomial::mul(&table, &m, mb)?;
            (prod == *ma).then_some((m, neg))
        });
        let Some((m, neg)) = quotient else {
            return Err(Error::NotDivisible {
                remainder: a.canonical_text(),
            });
        };
        let c = ca / cb;
        let c = if neg { -c } else { c };
        if !c.is_zero() {
            q.add_scaled_assign(&Polynomial::term(&table, m, c), &BigRational::one())?;
        }
    }
    Ok(q)
}
