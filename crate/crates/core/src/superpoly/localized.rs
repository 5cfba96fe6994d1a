//! Localization at a single even denominator.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{Parity, Polynomial};
use crate::error::{Error, Result};

/// `numerator / base^exponent` for a fixed even `base`.
///
/// Every constructor reduces the exponent greedily by exact division, so an
/// element that happens to be a polynomial ends with exponent 0.
#[derive(Clone)]
pub struct LocalizedElement {
    numerator: Polynomial,
    base: Polynomial,
    exponent: u32,
}

impl fmt::Debug for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) / ({})^{}",
            self.numerator, self.base, self.exponent
        )
    }
}

impl LocalizedElement {
    pub fn new(numerator: Polynomial, base: Polynomial, exponent: u32) -> Result<LocalizedElement> {
        numerator.check_table(&base)?;
        if base.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !base.is_homogeneous_of(Parity::Even) {
            return Err(Error::Parse("localization base must be even".into()));
        }
        let mut e = LocalizedElement {
            numerator,
            base,
            exponent,
        };
        e.reduce();
        Ok(e)
    }

    pub fn from_polynomial(p: Polynomial, base: Polynomial) -> Result<LocalizedElement> {
        LocalizedElement::new(p, base, 0)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn base(&self) -> &Polynomial {
        &self.base
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_polynomial(&self) -> bool {
        self.exponent == 0
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn into_polynomial(self) -> Result<Polynomial> {
        if self.exponent == 0 {
            Ok(self.numerator)
        } else {
            Err(Error::NotPolynomial {
                exponent: self.exponent,
            })
        }
    }

    pub fn parity(&self) -> Option<Parity> {
        self.numerator.parity()
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 {
            match self.numerator.exact_div(&self.base) {
                Ok(q) => {
                    self.numerator = q;
                    self.exponent -= 1;
                }
                Err(_) => break,
            }
        }
    }

    fn check_base(&self, other: &LocalizedElement) -> Result<()> {
        self.numerator.check_table(&other.numerator)?;
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    /// Numerator rescaled to denominator `base^e` (requires `e ≥ exponent`).
    pub fn numerator_at(&self, e: u32) -> Polynomial {
        assert!(e >= self.exponent);
        &self.numerator * &self.base.pow(e - self.exponent)
    }

    /// `self + c·other`.
    pub fn add_scaled(
        &self,
        other: &LocalizedElement,
        c: &BigRational,
    ) -> Result<LocalizedElement> {
        self.check_base(other)?;
        let e = self.exponent.max(other.exponent);
        let num = self.numerator_at(e).add_scaled(&other.numerator_at(e), c)?;
        LocalizedElement::new(num, self.base.clone(), e)
    }

    pub fn add(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        self.add_scaled(other, &BigRational::one())
    }

    pub fn sub(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        self.add_scaled(other, &-BigRational::one())
    }

    pub fn mul(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        self.check_base(other)?;
        let num = self.numerator.try_mul(&other.numerator)?;
        LocalizedElement::new(num, self.base.clone(), self.exponent + other.exponent)
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<LocalizedElement> {
        let num = self.numerator.try_mul(p)?;
        LocalizedElement::new(num, self.base.clone(), self.exponent)
    }

    pub fn scale(&self, c: &BigRational) -> LocalizedElement {
        LocalizedElement {
            numerator: self.numerator.scale(c),
            base: self.base.clone(),
            exponent: self.exponent,
        }
    }

    /// Equality as fractions, by cross-multiplication.
    pub fn equals(&self, other: &LocalizedElement) -> Result<bool> {
        self.check_base(other)?;
        let e = self.exponent.max(other.exponent);
        Ok(self.numerator_at(e) == other.numerator_at(e))
    }

    /// Applies a derivation `d` of parity `pd` via the quotient rule:
    /// `D(N b^{−e}) = D(N) b^{−e} + (−1)^{pd·pN} N (−e) b^{−e−1} D(b)`.
    pub fn apply_derivation(
        &self,
        pd: Parity,
        d: impl Fn(&Polynomial) -> Result<Polynomial>,
    ) -> Result<LocalizedElement> {
        let dn = d(&self.numerator)?;
        if self.exponent == 0 {
            return LocalizedElement::new(dn, self.base.clone(), 0);
        }
        let db = d(&self.base)?;
        let mut num = &dn * &self.base;
        // The sign depends on the parity of N; split N into parity parts.
        for p in [Parity::Even, Parity::Odd] {
            let part = self.numerator.parity_part(p);
            if part.is_zero() {
                continue;
            }
            let mut c = BigRational::from_integer((-(self.exponent as i64)).into());
            if pd.sign_with(p) {
                c = -c;
            }
            num.add_scaled_assign(&(&part * &db), &c)?;
        }
        LocalizedElement::new(num, self.base.clone(), self.exponent + 1)
    }
}
