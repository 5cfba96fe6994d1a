//! Exact supercommutative polynomials over ℚ.
//!
//! A [`Polynomial`] lives over a shared [`VarTable`] whose variables carry a
//! parity. Odd variables anticommute and square to zero; even variables
//! commute with everything. Terms are kept in a canonical form: monomials
//! list their variables in increasing id order, coefficients are reduced
//! rationals, and no zero coefficient is stored. Two polynomials are equal
//! exactly when their term maps are equal.

mod division;
mod localized;
mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use localized::LocalizedElement;
pub use text::parse;

/// Shorthand for building a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// ℤ/2 grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Parity {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Sign `(-1)^{self * other}` as a boolean "negate" flag.
    pub fn sign_with(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        // addition mod 2
        Parity::from_bit((self.bit() + rhs.bit()) % 2)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// An element of a ℤ/2-graded index set such as `{1, …, n, 1̄, …, m̄}`.
///
/// `pos` is 1-based within its parity class. Barred (odd) indices render
/// with a trailing apostrophe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedIndex {
    pub parity: Parity,
    pub pos: u32,
}

impl GradedIndex {
    pub fn even(pos: u32) -> Self {
        GradedIndex {
            parity: Parity::Even,
            pos,
        }
    }

    pub fn odd(pos: u32) -> Self {
        GradedIndex {
            parity: Parity::Odd,
            pos,
        }
    }
}

impl fmt::Display for GradedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parity {
            Parity::Even => write!(f, "{}", self.pos),
            Parity::Odd => write!(f, "{}'", self.pos),
        }
    }
}

/// What a variable is a coordinate of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `x_{ti}`: coordinate `i` of the covector copy `t`.
    Covector { t: GradedIndex, i: GradedIndex },
    /// `x*_{is}`: coordinate `i` of the vector copy `s`.
    Vector { i: GradedIndex, s: GradedIndex },
    /// A free odd Grassmann generator `g<k>` (1-based).
    Grassmann(u32),
}

impl VarKind {
    pub fn parity(&self) -> Parity {
        match *self {
            VarKind::Covector { t, i } => t.parity + i.parity,
            VarKind::Vector { i, s } => i.parity + s.parity,
            VarKind::Grassmann(_) => Parity::Odd,
        }
    }

    pub fn label(&self) -> String {
        match self {
            VarKind::Covector { t, i } => format!("x[{t},{i}]"),
            VarKind::Vector { i, s } => format!("xs[{i},{s}]"),
            VarKind::Grassmann(k) => format!("g{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub id: u32,
    pub kind: VarKind,
    pub parity: Parity,
    pub label: String,
}

/// Dense table of variables; ids are positions in the table.
#[derive(Debug)]
pub struct VarTable {
    vars: Vec<Variable>,
    by_label: HashMap<String, u32>,
}

impl Eq for VarTable {}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl VarTable {
    pub fn new(kinds: impl IntoIterator<Item = VarKind>) -> Result<Arc<VarTable>> {
        let mut vars = Vec::new();
        let mut by_label = HashMap::new();
        for (id, kind) in kinds.into_iter().enumerate() {
            let label = kind.label();
            if by_label.insert(label.clone(), id as u32).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
            vars.push(Variable {
                id: id as u32,
                kind,
                parity: kind.parity(),
                label,
            });
        }
        Ok(Arc::new(VarTable { vars, by_label }))
    }

    /// Table of `count` free Grassmann generators `g1 … g<count>`.
    pub fn grassmann(count: u32) -> Arc<VarTable> {
        VarTable::new((1..=count).map(VarKind::Grassmann)).expect("labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, id: u32) -> &Variable {
        &self.vars[id as usize]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn parity(&self, id: u32) -> Parity {
        self.vars[id as usize].parity
    }

    pub fn lookup(&self, label: &str) -> Option<u32> {
        self.by_label.get(label).copied()
    }

    pub fn odd_count(&self) -> usize {
        self.vars.iter().filter(|v| v.parity.is_odd()).count()
    }
}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A monomial: `(id, exponent)` pairs with strictly increasing ids.
///
/// Ordering is graded, ties broken by comparing the non-decreasing
/// sequences of variable ids lexicographically. This is the pivot order
/// used by every elimination downstream.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(id: u32) -> Monomial {
        Monomial {
            factors: vec![(id, 1)],
        }
    }

    /// Builds a monomial from `(id, exp)` pairs in any order; zero exponents are dropped
    /// and repeated ids are merged. Odd-variable validity is not checked here.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Monomial {
        let mut map = BTreeMap::new();
        for (id, e) in pairs {
            *map.entry(id).or_insert(0) += e;
        }
        Monomial {
            factors: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, id: u32) -> u32 {
        match self.factors.binary_search_by_key(&id, |&(v, _)| v) {
            Ok(pos) => self.factors[pos].1,
            Err(_) => 0,
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn odd_count(&self, table: &VarTable) -> usize {
        self.factors
            .iter()
            .filter(|&&(id, _)| table.parity(id).is_odd())
            .count()
    }

    pub fn parity(&self, table: &VarTable) -> Parity {
        Parity::from_bit((self.odd_count(table) & 1) as u8)
    }

    /// True when the monomial contains no odd variable.
    pub fn is_even_part(&self, table: &VarTable) -> bool {
        self.odd_count(table) == 0
    }

    fn id_sequence(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors
            .iter()
            .flat_map(|&(id, e)| std::iter::repeat_n(id, e as usize))
    }

    /// Multiset quotient `self / other`, ignoring signs. `None` if `other` does not divide.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(id, e) in &self.factors {
            let mut e = e;
            if j < other.factors.len() && other.factors[j].0 == id {
                if other.factors[j].1 > e {
                    return None;
                }
                e -= other.factors[j].1;
                j += 1;
            } else if j < other.factors.len() && other.factors[j].0 < id {
                return None;
            }
            if e > 0 {
                out.push((id, e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// Product of two canonical monomials as an ordered product `a·b`.
    ///
    /// Returns the canonical monomial and whether the reordering introduced a
    /// minus sign, or `None` if an odd variable repeats.
    pub fn mul(table: &VarTable, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(a.factors.len() + b.factors.len());
        let mut odd_left_in_a = a.odd_count(table);
        let mut swaps = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < a.factors.len() || j < b.factors.len() {
            let take_a = match (a.factors.get(i), b.factors.get(j)) {
                (Some(&(ia, _)), Some(&(ib, _))) => match ia.cmp(&ib) {
                    Ordering::Less => Some(true),
                    Ordering::Greater => Some(false),
                    Ordering::Equal => None,
                },
                (Some(_), None) => Some(true),
                (None, Some(_)) => Some(false),
                (None, None) => unreachable!(),
            };
            match take_a {
                Some(true) => {
                    let (id, e) = a.factors[i];
                    if table.parity(id).is_odd() {
                        odd_left_in_a -= 1;
                    }
                    out.push((id, e));
                    i += 1;
                }
                Some(false) => {
                    let (id, e) = b.factors[j];
                    if table.parity(id).is_odd() {
                        swaps += odd_left_in_a;
                    }
                    out.push((id, e));
                    j += 1;
                }
                None => {
                    let (id, ea) = a.factors[i];
                    if table.parity(id).is_odd() {
                        return None;
                    }
                    out.push((id, ea + b.factors[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Some((Monomial { factors: out }, swaps % 2 == 1))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.id_sequence().cmp(other.id_sequence()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse exact polynomial in the free supercommutative algebra on a [`VarTable`].
#[derive(Clone)]
pub struct Polynomial {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

impl Polynomial {
    pub fn zero(table: &Arc<VarTable>) -> Polynomial {
        Polynomial {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<VarTable>) -> Polynomial {
        Polynomial::constant(table, BigRational::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: BigRational) -> Polynomial {
        Polynomial::term(table, Monomial::one(), c)
    }

    pub fn from_int(table: &Arc<VarTable>, c: i64) -> Polynomial {
        Polynomial::constant(table, BigRational::from_integer(c.into()))
    }

    pub fn var(table: &Arc<VarTable>, id: u32) -> Polynomial {
        assert!((id as usize) < table.len(), "variable id {id} out of range");
        Polynomial::term(table, Monomial::var(id), BigRational::one())
    }

    /// `c · m`, where `m` is taken as the canonical ordered product of its variables.
    /// A monomial repeating an odd variable yields zero.
    pub fn term(table: &Arc<VarTable>, m: Monomial, c: BigRational) -> Polynomial {
        let mut terms = BTreeMap::new();
        let valid = m
            .factors
            .iter()
            .all(|&(id, e)| e == 1 || !table.parity(id).is_odd());
        if !c.is_zero() && valid {
            terms.insert(m, c);
        }
        Polynomial {
            table: table.clone(),
            terms,
        }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Smallest monomial in the canonical order, with its coefficient.
    pub fn first_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next()
    }

    /// Largest monomial in the canonical order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Parity if every term has the same parity; `None` for zero or mixed polynomials.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity(&self.table));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// True if the polynomial is zero or homogeneous of parity `p`.
    pub fn is_homogeneous_of(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity(&self.table) == p)
    }

    /// Total degree if homogeneous (zero counts as homogeneous of every degree → `None`).
    pub fn total_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Part of the polynomial free of odd variables.
    pub fn body(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.is_even_part(&self.table))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            table: self.table.clone(),
            terms,
        }
    }

    /// Sum of the terms of parity `p`.
    pub fn parity_part(&self, p: Parity) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.parity(&self.table) == p)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            table: self.table.clone(),
            terms,
        }
    }

    /// Constant term as a rational.
    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Monomial::one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn check_table(&self, other: &Polynomial) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    fn add_term(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Polynomial, c: &BigRational) -> Result<Polynomial> {
        self.check_table(other)?;
        let mut terms = self.terms.clone();
        if !c.is_zero() {
            for (m, k) in &other.terms {
                Self::add_term(&mut terms, m.clone(), k * c);
            }
        }
        Ok(Polynomial {
            table: self.table.clone(),
            terms,
        })
    }

    /// In-place `self += c·other`.
    pub fn add_scaled_assign(&mut self, other: &Polynomial, c: &BigRational) -> Result<()> {
        self.check_table(other)?;
        if !c.is_zero() {
            for (m, k) in &other.terms {
                Self::add_term(&mut self.terms, m.clone(), k * c);
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add_scaled(other, &BigRational::one())
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add_scaled(other, &-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_table(other)?;
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = Monomial::mul(&self.table, ma, mb) {
                    let c = ca * cb;
                    Self::add_term(&mut terms, m, if neg { -c } else { c });
                }
            }
        }
        Ok(Polynomial {
            table: self.table.clone(),
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Monic rescaling: the first term (canonical order) gets coefficient 1.
    pub fn monic(&self) -> Polynomial {
        match self.first_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Rescales to integer coefficients with content 1 and a positive first coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self.terms.values().fold(BigInt::one(), |acc, c| {
            num_integer::lcm(acc, c.denom().clone())
        });
        let gcd = self
            .terms
            .values()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .fold(BigInt::zero(), num_integer::gcd);
        let mut f = BigRational::new(lcm, gcd);
        if self
            .first_term()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            f = -f;
        }
        self.scale(&f)
    }

    /// Renames the polynomial onto another table through an id map (used for mirror symmetries).
    /// Signs from reordering odd variables are applied.
    pub fn relabel(&self, target: &Arc<VarTable>, map: impl Fn(u32) -> u32) -> Polynomial {
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for &(id, e) in &m.factors {
                let v = Polynomial::var(target, map(id));
                t = &t * &v.pow(e);
            }
            out.add_scaled_assign(&t, &BigRational::one())
                .expect("same table");
        }
        out
    }

    /// Exact division: `q` with `q·b = self`.
    pub fn exact_div(&self, b: &Polynomial) -> Result<Polynomial> {
        division::exact_div(self, b)
    }

    /// Evaluates the polynomial at a point: every variable is sent to a
    /// polynomial of the same parity over `target`.
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<u32, Polynomial>,
        target: &Arc<VarTable>,
    ) -> Result<Polynomial> {
        for (&id, value) in assignment {
            if (id as usize) >= self.table.len() {
                return Err(Error::BadIndex(format!("variable id {id}")));
            }
            if !same_table(value.table(), target) {
                return Err(Error::TableMismatch);
            }
            if !value.is_homogeneous_of(self.table.parity(id)) {
                return Err(Error::ParityMismatch {
                    var: self.table.var(id).label.clone(),
                });
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for &(id, e) in &m.factors {
                let value = assignment
                    .get(&id)
                    .ok_or_else(|| Error::MissingAssignment {
                        var: self.table.var(id).label.clone(),
                    })?;
                t = t.try_mul(&value.pow(e))?;
            }
            out.add_scaled_assign(&t, &BigRational::one())?;
        }
        Ok(out)
    }

    /// Deterministic text rendering; see [`parse`] for the inverse.
    pub fn canonical_text(&self) -> String {
        text::render(self)
    }

    /// Variables that occur in the polynomial.
    pub fn support_vars(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|&(id, _)| id))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics if the operands live over different tables; use the `try_*` form to handle that.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$call(rhs).expect("polynomial table mismatch")
            }
        }
        impl std::ops::$tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$call(&rhs).expect("polynomial table mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

#[cfg(test)]
mod tests;
