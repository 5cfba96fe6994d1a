//! The polynomial arena and the superderivations acting on it.
//!
//! The arena is the free supercommutative algebra on the coordinates
//! `x_{ti}` of `k + l` covector copies and `x*_{is}` of `p + q` vector
//! copies of the standard module `V` of dimension `(n|m)`. Index sets list
//! even elements first: `T = {1..k, 1'..l'}`, `S = {1..p, 1'..q'}`,
//! `I = {1..n, 1'..m'}`.
//!
//! Sign conventions (each one is pinned by a test):
//!
//! * `X ∈ gl(V)` acts by `D_X(x_{ti}) = (−1)^{p(X)p(t)} Σ_a X_{ai} x_{ta}` and
//!   `D_X(x*_{is}) = −(−1)^{p(X)p(i)} Σ_k X_{ik} x*_{ks}`, which kills every
//!   scalar product `Σ_i x_{ti} x*_{is}` and makes `X ↦ D_X` a morphism.
//! * The covector polarization `t' ← t` sends `x_{ti} ↦ x_{t'i}`; the vector
//!   polarization `s' ← s` sends `x*_{is} ↦ (−1)^{(p_s+p_{s'})p_i} x*_{is'}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::supermatrix::SuperMatrix;
use crate::superpoly::{GradedIndex, Monomial, Parity, Polynomial, VarKind, VarTable};

/// Numbers of copies of `V`, `Π(V)`, `V*` and `Π(V)*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CopySpec {
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub q: usize,
}

impl CopySpec {
    pub fn new(k: usize, l: usize, p: usize, q: usize) -> CopySpec {
        CopySpec { k, l, p, q }
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.k, self.l, self.p, self.q]
    }
}

impl fmt::Display for CopySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.k, self.l, self.p, self.q)
    }
}

fn graded_indices(even: usize, odd: usize) -> Vec<GradedIndex> {
    (1..=even as u32)
        .map(GradedIndex::even)
        .chain((1..=odd as u32).map(GradedIndex::odd))
        .collect()
}

/// Which copy a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyRef {
    /// Covector copy, position in `T`.
    U(usize),
    /// Vector copy, position in `S`.
    W(usize),
}

#[derive(Debug)]
pub struct Arena {
    n: usize,
    m: usize,
    copies: CopySpec,
    table: Arc<VarTable>,
    t_index: Vec<GradedIndex>,
    s_index: Vec<GradedIndex>,
    i_index: Vec<GradedIndex>,
    /// `x_ids[t][i]`
    x_ids: Vec<Vec<u32>>,
    /// `xs_ids[i][s]`
    xs_ids: Vec<Vec<u32>>,
    /// For each variable: `(copy, position in I)`.
    placement: Vec<(CopyRef, usize)>,
}

/// Builds the arena for `V` of dimension `(n|m)` and the given copies.
pub fn build_arena(n: usize, m: usize, copies: CopySpec) -> Result<Arc<Arena>> {
    if copies.as_array().iter().all(|&c| c == 0) {
        return Err(Error::EmptyArena);
    }
    if n + m == 0 {
        return Err(Error::InvalidDims("dimension (0|0)".into()));
    }
    let t_index = graded_indices(copies.k, copies.l);
    let s_index = graded_indices(copies.p, copies.q);
    let i_index = graded_indices(n, m);
    let mut kinds = Vec::new();
    let mut placement = Vec::new();
    let mut x_ids = vec![vec![0u32; i_index.len()]; t_index.len()];
    let mut xs_ids = vec![vec![0u32; s_index.len()]; i_index.len()];
    for (ti, &t) in t_index.iter().enumerate() {
        for (ii, &i) in i_index.iter().enumerate() {
            x_ids[ti][ii] = kinds.len() as u32;
            kinds.push(VarKind::Covector { t, i });
            placement.push((CopyRef::U(ti), ii));
        }
    }
    for (si, &s) in s_index.iter().enumerate() {
        for (ii, &i) in i_index.iter().enumerate() {
            xs_ids[ii][si] = kinds.len() as u32;
            kinds.push(VarKind::Vector { i, s });
            placement.push((CopyRef::W(si), ii));
        }
    }
    let table = VarTable::new(kinds)?;
    Ok(Arc::new(Arena {
        n,
        m,
        copies,
        table,
        t_index,
        s_index,
        i_index,
        x_ids,
        xs_ids,
        placement,
    }))
}

impl Arena {
    pub fn dim_v(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn copies(&self) -> CopySpec {
        self.copies
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn t_index(&self) -> &[GradedIndex] {
        &self.t_index
    }

    pub fn s_index(&self) -> &[GradedIndex] {
        &self.s_index
    }

    pub fn i_index(&self) -> &[GradedIndex] {
        &self.i_index
    }

    pub fn t_parity(&self, t: usize) -> Parity {
        self.t_index[t].parity
    }

    pub fn s_parity(&self, s: usize) -> Parity {
        self.s_index[s].parity
    }

    pub fn i_parity(&self, i: usize) -> Parity {
        self.i_index[i].parity
    }

    /// Positions in `T` of even (`Parity::Even`) or odd copies.
    pub fn t_of_parity(&self, p: Parity) -> Vec<usize> {
        (0..self.t_index.len())
            .filter(|&t| self.t_parity(t) == p)
            .collect()
    }

    pub fn s_of_parity(&self, p: Parity) -> Vec<usize> {
        (0..self.s_index.len())
            .filter(|&s| self.s_parity(s) == p)
            .collect()
    }

    pub fn i_of_parity(&self, p: Parity) -> Vec<usize> {
        (0..self.i_index.len())
            .filter(|&i| self.i_parity(i) == p)
            .collect()
    }

    /// Id of `x_{ti}` (positions in `T` and `I`).
    pub fn x_id(&self, t: usize, i: usize) -> u32 {
        self.x_ids[t][i]
    }

    /// Id of `x*_{is}` (positions in `I` and `S`).
    pub fn xs_id(&self, i: usize, s: usize) -> u32 {
        self.xs_ids[i][s]
    }

    pub fn x(&self, t: usize, i: usize) -> Polynomial {
        Polynomial::var(&self.table, self.x_id(t, i))
    }

    pub fn xs(&self, i: usize, s: usize) -> Polynomial {
        Polynomial::var(&self.table, self.xs_id(i, s))
    }

    pub fn placement(&self, id: u32) -> (CopyRef, usize) {
        self.placement[id as usize]
    }

    pub fn num_vars(&self) -> usize {
        self.table.len()
    }

    /// Multidegree of a single monomial.
    pub fn monomial_multidegree(&self, mono: &Monomial) -> MultiDegree {
        let mut md = MultiDegree {
            t: vec![0; self.t_index.len()],
            s: vec![0; self.s_index.len()],
        };
        for &(id, e) in mono.factors() {
            match self.placement(id).0 {
                CopyRef::U(t) => md.t[t] += e,
                CopyRef::W(s) => md.s[s] += e,
            }
        }
        md
    }

    /// Multidegree of a polynomial homogeneous in every copy.
    pub fn multidegree(&self, f: &Polynomial) -> Result<MultiDegree> {
        let mut it = f.terms().keys().map(|m| self.monomial_multidegree(m));
        let first = it.next().ok_or(Error::Inhomogeneous)?;
        if it.all(|md| md == first) {
            Ok(first)
        } else {
            Err(Error::Inhomogeneous)
        }
    }
}

/// Degrees per copy: covector copies `t ∈ T`, then vector copies `s ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiDegree {
    pub t: Vec<u32>,
    pub s: Vec<u32>,
}

impl MultiDegree {
    pub fn total(&self) -> u32 {
        self.t.iter().chain(&self.s).sum()
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.t.iter().map(u32::to_string).collect();
        let s: Vec<String> = self.s.iter().map(u32::to_string).collect();
        write!(f, "({}; {})", t.join(","), s.join(","))
    }
}

/// A superderivation given by its values on generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    parity: Parity,
    table: Arc<VarTable>,
    images: BTreeMap<u32, Polynomial>,
}

impl Derivation {
    /// Generators missing from `images` are sent to zero.
    pub fn new(
        table: &Arc<VarTable>,
        parity: Parity,
        images: BTreeMap<u32, Polynomial>,
    ) -> Result<Derivation> {
        for (&id, img) in &images {
            if !img.is_homogeneous_of(table.parity(id) + parity) {
                return Err(Error::ParityMismatch {
                    var: table.var(id).label.clone(),
                });
            }
        }
        let images = images.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(Derivation {
            parity,
            table: table.clone(),
            images,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn image(&self, id: u32) -> Option<&Polynomial> {
        self.images.get(&id)
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of one monomial by the graded Leibniz rule.
    pub fn apply_monomial(&self, mono: &Monomial) -> Polynomial {
        let table = &self.table;
        let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        let factors = mono.factors();
        let mut odd_before = 0usize;
        for (k, &(id, e)) in factors.iter().enumerate() {
            let var_odd = table.parity(id).is_odd();
            if let Some(img) = self.images.get(&id) {
                // prefix · (e v^{e−1} D(v)) · suffix
                let prefix = Monomial::from_pairs(factors[..k].iter().copied());
                let suffix = Monomial::from_pairs(factors[k + 1..].iter().copied());
                let stem = Monomial::from_pairs([(id, e - 1)]);
                let mut sign_neg = self.parity.is_odd() && odd_before % 2 == 1;
                let left = Monomial::mul(table, &prefix, &stem).expect("sub-monomial is valid");
                sign_neg ^= left.1;
                let e_rat = BigRational::from_integer(e.into());
                for (mt, ct) in img.iter() {
                    let Some((a, s1)) = Monomial::mul(table, &left.0, mt) else {
                        continue;
                    };
                    let Some((b, s2)) = Monomial::mul(table, &a, &suffix) else {
                        continue;
                    };
                    let mut c = ct * &e_rat;
                    if sign_neg ^ s1 ^ s2 {
                        c = -c;
                    }
                    let slot = out.entry(b).or_insert_with(BigRational::zero);
                    *slot += c;
                }
            }
            if var_odd {
                odd_before += 1;
            }
        }
        let mut p = Polynomial::zero(table);
        for (m, c) in out {
            if !c.is_zero() {
                p.add_scaled_assign(&Polynomial::term(table, m, c), &BigRational::one())
                    .expect("same table");
            }
        }
        p
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(&self.table);
        for (m, c) in f.iter() {
            let img = self.apply_monomial(m);
            acc.add_scaled_assign(&img, c).expect("same table");
        }
        acc
    }

    /// `self + c·other` (same parity).
    pub fn add_scaled(&self, other: &Derivation, c: &BigRational) -> Result<Derivation> {
        if self.parity != other.parity {
            return Err(Error::ParityMismatch {
                var: "derivation".into(),
            });
        }
        let mut images = self.images.clone();
        for (&id, img) in &other.images {
            let e = images
                .entry(id)
                .or_insert_with(|| Polynomial::zero(&self.table));
            *e = e.add_scaled(img, c)?;
        }
        Derivation::new(&self.table, self.parity, images)
    }

    /// Supercommutator `[D, E] = DE − (−1)^{p(D)p(E)} ED`, again a derivation.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let sign = if self.parity.sign_with(other.parity) {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let mut images = BTreeMap::new();
        for id in 0..self.table.len() as u32 {
            let v = Polynomial::var(&self.table, id);
            let de = self.apply(&other.apply(&v));
            let ed = other.apply(&self.apply(&v));
            let img = de.add_scaled(&ed, &sign).expect("same table");
            if !img.is_zero() {
                images.insert(id, img);
            }
        }
        Derivation::new(&self.table, self.parity + other.parity, images)
            .expect("bracket parities are consistent")
    }

    /// Equality as maps (compares images on every generator); zero maps of
    /// either parity are equal.
    pub fn same_as(&self, other: &Derivation) -> bool {
        self.images == other.images && (self.parity == other.parity || self.is_zero())
    }
}

fn constant_entry(x: &SuperMatrix, i: usize, j: usize) -> Result<BigRational> {
    x.get(i, j)
        .as_constant()
        .ok_or_else(|| Error::Structural("algebra elements must be constant matrices".into()))
}

/// The derivation by which `X ∈ gl(V)` acts on the arena.
pub fn g_derivation(arena: &Arena, x: &SuperMatrix) -> Result<Derivation> {
    let size = arena.n + arena.m;
    if x.size() != size || x.format().even_count() != arena.n {
        return Err(Error::FormatMismatch(format!(
            "matrix of size {} for V of dimension ({}|{})",
            x.size(),
            arena.n,
            arena.m
        )));
    }
    let px = x.parity().ok_or(Error::NotHomogeneous)?;
    let table = arena.table();
    let mut images = BTreeMap::new();
    for t in 0..arena.t_index.len() {
        let neg = px.sign_with(arena.t_parity(t));
        for i in 0..size {
            let mut img = Polynomial::zero(table);
            for a in 0..size {
                let c = constant_entry(x, a, i)?;
                if !c.is_zero() {
                    img.add_scaled_assign(&arena.x(t, a), &if neg { -c } else { c })?;
                }
            }
            images.insert(arena.x_id(t, i), img);
        }
    }
    for s in 0..arena.s_index.len() {
        for i in 0..size {
            let neg = !px.sign_with(arena.i_parity(i));
            let mut img = Polynomial::zero(table);
            for k in 0..size {
                let c = constant_entry(x, i, k)?;
                if !c.is_zero() {
                    img.add_scaled_assign(&arena.xs(k, s), &if neg { -c } else { c })?;
                }
            }
            images.insert(arena.xs_id(i, s), img);
        }
    }
    Derivation::new(table, px, images)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Acts on covector copies (index set `T`).
    U,
    /// Acts on vector copies (index set `S`).
    W,
}

/// First-order polarization operator replacing copy `from` by copy `to`.
pub fn polarization(arena: &Arena, side: Side, to: usize, from: usize) -> Result<Derivation> {
    let table = arena.table();
    let mut images = BTreeMap::new();
    let size = arena.n + arena.m;
    let parity = match side {
        Side::U => {
            let len = arena.t_index.len();
            if to >= len || from >= len {
                return Err(Error::BadIndex(format!(
                    "covector copies {to}, {from} of {len}"
                )));
            }
            for i in 0..size {
                images.insert(arena.x_id(from, i), arena.x(to, i));
            }
            arena.t_parity(to) + arena.t_parity(from)
        }
        Side::W => {
            let len = arena.s_index.len();
            if to >= len || from >= len {
                return Err(Error::BadIndex(format!(
                    "vector copies {to}, {from} of {len}"
                )));
            }
            let shift = arena.s_parity(to) + arena.s_parity(from);
            for i in 0..size {
                let v = arena.xs(i, to);
                images.insert(
                    arena.xs_id(i, from),
                    if shift.sign_with(arena.i_parity(i)) {
                        -v
                    } else {
                        v
                    },
                );
            }
            shift
        }
    };
    Derivation::new(table, parity, images)
}

/// Every first-order polarization of the arena, covector side first.
pub fn all_polarizations(arena: &Arena) -> Vec<Derivation> {
    let mut out = Vec::new();
    let nt = arena.t_index.len();
    let ns = arena.s_index.len();
    for to in 0..nt {
        for from in 0..nt {
            out.push(polarization(arena, Side::U, to, from).expect("indices in range"));
        }
    }
    for to in 0..ns {
        for from in 0..ns {
            out.push(polarization(arena, Side::W, to, from).expect("indices in range"));
        }
    }
    out
}

/// Odd polarization between even copies of a `q`-type arena (`dim V = (n|n)`):
/// `x_{ti} ↦ a·x_{t'ī}`, `x_{tī} ↦ b·x_{t'i}` on covector copies, and the same
/// pattern on vector copies.
///
/// These are the images of the polarizations involving odd copies under the
/// identification of odd copies with even ones through `J`.
pub fn queer_polarization_with(
    arena: &Arena,
    side: Side,
    to: usize,
    from: usize,
    signs: [i64; 2],
) -> Result<Derivation> {
    let n = arena.n;
    if n != arena.m || n == 0 {
        return Err(Error::WrongArena(format!(
            "queer polarizations need dim V = (n|n), got ({}|{})",
            arena.n, arena.m
        )));
    }
    let (len, parity_of): (usize, &dyn Fn(usize) -> Parity) = match side {
        Side::U => (arena.t_index.len(), &|t| arena.t_parity(t)),
        Side::W => (arena.s_index.len(), &|s| arena.s_parity(s)),
    };
    if to >= len || from >= len || parity_of(to).is_odd() || parity_of(from).is_odd() {
        return Err(Error::BadIndex(format!(
            "even copies {to}, {from} of {len}"
        )));
    }
    let table = arena.table();
    let [a, b] = signs.map(|c| BigRational::from_integer(c.into()));
    let mut images = BTreeMap::new();
    for i in 0..n {
        let (bar, c_even, c_odd) = (n + i, &a, &b);
        match side {
            Side::U => {
                images.insert(arena.x_id(from, i), arena.x(to, bar).scale(c_even));
                images.insert(arena.x_id(from, bar), arena.x(to, i).scale(c_odd));
            }
            Side::W => {
                images.insert(arena.xs_id(i, from), arena.xs(bar, to).scale(c_even));
                images.insert(arena.xs_id(bar, from), arena.xs(i, to).scale(c_odd));
            }
        }
    }
    Derivation::new(table, Parity::Odd, images)
}

/// [`queer_polarization_with`] with the signs that make it supercommute with `q(V)`.
pub fn queer_polarization(arena: &Arena, side: Side, to: usize, from: usize) -> Result<Derivation> {
    let signs = match side {
        Side::U => [1, -1],
        Side::W => [1, 1],
    };
    queer_polarization_with(arena, side, to, from, signs)
}

/// Every queer polarization between even copies, covector side first.
pub fn all_queer_polarizations(arena: &Arena) -> Result<Vec<Derivation>> {
    let mut out = Vec::new();
    for (side, copies) in [
        (Side::U, arena.t_of_parity(Parity::Even)),
        (Side::W, arena.s_of_parity(Parity::Even)),
    ] {
        for &to in &copies {
            for &from in &copies {
                out.push(queer_polarization(arena, side, to, from)?);
            }
        }
    }
    Ok(out)
}

/// Applies `ds[0]` first, then `ds[1]`, and so on.
pub fn compose_derivations(ds: &[Derivation], f: &Polynomial) -> Polynomial {
    ds.iter().fold(f.clone(), |acc, d| d.apply(&acc))
}
