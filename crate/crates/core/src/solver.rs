//! Invariant subspaces by degree and polarization closures of basic sets.
//!
//! Invariance is tested at the derivation level: `f` is invariant iff every
//! basis derivation annihilates it. All derivations of `g ⊂ gl(V)` preserve
//! the multidegree, so kernels are computed block by block.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{
    all_polarizations, all_queer_polarizations, build_arena, g_derivation, Arena, CopySpec,
    Derivation, MultiDegree,
};
use crate::algebras::{basis_of, Family, FamilySpec};
use crate::combinatorics::strict_partitions;
use crate::invariants;
use crate::linalg::{clear_denominators, nullspace, Echelon};
use crate::superpoly::{Monomial, Polynomial};
use crate::{Error, Result};

/// Default cap on the degrees examined by [`verify_basic_set`].
pub const DEFAULT_MAX_DEGREE: u32 = 6;

/// Monomials of the given degree (and multidegree), in canonical order.
///
/// Odd variables appear with exponent at most 1.
pub fn monomial_basis(arena: &Arena, degree: u32, weight: Option<&MultiDegree>) -> Vec<Monomial> {
    let table = arena.table();
    let nvars = arena.num_vars();
    // Budgets per group: one group per copy when weighted, else a single one.
    let group: Vec<usize> = (0..nvars as u32)
        .map(|id| match (weight, arena.placement(id).0) {
            (None, _) => 0,
            (Some(_), crate::action::CopyRef::U(t)) => t,
            (Some(w), crate::action::CopyRef::W(s)) => w.t.len() + s,
        })
        .collect();
    let mut budget: Vec<u32> = match weight {
        None => vec![degree],
        Some(w) => {
            if w.total() != degree
                || w.t.len() != arena.t_index().len()
                || w.s.len() != arena.s_index().len()
            {
                return Vec::new();
            }
            w.t.iter().chain(&w.s).copied().collect()
        }
    };
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    fn rec(
        id: usize,
        nvars: usize,
        group: &[usize],
        odd: &dyn Fn(usize) -> bool,
        budget: &mut [u32],
        pairs: &mut Vec<(u32, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if budget.iter().all(|&b| b == 0) {
            out.push(Monomial::from_pairs(pairs.iter().copied()));
            return;
        }
        if id == nvars {
            return;
        }
        let g = group[id];
        let max = if odd(id) { budget[g].min(1) } else { budget[g] };
        for e in (0..=max).rev() {
            budget[g] -= e;
            if e > 0 {
                pairs.push((id as u32, e));
            }
            rec(id + 1, nvars, group, odd, budget, pairs, out);
            if e > 0 {
                pairs.pop();
            }
            budget[g] += e;
        }
    }
    let odd = |id: usize| table.parity(id as u32).is_odd();
    rec(0, nvars, &group, &odd, &mut budget, &mut pairs, &mut out);
    out.sort();
    out
}

/// All multidegrees of the given total degree for this arena, in increasing order.
pub fn multidegrees(arena: &Arena, degree: u32) -> Vec<MultiDegree> {
    let nt = arena.t_index().len();
    let parts = nt + arena.s_index().len();
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut raw = Vec::new();
    if parts > 0 {
        rec(0, degree, &mut cur, &mut raw);
    }
    for v in raw {
        out.push(MultiDegree {
            t: v[..nt].to_vec(),
            s: v[nt..].to_vec(),
        });
    }
    out.sort();
    out
}

/// Result of a kernel computation.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub dimension: usize,
    pub basis: Vec<Polynomial>,
}

/// Invariants of the given degree (and multidegree) under the algebra spanned by `algebra_basis`.
pub fn invariant_space(
    arena: &Arena,
    algebra_basis: &[crate::supermatrix::SuperMatrix],
    degree: u32,
    weight: Option<&MultiDegree>,
) -> Result<InvariantSpace> {
    let ds = algebra_basis
        .iter()
        .map(|x| g_derivation(arena, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(invariant_space_for(arena, &ds, degree, weight))
}

/// Like [`invariant_space`], with the derivations given directly.
pub fn invariant_space_for(
    arena: &Arena,
    ds: &[Derivation],
    degree: u32,
    weight: Option<&MultiDegree>,
) -> InvariantSpace {
    let blocks: Vec<MultiDegree> = match weight {
        Some(w) => vec![w.clone()],
        None => multidegrees(arena, degree),
    };
    let parts: Vec<Vec<Polynomial>> = blocks
        .par_iter()
        .map(|w| kernel_block(arena, ds, degree, w))
        .collect();
    let basis: Vec<Polynomial> = parts.into_iter().flatten().collect();
    InvariantSpace {
        dimension: basis.len(),
        basis,
    }
}

/// Kernel of the stacked derivations on one multidegree block.
fn kernel_block(
    arena: &Arena,
    ds: &[Derivation],
    degree: u32,
    weight: &MultiDegree,
) -> Vec<Polynomial> {
    let cols = monomial_basis(arena, degree, Some(weight));
    if cols.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<Polynomial>> = cols
        .par_iter()
        .map(|m| ds.iter().map(|d| d.apply_monomial(m)).collect())
        .collect();
    let mut rows: BTreeMap<(usize, &Monomial), Vec<(usize, BigRational)>> = BTreeMap::new();
    for (j, per_d) in images.iter().enumerate() {
        for (r, img) in per_d.iter().enumerate() {
            for (mono, c) in img.iter() {
                rows.entry((r, mono)).or_default().push((j, c.clone()));
            }
        }
    }
    let kernel = nullspace(cols.len(), rows.values().map(|r| clear_denominators(r)));
    let table = arena.table();
    kernel
        .into_iter()
        .map(|v| {
            v.into_iter().fold(Polynomial::zero(table), |f, (j, c)| {
                &f + &Polynomial::term(table, cols[j].clone(), BigRational::from_integer(c))
            })
        })
        .collect()
}

/// True if every derivation annihilates `f`.
pub fn is_annihilated(ds: &[Derivation], f: &Polynomial) -> bool {
    ds.iter().all(|d| d.apply(f).is_zero())
}

/// Incremental span of polynomials in one graded piece.
#[derive(Clone, Debug, Default)]
pub struct SpanTracker {
    echelon: Echelon,
    columns: HashMap<Monomial, usize>,
    basis: Vec<Polynomial>,
}

impl SpanTracker {
    pub fn new() -> SpanTracker {
        SpanTracker::default()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Polynomials that raised the rank, in insertion order.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    fn row(&mut self, f: &Polynomial) -> Vec<(usize, BigInt)> {
        let mut entries: Vec<(usize, BigRational)> = f
            .iter()
            .map(|(m, c)| {
                let next = self.columns.len();
                (*self.columns.entry(m.clone()).or_insert(next), c.clone())
            })
            .collect();
        entries.sort_by_key(|e| e.0);
        clear_denominators(&entries)
    }

    /// Adds `f`; returns true if the span grew.
    pub fn insert(&mut self, f: &Polynomial) -> bool {
        if f.is_zero() {
            return false;
        }
        let row = self.row(f);
        if self.echelon.insert(row) {
            self.basis.push(f.clone());
            true
        } else {
            false
        }
    }

    pub fn contains(&mut self, f: &Polynomial) -> bool {
        let row = self.row(f);
        self.echelon.contains(row)
    }
}

/// Adds every polarization image reachable from the current basis.
fn polarize_into(span: &mut SpanTracker, pols: &[Derivation], start: usize, target: Option<usize>) {
    let mut queue: VecDeque<Polynomial> = span.basis()[start..].iter().cloned().collect();
    while let Some(f) = queue.pop_front() {
        if target.is_some_and(|t| span.rank() >= t) {
            return;
        }
        let images: Vec<Polynomial> = pols.par_iter().map(|d| d.apply(&f)).collect();
        for g in images {
            if span.insert(&g) {
                queue.push_back(g);
            }
        }
    }
}

/// Graded dimensions of the closure, indexed by degree `0..=max_degree`.
pub fn polarization_closure(
    arena: &Arena,
    generators: &[Polynomial],
    max_degree: u32,
) -> Result<Vec<usize>> {
    closure(
        arena,
        generators,
        max_degree,
        &all_polarizations(arena),
        None,
    )
}

/// Graded dimensions of the subalgebra generated by `generators` (no polarization).
pub fn subalgebra_dims(
    arena: &Arena,
    generators: &[Polynomial],
    max_degree: u32,
) -> Result<Vec<usize>> {
    closure(arena, generators, max_degree, &[], None)
}

/// Closure of `generators` under products and the degree-preserving operators `pols`.
///
/// `targets[d]`, when given, stops degree `d` early once its rank reaches it.
pub fn closure(
    arena: &Arena,
    generators: &[Polynomial],
    max_degree: u32,
    pols: &[Derivation],
    targets: Option<&[usize]>,
) -> Result<Vec<usize>> {
    let polarize = !pols.is_empty();
    let top = max_degree as usize;
    let mut by_degree: Vec<Vec<&Polynomial>> = vec![Vec::new(); top + 1];
    for g in generators {
        if g.is_zero() {
            continue;
        }
        let d = g.total_degree().ok_or(Error::Inhomogeneous)? as usize;
        if d == 0 {
            continue;
        }
        if d <= top {
            by_degree[d].push(g);
        }
    }
    let target = |d: usize| targets.and_then(|t| t.get(d).copied());
    // Polarization-closed span of the generators of each degree.
    let mut pieces: Vec<SpanTracker> = Vec::with_capacity(top + 1);
    for (d, gens) in by_degree.iter().enumerate() {
        let mut span = SpanTracker::new();
        if d > 0 {
            for g in gens {
                span.insert(g);
            }
            polarize_into(&mut span, pols, 0, None);
        }
        pieces.push(span);
    }
    let table = arena.table();
    let mut levels: Vec<SpanTracker> = Vec::with_capacity(top + 1);
    let mut zero = SpanTracker::new();
    zero.insert(&Polynomial::one(table));
    levels.push(zero);
    let mut dims = vec![1usize];
    for d in 1..=top {
        let mut span = SpanTracker::new();
        let cap = target(d);
        'fill: for a in 1..=d {
            let gens = pieces[a].basis();
            if gens.is_empty() {
                continue;
            }
            let rest = levels[d - a].basis();
            let pairs: Vec<(&Polynomial, &Polynomial)> = gens
                .iter()
                .flat_map(|g| rest.iter().map(move |r| (g, r)))
                .collect();
            for chunk in pairs.chunks(64) {
                let prods: Vec<Polynomial> = chunk.par_iter().map(|(g, r)| *g * *r).collect();
                for p in prods {
                    span.insert(&p);
                    if cap.is_some_and(|t| span.rank() >= t) {
                        break 'fill;
                    }
                }
            }
        }
        // Products of closed pieces are closed; one round confirms the fixpoint.
        if polarize && !cap.is_some_and(|t| span.rank() >= t) {
            loop {
                let before = span.rank();
                polarize_into(&mut span, pols, 0, cap);
                if span.rank() == before {
                    break;
                }
            }
        }
        dims.push(span.rank());
        levels.push(span);
    }
    Ok(dims)
}

/// Optional members of a family's basic set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Member {
    /// `f_{±k}` for `sl`.
    F,
    /// `Ω` for `osp`.
    Omega,
    /// `p_{±k}` for `spe`.
    P,
    /// `q_λ` for `sq`.
    Qlambda,
}

impl Member {
    pub fn name(self) -> &'static str {
        match self {
            Member::F => "f",
            Member::Omega => "omega",
            Member::P => "p",
            Member::Qlambda => "qlambda",
        }
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Member {
    type Err = Error;

    fn from_str(s: &str) -> Result<Member> {
        match s {
            "f" => Ok(Member::F),
            "omega" => Ok(Member::Omega),
            "p" => Ok(Member::P),
            "qlambda" | "q" => Ok(Member::Qlambda),
            _ => Err(Error::Parse(format!("unknown basic-set member {s:?}"))),
        }
    }
}

/// What [`verify_basic_set`] checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub spec: FamilySpec,
    pub copies: CopySpec,
    pub max_degree: u32,
    pub omit: BTreeSet<Member>,
}

impl CheckConfig {
    pub fn new(spec: FamilySpec, copies: CopySpec, max_degree: u32) -> CheckConfig {
        CheckConfig {
            spec,
            copies,
            max_degree,
            omit: BTreeSet::new(),
        }
    }

    pub fn omitting(mut self, member: Member) -> CheckConfig {
        self.omit.insert(member);
        self
    }

    /// Rejects configurations outside the family's reduction or below the
    /// copy counts from which basicness propagates to larger arenas.
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        let (n, m) = (self.spec.n, self.spec.m);
        let CopySpec { k, l, p, q } = self.copies;
        let bad = |msg: String| Err(Error::UnsupportedConfig(msg));
        match self.spec.family {
            Family::Gl | Family::Sl => {
                if k < n || p < n || l < m || q < m {
                    return bad(format!(
                        "{} needs k,p ≥ {n} and l,q ≥ {m}; got copies {}",
                        self.spec.family, self.copies
                    ));
                }
            }
            Family::Osp | Family::Pe | Family::Spe => {
                if k != 0 || l != 0 {
                    return bad(format!(
                        "{} is checked on vector copies only (k = l = 0)",
                        self.spec.family
                    ));
                }
                if p < n || q < m {
                    return bad(format!(
                        "{} needs p ≥ {n} and q ≥ {m}; got copies {}",
                        self.spec.family, self.copies
                    ));
                }
            }
            Family::Q | Family::Sq => {
                if l != 0 || q != 0 {
                    return bad(format!(
                        "{} is checked on even copies only (l = q = 0)",
                        self.spec.family
                    ));
                }
                if k < n || p < n {
                    return bad(format!(
                        "{} needs k,p ≥ {n}; got copies {}",
                        self.spec.family, self.copies
                    ));
                }
            }
        }
        Ok(())
    }
}

/// One degree of a [`GradedReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub degree: u32,
    pub dim_invariants: usize,
    pub dim_closure: usize,
    pub pass: bool,
}

/// Kernel dimensions against closure dimensions, per degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub config: CheckConfig,
    pub rows: Vec<ReportRow>,
    /// Basic-set members left out, with the reason.
    pub notes: Vec<String>,
}

impl GradedReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn first_failure(&self) -> Option<&ReportRow> {
        self.rows.iter().find(|r| !r.pass)
    }
}

/// The basic set of the configured family, restricted to degrees ≤ the cap.
///
/// Returns the generators and notes on members left out.
pub fn basic_set(arena: &Arena, config: &CheckConfig) -> Result<(Vec<Polynomial>, Vec<String>)> {
    let spec = &config.spec;
    let (n, m) = (spec.n, spec.m);
    let cap = config.max_degree;
    let mut gens = Vec::new();
    let mut notes = Vec::new();
    let nt = arena.t_index().len();
    let ns = arena.s_index().len();
    match spec.family {
        Family::Gl | Family::Sl => {
            for t in 0..nt {
                for s in 0..ns {
                    gens.push(invariants::scalar_product(arena, t, s)?);
                }
            }
        }
        Family::Osp | Family::Pe | Family::Spe => {
            for s in 0..ns {
                for t in s..ns {
                    gens.push(invariants::form_inner(arena, spec, s, t)?);
                }
            }
        }
        Family::Q | Family::Sq => {
            for t in 0..nt {
                for s in 0..ns {
                    gens.push(invariants::scalar_product(arena, t, s)?);
                    gens.push(invariants::q_bracket(arena, t, s)?);
                }
            }
        }
    }
    let mut extra = |member: Member,
                     label: String,
                     degree: u32,
                     build: &mut dyn FnMut() -> Result<Polynomial>|
     -> Result<bool> {
        if degree > cap {
            notes.push(format!(
                "{label} (degree {degree}) excluded: above degree cap {cap}"
            ));
            return Ok(false);
        }
        if config.omit.contains(&member) {
            notes.push(format!(
                "{label} (degree {degree}) omitted by configuration"
            ));
            return Ok(true);
        }
        gens.push(build()?);
        Ok(true)
    };
    match spec.family {
        Family::Sl => {
            for k in 1.. {
                let degree = (k * (n + m) + 2 * n * m) as u32;
                let a = extra(Member::F, format!("f_{k}"), degree, &mut || {
                    invariants::f_invariant(arena, k as i64)
                })?;
                let b = extra(Member::F, format!("f_-{k}"), degree, &mut || {
                    invariants::f_invariant(arena, -(k as i64))
                })?;
                if !(a && b) {
                    break;
                }
            }
        }
        Family::Osp => {
            let degree = (n * (m + 1)) as u32;
            extra(Member::Omega, "Omega".into(), degree, &mut || {
                invariants::omega_invariant(arena)
            })?;
        }
        Family::Spe => {
            for k in 1.. {
                let plus = (k * n + n * (n + 1)) as u32;
                let minus = (k * n + n * (n - 1)) as u32;
                let a = extra(Member::P, format!("p_{k}"), plus, &mut || {
                    invariants::p_invariant(arena, k as i64)
                })?;
                let b = extra(Member::P, format!("p_-{k}"), minus, &mut || {
                    invariants::p_invariant(arena, -(k as i64))
                })?;
                if !(a || b) {
                    break;
                }
            }
        }
        Family::Sq => {
            for size in 1.. {
                let degree = 2 * size as u32;
                let parts = strict_partitions(n, size);
                let min_size = n * (n + 1) / 2;
                if size < min_size {
                    continue;
                }
                let mut any = false;
                for lambda in parts {
                    any |= extra(Member::Qlambda, format!("q_{lambda}"), degree, &mut || {
                        invariants::q_lambda(arena, &lambda)
                    })?;
                }
                if !any {
                    break;
                }
            }
        }
        _ => {}
    }
    Ok((gens, notes))
}

/// Derivations of the configured family on the arena.
pub fn family_derivations(arena: &Arena, spec: &FamilySpec) -> Result<Vec<Derivation>> {
    basis_of(spec)?
        .iter()
        .map(|x| g_derivation(arena, x))
        .collect()
}

/// Polarization operators used for a family's closure.
///
/// For `q` and `sq` the arena keeps only even copies; the polarizations that
/// involved odd copies survive as the odd queer polarizations.
pub fn closure_operators(arena: &Arena, family: Family) -> Result<Vec<Derivation>> {
    let mut ops = all_polarizations(arena);
    if matches!(family, Family::Q | Family::Sq) {
        ops.extend(all_queer_polarizations(arena)?);
    }
    Ok(ops)
}

/// Compares the closure of the family's basic set with the full invariant
/// space in every degree up to the cap.
pub fn verify_basic_set(config: &CheckConfig) -> Result<GradedReport> {
    config.validate()?;
    let arena = build_arena(config.spec.n, config.spec.m, config.copies)?;
    let ds = family_derivations(&arena, &config.spec)?;
    let (gens, notes) = basic_set(&arena, config)?;
    for g in &gens {
        if !is_annihilated(&ds, g) {
            return Err(Error::Structural(format!(
                "basic-set member is not invariant: {}",
                g.canonical_text()
            )));
        }
    }
    let dims: Vec<usize> = (0..=config.max_degree)
        .map(|d| invariant_space_for(&arena, &ds, d, None).dimension)
        .collect();
    let ops = closure_operators(&arena, config.spec.family)?;
    let closure_dims = closure(&arena, &gens, config.max_degree, &ops, Some(&dims))?;
    let rows = dims
        .iter()
        .zip(&closure_dims)
        .enumerate()
        .map(|(d, (&dim_invariants, &dim_closure))| ReportRow {
            degree: d as u32,
            dim_invariants,
            dim_closure,
            pass: dim_invariants == dim_closure,
        })
        .collect();
    Ok(GradedReport {
        config: config.clone(),
        rows,
        notes,
    })
}
