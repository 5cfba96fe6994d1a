//! Named invariant polynomials: scalar products, form inner products,
//! block determinants and the family-specific extra generators.
//!
//! Sign conventions that cannot be read off unambiguously are resolved by
//! solving the invariance condition on a small ansatz; the result is frozen in
//! `fixtures/conventions.json` and re-derived by the tests.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::action::{Arena, Derivation, MultiDegree};
use crate::algebras::{form_matrix, Family, FamilySpec, Structure};
use crate::combinatorics::Partition;
use crate::linalg::{clear_denominators, nullspace};
use crate::solver::{family_derivations, invariant_space_for};
use crate::supermatrix::{det_even, QBlockMatrix, SuperMatrix};
use crate::superpoly::{LocalizedElement, Monomial, Parity, Polynomial};
use crate::{Error, Result};

const FIXTURES: &str = include_str!("../fixtures/conventions.json");

/// Sign attached to `B_ij x*_is x*_jt` in a form inner product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormSign {
    /// `(−1)^{p(i)p(s)}`
    RowCopy,
    /// `(−1)^{(p(i)+p(s))p(j)}`: moving the coefficient of `e_i` past `e_j`.
    PastBasis,
}

impl FormSign {
    pub const ALL: [FormSign; 2] = [FormSign::RowCopy, FormSign::PastBasis];

    pub fn negative(self, pi: Parity, pj: Parity, ps: Parity) -> bool {
        match self {
            FormSign::RowCopy => pi.sign_with(ps),
            FormSign::PastBasis => (pi + ps).sign_with(pj),
        }
    }
}

/// How the blocks of `Y` are assembled into a q-matrix for `qet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YRealization {
    /// `(Y₀ Y₁; Y₁ Y₀)`
    Plain,
    /// `(Y₀ Y₁; −Y₁ Y₀)`
    Twisted,
}

/// Conventions resolved by the invariance ansätze.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub version: u32,
    pub form_sign: FormSign,
    /// Coefficients `(a, b)` of `Σ_i (a·x_{tī}x*_{is} + b·x_{ti}x*_{īs})`.
    pub q_bracket: [i64; 2],
    pub y_realization: YRealization,
}

pub fn conventions() -> &'static Conventions {
    static CONV: OnceLock<Conventions> = OnceLock::new();
    CONV.get_or_init(|| serde_json::from_str(FIXTURES).expect("fixtures/conventions.json is valid"))
}

/// Version tag echoed in reports: `v<version>-<sha256 prefix>`.
pub fn fixtures_version() -> String {
    let digest = Sha256::digest(FIXTURES.as_bytes());
    let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
    format!("v{}-{hex}", conventions().version)
}

/// The four block determinants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockDet {
    /// `Δ = det(x_{ti})`, `t` even copies, `i ∈ I₀`.
    Delta,
    /// `Δ* = det(x*_{is})`, `i ∈ I₀`, `s` even copies.
    DeltaStar,
    /// `ω = det(x_{ti})`, `t` odd copies, `i ∈ I₁`.
    Omega,
    /// `ω* = det(x*_{is})`, `i ∈ I₁`, `s` odd copies.
    OmegaStar,
}

/// The products of odd coordinates and of inner products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiProduct {
    /// `∏_{t odd, i ∈ I₀} x_{ti}`
    Pi10,
    /// `∏_{i ∈ I₁, s even} x*_{is}`
    Pi10Star,
    /// `∏_{s ≤ t even} (v_s, v_t)` for the pe form.
    PiPlus,
    /// `∏_{s < t odd} (v_s, v_t)` for the pe form. The diagonal factors
    /// `(v_s̄, v_s̄)` vanish identically, so they are left out.
    PiMinus,
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::BadIndex(what()))
    }
}

/// First `count` positions of the given parity, or an error.
fn first(list: Vec<usize>, count: usize, what: &str) -> Result<Vec<usize>> {
    if list.len() < count {
        return Err(Error::InsufficientCopies(format!(
            "need {count} {what}, have {}",
            list.len()
        )));
    }
    Ok(list[..count].to_vec())
}

fn product(
    table: &std::sync::Arc<crate::superpoly::VarTable>,
    fs: impl IntoIterator<Item = Polynomial>,
) -> Polynomial {
    fs.into_iter()
        .fold(Polynomial::one(table), |acc, f| &acc * &f)
}

/// `(v_t*, v_s) = Σ_i x_{ti} x*_{is}`.
pub fn scalar_product(arena: &Arena, t: usize, s: usize) -> Result<Polynomial> {
    check(t < arena.t_index().len(), || format!("covector copy {t}"))?;
    check(s < arena.s_index().len(), || format!("vector copy {s}"))?;
    let table = arena.table();
    let mut f = Polynomial::zero(table);
    for i in 0..arena.i_index().len() {
        f = &f + &(&arena.x(t, i) * &arena.xs(i, s));
    }
    Ok(f)
}

fn q_arena(arena: &Arena) -> Result<usize> {
    let (n, m) = arena.dim_v();
    if n != m || n == 0 {
        return Err(Error::WrongArena(format!(
            "q needs dim V = (n|n), got ({n}|{m})"
        )));
    }
    Ok(n)
}

/// The odd pairing `[v_t*, v_s]` of two even copies, preserved by `q(n)`.
pub fn q_bracket(arena: &Arena, t: usize, s: usize) -> Result<Polynomial> {
    let [a, b] = conventions().q_bracket;
    q_bracket_with(arena, t, s, a, b)
}

/// `Σ_i (a·x_{tī}x*_{is} + b·x_{ti}x*_{īs})`.
pub fn q_bracket_with(arena: &Arena, t: usize, s: usize, a: i64, b: i64) -> Result<Polynomial> {
    let n = q_arena(arena)?;
    check(
        t < arena.t_index().len() && arena.t_parity(t) == Parity::Even,
        || format!("even covector copy {t}"),
    )?;
    check(
        s < arena.s_index().len() && arena.s_parity(s) == Parity::Even,
        || format!("even vector copy {s}"),
    )?;
    let table = arena.table();
    let (a, b) = (
        BigRational::from_integer(a.into()),
        BigRational::from_integer(b.into()),
    );
    let mut f = Polynomial::zero(table);
    for i in 0..n {
        f.add_scaled_assign(&(&arena.x(t, n + i) * &arena.xs(i, s)), &a)?;
        f.add_scaled_assign(&(&arena.x(t, i) * &arena.xs(n + i, s)), &b)?;
    }
    Ok(f)
}

/// Kernel of `f ↦ (D f)_D` restricted to the span of `candidates`: each
/// returned vector holds integer coefficients of an invariant combination.
pub fn solve_ansatz(ds: &[Derivation], candidates: &[Polynomial]) -> Vec<Vec<BigInt>> {
    let mut rows: std::collections::BTreeMap<(usize, Monomial), Vec<(usize, BigRational)>> =
        Default::default();
    for (j, c) in candidates.iter().enumerate() {
        for (r, d) in ds.iter().enumerate() {
            for (mono, coeff) in d.apply(c).iter() {
                rows.entry((r, mono.clone()))
                    .or_default()
                    .push((j, coeff.clone()));
            }
        }
    }
    nullspace(
        candidates.len(),
        rows.values().map(|r| clear_denominators(r)),
    )
    .into_iter()
    .map(|v| {
        let mut dense = vec![BigInt::zero(); candidates.len()];
        for (j, c) in v {
            dense[j] = c;
        }
        dense
    })
    .collect()
}

/// Solves the q-bracket ansatz against `q(n)`; returns `(a, b)` with the
/// leading coefficient of the pairing made `+1`.
pub fn solve_q_bracket(n: usize) -> Result<[i64; 2]> {
    let arena = crate::action::build_arena(n, n, crate::action::CopySpec::new(1, 0, 1, 0))?;
    let ds = family_derivations(&arena, &FamilySpec::new(Family::Q, n, n)?)?;
    let cands = [
        q_bracket_with(&arena, 0, 0, 1, 0)?,
        q_bracket_with(&arena, 0, 0, 0, 1)?,
    ];
    let kernel = solve_ansatz(&ds, &cands);
    if kernel.len() != 1 {
        return Err(Error::Convention(format!(
            "q-bracket ansatz has a {}-dimensional solution space",
            kernel.len()
        )));
    }
    let to_i64 =
        |c: &BigInt| i64::try_from(c).map_err(|_| Error::Convention("coefficient overflow".into()));
    let (a, b) = (to_i64(&kernel[0][0])?, to_i64(&kernel[0][1])?);
    let f = q_bracket_with(&arena, 0, 0, a, b)?;
    let lead = f
        .leading_term()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(BigRational::one);
    if lead < BigRational::zero() {
        Ok([-a, -b])
    } else {
        Ok([a, b])
    }
}

fn form_of(spec: &FamilySpec) -> Result<crate::algebras::BilinearForm> {
    match form_matrix(spec)? {
        Structure::Form(b) => Ok(b),
        Structure::ComplexStructure(_) => Err(Error::NoForm(spec.family.to_string())),
    }
}

fn check_form_arena(arena: &Arena, spec: &FamilySpec) -> Result<()> {
    if !matches!(spec.family, Family::Osp | Family::Pe | Family::Spe) {
        return Err(Error::NoForm(spec.family.to_string()));
    }
    let c = arena.copies();
    if c.k != 0 || c.l != 0 {
        return Err(Error::WrongArena(
            "form inner products need vector copies only".into(),
        ));
    }
    if arena.dim_v() != (spec.n, spec.m) {
        return Err(Error::WrongArena(format!(
            "arena dim V {:?} does not match {spec}",
            arena.dim_v()
        )));
    }
    Ok(())
}

/// `(v_s, v_t) = Σ_{i,j} ± B_ij x*_{is} x*_{jt}` for the family's form.
pub fn form_inner(arena: &Arena, spec: &FamilySpec, s: usize, t: usize) -> Result<Polynomial> {
    form_inner_with(arena, spec, s, t, conventions().form_sign)
}

pub fn form_inner_with(
    arena: &Arena,
    spec: &FamilySpec,
    s: usize,
    t: usize,
    sign: FormSign,
) -> Result<Polynomial> {
    check_form_arena(arena, spec)?;
    let ns = arena.s_index().len();
    check(s < ns && t < ns, || format!("vector copies ({s}, {t})"))?;
    let b = form_of(spec)?;
    let table = arena.table();
    let dim = arena.i_index().len();
    let mut f = Polynomial::zero(table);
    for i in 0..dim {
        for j in 0..dim {
            let Some(c) = b.matrix.get(i, j).as_constant() else {
                continue;
            };
            if c.is_zero() {
                continue;
            }
            let c = if sign.negative(arena.i_parity(i), arena.i_parity(j), arena.s_parity(s)) {
                -c
            } else {
                c
            };
            f.add_scaled_assign(&(&arena.xs(i, s) * &arena.xs(j, t)), &c)?;
        }
    }
    Ok(f)
}

/// Determinant of one of the four square coordinate blocks.
pub fn block_det(arena: &Arena, which: BlockDet) -> Result<Polynomial> {
    let (n, m) = arena.dim_v();
    let grid: Vec<Vec<Polynomial>> = match which {
        BlockDet::Delta => {
            let ts = first(arena.t_of_parity(Parity::Even), n, "even covector copies")?;
            ts.iter()
                .map(|&t| (0..n).map(|i| arena.x(t, i)).collect())
                .collect()
        }
        BlockDet::DeltaStar => {
            let ss = first(arena.s_of_parity(Parity::Even), n, "even vector copies")?;
            (0..n)
                .map(|i| ss.iter().map(|&s| arena.xs(i, s)).collect())
                .collect()
        }
        BlockDet::Omega => {
            let ts = first(arena.t_of_parity(Parity::Odd), m, "odd covector copies")?;
            ts.iter()
                .map(|&t| (n..n + m).map(|i| arena.x(t, i)).collect())
                .collect()
        }
        BlockDet::OmegaStar => {
            let ss = first(arena.s_of_parity(Parity::Odd), m, "odd vector copies")?;
            (n..n + m)
                .map(|i| ss.iter().map(|&s| arena.xs(i, s)).collect())
                .collect()
        }
    };
    if grid.is_empty() {
        return Ok(Polynomial::one(arena.table()));
    }
    det_even(&grid)
}

fn pe_spec(arena: &Arena) -> Result<FamilySpec> {
    let (n, m) = arena.dim_v();
    if n != m {
        return Err(Error::WrongArena(format!(
            "pe needs dim V = (n|n), got ({n}|{m})"
        )));
    }
    FamilySpec::new(Family::Pe, n, n)
}

/// Ordered products; factor order is lexicographic in the indices.
pub fn pi_product(arena: &Arena, which: PiProduct) -> Result<Polynomial> {
    let (n, m) = arena.dim_v();
    let table = arena.table();
    match which {
        PiProduct::Pi10 => {
            let ts = first(arena.t_of_parity(Parity::Odd), m, "odd covector copies")?;
            Ok(product(
                table,
                ts.iter().flat_map(|&t| (0..n).map(move |i| arena.x(t, i))),
            ))
        }
        PiProduct::Pi10Star => {
            let ss = first(arena.s_of_parity(Parity::Even), n, "even vector copies")?;
            Ok(product(
                table,
                (n..n + m).flat_map(|i| ss.iter().map(move |&s| arena.xs(i, s))),
            ))
        }
        PiProduct::PiPlus | PiProduct::PiMinus => {
            let spec = pe_spec(arena)?;
            let p = if which == PiProduct::PiPlus {
                Parity::Even
            } else {
                Parity::Odd
            };
            let ss = first(
                arena.s_of_parity(p),
                n,
                "vector copies of the required parity",
            )?;
            let mut f = Polynomial::one(table);
            let skip = usize::from(which == PiProduct::PiMinus);
            for (a, &s) in ss.iter().enumerate() {
                for &t in &ss[a + skip..] {
                    f = &f * &form_inner(arena, &spec, s, t)?;
                }
            }
            Ok(f)
        }
    }
}

/// `f_k = Δ*^k ω^k ∏_{t odd, s even} (v_t*, v_s)` and
/// `f_{−k} = Δ^k ω*^k ∏_{t even, s odd} (v_t*, v_s)`.
pub fn f_invariant(arena: &Arena, k: i64) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::BadIndex("f_0 is not defined".into()));
    }
    let (n, m) = arena.dim_v();
    let e = k.unsigned_abs() as u32;
    let (dets, ts, ss) = if k > 0 {
        (
            [BlockDet::DeltaStar, BlockDet::Omega],
            first(arena.t_of_parity(Parity::Odd), m, "odd covector copies")?,
            first(arena.s_of_parity(Parity::Even), n, "even vector copies")?,
        )
    } else {
        (
            [BlockDet::Delta, BlockDet::OmegaStar],
            first(arena.t_of_parity(Parity::Even), n, "even covector copies")?,
            first(arena.s_of_parity(Parity::Odd), m, "odd vector copies")?,
        )
    };
    let mut f = &block_det(arena, dets[0])?.pow(e) * &block_det(arena, dets[1])?.pow(e);
    for &t in &ts {
        for &s in &ss {
            f = &f * &scalar_product(arena, t, s)?;
        }
    }
    Ok(f)
}

/// `p_k = Δ*^k Π⁺` and `p_{−k} = ω*^k Π⁻`.
pub fn p_invariant(arena: &Arena, k: i64) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::BadIndex("p_0 is not defined".into()));
    }
    let c = arena.copies();
    if c.k != 0 || c.l != 0 {
        return Err(Error::WrongArena("p_k needs vector copies only".into()));
    }
    pe_spec(arena)?;
    let e = k.unsigned_abs() as u32;
    let (det, pi) = if k > 0 {
        (BlockDet::DeltaStar, PiProduct::PiPlus)
    } else {
        (BlockDet::OmegaStar, PiProduct::PiMinus)
    };
    Ok(&block_det(arena, det)?.pow(e) * &pi_product(arena, pi)?)
}

/// Weight block of `Ω`: degree `2r+1` in each of the first `n` even vector copies.
pub fn omega_weight(arena: &Arena) -> Result<MultiDegree> {
    let (n, m) = arena.dim_v();
    let ss = first(arena.s_of_parity(Parity::Even), n, "even vector copies")?;
    let mut w = MultiDegree {
        t: vec![0; arena.t_index().len()],
        s: vec![0; arena.s_index().len()],
    };
    for s in ss {
        w.s[s] = m as u32 + 1;
    }
    Ok(w)
}

/// Basis of the `osp`-invariants in the weight block of `Ω`.
pub fn omega_solution_space(arena: &Arena) -> Result<Vec<Polynomial>> {
    let (n, m) = arena.dim_v();
    let c = arena.copies();
    if c.k != 0 || c.l != 0 {
        return Err(Error::WrongArena("Ω needs vector copies only".into()));
    }
    let spec = FamilySpec::new(Family::Osp, n, m)?;
    let ds = family_derivations(arena, &spec)?;
    let w = omega_weight(arena)?;
    Ok(invariant_space_for(arena, &ds, w.total(), Some(&w)).basis)
}

/// The `osp`-invariant square root of `det((v_s, v_t))^{2r+1}`, normalized so
/// that its part free of odd variables is `Δ*^{2r+1}`.
pub fn omega_invariant(arena: &Arena) -> Result<Polynomial> {
    let (_, m) = arena.dim_v();
    let space = omega_solution_space(arena)?;
    if space.len() != 1 {
        return Err(Error::Structural(format!(
            "Ω solution space has dimension {} (expected 1)",
            space.len()
        )));
    }
    let target = block_det(arena, BlockDet::DeltaStar)?.pow(m as u32 + 1);
    let body = space[0].body();
    let (lead, c) = target
        .leading_term()
        .ok_or_else(|| Error::Structural("Δ* vanishes".into()))?;
    let have = body.coeff(lead);
    if have.is_zero() {
        return Err(Error::Structural("Ω has no Δ*^{2r+1} component".into()));
    }
    let omega = space[0].scale(&(c / &have));
    if omega.body() != target {
        return Err(Error::Structural(
            "body of Ω is not a multiple of Δ*^{2r+1}".into(),
        ));
    }
    Ok(omega)
}

/// `det((v_s, v_t))` over the first `n` even vector copies, for the osp form.
pub fn osp_gram_det(arena: &Arena) -> Result<Polynomial> {
    let (n, m) = arena.dim_v();
    let spec = FamilySpec::new(Family::Osp, n, m)?;
    let ss = first(arena.s_of_parity(Parity::Even), n, "even vector copies")?;
    let grid = ss
        .iter()
        .map(|&s| {
            ss.iter()
                .map(|&t| form_inner(arena, &spec, s, t))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    det_even(&grid)
}

fn q_copies(arena: &Arena) -> Result<(usize, Vec<usize>, Vec<usize>)> {
    let n = q_arena(arena)?;
    let c = arena.copies();
    if c.l != 0 || c.q != 0 {
        return Err(Error::WrongArena(
            "q needs even copies only (l = q = 0)".into(),
        ));
    }
    let ts = first(arena.t_of_parity(Parity::Even), n, "even covector copies")?;
    let ss = first(arena.s_of_parity(Parity::Even), n, "even vector copies")?;
    Ok((n, ts, ss))
}

/// `Z₀ = ((v_t*, v_s))`, `Z₁ = ([v_t*, v_s])`.
pub fn z_matrix(arena: &Arena) -> Result<QBlockMatrix> {
    let (_, ts, ss) = q_copies(arena)?;
    let a = ts
        .iter()
        .map(|&t| {
            ss.iter()
                .map(|&s| scalar_product(arena, t, s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let b = ts
        .iter()
        .map(|&t| {
            ss.iter()
                .map(|&s| q_bracket(arena, t, s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    QBlockMatrix::new(a, b)
}

/// `Y₀ = (x*_{is})`, `Y₁ = (x*_{īs})`, rows `i ∈ I₀`, columns even copies.
pub fn y_matrix(arena: &Arena) -> Result<QBlockMatrix> {
    let (n, _, ss) = q_copies(arena)?;
    let a = (0..n)
        .map(|i| ss.iter().map(|&s| arena.xs(i, s)).collect())
        .collect();
    let b = (0..n)
        .map(|i| ss.iter().map(|&s| arena.xs(n + i, s)).collect())
        .collect();
    QBlockMatrix::new(a, b)
}

/// `qet Y` in the configured realization, localized at `det Y₀`.
pub fn qet_y(arena: &Arena) -> Result<LocalizedElement> {
    qet_y_with(arena, conventions().y_realization)
}

pub fn qet_y_with(arena: &Arena, realization: YRealization) -> Result<LocalizedElement> {
    let y = y_matrix(arena)?;
    match realization {
        YRealization::Plain => y.qet(),
        YRealization::Twisted => y.qet_twisted(),
    }
}

/// `∏ qtr(Z^{λ_i})`.
pub fn qtr_power_product(arena: &Arena, lambda: &Partition) -> Result<Polynomial> {
    let z = z_matrix(arena)?.to_supermatrix();
    let table = arena.table();
    let mut f = Polynomial::one(table);
    for &part in lambda.parts() {
        let mut pw: SuperMatrix = z.clone();
        for _ in 1..part {
            pw = pw.matmul(&z)?;
        }
        f = &f * &pw.qtr()?;
    }
    Ok(f)
}

/// `q_λ = qtr(Z^{λ₁})⋯qtr(Z^{λ_n})·qet Y`, certified to be a polynomial.
pub fn q_lambda(arena: &Arena, lambda: &Partition) -> Result<Polynomial> {
    let (n, _, _) = q_copies(arena)?;
    let parts = lambda.parts();
    if parts.len() != n || parts.windows(2).any(|w| w[0] <= w[1]) || parts.contains(&0) {
        return Err(Error::BadIndex(format!(
            "q_λ needs a strict partition with {n} parts, got {lambda}"
        )));
    }
    let prefactor = qtr_power_product(arena, lambda)?;
    let value = qet_y(arena)?.mul_poly(&prefactor)?;
    let exponent = value.exponent();
    value.into_polynomial().map_err(|_| {
        Error::PolynomialityViolation(format!("q_{lambda} keeps a denominator det(Y₀)^{exponent}"))
    })
}

/// A named invariant with its parameters.
#[derive(Clone, Debug)]
pub struct NamedInvariant {
    pub name: String,
    pub value: Polynomial,
}

impl fmt::Display for NamedInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.name, self.value.canonical_text())
    }
}

#[cfg(test)]
mod tests;
