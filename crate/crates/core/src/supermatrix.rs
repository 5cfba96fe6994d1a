//! Supermatrices with polynomial entries.
//!
//! Only standard formats `(even^a | odd^b)` are built. A matrix is
//! homogeneous of parity `p` when entry `(i, j)` has parity `p_i + p_j + p`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::superpoly::{LocalizedElement, Parity, Polynomial, VarTable};

/// Ordered parities of the rows (and columns).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Format {
    parities: Vec<Parity>,
}

impl Format {
    pub fn standard(even: usize, odd: usize) -> Format {
        let mut parities = vec![Parity::Even; even];
        parities.extend(std::iter::repeat_n(Parity::Odd, odd));
        Format { parities }
    }

    pub fn len(&self) -> usize {
        self.parities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parities.is_empty()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn even_count(&self) -> usize {
        self.parities.iter().filter(|p| !p.is_odd()).count()
    }

    pub fn odd_count(&self) -> usize {
        self.len() - self.even_count()
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }
}

/// Square polynomial matrix indexed by a [`Format`].
#[derive(Clone, PartialEq, Eq)]
pub struct SuperMatrix {
    format: Format,
    table: Arc<VarTable>,
    entries: Vec<Polynomial>,
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        writeln!(f, "SuperMatrix {:?}", self.format.parities)?;
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| self.get(i, j).canonical_text()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl SuperMatrix {
    pub fn zeros(format: &Format, table: &Arc<VarTable>) -> SuperMatrix {
        let n = format.len();
        SuperMatrix {
            format: format.clone(),
            table: table.clone(),
            entries: vec![Polynomial::zero(table); n * n],
        }
    }

    pub fn identity(format: &Format, table: &Arc<VarTable>) -> SuperMatrix {
        SuperMatrix::from_fn(format, table, |i, j| {
            if i == j {
                Polynomial::one(table)
            } else {
                Polynomial::zero(table)
            }
        })
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(format: &Format, table: &Arc<VarTable>, i: usize, j: usize) -> SuperMatrix {
        let mut m = SuperMatrix::zeros(format, table);
        m.set(i, j, Polynomial::one(table));
        m
    }

    pub fn from_fn(
        format: &Format,
        table: &Arc<VarTable>,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> SuperMatrix {
        let n = format.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                assert!(
                    Arc::ptr_eq(e.table(), table) || **e.table() == **table,
                    "entry over a foreign table"
                );
                entries.push(e);
            }
        }
        SuperMatrix {
            format: format.clone(),
            table: table.clone(),
            entries,
        }
    }

    /// Constant matrix from rational entries.
    pub fn from_rationals(
        format: &Format,
        table: &Arc<VarTable>,
        rows: &[Vec<BigRational>],
    ) -> SuperMatrix {
        SuperMatrix::from_fn(format, table, |i, j| {
            Polynomial::constant(table, rows[i][j].clone())
        })
    }

    /// Constant matrix from integer entries.
    pub fn from_ints(format: &Format, table: &Arc<VarTable>, rows: &[Vec<i64>]) -> SuperMatrix {
        SuperMatrix::from_fn(format, table, |i, j| {
            Polynomial::from_int(table, rows[i][j])
        })
    }

    pub fn format(&self) -> &Format {
        &self.format
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn size(&self) -> usize {
        self.format.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Polynomial) {
        let n = self.size();
        self.entries[i * n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Parity of a homogeneous matrix; the zero matrix counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut found: Option<Parity> = None;
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let pe = e.parity()?;
                let p = pe + self.format.parity(i) + self.format.parity(j);
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    fn homogeneous_parity(&self) -> Result<Parity> {
        self.parity().ok_or(Error::NotHomogeneous)
    }

    fn check_format(&self, other: &SuperMatrix) -> Result<()> {
        if self.format != other.format {
            return Err(Error::FormatMismatch(format!(
                "{:?} vs {:?}",
                self.format.parities, other.format.parities
            )));
        }
        if !(Arc::ptr_eq(&self.table, &other.table) || *self.table == *other.table) {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }

    pub fn matmul(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check_format(other)?;
        let n = self.size();
        let mut out = SuperMatrix::zeros(&self.format, &self.table);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Polynomial::zero(&self.table);
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_scaled_assign(&(a * b), &BigRational::one())?;
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `self + c·other`.
    pub fn matadd(&self, other: &SuperMatrix, c: &BigRational) -> Result<SuperMatrix> {
        self.check_format(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add_scaled(b, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix {
            format: self.format.clone(),
            table: self.table.clone(),
            entries,
        })
    }

    pub fn scale(&self, c: &BigRational) -> SuperMatrix {
        SuperMatrix {
            format: self.format.clone(),
            table: self.table.clone(),
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Entrywise right multiplication by a scalar polynomial: `(X·s)_{ij} = X_{ij} s`.
    pub fn mul_scalar_right(&self, s: &Polynomial) -> SuperMatrix {
        SuperMatrix {
            format: self.format.clone(),
            table: self.table.clone(),
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// Same constant matrix over another table; fails if an entry is not constant.
    pub fn retable(&self, table: &Arc<VarTable>) -> Result<SuperMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                e.as_constant()
                    .map(|c| Polynomial::constant(table, c))
                    .ok_or_else(|| Error::Structural("retable needs constant entries".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix {
            format: self.format.clone(),
            table: table.clone(),
            entries,
        })
    }

    /// `(X^{st})_{ij} = (−1)^{(p_i+p_j)(p_i+p(X))} X_{ji}`.
    pub fn supertranspose(&self) -> Result<SuperMatrix> {
        let p = self.homogeneous_parity()?;
        let f = &self.format;
        Ok(SuperMatrix::from_fn(&self.format, &self.table, |i, j| {
            let (pi, pj) = (f.parity(i), f.parity(j));
            let e = self.get(j, i);
            if (pi + pj).sign_with(pi + p) {
                -e
            } else {
                e.clone()
            }
        }))
    }

    /// Supertrace `Σ (−1)^{p_i} X_{ii}`.
    pub fn str(&self) -> Polynomial {
        let mut acc = Polynomial::zero(&self.table);
        for i in 0..self.size() {
            let c = if self.format.parity(i).is_odd() {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            acc.add_scaled_assign(self.get(i, i), &c)
                .expect("same table");
        }
        acc
    }

    /// Ordinary trace.
    pub fn tr(&self) -> Polynomial {
        let mut acc = Polynomial::zero(&self.table);
        for i in 0..self.size() {
            acc.add_scaled_assign(self.get(i, i), &BigRational::one())
                .expect("same table");
        }
        acc
    }

    /// Queer trace of a q-shaped matrix `(A B; B A)`: `tr B`.
    pub fn qtr(&self) -> Result<Polynomial> {
        Ok(QBlockMatrix::from_supermatrix(self)?.b_trace())
    }

    /// Supercommutator `XY − (−1)^{p(X)p(Y)} YX`.
    pub fn bracket(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        let px = self.homogeneous_parity()?;
        let py = other.homogeneous_parity()?;
        let xy = self.matmul(other)?;
        let yx = other.matmul(self)?;
        let c = if px.sign_with(py) {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        xy.matadd(&yx, &c)
    }

    /// Block `rows × cols` as a plain grid.
    pub fn block(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Vec<Vec<Polynomial>> {
        rows.map(|i| cols.clone().map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Exponential of a nilpotent matrix by its terminating series.
    pub fn exp_nilpotent(&self) -> Result<SuperMatrix> {
        let bound = self.size() * (self.table.odd_count() + 1) + 1;
        let mut acc = SuperMatrix::identity(&self.format, &self.table);
        let mut power = acc.clone();
        let mut factorial = BigInt::one();
        for k in 1..=bound {
            power = power.matmul(self)?;
            if power.is_zero() {
                return Ok(acc);
            }
            factorial *= BigInt::from(k);
            acc = acc.matadd(&power, &BigRational::new(BigInt::one(), factorial.clone()))?;
        }
        Err(Error::NonTerminating { bound })
    }

    /// Berezinian `det(A − B D⁻¹ C) / det(D)` of an even matrix.
    ///
    /// Computed as `det(det(D)·A − B adj(D) C) / det(D)^{a+1}`, which keeps
    /// every intermediate polynomial.
    pub fn berezinian(&self) -> Result<LocalizedElement> {
        if self.homogeneous_parity()? != Parity::Even {
            return Err(Error::NotHomogeneous);
        }
        let a = self.format.even_count();
        let n = self.size();
        let am = self.block(0..a, 0..a);
        let bm = self.block(0..a, a..n);
        let cm = self.block(a..n, 0..a);
        let dm = self.block(a..n, a..n);
        let det_d = det_even(&dm)?;
        if det_d.body().is_zero() {
            return Err(Error::NonInvertible("odd-odd block".into()));
        }
        let adj_d = adjugate(&dm)?;
        let bdc = grid_mul(&grid_mul(&bm, &adj_d, &self.table), &cm, &self.table);
        let shifted: Vec<Vec<Polynomial>> = (0..a)
            .map(|i| (0..a).map(|j| &(&det_d * &am[i][j]) - &bdc[i][j]).collect())
            .collect();
        let num = det_even(&shifted)?;
        LocalizedElement::new(num, det_d, a as u32 + 1)
    }
}

/// Product of two plain grids.
pub fn grid_mul(
    a: &[Vec<Polynomial>],
    b: &[Vec<Polynomial>],
    table: &Arc<VarTable>,
) -> Vec<Vec<Polynomial>> {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map(Vec::len).unwrap_or(0);
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = Polynomial::zero(table);
                    for k in 0..inner {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant of a square grid of even (hence commuting) polynomials.
pub fn det_even(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !e.is_homogeneous_of(Parity::Even) {
                return Err(Error::OddEntry { row: i, col: j });
            }
        }
    }
    Ok(det_unchecked(m))
}

fn det_unchecked(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    assert!(
        n > 0,
        "empty grid has no table; handle the 0×0 case at the call site"
    );
    if n == 1 {
        return m[0][0].clone();
    }
    let table = m[0][0].table().clone();
    let mut acc = Polynomial::zero(&table);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor = minor(m, 0, j);
        let t = &m[0][j] * &det_unchecked(&minor);
        let c = if j % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        acc.add_scaled_assign(&t, &c).expect("same table");
    }
    acc
}

fn minor(m: &[Vec<Polynomial>], row: usize, col: usize) -> Vec<Vec<Polynomial>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Adjugate of a square grid of even polynomials: `adj(M)·M = det(M)·1`.
pub fn adjugate(m: &[Vec<Polynomial>]) -> Result<Vec<Vec<Polynomial>>> {
    det_even(m)?;
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let table = m[0][0].table().clone();
    if n == 1 {
        return Ok(vec![vec![Polynomial::one(&table)]]);
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = det_unchecked(&minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect())
}

/// A q-shaped matrix `(A B; B A)` of format `(n|n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBlockMatrix {
    pub a: Vec<Vec<Polynomial>>,
    pub b: Vec<Vec<Polynomial>>,
}

impl QBlockMatrix {
    pub fn new(a: Vec<Vec<Polynomial>>, b: Vec<Vec<Polynomial>>) -> Result<QBlockMatrix> {
        let n = a.len();
        if n == 0 || b.len() != n || a.iter().chain(&b).any(|r| r.len() != n) {
            return Err(Error::NotQShaped);
        }
        Ok(QBlockMatrix { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn table(&self) -> &Arc<VarTable> {
        self.a[0][0].table()
    }

    pub fn from_supermatrix(m: &SuperMatrix) -> Result<QBlockMatrix> {
        let size = m.size();
        let n = m.format().even_count();
        if size != 2 * n || n == 0 {
            return Err(Error::NotQShaped);
        }
        for i in 0..n {
            for j in 0..n {
                if m.get(i, j) != m.get(i + n, j + n) || m.get(i, j + n) != m.get(i + n, j) {
                    return Err(Error::NotQShaped);
                }
            }
        }
        Ok(QBlockMatrix {
            a: m.block(0..n, 0..n),
            b: m.block(0..n, n..2 * n),
        })
    }

    pub fn to_supermatrix(&self) -> SuperMatrix {
        let n = self.n();
        let format = Format::standard(n, n);
        SuperMatrix::from_fn(&format, self.table(), |i, j| {
            let block = if (i < n) == (j < n) { &self.a } else { &self.b };
            block[i % n][j % n].clone()
        })
    }

    pub fn b_trace(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.table());
        for i in 0..self.n() {
            acc = &acc + &self.b[i][i];
        }
        acc
    }

    pub fn qtr(&self) -> Polynomial {
        self.b_trace()
    }

    /// Queer determinant `Σ_k tr((A⁻¹B)^{2k+1}) / (2k+1)`, localized at `det A`.
    ///
    /// This is `qtr ∘ log`: writing the matrix as `diag(A, A)·(1 + N)` with
    /// `N = (0 C; C 0)`, `C = A⁻¹B`, the odd powers of `N` carry `C^{2k+1}`
    /// off the diagonal with coefficient `+1/(2k+1)`.
    pub fn qet(&self) -> Result<LocalizedElement> {
        self.qet_series(false)
    }

    /// Queer determinant of the twisted matrix `(A B; −B A)` built from the
    /// same blocks: `Σ_k (−1)^k tr((A⁻¹B)^{2k+1}) / (2k+1)`.
    ///
    /// Twisted matrices form the other realization of `q(n)` (the one that
    /// acts on dual coordinates); here `N² = −C²`, hence the alternating sign.
    /// This series is additive on products of twisted matrices, not of
    /// `(A B; B A)` ones.
    pub fn qet_twisted(&self) -> Result<LocalizedElement> {
        self.qet_series(true)
    }

    /// The twisted matrix `(A B; −B A)`.
    pub fn to_twisted_supermatrix(&self) -> SuperMatrix {
        let n = self.n();
        let format = Format::standard(n, n);
        SuperMatrix::from_fn(&format, self.table(), |i, j| match (i < n, j < n) {
            (true, true) | (false, false) => self.a[i % n][j % n].clone(),
            (true, false) => self.b[i][j - n].clone(),
            (false, true) => -&self.b[i - n][j],
        })
    }

    /// Reads `(A B; −B A)` back into its blocks.
    pub fn from_twisted_supermatrix(m: &SuperMatrix) -> Result<QBlockMatrix> {
        let size = m.size();
        let n = m.format().even_count();
        if size != 2 * n || n == 0 {
            return Err(Error::NotQShaped);
        }
        for i in 0..n {
            for j in 0..n {
                if m.get(i, j) != m.get(i + n, j + n) || *m.get(i, j + n) != -m.get(i + n, j) {
                    return Err(Error::NotQShaped);
                }
            }
        }
        Ok(QBlockMatrix {
            a: m.block(0..n, 0..n),
            b: m.block(0..n, n..2 * n),
        })
    }

    fn qet_series(&self, twisted: bool) -> Result<LocalizedElement> {
        let table = self.table().clone();
        let det_a = det_even(&self.a)?;
        if det_a.is_zero() {
            return Err(Error::NonInvertible("even block of a q-matrix".into()));
        }
        for row in &self.b {
            for e in row {
                if !e.is_homogeneous_of(Parity::Odd) {
                    return Err(Error::NotQShaped);
                }
            }
        }
        let c = grid_mul(&adjugate(&self.a)?, &self.b, &table);
        let bound = self.n() * (table.odd_count() + 1) + 2;
        // Collect tr((adj A · B)^{j}) for odd j until the power vanishes.
        let mut traces = Vec::new();
        let mut power = c.clone();
        let mut j = 1usize;
        loop {
            if power.iter().all(|r| r.iter().all(Polynomial::is_zero)) {
                break;
            }
            if j > bound {
                return Err(Error::NonTerminating { bound });
            }
            if j % 2 == 1 {
                let mut tr = Polynomial::zero(&table);
                for (i, row) in power.iter().enumerate() {
                    tr = &tr + &row[i];
                }
                traces.push((j, tr));
            }
            power = grid_mul(&power, &c, &table);
            j += 1;
        }
        let top = traces.last().map(|(j, _)| *j as u32).unwrap_or(0);
        let mut num = Polynomial::zero(&table);
        for (j, tr) in &traces {
            let k = (j - 1) / 2;
            let mut coeff = BigRational::new(BigInt::one(), BigInt::from(*j));
            if twisted && k % 2 == 1 {
                coeff = -coeff;
            }
            num.add_scaled_assign(&(tr * &det_a.pow(top - *j as u32)), &coeff)?;
        }
        if num.is_zero() {
            return LocalizedElement::new(num, det_a, 0);
        }
        LocalizedElement::new(num, det_a, top)
    }
}

/// Constant rational matrix helpers used across the crate.
pub fn rational_grid(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect()
        })
        .collect()
}

/// True if every entry is zero.
pub fn grid_is_zero(g: &[Vec<Polynomial>]) -> bool {
    g.iter().all(|r| r.iter().all(Polynomial::is_zero))
}
