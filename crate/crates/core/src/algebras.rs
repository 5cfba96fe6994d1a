//! Bases, forms and membership tests for the classical matrix Lie superalgebras.
//!
//! Every family is carved out of `gl(n|m)` by linear conditions on each
//! parity part: a preserved form for `osp` and `pe`, the supertrace for
//! `sl` and `spe`, commuting with the odd complex structure `J` for `q`,
//! plus the queer trace for `sq`. Bases are the integer kernel vectors of
//! those conditions.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::supermatrix::{Format, SuperMatrix};
use crate::superpoly::{rat, Parity, Polynomial, VarTable};

/// Table with no variables; constant matrices live over it.
pub fn constants() -> Arc<VarTable> {
    static TABLE: OnceLock<Arc<VarTable>> = OnceLock::new();
    TABLE.get_or_init(|| VarTable::grassmann(0)).clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl,
    Sl,
    Osp,
    Pe,
    Spe,
    Q,
    Sq,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Gl,
        Family::Sl,
        Family::Osp,
        Family::Pe,
        Family::Spe,
        Family::Q,
        Family::Sq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::Osp => "osp",
            Family::Pe => "pe",
            Family::Spe => "spe",
            Family::Q => "q",
            Family::Sq => "sq",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidDims(format!("unknown family {s:?}")))
    }
}

/// A family together with the superdimension `(n, m)` of its standard module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, m: usize) -> Result<FamilySpec> {
        let spec = FamilySpec { family, n, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n + self.m == 0 {
            return Err(Error::InvalidDims("dimension (0|0)".into()));
        }
        match self.family {
            Family::Osp if !self.m.is_multiple_of(2) => Err(Error::InvalidDims(format!(
                "osp needs even m, got {}",
                self.m
            ))),
            Family::Pe | Family::Spe | Family::Q | Family::Sq if self.m != self.n => {
                Err(Error::InvalidDims(format!(
                    "{} needs n = m, got ({}|{})",
                    self.family, self.n, self.m
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn format(&self) -> Format {
        Format::standard(self.n, self.m)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Pe | Family::Spe | Family::Q | Family::Sq => {
                write!(f, "{}({})", self.family, self.n)
            }
            _ => write!(f, "{}({}|{})", self.family, self.n, self.m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// Symmetric on the even part, skew on the odd part.
    Supersymmetric,
    /// Odd form pairing `V₀` with `V₁` symmetrically.
    OddSymmetric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub matrix: SuperMatrix,
    pub parity: Parity,
    pub symmetry: Symmetry,
}

/// The constant structure a family preserves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Form(BilinearForm),
    /// Odd complex structure `J` with `J² = −1`.
    ComplexStructure(SuperMatrix),
}

fn osp_form(n: usize, m: usize) -> SuperMatrix {
    let f = Format::standard(n, m);
    let t = constants();
    SuperMatrix::from_fn(&f, &t, |i, j| {
        let v = if i < n && j < n {
            i64::from(i + j == n - 1)
        } else if i >= n && j >= n {
            let (a, b) = (i - n, j - n);
            let r = m / 2;
            if a < r && b == a + r {
                1
            } else if a >= r && b + r == a {
                -1
            } else {
                0
            }
        } else {
            0
        };
        Polynomial::from_int(&t, v)
    })
}

/// `(0 1; 1 0)` in blocks: pairs `e_i` with `e_ī`.
fn pe_form(n: usize) -> SuperMatrix {
    let f = Format::standard(n, n);
    let t = constants();
    SuperMatrix::from_fn(&f, &t, |i, j| {
        Polynomial::from_int(&t, i64::from(i % n == j % n && (i < n) != (j < n)))
    })
}

/// `J_{2n} = (0 1; −1 0)` in blocks.
fn q_structure(n: usize) -> SuperMatrix {
    let f = Format::standard(n, n);
    let t = constants();
    SuperMatrix::from_fn(&f, &t, |i, j| {
        let v = if i % n != j % n || (i < n) == (j < n) {
            0
        } else if i < n {
            1
        } else {
            -1
        };
        Polynomial::from_int(&t, v)
    })
}

/// The form (or complex structure) preserved by the family.
pub fn form_matrix(spec: &FamilySpec) -> Result<Structure> {
    spec.validate()?;
    match spec.family {
        Family::Osp => Ok(Structure::Form(BilinearForm {
            matrix: osp_form(spec.n, spec.m),
            parity: Parity::Even,
            symmetry: Symmetry::Supersymmetric,
        })),
        Family::Pe | Family::Spe => Ok(Structure::Form(BilinearForm {
            matrix: pe_form(spec.n),
            parity: Parity::Odd,
            symmetry: Symmetry::OddSymmetric,
        })),
        Family::Q | Family::Sq => Ok(Structure::ComplexStructure(q_structure(spec.n))),
        Family::Gl | Family::Sl => Err(Error::NoForm(spec.family.to_string())),
    }
}

/// `X^{st} B + (−1)^{p(X)p(B)} B X = 0`; false for inhomogeneous `X`.
pub fn preserves_form(x: &SuperMatrix, b: &BilinearForm) -> bool {
    let Some(px) = x.parity() else { return false };
    let Ok(st) = x.supertranspose() else {
        return false;
    };
    let lhs = st.matmul(&b.matrix).expect("same format");
    let rhs = b.matrix.matmul(x).expect("same format");
    let c = if px.sign_with(b.parity) {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    lhs.matadd(&rhs, &c).expect("same format").is_zero()
}

/// Values of the linear conditions cutting the family out of `gl`, on a
/// matrix of parity `p`. The matrix lies in the family iff all vanish.
fn conditions(spec: &FamilySpec, x: &SuperMatrix, p: Parity) -> Vec<BigRational> {
    fn push_matrix(m: &SuperMatrix, out: &mut Vec<BigRational>) {
        let n = m.size();
        for i in 0..n {
            for j in 0..n {
                out.push(m.get(i, j).constant_term());
            }
        }
    }
    let mut out = Vec::new();
    match form_matrix(spec) {
        Ok(Structure::Form(b)) => {
            let st = transpose_with_parity(x, p);
            let lhs = st.matmul(&b.matrix).expect("same format");
            let rhs = b.matrix.matmul(x).expect("same format");
            let c = if p.sign_with(b.parity) {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            push_matrix(&lhs.matadd(&rhs, &c).expect("same format"), &mut out);
        }
        Ok(Structure::ComplexStructure(j)) => {
            let xj = x.matmul(&j).expect("same format");
            let jx = j.matmul(x).expect("same format");
            let c = if p.is_odd() {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            push_matrix(&xj.matadd(&jx, &c).expect("same format"), &mut out);
        }
        Err(_) => {}
    }
    match spec.family {
        Family::Sl | Family::Spe => out.push(x.str().constant_term()),
        Family::Sq => {
            let n = spec.n;
            let mut tr = BigRational::zero();
            for i in 0..n {
                tr += x.get(i, n + i).constant_term();
            }
            out.push(tr);
        }
        _ => {}
    }
    out
}

/// Supertranspose of a matrix declared to have parity `p` (entries are constants,
/// so declared parity is the only parity information).
fn transpose_with_parity(x: &SuperMatrix, p: Parity) -> SuperMatrix {
    let f = x.format().clone();
    SuperMatrix::from_fn(&f, x.table(), |i, j| {
        let (pi, pj) = (f.parity(i), f.parity(j));
        let e = x.get(j, i);
        if (pi + pj).sign_with(pi + p) {
            -e
        } else {
            e.clone()
        }
    })
}

fn positions(format: &Format, p: Parity) -> Vec<(usize, usize)> {
    let n = format.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| format.parity(i) + format.parity(j) == p)
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum RootClass {
    Cartan,
    Positive,
    Negative,
    Odd,
}

fn classify(x: &SuperMatrix, p: Parity) -> RootClass {
    if p.is_odd() {
        return RootClass::Odd;
    }
    let n = x.size();
    let support: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !x.get(i, j).is_zero())
        .collect();
    if support.iter().all(|&(i, j)| i == j) {
        RootClass::Cartan
    } else {
        let &(i, j) = support
            .iter()
            .find(|&&(i, j)| i != j)
            .expect("off-diagonal entry");
        if i < j {
            RootClass::Positive
        } else {
            RootClass::Negative
        }
    }
}

/// A basis of the family: Cartan elements, positive and negative even root
/// vectors, then odd elements; integer entries.
pub fn basis_of(spec: &FamilySpec) -> Result<Vec<SuperMatrix>> {
    spec.validate()?;
    let format = spec.format();
    let t = constants();
    let mut tagged = Vec::new();
    for p in [Parity::Even, Parity::Odd] {
        let pos = positions(&format, p);
        let columns: Vec<Vec<BigRational>> = pos
            .iter()
            .map(|&(i, j)| conditions(spec, &SuperMatrix::unit(&format, &t, i, j), p))
            .collect();
        let nrows = columns.first().map(Vec::len).unwrap_or(0);
        let rows: Vec<SparseRow> = (0..nrows)
            .map(|r| {
                let row: Vec<(usize, BigRational)> = columns
                    .iter()
                    .enumerate()
                    .map(|(k, col)| (k, col[r].clone()))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                linalg::clear_denominators(&row)
            })
            .collect();
        for v in linalg::nullspace(pos.len(), rows) {
            let mut x = SuperMatrix::zeros(&format, &t);
            for (k, c) in v {
                let (i, j) = pos[k];
                x.set(i, j, Polynomial::constant(&t, BigRational::from_integer(c)));
            }
            tagged.push((classify(&x, p), x));
        }
    }
    tagged.sort_by_key(|(class, _)| *class);
    Ok(tagged.into_iter().map(|(_, x)| x).collect())
}

/// True if `x` is parity-homogeneous and satisfies the family's conditions.
pub fn is_member(spec: &FamilySpec, x: &SuperMatrix) -> bool {
    if x.format() != &spec.format() {
        return false;
    }
    let Some(p) = x.parity() else { return false };
    if !x.table().is_empty() {
        return false;
    }
    conditions(spec, x, p).iter().all(Zero::is_zero)
}

/// The odd element `F = (0 1/n; 1/n 0)` of `q(n)` with `qtr F = 1`.
pub fn q_complement_f(n: usize) -> SuperMatrix {
    let f = Format::standard(n, n);
    let t = constants();
    SuperMatrix::from_fn(&f, &t, |i, j| {
        if i % n == j % n && (i < n) != (j < n) {
            Polynomial::constant(&t, rat(1, n as i64))
        } else {
            Polynomial::zero(&t)
        }
    })
}

/// Flattens a constant matrix into a sparse integer row (for rank tests).
pub fn as_row(x: &SuperMatrix) -> SparseRow {
    let n = x.size();
    let row: Vec<(usize, BigRational)> = (0..n * n)
        .map(|k| (k, x.get(k / n, k % n).constant_term()))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    linalg::clear_denominators(&row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, n: usize, m: usize) -> FamilySpec {
        FamilySpec::new(f, n, m).unwrap()
    }

    fn form(s: &FamilySpec) -> BilinearForm {
        match form_matrix(s).unwrap() {
            Structure::Form(b) => b,
            Structure::ComplexStructure(_) => panic!("expected a form"),
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(basis_of(&spec(Family::Gl, 1, 1)).unwrap().len(), 4);
        for n in 1..=3 {
            assert_eq!(basis_of(&spec(Family::Q, n, n)).unwrap().len(), 2 * n * n);
            assert_eq!(
                basis_of(&spec(Family::Sq, n, n)).unwrap().len(),
                2 * n * n - 1
            );
            let pe = n * n + n * (n - 1) / 2 + n * (n + 1) / 2;
            assert_eq!(basis_of(&spec(Family::Pe, n, n)).unwrap().len(), pe);
            assert_eq!(basis_of(&spec(Family::Spe, n, n)).unwrap().len(), pe - 1);
        }
        assert_eq!(basis_of(&spec(Family::Osp, 1, 2)).unwrap().len(), 5);
        assert_eq!(basis_of(&spec(Family::Osp, 2, 2)).unwrap().len(), 8);
        assert_eq!(basis_of(&spec(Family::Osp, 3, 0)).unwrap().len(), 3);
    }

    #[test]
    fn sl_drops_one_dimension_off_the_diagonal() {
        for (n, m) in [(1, 0), (2, 1), (1, 2), (3, 1)] {
            let gl = basis_of(&spec(Family::Gl, n, m)).unwrap().len();
            let sl = basis_of(&spec(Family::Sl, n, m)).unwrap();
            assert_eq!(sl.len(), gl - 1);
            assert!(sl.iter().all(|x| x.str().is_zero()));
        }
    }

    #[test]
    fn forms() {
        let osp = form(&spec(Family::Osp, 1, 2));
        let t = constants();
        let expected = SuperMatrix::from_ints(
            &Format::standard(1, 2),
            &t,
            &[vec![1, 0, 0], vec![0, 0, 1], vec![0, -1, 0]],
        );
        assert_eq!(osp.matrix, expected);
        let pe = form(&spec(Family::Pe, 1, 1));
        assert_eq!(pe.parity, Parity::Odd);
        assert_eq!(
            pe.matrix,
            SuperMatrix::from_ints(&Format::standard(1, 1), &t, &[vec![0, 1], vec![1, 0]])
        );
        let Structure::ComplexStructure(j) = form_matrix(&spec(Family::Q, 2, 2)).unwrap() else {
            panic!()
        };
        let expected = SuperMatrix::from_ints(
            &Format::standard(2, 2),
            &t,
            &[
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![-1, 0, 0, 0],
                vec![0, -1, 0, 0],
            ],
        );
        assert_eq!(j, expected);
        let minus_one =
            SuperMatrix::identity(&Format::standard(2, 2), &t).scale(&-BigRational::one());
        assert_eq!(j.matmul(&j).unwrap(), minus_one);
        assert!(matches!(
            form_matrix(&spec(Family::Gl, 1, 1)),
            Err(Error::NoForm(_))
        ));
    }

    #[test]
    fn invalid_dims() {
        assert!(FamilySpec::new(Family::Osp, 1, 1).is_err());
        assert!(FamilySpec::new(Family::Pe, 1, 2).is_err());
        assert!(FamilySpec::new(Family::Gl, 0, 0).is_err());
        assert!("gl".parse::<Family>().is_ok() && "xyz".parse::<Family>().is_err());
    }

    #[test]
    fn form_preservation() {
        for s in [
            spec(Family::Osp, 1, 2),
            spec(Family::Osp, 2, 2),
            spec(Family::Pe, 2, 2),
            spec(Family::Spe, 2, 2),
        ] {
            let b = form(&s);
            let basis = basis_of(&s).unwrap();
            assert!(basis.iter().all(|x| preserves_form(x, &b)), "{s}");
            let gl = basis_of(&spec(Family::Gl, s.n, s.m)).unwrap();
            assert!(gl.iter().any(|x| !preserves_form(x, &b)), "{s}");
        }
        let s = spec(Family::Osp, 1, 2);
        let e11 = SuperMatrix::unit(&s.format(), &constants(), 0, 0);
        assert!(!preserves_form(&e11, &form(&s)));
        assert!(preserves_form(
            &SuperMatrix::zeros(&s.format(), &constants()),
            &form(&s)
        ));
    }

    #[test]
    fn q_commutes_with_j() {
        for n in 1..=3 {
            let s = spec(Family::Q, n, n);
            let Structure::ComplexStructure(j) = form_matrix(&s).unwrap() else {
                panic!()
            };
            for x in basis_of(&s).unwrap() {
                assert!(x.bracket(&j).unwrap().is_zero());
                let a = x.block(0..n, 0..n);
                assert_eq!(a, x.block(n..2 * n, n..2 * n));
                assert_eq!(x.block(0..n, n..2 * n), x.block(n..2 * n, 0..n));
            }
        }
    }

    #[test]
    fn complement_of_sq() {
        for n in 1..=3 {
            let f = q_complement_f(n);
            assert_eq!(f.qtr().unwrap(), Polynomial::one(&constants()));
            assert!(is_member(&spec(Family::Q, n, n), &f));
            assert!(!is_member(&spec(Family::Sq, n, n), &f));
            let mut rows: Vec<SparseRow> = basis_of(&spec(Family::Sq, n, n))
                .unwrap()
                .iter()
                .map(as_row)
                .collect();
            rows.push(as_row(&f));
            assert_eq!(linalg::rank(rows), 2 * n * n);
        }
    }

    #[test]
    fn bases_are_closed_under_bracket() {
        let specs = [
            spec(Family::Gl, 1, 1),
            spec(Family::Sl, 2, 1),
            spec(Family::Osp, 1, 2),
            spec(Family::Osp, 2, 2),
            spec(Family::Pe, 2, 2),
            spec(Family::Spe, 2, 2),
            spec(Family::Q, 2, 2),
            spec(Family::Sq, 2, 2),
        ];
        for s in specs {
            let basis = basis_of(&s).unwrap();
            let rows: Vec<SparseRow> = basis.iter().map(as_row).collect();
            let dim = linalg::rank(rows.clone());
            assert_eq!(dim, basis.len());
            for x in &basis {
                assert!(is_member(&s, x));
                for y in &basis {
                    let z = x.bracket(y).unwrap();
                    assert!(is_member(&s, &z), "{s}: bracket left the algebra");
                    let mut with = rows.clone();
                    with.push(as_row(&z));
                    assert_eq!(linalg::rank(with), dim);
                }
            }
        }
    }

    #[test]
    fn basis_order_puts_cartan_first_and_odd_last() {
        let basis = basis_of(&spec(Family::Gl, 1, 1)).unwrap();
        let parities: Vec<Parity> = basis.iter().map(|x| x.parity().unwrap()).collect();
        assert_eq!(
            parities,
            vec![Parity::Even, Parity::Even, Parity::Odd, Parity::Odd]
        );
        let t = constants();
        let f = Format::standard(1, 1);
        assert_eq!(basis[0], SuperMatrix::unit(&f, &t, 0, 0));
        assert_eq!(basis[2], SuperMatrix::unit(&f, &t, 0, 1));
    }
}
