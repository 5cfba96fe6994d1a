//! Fraction-free sparse linear algebra over ℤ.
//!
//! Rows are sparse integer vectors with strictly increasing column indices.
//! Elimination combines rows by integer cross-multiplication and divides out
//! the content after every step, so entries stay small without ever forming
//! fractions. The pivot of a row is its first nonzero column.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type SparseRow = Vec<(usize, BigInt)>;

/// Scales a rational sparse vector to a primitive integer one (same direction).
pub fn clear_denominators(row: &[(usize, BigRational)]) -> SparseRow {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let out: SparseRow = row
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            (
                *j,
                (c * BigRational::from_integer(lcm.clone())).to_integer(),
            )
        })
        .collect();
    make_primitive(out)
}

fn content(row: &[(usize, BigInt)]) -> BigInt {
    row.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c))
}

/// Divides by the content and makes the first entry positive.
pub fn make_primitive(mut row: SparseRow) -> SparseRow {
    let g = content(&row);
    if g.is_zero() {
        return Vec::new();
    }
    let negate = row[0].1.is_negative();
    for (_, c) in row.iter_mut() {
        *c = &*c / &g;
        if negate {
            *c = -&*c;
        }
    }
    row
}

fn coeff_at(row: &[(usize, BigInt)], col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(j, _)| *j)
        .ok()
        .map(|k| &row[k].1)
}

/// `a·x − b·y`, made primitive.
fn combine(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map(|e| e.0);
        let cy = y.get(j).map(|e| e.0);
        let (col, v) = match (cx, cy) {
            (Some(p), Some(q)) if p == q => {
                let v = a * &x[i].1 - b * &y[j].1;
                i += 1;
                j += 1;
                (p, v)
            }
            (Some(p), Some(q)) if p < q => {
                i += 1;
                (p, a * &x[i - 1].1)
            }
            (Some(p), None) => {
                i += 1;
                (p, a * &x[i - 1].1)
            }
            (_, Some(q)) => {
                j += 1;
                (q, -(b * &y[j - 1].1))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    make_primitive(out)
}

/// Row echelon form built incrementally.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// pivot column → row whose first entry sits in that column.
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `row` until its first column is not a pivot.
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        let mut row = make_primitive(row);
        while let Some(&(col, ref c)) = row.first() {
            let Some(p) = self.rows.get(&col) else { break };
            let c = c.clone();
            row = combine(&p[0].1, &row, &c, p);
        }
        row
    }

    /// Inserts a row; returns true if it enlarged the span.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some(&(col, _)) => {
                self.rows.insert(col, row);
                true
            }
        }
    }

    /// True if `row` lies in the span.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Fully reduced form: every pivot column is zero in every other row.
    pub fn reduced(&self) -> Vec<SparseRow> {
        let cols: Vec<usize> = self.rows.keys().copied().collect();
        let mut done: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for &col in cols.iter().rev() {
            let mut row = self.rows[&col].clone();
            loop {
                let hit = row
                    .iter()
                    .skip(1)
                    .find_map(|(j, c)| done.get(j).map(|p| (c.clone(), p)));
                let Some((c, p)) = hit else { break };
                row = combine(&p[0].1, &row, &c, p);
            }
            done.insert(col, row);
        }
        done.into_values().collect()
    }

    /// Basis of the right kernel `{v : row·v = 0 for every row}` in `ncols` columns.
    ///
    /// One primitive integer vector per non-pivot column, in increasing order
    /// of that column.
    pub fn kernel(&self, ncols: usize) -> Vec<SparseRow> {
        let reduced = self.reduced();
        let mut by_free: BTreeMap<usize, Vec<(usize, &BigInt, &BigInt)>> = BTreeMap::new();
        for row in &reduced {
            let (pc, pa) = (&row[0].0, &row[0].1);
            for (j, c) in row.iter().skip(1) {
                by_free.entry(*j).or_default().push((*pc, pa, c));
            }
        }
        let mut out = Vec::new();
        for f in 0..ncols {
            if self.rows.contains_key(&f) {
                continue;
            }
            let deps = by_free.get(&f).map(Vec::as_slice).unwrap_or(&[]);
            let l = deps.iter().fold(BigInt::one(), |acc, (_, a, _)| acc.lcm(a));
            let mut v: SparseRow = deps
                .iter()
                .map(|(pc, a, c)| (*pc, -(*c * &l) / *a))
                .collect();
            v.push((f, l));
            v.sort_by_key(|e| e.0);
            out.push(make_primitive(v));
        }
        out
    }
}

/// Rank of a set of rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Kernel basis of the matrix with the given rows.
pub fn nullspace(ncols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Vec<SparseRow> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.kernel(ncols)
}

/// Dot product of two sparse rows.
pub fn dot(a: &[(usize, BigInt)], b: &[(usize, BigInt)]) -> BigInt {
    a.iter()
        .filter_map(|(j, x)| coeff_at(b, *j).map(|y| x * y))
        .fold(BigInt::zero(), |acc, t| acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(j, c)| (j, BigInt::from(c))).collect()
    }

    fn dense(rows: &[Vec<i64>]) -> Vec<SparseRow> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(j, c)| (j, BigInt::from(*c)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        // x + y + z = 0, 2y − z = 0 → kernel spanned by (−3, 1, 2).
        let k = nullspace(3, [row(&[(0, 1), (1, 1), (2, 1)]), row(&[(1, 2), (2, -1)])]);
        assert_eq!(k, vec![row(&[(0, 3), (1, -1), (2, -2)])]);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(rank(rows), 2);
        assert_eq!(rank(Vec::<SparseRow>::new()), 0);
    }

    #[test]
    fn empty_system_has_full_kernel() {
        let k = nullspace(3, Vec::<SparseRow>::new());
        assert_eq!(k, vec![row(&[(0, 1)]), row(&[(1, 1)]), row(&[(2, 1)])]);
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(entries in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 6), 0..6)) {
            let rows = dense(&entries);
            let k = nullspace(6, rows.clone());
            prop_assert_eq!(k.len() + rank(rows.clone()), 6);
            for v in &k {
                for r in &rows {
                    prop_assert!(dot(r, v).is_zero());
                }
            }
            prop_assert_eq!(rank(k.clone()), k.len());
        }
    }
}
