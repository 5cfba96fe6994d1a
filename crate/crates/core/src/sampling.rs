//! Seeded random generators for property samples.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::supermatrix::{Format, QBlockMatrix, SuperMatrix};
use crate::superpoly::{rat, Monomial, Parity, Polynomial, VarTable};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational with numerator in `-5..=5` and denominator in `1..=3`.
pub fn small_rational(rng: &mut SampleRng) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-5..=5);
        if n != 0 {
            return rat(n, rng.gen_range(1..=3));
        }
    }
}

/// Random valid monomial of degree at most `max_degree`.
pub fn monomial(rng: &mut SampleRng, table: &VarTable, max_degree: u32) -> Monomial {
    let degree = rng.gen_range(0..=max_degree);
    let mut pairs = Vec::new();
    let mut used_odd = Vec::new();
    for _ in 0..degree {
        let id = rng.gen_range(0..table.len() as u32);
        if table.parity(id).is_odd() {
            if used_odd.contains(&id) {
                continue;
            }
            used_odd.push(id);
        }
        pairs.push((id, 1));
    }
    Monomial::from_pairs(pairs)
}

pub fn polynomial(
    rng: &mut SampleRng,
    table: &Arc<VarTable>,
    max_terms: usize,
    max_degree: u32,
) -> Polynomial {
    let terms = rng.gen_range(0..=max_terms);
    let mut p = Polynomial::zero(table);
    for _ in 0..terms {
        let m = monomial(rng, table, max_degree);
        let t = Polynomial::term(table, m, small_rational(rng));
        p = &p + &t;
    }
    p
}

/// Random polynomial all of whose terms have parity `parity`.
pub fn homogeneous(
    rng: &mut SampleRng,
    table: &Arc<VarTable>,
    parity: Parity,
    max_terms: usize,
    max_degree: u32,
) -> Polynomial {
    polynomial(rng, table, max_terms * 2, max_degree).parity_part(parity)
}

/// Random parity-preserving assignment of every variable of `source` to a
/// polynomial over `target`.
pub fn assignment(
    rng: &mut SampleRng,
    source: &VarTable,
    target: &Arc<VarTable>,
    max_terms: usize,
    max_degree: u32,
) -> BTreeMap<u32, Polynomial> {
    source
        .vars()
        .iter()
        .map(|v| {
            (
                v.id,
                homogeneous(rng, target, v.parity, max_terms, max_degree),
            )
        })
        .collect()
}

/// Picks one element uniformly.
pub fn choose<'a, T>(rng: &mut SampleRng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty slice")
}

/// Random element with zero body: even or odd, built from at least one generator.
pub fn nilpotent(
    rng: &mut SampleRng,
    table: &Arc<VarTable>,
    parity: Parity,
    max_terms: usize,
) -> Polynomial {
    let p = homogeneous(rng, table, parity, max_terms, 3);
    &p - &p.body()
}

/// Random even supermatrix over Grassmann scalars whose entries are nilpotent.
pub fn nilpotent_even_matrix(
    rng: &mut SampleRng,
    table: &Arc<VarTable>,
    format: &Format,
) -> SuperMatrix {
    SuperMatrix::from_fn(format, table, |i, j| {
        let p = format.parity(i) + format.parity(j);
        nilpotent(rng, table, p, 2)
    })
}

fn random_body(rng: &mut SampleRng, size: usize) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..size)
            .map(|_| (0..size).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        if small_det(&m) != 0 {
            return m;
        }
    }
}

fn small_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * small_det(&minor)
            })
            .sum(),
    }
}

/// Random invertible even supermatrix over Grassmann scalars: diagonal
/// blocks have invertible integer bodies, everything else is nilpotent.
pub fn invertible_even_matrix(
    rng: &mut SampleRng,
    table: &Arc<VarTable>,
    format: &Format,
) -> SuperMatrix {
    let a = format.even_count();
    let b = format.odd_count();
    let body_a = random_body(rng, a);
    let body_d = random_body(rng, b);
    let nil = nilpotent_even_matrix(rng, table, format);
    SuperMatrix::from_fn(format, table, |i, j| {
        let body = match (i < a, j < a) {
            (true, true) => body_a[i][j],
            (false, false) => body_d[i - a][j - a],
            _ => 0,
        };
        &Polynomial::from_int(table, body) + nil.get(i, j)
    })
}

/// Random q-point `(A B; B A)`: `A` has an invertible integer body plus even
/// nilpotents, `B` is odd.
pub fn q_point(rng: &mut SampleRng, table: &Arc<VarTable>, n: usize) -> QBlockMatrix {
    let body = random_body(rng, n);
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    &Polynomial::from_int(table, body[i][j])
                        + &nilpotent(rng, table, Parity::Even, 1)
                })
                .collect()
        })
        .collect();
    let b = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| nilpotent(rng, table, Parity::Odd, 2))
                .collect()
        })
        .collect();
    QBlockMatrix::new(a, b).expect("square blocks")
}

/// Random nilpotent q-shaped matrix (entries of both blocks nilpotent).
pub fn nilpotent_q(rng: &mut SampleRng, table: &Arc<VarTable>, n: usize) -> QBlockMatrix {
    let a = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| nilpotent(rng, table, Parity::Even, 1))
                .collect()
        })
        .collect();
    let b = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| nilpotent(rng, table, Parity::Odd, 2))
                .collect()
        })
        .collect();
    QBlockMatrix::new(a, b).expect("square blocks")
}
