//! Partitions, hook-shaped super tableaux and the super Cauchy identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::{build_arena, CopySpec};
use crate::solver::monomial_basis;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Drops zero parts; `None` unless the rest is weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Option<Partition> {
        let parts: Vec<usize> = parts.into_iter().filter(|&p| p > 0).collect();
        if parts.windows(2).all(|w| w[0] >= w[1]) {
            Some(Partition(parts))
        } else {
            None
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// `λ_{n+1} ≤ m` (1-based).
    pub fn in_hook(&self, n: usize, m: usize) -> bool {
        self.0.get(n).is_none_or(|&p| p <= m)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `size` with parts ≤ `max_part`, in decreasing lexicographic order.
fn partitions_bounded(size: usize, max_part: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(size)).rev() {
        for mut rest in partitions_bounded(size - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Partitions of `size` with `λ_{n+1} ≤ m`, in decreasing lexicographic order.
pub fn hook_partitions(n: usize, m: usize, size: usize) -> Vec<Partition> {
    partitions_bounded(size, size)
        .into_iter()
        .map(Partition)
        .filter(|p| p.in_hook(n, m))
        .collect()
}

/// Strict partitions of `size` with exactly `n` parts, in decreasing lexicographic order.
pub fn strict_partitions(n: usize, size: usize) -> Vec<Partition> {
    partitions_bounded(size, size)
        .into_iter()
        .map(Partition)
        .filter(|p| p.len() == n && p.is_strict())
        .collect()
}

/// Strict partitions with exactly `n` parts and size ≤ `max_size`, by size.
pub fn strict_partitions_up_to(n: usize, max_size: usize) -> Vec<Partition> {
    (0..=max_size)
        .flat_map(|s| strict_partitions(n, s))
        .collect()
}

/// Number of `(n|m)`-semistandard tableaux of shape `λ`.
///
/// Letters `1 < … < n < 1' < … < m'`. Unprimed letters weakly increase along
/// rows and strictly down columns; primed letters the other way round.
pub fn ssyt_count(lambda: &Partition, n: usize, m: usize) -> u64 {
    if !lambda.in_hook(n, m) {
        return 0;
    }
    let shape = lambda.parts();
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        n: usize,
        m: usize,
    ) -> u64 {
        let Some(&(r, c)) = cells.get(k) else {
            return 1;
        };
        let mut total = 0;
        for letter in 0..n + m {
            let primed = letter >= n;
            if c > 0 {
                let left = grid[r][c - 1];
                if letter < left || (primed && letter == left) {
                    continue;
                }
            }
            if r > 0 {
                let up = grid[r - 1][c];
                if letter < up || (!primed && letter == up) {
                    continue;
                }
            }
            grid[r][c] = letter;
            total += rec(k + 1, cells, grid, n, m);
        }
        total
    }
    rec(0, &cells, &mut grid, n, m)
}

/// One row of [`CauchyReport::table`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyRow {
    pub lambda: Partition,
    pub dim_u: u64,
    pub dim_v: u64,
    pub product: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub dim_u: (usize, usize),
    pub dim_v: (usize, usize),
    pub k: usize,
    /// `dim S^k(U ⊗ V)`, counted monomial by monomial.
    pub lhs: u64,
    /// `Σ_λ dim U^λ · dim V^λ`.
    pub rhs: u64,
    pub table: Vec<CauchyRow>,
}

impl CauchyReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Compares both sides of `S^k(U ⊗ V) = ⊕_λ U^λ ⊗ V^λ` by dimension.
pub fn cauchy_check(dim_u: (usize, usize), dim_v: (usize, usize), k: usize) -> CauchyReport {
    let lhs = if dim_u.0 + dim_u.1 == 0 || dim_v.0 + dim_v.1 == 0 {
        u64::from(k == 0)
    } else {
        let arena = build_arena(dim_v.0, dim_v.1, CopySpec::new(dim_u.0, dim_u.1, 0, 0))
            .expect("nonempty arena");
        monomial_basis(&arena, k as u32, None).len() as u64
    };
    let table: Vec<CauchyRow> = hook_partitions(k, 0, k)
        .into_iter()
        .map(|lambda| {
            let du = ssyt_count(&lambda, dim_u.0, dim_u.1);
            let dv = ssyt_count(&lambda, dim_v.0, dim_v.1);
            CauchyRow {
                lambda,
                dim_u: du,
                dim_v: dv,
                product: du * dv,
            }
        })
        .filter(|row| row.product > 0)
        .collect();
    let rhs = table.iter().map(|r| r.product).sum();
    CauchyReport {
        dim_u,
        dim_v,
        k,
        lhs,
        rhs,
        table,
    }
}
