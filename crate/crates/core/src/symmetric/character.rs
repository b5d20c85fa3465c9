//! Irreducible characters of `S_N` by the Murnaghan–Nakayama rule.

use std::collections::HashMap;

use super::partition::{partitions_of, Partition};
use crate::error::{HurwitzError, Result};

type Memo = HashMap<(Partition, Vec<usize>), i64>;

/// Beta-set (first-column hook lengths) of `λ` with `λ.len()` beads.
fn beta_set(lambda: &Partition) -> Vec<usize> {
    let l = lambda.len();
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + l - 1 - i)
        .collect()
}

fn from_beta_set(mut beads: Vec<usize>) -> Partition {
    beads.sort_unstable_by(|a, b| b.cmp(a));
    let l = beads.len();
    Partition::from_unsorted(
        beads
            .iter()
            .enumerate()
            .map(|(i, &b)| b - (l - 1 - i))
            .collect(),
    )
}

/// All ways to strip a rim hook of length `r`: `(remaining shape, sign)`.
fn remove_rim_hooks(lambda: &Partition, r: usize) -> Vec<(Partition, i64)> {
    let beads = beta_set(lambda);
    let mut out = Vec::new();
    for (idx, &b) in beads.iter().enumerate() {
        if b < r || beads.contains(&(b - r)) {
            continue;
        }
        let between = beads.iter().filter(|&&x| x > b - r && x < b).count();
        let mut moved = beads.clone();
        moved[idx] = b - r;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        out.push((from_beta_set(moved), sign));
    }
    out
}

fn mn(lambda: &Partition, mu: &[usize], memo: &mut Memo) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.clone(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let v = remove_rim_hooks(lambda, mu[0])
        .into_iter()
        .map(|(rest, sign)| sign * mn(&rest, &mu[1..], memo))
        .sum();
    memo.insert(key, v);
    v
}

/// `χ_λ(μ)` for a single pair.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.weight() != mu.weight() {
        return Err(HurwitzError::Dimension(format!(
            "character of {lambda} (weight {}) at class {mu} (weight {})",
            lambda.weight(),
            mu.weight()
        )));
    }
    Ok(mn(lambda, mu.parts(), &mut Memo::new()))
}

/// The full character table of `S_N`.
#[derive(Debug, Clone)]
pub struct CharTable {
    n: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// `values[λ][μ]`
    values: Vec<Vec<i64>>,
}

impl CharTable {
    pub fn new(n: usize) -> Self {
        let partitions = partitions_of(n);
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut memo = Memo::new();
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|mu| mn(lambda, mu.parts(), &mut memo))
                    .collect()
            })
            .collect();
        Self {
            n,
            partitions,
            index,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        match (self.index_of(lambda), self.index_of(mu)) {
            (Some(i), Some(j)) => Ok(self.values[i][j]),
            _ => Err(HurwitzError::Dimension(format!(
                "({lambda}, {mu}) not in the character table of S_{}",
                self.n
            ))),
        }
    }

    /// `values[λ index][μ index]`, indices following [`CharTable::partitions`].
    pub fn by_index(&self, lambda: usize, mu: usize) -> i64 {
        self.values[lambda][mu]
    }
}

/// Character tables of `S_0..=S_max`, built once and shared read-only.
#[derive(Debug, Clone)]
pub struct CharTables {
    tables: Vec<CharTable>,
}

impl CharTables {
    pub fn up_to(max_n: usize) -> Self {
        Self {
            tables: (0..=max_n).map(CharTable::new).collect(),
        }
    }

    pub fn max_n(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn table(&self, n: usize) -> Result<&CharTable> {
        self.tables.get(n).ok_or_else(|| {
            HurwitzError::Dimension(format!(
                "character tables built up to N={}, requested N={n}",
                self.max_n()
            ))
        })
    }

    pub fn chi(&self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        if lambda.weight() != mu.weight() {
            return Err(HurwitzError::Dimension(format!(
                "character of {lambda} at class {mu}"
            )));
        }
        self.table(lambda.weight())?.value(lambda, mu)
    }
}
