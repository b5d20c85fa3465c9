use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::rational::{factorial, Rational};
use crate::error::{HurwitzError, Result};

/// An integer partition, stored as weakly decreasing positive parts.
///
/// Ordering is by weight first, then reverse-lexicographic on the parts,
/// so `partitions_of(3)` sorts as `(3) < (2,1) < (1,1,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates that `parts` are positive and weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(HurwitzError::Validation(format!(
                "partition parts must be positive: {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(HurwitzError::Validation(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self { parts })
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `(1^n)`, the cycle type of the identity.
    pub fn trivial(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `ℓ*(λ) = |λ| - ℓ(λ)`.
    pub fn colength(&self) -> usize {
        self.weight() - self.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// `m_i(λ)` for `i = 1..=λ_1`, at index `i - 1`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.parts.first().copied().unwrap_or(0)];
        for &p in &self.parts {
            m[p - 1] += 1;
        }
        m
    }

    /// Order of the centralizer of an element of cycle type `λ`.
    pub fn z_big(&self) -> BigInt {
        self.multiplicities()
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (i, &m)| {
                acc * factorial(m) * num_traits::pow(BigInt::from(i + 1), m)
            })
    }

    pub fn z(&self) -> Rational {
        Rational::from_integer(self.z_big())
    }

    /// Size `N!/z_λ` of the conjugacy class of cycle type `λ`.
    pub fn class_size(&self) -> BigInt {
        factorial(self.weight()) / self.z_big()
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.parts.first().copied().unwrap_or(0);
        Self {
            parts: (0..cols)
                .map(|j| self.parts.iter().filter(|&&p| p > j).count())
                .collect(),
        }
    }

    /// Hook length of the box in row `i`, column `j` (0-based).
    pub fn hook(&self, i: usize, j: usize) -> usize {
        let arm = self.parts[i] - j - 1;
        let leg = self.parts[i + 1..].iter().filter(|&&p| p > j).count();
        arm + leg + 1
    }

    /// Product of all hook lengths.
    pub fn hook_product(&self) -> u128 {
        let mut h: u128 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                h *= self.hook(i, j) as u128;
            }
        }
        h
    }

    /// Contents `j - i` of all boxes, in row-major order.
    pub fn contents(&self) -> Vec<i64> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &row)| (0..row).map(move |j| j as i64 - i as i64))
            .collect()
    }

    /// Multiset union of parts, re-sorted.
    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Self::from_unsorted(parts)
    }
}

/// Hook product as a free function.
pub fn hook_product(lambda: &Partition) -> u128 {
    lambda.hook_product()
}

pub fn contents(lambda: &Partition) -> Vec<i64> {
    lambda.contents()
}

pub fn z_mu(mu: &Partition) -> Rational {
    mu.z()
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `(2,1)`, `2,1`, `2 1` and `()`; whitespace is ignored.
impl FromStr for Partition {
    type Err = HurwitzError;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split([',', ' '])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| HurwitzError::Parse(format!("bad partition part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts).map_err(|e| HurwitzError::Parse(e.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Nontrivial partitions of `n` with the given colength.
pub fn partitions_with_colength(n: usize, colength: usize) -> Vec<Partition> {
    if colength >= n.max(1) {
        return Vec::new();
    }
    partitions_of(n)
        .into_iter()
        .filter(|p| p.colength() == colength && colength > 0)
        .collect()
}
