use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::partition::Partition;
use crate::error::{HurwitzError, Result};

/// Largest class that [`class_elements`] materializes eagerly.
pub const MATERIALIZE_MAX_N: usize = 8;

/// A permutation of `{1..N}`, stored 0-based.
///
/// Products compose right to left: `(g * h)(x) = g(h(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= u8::MAX as usize, "permutations limited to 255 points");
        Self {
            images: (0..n as u8).collect(),
        }
    }

    /// From a 1-based image sequence.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(HurwitzError::Validation("more than 255 points".into()));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(HurwitzError::Validation(format!(
                    "{images:?} is not a bijection of 1..{n}"
                )));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Self { images: out })
    }

    /// From disjoint cycles on `n` points, 1-based: `from_cycles(5, &[&[1, 2, 3]])`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n + 1];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n || used[a] {
                    return Err(HurwitzError::Validation(format!(
                        "cycles {cycles:?} are not disjoint cycles on 1..{n}"
                    )));
                }
                used[a] = true;
                images[a - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    pub(crate) fn from_raw(images: Vec<u8>) -> Self {
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based images.
    pub fn raw(&self) -> &[u8] {
        &self.images
    }

    /// 1-based image sequence.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Self { images: inv }
    }

    /// `self * rhs`, i.e. apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree(), rhs.degree(), "permutation degrees differ");
        Self {
            images: rhs.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.compose(self).compose(&g.inverse())
    }

    pub fn cycle_type(&self) -> Partition {
        cycle_type_raw(&self.images)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

pub(crate) fn cycle_type_raw(images: &[u8]) -> Partition {
    let n = images.len();
    let mut seen = [false; 256];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = images[x] as usize;
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

pub fn cycle_type(g: &Permutation) -> Partition {
    g.cycle_type()
}

impl std::ops::Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.degree())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

/// True iff the group generated by `gs` has a single orbit on the points.
pub fn is_transitive(gs: &[Permutation]) -> Result<bool> {
    let n = match gs.first() {
        Some(g) => g.degree(),
        None => return Ok(false),
    };
    if gs.iter().any(|g| g.degree() != n) {
        return Err(HurwitzError::Dimension(
            "permutations act on different point sets".into(),
        ));
    }
    if n <= 1 {
        return Ok(true);
    }
    let gens: Vec<Permutation> = gs.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for g in &gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// All permutations of cycle type `mu`.
///
/// Classes on at most [`MATERIALIZE_MAX_N`] points are built eagerly by
/// cycle construction; larger classes are streamed by filtering the
/// lexicographic enumeration of `S_N`.
pub fn class_elements(mu: &Partition) -> ClassElements {
    let n = mu.weight();
    if n <= MATERIALIZE_MAX_N {
        ClassElements::Materialized(materialize_class(mu).into_iter())
    } else {
        ClassElements::Streaming {
            target: mu.clone(),
            next: Some((0..n as u8).collect()),
        }
    }
}

pub enum ClassElements {
    Materialized(std::vec::IntoIter<Permutation>),
    Streaming {
        target: Partition,
        next: Option<Vec<u8>>,
    },
}

impl Iterator for ClassElements {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        match self {
            ClassElements::Materialized(it) => it.next(),
            ClassElements::Streaming { target, next } => loop {
                let cur = next.take()?;
                let mut succ = cur.clone();
                if next_lex_permutation(&mut succ) {
                    *next = Some(succ);
                }
                if cycle_type_raw(&cur) == *target {
                    return Some(Permutation::from_raw(cur));
                }
            },
        }
    }
}

fn next_lex_permutation(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Each permutation is built once: the cycle through the smallest unused
/// point is chosen first, with its length drawn from the remaining parts.
pub(crate) fn materialize_class(mu: &Partition) -> Vec<Permutation> {
    fn rec(
        images: &mut Vec<u8>,
        used: &mut Vec<bool>,
        lengths: &mut Vec<(usize, usize)>,
        out: &mut Vec<Permutation>,
    ) {
        let Some(start) = used.iter().position(|u| !u) else {
            out.push(Permutation::from_raw(images.clone()));
            return;
        };
        for li in 0..lengths.len() {
            let (len, count) = lengths[li];
            if count == 0 {
                continue;
            }
            lengths[li].1 -= 1;
            used[start] = true;
            let mut cycle = vec![start];
            extend_cycle(images, used, lengths, out, &mut cycle, len);
            used[start] = false;
            lengths[li].1 += 1;
        }
    }

    fn extend_cycle(
        images: &mut Vec<u8>,
        used: &mut Vec<bool>,
        lengths: &mut Vec<(usize, usize)>,
        out: &mut Vec<Permutation>,
        cycle: &mut Vec<usize>,
        len: usize,
    ) {
        if cycle.len() == len {
            for w in 0..len {
                images[cycle[w]] = cycle[(w + 1) % len] as u8;
            }
            rec(images, used, lengths, out);
            return;
        }
        for x in 0..used.len() {
            if used[x] {
                continue;
            }
            used[x] = true;
            cycle.push(x);
            extend_cycle(images, used, lengths, out, cycle, len);
            cycle.pop();
            used[x] = false;
        }
    }

    let n = mu.weight();
    let mut lengths: Vec<(usize, usize)> = mu
        .multiplicities()
        .into_iter()
        .enumerate()
        .filter(|(_, m)| *m > 0)
        .map(|(i, m)| (i + 1, m))
        .collect();
    let mut images: Vec<u8> = (0..n as u8).collect();
    let mut used = vec![false; n];
    let mut out = Vec::new();
    rec(&mut images, &mut used, &mut lengths, &mut out);
    out
}

/// All `N!` permutations of `n` points in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![Permutation::from_raw(cur.clone())];
    while next_lex_permutation(&mut cur) {
        out.push(Permutation::from_raw(cur.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::partition::partitions_of;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(3).cycle_type(), p(&[1, 1, 1]));
        assert_eq!(Permutation::from_images(&[2, 1, 3]).unwrap().cycle_type(), p(&[2, 1]));
        assert_eq!(Permutation::from_images(&[2, 3, 1]).unwrap().cycle_type(), p(&[3]));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1, 3]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
    }

    #[test]
    fn transitivity() {
        let c3 = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert!(is_transitive(&[c3]).unwrap());
        assert!(!is_transitive(&[Permutation::identity(2)]).unwrap());
        let a = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 3]]).unwrap();
        assert!(is_transitive(&[a.clone(), b]).unwrap());
        assert!(!is_transitive(&[a]).unwrap());
    }

    #[test]
    fn class_counts_in_s3() {
        assert_eq!(class_elements(&p(&[1, 1, 1])).collect::<Vec<_>>(), vec![Permutation::identity(3)]);
        assert_eq!(class_elements(&p(&[2, 1])).count(), 3);
        assert_eq!(class_elements(&p(&[3])).count(), 2);
    }

    #[test]
    fn classes_partition_the_group() {
        for n in 0..=6 {
            let mut all = HashSet::new();
            for mu in partitions_of(n) {
                let class: Vec<_> = class_elements(&mu).collect();
                assert_eq!(class.len(), mu.class_size().to_usize().unwrap());
                for g in class {
                    assert_eq!(g.cycle_type(), mu);
                    assert!(all.insert(g));
                }
            }
            assert_eq!(all.len(), all_permutations(n).len());
        }
    }

    #[test]
    fn streaming_matches_materialized() {
        // force the streaming path on a small class by filtering directly
        let mu = p(&[3, 2, 2, 1, 1]);
        let streamed = ClassElements::Streaming {
            target: mu.clone(),
            next: Some((0..9u8).collect()),
        }
        .take(50)
        .all(|g| g.cycle_type() == mu);
        assert!(streamed);
        assert_eq!(class_elements(&p(&[9])).take(5).count(), 5);
    }

    #[test]
    fn composition_order() {
        let a = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[2, 3]]).unwrap();
        // apply b then a: 1 -> 1 -> 2
        assert_eq!((&a * &b).apply(0), 1);
        assert_eq!((&a * &a.inverse()), Permutation::identity(3));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u8).collect::<Vec<u8>>())
            .prop_shuffle()
            .prop_map(Permutation::from_raw)
    }

    proptest! {
        #[test]
        fn conjugation_preserves_cycle_type(g in arb_perm(7), h in arb_perm(7)) {
            prop_assert_eq!(h.conjugate_by(&g).cycle_type(), h.cycle_type());
        }
    }
}
