//! Doubly labelled constellations stored as labelled permutation
//! factorizations of the identity.
//!
//! Slots run in CF order: the black vertex `(0,0)`, round vertices
//! `(1,0)..(L,0)`, square vertices `(i,j)` for colour `i ≤ M` and flavour
//! `j ≤ J_i`, then the white vertex `(L+1,0)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::rational::{factorial, Rational};
use crate::algebra::{BetaSeries, PQKey, PQSeries, ParamPoly, VarContext};
use crate::error::{HurwitzError, Result};
use crate::hurwitz::{pure_hurwitz_char, ProfileTuple};
use crate::symmetric::partition::{partitions_of, Partition};
use crate::symmetric::permutation::all_permutations;
use crate::symmetric::{CharTables, Permutation};

/// Vertex label `(colour, flavour)`; flavour 0 marks round, black and white vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CFLabel {
    pub colour: usize,
    pub flavour: usize,
}

impl CFLabel {
    pub fn new(colour: usize, flavour: usize) -> Self {
        Self { colour, flavour }
    }

    pub fn is_square(&self) -> bool {
        self.flavour > 0
    }
}

/// `L` round colours and the square multiplicities `J_1..J_M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spectrum {
    pub l: usize,
    pub j: Vec<usize>,
}

impl Spectrum {
    pub fn new(l: usize, j: Vec<usize>) -> Self {
        Self { l, j }
    }

    pub fn m(&self) -> usize {
        self.j.len()
    }

    /// `|J|`, the number of square slots.
    pub fn squares(&self) -> usize {
        self.j.iter().sum()
    }

    pub fn slot_count(&self) -> usize {
        self.l + self.squares() + 2
    }

    pub fn context(&self) -> VarContext {
        VarContext::new(self.l, self.m())
    }

    /// All spectra with `M` colours and `|J| ≤ max_squares`, zeros allowed.
    pub fn all(l: usize, m: usize, max_squares: usize) -> Vec<Spectrum> {
        fn rec(m: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == m {
                out.push(cur.clone());
                return;
            }
            for k in 0..=rest {
                cur.push(k);
                rec(m, rest - k, cur, out);
                cur.pop();
            }
        }
        let mut js = Vec::new();
        rec(m, max_squares, &mut Vec::new(), &mut js);
        js.into_iter().map(|j| Spectrum::new(l, j)).collect()
    }
}

/// Convention for evaluating the CF-ordered product of the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductOrder {
    /// `h_{(0,0)} h_{(1,0)} ⋯ h_{(L+1,0)}` as composed maps, rightmost applied first.
    #[default]
    RightToLeft,
    /// The leftmost factor is applied first.
    LeftToRight,
}

impl ProductOrder {
    fn product(self, factors: &[Permutation], n: usize) -> Permutation {
        let id = Permutation::identity(n);
        match self {
            ProductOrder::RightToLeft => factors.iter().fold(id, |acc, h| acc.compose(h)),
            ProductOrder::LeftToRight => factors.iter().fold(id, |acc, h| h.compose(&acc)),
        }
    }
}

/// Slot labels in CF order.
pub fn cf_slots(spectrum: &Spectrum) -> Vec<CFLabel> {
    let mut out = vec![CFLabel::new(0, 0)];
    out.extend((1..=spectrum.l).map(|i| CFLabel::new(i, 0)));
    for (i, &ji) in spectrum.j.iter().enumerate() {
        out.extend((1..=ji).map(|f| CFLabel::new(i + 1, f)));
    }
    out.push(CFLabel::new(spectrum.l + 1, 0));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constellation {
    n: usize,
    spectrum: Spectrum,
    order: ProductOrder,
    factors: Vec<(CFLabel, Permutation)>,
}

impl Constellation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn order(&self) -> ProductOrder {
        self.order
    }

    pub fn factors(&self) -> &[(CFLabel, Permutation)] {
        &self.factors
    }

    pub fn permutations(&self) -> Vec<Permutation> {
        self.factors.iter().map(|(_, p)| p.clone()).collect()
    }

    /// Relabels the sheets: every factor is conjugated by `g`.
    pub fn relabel(&self, g: &Permutation) -> Result<Self> {
        let factors = self.factors.iter().map(|(_, h)| h.conjugate_by(g)).collect();
        make_constellation_in(self.order, &self.spectrum, factors)
    }
}

/// Validates a factorization under the default right-to-left product.
pub fn make_constellation(spectrum: &Spectrum, factors: Vec<Permutation>) -> Result<Constellation> {
    make_constellation_in(ProductOrder::default(), spectrum, factors)
}

pub fn make_constellation_in(
    order: ProductOrder,
    spectrum: &Spectrum,
    factors: Vec<Permutation>,
) -> Result<Constellation> {
    let slots = cf_slots(spectrum);
    if factors.len() != slots.len() {
        return Err(HurwitzError::Validation(format!(
            "spectrum has {} slots but {} factors were given",
            slots.len(),
            factors.len()
        )));
    }
    let n = factors[0].degree();
    if factors.iter().any(|h| h.degree() != n) {
        return Err(HurwitzError::Dimension("factors act on different point sets".into()));
    }
    for (label, h) in slots.iter().zip(&factors) {
        if label.is_square() && h.is_identity() {
            return Err(HurwitzError::Validation(format!(
                "square slot ({},{}) carries the identity",
                label.colour, label.flavour
            )));
        }
    }
    let product = order.product(&factors, n);
    if !product.is_identity() {
        return Err(HurwitzError::Validation(format!(
            "CF-ordered product is {product}, not the identity"
        )));
    }
    Ok(Constellation {
        n,
        spectrum: spectrum.clone(),
        order,
        factors: slots.into_iter().zip(factors).collect(),
    })
}

/// Cycle types of the slots in CF order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub profiles: Vec<Partition>,
}

impl ClassKey {
    /// Profile `ν` of the black vertex.
    pub fn black(&self) -> &Partition {
        &self.profiles[0]
    }

    /// Profile `μ` of the white vertex.
    pub fn white(&self) -> &Partition {
        self.profiles.last().expect("at least two slots")
    }

    /// `d`, the total colength of the middle slots.
    pub fn middle_colength(&self) -> usize {
        let k = self.profiles.len();
        self.profiles[1..k - 1].iter().map(Partition::colength).sum()
    }
}

pub fn class_key(c: &Constellation) -> ClassKey {
    ClassKey {
        profiles: c.factors.iter().map(|(_, h)| h.cycle_type()).collect(),
    }
}

/// `(χ, genus)` with `χ = ℓ(μ) + ℓ(ν) - d`; the genus is reported only for even `χ`.
pub fn euler_genus(key: &ClassKey) -> (i64, Option<i64>) {
    let chi = key.white().len() as i64 + key.black().len() as i64 - key.middle_colength() as i64;
    let genus = (chi.rem_euclid(2) == 0).then(|| (2 - chi) / 2);
    (chi, genus)
}

/// Weight of one constellation: `N`, `d`, the `(μ, ν)` key and the polynomial part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstellationWeight {
    pub n: usize,
    pub d: usize,
    pub mu: Partition,
    pub nu: Partition,
    pub w: ParamPoly,
}

/// `(1/N!) (-1)^{|J| + Σ ℓ*(ν^{(i,j)})} ∏ c_i^{ℓ*(μ^{(i,0)})} ∏ d_i^{ℓ*(ν^{(i,j)})}`.
pub fn key_weight(key: &ClassKey, spectrum: &Spectrum) -> Result<ConstellationWeight> {
    let slots = cf_slots(spectrum);
    if slots.len() != key.profiles.len() {
        return Err(HurwitzError::Dimension(format!(
            "key has {} profiles, spectrum has {} slots",
            key.profiles.len(),
            slots.len()
        )));
    }
    let colengths: Vec<u32> = key.profiles.iter().map(|p| p.colength() as u32).collect();
    let n = key.black().weight();
    let (w, d) = weight_from_colengths(&colengths, spectrum, n);
    Ok(ConstellationWeight {
        n,
        d,
        mu: key.white().clone(),
        nu: key.black().clone(),
        w,
    })
}

fn weight_from_colengths(colengths: &[u32], spectrum: &Spectrum, n: usize) -> (ParamPoly, usize) {
    let ctx = spectrum.context();
    let k = colengths.len();
    let mut exps = vec![0u32; ctx.width()];
    exps[..spectrum.l].copy_from_slice(&colengths[1..=spectrum.l]);
    let mut slot = spectrum.l + 1;
    let mut square_colength = 0u32;
    for (i, &ji) in spectrum.j.iter().enumerate() {
        for _ in 0..ji {
            exps[ctx.l + i] += colengths[slot];
            square_colength += colengths[slot];
            slot += 1;
        }
    }
    let d: u32 = colengths[1..k - 1].iter().sum();
    let odd = (spectrum.squares() as u32 + square_colength) % 2 == 1;
    let sign = if odd { -1 } else { 1 };
    let coeff = Rational::new(BigInt::from(sign), factorial(n));
    (ParamPoly::monomial(ctx, exps, coeff), d as usize)
}

pub fn constellation_weight(c: &Constellation) -> ConstellationWeight {
    key_weight(&class_key(c), &c.spectrum).expect("key matches its own spectrum")
}

/// `∏` of the loop sizes over all slots but the last.
pub fn enumeration_work(n: usize, spectrum: &Spectrum) -> u128 {
    let full: u128 = factorial(n).try_into().unwrap_or(u128::MAX);
    let squares = spectrum.squares() as u32;
    full.saturating_pow(1 + spectrum.l as u32)
        .saturating_mul(full.saturating_sub(1).saturating_pow(squares))
}

const MAXN: usize = 16;
const MAX_SLOTS: usize = 32;

struct Element {
    images: [u8; MAXN],
    type_index: u8,
    colength: u32,
}

struct Enumerator {
    n: usize,
    slots: usize,
    lists: Vec<Vec<usize>>,
    elements: Vec<Element>,
    type_of: HashMap<Vec<usize>, u8>,
    types: Vec<Partition>,
}

type RawKey = [u8; MAX_SLOTS];

impl Enumerator {
    fn new(n: usize, spectrum: &Spectrum, work_bound: u128) -> Result<Self> {
        if n > MAXN || spectrum.slot_count() > MAX_SLOTS {
            return Err(HurwitzError::Capacity {
                estimated: u128::MAX,
                bound: work_bound,
            });
        }
        let estimated = enumeration_work(n, spectrum);
        if estimated > work_bound {
            return Err(HurwitzError::Capacity {
                estimated,
                bound: work_bound,
            });
        }
        let types = partitions_of(n);
        let type_of: HashMap<Vec<usize>, u8> =
            types.iter().enumerate().map(|(i, p)| (p.parts().to_vec(), i as u8)).collect();
        let elements: Vec<Element> = all_permutations(n)
            .into_iter()
            .map(|g| {
                let mut images = [0u8; MAXN];
                images[..n].copy_from_slice(g.raw());
                let t = g.cycle_type();
                Element {
                    images,
                    type_index: type_of[t.parts()],
                    colength: t.colength() as u32,
                }
            })
            .collect();
        let all: Vec<usize> = (0..elements.len()).collect();
        let nontrivial: Vec<usize> = all.iter().copied().filter(|&i| elements[i].colength > 0).collect();
        let slots = spectrum.slot_count();
        let lists = cf_slots(spectrum)[..slots - 1]
            .iter()
            .map(|s| if s.is_square() { nontrivial.clone() } else { all.clone() })
            .collect();
        Ok(Self {
            n,
            slots,
            lists,
            elements,
            type_of,
            types,
        })
    }

    fn type_of_raw(&self, images: &[u8; MAXN]) -> u8 {
        let mut seen = [false; MAXN];
        let mut parts = Vec::with_capacity(self.n);
        for start in 0..self.n {
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
        parts.sort_unstable_by(|a, b| b.cmp(a));
        self.type_of[&parts]
    }

    /// Visits every factorization whose middle colength lies in `d_lo..=d_hi`.
    /// The visitor receives element indices of the enumerated slots and the
    /// images of the right-to-left partial product.
    fn walk<F>(&self, first: usize, d_lo: u32, d_hi: u32, visit: &mut F)
    where
        F: FnMut(&[usize], &[u8; MAXN]),
    {
        let mut chosen = vec![first; self.slots - 1];
        let prod = self.elements[first].images;
        self.descend(1, &mut chosen, prod, 0, d_lo, d_hi, visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<F>(
        &self,
        depth: usize,
        chosen: &mut Vec<usize>,
        prod: [u8; MAXN],
        colength: u32,
        d_lo: u32,
        d_hi: u32,
        visit: &mut F,
    ) where
        F: FnMut(&[usize], &[u8; MAXN]),
    {
        if depth == self.slots - 1 {
            if colength >= d_lo {
                visit(chosen, &prod);
            }
            return;
        }
        for &e in &self.lists[depth] {
            let el = &self.elements[e];
            let c = colength + el.colength;
            if c > d_hi {
                continue;
            }
            let mut next = [0u8; MAXN];
            for x in 0..self.n {
                next[x] = prod[el.images[x] as usize];
            }
            chosen[depth] = e;
            self.descend(depth + 1, chosen, next, c, d_lo, d_hi, visit);
        }
    }

    fn raw_key(&self, chosen: &[usize], prod: &[u8; MAXN]) -> RawKey {
        let mut key = [0u8; MAX_SLOTS];
        for (s, &e) in chosen.iter().enumerate() {
            key[s] = self.elements[e].type_index;
        }
        // the closing factor is the inverse of the partial product
        key[self.slots - 1] = self.type_of_raw(prod);
        key
    }

    fn class_key(&self, raw: &RawKey) -> ClassKey {
        ClassKey {
            profiles: raw[..self.slots].iter().map(|&t| self.types[t as usize].clone()).collect(),
        }
    }

    fn class_counts(&self, d_lo: u32, d_hi: u32) -> BTreeMap<ClassKey, u64> {
        let merged = self.lists[0]
            .par_iter()
            .map(|&first| {
                let mut local: HashMap<RawKey, u64> = HashMap::new();
                self.walk(first, d_lo, d_hi, &mut |chosen, prod| {
                    *local.entry(self.raw_key(chosen, prod)).or_default() += 1;
                });
                local
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
        merged.into_iter().map(|(k, v)| (self.class_key(&k), v)).collect()
    }
}

fn inverse_raw(prod: &[u8; MAXN], n: usize) -> Permutation {
    let mut inv = vec![0usize; n];
    for x in 0..n {
        inv[prod[x] as usize] = x + 1;
    }
    Permutation::from_images(&inv).expect("bijection")
}

/// Every constellation of the spectrum with middle colength exactly `d_target`.
///
/// Nothing is canonicalized: relabellings of the sheets are all listed.
pub fn enumerate_constellations(
    n: usize,
    spectrum: &Spectrum,
    d_target: usize,
    work_bound: u128,
) -> Result<Vec<Constellation>> {
    let en = Enumerator::new(n, spectrum, work_bound)?;
    let perms = all_permutations(n);
    let mut out = Vec::new();
    for &first in &en.lists[0] {
        en.walk(first, d_target as u32, d_target as u32, &mut |chosen, prod| {
            let mut factors: Vec<Permutation> = chosen.iter().map(|&e| perms[e].clone()).collect();
            factors.push(inverse_raw(prod, n));
            let slots = cf_slots(spectrum);
            out.push(Constellation {
                n,
                spectrum: spectrum.clone(),
                order: ProductOrder::RightToLeft,
                factors: slots.into_iter().zip(factors).collect(),
            });
        });
    }
    Ok(out)
}

/// Number of constellations per class key, middle colength at most `d_max`.
pub fn class_counts(
    n: usize,
    spectrum: &Spectrum,
    d_max: usize,
    work_bound: u128,
) -> Result<BTreeMap<ClassKey, u64>> {
    Ok(Enumerator::new(n, spectrum, work_bound)?.class_counts(0, d_max as u32))
}

/// One line of a census: a class, its size, topology and per-constellation weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusEntry {
    pub key: ClassKey,
    pub count: u64,
    pub chi: i64,
    pub genus: Option<i64>,
    pub weight: ParamPoly,
}

pub fn census(n: usize, spectrum: &Spectrum, d_max: usize, work_bound: u128) -> Result<Vec<CensusEntry>> {
    class_counts(n, spectrum, d_max, work_bound)?
        .into_iter()
        .map(|(key, count)| {
            let (chi, genus) = euler_genus(&key);
            let weight = key_weight(&key, spectrum)?.w;
            Ok(CensusEntry {
                key,
                count,
                chi,
                genus,
                weight,
            })
        })
        .collect()
}

/// Census from class sizes `N! · H(key)` without touching permutations.
///
/// Lists every key with nontrivial square slots and middle colength at most
/// `d_max` whose class is nonempty; agrees with [`census`] wherever both run.
pub fn census_per_class(n: usize, spectrum: &Spectrum, d_max: usize, tables: &CharTables) -> Result<Vec<CensusEntry>> {
    let all = partitions_of(n);
    let slots = cf_slots(spectrum);
    let mut keys: Vec<Vec<Partition>> = vec![Vec::new()];
    for (idx, label) in slots.iter().enumerate() {
        let middle = idx > 0 && idx + 1 < slots.len();
        let mut next = Vec::new();
        for prefix in &keys {
            let used: usize = prefix.iter().skip(1).map(Partition::colength).sum();
            for p in &all {
                if label.is_square() && p.is_trivial() {
                    continue;
                }
                if middle && used + p.colength() > d_max {
                    continue;
                }
                let mut k = prefix.clone();
                k.push(p.clone());
                next.push(k);
            }
        }
        keys = next;
    }
    let scale = Rational::from_integer(factorial(n));
    let mut out = Vec::new();
    for profiles in keys {
        let h = pure_hurwitz_char(&ProfileTuple::new(profiles.clone())?, tables)?;
        if h.is_zero() {
            continue;
        }
        let count = (h * &scale).to_integer().to_u64().ok_or(HurwitzError::Capacity {
            estimated: u128::MAX,
            bound: u64::MAX as u128,
        })?;
        let key = ClassKey { profiles };
        let (chi, genus) = euler_genus(&key);
        let weight = key_weight(&key, spectrum)?.w;
        out.push(CensusEntry {
            key,
            count,
            chi,
            genus,
            weight,
        });
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

/// Total weight of all weight-`N` constellations over every spectrum with
/// `M` colours and middle colength at most `dMax`, as a table keyed by the
/// white and black profiles.
pub fn sum_constellation_weights(
    n: usize,
    l: usize,
    m: usize,
    d_max: usize,
    work_bound: u128,
) -> Result<PQSeries> {
    let ctx = VarContext::new(l, m);
    let mut out = PQSeries::zero(ctx, n, d_max);
    // every square adds at least one to the middle colength
    for spectrum in Spectrum::all(l, m, d_max) {
        if n == 0 && spectrum.squares() > 0 {
            continue;
        }
        for (key, count) in class_counts(n, &spectrum, d_max, work_bound)? {
            let cw = key_weight(&key, &spectrum)?;
            let mut coeffs = vec![ParamPoly::zero(ctx); d_max + 1];
            coeffs[cw.d] = cw.w.scale(&Rational::from_integer(BigInt::from(count)));
            let series = BetaSeries::from_coeffs(coeffs)?;
            out.accumulate(PQKey::new(cw.mu, cw.nu)?, &series)?;
        }
    }
    if n == 0 && out.entries().is_empty() {
        out.accumulate(PQKey::unit(), &BetaSeries::one(ctx, d_max))?;
    }
    Ok(out)
}

/// Sum of [`sum_constellation_weights`] over `N = 0..=NMax`.
pub fn sum_constellation_weights_upto(
    n_max: usize,
    l: usize,
    m: usize,
    d_max: usize,
    work_bound: u128,
) -> Result<PQSeries> {
    let ctx = VarContext::new(l, m);
    let mut out = PQSeries::zero(ctx, n_max, d_max);
    for n in 0..=n_max {
        let part = sum_constellation_weights(n, l, m, d_max, work_bound)?;
        for (key, s) in part.entries() {
            out.accumulate(key.clone(), s)?;
        }
    }
    Ok(out)
}

impl ConstellationWeight {
    /// `N! · w`, a signed monomial with unit coefficient.
    pub fn scaled(&self) -> ParamPoly {
        self.w.scale(&Rational::from_integer(factorial(self.n)))
    }

    pub fn is_unit_monomial(&self) -> bool {
        let s = self.scaled();
        s.len() == 1 && s.terms().all(|(_, q)| q.numer().magnitude().is_one() && q.denom().is_one())
    }
}
