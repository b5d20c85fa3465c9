//! Pure Hurwitz numbers (character sums and brute-force factorization
//! counts), the rational weights `𝒲_{G_{c,d}}`, and weighted double
//! Hurwitz numbers `H^d_G(μ, ν)`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::rational::{factorial, Rational};
use crate::algebra::{ParamPoly, VarContext};
use crate::error::{HurwitzError, Result};
use crate::symmetric::partition::{partitions_of, Partition};
use crate::symmetric::permutation::materialize_class;
use crate::symmetric::CharTables;

/// Default cap on elementary permutation compositions for brute force.
pub const DEFAULT_WORK_BOUND: u128 = 100_000_000;

/// Rational weight generating function `G(z) = ∏(1 + c_i z) / ∏(1 - d_j z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGenSpec {
    pub l: usize,
    pub m: usize,
    numeric: Option<(Vec<Rational>, Vec<Rational>)>,
}

impl WeightGenSpec {
    /// Fully symbolic parameters.
    pub fn symbolic(l: usize, m: usize) -> Self {
        Self { l, m, numeric: None }
    }

    /// Parameters specialized to the given values.
    pub fn numeric(c: Vec<Rational>, d: Vec<Rational>) -> Self {
        Self {
            l: c.len(),
            m: d.len(),
            numeric: Some((c, d)),
        }
    }

    pub fn context(&self) -> VarContext {
        VarContext::new(self.l, self.m)
    }

    pub fn values(&self) -> Option<(&[Rational], &[Rational])> {
        self.numeric.as_ref().map(|(c, d)| (c.as_slice(), d.as_slice()))
    }
}

/// Ramification profiles sharing one weight `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProfileTuple(Vec<Partition>);

impl ProfileTuple {
    pub fn new(parts: Vec<Partition>) -> Result<Self> {
        if let Some(first) = parts.first() {
            let n = first.weight();
            if let Some(bad) = parts.iter().find(|p| p.weight() != n) {
                return Err(HurwitzError::Dimension(format!(
                    "profiles of mixed weight: {first} has {n}, {bad} has {}",
                    bad.weight()
                )));
            }
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[Partition] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> Option<usize> {
        self.0.first().map(Partition::weight)
    }

    pub fn total_colength(&self) -> usize {
        self.0.iter().map(Partition::colength).sum()
    }
}

/// Frobenius–Schur sum `Σ_λ h(λ)^{k-2} ∏_i χ_λ(μ^{(i)}) / z_{μ^{(i)}}`.
pub fn pure_hurwitz_char(profiles: &ProfileTuple, tables: &CharTables) -> Result<Rational> {
    let n = profiles
        .weight()
        .ok_or_else(|| HurwitzError::Domain("at least one profile is required".into()))?;
    let table = tables.table(n)?;
    let k = profiles.len() as i32;
    let cols: Vec<usize> = profiles
        .parts()
        .iter()
        .map(|p| table.index_of(p).expect("partition of N"))
        .collect();
    let z_prod: BigInt = profiles.parts().iter().map(Partition::z_big).product();
    let mut acc = Rational::zero();
    for (li, lambda) in table.partitions().iter().enumerate() {
        let chi: BigInt = cols.iter().map(|&c| BigInt::from(table.by_index(li, c))).product();
        if chi.is_zero() {
            continue;
        }
        let h = Rational::from_integer(BigInt::from(lambda.hook_product()));
        acc += Rational::from_integer(chi) * hook_power(&h, k - 2);
    }
    Ok(acc / Rational::from_integer(z_prod))
}

fn hook_power(h: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(h.clone(), e as usize)
    } else {
        Rational::one() / num_traits::pow(h.clone(), (-e) as usize)
    }
}

/// Counts factorizations `h_1 ⋯ h_k = e` with `h_i` of cycle type `μ^{(i)}`,
/// divided by `N!`.
///
/// All factors but one are enumerated; the remaining one is forced to be
/// the inverse of the partial product and only its class is checked. With
/// `connected_only`, tuples generating an intransitive group are skipped.
pub fn pure_hurwitz_bruteforce(
    profiles: &ProfileTuple,
    connected_only: bool,
    work_bound: u128,
) -> Result<Rational> {
    let n = profiles
        .weight()
        .ok_or_else(|| HurwitzError::Domain("at least one profile is required".into()))?;
    if n > 16 {
        return Err(HurwitzError::Capacity {
            estimated: u128::MAX,
            bound: work_bound,
        });
    }
    let count = count_factorizations(profiles.parts(), connected_only, work_bound)?;
    Ok(Rational::new(BigInt::from(count), factorial(n)))
}

/// Estimated compositions for enumerating every slot except the largest class.
pub fn bruteforce_work(profiles: &[Partition]) -> u128 {
    let (_, order) = solve_order(profiles);
    let mut acc: u128 = 0;
    let mut prod: u128 = 1;
    for &i in &order[..order.len().saturating_sub(1)] {
        prod = prod.saturating_mul(profiles[i].class_size().to_u128().unwrap_or(u128::MAX));
        acc = acc.saturating_add(prod);
    }
    acc
}

/// Cyclic rotation putting the largest class last; the count of identity
/// factorizations is invariant under rotation.
fn solve_order(profiles: &[Partition]) -> (usize, Vec<usize>) {
    let k = profiles.len();
    let last = (0..k)
        .max_by_key(|&i| (profiles[i].class_size(), std::cmp::Reverse(i)))
        .unwrap_or(0);
    let order = (1..=k).map(|s| (last + s) % k).collect();
    (last, order)
}

const MAXN: usize = 16;

#[derive(Clone, Copy)]
struct Frame {
    prod: [u8; MAXN],
    orbit: [u8; MAXN],
}

fn merge_orbits(orbit: &mut [u8; MAXN], g: &[u8], n: usize) {
    // relabel until stable: points joined by g share the minimum label
    loop {
        let mut changed = false;
        for x in 0..n {
            let y = g[x] as usize;
            let (a, b) = (orbit[x], orbit[y]);
            if a != b {
                let lo = a.min(b);
                let hi = a.max(b);
                for o in orbit.iter_mut().take(n) {
                    if *o == hi {
                        *o = lo;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

fn matches_type(images: &[u8; MAXN], n: usize, target: &[usize; MAXN + 1]) -> bool {
    let mut seen = [false; MAXN];
    let mut counts = [0usize; MAXN + 1];
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
        counts[len] += 1;
    }
    counts == *target
}

fn count_factorizations(profiles: &[Partition], connected_only: bool, work_bound: u128) -> Result<u64> {
    let k = profiles.len();
    let n = profiles[0].weight();
    if k == 0 {
        return Ok(0);
    }
    let estimated = bruteforce_work(profiles);
    if estimated > work_bound {
        return Err(HurwitzError::Capacity {
            estimated,
            bound: work_bound,
        });
    }
    let (last, order) = solve_order(profiles);
    let mut target = [0usize; MAXN + 1];
    for &p in profiles[last].parts() {
        target[p] += 1;
    }
    let classes: Vec<Vec<[u8; MAXN]>> = order[..k - 1]
        .iter()
        .map(|&i| {
            materialize_class(&profiles[i])
                .into_iter()
                .map(|g| {
                    let mut a = [0u8; MAXN];
                    a[..n].copy_from_slice(g.raw());
                    a
                })
                .collect()
        })
        .collect();

    let mut start = Frame {
        prod: [0; MAXN],
        orbit: [0; MAXN],
    };
    for i in 0..n {
        start.prod[i] = i as u8;
        start.orbit[i] = i as u8;
    }
    let leaf = |f: &Frame| -> bool {
        if !matches_type(&f.prod, n, &target) {
            return false;
        }
        // the forced factor lies in the group generated by the others
        !connected_only || f.orbit[..n].iter().all(|&o| o == 0)
    };
    if classes.is_empty() {
        return Ok(u64::from(leaf(&start)));
    }

    fn descend(
        depth: usize,
        frame: &Frame,
        classes: &[Vec<[u8; MAXN]>],
        n: usize,
        connected_only: bool,
        leaf: &dyn Fn(&Frame) -> bool,
    ) -> u64 {
        if depth == classes.len() {
            return u64::from(leaf(frame));
        }
        let mut total = 0;
        for g in &classes[depth] {
            let mut next = *frame;
            // prod * g: apply g first
            for (slot, &gx) in next.prod[..n].iter_mut().zip(&g[..n]) {
                *slot = frame.prod[gx as usize];
            }
            if connected_only {
                merge_orbits(&mut next.orbit, &g[..n], n);
            }
            total += descend(depth + 1, &next, classes, n, connected_only, leaf);
        }
        total
    }

    let total = AtomicU64::new(0);
    classes[0].par_iter().for_each(|g| {
        let mut next = start;
        next.prod[..n].copy_from_slice(&g[..n]);
        if connected_only {
            merge_orbits(&mut next.orbit, &g[..n], n);
        }
        let c = descend(1, &next, &classes, n, connected_only, &leaf);
        total.fetch_add(c, AtomicOrdering::Relaxed);
    });
    Ok(total.into_inner())
}

/// Strictly increasing index tuples `1 ≤ a_1 < … < a_l ≤ max`.
fn strictly_increasing(l: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(l: usize, from: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for a in from..=max {
            cur.push(a);
            rec(l, a + 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(l, 1, max, &mut Vec::new(), &mut out);
    out
}

/// Weakly increasing index tuples `1 ≤ b_1 ≤ … ≤ b_m ≤ max`.
fn weakly_increasing(m: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, from: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for b in from..=max {
            cur.push(b);
            rec(m, b, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, 1, max, &mut Vec::new(), &mut out);
    out
}

fn permutations_of(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// `𝒲_{G_{c,d}}(μ^{(1..l)}; ν^{(1..m)})`.
///
/// The sign is `(-1)^{Σ_j ℓ*(ν^{(j)}) - m}`, summing over the `m`
/// denominator profiles. More numerator profiles than `L` give the empty
/// sum, zero.
pub fn weight_wcal(mu_list: &[Partition], nu_list: &[Partition], g: &WeightGenSpec) -> Result<ParamPoly> {
    if let Some(p) = mu_list.iter().chain(nu_list).find(|p| p.is_trivial()) {
        return Err(HurwitzError::Domain(format!(
            "weights are defined for nontrivial profiles only, got {p}"
        )));
    }
    let mu_col: Vec<u32> = mu_list.iter().map(|p| p.colength() as u32).collect();
    let nu_col: Vec<u32> = nu_list.iter().map(|p| p.colength() as u32).collect();
    weight_from_colengths(&mu_col, &nu_col, g.context())
}

/// `𝒲` depends on the profiles only through their colengths.
pub fn weight_from_colengths(mu_col: &[u32], nu_col: &[u32], ctx: VarContext) -> Result<ParamPoly> {
    let (l, m) = (mu_col.len(), nu_col.len());
    if l > ctx.l || (m > 0 && ctx.m == 0) {
        return Ok(ParamPoly::zero(ctx));
    }
    let mut acc = ParamPoly::zero(ctx);
    let perms_l = permutations_of(l);
    let perms_m = permutations_of(m);
    for a in strictly_increasing(l, ctx.l) {
        for b in weakly_increasing(m, ctx.m) {
            for s in &perms_l {
                for t in &perms_m {
                    let mut e = vec![0u32; ctx.width()];
                    for i in 0..l {
                        e[a[s[i]] - 1] += mu_col[i];
                    }
                    for j in 0..m {
                        e[ctx.l + b[t[j]] - 1] += nu_col[j];
                    }
                    acc.add_term(e, Rational::one());
                }
            }
        }
    }
    let exponent: i64 = nu_col.iter().map(|&x| x as i64).sum::<i64>() - m as i64;
    let sign: i64 = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
    let denom = factorial(l) * factorial(m);
    Ok(acc.scale(&Rational::new(BigInt::from(sign), denom)))
}

/// Multisets (sorted tuples) of nontrivial partitions of `n`, of size `k`
/// and total colength `d`.
pub fn weakly_ordered_tuples(n: usize, k: usize, d: usize) -> Vec<Vec<Partition>> {
    let candidates: Vec<Partition> = partitions_of(n).into_iter().filter(|p| !p.is_trivial()).collect();
    fn rec(
        cands: &[Partition],
        from: usize,
        k: usize,
        rest: usize,
        cur: &mut Vec<Partition>,
        out: &mut Vec<Vec<Partition>>,
    ) {
        if cur.len() == k {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots_left = k - cur.len();
        for i in from..cands.len() {
            let c = cands[i].colength();
            if c > rest || rest - c < slots_left - 1 {
                continue;
            }
            cur.push(cands[i].clone());
            rec(cands, i, k, rest - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&candidates, 0, k, d, &mut Vec::new(), &mut out);
    out
}

/// Number of distinct orderings of a sorted tuple, `k! / |aut|`.
pub fn orbit_size(sorted: &[Partition]) -> BigInt {
    let mut counts: HashMap<&Partition, usize> = HashMap::new();
    for p in sorted {
        *counts.entry(p).or_default() += 1;
    }
    counts
        .values()
        .fold(factorial(sorted.len()), |acc, &c| acc / factorial(c))
}

/// `H^d_{G_{c,d}}(μ, ν)` with pure numbers from the character route.
pub fn weighted_hurwitz(
    g: &WeightGenSpec,
    d: usize,
    mu: &Partition,
    nu: &Partition,
    tables: &CharTables,
) -> Result<ParamPoly> {
    weighted_hurwitz_with(g, d, mu, nu, |profiles| {
        pure_hurwitz_char(&ProfileTuple::new(profiles.to_vec())?, tables)
    })
}

/// `H^d_G(μ, ν)` with a caller-supplied pure Hurwitz number.
///
/// Passing the connected brute-force count yields `H̃^d_G(μ, ν)`.
/// Ordered tuples are summed as weakly ordered tuples times their orbit
/// size; both `𝒲` and `H` are symmetric in the reordered slots.
pub fn weighted_hurwitz_with<F>(g: &WeightGenSpec, d: usize, mu: &Partition, nu: &Partition, mut pure: F) -> Result<ParamPoly>
where
    F: FnMut(&[Partition]) -> Result<Rational>,
{
    if mu.weight() != nu.weight() {
        return Err(HurwitzError::Dimension(format!(
            "|{mu}| = {} but |{nu}| = {}",
            mu.weight(),
            nu.weight()
        )));
    }
    let n = mu.weight();
    let ctx = g.context();
    let mut acc = ParamPoly::zero(ctx);
    if n == 0 {
        // only the empty cover, unbranched
        if d == 0 {
            acc = ParamPoly::one(ctx);
        }
        return Ok(acc);
    }
    let mut weight_cache: HashMap<(Vec<u32>, Vec<u32>), ParamPoly> = HashMap::new();
    for d_plus in 0..=d {
        let d_minus = d - d_plus;
        for l in 0..=g.l.min(d_plus) {
            let mu_tuples = weakly_ordered_tuples(n, l, d_plus);
            for m in 0..=d_minus {
                if m > 0 && g.m == 0 {
                    continue;
                }
                let nu_tuples = weakly_ordered_tuples(n, m, d_minus);
                for mus in &mu_tuples {
                    for nus in &nu_tuples {
                        let mut profiles: Vec<Partition> = mus.iter().chain(nus).cloned().collect();
                        profiles.push(mu.clone());
                        profiles.push(nu.clone());
                        let h = pure(&profiles)?;
                        if h.is_zero() {
                            continue;
                        }
                        let mut mc: Vec<u32> = mus.iter().map(|p| p.colength() as u32).collect();
                        let mut nc: Vec<u32> = nus.iter().map(|p| p.colength() as u32).collect();
                        mc.sort_unstable();
                        nc.sort_unstable();
                        let w = match weight_cache.get(&(mc.clone(), nc.clone())) {
                            Some(w) => w.clone(),
                            None => {
                                let w = weight_from_colengths(&mc, &nc, ctx)?;
                                weight_cache.insert((mc, nc), w.clone());
                                w
                            }
                        };
                        let mult = Rational::from_integer(orbit_size(mus) * orbit_size(nus));
                        acc += &w.scale(&(h * mult));
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// Coefficient `E^d_j` of `c_1^j d_1^{d-j}` in a polynomial over `(c_1, d_1)`.
pub fn monotone_coefficient(h: &ParamPoly, j: usize, d: usize) -> Result<Rational> {
    if h.context() != VarContext::new(1, 1) {
        return Err(HurwitzError::Dimension(format!(
            "monotone coefficients need L=1, M=1, got L={}, M={}",
            h.context().l,
            h.context().m
        )));
    }
    if j > d {
        return Ok(Rational::zero());
    }
    Ok(h.coefficient(&[j as u32, (d - j) as u32]))
}
