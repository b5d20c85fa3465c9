//! Double power-sum series `Σ γ^N p_μ(t) p_ν(s) · (β-series)`.
//!
//! The flow variables are never materialized: a series is the table of its
//! coefficients keyed by `(N, μ, ν)`. Products use `p_μ p_μ' = p_{μ∪μ'}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{ParamPoly, VarContext};
use super::rational::Rational;
use super::series::BetaSeries;
use crate::error::{HurwitzError, Result};
use crate::symmetric::Partition;

/// Key of a `γ^N p_μ(t) p_ν(s)` coefficient. Sorts by `N`, then `μ`, then `ν`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PQKey {
    #[serde(rename = "N")]
    pub n: usize,
    pub mu: Partition,
    pub nu: Partition,
}

impl PQKey {
    pub fn new(mu: Partition, nu: Partition) -> Result<Self> {
        if mu.weight() != nu.weight() {
            return Err(HurwitzError::Dimension(format!(
                "|{mu}| = {} but |{nu}| = {}",
                mu.weight(),
                nu.weight()
            )));
        }
        Ok(Self {
            n: mu.weight(),
            mu,
            nu,
        })
    }

    pub fn unit() -> Self {
        Self {
            n: 0,
            mu: Partition::empty(),
            nu: Partition::empty(),
        }
    }

    fn union(&self, other: &Self) -> Self {
        Self {
            n: self.n + other.n,
            mu: self.mu.union(&other.mu),
            nu: self.nu.union(&other.nu),
        }
    }
}

/// Truncated double series; entries with `N > gamma_order` are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PQSeries {
    ctx: VarContext,
    gamma_order: usize,
    beta_order: usize,
    entries: BTreeMap<PQKey, BetaSeries>,
}

impl PQSeries {
    pub fn zero(ctx: VarContext, gamma_order: usize, beta_order: usize) -> Self {
        Self {
            ctx,
            gamma_order,
            beta_order,
            entries: BTreeMap::new(),
        }
    }

    pub fn one(ctx: VarContext, gamma_order: usize, beta_order: usize) -> Self {
        let mut s = Self::zero(ctx, gamma_order, beta_order);
        s.entries
            .insert(PQKey::unit(), BetaSeries::one(ctx, beta_order));
        s
    }

    pub fn context(&self) -> VarContext {
        self.ctx
    }

    pub fn gamma_order(&self) -> usize {
        self.gamma_order
    }

    pub fn beta_order(&self) -> usize {
        self.beta_order
    }

    pub fn entries(&self) -> &BTreeMap<PQKey, BetaSeries> {
        &self.entries
    }

    pub fn get(&self, key: &PQKey) -> Option<&BetaSeries> {
        self.entries.get(key)
    }

    /// Entry at `(|μ|, μ, ν)`, zero when absent.
    pub fn entry(&self, mu: &Partition, nu: &Partition) -> BetaSeries {
        PQKey::new(mu.clone(), nu.clone())
            .ok()
            .and_then(|k| self.entries.get(&k).cloned())
            .unwrap_or_else(|| BetaSeries::zero(self.ctx, self.beta_order))
    }

    /// Adds `series` into the entry at `key`. Keys beyond the γ order are dropped.
    pub fn accumulate(&mut self, key: PQKey, series: &BetaSeries) -> Result<()> {
        if series.order() != self.beta_order || series.context() != self.ctx {
            return Err(HurwitzError::Dimension(format!(
                "entry of order {} for a table of β order {}",
                series.order(),
                self.beta_order
            )));
        }
        if key.mu.weight() != key.n || key.nu.weight() != key.n {
            return Err(HurwitzError::Dimension(format!(
                "key N={} with |μ|={} and |ν|={}",
                key.n,
                key.mu.weight(),
                key.nu.weight()
            )));
        }
        if key.n > self.gamma_order {
            return Ok(());
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !series.is_zero() {
                    v.insert(series.clone());
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(series);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.gamma_order != other.gamma_order
            || self.beta_order != other.beta_order
            || self.ctx != other.ctx
        {
            return Err(HurwitzError::Dimension(format!(
                "double series with orders (γ {}, β {}) and (γ {}, β {})",
                self.gamma_order, self.beta_order, other.gamma_order, other.beta_order
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.accumulate(k.clone(), v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.ctx, self.gamma_order, self.beta_order);
        if q.is_zero() {
            return out;
        }
        out.entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.scale(q)))
            .collect();
        out
    }

    /// Product truncated at the γ order.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.ctx, self.gamma_order, self.beta_order);
        for (ka, va) in &self.entries {
            for (kb, vb) in &other.entries {
                if ka.n + kb.n > self.gamma_order {
                    continue;
                }
                out.accumulate(ka.union(kb), &va.checked_mul(vb)?)?;
            }
        }
        Ok(out)
    }

    /// The `(0, ∅, ∅)` entry.
    pub fn constant_entry(&self) -> BetaSeries {
        self.entries
            .get(&PQKey::unit())
            .cloned()
            .unwrap_or_else(|| BetaSeries::zero(self.ctx, self.beta_order))
    }

    fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.entries.remove(&PQKey::unit());
        out
    }

    /// Restriction to keys of a single weight `N`.
    pub fn weight_slice(&self, n: usize) -> BTreeMap<PQKey, BetaSeries> {
        self.entries
            .iter()
            .filter(|(k, _)| k.n == n)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

pub fn pq_mul(a: &PQSeries, b: &PQSeries) -> Result<PQSeries> {
    a.checked_mul(b)
}

/// Formal logarithm `Σ_{k≥1} (-1)^{k+1} (a-1)^k / k`, truncated in γ.
pub fn pq_log(a: &PQSeries) -> Result<PQSeries> {
    let one = PQSeries::one(a.ctx, a.gamma_order, a.beta_order);
    if a.constant_entry() != one.constant_entry() {
        return Err(HurwitzError::Domain(
            "logarithm needs constant term exactly 1".into(),
        ));
    }
    let x = a.without_constant();
    let mut power = x.clone();
    let mut out = PQSeries::zero(a.ctx, a.gamma_order, a.beta_order);
    // (a-1)^k has γ-degree at least k.
    for k in 1..=a.gamma_order {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.checked_add(&power.scale(&Rational::new(sign.into(), (k as i64).into())))?;
        power = power.checked_mul(&x)?;
    }
    Ok(out)
}

/// Formal exponential `Σ_{k≥0} x^k / k!`; `x` must have no constant entry.
pub fn pq_exp(x: &PQSeries) -> Result<PQSeries> {
    if !x.constant_entry().is_zero() {
        return Err(HurwitzError::Domain(
            "exponential needs vanishing constant term".into(),
        ));
    }
    let mut out = PQSeries::one(x.ctx, x.gamma_order, x.beta_order);
    let mut term = out.clone();
    let mut fact = Rational::one();
    for k in 1..=x.gamma_order {
        term = term.checked_mul(x)?;
        fact *= Rational::from_integer((k as i64).into());
        out = out.checked_add(&term.scale(&(Rational::one() / &fact)))?;
    }
    Ok(out)
}

/// Convenience: a single-term series `coeff · γ^N p_μ p_ν` with a constant β-series.
pub fn pq_monomial(
    ctx: VarContext,
    gamma_order: usize,
    beta_order: usize,
    mu: Partition,
    nu: Partition,
    coeff: ParamPoly,
) -> Result<PQSeries> {
    let mut s = PQSeries::zero(ctx, gamma_order, beta_order);
    s.accumulate(PQKey::new(mu, nu)?, &BetaSeries::constant(coeff, beta_order))?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use proptest::prelude::*;

    const CTX: VarContext = VarContext { l: 0, m: 1 };

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn mono(mu: &[usize], nu: &[usize], q: Rational) -> PQSeries {
        pq_monomial(CTX, 2, 0, p(mu), p(nu), ParamPoly::constant(CTX, q)).unwrap()
    }

    #[test]
    fn identity_product() {
        let x = mono(&[1], &[1], int(3));
        let one = PQSeries::one(CTX, 2, 0);
        assert_eq!(pq_mul(&one, &x).unwrap(), x);
    }

    #[test]
    fn union_of_keys() {
        let x = mono(&[1], &[1], int(1));
        assert_eq!(pq_mul(&x, &x).unwrap(), mono(&[1, 1], &[1, 1], int(1)));
    }

    #[test]
    fn square_of_binomial() {
        let a = PQSeries::one(CTX, 2, 0).checked_add(&mono(&[1], &[1], int(1))).unwrap();
        let sq = pq_mul(&a, &a).unwrap();
        let expected = PQSeries::one(CTX, 2, 0)
            .checked_add(&mono(&[1], &[1], int(2)))
            .unwrap()
            .checked_add(&mono(&[1, 1], &[1, 1], int(1)))
            .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn log_of_one() {
        let one = PQSeries::one(CTX, 3, 1);
        assert!(pq_log(&one).unwrap().entries().is_empty());
    }

    #[test]
    fn log_of_one_plus_x() {
        let a = PQSeries::one(CTX, 2, 0).checked_add(&mono(&[1], &[1], int(1))).unwrap();
        let expected = mono(&[1], &[1], int(1))
            .checked_add(&mono(&[1, 1], &[1, 1], rat(-1, 2)))
            .unwrap();
        assert_eq!(pq_log(&a).unwrap(), expected);
    }

    #[test]
    fn log_kills_disconnected_trivial_cover() {
        let a = PQSeries::one(CTX, 2, 0)
            .checked_add(&mono(&[1], &[1], int(1)))
            .unwrap()
            .checked_add(&mono(&[1, 1], &[1, 1], rat(1, 2)))
            .unwrap();
        let l = pq_log(&a).unwrap();
        assert!(l.entry(&p(&[1, 1]), &p(&[1, 1])).is_zero());
    }

    #[test]
    fn log_domain_error() {
        let a = mono(&[1], &[1], int(1));
        assert!(matches!(pq_log(&a), Err(HurwitzError::Domain(_))));
    }

    fn arb_series() -> impl Strategy<Value = PQSeries> {
        let keys: Vec<(Vec<usize>, Vec<usize>)> = vec![
            (vec![1], vec![1]),
            (vec![2], vec![2]),
            (vec![2], vec![1, 1]),
            (vec![1, 1], vec![2]),
            (vec![1, 1], vec![1, 1]),
            (vec![3], vec![2, 1]),
            (vec![2, 1], vec![1, 1, 1]),
        ];
        prop::collection::vec((0..keys.len(), -4i64..5, 1i64..4, 0u32..2, 0usize..2), 0..6).prop_map(
            move |ts| {
                let ctx = VarContext::new(0, 1);
                let mut s = PQSeries::zero(ctx, 3, 1);
                for (ki, n, d, e, b) in ts {
                    let (mu, nu) = &keys[ki];
                    let mut bs = BetaSeries::zero(ctx, 1);
                    *bs.coeff_mut(b) = ParamPoly::monomial(ctx, vec![e], rat(n, d));
                    s.accumulate(PQKey::new(p(mu), p(nu)).unwrap(), &bs).unwrap();
                }
                s
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exp_inverts_log(x in arb_series()) {
            let a = PQSeries::one(x.context(), 3, 1).checked_add(&x).unwrap();
            let back = pq_exp(&pq_log(&a).unwrap()).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn product_is_commutative_and_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(pq_mul(&a, &b).unwrap(), pq_mul(&b, &a).unwrap());
            prop_assert_eq!(
                pq_mul(&pq_mul(&a, &b).unwrap(), &c).unwrap(),
                pq_mul(&a, &pq_mul(&b, &c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                pq_mul(&a, &b.checked_add(&c).unwrap()).unwrap(),
                pq_mul(&a, &b).unwrap().checked_add(&pq_mul(&a, &c).unwrap()).unwrap()
            );
        }
    }
}
