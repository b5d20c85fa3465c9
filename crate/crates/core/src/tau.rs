//! Content products `r_λ` and the coefficient table of the hypergeometric
//! τ-function in the power-sum basis.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::rational::Rational;
use crate::algebra::{pq_log, series_mul, BetaSeries, PQKey, PQSeries, ParamPoly, VarContext};
use crate::error::Result;
use crate::hurwitz::WeightGenSpec;
use crate::symmetric::partition::{partitions_of, Partition};
use crate::symmetric::CharTables;

/// Taylor coefficients `g_0..g_dMax` of `G(z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSeries {
    pub g: WeightGenSpec,
    pub d_max: usize,
    taylor: Vec<ParamPoly>,
}

impl GSeries {
    pub fn taylor(&self) -> &[ParamPoly] {
        &self.taylor
    }

    pub fn coeff(&self, i: usize) -> &ParamPoly {
        &self.taylor[i]
    }
}

/// Monomial exponent vectors of degree `deg` in `k` variables.
fn compositions(deg: usize, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=deg {
        for mut rest in compositions(deg - first, k - 1) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// `e_j(c_1..c_L)` placed in the `c` slots of `ctx`.
fn elementary(ctx: VarContext, j: usize) -> ParamPoly {
    compositions(j, ctx.l)
        .into_iter()
        .filter(|e| e.iter().all(|&x| x <= 1))
        .fold(ParamPoly::zero(ctx), |mut acc, mut e| {
            e.resize(ctx.width(), 0);
            acc.add_term(e, Rational::one());
            acc
        })
}

/// `h_j(d_1..d_M)` placed in the `d` slots of `ctx`.
fn complete(ctx: VarContext, j: usize) -> ParamPoly {
    compositions(j, ctx.m)
        .into_iter()
        .fold(ParamPoly::zero(ctx), |mut acc, e| {
            let mut full = vec![0; ctx.l];
            full.extend(e);
            acc.add_term(full, Rational::one());
            acc
        })
}

/// `g_i = Σ_j e_j(c) h_{i-j}(d)` for `i ≤ dMax`.
pub fn g_coeffs(g: &WeightGenSpec, d_max: usize) -> GSeries {
    let ctx = g.context();
    let e: Vec<ParamPoly> = (0..=d_max).map(|j| elementary(ctx, j)).collect();
    let h: Vec<ParamPoly> = (0..=d_max).map(|j| complete(ctx, j)).collect();
    let taylor = (0..=d_max)
        .map(|i| {
            (0..=i).fold(ParamPoly::zero(ctx), |acc, j| &acc + &(&e[j] * &h[i - j]))
        })
        .collect();
    GSeries {
        g: g.clone(),
        d_max,
        taylor,
    }
}

fn r_from_taylor(gs: &GSeries, j: i64) -> BetaSeries {
    let mut coeffs = Vec::with_capacity(gs.d_max + 1);
    let mut power = BigInt::one();
    for gi in gs.taylor() {
        coeffs.push(gi.scale(&Rational::from_integer(power.clone())));
        power *= j;
    }
    BetaSeries::from_coeffs(coeffs).expect("shared context")
}

/// `r_j = G(jβ)` truncated at `β^{dMax}`.
pub fn r_j(g: &WeightGenSpec, j: i64, d_max: usize) -> BetaSeries {
    r_from_taylor(&g_coeffs(g, d_max), j)
}

/// `r_λ = ∏_{(i,j)∈λ} r_{j-i}`.
pub fn r_lambda(g: &WeightGenSpec, lambda: &Partition, d_max: usize) -> BetaSeries {
    r_lambda_with(&g_coeffs(g, d_max), lambda)
}

fn r_lambda_with(gs: &GSeries, lambda: &Partition) -> BetaSeries {
    let ctx = gs.g.context();
    let mut acc = BetaSeries::one(ctx, gs.d_max);
    for c in lambda.contents() {
        if c != 0 {
            acc = series_mul(&acc, &r_from_taylor(gs, c)).expect("shared context");
        }
    }
    acc
}

/// Coefficients of `τ^{G}(t, s)` in `p_μ(t) p_ν(s)` up to `N ≤ NMax`,
/// each a β-series truncated at `dMax`.
pub fn tau_table(g: &WeightGenSpec, n_max: usize, d_max: usize, tables: &CharTables) -> Result<PQSeries> {
    let ctx = g.context();
    let gs = g_coeffs(g, d_max);
    let mut tau = PQSeries::zero(ctx, n_max, d_max);
    for n in 0..=n_max {
        let table = tables.table(n)?;
        let parts = table.partitions();
        let r: Vec<BetaSeries> = parts.par_iter().map(|l| r_lambda_with(&gs, l)).collect();
        let entries: Vec<(PQKey, BetaSeries)> = (0..parts.len())
            .into_par_iter()
            .flat_map_iter(|mi| (0..parts.len()).map(move |ni| (mi, ni)))
            .map(|(mi, ni)| {
                let mut s = BetaSeries::zero(ctx, d_max);
                for (li, rl) in r.iter().enumerate() {
                    let chi = table.by_index(li, mi) * table.by_index(li, ni);
                    if chi != 0 {
                        s.add_assign(&rl.scale(&Rational::from_integer(BigInt::from(chi))));
                    }
                }
                let z = Rational::from_integer(parts[mi].z_big() * parts[ni].z_big());
                let key = PQKey::new(parts[mi].clone(), parts[ni].clone()).expect("same weight");
                (key, s.scale(&(Rational::one() / z)))
            })
            .collect();
        for (key, s) in entries {
            if !s.is_zero() {
                tau.accumulate(key, &s)?;
            }
        }
    }
    Ok(tau)
}

/// `log τ`, whose coefficients are the connected weighted Hurwitz numbers.
pub fn connected_table(tau: &PQSeries) -> Result<PQSeries> {
    pq_log(tau)
}

/// Entry `(μ, ν)` of a table, evaluated at a numeric `(c, d, β)`.
pub fn eval_entry(
    tau: &PQSeries,
    mu: &Partition,
    nu: &Partition,
    c: &[Rational],
    d: &[Rational],
    beta: &Rational,
) -> Result<Rational> {
    tau.entry(mu, nu).eval(c, d, beta)
}

/// Assembles the `(μ, ν)` entry from `r_λ` specialized first to numbers.
#[allow(clippy::too_many_arguments)]
pub fn specialized_entry(
    g: &WeightGenSpec,
    mu: &Partition,
    nu: &Partition,
    d_max: usize,
    c: &[Rational],
    d: &[Rational],
    beta: &Rational,
    tables: &CharTables,
) -> Result<Rational> {
    let n = mu.weight();
    let mut acc = Rational::zero();
    for lambda in partitions_of(n) {
        let chi = tables.chi(&lambda, mu)? * tables.chi(&lambda, nu)?;
        if chi == 0 {
            continue;
        }
        let r = r_lambda(g, &lambda, d_max).eval(c, d, beta)?;
        acc += r * Rational::from_integer(BigInt::from(chi));
    }
    Ok(acc / (mu.z() * nu.z()))
}
