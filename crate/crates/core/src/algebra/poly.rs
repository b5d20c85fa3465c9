//! Sparse polynomials in the weighting parameters `c_1..c_L, d_1..d_M`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{display, Rational};
use crate::error::{HurwitzError, Result};

/// Number of numerator (`c`) and denominator (`d`) parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarContext {
    pub l: usize,
    pub m: usize,
}

impl VarContext {
    pub fn new(l: usize, m: usize) -> Self {
        Self { l, m }
    }

    pub fn width(&self) -> usize {
        self.l + self.m
    }
}

/// Exponent vector: exponents of `c_1..c_L` followed by those of `d_1..d_M`.
pub type Exponents = Vec<u32>;

/// Exact polynomial over [`Rational`] with a fixed variable context.
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    ctx: VarContext,
    terms: BTreeMap<Exponents, Rational>,
}

impl ParamPoly {
    pub fn zero(ctx: VarContext) -> Self {
        Self {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: VarContext) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: VarContext, value: Rational) -> Self {
        Self::monomial(ctx, vec![0; ctx.width()], value)
    }

    /// Panics if `exps` does not have length `L + M`.
    pub fn monomial(ctx: VarContext, exps: Exponents, coeff: Rational) -> Self {
        assert_eq!(exps.len(), ctx.width(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Self { ctx, terms }
    }

    /// The parameter `c_i` (1-based).
    pub fn c(ctx: VarContext, i: usize) -> Self {
        assert!(i >= 1 && i <= ctx.l, "c index {i} out of range");
        let mut e = vec![0; ctx.width()];
        e[i - 1] = 1;
        Self::monomial(ctx, e, Rational::one())
    }

    /// The parameter `d_j` (1-based).
    pub fn d(ctx: VarContext, j: usize) -> Self {
        assert!(j >= 1 && j <= ctx.m, "d index {j} out of range");
        let mut e = vec![0; ctx.width()];
        e[ctx.l + j - 1] = 1;
        Self::monomial(ctx, e, Rational::one())
    }

    /// Builds a polynomial from `(c exponents, d exponents, coefficient)` triples.
    pub fn from_terms<I>(ctx: VarContext, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(ctx);
        for (c, d, q) in terms {
            if c.len() != ctx.l || d.len() != ctx.m {
                return Err(HurwitzError::Dimension(format!(
                    "term with {} c-exponents and {} d-exponents in context L={}, M={}",
                    c.len(),
                    d.len(),
                    ctx.l,
                    ctx.m
                )));
            }
            let mut e = c;
            e.extend(d);
            p.add_term(e, q);
        }
        Ok(p)
    }

    pub fn context(&self) -> VarContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.ctx.width()])
    }

    pub fn add_term(&mut self, exps: Exponents, coeff: Rational) {
        debug_assert_eq!(exps.len(), self.ctx.width());
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(HurwitzError::Dimension(format!(
                "parameter contexts (L={}, M={}) and (L={}, M={})",
                self.ctx.l, self.ctx.m, other.ctx.l, other.ctx.m
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (e, q) in &other.terms {
            out.add_term(e.clone(), q.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = Self::zero(self.ctx);
        for (ea, qa) in &self.terms {
            for (eb, qb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, qa * qb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.ctx);
        }
        Self {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * q))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.ctx), |acc, _| &acc * self)
    }

    /// Exact evaluation at rational parameter values.
    pub fn eval(&self, c: &[Rational], d: &[Rational]) -> Result<Rational> {
        self.check_values(c.len(), d.len())?;
        let vals: Vec<&Rational> = c.iter().chain(d).collect();
        let mut acc = Rational::zero();
        for (e, q) in &self.terms {
            let mut t = q.clone();
            for (v, &k) in vals.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow((*v).clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, c: &[f64], d: &[f64]) -> Result<f64> {
        self.check_values(c.len(), d.len())?;
        let vals: Vec<f64> = c.iter().chain(d).copied().collect();
        Ok(self
            .terms
            .iter()
            .map(|(e, q)| {
                vals.iter()
                    .zip(e)
                    .fold(super::rational::to_f64(q), |t, (v, &k)| t * v.powi(k as i32))
            })
            .sum())
    }

    fn check_values(&self, nc: usize, nd: usize) -> Result<()> {
        if nc != self.ctx.l || nd != self.ctx.m {
            return Err(HurwitzError::Dimension(format!(
                "{nc} c-values and {nd} d-values for context L={}, M={}",
                self.ctx.l, self.ctx.m
            )));
        }
        Ok(())
    }

    /// Total degree of the highest-degree term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

/// Exact product; fails if the variable contexts differ.
pub fn poly_mul(a: &ParamPoly, b: &ParamPoly) -> Result<ParamPoly> {
    a.checked_mul(b)
}

// Operator forms panic on context mismatch; internal code only combines
// polynomials built from one context.
impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_add(rhs).expect("ParamPoly context mismatch")
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        assert_eq!(self.ctx, rhs.ctx, "ParamPoly context mismatch");
        for (e, q) in &rhs.terms {
            self.add_term(e.clone(), q.clone());
        }
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(e, q)| (e.clone(), -q)).collect(),
        }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_mul(rhs).expect("ParamPoly context mismatch")
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, q)) in self.terms.iter().enumerate() {
            let mut vars = Vec::new();
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let name = if k < self.ctx.l {
                    format!("c{}", k + 1)
                } else {
                    format!("d{}", k - self.ctx.l + 1)
                };
                vars.push(if x == 1 { name } else { format!("{name}^{x}") });
            }
            if i > 0 {
                write!(f, " + ")?;
            }
            if vars.is_empty() {
                write!(f, "{}", display(q))?;
            } else if q.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", display(q), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly[L={},M={}]({})", self.ctx.l, self.ctx.m, self)
    }
}
