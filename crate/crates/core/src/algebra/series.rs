//! Power series in `β` truncated at a fixed order, with [`ParamPoly`] coefficients.

use std::fmt;

use num_traits::Zero;

use super::poly::{ParamPoly, VarContext};
use super::rational::Rational;
use crate::error::{HurwitzError, Result};

/// `Σ_{k=0}^{order} coeffs[k] β^k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BetaSeries {
    ctx: VarContext,
    coeffs: Vec<ParamPoly>,
}

impl BetaSeries {
    pub fn zero(ctx: VarContext, order: usize) -> Self {
        Self {
            ctx,
            coeffs: vec![ParamPoly::zero(ctx); order + 1],
        }
    }

    pub fn one(ctx: VarContext, order: usize) -> Self {
        Self::constant(ParamPoly::one(ctx), order)
    }

    pub fn constant(p: ParamPoly, order: usize) -> Self {
        let ctx = p.context();
        let mut s = Self::zero(ctx, order);
        s.coeffs[0] = p;
        s
    }

    /// Builds a series from its coefficients; `order = coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<ParamPoly>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| HurwitzError::Dimension("series needs at least one coefficient".into()))?;
        let ctx = first.context();
        if coeffs.iter().any(|p| p.context() != ctx) {
            return Err(HurwitzError::Dimension(
                "series coefficients from different parameter contexts".into(),
            ));
        }
        Ok(Self { ctx, coeffs })
    }

    pub fn context(&self) -> VarContext {
        self.ctx
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    /// Coefficient of `β^k`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> ParamPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| ParamPoly::zero(self.ctx))
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut ParamPoly {
        &mut self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ParamPoly::is_zero)
    }

    /// Constant coefficient (`β^0` part) evaluated at zero parameters.
    pub fn constant_scalar(&self) -> Rational {
        self.coeffs[0].constant_term()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(HurwitzError::Dimension(format!(
                "series orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        if self.ctx != other.ctx {
            return Err(HurwitzError::Dimension("series parameter contexts differ".into()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order();
        let mut out = Self::zero(self.ctx, n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check(other).expect("series mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|p| p.scale(q)).collect(),
        }
    }

    pub fn mul_poly(&self, p: &ParamPoly) -> Self {
        Self {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    /// Substitutes `β → -β`.
    pub fn negate_beta(&self) -> Self {
        Self {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, p)| if k % 2 == 1 { -p } else { p.clone() })
                .collect(),
        }
    }

    /// Exact evaluation of the truncated polynomial in `β`.
    pub fn eval(&self, c: &[Rational], d: &[Rational], beta: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for p in self.coeffs.iter().rev() {
            acc = acc * beta + p.eval(c, d)?;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, c: &[f64], d: &[f64], beta: f64) -> Result<f64> {
        let mut acc = 0.0;
        for p in self.coeffs.iter().rev() {
            acc = acc * beta + p.eval_f64(c, d)?;
        }
        Ok(acc)
    }
}

/// Exact truncated product; fails on order or context mismatch.
pub fn series_mul(a: &BetaSeries, b: &BetaSeries) -> Result<BetaSeries> {
    a.checked_mul(b)
}

impl fmt::Display for BetaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({p})")?,
                1 => write!(f, "({p})b")?,
                _ => write!(f, "({p})b^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(b^{})", self.order() + 1)
    }
}

impl fmt::Debug for BetaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BetaSeries({self})")
    }
}
