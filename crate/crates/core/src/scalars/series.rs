//! Truncated power series in ħ with base-field coefficients.

use super::Scalar;
use crate::error::{Error, Result};

/// c_0 + c_1 ħ + … + c_K ħ^K, computed modulo ħ^{K+1}.
///
/// Coefficients are non-series scalars; `coeffs.len() == order + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HSeries {
    pub(crate) coeffs: Vec<Scalar>,
    pub(crate) order: usize,
}

impl HSeries {
    pub fn new(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        debug_assert!(coeffs.iter().all(|c| !matches!(c, Scalar::Series(_))));
        coeffs.resize(order + 1, Scalar::zero());
        HSeries { coeffs, order }
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// ħ itself at truncation order K (K ≥ 1).
    pub fn generator(order: usize) -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn truncate(&self, order: usize) -> HSeries {
        HSeries::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub(crate) fn try_add(&self, other: &HSeries) -> Result<HSeries> {
        let order = self.order.min(other.order);
        let c = (0..=order)
            .map(|k| self.coeffs[k].try_add(&other.coeffs[k]))
            .collect::<Result<Vec<_>>>()?;
        Ok(HSeries::new(c, order))
    }

    pub(crate) fn neg(&self) -> HSeries {
        HSeries::new(self.coeffs.iter().map(|c| -c).collect(), self.order)
    }

    pub(crate) fn try_mul(&self, other: &HSeries) -> Result<HSeries> {
        let order = self.order.min(other.order);
        let mut out = vec![Scalar::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let t = self.coeffs[i].try_mul(&other.coeffs[j])?;
                out[i + j] = out[i + j].try_add(&t)?;
            }
        }
        Ok(HSeries::new(out, order))
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub(crate) fn try_inv(&self) -> Result<HSeries> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv0 = c0.try_inv()?;
        let mut out: Vec<Scalar> = vec![inv0.clone()];
        for k in 1..=self.order {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc.try_add(&self.coeffs[j].try_mul(&out[k - j])?)?;
            }
            out.push(-(&acc.try_mul(&inv0)?));
        }
        Ok(HSeries::new(out, self.order))
    }

    /// Divide by ħ, lowering the truncation order by one.
    pub fn div_by_h(&self) -> Result<HSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Divisibility(self.render()));
        }
        if self.order == 0 {
            return Err(Error::Divisibility(self.render()));
        }
        Ok(HSeries::new(self.coeffs[1..].to_vec(), self.order - 1))
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.render_factor();
            parts.push(match k {
                0 => c.to_string(),
                1 => format!("{cs}*h"),
                _ => format!("{cs}*h^{k}"),
            });
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        format!("{body} (mod h^{})", self.order + 1)
    }
}
