//! Worst-case and best-case expectations over a regularity.
//!
//! The decision criterion of a portfolio is the minimum over the family of its
//! expected profit at maturity.

use crate::error::{invalid_arg, Result};
use crate::measure::DiscreteMeasure;
use crate::regularity::Regularity;
use crate::scalar::{approx_eq, Scalar};
use crate::state::{MarketParams, Portfolio};

/// Extreme expectations of one value vector over a family. Indices point into
/// the family; ties resolve to the lowest index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationBounds<T> {
    pub min_exp: T,
    pub max_exp: T,
    pub argmin_index: usize,
    pub argmax_index: usize,
}

impl<T: Scalar> ExpectationBounds<T> {
    /// `(min + max) / 2`
    pub fn mid(&self) -> T {
        T::midpoint(self.min_exp, self.max_exp)
    }

    pub fn spread(&self) -> T {
        self.max_exp - self.min_exp
    }
}

/// `Σ w_i v_i`
pub fn expectation<T: Scalar>(measure: &DiscreteMeasure<T>, values: &[T]) -> Result<T> {
    let weights = measure.weights();
    if weights.len() != values.len() {
        return Err(invalid_arg(format!(
            "{} values for a measure on {} states",
            values.len(),
            weights.len()
        )));
    }
    Ok(weights
        .iter()
        .zip(values)
        .filter(|(w, _)| **w != T::zero())
        .fold(T::zero(), |acc, (w, v)| acc + *w * *v))
}

pub fn bounds<T: Scalar>(reg: &Regularity<T>, values: &[T]) -> Result<ExpectationBounds<T>> {
    let mut members = reg.measures().iter().map(|m| expectation(m, values));
    let first = members.next().expect("regularity is nonempty")?;
    let mut out = ExpectationBounds {
        min_exp: first,
        max_exp: first,
        argmin_index: 0,
        argmax_index: 0,
    };
    for (i, e) in members.enumerate() {
        let e = e?;
        if e < out.min_exp {
            out.min_exp = e;
            out.argmin_index = i + 1;
        }
        if e > out.max_exp {
            out.max_exp = e;
            out.argmax_index = i + 1;
        }
    }
    Ok(out)
}

/// Worst-case expected profit at maturity of `portfolio`.
pub fn criterion<T: Scalar>(
    portfolio: &Portfolio<T>,
    reg: &Regularity<T>,
    market: &MarketParams<T>,
) -> Result<T> {
    let profit = portfolio.profit(reg.grid(), market)?;
    Ok(bounds(reg, &profit)?.min_exp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Indifference<T> {
    pub indifferent: bool,
    pub criterion_a: T,
    pub criterion_b: T,
}

/// Compares the criteria of two portfolios up to
/// `1e-9 · (1 + max(|a|, |b|))`.
pub fn indifferent<T: Scalar>(
    a: &Portfolio<T>,
    b: &Portfolio<T>,
    reg: &Regularity<T>,
    market: &MarketParams<T>,
) -> Result<Indifference<T>> {
    let criterion_a = criterion(a, reg, market)?;
    let criterion_b = criterion(b, reg, market)?;
    Ok(Indifference {
        indifferent: approx_eq(criterion_a, criterion_b, T::rel_tolerance()),
        criterion_a,
        criterion_b,
    })
}
