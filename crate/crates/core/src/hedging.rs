//! Risk of an uncovered option position and the static hedge ratio built
//! from the spread of expectations across the family.

use crate::error::{Error, Result};
use crate::expectation::{bounds, criterion};
use crate::regularity::Regularity;
use crate::scalar::Scalar;
use crate::state::{Leg, MarketParams, Payoff, Portfolio};
use crate::valuation::{quote, spot_condition_residual};

/// Worst-case expected profit at maturity of a long position bought at the
/// mid price: `(min − max) / 2`. Never positive; the same for the seller.
pub fn uncovered_min_profit<T: Scalar>(payoff: &Payoff<T>, reg: &Regularity<T>) -> Result<T> {
    uncovered_min_profit_values(&payoff.evaluate(reg.grid())?, reg)
}

pub fn uncovered_min_profit_values<T: Scalar>(values: &[T], reg: &Regularity<T>) -> Result<T> {
    let b = bounds(reg, values)?;
    Ok((b.min_exp - b.max_exp) / T::two())
}

/// Units of underlying held per unit of option:
/// `−(max E f − min E f) / (max E θ − min E θ)`.
pub fn generalized_delta<T: Scalar>(payoff: &Payoff<T>, reg: &Regularity<T>) -> Result<T> {
    generalized_delta_values(&payoff.evaluate(reg.grid())?, reg)
}

pub fn generalized_delta_values<T: Scalar>(values: &[T], reg: &Regularity<T>) -> Result<T> {
    let underlying = bounds(reg, reg.grid().states())?;
    let denom = underlying.spread();
    let scale = underlying.max_exp.abs().max(underlying.min_exp.abs()).max(T::one());
    if denom <= T::epsilon() * T::lit(16.0) * scale {
        return Err(Error::DegenerateFamily(format!(
            "all members share the expected terminal price (spread {denom})"
        )));
    }
    Ok(-bounds(reg, values)?.spread() / denom)
}

/// Option hedged with the generalized delta, compared with the bare option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeReport<T> {
    pub delta: T,
    /// Worst-case expected profit at maturity of the unhedged long option.
    pub uncovered_min_profit: T,
    /// Worst-case expected profit at maturity of option plus delta units of
    /// underlying, by exact enumeration over the family.
    pub hedged_min_profit: T,
    /// Indifference price paid for the option at time zero.
    pub option_mid: T,
    pub spot: T,
}

/// The two-leg portfolio: one option bought at its mid, `delta` units of
/// the underlying bought at spot.
pub fn hedged_portfolio<T: Scalar>(payoff: &Payoff<T>, option_mid: T, delta: T, spot: T) -> Portfolio<T> {
    Portfolio::new(vec![
        Leg::long(payoff.clone(), option_mid),
        Leg { payoff: Payoff::Identity, quantity: delta, price: spot },
    ])
}

/// Requires the spot to satisfy the forward condition of the family to
/// within `1e-9·θ₀`.
pub fn hedged_portfolio_report<T: Scalar>(
    payoff: &Payoff<T>,
    reg: &Regularity<T>,
    market: &MarketParams<T>,
) -> Result<HedgeReport<T>> {
    let spot = market.spot()?;
    let residual = spot_condition_residual(reg, market)?;
    let tolerance = T::rel_tolerance() * spot.max(T::one());
    if residual.abs() > tolerance {
        return Err(Error::UncalibratedSpot {
            residual: residual.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    let values = payoff.evaluate(reg.grid())?;
    let delta = generalized_delta_values(&values, reg)?;
    let option_mid = quote(payoff, reg, market)?.mid;
    let book = hedged_portfolio(payoff, option_mid, delta, spot);
    Ok(HedgeReport {
        delta,
        uncovered_min_profit: uncovered_min_profit_values(&values, reg)?,
        hedged_min_profit: criterion(&book, reg, market)?,
        option_mid,
        spot,
    })
}
