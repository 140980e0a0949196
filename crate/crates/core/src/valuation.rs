//! Indifference, bid and ask prices, forward relations and consistency
//! diagnostics for a regularity.

use libm::erfc;

use crate::error::{invalid_arg, Error, Result};
use crate::expectation::{bounds, ExpectationBounds};
use crate::regularity::Regularity;
use crate::scalar::Scalar;
use crate::state::{MarketParams, Payoff};

/// Time-zero prices of one payoff. `mid` is the indifference price at which
/// buyer and seller have equal worst-case expected profit; `bid`/`ask` zero
/// the buyer's/seller's criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceQuote<T> {
    pub bid: T,
    pub mid: T,
    pub ask: T,
    pub rate: T,
    pub maturity: T,
}

impl<T: Scalar> PriceQuote<T> {
    fn from_bounds(b: &ExpectationBounds<T>, market: &MarketParams<T>) -> Self {
        let disc = market.discount();
        Self {
            bid: b.min_exp * disc,
            mid: b.mid() * disc,
            ask: b.max_exp * disc,
            rate: market.rate,
            maturity: market.maturity,
        }
    }

    pub fn spread(&self) -> T {
        self.ask - self.bid
    }
}

pub fn quote<T: Scalar>(
    payoff: &Payoff<T>,
    reg: &Regularity<T>,
    market: &MarketParams<T>,
) -> Result<PriceQuote<T>> {
    quote_values(&payoff.evaluate(reg.grid())?, reg, market)
}

/// [`quote`] for a payoff already tabulated on the regularity's grid.
pub fn quote_values<T: Scalar>(
    values: &[T],
    reg: &Regularity<T>,
    market: &MarketParams<T>,
) -> Result<PriceQuote<T>> {
    Ok(PriceQuote::from_bounds(&bounds(reg, values)?, market))
}

/// `θ₀·e^{rT}`
pub fn forward_price<T: Scalar>(market: &MarketParams<T>) -> Result<T> {
    Ok(market.spot()? * market.growth())
}

/// Mid of the family's expected terminal price, undiscounted.
pub fn implied_forward<T: Scalar>(reg: &Regularity<T>) -> T {
    let states = reg.grid().states();
    bounds(reg, states).expect("grid-sized values").mid()
}

/// `e^{-rT}·implied_forward − θ₀`; zero when the family prices the
/// underlying at its spot.
pub fn spot_condition_residual<T: Scalar>(reg: &Regularity<T>, market: &MarketParams<T>) -> Result<T> {
    let spot = market.spot()?;
    Ok(market.discount() * implied_forward(reg) - spot)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration<T> {
    /// Multiplier applied to every state.
    pub scale: T,
    pub regularity: Regularity<T>,
}

/// Rescales the grid so that the family's implied forward equals
/// `θ₀·e^{rT}`, keeping every measure's weights.
pub fn calibrate_scale<T: Scalar>(reg: &Regularity<T>, market: &MarketParams<T>) -> Result<Calibration<T>> {
    let spot = market.spot()?;
    if spot.is_nan() || spot <= T::zero() {
        return Err(Error::CannotCalibrate(format!("spot must be positive, got {spot}")));
    }
    let implied = implied_forward(reg);
    if implied.is_nan() || implied <= T::zero() {
        return Err(Error::CannotCalibrate(format!(
            "implied forward must be positive, got {implied}"
        )));
    }
    let scale = spot * market.growth() / implied;
    let grid = reg
        .grid()
        .scaled(scale)
        .map_err(|e| Error::CannotCalibrate(e.to_string()))?;
    Ok(Calibration { scale, regularity: reg.rebased(grid)? })
}

/// Time-zero value of a long forward struck at `strike`: `θ₀ − θ*·e^{-rT}`.
pub fn forward_value<T: Scalar>(market: &MarketParams<T>, strike: T) -> Result<T> {
    Ok(market.spot()? - strike * market.discount())
}

/// `[mid(call) − mid(put)] − (θ₀·e^{rT} − θ*)` with undiscounted mids.
/// Zero when call, put and forward mids are mutually consistent.
pub fn parity_residual<T: Scalar>(reg: &Regularity<T>, strike: T, market: &MarketParams<T>) -> Result<T> {
    let forward = forward_price(market)?;
    let grid = reg.grid();
    let call = bounds(reg, &Payoff::call(strike).evaluate(grid)?)?.mid();
    let put = bounds(reg, &Payoff::put(strike).evaluate(grid)?)?.mid();
    Ok((call - put) - (forward - strike))
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Closed-form Black–Scholes price of a European call. Evaluated in `f64`
/// regardless of `T`.
pub fn black_scholes_call<T: Scalar>(s0: T, strike: T, r: T, sigma: T, t: T) -> Result<T> {
    let [s0, k, r, sigma, t] = [s0, strike, r, sigma, t].map(Scalar::to_f64_lossy);
    if !(s0 > 0.0 && k > 0.0 && sigma > 0.0 && t > 0.0) || !r.is_finite() {
        return Err(invalid_arg(format!(
            "black-scholes needs positive s0, strike, sigma, t (s0={s0}, k={k}, sigma={sigma}, t={t})"
        )));
    }
    let vol = sigma * t.sqrt();
    let d1 = ((s0 / k).ln() + (r + 0.5 * sigma * sigma) * t) / vol;
    let d2 = d1 - vol;
    let price = s0 * normal_cdf(d1) - k * (-r * t).exp() * normal_cdf(d2);
    Ok(T::lit(price))
}
