//! Valuation of European payoffs when the law of the underlying is only
//! known up to a family of probability measures.
//!
//! A *regularity* is a finite family of discrete measures on a grid of
//! terminal prices. Decisions are ranked by their worst-case expected profit
//! over the family, which yields bid/ask/indifference prices, forward and
//! parity diagnostics, the risk of an uncovered position and a static hedge
//! ratio.
//!
//! All numerics are generic over [`Scalar`]; the `*64` / `*32` aliases below
//! fix the precision.
//!
//! ```
//! use std::sync::Arc;
//! use regval::{DiscreteMeasure, MarketParams, Payoff, Regularity, StateGrid};
//!
//! let grid = Arc::new(StateGrid::new(vec![90.0, 130.0]).unwrap());
//! let reg = Regularity::complete_uncertainty(&grid);
//! let market = MarketParams::new(0.0, 1.0).unwrap();
//! let q = regval::quote(&Payoff::call(100.0), &reg, &market).unwrap();
//! assert_eq!((q.bid, q.mid, q.ask), (0.0, 15.0, 30.0));
//! # let _ = DiscreteMeasure::dirac(&grid, 0);
//! ```

pub mod axioms;
pub mod error;
pub mod expectation;
pub mod hedging;
pub mod measure;
pub mod regularity;
pub mod scalar;
pub mod state;
pub mod valuation;

pub use error::{Error, Result};
pub use expectation::{bounds, criterion, expectation, indifferent, ExpectationBounds, Indifference};
pub use hedging::{
    generalized_delta, hedged_portfolio_report, uncovered_min_profit, HedgeReport,
};
pub use measure::{lognormal, DiscreteMeasure, LognormalGridSpec};
pub use regularity::Regularity;
pub use scalar::Scalar;
pub use state::{Leg, MarketParams, Payoff, Portfolio, StateGrid};
pub use valuation::{
    black_scholes_call, calibrate_scale, forward_price, forward_value, implied_forward,
    parity_residual, quote, quote_values, spot_condition_residual, Calibration, PriceQuote,
};

pub type StateGrid64 = StateGrid<f64>;
pub type Payoff64 = Payoff<f64>;
pub type Leg64 = Leg<f64>;
pub type Portfolio64 = Portfolio<f64>;
pub type MarketParams64 = MarketParams<f64>;
pub type DiscreteMeasure64 = DiscreteMeasure<f64>;
pub type Regularity64 = Regularity<f64>;
pub type PriceQuote64 = PriceQuote<f64>;
pub type HedgeReport64 = HedgeReport<f64>;

pub type StateGrid32 = StateGrid<f32>;
pub type Payoff32 = Payoff<f32>;
pub type MarketParams32 = MarketParams<f32>;
pub type DiscreteMeasure32 = DiscreteMeasure<f32>;
pub type Regularity32 = Regularity<f32>;
pub type PriceQuote32 = PriceQuote<f32>;
