//! Terminal states, payoffs and portfolios of priced legs.

use crate::error::{invalid_arg, Error, Result};
use crate::scalar::Scalar;

/// Ordered, finite set of terminal underlying values.
///
/// States are strictly increasing, finite and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct StateGrid<T> {
    states: Vec<T>,
}

impl<T: Scalar> StateGrid<T> {
    pub fn new(states: Vec<T>) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid_arg("state grid must contain at least one state"));
        }
        for (i, s) in states.iter().enumerate() {
            if !s.is_finite() || *s < T::zero() {
                return Err(invalid_arg(format!(
                    "state {i} must be finite and nonnegative, got {s}"
                )));
            }
        }
        if let Some(i) = states.windows(2).position(|w| w[1] <= w[0]) {
            return Err(invalid_arg(format!(
                "states must be strictly increasing (states {i} and {})",
                i + 1
            )));
        }
        Ok(Self { states })
    }

    /// `points` equally spaced states from `min` to `max` inclusive.
    pub fn linspace(min: T, max: T, points: usize) -> Result<Self> {
        match points {
            0 => Err(invalid_arg("grid needs at least one point")),
            1 if min == max => Self::new(vec![min]),
            1 => Err(invalid_arg("a one-point grid needs min == max")),
            _ => {
                let step = (max - min) / T::from_usize(points - 1).unwrap();
                let mut states: Vec<T> = (0..points)
                    .map(|i| min + step * T::from_usize(i).unwrap())
                    .collect();
                states[points - 1] = max;
                Self::new(states)
            }
        }
    }

    pub fn states(&self) -> &[T] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn min_state(&self) -> T {
        self.states[0]
    }

    pub fn max_state(&self) -> T {
        self.states[self.states.len() - 1]
    }

    /// Index of the state exactly equal to `value`, if any.
    pub fn index_of(&self, value: T) -> Option<usize> {
        self.states.iter().position(|s| *s == value)
    }

    /// Same grid with every state multiplied by `factor > 0`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        if factor <= T::zero() || !factor.is_finite() {
            return Err(invalid_arg(format!("scale factor must be positive, got {factor}")));
        }
        Self::new(self.states.iter().map(|s| *s * factor).collect())
    }
}

/// Bounded terminal payoff `f(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Payoff<T> {
    Call { strike: T },
    Put { strike: T },
    Forward { strike: T },
    Constant(T),
    /// The underlying itself, `f(θ) = θ`.
    Identity,
    /// Piecewise-linear through `(θ, f)` knots sorted by `θ`; flat outside
    /// the knot range.
    Custom { knots: Vec<(T, T)> },
}

impl<T: Scalar> Payoff<T> {
    pub fn call(strike: T) -> Self {
        Payoff::Call { strike }
    }

    pub fn put(strike: T) -> Self {
        Payoff::Put { strike }
    }

    pub fn forward(strike: T) -> Self {
        Payoff::Forward { strike }
    }

    pub fn custom(knots: Vec<(T, T)>) -> Self {
        Payoff::Custom { knots }
    }

    /// Custom payoff that reproduces `values` exactly on the states of `grid`.
    pub fn tabulated(grid: &StateGrid<T>, values: &[T]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid_arg(format!(
                "{} values for a grid of {} states",
                values.len(),
                grid.len()
            )));
        }
        Ok(Payoff::Custom {
            knots: grid.states().iter().copied().zip(values.iter().copied()).collect(),
        })
    }

    pub fn strike(&self) -> Option<T> {
        match self {
            Payoff::Call { strike } | Payoff::Put { strike } | Payoff::Forward { strike } => {
                Some(*strike)
            }
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Payoff::Call { strike } | Payoff::Put { strike } | Payoff::Forward { strike } => {
                if !strike.is_finite() {
                    return Err(Error::InvalidPayoff(format!("strike must be finite, got {strike}")));
                }
            }
            Payoff::Constant(c) => {
                if !c.is_finite() {
                    return Err(Error::InvalidPayoff(format!("constant must be finite, got {c}")));
                }
            }
            Payoff::Identity => {}
            Payoff::Custom { knots } => {
                if knots.is_empty() {
                    return Err(Error::InvalidPayoff("custom payoff needs at least one knot".into()));
                }
                if let Some(i) = knots.iter().position(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(Error::InvalidPayoff(format!("knot {i} is not finite")));
                }
                if let Some(i) = knots.windows(2).position(|w| w[1].0 <= w[0].0) {
                    return Err(Error::InvalidPayoff(format!(
                        "knot abscissae must be strictly increasing (knots {i} and {})",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Value at a single state. Assumes the payoff has been validated.
    fn value_at(&self, theta: T) -> T {
        match self {
            Payoff::Call { strike } => (theta - *strike).max(T::zero()),
            Payoff::Put { strike } => (*strike - theta).max(T::zero()),
            Payoff::Forward { strike } => theta - *strike,
            Payoff::Constant(c) => *c,
            Payoff::Identity => theta,
            Payoff::Custom { knots } => interpolate(knots, theta),
        }
    }

    /// Tabulates the payoff on every grid state.
    pub fn evaluate(&self, grid: &StateGrid<T>) -> Result<Vec<T>> {
        self.validate()?;
        Ok(grid.states().iter().map(|&s| self.value_at(s)).collect())
    }
}

fn interpolate<T: Scalar>(knots: &[(T, T)], x: T) -> T {
    let (x0, y0) = knots[0];
    let (xn, yn) = knots[knots.len() - 1];
    if x <= x0 {
        return y0;
    }
    if x >= xn {
        return yn;
    }
    // first knot with abscissa >= x; exists and is > 0 here
    let hi = knots.partition_point(|(kx, _)| *kx < x);
    let (xb, yb) = knots[hi];
    if xb == x {
        return yb;
    }
    let (xa, ya) = knots[hi - 1];
    ya + (yb - ya) * (x - xa) / (xb - xa)
}

/// One position: `quantity` units of `payoff` bought (`> 0`) or sold (`< 0`)
/// at unit price `price`, settled at time zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg<T> {
    pub payoff: Payoff<T>,
    pub quantity: T,
    pub price: T,
}

impl<T: Scalar> Leg<T> {
    pub fn new(payoff: Payoff<T>, quantity: T, price: T) -> Result<Self> {
        if !quantity.is_finite() || !price.is_finite() {
            return Err(invalid_arg("leg quantity and price must be finite"));
        }
        Ok(Self { payoff, quantity, price })
    }

    pub fn long(payoff: Payoff<T>, price: T) -> Self {
        Self { payoff, quantity: T::one(), price }
    }

    pub fn short(payoff: Payoff<T>, price: T) -> Self {
        Self { payoff, quantity: -T::one(), price }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Portfolio<T> {
    pub legs: Vec<Leg<T>>,
}

impl<T: Scalar> Portfolio<T> {
    pub fn new(legs: Vec<Leg<T>>) -> Self {
        Self { legs }
    }

    pub fn empty() -> Self {
        Self { legs: Vec::new() }
    }

    pub fn with_leg(mut self, leg: Leg<T>) -> Self {
        self.legs.push(leg);
        self
    }

    /// Profit at maturity in each grid state:
    /// `Σ q·(−u·e^{rT} + f(θ))` over the legs.
    pub fn profit(&self, grid: &StateGrid<T>, market: &MarketParams<T>) -> Result<Vec<T>> {
        let growth = market.growth();
        let mut total = vec![T::zero(); grid.len()];
        for leg in &self.legs {
            let values = leg.payoff.evaluate(grid)?;
            let financing = -leg.price * growth;
            for (acc, v) in total.iter_mut().zip(values) {
                *acc = *acc + leg.quantity * (financing + v);
            }
        }
        Ok(total)
    }
}

/// Rate, maturity and (optionally) the current spot of the underlying.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams<T> {
    /// Continuously compounded riskless rate per year.
    pub rate: T,
    /// Time to maturity in years.
    pub maturity: T,
    pub spot: Option<T>,
}

impl<T: Scalar> MarketParams<T> {
    pub fn new(rate: T, maturity: T) -> Result<Self> {
        if !rate.is_finite() {
            return Err(invalid_arg(format!("rate must be finite, got {rate}")));
        }
        if !maturity.is_finite() || maturity < T::zero() {
            return Err(invalid_arg(format!(
                "maturity must be finite and nonnegative, got {maturity}"
            )));
        }
        Ok(Self { rate, maturity, spot: None })
    }

    pub fn with_spot(mut self, spot: T) -> Result<Self> {
        if !spot.is_finite() || spot < T::zero() {
            return Err(invalid_arg(format!("spot must be finite and nonnegative, got {spot}")));
        }
        self.spot = Some(spot);
        Ok(self)
    }

    pub fn spot(&self) -> Result<T> {
        self.spot.ok_or_else(|| invalid_arg("spot price is required"))
    }

    /// `e^{rT}`
    pub fn growth(&self) -> T {
        (self.rate * self.maturity).exp()
    }

    /// `e^{-rT}`
    pub fn discount(&self) -> T {
        (-self.rate * self.maturity).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(states: &[f64]) -> StateGrid<f64> {
        StateGrid::new(states.to_vec()).unwrap()
    }

    fn zero_rate() -> MarketParams<f64> {
        MarketParams::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(StateGrid::<f64>::new(vec![]).is_err());
        assert!(StateGrid::new(vec![1.0, 1.0]).is_err());
        assert!(StateGrid::new(vec![2.0, 1.0]).is_err());
        assert!(StateGrid::new(vec![-1.0, 1.0]).is_err());
        assert!(StateGrid::new(vec![0.0, f64::INFINITY]).is_err());
        assert!(StateGrid::new(vec![0.0]).is_ok());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = StateGrid::linspace(0.0, 200.0, 201).unwrap();
        assert_eq!(g.len(), 201);
        assert_eq!(g.states()[100], 100.0);
        assert_eq!(g.max_state(), 200.0);
        assert!(StateGrid::linspace(1.0, 2.0, 1).is_err());
        assert_eq!(StateGrid::linspace(3.0, 3.0, 1).unwrap().states(), &[3.0]);
    }

    #[test]
    fn vanilla_payoffs() {
        assert_eq!(Payoff::call(100.0).evaluate(&grid(&[90.0, 130.0])).unwrap(), vec![0.0, 30.0]);
        assert_eq!(Payoff::forward(95.0).evaluate(&grid(&[95.0])).unwrap(), vec![0.0]);
        assert_eq!(
            Payoff::put(100.0).evaluate(&grid(&[80.0, 105.0, 130.0])).unwrap(),
            vec![20.0, 0.0, 0.0]
        );
        assert_eq!(Payoff::Identity.evaluate(&grid(&[3.0, 7.0])).unwrap(), vec![3.0, 7.0]);
        assert_eq!(Payoff::Constant(2.5).evaluate(&grid(&[3.0, 7.0])).unwrap(), vec![2.5, 2.5]);
    }

    #[test]
    fn custom_payoff_interpolates_and_extrapolates_flat() {
        let f = Payoff::custom(vec![(10.0, 1.0), (20.0, 3.0), (30.0, -1.0)]);
        let g = grid(&[0.0, 10.0, 15.0, 20.0, 25.0, 30.0, 50.0]);
        assert_eq!(f.evaluate(&g).unwrap(), vec![1.0, 1.0, 2.0, 3.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn custom_payoff_rejects_bad_knots() {
        let g = grid(&[1.0]);
        let nan = Payoff::custom(vec![(1.0, f64::NAN)]);
        assert!(matches!(nan.evaluate(&g), Err(Error::InvalidPayoff(_))));
        let inf = Payoff::custom(vec![(f64::INFINITY, 1.0)]);
        assert!(matches!(inf.evaluate(&g), Err(Error::InvalidPayoff(_))));
        let unsorted = Payoff::custom(vec![(2.0, 1.0), (1.0, 1.0)]);
        assert!(matches!(unsorted.evaluate(&g), Err(Error::InvalidPayoff(_))));
        assert!(Payoff::<f64>::custom(vec![]).evaluate(&g).is_err());
    }

    #[test]
    fn tabulated_reproduces_values() {
        let g = grid(&[1.0, 2.5, 4.0]);
        let v = vec![-3.25, 7.0, 0.1];
        assert_eq!(Payoff::tabulated(&g, &v).unwrap().evaluate(&g).unwrap(), v);
    }

    #[test]
    fn call_minus_put_is_forward() {
        let g = StateGrid::linspace(50.0, 150.0, 41).unwrap();
        let c = Payoff::call(97.5).evaluate(&g).unwrap();
        let p = Payoff::put(97.5).evaluate(&g).unwrap();
        let f = Payoff::forward(97.5).evaluate(&g).unwrap();
        for i in 0..g.len() {
            assert_eq!(c[i] - p[i], f[i]);
        }
    }

    #[test]
    fn portfolio_profit_examples() {
        let g = grid(&[90.0, 130.0]);
        let book = Portfolio::new(vec![
            Leg::long(Payoff::call(100.0), 10.0),
            Leg::short(Payoff::put(100.0), 5.0),
        ]);
        // oracle: per-leg sums, q·(−u + f) with r = 0
        let oracle: Vec<f64> = [90.0f64, 130.0]
            .iter()
            .map(|&t| (-10.0 + (t - 100.0f64).max(0.0)) - (-5.0 + (100.0 - t).max(0.0)))
            .collect();
        assert_eq!(oracle, vec![-15.0, 25.0]);
        assert_eq!(book.profit(&g, &zero_rate()).unwrap(), oracle);

        let single = Portfolio::empty().with_leg(Leg::long(Payoff::call(100.0), 0.0));
        assert_eq!(single.profit(&g, &zero_rate()).unwrap(), vec![0.0, 30.0]);
        assert_eq!(Portfolio::empty().profit(&g, &zero_rate()).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn financing_grows_at_rate() {
        let g = grid(&[100.0]);
        let m = MarketParams::new(0.05, 2.0).unwrap();
        let p = Portfolio::new(vec![Leg::long(Payoff::Constant(0.0), 1.0)]);
        let got = p.profit(&g, &m).unwrap()[0];
        assert!((got + (0.1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn market_validation() {
        assert!(MarketParams::new(0.0, -1.0).is_err());
        assert!(MarketParams::new(f64::NAN, 1.0).is_err());
        let m = MarketParams::new(0.0, 1.0).unwrap();
        assert!(m.spot().is_err());
        assert!(m.with_spot(-1.0).is_err());
        assert_eq!(m.with_spot(0.0).unwrap().spot().unwrap(), 0.0);
        assert!(Leg::new(Payoff::Identity, f64::NAN, 0.0).is_err());
    }
}
