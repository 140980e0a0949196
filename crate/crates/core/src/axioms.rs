//! Seeded random cases checking that the worst-case expectation criterion is
//! monotone, affine equivariant, concave and rewards diversification.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::expectation::{bounds, criterion};
use crate::measure::DiscreteMeasure;
use crate::regularity::Regularity;
use crate::scalar::Scalar;
use crate::state::{Leg, MarketParams, Payoff, Portfolio, StateGrid};

pub const MAX_GRID_SIZE: usize = 64;
pub const MAX_FAMILY_SIZE: usize = 16;
const VALUE_RANGE: f64 = 100.0;

/// Everything one seed generates: a grid, a family on it, two payoff vectors
/// and the auxiliary draws the checks need.
#[derive(Debug, Clone)]
pub struct RandomCase<T> {
    pub seed: u64,
    pub reg: Regularity<T>,
    pub v1: Vec<T>,
    pub v2: Vec<T>,
    /// Nonnegative perturbation, `v1 + noise` dominates `v1`.
    pub noise: Vec<T>,
    /// Affine map `a·v + b`, `a ≥ 0`.
    pub a: T,
    pub b: T,
    /// Prices for the diversification decisions.
    pub u1: T,
    pub u2: T,
}

impl<T: Scalar> RandomCase<T> {
    pub fn generate(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=MAX_GRID_SIZE);
        let m = rng.gen_range(1..=MAX_FAMILY_SIZE);

        let mut level = rng.gen_range(0.0..50.0);
        let mut states = Vec::with_capacity(n);
        for _ in 0..n {
            states.push(T::lit(level));
            level += rng.gen_range(0.5..10.0);
        }
        let grid = Arc::new(StateGrid::new(states).expect("generated grid is valid"));

        let measures = (0..m).map(|_| random_measure(&mut rng, &grid)).collect();
        let reg = Regularity::family(measures).expect("generated family is valid");

        let draw_vec = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| -> Vec<T> {
            (0..n).map(|_| T::lit(rng.gen_range(lo..hi))).collect()
        };
        let v1 = draw_vec(&mut rng, -VALUE_RANGE, VALUE_RANGE);
        let v2 = draw_vec(&mut rng, -VALUE_RANGE, VALUE_RANGE);
        let noise = draw_vec(&mut rng, 0.0, 10.0);
        Self {
            seed,
            reg,
            v1,
            v2,
            noise,
            a: T::lit(rng.gen_range(0.0..5.0)),
            b: T::lit(rng.gen_range(-VALUE_RANGE..VALUE_RANGE)),
            u1: T::lit(rng.gen_range(-VALUE_RANGE..VALUE_RANGE)),
            u2: T::lit(rng.gen_range(-VALUE_RANGE..VALUE_RANGE)),
        }
    }

    pub fn grid(&self) -> &Arc<StateGrid<T>> {
        self.reg.grid()
    }
}

fn random_measure<T: Scalar>(rng: &mut ChaCha8Rng, grid: &Arc<StateGrid<T>>) -> DiscreteMeasure<T> {
    let n = grid.len();
    match rng.gen_range(0..3) {
        0 => DiscreteMeasure::dirac(grid, rng.gen_range(0..n)),
        1 => {
            let k = rng.gen_range(1..=n);
            DiscreteMeasure::uniform_on(grid, &sample(rng, n, k).into_vec())
        }
        _ => {
            let mut w: Vec<T> = (0..n)
                .map(|_| {
                    let x: f64 = rng.gen();
                    T::lit(if x < 0.4 { 0.0 } else { x })
                })
                .collect();
            let anchor = rng.gen_range(0..n);
            w[anchor] = w[anchor] + T::one();
            DiscreteMeasure::explicit(grid, w)
        }
    }
    .expect("generated measure is valid")
}

/// Outcome of one named check on one case.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: &'static str,
    pub seed: u64,
    pub violations: Vec<String>,
}

impl CheckReport {
    fn new(check: &'static str, seed: u64) -> Self {
        Self { check, seed, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records a violation unless `lhs <= rhs` up to the relative tolerance.
    fn require_le<T: Scalar>(&mut self, what: &str, lhs: T, rhs: T) {
        let slack = T::rel_tolerance() * (T::one() + lhs.abs().max(rhs.abs()));
        if lhs > rhs + slack {
            self.violations.push(format!("{what}: {lhs} > {rhs}"));
        }
    }

    fn require_eq<T: Scalar>(&mut self, what: &str, lhs: T, rhs: T) {
        self.require_le(what, lhs, rhs);
        self.require_le(what, rhs, lhs);
    }
}

fn map<T: Scalar>(v: &[T], f: impl Fn(T) -> T) -> Vec<T> {
    v.iter().map(|x| f(*x)).collect()
}

fn zip_map<T: Scalar>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
}

/// Monotonicity under pointwise dominance and equivariance under `a·v + b`.
pub fn check_monotone_affine<T: Scalar>(case: &RandomCase<T>) -> Result<CheckReport> {
    let mut report = CheckReport::new("monotone_affine", case.seed);
    let reg = &case.reg;
    let base = bounds(reg, &case.v1)?;

    let dominating = zip_map(&case.v1, &case.noise, |v, e| v + e);
    let dom = bounds(reg, &dominating)?;
    report.require_le("min monotone", base.min_exp, dom.min_exp);
    report.require_le("max monotone", base.max_exp, dom.max_exp);

    let shifted = bounds(reg, &map(&case.v1, |v| v + T::one()))?;
    report.require_eq("min shift by one", shifted.min_exp, base.min_exp + T::one());

    let (a, b) = (case.a, case.b);
    let affine = bounds(reg, &map(&case.v1, |v| a * v + b))?;
    report.require_eq("min affine", affine.min_exp, a * base.min_exp + b);
    report.require_eq("max affine", affine.max_exp, a * base.max_exp + b);
    Ok(report)
}

/// `2·min(v₃) ≥ min(v₁) + min(v₂)` for the midpoint `v₃ = (v₁ + v₂)/2`.
pub fn check_concavity<T: Scalar>(case: &RandomCase<T>) -> Result<CheckReport> {
    let mut report = CheckReport::new("concavity", case.seed);
    let reg = &case.reg;
    let v3 = zip_map(&case.v1, &case.v2, T::midpoint);
    let (m1, m2, m3) = (
        bounds(reg, &case.v1)?.min_exp,
        bounds(reg, &case.v2)?.min_exp,
        bounds(reg, &v3)?.min_exp,
    );
    report.require_le("midpoint concavity", m1 + m2, T::two() * m3);
    Ok(report)
}

/// `min(v₁ + v₂) ≥ min(v₁) + min(v₂)` and `max(v₁ + v₂) ≤ max(v₁) + max(v₂)`.
pub fn check_superadditivity<T: Scalar>(case: &RandomCase<T>) -> Result<CheckReport> {
    let mut report = CheckReport::new("superadditivity", case.seed);
    let reg = &case.reg;
    let (b1, b2) = (bounds(reg, &case.v1)?, bounds(reg, &case.v2)?);
    let sum = bounds(reg, &zip_map(&case.v1, &case.v2, |x, y| x + y))?;
    report.require_le("min superadditive", b1.min_exp + b2.min_exp, sum.min_exp);
    report.require_le("max subadditive", sum.max_exp, b1.max_exp + b2.max_exp);
    Ok(report)
}

/// Criteria of the two single-leg decisions versus the half-and-half
/// decision: `L*(d₁) + L*(d₂) ≤ 2·L*(d₃)`.
pub fn check_diversification<T: Scalar>(case: &RandomCase<T>, market: &MarketParams<T>) -> Result<CheckReport> {
    let mut report = CheckReport::new("diversification", case.seed);
    let grid = case.grid();
    let (l1, l2, l3) = diversification_criteria(
        &case.reg,
        market,
        (Payoff::tabulated(grid, &case.v1)?, case.u1),
        (Payoff::tabulated(grid, &case.v2)?, case.u2),
    )?;
    report.require_le("diversification", l1 + l2, T::two() * l3);
    Ok(report)
}

/// `(L*(d₁), L*(d₂), L*(d₃))` for `d₁ = (+1, f₁, u₁)`, `d₂ = (+1, f₂, u₂)`
/// and `d₃ = (+1, (f₁+f₂)/2, (u₁+u₂)/2)`.
pub fn diversification_criteria<T: Scalar>(
    reg: &Regularity<T>,
    market: &MarketParams<T>,
    (f1, u1): (Payoff<T>, T),
    (f2, u2): (Payoff<T>, T),
) -> Result<(T, T, T)> {
    let grid = reg.grid();
    let half = zip_map(&f1.evaluate(grid)?, &f2.evaluate(grid)?, T::midpoint);
    let d1 = Portfolio::new(vec![Leg::long(f1, u1)]);
    let d2 = Portfolio::new(vec![Leg::long(f2, u2)]);
    let d3 = Portfolio::new(vec![Leg::long(Payoff::tabulated(grid, &half)?, T::midpoint(u1, u2))]);
    Ok((
        criterion(&d1, reg, market)?,
        criterion(&d2, reg, market)?,
        criterion(&d3, reg, market)?,
    ))
}

/// Every check on one case.
pub fn check_case<T: Scalar>(case: &RandomCase<T>, market: &MarketParams<T>) -> Result<Vec<CheckReport>> {
    Ok(vec![
        check_monotone_affine(case)?,
        check_concavity(case)?,
        check_superadditivity(case)?,
        check_diversification(case, market)?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomSummary {
    pub cases: usize,
    /// Number of cases with at least one failing check.
    pub failures: usize,
    pub first_failing_seed: Option<u64>,
    /// First few violation messages, for diagnostics.
    pub sample_violations: Vec<String>,
}

impl AxiomSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs all checks on seeds `base_seed, base_seed + 1, …`.
pub fn run_suite<T: Scalar>(base_seed: u64, cases: usize, market: &MarketParams<T>) -> Result<AxiomSummary> {
    let mut summary = AxiomSummary {
        cases,
        failures: 0,
        first_failing_seed: None,
        sample_violations: Vec::new(),
    };
    for i in 0..cases as u64 {
        let seed = base_seed.wrapping_add(i);
        let case = RandomCase::<T>::generate(seed);
        let failed: Vec<CheckReport> = check_case(&case, market)?.into_iter().filter(|r| !r.passed()).collect();
        if failed.is_empty() {
            continue;
        }
        summary.failures += 1;
        summary.first_failing_seed.get_or_insert(seed);
        for r in failed {
            for v in r.violations {
                if summary.sample_violations.len() < 8 {
                    summary.sample_violations.push(format!("seed {seed} {}: {v}", r.check));
                }
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(states: &[f64]) -> Arc<StateGrid<f64>> {
        Arc::new(StateGrid::new(states.to_vec()).unwrap())
    }

    fn two_diracs() -> Regularity<f64> {
        let g = grid(&[90.0, 130.0]);
        Regularity::family(vec![
            DiscreteMeasure::dirac(&g, 0).unwrap(),
            DiscreteMeasure::dirac(&g, 1).unwrap(),
        ])
        .unwrap()
    }

    fn case_with(reg: Regularity<f64>, v1: Vec<f64>, v2: Vec<f64>) -> RandomCase<f64> {
        let n = v1.len();
        RandomCase { seed: 0, reg, v1, v2, noise: vec![1.0; n], a: 2.0, b: 3.0, u1: 15.0, u2: 5.0 }
    }

    #[test]
    fn generation_is_reproducible_and_in_range() {
        for seed in 0..200 {
            let a = RandomCase::<f64>::generate(seed);
            let b = RandomCase::<f64>::generate(seed);
            assert_eq!(a.reg, b.reg);
            assert_eq!(a.v1, b.v1);
            assert!((1..=MAX_GRID_SIZE).contains(&a.grid().len()));
            assert!((1..=MAX_FAMILY_SIZE).contains(&a.reg.len()));
            assert!(a.v1.iter().chain(&a.v2).all(|v| v.abs() <= VALUE_RANGE));
            assert!(a.noise.iter().all(|e| *e >= 0.0));
            for m in a.reg.measures() {
                let total: f64 = m.weights().iter().sum();
                assert!((total - 1.0).abs() <= 1e-12);
                assert!(m.weights().iter().all(|w| *w >= 0.0));
            }
        }
        assert_ne!(RandomCase::<f64>::generate(1).v1, RandomCase::<f64>::generate(2).v1);
    }

    #[test]
    fn monotone_affine_hand_cases() {
        let reg = two_diracs();
        let v = vec![0.0, 30.0];
        let base = bounds(&reg, &v).unwrap();
        let plus_one = bounds(&reg, &[1.0, 31.0]).unwrap();
        assert_eq!(plus_one.min_exp, base.min_exp + 1.0);
        let affine = bounds(&reg, &[3.0, 63.0]).unwrap();
        assert_eq!(affine.min_exp, 2.0 * base.min_exp + 3.0);
        assert!(check_monotone_affine(&case_with(reg, v.clone(), v)).unwrap().passed());
    }

    #[test]
    fn concavity_hand_cases() {
        let reg = two_diracs();
        let call = vec![0.0, 30.0];
        let put = vec![10.0, 0.0];
        // midpoint values (5, 15): min 5 ≥ (0 + 0)/2
        let mid = bounds(&reg, &[5.0, 15.0]).unwrap().min_exp;
        assert_eq!(mid, 5.0);
        assert!(check_concavity(&case_with(reg.clone(), call.clone(), put)).unwrap().passed());
        assert!(check_concavity(&case_with(reg, call.clone(), call)).unwrap().passed());
    }

    #[test]
    fn diversification_hand_case() {
        let reg = two_diracs();
        let m = MarketParams::new(0.0, 1.0).unwrap();
        let (l1, l2, l3) = diversification_criteria(
            &reg,
            &m,
            (Payoff::call(100.0), 15.0),
            (Payoff::put(100.0), 5.0),
        )
        .unwrap();
        assert_eq!((l1, l2, l3), (-15.0, -5.0, -5.0));
        assert!(l1 + l2 <= 2.0 * l3);
    }

    #[test]
    fn singleton_family_gives_equalities() {
        let g = grid(&[90.0, 110.0, 130.0]);
        let reg = Regularity::singleton(DiscreteMeasure::explicit(&g, vec![1.0, 2.0, 3.0]).unwrap());
        let m = MarketParams::new(0.0, 1.0).unwrap();
        let (l1, l2, l3) = diversification_criteria(
            &reg,
            &m,
            (Payoff::call(100.0), 4.0),
            (Payoff::put(120.0), 9.0),
        )
        .unwrap();
        assert!((l1 + l2 - 2.0 * l3).abs() < 1e-12);
    }

    #[test]
    fn failing_criterion_is_reported() {
        // a "criterion" that is convex rather than concave must be caught
        let mut r = CheckReport::new("probe", 7);
        r.require_le("probe", 1.0, 0.0);
        assert!(!r.passed());
        let mut ok = CheckReport::new("probe", 7);
        ok.require_le("probe", 1.0 + 1e-12, 1.0);
        assert!(ok.passed());
    }

    #[test]
    fn small_suite_passes() {
        let m = MarketParams::new(0.03, 1.0).unwrap();
        let s = run_suite::<f64>(42, 300, &m).unwrap();
        assert!(s.passed(), "{s:?}");
        assert_eq!(s.cases, 300);
        assert_eq!(s.first_failing_seed, None);
    }

    #[test]
    fn suite_runs_in_single_precision() {
        let m = MarketParams::new(0.03f32, 1.0).unwrap();
        let s = run_suite::<f32>(7, 200, &m).unwrap();
        assert!(s.passed(), "{s:?}");
    }
}
