//! Discrete probability measures on a [`StateGrid`].

use std::sync::Arc;

use crate::error::{invalid_arg, Error, Result};
use crate::scalar::Scalar;
use crate::state::StateGrid;

/// Nonnegative weights on the states of a grid, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure<T> {
    grid: Arc<StateGrid<T>>,
    weights: Vec<T>,
    label: Option<String>,
}

impl<T: Scalar> DiscreteMeasure<T> {
    /// Unit mass on `grid.states()[index]`.
    pub fn dirac(grid: &Arc<StateGrid<T>>, index: usize) -> Result<Self> {
        if index >= grid.len() {
            return Err(invalid_arg(format!(
                "dirac index {index} out of range for {} states",
                grid.len()
            )));
        }
        let mut weights = vec![T::zero(); grid.len()];
        weights[index] = T::one();
        Ok(Self { grid: Arc::clone(grid), weights, label: None })
    }

    /// Equal mass on each listed state. Duplicate indices count once.
    pub fn uniform_on(grid: &Arc<StateGrid<T>>, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(invalid_arg("uniform measure needs at least one state"));
        }
        let mut mask = vec![false; grid.len()];
        for &i in indices {
            if i >= grid.len() {
                return Err(invalid_arg(format!(
                    "uniform index {i} out of range for {} states",
                    grid.len()
                )));
            }
            mask[i] = true;
        }
        let count = T::from_usize(mask.iter().filter(|m| **m).count()).unwrap();
        let share = T::one() / count;
        let weights = mask.iter().map(|&m| if m { share } else { T::zero() }).collect();
        Ok(Self { grid: Arc::clone(grid), weights, label: None })
    }

    /// Arbitrary nonnegative weights, renormalized to unit mass.
    pub fn explicit(grid: &Arc<StateGrid<T>>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != grid.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for a grid of {} states",
                weights.len(),
                grid.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidMeasure(format!(
                "weight {i} must be finite and nonnegative, got {}",
                weights[i]
            )));
        }
        let total = weights.iter().fold(T::zero(), |acc, w| acc + *w);
        if total <= T::zero() || !total.is_finite() {
            return Err(Error::InvalidMeasure(format!("weights must have positive finite sum, got {total}")));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { grid: Arc::clone(grid), weights, label: None })
    }

    /// Convex combination `Σ λ_k μ_k` of measures on a common grid.
    pub fn mixture(parts: &[(T, &DiscreteMeasure<T>)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or_else(|| invalid_arg("empty mixture"))?;
        let grid = Arc::clone(&first.grid);
        let mut acc = vec![T::zero(); grid.len()];
        for (lambda, m) in parts {
            if !m.same_grid(&grid) {
                return Err(invalid_arg("mixture components live on different grids"));
            }
            for (a, w) in acc.iter_mut().zip(&m.weights) {
                *a = *a + *lambda * *w;
            }
        }
        Self::explicit(&grid, acc)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn grid(&self) -> &Arc<StateGrid<T>> {
        &self.grid
    }

    pub fn same_grid(&self, grid: &Arc<StateGrid<T>>) -> bool {
        Arc::ptr_eq(&self.grid, grid) || *self.grid == **grid
    }

    /// Whether all mass sits on a single state.
    pub fn is_dirac(&self) -> bool {
        self.weights.iter().filter(|w| **w > T::zero()).count() == 1
    }

    /// Identical weights transplanted onto another grid of the same size.
    pub(crate) fn rebased(&self, grid: &Arc<StateGrid<T>>) -> Self {
        debug_assert_eq!(grid.len(), self.weights.len());
        Self { grid: Arc::clone(grid), weights: self.weights.clone(), label: self.label.clone() }
    }
}

/// Discretization settings for [`lognormal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalGridSpec<T> {
    /// Odd number of states, at least 3.
    pub n_points: usize,
    /// Truncation half-width in standard deviations of log price.
    pub log_halfwidth_sigmas: T,
}

impl<T: Scalar> Default for LognormalGridSpec<T> {
    fn default() -> Self {
        Self { n_points: 2001, log_halfwidth_sigmas: T::lit(6.0) }
    }
}

/// Discretized lognormal law of the underlying at `t` under drift `r`:
/// `θ_i = exp(m + x_i·v)` with `v = σ√t`, `m = ln s0 + (r − σ²/2)t`, and
/// `x_i` equally spaced on `[−h, h]`, weighted by the standard normal density.
pub fn lognormal<T: Scalar>(
    spec: LognormalGridSpec<T>,
    s0: T,
    r: T,
    sigma: T,
    t: T,
) -> Result<(Arc<StateGrid<T>>, DiscreteMeasure<T>)> {
    let positive = |x: T| x > T::zero() && x.is_finite();
    if !positive(s0) || !positive(sigma) || !positive(t) || !r.is_finite() {
        return Err(invalid_arg(format!(
            "lognormal needs s0, sigma, t > 0 and finite r (s0={s0}, r={r}, sigma={sigma}, t={t})"
        )));
    }
    let n = spec.n_points;
    if n < 3 || n.is_multiple_of(2) {
        return Err(invalid_arg(format!("lognormal grid needs an odd point count >= 3, got {n}")));
    }
    let h = spec.log_halfwidth_sigmas;
    if !positive(h) {
        return Err(invalid_arg(format!("log half-width must be positive, got {h}")));
    }

    let half = T::lit(0.5);
    let v = sigma * t.sqrt();
    let m = s0.ln() + (r - half * sigma * sigma) * t;
    let step = (h + h) / T::from_usize(n - 1).unwrap();
    let xs: Vec<T> = (0..n).map(|i| -h + step * T::from_usize(i).unwrap()).collect();

    let states: Vec<T> = xs.iter().map(|&x| (m + x * v).exp()).collect();
    // normalizing constant of the density cancels in the renormalization
    let density: Vec<T> = xs.iter().map(|&x| (-half * x * x).exp()).collect();

    let grid = Arc::new(StateGrid::new(states)?);
    let measure = DiscreteMeasure::explicit(&grid, density)?.with_label("lognormal");
    Ok((grid, measure))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(states: &[f64]) -> Arc<StateGrid<f64>> {
        Arc::new(StateGrid::new(states.to_vec()).unwrap())
    }

    fn mass(m: &DiscreteMeasure<f64>) -> f64 {
        m.weights().iter().sum()
    }

    #[test]
    fn dirac_examples() {
        let g = grid(&[90.0, 130.0]);
        assert_eq!(DiscreteMeasure::dirac(&g, 0).unwrap().weights(), &[1.0, 0.0]);
        assert_eq!(DiscreteMeasure::dirac(&g, 1).unwrap().weights(), &[0.0, 1.0]);
        let g3 = grid(&[80.0, 105.0, 130.0]);
        assert_eq!(DiscreteMeasure::dirac(&g3, 2).unwrap().weights(), &[0.0, 0.0, 1.0]);
        assert!(matches!(DiscreteMeasure::dirac(&g, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn uniform_examples() {
        let g = grid(&[80.0, 130.0]);
        assert_eq!(DiscreteMeasure::uniform_on(&g, &[0, 1]).unwrap().weights(), &[0.5, 0.5]);
        let g3 = grid(&[80.0, 105.0, 130.0]);
        assert_eq!(DiscreteMeasure::uniform_on(&g3, &[0]).unwrap().weights(), &[1.0, 0.0, 0.0]);
        assert!(DiscreteMeasure::uniform_on(&g3, &[]).is_err());
        assert!(DiscreteMeasure::uniform_on(&g3, &[3]).is_err());
        assert_eq!(
            DiscreteMeasure::uniform_on(&g3, &[1, 1, 2]).unwrap().weights(),
            &[0.0, 0.5, 0.5]
        );
    }

    #[test]
    fn explicit_examples() {
        let g = grid(&[90.0, 130.0]);
        assert_eq!(DiscreteMeasure::explicit(&g, vec![2.0, 2.0]).unwrap().weights(), &[0.5, 0.5]);
        assert_eq!(DiscreteMeasure::explicit(&g, vec![1.0, 0.0]).unwrap().weights(), &[1.0, 0.0]);
        assert!(matches!(
            DiscreteMeasure::explicit(&g, vec![-1.0, 2.0]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            DiscreteMeasure::explicit(&g, vec![0.0, 0.0]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(DiscreteMeasure::explicit(&g, vec![1.0]).is_err());
    }

    #[test]
    fn explicit_renormalizes_to_unit_mass() {
        let g = grid(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        let m = DiscreteMeasure::explicit(&g, vec![0.1, 0.7, 3.3, 1e-3, 0.0, 17.0, 2.2]).unwrap();
        assert!((mass(&m) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mixture_of_diracs() {
        let g = grid(&[90.0, 130.0]);
        let a = DiscreteMeasure::dirac(&g, 0).unwrap();
        let b = DiscreteMeasure::dirac(&g, 1).unwrap();
        let m = DiscreteMeasure::mixture(&[(0.25, &a), (0.75, &b)]).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.75]);
        let other = DiscreteMeasure::dirac(&grid(&[1.0, 2.0]), 0).unwrap();
        assert!(DiscreteMeasure::mixture(&[(0.5, &a), (0.5, &other)]).is_err());
    }

    #[test]
    fn lognormal_mean_locks_in_forward() {
        let (g, m) = lognormal(LognormalGridSpec::default(), 100.0, 0.05, 0.2, 1.0).unwrap();
        assert_eq!(g.len(), 2001);
        let mean: f64 = g.states().iter().zip(m.weights()).map(|(s, w)| s * w).sum();
        let closed = 100.0 * (0.05f64).exp();
        assert!((mean - closed).abs() / closed <= 1e-4, "mean {mean} vs {closed}");
        assert!((mass(&m) - 1.0).abs() <= 1e-12);

        let (g, m) = lognormal(LognormalGridSpec::default(), 100.0, 0.0, 0.01, 1.0).unwrap();
        let mean: f64 = g.states().iter().zip(m.weights()).map(|(s, w)| s * w).sum();
        assert!((mean - 100.0).abs() / 100.0 <= 1e-4);
    }

    #[test]
    fn lognormal_rejects_bad_parameters() {
        let spec = LognormalGridSpec::default();
        assert!(lognormal(spec, 0.0, 0.0, 0.2, 1.0).is_err());
        assert!(lognormal(spec, 100.0, 0.0, 0.0, 1.0).is_err());
        assert!(lognormal(spec, 100.0, 0.0, 0.2, 0.0).is_err());
        let even = LognormalGridSpec { n_points: 10, log_halfwidth_sigmas: 6.0 };
        assert!(lognormal(even, 100.0, 0.0, 0.2, 1.0).is_err());
        let tiny = LognormalGridSpec { n_points: 1, log_halfwidth_sigmas: 6.0 };
        assert!(lognormal(tiny, 100.0, 0.0, 0.2, 1.0).is_err());
    }

    #[test]
    fn lognormal_in_single_precision() {
        let (g, m) = lognormal(LognormalGridSpec::<f32>::default(), 100.0, 0.05, 0.2, 1.0).unwrap();
        let mean: f32 = g.states().iter().zip(m.weights()).map(|(s, w)| s * w).sum();
        assert!((mean - 105.127_11).abs() / 105.127_11 <= 1e-4);
    }
}
