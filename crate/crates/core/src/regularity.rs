//! Statistical regularities as finite families of discrete measures.
//!
//! A family stands for its convex hull: every downstream quantity is a min or
//! max of a linear functional, and those extremes are attained at generators.

use std::sync::Arc;

use crate::error::{invalid_arg, Result};
use crate::measure::DiscreteMeasure;
use crate::scalar::Scalar;
use crate::state::StateGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct Regularity<T> {
    grid: Arc<StateGrid<T>>,
    measures: Vec<DiscreteMeasure<T>>,
}

impl<T: Scalar> Regularity<T> {
    /// Family from an ordered, nonempty list of measures on one grid.
    pub fn family(measures: Vec<DiscreteMeasure<T>>) -> Result<Self> {
        let first = measures
            .first()
            .ok_or_else(|| invalid_arg("a regularity needs at least one measure"))?;
        let grid = Arc::clone(first.grid());
        if let Some(i) = measures.iter().position(|m| !m.same_grid(&grid)) {
            return Err(invalid_arg(format!("measure {i} lives on a different grid than measure 0")));
        }
        Ok(Self { grid, measures })
    }

    pub fn singleton(measure: DiscreteMeasure<T>) -> Self {
        Self { grid: Arc::clone(measure.grid()), measures: vec![measure] }
    }

    /// Every Dirac measure on the grid, in state order.
    pub fn complete_uncertainty(grid: &Arc<StateGrid<T>>) -> Self {
        let measures = (0..grid.len())
            .map(|i| DiscreteMeasure::dirac(grid, i).expect("index in range"))
            .collect();
        Self { grid: Arc::clone(grid), measures }
    }

    pub fn grid(&self) -> &Arc<StateGrid<T>> {
        &self.grid
    }

    pub fn measures(&self) -> &[DiscreteMeasure<T>] {
        &self.measures
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.measures.len() == 1
    }

    /// Whether every member is a Dirac measure.
    pub fn is_pure_dirac(&self) -> bool {
        self.measures.iter().all(DiscreteMeasure::is_dirac)
    }

    /// Appends a measure on the same grid.
    pub fn push(&mut self, measure: DiscreteMeasure<T>) -> Result<()> {
        if !measure.same_grid(&self.grid) {
            return Err(invalid_arg("measure lives on a different grid than the family"));
        }
        self.measures.push(measure);
        Ok(())
    }

    /// Same weights, states replaced by `grid` (which must have equal length).
    pub(crate) fn rebased(&self, grid: StateGrid<T>) -> Result<Self> {
        if grid.len() != self.grid.len() {
            return Err(invalid_arg("rebased grid must keep the number of states"));
        }
        let grid = Arc::new(grid);
        let measures = self.measures.iter().map(|m| m.rebased(&grid)).collect();
        Ok(Self { grid, measures })
    }
}
