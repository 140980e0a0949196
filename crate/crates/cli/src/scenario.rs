//! Scenario files: one JSON document with `market`, `grid`, `regularity` and
//! `instruments`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use regval::{
    lognormal, DiscreteMeasure, LognormalGridSpec, MarketParams64, Payoff64, Regularity64,
    StateGrid, StateGrid64,
};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub market: MarketSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub regularity: RegularitySpec,
    #[serde(default)]
    pub instruments: Vec<InstrumentSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketSpec {
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spot: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GridSpec {
    States { states: Vec<f64> },
    Range { min: f64, max: f64, points: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegularitySpec {
    CompleteUncertainty,
    Measures(Vec<MeasureSpec>),
}

const COMPLETE_UNCERTAINTY: &str = "complete-uncertainty";

impl Serialize for RegularitySpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RegularitySpec::CompleteUncertainty => s.serialize_str(COMPLETE_UNCERTAINTY),
            RegularitySpec::Measures(m) => m.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for RegularitySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RegVisitor;

        impl<'de> Visitor<'de> for RegVisitor {
            type Value = RegularitySpec;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of measure specs or \"{COMPLETE_UNCERTAINTY}\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == COMPLETE_UNCERTAINTY {
                    Ok(RegularitySpec::CompleteUncertainty)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_seq<A: SeqAccess<'de>>(self, seq: A) -> Result<Self::Value, A::Error> {
                Vec::<MeasureSpec>::deserialize(de::value::SeqAccessDeserializer::new(seq))
                    .map(RegularitySpec::Measures)
            }
        }

        d.deserialize_any(RegVisitor)
    }
}

/// A measure refers to grid states either by index or by exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureSpec {
    Dirac {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state: Option<f64>,
    },
    Uniform {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        indices: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        states: Option<Vec<f64>>,
    },
    Explicit {
        weights: Vec<f64>,
    },
    /// Uses the market's spot, rate and maturity; builds its own grid.
    Lognormal {
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        halfwidth: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstrumentSpec {
    Call {
        strike: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Put {
        strike: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Forward {
        strike: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Constant {
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Identity {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Custom {
        knots: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl InstrumentSpec {
    fn to_instrument(&self) -> Instrument {
        let (payoff, label, default) = match self {
            InstrumentSpec::Call { strike, label } => (Payoff64::call(*strike), label, format!("call({strike})")),
            InstrumentSpec::Put { strike, label } => (Payoff64::put(*strike), label, format!("put({strike})")),
            InstrumentSpec::Forward { strike, label } => {
                (Payoff64::forward(*strike), label, format!("forward({strike})"))
            }
            InstrumentSpec::Constant { value, label } => {
                (Payoff64::Constant(*value), label, format!("constant({value})"))
            }
            InstrumentSpec::Identity { label } => (Payoff64::Identity, label, "identity".to_string()),
            InstrumentSpec::Custom { knots, label } => (
                Payoff64::custom(knots.clone()),
                label,
                format!("custom({} knots)", knots.len()),
            ),
        };
        Instrument { label: label.clone().unwrap_or(default), payoff }
    }
}

#[derive(Debug, Clone)]
pub struct Instrument {
    pub label: String,
    pub payoff: Payoff64,
}

/// A scenario resolved into engine types.
#[derive(Debug, Clone)]
pub struct Model {
    pub market: MarketParams64,
    pub regularity: Regularity64,
    pub instruments: Vec<Instrument>,
    /// The regularity with every measure expressed by grid index or weights,
    /// valid on `regularity.grid()`.
    pub resolved: RegularitySpec,
}

impl Model {
    pub fn grid(&self) -> &Arc<StateGrid64> {
        self.regularity.grid()
    }
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        // serde_json's message already ends with the line and column
        CliError::Validation(format!("field `{path}`: {inner}"))
    })?;
    de.end().map_err(|e| CliError::Validation(format!("trailing content: {e}")))?;
    Ok(scenario)
}

fn field_err(field: impl fmt::Display, err: impl fmt::Display) -> CliError {
    CliError::Validation(format!("field `{field}`: {err}"))
}

impl Scenario {
    pub fn resolve(&self) -> Result<Model, CliError> {
        let mut market = MarketParams64::new(self.market.r, self.market.t).map_err(|e| field_err("market", e))?;
        if let Some(spot) = self.market.spot {
            market = market.with_spot(spot).map_err(|e| field_err("market.spot", e))?;
        }

        let measure_specs: &[MeasureSpec] = match &self.regularity {
            RegularitySpec::CompleteUncertainty => &[],
            RegularitySpec::Measures(m) => {
                if m.is_empty() {
                    return Err(field_err("regularity", "at least one measure is required"));
                }
                m
            }
        };

        let grid = self.build_grid(measure_specs, &market)?;

        let (regularity, resolved) = match &self.regularity {
            RegularitySpec::CompleteUncertainty => {
                (Regularity64::complete_uncertainty(&grid), RegularitySpec::CompleteUncertainty)
            }
            RegularitySpec::Measures(specs) => {
                let mut measures = Vec::with_capacity(specs.len());
                let mut resolved = Vec::with_capacity(specs.len());
                for (i, spec) in specs.iter().enumerate() {
                    let (m, r) = resolve_measure(spec, &grid, &market)
                        .map_err(|e| field_err(format_args!("regularity[{i}]"), e))?;
                    measures.push(m);
                    resolved.push(r);
                }
                let reg = Regularity64::family(measures).map_err(|e| field_err("regularity", e))?;
                (reg, RegularitySpec::Measures(resolved))
            }
        };

        let instruments: Vec<Instrument> = self.instruments.iter().map(InstrumentSpec::to_instrument).collect();
        for (i, inst) in instruments.iter().enumerate() {
            inst.payoff
                .evaluate(&grid)
                .map_err(|e| field_err(format_args!("instruments[{i}]"), e))?;
        }

        Ok(Model { market, regularity, instruments, resolved })
    }

    fn build_grid(&self, specs: &[MeasureSpec], market: &MarketParams64) -> Result<Arc<StateGrid64>, CliError> {
        let lognormals: Vec<(usize, &MeasureSpec)> = specs
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, MeasureSpec::Lognormal { .. }))
            .collect();

        if let Some((i, first)) = lognormals.first() {
            if self.grid.is_some() {
                return Err(field_err("grid", "must be omitted when the regularity contains a lognormal measure"));
            }
            if let Some((j, _)) = lognormals.iter().find(|(_, s)| *s != *first) {
                return Err(field_err(
                    format_args!("regularity[{j}]"),
                    "all lognormal measures in one scenario must share parameters",
                ));
            }
            let (grid, _) = build_lognormal(first, market)
                .map_err(|e| field_err(format_args!("regularity[{i}]"), e))?;
            return Ok(grid);
        }

        let spec = self.grid.as_ref().ok_or_else(|| field_err("grid", "missing"))?;
        let grid = match spec {
            GridSpec::States { states } => StateGrid::new(states.clone()),
            GridSpec::Range { min, max, points } => StateGrid::linspace(*min, *max, *points),
        }
        .map_err(|e| field_err("grid", e))?;
        Ok(Arc::new(grid))
    }
}

fn build_lognormal(
    spec: &MeasureSpec,
    market: &MarketParams64,
) -> Result<(Arc<StateGrid64>, DiscreteMeasure<f64>), String> {
    let MeasureSpec::Lognormal { sigma, points, halfwidth } = spec else {
        unreachable!("caller filters lognormal specs")
    };
    let defaults = LognormalGridSpec::<f64>::default();
    let grid_spec = LognormalGridSpec {
        n_points: points.unwrap_or(defaults.n_points),
        log_halfwidth_sigmas: halfwidth.unwrap_or(defaults.log_halfwidth_sigmas),
    };
    let spot = market.spot.ok_or("lognormal measure needs market.spot")?;
    lognormal(grid_spec, spot, market.rate, *sigma, market.maturity).map_err(|e| e.to_string())
}

fn state_index(grid: &StateGrid64, state: f64) -> Result<usize, String> {
    grid.index_of(state)
        .ok_or_else(|| format!("state {state} is not on the grid"))
}

fn resolve_measure(
    spec: &MeasureSpec,
    grid: &Arc<StateGrid64>,
    market: &MarketParams64,
) -> Result<(DiscreteMeasure<f64>, MeasureSpec), String> {
    match spec {
        MeasureSpec::Dirac { index, state } => {
            let index = match (index, state) {
                (Some(i), None) => *i,
                (None, Some(s)) => state_index(grid, *s)?,
                _ => return Err("dirac needs exactly one of `index` or `state`".into()),
            };
            let m = DiscreteMeasure::dirac(grid, index).map_err(|e| e.to_string())?;
            Ok((m, MeasureSpec::Dirac { index: Some(index), state: None }))
        }
        MeasureSpec::Uniform { indices, states } => {
            let indices = match (indices, states) {
                (Some(i), None) => i.clone(),
                (None, Some(s)) => s.iter().map(|x| state_index(grid, *x)).collect::<Result<_, _>>()?,
                _ => return Err("uniform needs exactly one of `indices` or `states`".into()),
            };
            let m = DiscreteMeasure::uniform_on(grid, &indices).map_err(|e| e.to_string())?;
            Ok((m, MeasureSpec::Uniform { indices: Some(indices), states: None }))
        }
        MeasureSpec::Explicit { weights } => {
            let m = DiscreteMeasure::explicit(grid, weights.clone()).map_err(|e| e.to_string())?;
            Ok((m, spec.clone()))
        }
        MeasureSpec::Lognormal { .. } => {
            let (_, m) = build_lognormal(spec, market)?;
            let weights = m.weights().to_vec();
            // the shared lognormal grid is value-equal to `grid`
            let m = DiscreteMeasure::explicit(grid, weights.clone()).map_err(|e| e.to_string())?;
            Ok((m.with_label("lognormal"), MeasureSpec::Explicit { weights }))
        }
    }
}
