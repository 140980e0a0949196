//! Command-line front-end: reads a scenario file, runs one command and emits
//! a text table or JSON-lines records.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use regval::axioms::run_suite;
use regval::{
    bounds, calibrate_scale, forward_price, forward_value, hedged_portfolio_report, implied_forward,
    parity_residual, quote, spot_condition_residual, uncovered_min_profit, MarketParams64, Payoff,
};
use thiserror::Error;

pub mod report;
pub mod scenario;

use report::{render_json, render_text, Record};
use scenario::{GridSpec, Model, Scenario};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Computation(_) => 3,
        }
    }
}

impl From<regval::Error> for CliError {
    fn from(e: regval::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Computation(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "regval", version, about = "Worst-case expectation pricing over families of measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bid, mid and ask per instrument
    Price,
    /// Forward price, implied forward and forward contract values
    Forward,
    /// Call/put/forward consistency residual per strike
    Parity,
    /// Generalized delta and hedged worst-case profit per instrument
    Delta,
    /// Worst-case expected profit of an uncovered position per instrument
    Profit,
    /// Rescale the grid to match the spot; writes the new scenario to --out
    Calibrate,
    /// Randomized checks of the decision criterion's properties
    Axioms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Scenario file (JSON); optional for `axioms`
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output path (the scaled scenario for `calibrate`, the report otherwise)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Base seed for `axioms`
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random cases for `axioms`
    #[arg(long, global = true, default_value_t = 10_000)]
    pub cases: usize,
}

/// Rendered report plus the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub report: String,
    pub exit_code: i32,
}

/// Runs one command. The report has already been written to `--out` when
/// that applies.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let mut exit_code = 0;
    let records = match cli.command {
        Command::Axioms => {
            let (records, passed) = axioms(&cli.opts)?;
            if !passed {
                exit_code = 3;
            }
            records
        }
        Command::Calibrate => calibrate(&cli.opts)?,
        cmd => {
            let model = load_model(&cli.opts)?;
            match cmd {
                Command::Price => price(&model)?,
                Command::Forward => forward(&model)?,
                Command::Parity => parity(&model)?,
                Command::Delta => delta(&model)?,
                Command::Profit => profit(&model)?,
                Command::Calibrate | Command::Axioms => unreachable!(),
            }
        }
    };
    let rendered = match cli.opts.format {
        Format::Text => render_text(&records),
        Format::Json => render_json(&records),
    };
    if cli.command != Command::Calibrate {
        if let Some(path) = &cli.opts.out {
            write_file(path, &rendered)?;
        }
    }
    Ok(Output { report: rendered, exit_code })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn scenario_path(opts: &Options) -> Result<&Path, CliError> {
    opts.scenario
        .as_deref()
        .ok_or_else(|| CliError::Validation("--scenario <path> is required".into()))
}

fn load_model(opts: &Options) -> Result<Model, CliError> {
    scenario::load(scenario_path(opts)?)?.resolve()
}

fn require_spot(market: &MarketParams64, command: &str) -> Result<f64, CliError> {
    market
        .spot
        .ok_or_else(|| CliError::Validation(format!("`{command}` requires market.spot")))
}

fn price(model: &Model) -> Result<Vec<Record>, CliError> {
    let reg = &model.regularity;
    model
        .instruments
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let q = quote(&inst.payoff, reg, &model.market)?;
            let b = bounds(reg, &inst.payoff.evaluate(reg.grid())?)?;
            Ok(Record::Price {
                instrument: i,
                label: inst.label.clone(),
                bid: q.bid,
                mid: q.mid,
                ask: q.ask,
                bid_at_t: b.min_exp,
                mid_at_t: b.mid(),
                ask_at_t: b.max_exp,
                r: q.rate,
                t: q.maturity,
            })
        })
        .collect()
}

fn forward(model: &Model) -> Result<Vec<Record>, CliError> {
    let m = &model.market;
    let implied = implied_forward(&model.regularity);
    let mut out = vec![Record::ForwardSummary {
        forward_price: m.spot.map(|_| forward_price(m)).transpose()?,
        implied_forward: implied,
        implied_forward_t0: m.discount() * implied,
        spot_residual: m.spot.map(|_| spot_condition_residual(&model.regularity, m)).transpose()?,
    }];
    for (i, inst) in model.instruments.iter().enumerate() {
        let Payoff::Forward { strike } = inst.payoff else { continue };
        require_spot(m, "forward")?;
        let value = forward_value(m, strike)?;
        out.push(Record::ForwardValue {
            instrument: i,
            label: inst.label.clone(),
            strike,
            value,
            value_at_t: forward_price(m)? - strike,
        });
    }
    Ok(out)
}

fn parity(model: &Model) -> Result<Vec<Record>, CliError> {
    let m = &model.market;
    require_spot(m, "parity")?;
    model
        .instruments
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let strike = inst.payoff.strike().ok_or_else(|| {
                CliError::Validation(format!("field `instruments[{i}]`: parity needs an instrument with a strike"))
            })?;
            let residual = parity_residual(&model.regularity, strike, m)?;
            let forward_side = forward_price(m)? - strike;
            Ok(Record::Parity {
                instrument: i,
                label: inst.label.clone(),
                strike,
                call_minus_put_at_t: residual + forward_side,
                forward_side_at_t: forward_side,
                residual,
            })
        })
        .collect()
}

fn delta(model: &Model) -> Result<Vec<Record>, CliError> {
    require_spot(&model.market, "delta")?;
    model
        .instruments
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let h = hedged_portfolio_report(&inst.payoff, &model.regularity, &model.market)
                .map_err(|e| CliError::from(e).with_context(&format!("instrument {i}")))?;
            Ok(Record::Delta {
                instrument: i,
                label: inst.label.clone(),
                delta: h.delta,
                u_star: h.option_mid,
                theta0: h.spot,
                uncovered: h.uncovered_min_profit,
                hedged: h.hedged_min_profit,
            })
        })
        .collect()
}

fn profit(model: &Model) -> Result<Vec<Record>, CliError> {
    model
        .instruments
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let u = uncovered_min_profit(&inst.payoff, &model.regularity)?;
            Ok(Record::Profit {
                instrument: i,
                label: inst.label.clone(),
                uncovered_min_profit: u,
                uncovered_min_profit_t0: model.market.discount() * u,
            })
        })
        .collect()
}

fn calibrate(opts: &Options) -> Result<Vec<Record>, CliError> {
    let out = opts
        .out
        .as_deref()
        .ok_or_else(|| CliError::Validation("`calibrate` requires --out <path>".into()))?;
    let scenario = scenario::load(scenario_path(opts)?)?;
    let model = scenario.resolve()?;
    require_spot(&model.market, "calibrate")?;
    let before = spot_condition_residual(&model.regularity, &model.market)?;
    let cal = calibrate_scale(&model.regularity, &model.market)?;
    let after = spot_condition_residual(&cal.regularity, &model.market)?;

    let scaled = Scenario {
        market: scenario.market,
        grid: Some(GridSpec::States { states: cal.regularity.grid().states().to_vec() }),
        regularity: model.resolved.clone(),
        instruments: scenario.instruments.clone(),
    };
    let text = serde_json::to_string_pretty(&scaled).expect("scenario serializes") + "\n";
    write_file(out, &text)?;

    Ok(vec![Record::Calibration {
        scale: cal.scale,
        residual_before: before,
        residual_after: after,
        out: Some(out.display().to_string()),
    }])
}

fn axioms(opts: &Options) -> Result<(Vec<Record>, bool), CliError> {
    let market = match &opts.scenario {
        Some(path) => scenario::load(path)?.resolve()?.market,
        None => MarketParams64::new(0.03, 1.0)?,
    };
    let summary = run_suite::<f64>(opts.seed, opts.cases, &market)?;
    let record = Record::Axioms {
        cases: summary.cases,
        failures: summary.failures,
        first_failing_seed: summary.first_failing_seed,
    };
    for v in &summary.sample_violations {
        eprintln!("violation: {v}");
    }
    Ok((vec![record], summary.passed()))
}

impl CliError {
    fn with_context(self, ctx: &str) -> Self {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{ctx}: {m}")),
            CliError::Computation(m) => CliError::Computation(format!("{ctx}: {m}")),
        }
    }
}
