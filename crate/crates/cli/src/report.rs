//! Report records and their text / JSON-lines renderings.
//!
//! Every number is rounded to 10 significant digits before rendering so that
//! output is byte-stable across platforms.

use serde::{Deserialize, Serialize};

/// Rounds to 10 significant digits; maps `-0` to `0`.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn num(x: f64) -> String {
    format!("{}", sig10(x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Record {
    /// Quotes at time zero and the corresponding undiscounted amounts at T.
    Price {
        instrument: usize,
        label: String,
        bid: f64,
        mid: f64,
        ask: f64,
        bid_at_t: f64,
        mid_at_t: f64,
        ask_at_t: f64,
        r: f64,
        #[serde(rename = "T")]
        t: f64,
    },
    ForwardSummary {
        /// Spot grown at the riskless rate; absent without a spot.
        forward_price: Option<f64>,
        /// Mid of the family's expected terminal price (at T).
        implied_forward: f64,
        implied_forward_t0: f64,
        spot_residual: Option<f64>,
    },
    ForwardValue {
        instrument: usize,
        label: String,
        strike: f64,
        value: f64,
        value_at_t: f64,
    },
    Parity {
        instrument: usize,
        label: String,
        strike: f64,
        /// Undiscounted call mid minus put mid.
        call_minus_put_at_t: f64,
        /// Forward price minus strike.
        forward_side_at_t: f64,
        residual: f64,
    },
    Delta {
        instrument: usize,
        label: String,
        delta: f64,
        u_star: f64,
        theta0: f64,
        uncovered: f64,
        hedged: f64,
    },
    Profit {
        instrument: usize,
        label: String,
        uncovered_min_profit: f64,
        uncovered_min_profit_t0: f64,
    },
    Calibration {
        scale: f64,
        residual_before: f64,
        residual_after: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        out: Option<String>,
    },
    Axioms {
        cases: usize,
        failures: usize,
        first_failing_seed: Option<u64>,
    },
}

impl Record {
    /// Copy with every float rounded to 10 significant digits.
    pub fn rounded(&self) -> Record {
        let mut r = self.clone();
        let opt = |x: &mut Option<f64>| {
            if let Some(v) = x {
                *v = sig10(*v);
            }
        };
        match &mut r {
            Record::Price { bid, mid, ask, bid_at_t, mid_at_t, ask_at_t, r, t, .. } => {
                for v in [bid, mid, ask, bid_at_t, mid_at_t, ask_at_t, r, t] {
                    *v = sig10(*v);
                }
            }
            Record::ForwardSummary { forward_price, implied_forward, implied_forward_t0, spot_residual } => {
                opt(forward_price);
                opt(spot_residual);
                *implied_forward = sig10(*implied_forward);
                *implied_forward_t0 = sig10(*implied_forward_t0);
            }
            Record::ForwardValue { strike, value, value_at_t, .. } => {
                for v in [strike, value, value_at_t] {
                    *v = sig10(*v);
                }
            }
            Record::Parity { strike, call_minus_put_at_t, forward_side_at_t, residual, .. } => {
                for v in [strike, call_minus_put_at_t, forward_side_at_t, residual] {
                    *v = sig10(*v);
                }
            }
            Record::Delta { delta, u_star, theta0, uncovered, hedged, .. } => {
                for v in [delta, u_star, theta0, uncovered, hedged] {
                    *v = sig10(*v);
                }
            }
            Record::Profit { uncovered_min_profit, uncovered_min_profit_t0, .. } => {
                *uncovered_min_profit = sig10(*uncovered_min_profit);
                *uncovered_min_profit_t0 = sig10(*uncovered_min_profit_t0);
            }
            Record::Calibration { scale, residual_before, residual_after, .. } => {
                for v in [scale, residual_before, residual_after] {
                    *v = sig10(*v);
                }
            }
            Record::Axioms { .. } => {}
        }
        r
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.rounded()).expect("records serialize")
    }

    /// `(column, value)` pairs for the text table.
    fn columns(&self) -> Vec<(&'static str, String)> {
        let opt = |x: &Option<f64>| x.map(num).unwrap_or_else(|| "-".into());
        match self {
            Record::Price { instrument, label, bid, mid, ask, bid_at_t, mid_at_t, ask_at_t, .. } => vec![
                ("#", instrument.to_string()),
                ("instrument", label.clone()),
                ("bid", num(*bid)),
                ("mid", num(*mid)),
                ("ask", num(*ask)),
                ("bid@T", num(*bid_at_t)),
                ("mid@T", num(*mid_at_t)),
                ("ask@T", num(*ask_at_t)),
            ],
            Record::ForwardSummary { forward_price, implied_forward, implied_forward_t0, spot_residual } => vec![
                ("forward_price", opt(forward_price)),
                ("implied_forward@T", num(*implied_forward)),
                ("implied_forward", num(*implied_forward_t0)),
                ("spot_residual", opt(spot_residual)),
            ],
            Record::ForwardValue { instrument, label, strike, value, value_at_t } => vec![
                ("#", instrument.to_string()),
                ("instrument", label.clone()),
                ("strike", num(*strike)),
                ("value", num(*value)),
                ("value@T", num(*value_at_t)),
            ],
            Record::Parity { instrument, label, strike, call_minus_put_at_t, forward_side_at_t, residual } => vec![
                ("#", instrument.to_string()),
                ("instrument", label.clone()),
                ("strike", num(*strike)),
                ("call-put@T", num(*call_minus_put_at_t)),
                ("fwd-strike@T", num(*forward_side_at_t)),
                ("residual", num(*residual)),
            ],
            Record::Delta { instrument, label, delta, u_star, theta0, uncovered, hedged } => vec![
                ("#", instrument.to_string()),
                ("instrument", label.clone()),
                ("delta", num(*delta)),
                ("u_star", num(*u_star)),
                ("theta0", num(*theta0)),
                ("uncovered", num(*uncovered)),
                ("hedged", num(*hedged)),
            ],
            Record::Profit { instrument, label, uncovered_min_profit, uncovered_min_profit_t0 } => vec![
                ("#", instrument.to_string()),
                ("instrument", label.clone()),
                ("uncovered@T", num(*uncovered_min_profit)),
                ("uncovered", num(*uncovered_min_profit_t0)),
            ],
            Record::Calibration { scale, residual_before, residual_after, out } => vec![
                ("scale", num(*scale)),
                ("residual_before", num(*residual_before)),
                ("residual_after", num(*residual_after)),
                ("out", out.clone().unwrap_or_else(|| "-".into())),
            ],
            Record::Axioms { cases, failures, first_failing_seed } => vec![
                ("cases", cases.to_string()),
                ("failures", failures.to_string()),
                ("first_failing_seed", first_failing_seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into())),
            ],
        }
    }
}

/// Consecutive records of the same kind share one aligned table.
pub fn render_text(records: &[Record]) -> String {
    let mut out = String::new();
    let mut start = 0;
    while start < records.len() {
        let kind = std::mem::discriminant(&records[start]);
        let end = records[start..]
            .iter()
            .position(|r| std::mem::discriminant(r) != kind)
            .map_or(records.len(), |k| start + k);
        let rows: Vec<Vec<(&str, String)>> = records[start..end].iter().map(Record::columns).collect();
        let headers: Vec<&str> = rows[0].iter().map(|(h, _)| *h).collect();
        let widths: Vec<usize> = (0..headers.len())
            .map(|c| rows.iter().map(|r| r[c].1.len()).chain([headers[c].len()]).max().unwrap())
            .collect();
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        if start > 0 {
            out.push('\n');
        }
        out.push_str(&line(headers.clone()));
        out.push('\n');
        for row in &rows {
            out.push_str(&line(row.iter().map(|(_, v)| v.as_str()).collect()));
            out.push('\n');
        }
        start = end;
    }
    out
}

pub fn render_json(records: &[Record]) -> String {
    records.iter().map(|r| r.to_json_line() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig10_rounds_and_normalizes_zero() {
        assert_eq!(sig10(10.450_583_572_185_565), 10.450_583_57);
        assert_eq!(sig10(-0.0).to_string(), "0");
        assert_eq!(sig10(15.0), 15.0);
        assert_eq!(sig10(1.0 / 3.0), 0.333_333_333_3);
        assert_eq!(sig10(123_456_789_012.0), 123_456_789_000.0);
    }

    #[test]
    fn json_lines_round_trip() {
        let recs = vec![
            Record::Price {
                instrument: 0,
                label: "call(100)".into(),
                bid: 0.0,
                mid: 15.0,
                ask: 30.0,
                bid_at_t: 0.0,
                mid_at_t: 15.0,
                ask_at_t: 30.0,
                r: 0.0,
                t: 1.0,
            },
            Record::ForwardSummary {
                forward_price: None,
                implied_forward: 110.0,
                implied_forward_t0: 110.0,
                spot_residual: None,
            },
            Record::Axioms { cases: 10, failures: 0, first_failing_seed: None },
        ];
        let text = render_json(&recs);
        let back: Vec<Record> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back, recs);
        assert!(text.lines().next().unwrap().contains("\"mid\":15.0"));
    }

    #[test]
    fn text_table_is_aligned() {
        let recs = vec![
            Record::Profit {
                instrument: 0,
                label: "call(100)".into(),
                uncovered_min_profit: -15.0,
                uncovered_min_profit_t0: -15.0,
            },
            Record::Profit {
                instrument: 1,
                label: "p".into(),
                uncovered_min_profit: -1.0 / 3.0,
                uncovered_min_profit_t0: 0.0,
            },
        ];
        let text = render_text(&recs);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("#  instrument"));
        assert!(lines[2].contains("-0.3333333333"));
    }
}
