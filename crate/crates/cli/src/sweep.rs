//! Evaluation of a run configuration into CSV.

use std::fmt::Write as _;

use rayon::prelude::*;
use secrecy_lab::mc::{estimate_all, Estimate, SamplerConfig};
use secrecy_lab::secrecy::{Evaluator, SecrecyOptions, SecrecyScenario};

use crate::config::{curve_suffix, Metric, RunConfig};

/// What to compute: closed forms and asymptotics, Monte Carlo, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Run,
    /// Only the Monte Carlo columns.
    MonteCarlo,
}

/// A numerical failure, located by metric and sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub metric: &'static str,
    pub point: String,
    pub message: String,
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "metric `{}` failed at {}: {}", self.metric, self.point, self.message)
    }
}

impl std::error::Error for EvalError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Closed(Metric),
    Mc(McMetric),
    McCi(McMetric),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum McMetric {
    Spsc,
    Asc,
    Sop,
}

impl McMetric {
    fn name(self) -> &'static str {
        match self {
            McMetric::Spsc => "spsc_mc",
            McMetric::Asc => "asc_mc",
            McMetric::Sop => "sop_mc",
        }
    }

    fn pick(self, e: &secrecy_lab::mc::PairEstimates) -> Estimate {
        match self {
            McMetric::Spsc => e.spsc,
            McMetric::Asc => e.asc,
            McMetric::Sop => e.sop,
        }
    }
}

fn columns(cfg: &RunConfig, mode: Mode) -> Vec<Column> {
    let mut out = Vec::new();
    let push_mc = |out: &mut Vec<Column>, m: McMetric| {
        if !out.contains(&Column::Mc(m)) {
            out.push(Column::Mc(m));
            out.push(Column::McCi(m));
        }
    };
    for &m in &cfg.metrics {
        let mc = match m {
            Metric::Spsc => Some(McMetric::Spsc),
            Metric::Asc => Some(McMetric::Asc),
            Metric::SopLower | Metric::SopMc => Some(McMetric::Sop),
            _ => None,
        };
        match mode {
            Mode::Run => {
                if m == Metric::SopMc {
                    push_mc(&mut out, McMetric::Sop);
                    continue;
                }
                out.push(Column::Closed(m));
                if cfg.mc_validate {
                    if let Some(mc) = mc {
                        push_mc(&mut out, mc);
                    }
                }
            }
            Mode::MonteCarlo => {
                if let Some(mc) = mc {
                    push_mc(&mut out, mc);
                }
            }
        }
    }
    out
}

fn column_name(c: Column) -> String {
    match c {
        Column::Closed(m) => m.name().to_string(),
        Column::Mc(m) => m.name().to_string(),
        Column::McCi(m) => format!("{}_ci", m.name()),
    }
}

struct Point {
    curve: usize,
    value: Option<f64>,
    scenario: SecrecyScenario<f64>,
}

/// Seed of the `k`-th row, so rows draw independent samples (SplitMix64).
fn row_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn evaluate_point(cfg: &RunConfig, cols: &[Column], p: &Point, row: u64) -> Result<Vec<f64>, EvalError> {
    let located = |metric: &'static str, e: &dyn std::fmt::Display| EvalError {
        metric,
        point: describe(cfg, p),
        message: e.to_string(),
    };
    let opts = SecrecyOptions {
        laguerre_order: cfg.laguerre_order,
        ..SecrecyOptions::default()
    };
    let needs_closed = cols.iter().any(|c| matches!(c, Column::Closed(_)));
    let ev = if needs_closed {
        Some(Evaluator::new(&p.scenario, &opts).map_err(|e| located("scenario", &e))?)
    } else {
        None
    };
    let needs_mc = cols.iter().any(|c| matches!(c, Column::Mc(_)));
    let mc = if needs_mc {
        let sc = SamplerConfig {
            seed: row_seed(cfg.mc.seed, row),
            ..cfg.mc
        };
        Some(estimate_all(&p.scenario, &sc).map_err(|e| located("monte_carlo", &e))?)
    } else {
        None
    };
    cols.iter()
        .map(|&c| match c {
            Column::Closed(m) => {
                let ev = ev.as_ref().expect("closed-form columns need an evaluator");
                let r = match m {
                    Metric::Spsc => ev.spsc().map(|r| r.value),
                    Metric::Asc => ev.asc_exact().map(|r| r.value),
                    Metric::AscAsym => ev.asc_asymptotic().map(|r| r.value),
                    Metric::AscAsymQuad => ev.asc_asymptotic_quadrature().map(|r| r.value),
                    Metric::SopLower => ev.sop_lower().map(|r| r.value),
                    Metric::SopAsym => ev.sop_asymptotic().map(|r| r.value),
                    Metric::Diversity => ev.diversity_gain(),
                    Metric::SopMc => unreachable!("sop_mc is a Monte Carlo column"),
                };
                r.map_err(|e| located(m.name(), &e))
            }
            Column::Mc(m) => Ok(m.pick(mc.as_ref().expect("sampled")).mean),
            Column::McCi(m) => Ok(m.pick(mc.as_ref().expect("sampled")).ci_half_width),
        })
        .collect()
}

fn describe(cfg: &RunConfig, p: &Point) -> String {
    let curve = curve_suffix(&cfg.curves[p.curve].name);
    match (cfg.sweep, p.value) {
        (Some(sw), Some(v)) => format!("{} = {v}{curve}", sw.variable.name()),
        _ => format!("the configured scenario{curve}"),
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Evaluates every sweep point of every curve and renders the CSV.
///
/// Points are evaluated in parallel; rows are written in sweep order.
pub fn evaluate(cfg: &RunConfig, mode: Mode) -> Result<String, EvalError> {
    let cols = columns(cfg, mode);
    if cols.is_empty() {
        return Err(EvalError {
            metric: "metrics",
            point: "configuration".into(),
            message: "no requested metric has a Monte Carlo estimator".into(),
        });
    }
    let mut points = Vec::new();
    for (ci, c) in cfg.curves.iter().enumerate() {
        match cfg.sweep {
            Some(sw) => points.extend(sw.values().into_iter().map(|v| Point {
                curve: ci,
                value: Some(v),
                scenario: sw.variable.apply(&c.scenario, v),
            })),
            None => points.push(Point {
                curve: ci,
                value: None,
                scenario: c.scenario,
            }),
        }
    }
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .enumerate()
        .map(|(k, p)| evaluate_point(cfg, &cols, p, k as u64))
        .collect::<Result<_, _>>()?;

    let mut header = Vec::new();
    if cfg.has_curve_names() {
        header.push("curve".to_string());
    }
    if let Some(sw) = cfg.sweep {
        header.push(sw.variable.name().to_string());
    }
    header.extend(cols.iter().map(|&c| column_name(c)));
    let mut out = header.join(",");
    out.push('\n');
    for (p, row) in points.iter().zip(&rows) {
        let mut fields = Vec::new();
        if cfg.has_curve_names() {
            fields.push(cfg.curves[p.curve].name.clone());
        }
        if let Some(v) = p.value {
            fields.push(num(v));
        }
        fields.extend(row.iter().map(|&v| num(v)));
        let _ = writeln!(out, "{}", fields.join(","));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;

    const BASE: &str = "\
channel_d.alpha = 2
channel_d.mu = 1
channel_d.m = 1.5
channel_d.z = 1.2
channel_d.gamma_bar_db = 10
channel_e.alpha = 2
channel_e.mu = 1
channel_e.m = 3
channel_e.z = 0.7
channel_e.gamma_bar_db = 0
secrecy.rate = 0.5
mc.n_samples = 20000
mc.n_streams = 4
";

    #[test]
    fn header_and_rows() {
        let cfg = parse(&format!(
            "{BASE}metrics = spsc, sop_lower\nmc.validate = true\nsweep.variable = gamma_ratio_db\nsweep.start = 0\nsweep.stop = 20\nsweep.points = 3\n"
        ))
        .unwrap();
        let csv = evaluate(&cfg, Mode::Run).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "gamma_ratio_db,spsc,spsc_mc,spsc_mc_ci,sop_lower,sop_mc,sop_mc_ci"
        );
        assert_eq!(lines.len(), 4);
        let spsc: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(spsc.windows(2).all(|w| w[0] < w[1]), "{spsc:?}");
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn monte_carlo_mode_and_curves() {
        let cfg = parse(&format!(
            "{BASE}metrics = spsc, asc_asym, diversity\ncurve.x.channel_e.z = 2\ncurve.y.channel_e.z = 3\n"
        ))
        .unwrap();
        let csv = evaluate(&cfg, Mode::MonteCarlo).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "curve,spsc_mc,spsc_mc_ci");
        assert!(lines[1].starts_with("x,") && lines[2].starts_with("y,"));
        let only_asym = parse(&format!("{BASE}metrics = asc_asym\n")).unwrap();
        assert!(evaluate(&only_asym, Mode::MonteCarlo).is_err());
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(1.0).len(), "1.0000000000000000e0".len());
    }

    #[test]
    fn row_seeds_differ() {
        assert_ne!(row_seed(1, 0), row_seed(1, 1));
        assert_eq!(row_seed(5, 3), row_seed(5, 3));
    }
}
