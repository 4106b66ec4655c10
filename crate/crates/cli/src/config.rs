//! Run configuration: flat `key = value` lines with dotted keys.
//!
//! ```text
//! # comment
//! channel_d.alpha = 2.0
//! channel_d.z = inf
//! channel_d.gamma_bar_db = 10
//! metrics = spsc, sop_lower
//! sweep.variable = gamma_ratio_db
//! curve.aligned.channel_e.z = inf
//! ```
//!
//! `curve.<name>.<key>` overrides a scenario key for one curve; each curve
//! is swept separately. Average SNRs are given in dB and converted here.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use secrecy_lab::channel::ChannelParams;
use secrecy_lab::mc::{SamplerConfig, MIN_SAMPLES};
use secrecy_lab::secrecy::SecrecyScenario;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, 0 when the problem is not tied to one line.
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: `{}`: {}", self.line, self.field, self.message)
        } else {
            write!(f, "`{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Spsc,
    Asc,
    AscAsym,
    /// The ASC limit by adaptive quadrature instead of Gauss-Laguerre.
    AscAsymQuad,
    SopLower,
    SopAsym,
    SopMc,
    Diversity,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Spsc,
        Metric::Asc,
        Metric::AscAsym,
        Metric::AscAsymQuad,
        Metric::SopLower,
        Metric::SopAsym,
        Metric::SopMc,
        Metric::Diversity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Spsc => "spsc",
            Metric::Asc => "asc",
            Metric::AscAsym => "asc_asym",
            Metric::AscAsymQuad => "asc_asym_quad",
            Metric::SopLower => "sop_lower",
            Metric::SopAsym => "sop_asym",
            Metric::SopMc => "sop_mc",
            Metric::Diversity => "diversity",
        }
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`; expected one of {}", metric_names()))
    }
}

fn metric_names() -> String {
    Metric::ALL.map(Metric::name).join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// `γ̄_D/γ̄_E` in dB with `γ̄_E` fixed.
    GammaRatioDb,
    /// Common `γ̄_D = γ̄_E` in dB.
    GammaBarDb,
    GammaBarDDb,
    Rate,
    ZD,
    ZE,
    AlphaE,
}

impl SweepVariable {
    const ALL: [SweepVariable; 7] = [
        SweepVariable::GammaRatioDb,
        SweepVariable::GammaBarDb,
        SweepVariable::GammaBarDDb,
        SweepVariable::Rate,
        SweepVariable::ZD,
        SweepVariable::ZE,
        SweepVariable::AlphaE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::GammaRatioDb => "gamma_ratio_db",
            SweepVariable::GammaBarDb => "gamma_bar_db",
            SweepVariable::GammaBarDDb => "gamma_bar_d_db",
            SweepVariable::Rate => "R_s",
            SweepVariable::ZD => "z_D",
            SweepVariable::ZE => "z_E",
            SweepVariable::AlphaE => "alpha_E",
        }
    }

    /// The scenario at sweep value `v`.
    pub fn apply(self, base: &SecrecyScenario<f64>, v: f64) -> SecrecyScenario<f64> {
        let mut s = *base;
        match self {
            SweepVariable::GammaRatioDb => s.d.gamma_bar = s.e.gamma_bar * db_to_linear(v),
            SweepVariable::GammaBarDb => {
                s.d.gamma_bar = db_to_linear(v);
                s.e.gamma_bar = db_to_linear(v);
            }
            SweepVariable::GammaBarDDb => s.d.gamma_bar = db_to_linear(v),
            SweepVariable::Rate => s.rate = v,
            SweepVariable::ZD => s.d.z = v,
            SweepVariable::ZE => s.e.z = v,
            SweepVariable::AlphaE => s.e.alpha = v,
        }
        s
    }
}

impl FromStr for SweepVariable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SweepVariable::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            format!(
                "unknown sweep variable `{s}`; expected one of {}",
                SweepVariable::ALL.map(|v| v.name()).join(", ")
            )
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => (self.start.ln() + (self.stop / self.start).ln() * t).exp(),
                }
            })
            .collect()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub scenario: SecrecyScenario<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// One entry per curve; a single unnamed curve when none are declared.
    pub curves: Vec<Curve>,
    /// Requested metrics in canonical order.
    pub metrics: Vec<Metric>,
    pub sweep: Option<SweepSpec>,
    pub mc: SamplerConfig,
    /// Pair every closed form that has a Monte Carlo counterpart with it.
    pub mc_validate: bool,
    pub laguerre_order: usize,
    pub output_path: Option<String>,
}

impl RunConfig {
    pub fn has_curve_names(&self) -> bool {
        self.curves.len() > 1 || !self.curves[0].name.is_empty()
    }
}

const CHANNEL_KEYS: [&str; 5] = ["alpha", "mu", "m", "z", "gamma_bar_db"];

#[derive(Debug, Clone, Copy)]
struct Entry<'a> {
    line: usize,
    value: &'a str,
}

fn parse_f64(e: Entry<'_>, field: &str) -> Result<f64, ConfigError> {
    let v = match e.value {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        s => s
            .parse::<f64>()
            .map_err(|_| err(e.line, field, format!("`{s}` is not a number")))?,
    };
    if v.is_nan() {
        return Err(err(e.line, field, "NaN is not allowed"));
    }
    Ok(v)
}

fn parse_u64(e: Entry<'_>, field: &str) -> Result<u64, ConfigError> {
    let s = e.value.replace('_', "");
    s.parse::<u64>().or_else(|_| {
        // Accepts `1e6`-style counts when they are exact integers.
        s.parse::<f64>()
            .ok()
            .filter(|v| v.fract() == 0.0 && *v >= 0.0 && *v < 2f64.powi(63))
            .map(|v| v as u64)
            .ok_or_else(|| err(e.line, field, format!("`{}` is not a non-negative integer", e.value)))
    })
}

fn parse_bool(e: Entry<'_>, field: &str) -> Result<bool, ConfigError> {
    match e.value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        s => Err(err(e.line, field, format!("`{s}` is not a boolean"))),
    }
}

/// Builds a scenario from `channel_d.*`, `channel_e.*` and `secrecy.rate`,
/// with `get` resolving overrides.
fn scenario<'a>(
    get: &dyn Fn(&str) -> Option<(String, Entry<'a>)>,
    curve: &str,
) -> Result<SecrecyScenario<f64>, ConfigError> {
    let channel = |prefix: &str| -> Result<ChannelParams<f64>, ConfigError> {
        let mut vals = [0.0; 5];
        for (slot, key) in vals.iter_mut().zip(CHANNEL_KEYS) {
            let full = format!("{prefix}.{key}");
            let (field, e) = get(&full).ok_or_else(|| err(0, &full, missing(curve)))?;
            *slot = parse_f64(e, &field)?;
        }
        let [alpha, mu, m, z, db] = vals;
        let line = get(&format!("{prefix}.alpha")).map_or(0, |(_, e)| e.line);
        ChannelParams::new(alpha, mu, m, z, db_to_linear(db)).map_err(|e| err(line, prefix, e.to_string()))
    };
    let d = channel("channel_d")?;
    let e = channel("channel_e")?;
    let rate = match get("secrecy.rate") {
        Some((field, e)) => parse_f64(e, &field)?,
        None => 0.0,
    };
    SecrecyScenario::new(d, e, rate).map_err(|e| err(0, "secrecy.rate", e.to_string()))
}

fn missing(curve: &str) -> String {
    if curve.is_empty() {
        "required key is missing".into()
    } else {
        format!("required key is missing for curve `{curve}`")
    }
}

fn is_scenario_key(key: &str) -> bool {
    key == "secrecy.rate"
        || ["channel_d.", "channel_e."]
            .iter()
            .any(|p| key.strip_prefix(p).is_some_and(|k| CHANNEL_KEYS.contains(&k)))
}

const GLOBAL_KEYS: [&str; 12] = [
    "metrics",
    "sweep.variable",
    "sweep.start",
    "sweep.stop",
    "sweep.points",
    "sweep.scale",
    "mc.seed",
    "mc.n_samples",
    "mc.n_streams",
    "mc.validate",
    "numerics.laguerre_order",
    "output.path",
];

pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    let mut base: BTreeMap<&str, Entry<'_>> = BTreeMap::new();
    // Curve overrides in declaration order.
    let mut curves: Vec<(&str, BTreeMap<&str, Entry<'_>>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, content, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(err(line, key, "empty value"));
        }
        let entry = Entry { line, value };
        if let Some(rest) = key.strip_prefix("curve.") {
            let (name, sub) = rest
                .split_once('.')
                .ok_or_else(|| err(line, key, "expected `curve.<name>.<key>`"))?;
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) {
                return Err(err(line, key, "curve names may only use letters, digits, `_` and `-`"));
            }
            if !is_scenario_key(sub) {
                return Err(err(line, key, format!("`{sub}` cannot be set per curve")));
            }
            let idx = match curves.iter().position(|(n, _)| *n == name) {
                Some(i) => i,
                None => {
                    curves.push((name, BTreeMap::new()));
                    curves.len() - 1
                }
            };
            if curves[idx].1.insert(sub, entry).is_some() {
                return Err(err(line, key, "duplicate key"));
            }
            continue;
        }
        if !is_scenario_key(key) && !GLOBAL_KEYS.contains(&key) {
            return Err(err(line, key, "unknown key"));
        }
        if base.insert(key, entry).is_some() {
            return Err(err(line, key, "duplicate key"));
        }
    }

    let field = |k: &str| base.get(k).map(|e| (k.to_string(), *e));

    let metrics = {
        let (f, e) = field("metrics").ok_or_else(|| err(0, "metrics", "at least one metric must be requested"))?;
        let mut ms = Vec::new();
        for name in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let m: Metric = name.parse().map_err(|msg: String| err(e.line, &f, msg))?;
            if !ms.contains(&m) {
                ms.push(m);
            }
        }
        if ms.is_empty() {
            return Err(err(e.line, &f, "at least one metric must be requested"));
        }
        ms.sort();
        ms
    };

    let sweep = match field("sweep.variable") {
        None => {
            if let Some(k) = ["sweep.start", "sweep.stop", "sweep.points", "sweep.scale"]
                .iter()
                .find(|k| base.contains_key(**k))
            {
                return Err(err(base[*k].line, k, "sweep settings given without `sweep.variable`"));
            }
            None
        }
        Some((f, e)) => {
            let variable: SweepVariable = e.value.parse().map_err(|msg: String| err(e.line, &f, msg))?;
            let need = |k: &str| field(k).ok_or_else(|| err(0, k, "required when a sweep is declared"));
            let (fs, es) = need("sweep.start")?;
            let (ft, et) = need("sweep.stop")?;
            let (fp, ep) = need("sweep.points")?;
            let start = parse_f64(es, &fs)?;
            let stop = parse_f64(et, &ft)?;
            if !start.is_finite() || !stop.is_finite() || start >= stop {
                return Err(err(
                    et.line,
                    &ft,
                    format!("need finite start < stop, got {start} and {stop}"),
                ));
            }
            let points = parse_u64(ep, &fp)?;
            if points < 2 {
                return Err(err(ep.line, &fp, "need at least 2 points"));
            }
            let scale = match field("sweep.scale") {
                None => Scale::Linear,
                Some((f, e)) => match e.value {
                    "linear" => Scale::Linear,
                    "log" if start > 0.0 => Scale::Log,
                    "log" => return Err(err(e.line, &f, "log scale needs a positive start")),
                    s => return Err(err(e.line, &f, format!("unknown scale `{s}`; expected linear or log"))),
                },
            };
            Some(SweepSpec {
                variable,
                start,
                stop,
                points: points as usize,
                scale,
            })
        }
    };

    let mut mc = SamplerConfig::default();
    if let Some((f, e)) = field("mc.seed") {
        mc.seed = parse_u64(e, &f)?;
    }
    if let Some((f, e)) = field("mc.n_samples") {
        mc.n_samples = parse_u64(e, &f)?;
    }
    if let Some((f, e)) = field("mc.n_streams") {
        mc.n_streams = parse_u64(e, &f)?;
    }
    mc.validate().map_err(|e| {
        let f = if mc.n_samples < MIN_SAMPLES {
            "mc.n_samples"
        } else {
            "mc.n_streams"
        };
        err(base.get(f).map_or(0, |e| e.line), f, e.to_string())
    })?;
    let mc_validate = match field("mc.validate") {
        Some((f, e)) => parse_bool(e, &f)?,
        None => false,
    };
    let laguerre_order = match field("numerics.laguerre_order") {
        Some((f, e)) => {
            let n = parse_u64(e, &f)?;
            if !(2..=256).contains(&n) {
                return Err(err(e.line, &f, "Laguerre order must be in 2..=256"));
            }
            n as usize
        }
        None => 32,
    };
    let output_path = base.get("output.path").map(|e| e.value.to_string());

    let mut out_curves = Vec::new();
    if curves.is_empty() {
        out_curves.push(Curve {
            name: String::new(),
            scenario: scenario(&field, "")?,
        });
    }
    for (name, over) in &curves {
        let get = |k: &str| {
            over.get(k)
                .map(|e| (format!("curve.{name}.{k}"), *e))
                .or_else(|| field(k))
        };
        out_curves.push(Curve {
            name: name.to_string(),
            scenario: scenario(&get, name)?,
        });
    }

    // Every sweep point must be a valid scenario.
    if let Some(sw) = &sweep {
        for c in &out_curves {
            for v in sw.values() {
                sw.variable.apply(&c.scenario, v).validate().map_err(|e| {
                    let line = base.get("sweep.variable").map_or(0, |e| e.line);
                    err(
                        line,
                        "sweep.variable",
                        format!("{} = {v} is invalid{}: {e}", sw.variable.name(), curve_suffix(&c.name)),
                    )
                })?;
            }
        }
    }

    Ok(RunConfig {
        curves: out_curves,
        metrics,
        sweep,
        mc,
        mc_validate,
        laguerre_order,
        output_path,
    })
}

pub(crate) fn curve_suffix(name: &str) -> String {
    if name.is_empty() {
        String::new()
    } else {
        format!(" on curve `{name}`")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
";

    #[test]
    fn minimal_config() {
        let c = parse(&format!("{BASE}metrics = sop_lower, spsc\nsecrecy.rate = 0.5\n")).unwrap();
        assert_eq!(c.metrics, vec![Metric::Spsc, Metric::SopLower]);
        assert_eq!(c.curves.len(), 1);
        let s = c.curves[0].scenario;
        assert!((s.d.gamma_bar - 10.0).abs() < 1e-12);
        assert_eq!(s.rate, 0.5);
        assert!(c.sweep.is_none());
        assert!(!c.has_curve_names());
    }

    #[test]
    fn curves_override_base_values() {
        let text = format!("{BASE}metrics = spsc\ncurve.a.channel_e.z = inf\ncurve.b.channel_d.m = 4 # stronger\n");
        let c = parse(&text).unwrap();
        assert_eq!(c.curves.len(), 2);
        assert_eq!(c.curves[0].name, "a");
        assert!(c.curves[0].scenario.e.z.is_infinite());
        assert_eq!(c.curves[1].scenario.d.m, 4.0);
        assert_eq!(c.curves[1].scenario.e.z, 0.7);
    }

    #[test]
    fn sweep_values() {
        let text =
            format!("{BASE}metrics = spsc\nsweep.variable = R_s\nsweep.start = 0\nsweep.stop = 4\nsweep.points = 5\n");
        let c = parse(&text).unwrap();
        assert_eq!(c.sweep.unwrap().values(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        let log = SweepSpec {
            variable: SweepVariable::ZE,
            start: 1.0,
            stop: 100.0,
            points: 3,
            scale: Scale::Log,
        };
        let v = log.values();
        assert!((v[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let e = parse(&format!("{BASE}metrics =  \n")).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (11, "metrics"));
        let e = parse(&format!("{BASE}metrics = spsc, capacity\n")).unwrap_err();
        assert_eq!(e.line, 11);
        assert!(e.message.contains("capacity"));
        let e = parse(&format!("{BASE}metrics = spsc\nchannel_d.beta = 1\n")).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (12, "channel_d.beta"));
        let e = parse(&format!("{BASE}metrics = spsc\nchannel_d.mu = 2\n")).unwrap_err();
        assert!(e.message.contains("duplicate"));
        let e = parse(&format!(
            "{}metrics = spsc\n",
            BASE.replace("channel_d.m = 1.5", "channel_d.m = 0.9")
        ))
        .unwrap_err();
        assert_eq!(e.field, "channel_d");
        let e = parse(&format!(
            "{}metrics = spsc\n",
            BASE.replace("channel_e.z = 0.7", "channel_e.z = abc")
        ))
        .unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (9, "channel_e.z"));
    }

    #[test]
    fn empty_metric_set_is_rejected() {
        assert_eq!(parse(BASE).unwrap_err().field, "metrics");
        assert_eq!(parse(&format!("{BASE}metrics = ,\n")).unwrap_err().field, "metrics");
    }

    #[test]
    fn invalid_sweeps_are_rejected() {
        let sw = |s: &str| parse(&format!("{BASE}metrics = spsc\n{s}")).unwrap_err();
        assert!(
            sw("sweep.variable = z_E\nsweep.start = 2\nsweep.stop = 1\nsweep.points = 3\n")
                .message
                .contains("start < stop")
        );
        assert!(
            sw("sweep.variable = z_E\nsweep.start = 1\nsweep.stop = 2\nsweep.points = 1\n")
                .message
                .contains("2 points")
        );
        assert!(sw("sweep.start = 1\n").message.contains("sweep.variable"));
        // α_E = 0.5 makes the mean of γ_E infinite for m_E = 3.
        let e = sw("sweep.variable = alpha_E\nsweep.start = 0.5\nsweep.stop = 2\nsweep.points = 4\n");
        assert!(e.message.contains("alpha_E = 0.5"), "{e}");
    }

    #[test]
    fn sampler_keys() {
        let c = parse(&format!(
            "{BASE}metrics = sop_mc\nmc.seed = 7\nmc.n_samples = 1e5\nmc.n_streams = 8\nmc.validate = yes\n"
        ))
        .unwrap();
        assert_eq!(
            c.mc,
            SamplerConfig {
                seed: 7,
                n_samples: 100_000,
                n_streams: 8
            }
        );
        assert!(c.mc_validate);
        let e = parse(&format!("{BASE}metrics = sop_mc\nmc.n_samples = 10\n")).unwrap_err();
        assert_eq!(e.field, "mc.n_samples");
    }
}
