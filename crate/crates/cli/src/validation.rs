//! The invariant suites behind `selftest` and the acceptance tests, grouped
//! by acceptance criterion.

use std::fmt;

use rayon::prelude::*;
use secrecy_lab::channel::{reduce_special_case, Channel, ChannelParams, SpecialCase};
use secrecy_lab::mc::{
    estimate_all, estimate_spsc, ks_two_sample, sample_snr, InverseCdf, PairEstimates, SamplerConfig,
};
use secrecy_lab::secrecy::{sop_exponent, Evaluator, ExponentCase, SecrecyOptions, SecrecyScenario};
use secrecy_lab::specfun::{
    fox_h, gamma, integrate, ln_gamma, ContourConfig, Crossing, FoxHSpec, HTuple, QuadSettings,
};
use secrecy_lab::Error;

use crate::config::parse;
use crate::sweep::{evaluate, Mode};

/// The configurations shipped with the crate.
pub const SHIPPED_CONFIGS: [(&str, &str); 5] = [
    ("spsc_vs_ratio.conf", include_str!("../configs/spsc_vs_ratio.conf")),
    ("asc_vs_snr.conf", include_str!("../configs/asc_vs_snr.conf")),
    ("asc_vs_ratio.conf", include_str!("../configs/asc_vs_ratio.conf")),
    ("sop_vs_rate.conf", include_str!("../configs/sop_vs_rate.conf")),
    ("sop_vs_snr.conf", include_str!("../configs/sop_vs_snr.conf")),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {} [{}] {}", self.id, self.title, verdict)?;
        for c in &self.checks {
            write!(
                f,
                "\n    {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Sample sizes of the statistical checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub ks_samples: u64,
    pub inverse_grid: usize,
    pub mc_pairs: u64,
    pub calibration_runs: u64,
    pub calibration_samples: u64,
    /// How many grid scenarios the secrecy checks cover.
    pub grid_scenarios: usize,
}

impl Budget {
    pub fn quick() -> Self {
        Budget {
            ks_samples: 20_000,
            inverse_grid: 1024,
            mc_pairs: 200_000,
            calibration_runs: 20,
            calibration_samples: 10_000,
            grid_scenarios: 4,
        }
    }

    pub fn full() -> Self {
        Budget {
            ks_samples: 100_000,
            inverse_grid: 4096,
            mc_pairs: 10_000_000,
            calibration_runs: 100,
            calibration_samples: 20_000,
            grid_scenarios: GRID_LEN,
        }
    }
}

/// Numerical settings under test; `selftest` can corrupt the contour.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Numerics {
    pub contour: ContourConfig<f64>,
}

impl Numerics {
    pub fn with_crossing(c: f64) -> Self {
        Numerics {
            contour: ContourConfig::default().with_crossing(Crossing::At(c)),
        }
    }

    fn options(&self) -> SecrecyOptions<f64> {
        let d = SecrecyOptions::default();
        let (b1, b2) = d.bivariate;
        SecrecyOptions {
            contour: self.contour,
            bivariate: (
                ContourConfig {
                    crossing: self.contour.crossing,
                    ..b1
                },
                ContourConfig {
                    crossing: self.contour.crossing,
                    ..b2
                },
            ),
            ..d
        }
    }

    fn channel(&self, p: ChannelParams<f64>) -> Result<Channel<f64>, Error> {
        Ok(Channel::new(p)?.with_contour(self.contour))
    }

    fn evaluator(&self, s: &SecrecyScenario<f64>) -> Result<Evaluator<f64>, Error> {
        Evaluator::new(s, &self.options())
    }
}

fn check(name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String), Error>) -> Check {
    let name = name.into();
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn ch(alpha: f64, mu: f64, m: f64, z: f64, gb: f64) -> ChannelParams<f64> {
    ChannelParams::new(alpha, mu, m, z, gb).expect("valid built-in channel")
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn db(v: f64) -> f64 {
    10f64.powf(v / 10.0)
}

pub const GRID_LEN: usize = 10;

/// Secrecy scenarios shared by criteria 3, 4, 5 and 7. The first two have
/// `z_E = 0.7`, `m_D = 1.5`, with and without pointing error at the
/// legitimate receiver; the third has identical channels.
pub fn grid() -> Vec<SecrecyScenario<f64>> {
    let e07 = ch(2.0, 1.0, 3.0, 0.7, 1.0);
    [
        (ch(2.0, 1.0, 1.5, 1.2, 10.0), e07),
        (ch(2.0, 1.0, 1.5, f64::INFINITY, 10.0), e07),
        (ch(2.0, 1.0, 3.0, 1.2, 1.0), ch(2.0, 1.0, 3.0, 1.2, 1.0)),
        (ch(2.5, 2.0, 4.0, 1.5, 30.0), ch(2.0, 1.0, 3.0, 1.0, 1.0)),
        (ch(1.5, 0.8, 5.0, 2.0, 5.0), ch(3.0, 2.5, 2.0, 0.9, 2.0)),
        (ch(3.5, 2.5, 25.0, 50.0, 100.0), ch(2.0, 1.0, 1.5, 0.7, 10.0)),
        (ch(1.0, 1.0, 3.0, 1.0, 3.0), ch(1.0, 1.0, 3.0, 1.0, 1.0)),
        (ch(2.0, 2.5, 25.0, 3.0, 1000.0), e07),
        (ch(3.0, 1.5, 2.0, 0.8, 0.5), ch(2.0, 1.0, 3.0, 1.2, 1.0)),
        (ch(2.0, 1.0, 1.5, 0.7, 1.0), ch(2.0, 1.0, 1.5, 0.7, 3.0)),
    ]
    .into_iter()
    .map(|(d, e)| SecrecyScenario::new(d, e, 0.5).expect("valid built-in scenario"))
    .collect()
}

/// Monte Carlo estimates on the grid, shared by criteria 3 to 5.
pub fn grid_monte_carlo(budget: &Budget) -> Vec<Result<PairEstimates, Error>> {
    grid()
        .iter()
        .take(budget.grid_scenarios)
        .enumerate()
        .map(|(k, s)| {
            estimate_all(
                s,
                &SamplerConfig {
                    seed: 1000 + k as u64,
                    n_samples: budget.mc_pairs,
                    n_streams: 64,
                },
            )
        })
        .collect()
}

pub fn criterion_1(num: &Numerics) -> Criterion {
    let e = FoxHSpec::new(1, 0, vec![], vec![HTuple::new(0.0, 1.0)]).expect("valid spec");
    let exp = check("H^{1,0}_{0,1}[z] = e^{-z}, 20 points in [1e-3, 50]", || {
        let mut worst = 0.0f64;
        for z in log_grid(1e-3, 50.0, 20) {
            let v = fox_h(&e, z, &num.contour)?.value;
            worst = worst.max((v / (-z).exp() - 1.0).abs());
        }
        Ok((worst <= 1e-8, format!("max relative error {worst:.2e} (limit 1e-8)")))
    });
    let mut checks = vec![exp];
    for a in [0.5, 2.5] {
        checks.push(check(
            format!("H^{{1,1}}_{{1,1}}[z] = Γ({a})(1+z)^-{a}, 20 points in [1e-3, 1e3]"),
            || {
                let spec = FoxHSpec::new(1, 1, vec![HTuple::new(1.0 - a, 1.0)], vec![HTuple::new(0.0, 1.0)])?;
                let mut worst = 0.0f64;
                for z in log_grid(1e-3, 1e3, 20) {
                    let v = fox_h(&spec, z, &num.contour)?.value;
                    worst = worst.max((v / (gamma(a)? * (1.0 + z).powf(-a)) - 1.0).abs());
                }
                Ok((worst <= 1e-8, format!("max relative error {worst:.2e} (limit 1e-8)")))
            },
        ));
    }
    Criterion {
        id: "1",
        title: "special-function identities",
        checks,
    }
}

/// Spans α ∈ {1, 2, 3.5}, μ ∈ {0.8, 1, 2.5}, m ∈ {1.5, 3, 25},
/// z ∈ {0.7, 1.2, 50}; α = 1 is paired with m > 2 so the mean exists.
pub const DISTRIBUTION_SETS: [(f64, f64, f64, f64, f64); 6] = [
    (1.0, 0.8, 3.0, 0.7, 1.0),
    (1.0, 2.5, 25.0, 1.2, 10.0),
    (2.0, 1.0, 1.5, 50.0, 1.0),
    (2.0, 0.8, 25.0, 0.7, 0.3),
    (3.5, 2.5, 1.5, 1.2, 1.0),
    (3.5, 1.0, 3.0, 50.0, 100.0),
];

pub fn criterion_2(num: &Numerics, budget: &Budget) -> Criterion {
    let sets: Vec<ChannelParams<f64>> = DISTRIBUTION_SETS.iter().map(|s| ch(s.0, s.1, s.2, s.3, s.4)).collect();
    let norm = check("density integrates to 1 (6 sets)", || {
        let mut worst = 0.0f64;
        for p in &sets {
            let c = num.channel(*p)?;
            let v = c
                .expectation(|_| Ok(1.0), &QuadSettings::default(), "normalisation")?
                .value;
            worst = worst.max((v - 1.0).abs());
        }
        Ok((worst <= 1e-6, format!("max |∫f - 1| = {worst:.2e} (limit 1e-6)")))
    });
    let fd = check("CDF derivative equals density (6 sets x 20 points)", || {
        let h = 1e-4;
        let mut worst = 0.0f64;
        for p in &sets {
            let c = num.channel(*p)?;
            let (lo, hi) = c.log_snr_range(-12.0);
            for i in 0..20 {
                let u = lo + (hi - lo) * (i as f64 + 0.5) / 20.0;
                let d = (c.cdf_at_log(u + h)? - c.cdf_at_log(u - h)?) / (2.0 * h);
                let f = c.log_density(u)?;
                worst = worst.max((d - f).abs() / f.max(1e-2));
            }
        }
        Ok((worst <= 1e-5, format!("max relative mismatch {worst:.2e} (limit 1e-5)")))
    });
    let ks = check(format!("KS sampler vs inverted CDF, n = {}", budget.ks_samples), || {
        let results: Vec<Result<f64, Error>> = sets
            .par_iter()
            .enumerate()
            .map(|(k, p)| {
                let c = num.channel(*p)?;
                let inv = InverseCdf::new(&c, budget.inverse_grid)?;
                let cfg = |seed| SamplerConfig {
                    seed,
                    n_samples: budget.ks_samples,
                    n_streams: 16,
                };
                let a = sample_snr(p, &cfg(2 * k as u64 + 1))?;
                let b = inv.sample(&cfg(2 * k as u64 + 2))?;
                Ok(ks_two_sample(&a, &b).p_value)
            })
            .collect();
        let ps = results.into_iter().collect::<Result<Vec<_>, _>>()?;
        let min = ps.iter().copied().fold(f64::INFINITY, f64::min);
        Ok((min > 0.01, format!("min p-value {min:.3} over 6 sets (limit 0.01)")))
    });
    Criterion {
        id: "2",
        title: "distribution correctness",
        checks: vec![norm, fd, ks],
    }
}

fn mc_detail(worst_sigma: f64, n: usize) -> String {
    format!("max |closed - MC| = {worst_sigma:.2}σ over {n} scenarios (limit 3σ)")
}

pub fn criterion_3(num: &Numerics, budget: &Budget, mc: &[Result<PairEstimates, Error>]) -> Criterion {
    let g = grid();
    let agree = check(
        format!("closed form within 3σ of Monte Carlo ({} pairs)", budget.mc_pairs),
        || {
            let mut worst = 0.0f64;
            for (s, m) in g.iter().zip(mc) {
                let m = m.clone()?;
                let v = num.evaluator(s)?.spsc()?.value;
                worst = worst.max((v - m.spsc.mean).abs() / m.spsc.std_error());
            }
            Ok((worst <= 3.0, mc_detail(worst, mc.len())))
        },
    );
    let half = check("identical channels give 0.500 ± 0.002", || {
        let s = &g[2];
        let v = num.evaluator(s)?.spsc()?.value;
        let m = mc[2].clone()?;
        let ok = (v - 0.5).abs() <= 0.002 && (m.spsc.mean - 0.5).abs() <= 0.002;
        Ok((ok, format!("closed form {v:.6}, Monte Carlo {:.6}", m.spsc.mean)))
    });
    Criterion {
        id: "3",
        title: "SPSC",
        checks: vec![agree, half],
    }
}

/// Equal average SNRs at 40 dB with μ_D = μ_E = 1, checked against the
/// saturation level.
pub fn saturation_scenario() -> SecrecyScenario<f64> {
    let g = db(40.0);
    SecrecyScenario::new(ch(2.0, 1.0, 3.0, 1.5, g), ch(2.0, 1.0, 3.0, 2.0, g), 0.0).expect("valid built-in scenario")
}

pub fn criterion_4(num: &Numerics, budget: &Budget, mc: &[Result<PairEstimates, Error>]) -> Criterion {
    let g = grid();
    let quad = check("closed form within 1e-3 (relative) of quadrature", || {
        let rows: Vec<Result<f64, Error>> = g
            .par_iter()
            .take(budget.grid_scenarios)
            .map(|s| {
                let ev = num.evaluator(s)?;
                let (c, q) = (ev.asc_exact()?.value, ev.asc_quadrature()?.value);
                Ok((c / q - 1.0).abs())
            })
            .collect();
        let worst = rows
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok((
            worst <= 1e-3,
            format!(
                "max relative difference {worst:.2e} over {} scenarios",
                budget.grid_scenarios
            ),
        ))
    });
    let agree = check(
        format!("closed form within 3σ of Monte Carlo ({} pairs)", budget.mc_pairs),
        || {
            let mut worst = 0.0f64;
            for (s, m) in g.iter().zip(mc) {
                let m = m.clone()?;
                let v = num.evaluator(s)?.asc_exact()?.value;
                worst = worst.max((v - m.asc.mean).abs() / m.asc.std_error());
            }
            Ok((worst <= 3.0, mc_detail(worst, mc.len())))
        },
    );
    let s = saturation_scenario();
    let asym = check("ASC at 40 dB vs Gauss-Laguerre asymptote (N = 32) within 2%", || {
        let ev = num.evaluator(&s)?;
        let (a, l) = (ev.asc_exact()?.value, ev.asc_asymptotic_with_order(32)?.value);
        let rel = (l / a - 1.0).abs();
        Ok((
            rel <= 0.02,
            format!("ASC {a:.6}, asymptote {l:.6}, relative difference {:.2}%", 100.0 * rel),
        ))
    });
    let limit = check("ASC at 40 dB vs asymptote by adaptive quadrature within 2%", || {
        let ev = num.evaluator(&s)?;
        let (a, l) = (ev.asc_exact()?.value, ev.asc_asymptotic_quadrature()?.value);
        let rel = (l / a - 1.0).abs();
        Ok((
            rel <= 0.02,
            format!("ASC {a:.6}, asymptote {l:.6}, relative difference {:.2}%", 100.0 * rel),
        ))
    });
    Criterion {
        id: "4",
        title: "ASC",
        checks: vec![quad, agree, asym, limit],
    }
}

pub fn criterion_5(num: &Numerics, budget: &Budget, mc: &[Result<PairEstimates, Error>]) -> Criterion {
    let g = grid();
    let quad = check("closed form within 1e-4 of quadrature", || {
        let mut worst = 0.0f64;
        for s in g.iter().take(budget.grid_scenarios) {
            let ev = num.evaluator(s)?;
            worst = worst.max((ev.sop_lower()?.value - ev.sop_lower_quadrature()?.value).abs());
        }
        Ok((
            worst <= 1e-4,
            format!("max difference {worst:.2e} over {} scenarios", budget.grid_scenarios),
        ))
    });
    // The closed form thresholds at e^{R_s}, the Monte Carlo SOP at 2^{R_s}
    // (capacity in bits). `ln 2` rescales the rate to compare like with like.
    let bound_with = |name: &str, scale: f64| {
        check(name, || {
            let mut violations = Vec::new();
            let mut margin = f64::INFINITY;
            for (k, (s, m)) in g.iter().zip(mc).enumerate() {
                let m = m.clone()?;
                let v = num.evaluator(&s.with_rate(s.rate * scale))?.sop_lower()?.value;
                let slack = m.sop.mean + m.sop.ci_half_width - v;
                margin = margin.min(slack);
                if slack < 0.0 {
                    violations.push(format!(
                        "#{k}: {v:.3e} > {:.3e} + {:.1e}",
                        m.sop.mean, m.sop.ci_half_width
                    ));
                }
            }
            let detail = if violations.is_empty() {
                format!("smallest slack {margin:.2e} over {} scenarios", mc.len())
            } else {
                format!("violated on {}", violations.join("; "))
            };
            Ok((violations.is_empty(), detail))
        })
    };
    let bound = bound_with("lower-bounds the Monte Carlo exact SOP (threshold e^{R_s})", 1.0);
    let bound_bits = bound_with(
        "lower-bounds the Monte Carlo exact SOP (threshold 2^{R_s})",
        std::f64::consts::LN_2,
    );
    let rate = check("non-decreasing in R_s over [0, 4]", || {
        let s = rate_sweep_scenario();
        let mut prev = f64::NEG_INFINITY;
        let mut ok = true;
        for i in 0..=16 {
            let v = num.evaluator(&s.with_rate(0.25 * i as f64))?.sop_lower()?.value;
            ok &= v >= prev - 1e-9;
            prev = v;
        }
        Ok((ok, format!("17 rates, SOP_L(4) = {prev:.4}")))
    });
    let snr = check("non-increasing in γ̄_D over [0, 50] dB", || {
        let s = snr_sweep_scenario();
        let mut prev = f64::INFINITY;
        let mut ok = true;
        for i in 0..=20 {
            let v = num
                .evaluator(&s.with_gamma_bars(db(2.5 * i as f64), s.e.gamma_bar))?
                .sop_lower()?
                .value;
            ok &= v <= prev + 1e-12;
            prev = v;
        }
        Ok((ok, format!("21 points, SOP_L(50 dB) = {prev:.3e}")))
    });
    Criterion {
        id: "5",
        title: "SOP",
        checks: vec![quad, bound, bound_bits, rate, snr],
    }
}

/// SOP_L against R_s.
pub fn rate_sweep_scenario() -> SecrecyScenario<f64> {
    SecrecyScenario::new(ch(2.0, 1.0, 3.0, 1.2, db(20.0)), ch(2.0, 1.0, 3.0, 0.7, 1.0), 0.0).expect("valid")
}

/// SOP_L against γ̄_D at R_s = 0.5.
pub fn snr_sweep_scenario() -> SecrecyScenario<f64> {
    SecrecyScenario::new(ch(2.0, 1.0, 3.0, 1.2, 1.0), ch(2.0, 1.0, 3.0, 0.7, 1.0), 0.5).expect("valid")
}

/// One scenario per exponent case.
pub fn diversity_scenarios() -> [(SecrecyScenario<f64>, ExponentCase); 3] {
    let e = ch(2.0, 1.0, 3.0, 1.0, 1.0);
    [
        (
            SecrecyScenario::new(ch(2.0, 0.8, 2.0, 2.0, 1.0), e, 0.5).expect("valid"),
            ExponentCase::Multipath,
        ),
        (
            SecrecyScenario::new(ch(2.0, 2.0, 2.0, 0.9, 1.0), e, 0.5).expect("valid"),
            ExponentCase::Pointing,
        ),
        (
            SecrecyScenario::new(ch(2.0, 2.0, 2.0, 3.0, 1.0), ch(2.0, 1.0, 1.2, 1.0, 1.0), 0.5).expect("valid"),
            ExponentCase::Shadowing,
        ),
    ]
}

pub fn criterion_6(num: &Numerics) -> Criterion {
    let mut checks = Vec::new();
    for (s, case) in diversity_scenarios() {
        checks.push(check(
            format!("{case:?}: fitted slope over 50-60 dB equals -α_DΞ/2 within 5%"),
            || {
                let xi = sop_exponent(&s, 50.0)?;
                if xi.case != case {
                    return Ok((false, format!("exponent governed by {:?}, expected {case:?}", xi.case)));
                }
                let gd = num.evaluator(&s)?.diversity_gain()?;
                let xs: Vec<f64> = (0..5).map(|i| 50.0 + 2.5 * i as f64).collect();
                let ys = xs
                    .iter()
                    .map(|&x| {
                        Ok(num
                            .evaluator(&s.with_gamma_bars(db(x), s.e.gamma_bar))?
                            .sop_lower()?
                            .value
                            .log10())
                    })
                    .collect::<Result<Vec<f64>, Error>>()?;
                let slope = -least_squares_slope(&xs, &ys) * 10.0;
                let rel = (slope / gd - 1.0).abs();
                Ok((
                    rel <= 0.05,
                    format!("slope {slope:.4} vs G_d = {gd:.4} ({:.2}%)", 100.0 * rel),
                ))
            },
        ));
        checks.push(check(
            format!("{case:?}: SOP_L / asymptote at 50 dB within 3% of 1"),
            || {
                let ev = num.evaluator(&s.with_gamma_bars(db(50.0), s.e.gamma_bar))?;
                let r = ev.sop_lower()?.value / ev.sop_asymptotic()?.value;
                Ok(((r - 1.0).abs() <= 0.03, format!("ratio {r:.5}")))
            },
        ));
    }
    Criterion {
        id: "6",
        title: "asymptotics and diversity",
        checks,
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

pub fn criterion_7(num: &Numerics) -> Criterion {
    let c = check("spsc + sop_lower(R_s = 0) = 1 within 1e-6", || {
        let mut worst = 0.0f64;
        for s in &grid() {
            let ev = num.evaluator(&s.with_rate(0.0))?;
            worst = worst.max((ev.spsc()?.value + ev.sop_lower()?.value - 1.0).abs());
        }
        Ok((
            worst <= 1e-6,
            format!("max deviation {worst:.2e} over {GRID_LEN} scenarios"),
        ))
    });
    Criterion {
        id: "7",
        title: "complementarity",
        checks: vec![c],
    }
}

/// Density of `γ` for α = 2, coded independently of the Fox H engine:
/// `Θγ` is a beta-prime variate times `U^{1/ζ}`, integrated directly.
pub fn fisher_f_pointing_pdf(mu: f64, m: f64, z: f64, theta: f64, gamma: f64) -> Result<f64, Error> {
    let zeta = z * z / 2.0;
    let ln_beta = ln_gamma(mu)? + ln_gamma(m)? - ln_gamma(mu + m)?;
    let beta_prime = |y: f64| ((mu - 1.0) * y.ln() - (mu + m) * y.ln_1p() - ln_beta).exp();
    let x = theta * gamma;
    // With w = v^ζ the weight ζ v^{ζ-1} dv becomes dw.
    let inner = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let v = w.powf(1.0 / zeta);
        beta_prime(x / v) / v
    };
    let s = QuadSettings {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_subdivisions: 5000,
    };
    Ok(theta * integrate(inner, 0.0, 1.0, &s, "Fisher-F oracle")?.value)
}

/// α-μ density with mean `γ̄`: `γ^{α/2}` is gamma distributed with shape μ.
pub fn alpha_mu_pdf(alpha: f64, mu: f64, gamma_bar: f64, g: f64) -> Result<f64, Error> {
    let k = 2.0 / alpha;
    let ln_beta = (gamma_bar.ln() + ln_gamma(mu)? - ln_gamma(mu + k)?) / k;
    let ln_y = g.ln() / k - ln_beta;
    Ok((alpha / 2.0) * ((alpha / 2.0 - 1.0) * g.ln() + (mu - 1.0) * ln_y - ln_y.exp() - ln_gamma(mu)? - ln_beta).exp())
}

pub fn criterion_8(num: &Numerics) -> Criterion {
    let fisher = check("α = 2 matches the Fisher-F pointing-error density (sup-norm)", || {
        let mut worst = 0.0f64;
        for &(mu, m, z) in &[(1.0, 1.5, 0.7), (2.5, 3.0, 1.2), (1.0, 25.0, 3.0)] {
            let p = reduce_special_case(&ch(3.0, mu, m, z, 2.0), SpecialCase::FisherF);
            let c = num.channel(p)?;
            for g in log_grid(2e-3, 200.0, 40) {
                worst = worst.max((c.pdf(g)? - fisher_f_pointing_pdf(mu, m, z, c.constants().theta, g)?).abs());
            }
        }
        Ok((worst <= 1e-6, format!("sup-norm {worst:.2e} (limit 1e-6)")))
    });
    let surrogate = check("z surrogate 50 vs 200: CDFs differ by < 1e-4", || {
        let mut worst = 0.0f64;
        for s in DISTRIBUTION_SETS {
            let p = ch(s.0, s.1, s.2, f64::INFINITY, s.4);
            let a = Channel::with_surrogate(p, 50.0)?.with_contour(num.contour);
            let b = Channel::with_surrogate(p, 200.0)?.with_contour(num.contour);
            let (lo, hi) = a.log_snr_range(-20.0);
            for i in 0..25 {
                let u = lo + (hi - lo) * i as f64 / 24.0;
                worst = worst.max((a.cdf_at_log(u)? - b.cdf_at_log(u)?).abs());
            }
        }
        Ok((worst < 1e-4, format!("max difference {worst:.2e}")))
    });
    let alpha_mu_error = |m: f64| -> Result<f64, Error> {
        let mut worst = 0.0f64;
        for &(alpha, mu) in &[(2.0, 1.0), (3.5, 2.5), (1.0, 1.2)] {
            let p = reduce_special_case(&ch(alpha, mu, 3.0, f64::INFINITY, 1.5), SpecialCase::AlphaMu);
            let c = num.channel(ChannelParams { m, ..p })?;
            for g in log_grid(1.5e-2, 15.0, 40) {
                worst = worst.max((c.pdf(g)? - alpha_mu_pdf(alpha, mu, 1.5, g)?).abs());
            }
        }
        Ok(worst)
    };
    let alpha_mu = check(
        "m = 200 surrogate matches the α-μ density within 1e-3 (sup-norm)",
        || {
            let worst = alpha_mu_error(200.0)?;
            Ok((worst <= 1e-3, format!("sup-norm {worst:.2e} (limit 1e-3)")))
        },
    );
    // The surrogate error is O(1/m): tenfold m must shrink it about tenfold.
    let rate = check("α-μ surrogate error shrinks as 1/m (m = 200 vs 2000)", || {
        let (a, b) = (alpha_mu_error(200.0)?, alpha_mu_error(2000.0)?);
        let r = a / b;
        Ok((
            (8.0..=12.0).contains(&r),
            format!("sup-norms {a:.2e} and {b:.2e}, ratio {r:.2}"),
        ))
    });
    Criterion {
        id: "8",
        title: "special-case reductions",
        checks: vec![fisher, surrogate, alpha_mu, rate],
    }
}

pub fn criterion_9() -> Criterion {
    let checks = SHIPPED_CONFIGS
        .iter()
        .map(|(name, text)| {
            let name = *name;
            let cfg = parse(text);
            match cfg {
                Err(e) => Check {
                    name: name.into(),
                    passed: false,
                    detail: format!("config error: {e}"),
                },
                Ok(cfg) => match (evaluate(&cfg, Mode::Run), evaluate(&cfg, Mode::Run)) {
                    (Ok(a), Ok(b)) => Check {
                        name: name.into(),
                        passed: a == b,
                        detail: format!(
                            "{} rows, {} bytes, identical: {}",
                            a.lines().count() - 1,
                            a.len(),
                            a == b
                        ),
                    },
                    (Err(e), _) | (_, Err(e)) => Check {
                        name: name.into(),
                        passed: false,
                        detail: e.to_string(),
                    },
                },
            }
        })
        .collect();
    Criterion {
        id: "9",
        title: "determinism",
        checks,
    }
}

/// CI calibration of the SPSC estimator against the closed form.
pub fn mc_calibration(num: &Numerics, budget: &Budget) -> Criterion {
    let c = check(
        format!(
            "true SPSC inside the 3σ interval of {} independent runs",
            budget.calibration_runs
        ),
        || {
            let s = grid()[0];
            let truth = num.evaluator(&s)?.spsc()?.value;
            let mut hits = 0;
            for k in 0..budget.calibration_runs {
                let cfg = SamplerConfig {
                    seed: 50_000 + k,
                    n_samples: budget.calibration_samples,
                    n_streams: 8,
                };
                hits += u64::from(estimate_spsc(&s, &cfg)?.contains(truth));
            }
            // At most one miss per hundred runs.
            let allowed = budget.calibration_runs / 100;
            Ok((
                budget.calibration_runs - hits <= allowed,
                format!("{hits} of {} runs", budget.calibration_runs),
            ))
        },
    );
    Criterion {
        id: "mc",
        title: "Monte Carlo calibration",
        checks: vec![c],
    }
}

/// Runs every suite; Monte Carlo grid estimates are computed once.
pub fn run_all(num: &Numerics, budget: &Budget) -> Vec<Criterion> {
    let mc = grid_monte_carlo(budget);
    vec![
        criterion_1(num),
        criterion_2(num, budget),
        criterion_3(num, budget, &mc),
        criterion_4(num, budget, &mc),
        criterion_5(num, budget, &mc),
        criterion_6(num),
        criterion_7(num),
        criterion_8(num),
        criterion_9(),
        mc_calibration(num, budget),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_configs_parse() {
        for (name, text) in SHIPPED_CONFIGS {
            parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn grid_has_the_stated_settings() {
        let g = grid();
        assert_eq!(g.len(), GRID_LEN);
        assert!(g.iter().any(|s| s.e.z == 0.7 && s.d.m == 1.5));
        assert_eq!(g[2].d, g[2].e);
    }

    #[test]
    fn corrupted_contour_is_reported_by_name() {
        let c = criterion_1(&Numerics::with_crossing(-0.5));
        assert!(!c.passed());
        assert!(
            c.checks[0].detail.contains("outside the admissible strip"),
            "{}",
            c.checks[0].detail
        );
    }

    #[test]
    fn slope_of_a_line() {
        assert!((least_squares_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-12);
    }
}
