//! Monte Carlo validation: SNR sampling and estimators of SPSC, ASC and the
//! exact secrecy outage probability, with CLT confidence intervals.
//!
//! Samples are split into `n_streams` ChaCha8 sub-streams keyed by
//! `(seed, stream index)`. Streams run in parallel and their statistics are
//! merged in stream order, so results depend only on the configuration and
//! not on the number of worker threads.

mod ks;
mod sampler;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::secrecy::SecrecyScenario;

pub use ks::{ks_two_sample, KsResult};
pub use sampler::{sample_snr, sample_snr_inverse, InverseCdf, SnrSampler};

/// Smallest sample count for which the CLT interval is trusted.
pub const MIN_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub n_samples: u64,
    /// Independent sub-streams, also the unit of parallel work.
    pub n_streams: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0x5ec7_1ab5,
            n_samples: 1_000_000,
            n_streams: 64,
        }
    }
}

impl SamplerConfig {
    pub fn new(seed: u64, n_samples: u64) -> Self {
        SamplerConfig {
            seed,
            n_samples,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(invalid(
                "n_samples",
                format!(
                    "need at least {MIN_SAMPLES} samples for a valid interval, got {}",
                    self.n_samples
                ),
            ));
        }
        if self.n_streams == 0 || self.n_streams > self.n_samples {
            return Err(invalid(
                "n_streams",
                format!("must be in 1..=n_samples, got {}", self.n_streams),
            ));
        }
        Ok(())
    }

    /// Samples drawn by stream `k`; the remainder goes to the first streams.
    pub fn stream_len(&self, k: u64) -> u64 {
        let base = self.n_samples / self.n_streams;
        base + u64::from(k < self.n_samples % self.n_streams)
    }

    pub(crate) fn rng(&self, k: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k);
        rng
    }
}

/// Sample mean with a `CI_SIGMAS`-sigma half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub ci_half_width: f64,
    pub n_effective: u64,
}

pub const CI_SIGMAS: f64 = 3.0;

impl Estimate {
    pub fn std_error(&self) -> f64 {
        self.ci_half_width / CI_SIGMAS
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.mean).abs() <= self.ci_half_width
    }
}

/// Running mean and centred sum of squares (Welford), mergeable.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0 {
            return self;
        }
        if self.n == 0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let (a, b) = (self.n as f64, o.n as f64);
        Moments {
            n,
            mean: self.mean + d * b / n as f64,
            m2: self.m2 + o.m2 + d * d * a * b / n as f64,
        }
    }

    fn estimate(&self) -> Estimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        Estimate {
            mean: self.mean,
            ci_half_width: CI_SIGMAS * (var / self.n as f64).sqrt(),
            n_effective: self.n,
        }
    }
}

/// Mean of `f(γ_D, γ_E)` over independent pairs.
fn estimate_pairs(
    s: &SecrecyScenario<f64>,
    cfg: &SamplerConfig,
    f: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<Estimate> {
    s.validate()?;
    cfg.validate()?;
    let d = SnrSampler::new(&s.d)?;
    let e = SnrSampler::new(&s.e)?;
    let parts: Vec<Moments> = (0..cfg.n_streams)
        .into_par_iter()
        .map(|k| {
            let mut rng = cfg.rng(k);
            let mut acc = Moments::default();
            for _ in 0..cfg.stream_len(k) {
                let gd = d.sample(&mut rng);
                let ge = e.sample(&mut rng);
                acc.push(f(gd, ge));
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(Moments::default(), Moments::merge).estimate())
}

/// The three estimates from one set of pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEstimates {
    pub spsc: Estimate,
    pub asc: Estimate,
    pub sop: Estimate,
}

/// SPSC, ASC and exact SOP from the same samples, as the single-metric
/// estimators would compute them with the same configuration.
pub fn estimate_all(s: &SecrecyScenario<f64>, cfg: &SamplerConfig) -> Result<PairEstimates> {
    s.validate()?;
    cfg.validate()?;
    let d = SnrSampler::new(&s.d)?;
    let e = SnrSampler::new(&s.e)?;
    let thr = s.rate * std::f64::consts::LN_2;
    let parts: Vec<[Moments; 3]> = (0..cfg.n_streams)
        .into_par_iter()
        .map(|k| {
            let mut rng = cfg.rng(k);
            let mut acc = [Moments::default(); 3];
            for _ in 0..cfg.stream_len(k) {
                let diff = d.sample(&mut rng).ln_1p() - e.sample(&mut rng).ln_1p();
                acc[0].push(f64::from(u8::from(diff > 0.0)));
                acc[1].push((diff / std::f64::consts::LN_2).max(0.0));
                acc[2].push(f64::from(u8::from(diff < thr)));
            }
            acc
        })
        .collect();
    let m = parts.into_iter().fold([Moments::default(); 3], |a, b| {
        [a[0].merge(b[0]), a[1].merge(b[1]), a[2].merge(b[2])]
    });
    Ok(PairEstimates {
        spsc: m[0].estimate(),
        asc: m[1].estimate(),
        sop: m[2].estimate(),
    })
}

/// Fraction of pairs with `γ_D > γ_E`.
pub fn estimate_spsc(s: &SecrecyScenario<f64>, cfg: &SamplerConfig) -> Result<Estimate> {
    estimate_pairs(s, cfg, |gd, ge| f64::from(u8::from(gd.ln_1p() > ge.ln_1p())))
}

/// Mean of `[log2(1 + γ_D) - log2(1 + γ_E)]⁺`.
pub fn estimate_asc(s: &SecrecyScenario<f64>, cfg: &SamplerConfig) -> Result<Estimate> {
    estimate_pairs(s, cfg, |gd, ge| {
        ((gd.ln_1p() - ge.ln_1p()) / std::f64::consts::LN_2).max(0.0)
    })
}

/// Fraction of pairs whose secrecy capacity is below `R_s`, with the
/// capacity in bits (threshold `2^{R_s}`).
///
/// The comparison uses the rate difference before the positive part, so at
/// `R_s = 0` this is `Pr[γ_D < γ_E]`, the complement of the SPSC.
pub fn estimate_sop_exact(s: &SecrecyScenario<f64>, cfg: &SamplerConfig) -> Result<Estimate> {
    let thr = s.rate * std::f64::consts::LN_2;
    estimate_pairs(s, cfg, move |gd, ge| f64::from(u8::from(gd.ln_1p() - ge.ln_1p() < thr)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelParams;

    fn scenario(rate: f64) -> SecrecyScenario<f64> {
        let d = ChannelParams::new(2.0, 1.0, 1.5, 1.2, 10.0).unwrap();
        let e = ChannelParams::new(2.0, 1.0, 3.0, 0.7, 1.0).unwrap();
        SecrecyScenario::new(d, e, rate).unwrap()
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let merged = xs
            .chunks(77)
            .map(|c| {
                let mut m = Moments::default();
                c.iter().for_each(|&x| m.push(x));
                m
            })
            .fold(Moments::default(), Moments::merge);
        assert_eq!(merged.n, whole.n);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 / whole.m2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stream_lengths_partition_the_samples() {
        let cfg = SamplerConfig {
            seed: 1,
            n_samples: 100_003,
            n_streams: 7,
        };
        assert_eq!((0..7).map(|k| cfg.stream_len(k)).sum::<u64>(), 100_003);
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(1, 100).validate().is_err());
        let cfg = SamplerConfig {
            seed: 1,
            n_samples: 20_000,
            n_streams: 0,
        };
        assert!(cfg.validate().is_err());
        assert!(SamplerConfig::default().validate().is_ok());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = SamplerConfig {
            seed: 42,
            n_samples: 50_000,
            n_streams: 8,
        };
        let a = estimate_asc(&scenario(0.0), &cfg).unwrap();
        let b = estimate_asc(&scenario(0.0), &cfg).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.ci_half_width.to_bits(), b.ci_half_width.to_bits());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| estimate_asc(&scenario(0.0), &cfg).unwrap());
        assert_eq!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn sop_at_zero_rate_complements_spsc() {
        let cfg = SamplerConfig {
            seed: 3,
            n_samples: 40_000,
            n_streams: 4,
        };
        let p = estimate_spsc(&scenario(0.0), &cfg).unwrap();
        let q = estimate_sop_exact(&scenario(0.0), &cfg).unwrap();
        assert!((p.mean + q.mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_estimates_match_single_ones() {
        let cfg = SamplerConfig {
            seed: 8,
            n_samples: 30_000,
            n_streams: 5,
        };
        let s = scenario(0.7);
        let all = estimate_all(&s, &cfg).unwrap();
        assert_eq!(all.spsc, estimate_spsc(&s, &cfg).unwrap());
        assert_eq!(all.asc, estimate_asc(&s, &cfg).unwrap());
        assert_eq!(all.sop, estimate_sop_exact(&s, &cfg).unwrap());
    }

    #[test]
    fn unreachable_rate_is_always_an_outage() {
        let cfg = SamplerConfig {
            seed: 5,
            n_samples: 20_000,
            n_streams: 4,
        };
        let q = estimate_sop_exact(&scenario(20.0), &cfg).unwrap();
        assert!(q.mean > 0.999, "{}", q.mean);
        assert!(estimate_asc(&scenario(0.0), &cfg).unwrap().mean >= 0.0);
    }
}
