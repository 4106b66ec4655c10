use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use super::SamplerConfig;
use crate::channel::{Channel, ChannelParams};
use crate::error::{invalid, Result};

/// Draws SNR samples through the product representation
///
/// ```text
/// x = Θ γ^{α/2} = G_μ U^{1/ζ} / G_m,   ζ = z²/α
/// ```
///
/// with unit-scale gamma variates `G_μ`, `G_m` and `U` uniform on `(0, 1]`.
/// The Mellin transform of `x` is `E[G_μ^s] E[G_m^{-s}] E[U^{s/ζ}]`, which
/// is the density kernel `Γ(μ+s)Γ(m-s)/(Γ(μ)Γ(m)) · ζ/(ζ+s)`.
#[derive(Debug, Clone)]
pub struct SnrSampler {
    g_mu: Gamma<f64>,
    g_m: Gamma<f64>,
    inv_zeta: f64,
    ln_theta: f64,
    two_over_alpha: f64,
}

impl SnrSampler {
    pub fn new(p: &ChannelParams<f64>) -> Result<Self> {
        Self::from_channel(&Channel::new(*p)?)
    }

    /// Uses the channel's pointing-error surrogate, so samples follow the
    /// same law as its analytic statistics.
    pub fn from_channel(ch: &Channel<f64>) -> Result<Self> {
        let p = ch.params();
        let gamma = |shape: f64, name| Gamma::new(shape, 1.0).map_err(|e| invalid(name, e.to_string()));
        Ok(SnrSampler {
            g_mu: gamma(p.mu, "mu")?,
            g_m: gamma(p.m, "m")?,
            inv_zeta: 1.0 / ch.zeta(),
            ln_theta: ch.constants().ln_theta,
            two_over_alpha: 2.0 / p.alpha,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let gm = self.g_mu.sample(rng);
        let gd = self.g_m.sample(rng);
        let u = 1.0 - rng.random::<f64>();
        let ln_x = gm.ln() - gd.ln() + self.inv_zeta * u.ln();
        (self.two_over_alpha * (ln_x - self.ln_theta)).exp()
    }
}

/// `cfg.n_samples` SNR samples, concatenated in stream order.
pub fn sample_snr(p: &ChannelParams<f64>, cfg: &SamplerConfig) -> Result<Vec<f64>> {
    let s = SnrSampler::new(p)?;
    draw(cfg, |rng| s.sample(rng))
}

/// Samples by inversion of the tabulated distribution function, the
/// reference the product sampler is tested against.
pub fn sample_snr_inverse(p: &ChannelParams<f64>, cfg: &SamplerConfig) -> Result<Vec<f64>> {
    InverseCdf::new(&Channel::new(*p)?, 4096)?.sample(cfg)
}

fn draw(cfg: &SamplerConfig, f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync) -> Result<Vec<f64>> {
    cfg.validate()?;
    let parts: Vec<Vec<f64>> = (0..cfg.n_streams)
        .into_par_iter()
        .map(|k| {
            let mut rng = cfg.rng(k);
            (0..cfg.stream_len(k)).map(|_| f(&mut rng)).collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Distribution function tabulated on a uniform grid in `ln γ`, inverted by
/// linear interpolation.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    ln_gamma: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdf {
    pub fn new(ch: &Channel<f64>, points: usize) -> Result<Self> {
        if points < 16 {
            return Err(invalid("points", "need at least 16 grid points"));
        }
        let (lo, hi) = ch.log_snr_range(-30.0);
        let h = (hi - lo) / (points - 1) as f64;
        let ln_gamma: Vec<f64> = (0..points).map(|i| lo + h * i as f64).collect();
        let mut cdf = ln_gamma
            .par_iter()
            .map(|&u| ch.cdf_at_log(u))
            .collect::<Result<Vec<f64>>>()?;
        // Quadrature noise must not break monotonicity.
        for i in 1..cdf.len() {
            cdf[i] = cdf[i].max(cdf[i - 1]);
        }
        Ok(InverseCdf { ln_gamma, cdf })
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.cdf.len();
        let i = self.cdf.partition_point(|&c| c < q);
        let u = if i == 0 {
            self.ln_gamma[0]
        } else if i == n {
            self.ln_gamma[n - 1]
        } else {
            let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
            let t = if c1 > c0 { (q - c0) / (c1 - c0) } else { 0.0 };
            self.ln_gamma[i - 1] + t * (self.ln_gamma[i] - self.ln_gamma[i - 1])
        };
        u.exp()
    }

    /// Inverse-transform samples with the stream layout of [`sample_snr`].
    pub fn sample(&self, cfg: &SamplerConfig) -> Result<Vec<f64>> {
        draw(cfg, |rng| self.quantile(rng.random::<f64>()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::ks_two_sample;

    #[test]
    fn mean_matches_gamma_bar() {
        let p = ChannelParams::new(2.0, 2.5, 4.0, 1.2, 3.0).unwrap();
        let cfg = SamplerConfig {
            seed: 11,
            n_samples: 400_000,
            n_streams: 16,
        };
        let xs = sample_snr(&p, &cfg).unwrap();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        assert!((mean - 3.0).abs() < 3.0 * (var / n).sqrt(), "{mean}");
    }

    #[test]
    fn product_sampler_matches_inversion() {
        let p = ChannelParams::new(3.5, 0.8, 3.0, 0.7, 1.0).unwrap();
        let a = sample_snr(
            &p,
            &SamplerConfig {
                seed: 1,
                n_samples: 50_000,
                n_streams: 4,
            },
        )
        .unwrap();
        let b = sample_snr_inverse(
            &p,
            &SamplerConfig {
                seed: 2,
                n_samples: 50_000,
                n_streams: 4,
            },
        )
        .unwrap();
        let ks = ks_two_sample(&a, &b);
        assert!(ks.p_value > 0.01, "{ks:?}");
    }

    #[test]
    fn quantile_inverts_the_table() {
        let ch = Channel::new(ChannelParams::new(2.0, 1.0, 2.5, 1.2, 1.0).unwrap()).unwrap();
        let inv = InverseCdf::new(&ch, 2048).unwrap();
        for q in [0.01, 0.2, 0.5, 0.9, 0.999] {
            let g = inv.quantile(q);
            assert!((ch.cdf(g).unwrap() - q).abs() < 1e-4, "{q} {g}");
        }
    }
}
