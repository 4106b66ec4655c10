//! α-F fading with pointing errors: channel parameters, SNR distribution and
//! THz path loss.
//!
//! With `x = Θ γ^{α/2}` and `ζ = z²/α`, the SNR density is
//!
//! ```text
//! f(γ) = Λ/(2γ) H^{2,1}_{2,2}[x | (1-m,1), (ζ+1,1); (μ,1), (ζ,1)]
//! F(γ) = Λ/α   H^{2,2}_{3,3}[x | (1-m,1), (1,1), (ζ+1,1); (μ,1), (ζ,1), (0,1)]
//! ```
//!
//! so `x` has Mellin transform `E[x^s] = ζ Γ(μ+s) Γ(m-s) / (Γ(μ) Γ(m) (ζ+s))`,
//! the law of `G_μ U^{1/ζ} / G_m` for independent unit gamma variates and a
//! uniform `U`. The scale `λ` is fixed by requiring `E[γ] = γ̄`.

use std::cell::RefCell;

use crate::error::{invalid, Error, Result};
use crate::specfun::{
    fox_h_scaled, integrate_with_breaks, ln_gamma, ContourConfig, FoxHSpec, HTuple, Integral, QuadSettings,
};
use crate::Real;

/// Stand-in for `z = ∞` (no pointing error).
pub const DEFAULT_Z_SURROGATE: f64 = 50.0;
/// Stand-in for `m = ∞` in the α-μ reduction.
pub const DEFAULT_M_SURROGATE: f64 = 200.0;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

// ln of the tail mass left outside the integration range of `expectation`.
const LN_TAIL_MASS: f64 = -40.0;

/// The five parameters of an α-F channel with pointing errors.
///
/// `z` may be `+∞`; it is then replaced by a finite surrogate when the
/// distribution is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<F> {
    pub alpha: F,
    pub mu: F,
    pub m: F,
    pub z: F,
    /// Average SNR, linear scale.
    pub gamma_bar: F,
}

impl<F: Real> ChannelParams<F> {
    pub fn new(alpha: F, mu: F, m: F, z: F, gamma_bar: F) -> Result<Self> {
        let p = ChannelParams {
            alpha,
            mu,
            m,
            z,
            gamma_bar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |v: F| v > F::zero() && v.is_finite();
        if !finite_pos(self.alpha) {
            return Err(invalid(
                "alpha",
                format!("must be positive and finite, got {}", self.alpha),
            ));
        }
        if !finite_pos(self.mu) {
            return Err(invalid("mu", format!("must be positive and finite, got {}", self.mu)));
        }
        if !(self.m > F::one()) || !self.m.is_finite() {
            return Err(invalid("m", format!("must be finite and > 1, got {}", self.m)));
        }
        if !(self.z > F::zero()) {
            return Err(invalid("z", format!("must be positive (or +inf), got {}", self.z)));
        }
        if !finite_pos(self.gamma_bar) {
            return Err(invalid(
                "gamma_bar",
                format!("must be positive and finite, got {}", self.gamma_bar),
            ));
        }
        let bound = F::lit(2.0) / self.alpha;
        if !(self.m > bound) {
            return Err(Error::MeanNonexistence {
                m: self.m.to_f64_lossy(),
                bound: bound.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn with_gamma_bar(mut self, gamma_bar: F) -> Self {
        self.gamma_bar = gamma_bar;
        self
    }

    /// Scales the average SNR by the power gain `h_l²` of a deterministic
    /// path-loss amplitude `h_l`.
    pub fn with_path_loss(mut self, h_l: F) -> Self {
        self.gamma_bar = self.gamma_bar * h_l * h_l;
        self
    }

    /// `z`, with `+∞` replaced by `surrogate`.
    pub fn effective_z(&self, surrogate: F) -> F {
        if self.z.is_infinite() {
            surrogate
        } else {
            self.z
        }
    }
}

/// Constants entering the density: `Λ = z²/(Γ(μ)Γ(m))`, `Θ` and `λ`.
///
/// `Λ` underflows for large `m`; the logarithms are always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants<F> {
    pub big_lambda: F,
    pub theta: F,
    pub lambda_norm: F,
    pub ln_big_lambda: F,
    pub ln_theta: F,
}

/// Derives the constants, replacing `z = ∞` by [`DEFAULT_Z_SURROGATE`].
pub fn derive_constants<F: Real>(p: &ChannelParams<F>) -> Result<DerivedConstants<F>> {
    derive_constants_with(p, F::lit(DEFAULT_Z_SURROGATE))
}

pub fn derive_constants_with<F: Real>(p: &ChannelParams<F>, z_surrogate: F) -> Result<DerivedConstants<F>> {
    p.validate()?;
    let z = p.effective_z(z_surrogate);
    if !(z > F::zero()) || !z.is_finite() {
        return Err(invalid("z_surrogate", "must be positive and finite"));
    }
    let two = F::lit(2.0);
    let k = two / p.alpha;
    let ln_gm = ln_gamma(p.mu)? + ln_gamma(p.m)?;
    let ln_big_lambda = two * z.ln() - ln_gm;
    // E[γ] = γ̄ fixes λ = ((m-1)/μ)^{2/α} Γ(μ+2/α) Γ(m-2/α) / (Γ(μ) Γ(m)).
    let ln_lambda = k * ((p.m - F::one()).ln() - p.mu.ln()) + ln_gamma(p.mu + k)? + ln_gamma(p.m - k)? - ln_gm;
    // Θ = μ/(m-1) [z² λ / (γ̄ (z²+2))]^{α/2}
    let z2 = z * z;
    let ln_theta =
        p.mu.ln() - (p.m - F::one()).ln() + p.alpha / two * (z2.ln() + ln_lambda - p.gamma_bar.ln() - (z2 + two).ln());
    let out = DerivedConstants {
        big_lambda: ln_big_lambda.exp(),
        theta: ln_theta.exp(),
        lambda_norm: ln_lambda.exp(),
        ln_big_lambda,
        ln_theta,
    };
    if !ln_big_lambda.is_finite() || !ln_theta.is_finite() || !ln_lambda.is_finite() {
        return Err(invalid("channel", format!("derived constants are not finite: {out:?}")));
    }
    Ok(out)
}

/// A channel with its derived constants and Fox H specs precomputed.
#[derive(Debug, Clone)]
pub struct Channel<F> {
    params: ChannelParams<F>,
    z: F,
    consts: DerivedConstants<F>,
    pdf_spec: FoxHSpec<F>,
    cdf_spec: FoxHSpec<F>,
    sf_spec: FoxHSpec<F>,
    contour: ContourConfig<F>,
}

impl<F: Real> Channel<F> {
    pub fn new(params: ChannelParams<F>) -> Result<Self> {
        Self::with_surrogate(params, F::lit(DEFAULT_Z_SURROGATE))
    }

    pub fn with_surrogate(params: ChannelParams<F>, z_surrogate: F) -> Result<Self> {
        let consts = derive_constants_with(&params, z_surrogate)?;
        let z = params.effective_z(z_surrogate);
        let zeta = z * z / params.alpha;
        let one = F::one();
        let t = HTuple::new;
        let pdf_spec = FoxHSpec::new(
            2,
            1,
            vec![t(one - params.m, one), t(zeta + one, one)],
            vec![t(params.mu, one), t(zeta, one)],
        )?;
        let cdf_spec = FoxHSpec::new(
            2,
            2,
            vec![t(one - params.m, one), t(one, one), t(zeta + one, one)],
            vec![t(params.mu, one), t(zeta, one), t(F::zero(), one)],
        )?;
        // Same kernel up to sign with the contour moved across the pole at 0.
        let sf_spec = FoxHSpec::new(
            3,
            1,
            vec![t(one - params.m, one), t(zeta + one, one), t(one, one)],
            vec![t(params.mu, one), t(zeta, one), t(F::zero(), one)],
        )?;
        Ok(Channel {
            params,
            z,
            consts,
            pdf_spec,
            cdf_spec,
            sf_spec,
            contour: ContourConfig::default(),
        })
    }

    pub fn with_contour(mut self, contour: ContourConfig<F>) -> Self {
        self.contour = contour;
        self
    }

    pub fn params(&self) -> &ChannelParams<F> {
        &self.params
    }

    pub fn constants(&self) -> &DerivedConstants<F> {
        &self.consts
    }

    pub fn contour(&self) -> &ContourConfig<F> {
        &self.contour
    }

    /// Pointing-error intensity actually used (after the `∞` substitution).
    pub fn z(&self) -> F {
        self.z
    }

    /// `ζ = z²/α`.
    pub fn zeta(&self) -> F {
        self.z * self.z / self.params.alpha
    }

    pub fn pdf_spec(&self) -> &FoxHSpec<F> {
        &self.pdf_spec
    }

    pub fn cdf_spec(&self) -> &FoxHSpec<F> {
        &self.cdf_spec
    }

    /// `ln x = ln Θ + (α/2) ln γ`.
    #[inline]
    pub fn ln_x(&self, ln_gamma: F) -> F {
        self.consts.ln_theta + self.params.alpha * F::lit(0.5) * ln_gamma
    }

    /// Inverse of [`Channel::ln_x`].
    #[inline]
    pub fn ln_gamma_of(&self, ln_x: F) -> F {
        (ln_x - self.consts.ln_theta) * F::lit(2.0) / self.params.alpha
    }

    /// Density of `ln γ` at `u`, i.e. `γ f(γ)` at `γ = e^u`.
    pub fn log_density(&self, u: F) -> Result<F> {
        let ln_scale = self.consts.ln_big_lambda - F::lit(2.0).ln();
        let v = fox_h_scaled(&self.pdf_spec, self.ln_x(u), ln_scale, &self.contour)?;
        Ok(v.value.max(F::zero()))
    }

    pub fn pdf(&self, gamma: F) -> Result<F> {
        if !(gamma > F::zero()) || !gamma.is_finite() {
            return Err(invalid(
                "gamma",
                format!("SNR must be positive and finite, got {gamma}"),
            ));
        }
        Ok(self.log_density(gamma.ln())? / gamma)
    }

    pub fn cdf(&self, gamma: F) -> Result<F> {
        if gamma == F::zero() {
            return Ok(F::zero());
        }
        if gamma == F::infinity() {
            return Ok(F::one());
        }
        if !(gamma > F::zero()) {
            return Err(invalid("gamma", format!("SNR must be non-negative, got {gamma}")));
        }
        self.cdf_at_log(gamma.ln())
    }

    /// `F(e^u)`.
    pub fn cdf_at_log(&self, u: F) -> Result<F> {
        let ln_scale = self.consts.ln_big_lambda - self.params.alpha.ln();
        let v = fox_h_scaled(&self.cdf_spec, self.ln_x(u), ln_scale, &self.contour)?;
        self.clamp_probability(v.value, v.abs_err, "CDF")
    }

    /// `1 - F(e^u)`, computed directly so upper tails keep relative accuracy.
    pub fn sf_at_log(&self, u: F) -> Result<F> {
        let ln_scale = self.consts.ln_big_lambda - self.params.alpha.ln();
        let v = fox_h_scaled(&self.sf_spec, self.ln_x(u), ln_scale, &self.contour)?;
        self.clamp_probability(v.value, v.abs_err, "survival function")
    }

    pub fn sf(&self, gamma: F) -> Result<F> {
        if gamma == F::zero() {
            return Ok(F::one());
        }
        if !(gamma > F::zero()) || !gamma.is_finite() {
            return Err(invalid(
                "gamma",
                format!("SNR must be positive and finite, got {gamma}"),
            ));
        }
        self.sf_at_log(gamma.ln())
    }

    fn clamp_probability(&self, v: F, err: F, what: &'static str) -> Result<F> {
        let slack = F::lit(10.0) * (err + self.contour.abs_tol) + F::lit(1e3) * F::epsilon();
        if v < -slack || v > F::one() + slack || v.is_nan() {
            return Err(Error::OutOfRange {
                what,
                value: v.to_f64_lossy(),
            });
        }
        Ok(v.max(F::zero()).min(F::one()))
    }

    /// `ln E[x^s]` for `-min(μ, ζ) < s < m`, where `x = Θ γ^{α/2}`.
    pub fn ln_mellin(&self, s: F) -> Result<F> {
        let p = &self.params;
        let zeta = self.zeta();
        if !(s > -p.mu.min(zeta)) || !(s < p.m) {
            return Err(invalid("s", format!("Mellin order {s} outside (-min(mu, zeta), m)")));
        }
        Ok(zeta.ln() + ln_gamma(p.mu + s)? + ln_gamma(p.m - s)? - ln_gamma(p.mu)? - ln_gamma(p.m)? - (zeta + s).ln())
    }

    /// `E[γ^k]`, finite for `k < mα/2`.
    pub fn snr_moment(&self, k: F) -> Result<F> {
        let s = k * F::lit(2.0) / self.params.alpha;
        Ok((self.ln_mellin(s)? - s * self.consts.ln_theta).exp())
    }

    /// Range of `ln γ` outside of which the probability mass is below
    /// `e^{ln_tail}` on each side, from Chernoff bounds on `x`.
    pub fn log_snr_range(&self, ln_tail: F) -> (F, F) {
        let p = &self.params;
        let left_rate = p.mu.min(self.zeta());
        const GRID: usize = 24;
        let mut hi = F::infinity();
        let mut lo = F::neg_infinity();
        for k in 1..GRID {
            let frac = F::from_usize_lossy(k) / F::from_usize_lossy(GRID);
            // P(x > e^u) ≤ E[x^s] e^{-su}
            let s = p.m * frac;
            if let Ok(lm) = self.ln_mellin(s) {
                hi = hi.min((lm - ln_tail) / s);
            }
            // P(x < e^u) ≤ E[x^{-s}] e^{su}
            let s = left_rate * frac;
            if let Ok(lm) = self.ln_mellin(-s) {
                lo = lo.max((ln_tail - lm) / s);
            }
        }
        (self.ln_gamma_of(lo), self.ln_gamma_of(hi))
    }

    /// `E[g(γ)]` by adaptive quadrature of `g(e^u) γ f(γ)` over `ln γ`.
    ///
    /// Mass outside the integration range is below `e^{-40}` on each side.
    pub fn expectation(
        &self,
        g: impl Fn(F) -> Result<F>,
        settings: &QuadSettings<F>,
        what: &'static str,
    ) -> Result<Integral<F, F>> {
        let (lo, hi) = self.log_snr_range(F::lit(LN_TAIL_MASS));
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let integrand = |u: F| -> F {
            if failure.borrow().is_some() {
                return F::zero();
            }
            let eval = self.log_density(u).and_then(|d| {
                if d == F::zero() {
                    Ok(F::zero())
                } else {
                    g(u.exp()).map(|v| v * d)
                }
            });
            match eval {
                Ok(v) => v,
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    F::zero()
                }
            }
        };
        // Split near the bulk: the mode of ln x is within a few units of 0.
        let centre = self.ln_gamma_of(F::zero());
        let breaks: Vec<F> = [centre - F::lit(3.0), centre, centre + F::lit(3.0)]
            .into_iter()
            .filter(|b| *b > lo && *b < hi)
            .collect();
        let r = integrate_with_breaks(integrand, lo, hi, &breaks, settings, what);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        r
    }
}

/// SNR density `f(γ)`.
pub fn snr_pdf<F: Real>(p: &ChannelParams<F>, gamma: F) -> Result<F> {
    Channel::new(*p)?.pdf(gamma)
}

/// SNR distribution function `F(γ)`.
pub fn snr_cdf<F: Real>(p: &ChannelParams<F>, gamma: F) -> Result<F> {
    Channel::new(*p)?.cdf(gamma)
}

/// THz link budget terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss<F> {
    /// Transmit antenna gain, linear.
    pub gt: F,
    /// Receive antenna gain, linear.
    pub gr: F,
    pub freq_hz: F,
    pub dist_m: F,
    /// Molecular absorption coefficient, 1/m.
    pub kappa: F,
}

impl<F: Real> PathLoss<F> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gt", self.gt),
            ("gr", self.gr),
            ("freq_hz", self.freq_hz),
            ("dist_m", self.dist_m),
        ] {
            if !(v > F::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !(self.kappa >= F::zero()) || !self.kappa.is_finite() {
            return Err(invalid(
                "kappa",
                format!("must be non-negative and finite, got {}", self.kappa),
            ));
        }
        Ok(())
    }

    /// Free-space term `c √(Gt Gr) / (4π f d)`.
    pub fn free_space(&self) -> F {
        F::lit(SPEED_OF_LIGHT) * (self.gt * self.gr).sqrt() / (F::lit(4.0) * F::PI() * self.freq_hz * self.dist_m)
    }

    /// Absorption term `exp(-κ d / 2)`.
    pub fn absorption(&self) -> F {
        (-self.kappa * self.dist_m * F::lit(0.5)).exp()
    }
}

/// `h_l = h_fl h_al`.
pub fn path_loss<F: Real>(pl: &PathLoss<F>) -> Result<F> {
    pl.validate()?;
    Ok(pl.free_space() * pl.absorption())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// `z → ∞`.
    NoPointing,
    /// `m → ∞`.
    AlphaMu,
    /// `α = 2`.
    FisherF,
}

/// Replaces a limit by its surrogate.
pub fn reduce_special_case<F: Real>(p: &ChannelParams<F>, case: SpecialCase) -> ChannelParams<F> {
    let mut out = *p;
    match case {
        SpecialCase::NoPointing => out.z = F::lit(DEFAULT_Z_SURROGATE),
        SpecialCase::AlphaMu => out.m = F::lit(DEFAULT_M_SURROGATE),
        SpecialCase::FisherF => out.alpha = F::lit(2.0),
    }
    out
}
