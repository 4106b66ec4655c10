//! Secrecy metrics of a wiretap link over α-F channels with pointing errors.
//!
//! `D` is the legitimate receiver and `E` the eavesdropper. With
//! `r = α_D/α_E` and `X = Θ_D e^{α_D R_s/2} / Θ_E^r`, the closed forms are
//!
//! ```text
//! SPSC  = Λ_D Λ_E / α_E²      H^{4,3}_{5,5}[Θ_D / Θ_E^r]
//! SOP_L = Λ_D Λ_E / (α_D α_E) H^{3,4}_{5,5}[X]
//! ASC   = (I1 + I2 - I3) / ln 2
//! ```
//!
//! where `I1`, `I2` are bivariate H-functions and `I3` is `H^{4,2}_{4,4}`.
//! Every closed form has a quadrature counterpart built on the channel
//! density, used as an oracle and as the fallback of [`asc_exact`].

mod asymptotic;

use std::fmt;

pub use asymptotic::{sop_exponent, Exponent, ExponentCase};

use crate::channel::{Channel, ChannelParams, DEFAULT_Z_SURROGATE};
use crate::error::{invalid, Error, Result};
use crate::specfun::{
    fox_h_bivariate_scaled, fox_h_scaled, BivariateFoxHSpec, ContourConfig, FoxHSpec, HTuple, JointTuple, QuadSettings,
};
use crate::Real;

/// Legitimate and eavesdropper channels plus the target secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyScenario<F> {
    pub d: ChannelParams<F>,
    pub e: ChannelParams<F>,
    /// Target secrecy rate `R_s`, bits/s/Hz.
    pub rate: F,
}

impl<F: Real> SecrecyScenario<F> {
    pub fn new(d: ChannelParams<F>, e: ChannelParams<F>, rate: F) -> Result<Self> {
        let s = SecrecyScenario { d, e, rate };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.d.validate()?;
        self.e.validate()?;
        if !(self.rate >= F::zero()) || !self.rate.is_finite() {
            return Err(invalid(
                "rate",
                format!("R_s must be non-negative and finite, got {}", self.rate),
            ));
        }
        Ok(())
    }

    /// `ρ = γ̄_D / γ̄_E`.
    pub fn rho(&self) -> F {
        self.d.gamma_bar / self.e.gamma_bar
    }

    pub fn with_rate(mut self, rate: F) -> Self {
        self.rate = rate;
        self
    }

    pub fn with_gamma_bars(mut self, d: F, e: F) -> Self {
        self.d.gamma_bar = d;
        self.e.gamma_bar = e;
        self
    }

    /// Exchanges the roles of `D` and `E`.
    pub fn swapped(&self) -> Self {
        SecrecyScenario {
            d: self.e,
            e: self.d,
            rate: self.rate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
    Asymptotic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
            Method::Asymptotic => "asymptotic",
        })
    }
}

/// A metric value, how it was obtained and its error estimate (or CI
/// half-width for Monte Carlo).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResult<F> {
    pub value: F,
    pub method: Method,
    pub err: F,
}

/// The three integrals of the ASC decomposition, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscTerms<F> {
    pub i1: F,
    pub i2: F,
    pub i3: F,
    pub err: F,
}

impl<F: Real> AscTerms<F> {
    /// `(I1 + I2 - I3) / ln 2`, clipped at 0.
    pub fn capacity(&self) -> F {
        ((self.i1 + self.i2 - self.i3) / F::LN_2()).max(F::zero())
    }
}

/// Numerical settings shared by the metric evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyOptions<F> {
    /// Univariate contour integrals (SPSC, SOP, `I3`, channel statistics).
    pub contour: ContourConfig<F>,
    /// Outer and inner contours of the bivariate `I1`, `I2`.
    pub bivariate: (ContourConfig<F>, ContourConfig<F>),
    /// Quadrature over the SNR for the oracle integrals.
    pub quad: QuadSettings<F>,
    /// Gauss–Laguerre order of the asymptotic ASC.
    pub laguerre_order: usize,
    pub z_surrogate: F,
}

impl<F: Real> Default for SecrecyOptions<F> {
    fn default() -> Self {
        let biv = ContourConfig::default().with_tolerances(
            F::lit(1e-9).max(F::tolerance_floor()),
            F::lit(1e-8).max(F::tolerance_floor()),
        );
        SecrecyOptions {
            contour: ContourConfig::default(),
            bivariate: (biv, biv),
            quad: QuadSettings {
                abs_tol: F::lit(1e-10).max(F::tolerance_floor()),
                rel_tol: F::lit(1e-9).max(F::tolerance_floor()),
                max_subdivisions: 2000,
            },
            laguerre_order: 32,
            z_surrogate: F::lit(DEFAULT_Z_SURROGATE),
        }
    }
}

/// A scenario with both channels prepared; the metric functions below are
/// shorthands for `Evaluator::new(s, &Default::default())?.metric()`.
#[derive(Debug, Clone)]
pub struct Evaluator<F> {
    scenario: SecrecyScenario<F>,
    d: Channel<F>,
    e: Channel<F>,
    opts: SecrecyOptions<F>,
}

fn t<F: Real>(a: F, b: F) -> HTuple<F> {
    HTuple::new(a, b)
}

impl<F: Real> Evaluator<F> {
    pub fn new(scenario: &SecrecyScenario<F>, opts: &SecrecyOptions<F>) -> Result<Self> {
        scenario.validate()?;
        let d = Channel::with_surrogate(scenario.d, opts.z_surrogate)?.with_contour(opts.contour);
        let e = Channel::with_surrogate(scenario.e, opts.z_surrogate)?.with_contour(opts.contour);
        Ok(Evaluator {
            scenario: *scenario,
            d,
            e,
            opts: *opts,
        })
    }

    pub fn scenario(&self) -> &SecrecyScenario<F> {
        &self.scenario
    }

    pub fn channels(&self) -> (&Channel<F>, &Channel<F>) {
        (&self.d, &self.e)
    }

    fn ratio(&self) -> F {
        self.scenario.d.alpha / self.scenario.e.alpha
    }

    /// `ln(Θ_D / Θ_E^r)`.
    fn ln_spsc_argument(&self) -> F {
        self.d.constants().ln_theta - self.ratio() * self.e.constants().ln_theta
    }

    /// `ln X` with `X = Θ_D e^{α_D R_s/2} / Θ_E^r`.
    pub fn ln_sop_argument(&self) -> F {
        self.ln_spsc_argument() + self.scenario.d.alpha * self.scenario.rate * F::lit(0.5)
    }

    pub fn spsc_spec(&self) -> Result<FoxHSpec<F>> {
        let (d, e) = (&self.scenario.d, &self.scenario.e);
        let (zd, ze) = (self.d.zeta(), self.e.zeta());
        let r = self.ratio();
        let one = F::one();
        FoxHSpec::new(
            4,
            3,
            vec![
                t(one - d.m, one),
                t(one - e.mu, r),
                t(one - ze, r),
                t(one, r),
                t(zd + one, one),
            ],
            vec![t(d.mu, one), t(zd, one), t(e.m, r), t(F::zero(), r), t(-ze, r)],
        )
    }

    pub fn sop_spec(&self) -> Result<FoxHSpec<F>> {
        let (d, e) = (&self.scenario.d, &self.scenario.e);
        let (zd, ze) = (self.d.zeta(), self.e.zeta());
        let r = self.ratio();
        let one = F::one();
        FoxHSpec::new(
            3,
            4,
            vec![
                t(one - d.m, one),
                t(one, one),
                t(one - e.mu, r),
                t(one - ze, r),
                t(zd + one, one),
            ],
            vec![t(d.mu, one), t(zd, one), t(e.m, r), t(-ze, r), t(F::zero(), one)],
        )
    }

    /// `I3 = E_E[ln(1 + γ_E)]` as `Λ_E/2 H^{4,2}_{4,4}[Θ_E]`.
    pub fn i3_spec(&self) -> Result<FoxHSpec<F>> {
        let e = &self.scenario.e;
        let ze = self.e.zeta();
        let a = e.alpha * F::lit(0.5);
        let one = F::one();
        FoxHSpec::new(
            4,
            2,
            vec![t(one - e.m, one), t(F::zero(), a), t(one, a), t(ze + one, one)],
            vec![t(e.mu, one), t(ze, one), t(F::zero(), a), t(F::zero(), a)],
        )
    }

    /// Spec of `Ī(P_x, P_y)`: the density block of `x`, the distribution
    /// block of `y`, coupled through the Mellin transform of `ln(1 + γ)`.
    pub fn ibar_spec(x: &Channel<F>, y: &Channel<F>) -> Result<BivariateFoxHSpec<F>> {
        let hx = x.params().alpha * F::lit(0.5);
        let hy = y.params().alpha * F::lit(0.5);
        let (zero, one) = (F::zero(), F::one());
        BivariateFoxHSpec::new(
            3,
            vec![
                JointTuple::new(zero, hx, hy),
                JointTuple::new(one, -hx, -hy),
                JointTuple::new(one, -hx, -hy),
                JointTuple::new(one, hx, hy),
            ],
            vec![],
            x.pdf_spec().clone(),
            y.cdf_spec().clone(),
        )
    }

    fn probability(&self, v: F, err: F, what: &'static str) -> Result<(F, F)> {
        let slack = F::lit(10.0) * err + F::lit(1e-9).max(F::tolerance_floor());
        if v.is_nan() || v < -slack || v > F::one() + slack {
            return Err(Error::OutOfRange {
                what,
                value: v.to_f64_lossy(),
            });
        }
        Ok((v.max(F::zero()).min(F::one()), err))
    }

    pub fn spsc(&self) -> Result<MetricResult<F>> {
        let (d, e) = (self.d.constants(), self.e.constants());
        let ln_pref = d.ln_big_lambda + e.ln_big_lambda - F::lit(2.0) * self.scenario.e.alpha.ln();
        let v = fox_h_scaled(&self.spsc_spec()?, self.ln_spsc_argument(), ln_pref, &self.opts.contour)?;
        let (value, err) = self.probability(v.value, v.abs_err, "SPSC")?;
        Ok(MetricResult {
            value,
            method: Method::ClosedForm,
            err,
        })
    }

    pub fn sop_lower(&self) -> Result<MetricResult<F>> {
        let (d, e) = (self.d.constants(), self.e.constants());
        let ln_pref = d.ln_big_lambda + e.ln_big_lambda - (self.scenario.d.alpha * self.scenario.e.alpha).ln();
        let v = fox_h_scaled(&self.sop_spec()?, self.ln_sop_argument(), ln_pref, &self.opts.contour)?;
        let (value, err) = self.probability(v.value, v.abs_err, "SOP lower bound")?;
        Ok(MetricResult {
            value,
            method: Method::ClosedForm,
            err,
        })
    }

    /// `I3` in nats with its error estimate.
    pub fn i3(&self) -> Result<(F, F)> {
        let ln_pref = self.e.constants().ln_big_lambda - F::lit(2.0).ln();
        let v = fox_h_scaled(
            &self.i3_spec()?,
            self.e.constants().ln_theta,
            ln_pref,
            &self.opts.contour,
        )?;
        Ok((v.value, v.abs_err))
    }

    fn ibar(&self, x: &Channel<F>, y: &Channel<F>) -> Result<(F, F)> {
        let spec = Self::ibar_spec(x, y)?;
        let ln_pref = x.constants().ln_big_lambda + y.constants().ln_big_lambda - (F::lit(2.0) * y.params().alpha).ln();
        let (c1, c2) = &self.opts.bivariate;
        let v = fox_h_bivariate_scaled(&spec, x.constants().ln_theta, y.constants().ln_theta, ln_pref, c1, c2)?;
        Ok((v.value, v.abs_err))
    }

    /// `I1`, `I2`, `I3` from the closed forms.
    pub fn asc_terms(&self) -> Result<AscTerms<F>> {
        let (i1, e1) = self.ibar(&self.d, &self.e)?;
        let (i2, e2) = self.ibar(&self.e, &self.d)?;
        let (i3, e3) = self.i3()?;
        Ok(AscTerms {
            i1,
            i2,
            i3,
            err: e1 + e2 + e3,
        })
    }

    /// ASC in bits/s/Hz from the closed forms, falling back to quadrature
    /// (and tagging the result accordingly) when a bivariate evaluation
    /// fails to converge or its contours cannot be placed.
    pub fn asc_exact(&self) -> Result<MetricResult<F>> {
        match self.asc_terms() {
            Ok(terms) => Ok(MetricResult {
                value: terms.capacity(),
                method: Method::ClosedForm,
                err: terms.err / F::LN_2(),
            }),
            Err(Error::NonConvergence { .. } | Error::PoleCollision) => self.asc_quadrature(),
            Err(e) => Err(e),
        }
    }

    /// `I1`, `I2`, `I3` by quadrature of their defining integrals.
    pub fn asc_terms_quadrature(&self) -> Result<AscTerms<F>> {
        let q = &self.opts.quad;
        let i1 = self
            .d
            .expectation(|g| Ok(g.ln_1p() * self.e.cdf(g)?), q, "ASC I1 quadrature")?;
        // I2 = I3 - E_E[ln(1+γ) (1 - F_D(γ))], which keeps the small
        // difference I2 - I3 accurate.
        let i3 = self.e.expectation(|g| Ok(g.ln_1p()), q, "ASC I3 quadrature")?;
        let rest = self
            .e
            .expectation(|g| Ok(g.ln_1p() * self.d.sf(g)?), q, "ASC I2 quadrature")?;
        Ok(AscTerms {
            i1: i1.value,
            i2: i3.value - rest.value,
            i3: i3.value,
            err: i1.abs_err + i3.abs_err + rest.abs_err,
        })
    }

    pub fn asc_quadrature(&self) -> Result<MetricResult<F>> {
        let q = &self.opts.quad;
        let i1 = self
            .d
            .expectation(|g| Ok(g.ln_1p() * self.e.cdf(g)?), q, "ASC I1 quadrature")?;
        let rest = self
            .e
            .expectation(|g| Ok(g.ln_1p() * self.d.sf(g)?), q, "ASC I2 quadrature")?;
        Ok(MetricResult {
            value: ((i1.value - rest.value) / F::LN_2()).max(F::zero()),
            method: Method::Quadrature,
            err: (i1.abs_err + rest.abs_err) / F::LN_2(),
        })
    }

    /// `Pr[γ_D > γ_E] = E_D[F_E(γ_D)]` by quadrature.
    pub fn spsc_quadrature(&self) -> Result<MetricResult<F>> {
        let r = self
            .d
            .expectation(|g| self.e.cdf(g), &self.opts.quad, "SPSC quadrature")?;
        let (value, err) = self.probability(r.value, r.abs_err, "SPSC")?;
        Ok(MetricResult {
            value,
            method: Method::Quadrature,
            err,
        })
    }

    /// `Pr[γ_D < e^{R_s} γ_E] = E_E[F_D(e^{R_s} γ_E)]` by quadrature.
    pub fn sop_lower_quadrature(&self) -> Result<MetricResult<F>> {
        let k = self.scenario.rate.exp();
        let r = self
            .e
            .expectation(|g| self.d.cdf(k * g), &self.opts.quad, "SOP lower bound quadrature")?;
        let (value, err) = self.probability(r.value, r.abs_err, "SOP lower bound")?;
        Ok(MetricResult {
            value,
            method: Method::Quadrature,
            err,
        })
    }

    /// High-SNR limit of the ASC at the scenario's `ρ`, in bits/s/Hz.
    pub fn asc_asymptotic(&self) -> Result<MetricResult<F>> {
        asymptotic::asc_asymptotic(self, self.opts.laguerre_order)
    }

    pub fn asc_asymptotic_with_order(&self, n: usize) -> Result<MetricResult<F>> {
        asymptotic::asc_asymptotic(self, n)
    }

    /// High-SNR limit of the ASC by adaptive quadrature instead of the
    /// Laguerre sum.
    pub fn asc_asymptotic_quadrature(&self) -> Result<MetricResult<F>> {
        asymptotic::asc_asymptotic_quadrature(self)
    }

    pub fn sop_asymptotic(&self) -> Result<MetricResult<F>> {
        asymptotic::sop_asymptotic(self)
    }

    pub fn diversity_gain(&self) -> Result<F> {
        diversity_gain(&self.scenario)
    }
}

/// Probability of strictly positive secrecy capacity.
pub fn spsc<F: Real>(s: &SecrecyScenario<F>) -> Result<MetricResult<F>> {
    Evaluator::new(s, &SecrecyOptions::default())?.spsc()
}

/// Average secrecy capacity from the closed forms (bits/s/Hz).
pub fn asc_exact<F: Real>(s: &SecrecyScenario<F>) -> Result<MetricResult<F>> {
    Evaluator::new(s, &SecrecyOptions::default())?.asc_exact()
}

/// Average secrecy capacity by direct quadrature (bits/s/Hz).
pub fn asc_quadrature<F: Real>(s: &SecrecyScenario<F>) -> Result<MetricResult<F>> {
    Evaluator::new(s, &SecrecyOptions::default())?.asc_quadrature()
}

/// Saturation ASC for `γ̄_D, γ̄_E → ∞` at fixed `ρ`, with an `n`-point
/// Gauss–Laguerre rule (bits/s/Hz).
pub fn asc_asymptotic<F: Real>(s: &SecrecyScenario<F>, n: usize) -> Result<MetricResult<F>> {
    Evaluator::new(s, &SecrecyOptions::default())?.asc_asymptotic_with_order(n)
}

/// Lower bound `Pr[γ_D < e^{R_s} γ_E]` of the secrecy outage probability.
pub fn sop_lower<F: Real>(s: &SecrecyScenario<F>) -> Result<MetricResult<F>> {
    Evaluator::new(s, &SecrecyOptions::default())?.sop_lower()
}

/// Leading high-SNR term of [`sop_lower`].
pub fn sop_asymptotic<F: Real>(s: &SecrecyScenario<F>) -> Result<MetricResult<F>> {
    Evaluator::new(s, &SecrecyOptions::default())?.sop_asymptotic()
}

/// Secrecy diversity gain `G_d = α_D Ξ / 2`.
pub fn diversity_gain<F: Real>(s: &SecrecyScenario<F>) -> Result<F> {
    let xi = sop_exponent(s, F::lit(DEFAULT_Z_SURROGATE))?;
    Ok(s.d.alpha * xi.value * F::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(alpha: f64, mu: f64, m: f64, z: f64, gb: f64) -> ChannelParams<f64> {
        ChannelParams::new(alpha, mu, m, z, gb).unwrap()
    }

    fn scenario() -> SecrecyScenario<f64> {
        SecrecyScenario::new(ch(2.0, 1.0, 1.5, 1.2, 10.0), ch(2.5, 1.0, 3.0, 0.7, 1.0), 0.5).unwrap()
    }

    #[test]
    fn identical_channels_are_fair_coins() {
        let p = ch(2.0, 1.3, 2.5, 0.9, 3.0);
        let s = SecrecyScenario::new(p, p, 0.0).unwrap();
        let ev = Evaluator::new(&s, &SecrecyOptions::default()).unwrap();
        assert!((ev.spsc().unwrap().value - 0.5).abs() < 1e-9);
        assert!((ev.sop_lower().unwrap().value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn spsc_matches_quadrature() {
        let ev = Evaluator::new(&scenario(), &SecrecyOptions::default()).unwrap();
        let a = ev.spsc().unwrap();
        let b = ev.spsc_quadrature().unwrap();
        assert!((a.value - b.value).abs() < 1e-7, "{a:?} {b:?}");
    }

    #[test]
    fn sop_lower_matches_quadrature() {
        let ev = Evaluator::new(&scenario(), &SecrecyOptions::default()).unwrap();
        let a = ev.sop_lower().unwrap();
        let b = ev.sop_lower_quadrature().unwrap();
        assert!((a.value - b.value).abs() < 1e-7, "{a:?} {b:?}");
    }

    #[test]
    fn complementary_at_zero_rate() {
        let s = scenario().with_rate(0.0);
        let ev = Evaluator::new(&s, &SecrecyOptions::default()).unwrap();
        let sum = ev.spsc().unwrap().value + ev.sop_lower().unwrap().value;
        assert!((sum - 1.0).abs() < 1e-9, "{sum}");
    }

    #[test]
    fn i3_matches_quadrature() {
        let ev = Evaluator::new(&scenario(), &SecrecyOptions::default()).unwrap();
        let (i3, _) = ev.i3().unwrap();
        let q = ev.asc_terms_quadrature().unwrap();
        assert!((i3 / q.i3 - 1.0).abs() < 1e-7, "{i3} {}", q.i3);
    }

    #[test]
    fn asc_closed_form_matches_quadrature() {
        let ev = Evaluator::new(&scenario(), &SecrecyOptions::default()).unwrap();
        let a = ev.asc_exact().unwrap();
        assert_eq!(a.method, Method::ClosedForm);
        let b = ev.asc_quadrature().unwrap();
        assert!((a.value / b.value - 1.0).abs() < 1e-5, "{a:?} {b:?}");
    }

    #[test]
    fn rate_and_scenario_validation() {
        let p = ch(2.0, 1.0, 2.0, 1.0, 1.0);
        assert!(SecrecyScenario::new(p, p, -0.1).is_err());
        assert_eq!(SecrecyScenario::new(p.with_gamma_bar(4.0), p, 0.0).unwrap().rho(), 4.0);
    }
}
