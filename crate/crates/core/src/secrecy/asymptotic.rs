//! High-SNR forms: the leading term of the outage lower bound and the
//! saturation level of the average secrecy capacity.

use super::{Evaluator, Method, MetricResult, SecrecyScenario};
use crate::error::{Error, Result};
use crate::specfun::{gauss_laguerre, ln_gamma};
use crate::Real;

/// Which pole family governs the high-SNR decay of the outage bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentCase {
    /// `Ξ = μ_D`: small-scale fading of the legitimate link.
    Multipath,
    /// `Ξ = z_D²/α_D`: pointing error of the legitimate link.
    Pointing,
    /// `Ξ = m_E α_E / α_D`: shadowing of the eavesdropper link.
    Shadowing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent<F> {
    pub value: F,
    pub case: ExponentCase,
}

// Candidates closer than this (relatively) are treated as tied.
const TIE_TOLERANCE: f64 = 1e-9;

/// `Ξ = min(μ_D, z_D²/α_D, m_E α_E/α_D)` and the case it falls in.
///
/// Ties between the smallest candidates are double poles, for which no
/// closed form is provided; they are reported as [`Error::DegenerateTie`].
pub fn sop_exponent<F: Real>(s: &SecrecyScenario<F>, z_surrogate: F) -> Result<Exponent<F>> {
    s.validate()?;
    let zd = s.d.effective_z(z_surrogate);
    let cands = [
        (s.d.mu, ExponentCase::Multipath),
        (zd * zd / s.d.alpha, ExponentCase::Pointing),
        (s.e.m * s.e.alpha / s.d.alpha, ExponentCase::Shadowing),
    ];
    let mut best = cands[0];
    for c in &cands[1..] {
        if c.0 < best.0 {
            best = *c;
        }
    }
    for c in &cands {
        if c.1 != best.1 && (c.0 - best.0).abs() <= F::lit(TIE_TOLERANCE) * best.0 {
            return Err(Error::DegenerateTie(format!(
                "{:?} and {:?} exponents coincide at {}",
                best.1, c.1, best.0
            )));
        }
    }
    Ok(Exponent {
        value: best.0,
        case: best.1,
    })
}

/// `ln Φ` for the governing case.
fn ln_phi<F: Real>(s: &SecrecyScenario<F>, zeta_d: F, zeta_e: F, xi: &Exponent<F>) -> Result<F> {
    let (d, e) = (&s.d, &s.e);
    let r = d.alpha / e.alpha;
    let x = xi.value;
    let v = match xi.case {
        ExponentCase::Multipath => {
            ln_gamma(e.m - r * x)? + ln_gamma(d.m + x)? + ln_gamma(e.mu + r * x)?
                - x.ln()
                - (zeta_d - x).ln()
                - (zeta_e + r * x).ln()
        }
        ExponentCase::Pointing => {
            ln_gamma(d.mu - x)? + ln_gamma(e.m - r * x)? + ln_gamma(d.m + x)? + ln_gamma(e.mu + r * x)?
                - x.ln()
                - (zeta_e + r * x).ln()
        }
        ExponentCase::Shadowing => {
            ln_gamma(d.mu - x)? + ln_gamma(d.m + x)? + ln_gamma(e.mu + e.m)?
                - e.m.ln()
                - (zeta_d - x).ln()
                - (zeta_e + e.m).ln()
        }
    };
    Ok(v)
}

/// `Λ_D Λ_E Φ / (α_D α_E) X^Ξ`, the residue of the leading pole of the
/// outage kernel.
pub(super) fn sop_asymptotic<F: Real>(ev: &Evaluator<F>) -> Result<MetricResult<F>> {
    let s = ev.scenario();
    let (d, e) = ev.channels();
    let xi = sop_exponent(s, d.z())?;
    let ln_value = d.constants().ln_big_lambda + e.constants().ln_big_lambda - (s.d.alpha * s.e.alpha).ln()
        + ln_phi(s, d.zeta(), e.zeta(), &xi)?
        + xi.value * ev.ln_sop_argument();
    Ok(MetricResult {
        value: ln_value.exp(),
        method: Method::Asymptotic,
        err: F::zero(),
    })
}

/// Gauss–Laguerre evaluation of the saturation ASC.
///
/// With `u = γ_D/γ̄_D`, `φ_i = Θ_i γ̄_i^{α_i/2}` and nodes `x_k`,
///
/// ```text
/// C∞ = Λ_D Λ_E / 2 Σ_k w_k (φ1(x_k)/α_E - φ2(x_k)/α_D)
/// φ1(x) = e^x x^{-1} ln x       H^{2,1}_{2,2}[φ_D x^{α_D/2}] H^{2,2}_{3,3}[φ_E (ρx)^{α_E/2}]
/// φ2(x) = e^x x^{-1} ln(x/ρ)    H^{2,1}_{2,2}[φ_E x^{α_E/2}] H^{3,1}_{3,3}[φ_D (x/ρ)^{α_D/2}]
/// ```
///
/// The H-functions with their prefactors are exactly the channel density of
/// `ln γ`, the distribution function and the survival function evaluated at
/// `γ̄_D x` and `γ̄_E x`, which is how they are computed here. The sum is in
/// nats and is returned in bits. The error is the change against a rule of
/// half the order.
pub(super) fn asc_asymptotic<F: Real>(ev: &Evaluator<F>, n: usize) -> Result<MetricResult<F>> {
    let full = laguerre_sum(ev, n)?;
    let half = laguerre_sum(ev, (n / 2).max(1))?;
    Ok(MetricResult {
        value: full / F::LN_2(),
        method: Method::Asymptotic,
        err: (full - half).abs() / F::LN_2(),
    })
}

/// The same high-SNR limit by adaptive quadrature:
///
/// ```text
/// C∞ = E_D[ln(γ_D/γ̄_D) F_E(γ_D)] - E_E[ln(γ_E/γ̄_D) (1 - F_D(γ_E))]
/// ```
///
/// which is what the Laguerre sum approximates. Its integrand has a
/// logarithmic singularity at the origin and a power-law tail, which a
/// Laguerre rule resolves only slowly (for `μ = 1` the 32-point sum can be
/// tens of percent off), so this form serves as the accurate reference.
pub(super) fn asc_asymptotic_quadrature<F: Real>(ev: &Evaluator<F>) -> Result<MetricResult<F>> {
    let s = ev.scenario();
    let (d, e) = ev.channels();
    let q = &ev.opts.quad;
    let ln_gd = s.d.gamma_bar.ln();
    let a = d.expectation(|g| Ok((g.ln() - ln_gd) * e.cdf(g)?), q, "asymptotic ASC quadrature")?;
    let b = e.expectation(|g| Ok((g.ln() - ln_gd) * d.sf(g)?), q, "asymptotic ASC quadrature")?;
    Ok(MetricResult {
        value: (a.value - b.value) / F::LN_2(),
        method: Method::Asymptotic,
        err: (a.abs_err + b.abs_err) / F::LN_2(),
    })
}

fn laguerre_sum<F: Real>(ev: &Evaluator<F>, n: usize) -> Result<F> {
    let rule = gauss_laguerre::<F>(n)?;
    let s = ev.scenario();
    let (d, e) = ev.channels();
    let rho = s.rho();
    let (ln_gd, ln_ge) = (s.d.gamma_bar.ln(), s.e.gamma_bar.ln());
    let mut acc = F::zero();
    for (&x, &lw) in rule.nodes.iter().zip(&rule.log_weights) {
        let ln_x = x.ln();
        let phi1 = ln_x * d.log_density(ln_gd + ln_x)? * e.cdf_at_log(ln_gd + ln_x)?;
        let phi2 = (x / rho).ln() * e.log_density(ln_ge + ln_x)? * d.sf_at_log(ln_ge + ln_x)?;
        acc = acc + (lw + x).exp() / x * (phi1 - phi2);
    }
    Ok(acc)
}
