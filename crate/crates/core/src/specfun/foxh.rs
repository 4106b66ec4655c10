//! Univariate Fox H-function by direct Mellin–Barnes contour integration.
//!
//! ```text
//! H^{m,n}_{p,q}[z] = 1/(2πi) ∫_L χ(s) z^{-s} ds,
//! χ(s) = Π_{j≤m} Γ(b_j + B_j s) Π_{j≤n} Γ(1 - a_j - A_j s)
//!        / (Π_{j>m} Γ(1 - b_j - B_j s) Π_{j>n} Γ(a_j + A_j s))
//! ```
//!
//! For real parameters `χ(conj s) = conj χ(s)`, so the integral along
//! `Re(s) = c` reduces to `(1/π) ∫_0^∞ Re[χ(c+it) z^{-c-it}] dt`.

use num_complex::Complex;

use super::contour::{minimise_on, shrink, ContourConfig, Crossing, GammaFactor, GammaRatio};
use super::quadrature::{integrate_with_breaks, QuadSettings};
use crate::error::{invalid, Error, Result};
use crate::Real;

/// One `(a_j, A_j)` or `(b_j, B_j)` parameter pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTuple<F> {
    pub shift: F,
    pub scale: F,
}

impl<F> HTuple<F> {
    pub const fn new(shift: F, scale: F) -> Self {
        HTuple { shift, scale }
    }
}

/// Orders and parameters of `H^{m,n}_{p,q}`; `p` and `q` are the tuple counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec<F> {
    m: usize,
    n: usize,
    upper: Vec<HTuple<F>>,
    lower: Vec<HTuple<F>>,
}

impl<F: Real> FoxHSpec<F> {
    /// Validates orders, positive scales and contour separability.
    pub fn new(m: usize, n: usize, upper: Vec<HTuple<F>>, lower: Vec<HTuple<F>>) -> Result<Self> {
        if m > lower.len() {
            return Err(invalid("m", format!("m = {m} exceeds q = {}", lower.len())));
        }
        if n > upper.len() {
            return Err(invalid("n", format!("n = {n} exceeds p = {}", upper.len())));
        }
        for t in upper.iter().chain(lower.iter()) {
            if !(t.scale > F::zero()) || !t.scale.is_finite() || !t.shift.is_finite() {
                return Err(invalid(
                    "tuple",
                    format!("({}, {}) needs a finite shift and positive scale", t.shift, t.scale),
                ));
            }
        }
        let spec = FoxHSpec { m, n, upper, lower };
        let (left, right) = spec.strip();
        if !(left < right) {
            return Err(Error::ContourSeparation {
                left: left.to_f64_lossy(),
                right: right.to_f64_lossy(),
            });
        }
        Ok(spec)
    }

    pub fn orders(&self) -> (usize, usize, usize, usize) {
        (self.m, self.n, self.upper.len(), self.lower.len())
    }

    pub fn upper(&self) -> &[HTuple<F>] {
        &self.upper
    }

    pub fn lower(&self) -> &[HTuple<F>] {
        &self.lower
    }

    /// Open strip of admissible crossings: right of every pole of
    /// `Γ(b_j + B_j s)`, `j ≤ m`, and left of every pole of
    /// `Γ(1 - a_j - A_j s)`, `j ≤ n`.
    pub fn strip(&self) -> (F, F) {
        self.kernel().strip()
    }

    pub(crate) fn kernel(&self) -> GammaRatio<F> {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (j, t) in self.lower.iter().enumerate() {
            if j < self.m {
                num.push(GammaFactor {
                    offset: t.shift,
                    slope: t.scale,
                });
            } else {
                den.push(GammaFactor {
                    offset: F::one() - t.shift,
                    slope: -t.scale,
                });
            }
        }
        for (j, t) in self.upper.iter().enumerate() {
            if j < self.n {
                num.push(GammaFactor {
                    offset: F::one() - t.shift,
                    slope: -t.scale,
                });
            } else {
                den.push(GammaFactor {
                    offset: t.shift,
                    slope: t.scale,
                });
            }
        }
        GammaRatio { num, den }
    }

    /// `ln χ(s)` of this spec.
    pub fn log_kernel(&self, s: Complex<F>) -> Complex<F> {
        self.kernel().log_at(s)
    }
}

/// A contour-integral evaluation together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoxHValue<F> {
    pub value: F,
    /// Quadrature error plus the truncation tail estimate.
    pub abs_err: F,
    pub crossing: F,
    pub half_length: F,
    pub evaluations: usize,
}

/// Picks the crossing for `kernel` at argument `ln_z` inside `(left, right)`.
pub(crate) fn place_crossing<F: Real>(kernel: &GammaRatio<F>, ln_z: F, contour: &ContourConfig<F>) -> Result<F> {
    let (left, right) = kernel.strip();
    if !(left < right) {
        return Err(Error::ContourSeparation {
            left: left.to_f64_lossy(),
            right: right.to_f64_lossy(),
        });
    }
    match contour.crossing {
        Crossing::At(c) => {
            if c > left && c < right {
                Ok(c)
            } else {
                Err(Error::CrossingOutsideStrip {
                    crossing: c.to_f64_lossy(),
                    left: left.to_f64_lossy(),
                    right: right.to_f64_lossy(),
                })
            }
        }
        Crossing::Midpoint => {
            let (lo, hi) = shrink(left, right, contour.margin);
            Ok(match (lo.is_finite(), hi.is_finite()) {
                (true, true) => F::lit(0.5) * (lo + hi),
                (true, false) => lo + F::one(),
                (false, true) => hi - F::one(),
                (false, false) => F::zero(),
            })
        }
        Crossing::Auto => {
            let (lo, hi) = shrink(left, right, contour.margin);
            Ok(minimise_on(lo, hi, |c| kernel.ln_abs_real(c) - c * ln_z))
        }
    }
}

fn geometric_breaks<F: Real>(half_length: F) -> [F; 5] {
    let mut out = [F::zero(); 5];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = half_length / F::lit(f64::from(1u32 << (5 - k)));
    }
    out
}

/// Integrates `(1/π) ∫_0^L Re[exp(log_integrand(t))] dt`, growing `L` while
/// the tail at `L` is not negligible.
pub(crate) fn hermitian_line_integral<F: Real>(
    log_integrand: impl Fn(F) -> Complex<F>,
    contour: &ContourConfig<F>,
    what: &'static str,
) -> Result<(F, F, F, usize)> {
    let pi = F::PI();
    // Tiny values keep relative accuracy: the absolute tolerance shrinks
    // with the modulus at the crossing, the scale of the whole integral.
    let abs_tol = contour.abs_tol * log_integrand(F::zero()).re.exp().min(F::one());
    let mut half_length = contour.half_length;
    let tail_at = |l: F| log_integrand(l).re.exp() * l / pi;
    let mut tail = tail_at(half_length);
    let mut doublings = 0;
    while !(tail <= abs_tol * F::lit(0.1)) && doublings < contour.max_doublings {
        half_length = half_length * F::lit(2.0);
        tail = tail_at(half_length);
        doublings += 1;
    }
    if !(tail <= abs_tol * F::lit(0.1)) {
        return Err(Error::NonConvergence {
            what,
            error: tail.to_f64_lossy(),
            tolerance: (abs_tol * F::lit(0.1)).to_f64_lossy(),
        });
    }
    let settings = QuadSettings {
        abs_tol: abs_tol * pi,
        rel_tol: contour.rel_tol,
        max_subdivisions: contour.max_subdivisions,
    };
    let breaks = geometric_breaks(half_length);
    let r = integrate_with_breaks(
        |t: F| {
            let w = log_integrand(t);
            w.re.exp() * w.im.cos()
        },
        F::zero(),
        half_length,
        &breaks,
        &settings,
        what,
    )?;
    Ok((r.value / pi, r.abs_err / pi + tail, half_length, r.evaluations))
}

/// Evaluates `H^{m,n}_{p,q}[z]` for `z > 0`.
pub fn fox_h<F: Real>(spec: &FoxHSpec<F>, z: F, contour: &ContourConfig<F>) -> Result<FoxHValue<F>> {
    if !(z > F::zero()) || !z.is_finite() {
        return Err(invalid(
            "z",
            format!("Fox H argument must be positive and finite, got {z}"),
        ));
    }
    fox_h_scaled(spec, z.ln(), F::zero(), contour)
}

/// Evaluates `e^{ln_scale} H^{m,n}_{p,q}[e^{ln_z}]`.
///
/// The prefactor is folded into the integrand, so tolerances in `contour`
/// apply to the scaled value and neither factor has to be representable
/// on its own.
pub fn fox_h_scaled<F: Real>(
    spec: &FoxHSpec<F>,
    ln_z: F,
    ln_scale: F,
    contour: &ContourConfig<F>,
) -> Result<FoxHValue<F>> {
    contour.validate()?;
    if !ln_z.is_finite() || !ln_scale.is_finite() {
        return Err(invalid(
            "z",
            format!("non-finite log argument {ln_z} or scale {ln_scale}"),
        ));
    }
    let kernel = spec.kernel();
    let c = place_crossing(&kernel, ln_z, contour)?;
    let (value, abs_err, half_length, evaluations) = hermitian_line_integral(
        |t| {
            let s = Complex::new(c, t);
            kernel.log_at(s) - s * ln_z + ln_scale
        },
        contour,
        "Fox H contour integral",
    )?;
    Ok(FoxHValue {
        value,
        abs_err,
        crossing: c,
        half_length,
        evaluations,
    })
}
