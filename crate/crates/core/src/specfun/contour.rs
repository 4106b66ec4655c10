//! Contour configuration and placement for Mellin–Barnes integrals.

use num_complex::Complex;

use super::gamma::log_gamma_unchecked;
use crate::error::{invalid, Result};
use crate::Real;

/// Where the vertical contour `Re(s) = c` crosses the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing<F> {
    /// Minimise the integrand magnitude on the real axis inside the strip.
    ///
    /// This is the saddle-point choice: for very small or very large
    /// arguments it moves the crossing toward the dominant pole family and
    /// avoids the cancellation a centred contour suffers.
    Auto,
    /// Centre of the admissible strip.
    Midpoint,
    /// Fixed crossing; rejected if it does not separate the pole families.
    At(F),
}

/// Placement, truncation and tolerances of one contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig<F> {
    pub crossing: Crossing<F>,
    /// Initial half-length `L` of the truncated imaginary extent.
    pub half_length: F,
    /// How many times `L` may be doubled when the tail is not negligible.
    pub max_doublings: u32,
    pub max_subdivisions: usize,
    pub abs_tol: F,
    pub rel_tol: F,
    /// Distance kept from the nearest pole of either family.
    pub margin: F,
}

impl<F: Real> Default for ContourConfig<F> {
    fn default() -> Self {
        ContourConfig {
            crossing: Crossing::Auto,
            half_length: F::lit(40.0),
            max_doublings: 4,
            max_subdivisions: 2000,
            abs_tol: F::lit(1e-12).max(F::tolerance_floor()),
            rel_tol: F::lit(1e-10).max(F::tolerance_floor()),
            margin: F::lit(1e-3),
        }
    }
}

impl<F: Real> ContourConfig<F> {
    pub fn with_crossing(mut self, crossing: Crossing<F>) -> Self {
        self.crossing = crossing;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: F, rel_tol: F) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_length > F::zero()) || !self.half_length.is_finite() {
            return Err(invalid("half_length", "must be positive and finite"));
        }
        if !(self.abs_tol > F::zero()) || !(self.rel_tol > F::zero()) {
            return Err(invalid("tolerance", "abs_tol and rel_tol must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions", "must be at least 1"));
        }
        if !(self.margin >= F::zero()) {
            return Err(invalid("margin", "must be non-negative"));
        }
        if let Crossing::At(c) = self.crossing {
            if !c.is_finite() {
                return Err(invalid("crossing", "must be finite"));
            }
        }
        Ok(())
    }
}

/// `Γ(offset + slope · s)` appearing in a Mellin–Barnes kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GammaFactor<F> {
    pub offset: F,
    pub slope: F,
}

impl<F: Real> GammaFactor<F> {
    #[inline]
    pub fn log_at(&self, s: Complex<F>) -> Complex<F> {
        log_gamma_unchecked(s * self.slope + self.offset)
    }

    #[inline]
    pub fn ln_abs_real(&self, c: F) -> F {
        log_gamma_unchecked(Complex::new(self.offset + self.slope * c, F::zero())).re
    }

    /// Bound on `c` keeping `offset + slope c > 0`, as `(is_lower_bound, value)`.
    pub fn bound(&self) -> (bool, F) {
        (self.slope > F::zero(), -self.offset / self.slope)
    }
}

/// Ratio of gamma products `Π Γ(num) / Π Γ(den)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GammaRatio<F> {
    pub num: Vec<GammaFactor<F>>,
    pub den: Vec<GammaFactor<F>>,
}

impl<F: Real> GammaRatio<F> {
    #[inline]
    pub fn log_at(&self, s: Complex<F>) -> Complex<F> {
        let mut acc = Complex::new(F::zero(), F::zero());
        for g in &self.num {
            acc = acc + g.log_at(s);
        }
        for g in &self.den {
            acc = acc - g.log_at(s);
        }
        acc
    }

    pub fn ln_abs_real(&self, c: F) -> F {
        let mut acc = F::zero();
        for g in &self.num {
            acc = acc + g.ln_abs_real(c);
        }
        for g in &self.den {
            acc = acc - g.ln_abs_real(c);
        }
        acc
    }

    /// Open interval on which every numerator gamma has a positive argument.
    pub fn strip(&self) -> (F, F) {
        let mut left = F::neg_infinity();
        let mut right = F::infinity();
        for g in &self.num {
            let (lower, v) = g.bound();
            if lower {
                left = left.max(v);
            } else {
                right = right.min(v);
            }
        }
        (left, right)
    }
}

/// Shrinks an open interval by `margin` on each finite side, capping the
/// margin at a quarter of the width so narrow strips stay usable.
pub(crate) fn shrink<F: Real>(left: F, right: F, margin: F) -> (F, F) {
    let width = right - left;
    let d = if width.is_finite() {
        margin.min(width * F::lit(0.25))
    } else {
        margin
    };
    (left + d, right - d)
}

/// Minimises a one-dimensional objective on `[lo, hi]`, where either side
/// may be infinite. Used to place contours at the real-axis saddle.
pub(crate) fn minimise_on<F: Real>(lo: F, hi: F, objective: impl Fn(F) -> F) -> F {
    let guarded = |c: F| {
        let v = objective(c);
        if v.is_nan() || v == F::neg_infinity() {
            F::infinity()
        } else {
            v
        }
    };
    let (lo, hi) = bracket_infinite(lo, hi, &guarded);

    const SCAN: usize = 32;
    let step = (hi - lo) / F::from_usize_lossy(SCAN);
    let mut best = 0usize;
    let mut best_val = F::infinity();
    for i in 0..=SCAN {
        let c = lo + step * F::from_usize_lossy(i);
        let v = guarded(c);
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    let mut a = lo + step * F::from_usize_lossy(best.saturating_sub(1));
    let mut b = lo + step * F::from_usize_lossy((best + 1).min(SCAN));
    if !best_val.is_finite() {
        return F::lit(0.5) * (lo + hi);
    }

    let inv_phi = F::lit(0.618_033_988_749_894_8);
    let mut x1 = b - (b - a) * inv_phi;
    let mut x2 = a + (b - a) * inv_phi;
    let mut f1 = guarded(x1);
    let mut f2 = guarded(x2);
    for _ in 0..60 {
        if (b - a).abs() <= F::lit(1e-6) * (F::one() + a.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * inv_phi;
            f1 = guarded(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * inv_phi;
            f2 = guarded(x2);
        }
    }
    let c = F::lit(0.5) * (a + b);
    if guarded(c) <= best_val {
        c
    } else {
        lo + step * F::from_usize_lossy(best)
    }
}

// Replaces an infinite side by a finite one far enough out that the
// objective has stopped decreasing.
fn bracket_infinite<F: Real>(lo: F, hi: F, objective: &impl Fn(F) -> F) -> (F, F) {
    let limit = F::lit(1e3);
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => {
            let mut span = F::lit(2.0);
            while span < limit && objective(lo + span) < objective(lo + span * F::lit(0.5)) {
                span = span * F::lit(2.0);
            }
            (lo, lo + span)
        }
        (false, true) => {
            let mut span = F::lit(2.0);
            while span < limit && objective(hi - span) < objective(hi - span * F::lit(0.5)) {
                span = span * F::lit(2.0);
            }
            (hi - span, hi)
        }
        (false, false) => {
            let (_, b) = bracket_infinite(F::zero(), F::infinity(), objective);
            let (a, _) = bracket_infinite(F::neg_infinity(), F::zero(), objective);
            (a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimiser_finds_interior_minimum() {
        let c = minimise_on(-1.0f64, 3.0, |x| (x - 1.3).powi(2));
        assert!((c - 1.3).abs() < 1e-5);
    }

    #[test]
    fn minimiser_handles_open_right_side() {
        // lnΓ(c) - c ln 20 has its minimum where ψ(c) = ln 20, near c ≈ 20.5.
        let c = minimise_on(1e-3f64, f64::INFINITY, |x| {
            log_gamma_unchecked(Complex::new(x, 0.0)).re - x * 20f64.ln()
        });
        assert!((c - 20.5).abs() < 0.5, "{c}");
    }

    #[test]
    fn shrink_respects_narrow_strips() {
        let (a, b) = shrink(0.0f64, 1e-3, 1e-3);
        assert!(a > 0.0 && b < 1e-3 && a < b);
        let (a, b) = shrink(-1.0f64, f64::INFINITY, 1e-3);
        assert_eq!(a, -0.999);
        assert!(b.is_infinite());
    }

    #[test]
    fn strip_from_factors() {
        // Γ(0.5 + s) Γ(2 - s) → strip (-0.5, 2)
        let r = GammaRatio {
            num: vec![
                GammaFactor {
                    offset: 0.5f64,
                    slope: 1.0,
                },
                GammaFactor {
                    offset: 2.0,
                    slope: -1.0,
                },
            ],
            den: vec![],
        };
        assert_eq!(r.strip(), (-0.5, 2.0));
    }
}
