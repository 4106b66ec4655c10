//! Bivariate Fox H-function as an iterated double Mellin–Barnes integral.
//!
//! ```text
//! H[z1, z2] = 1/(2πi)^2 ∫∫ Ψ(s1, s2) χ1(s1) χ2(s2) z1^{-s1} z2^{-s2} ds1 ds2
//! Ψ(s1, s2) = Π_{j≤n} Γ(1 - a_j - α_j s1 - β_j s2)
//!             / (Π_{j>n} Γ(a_j + α_j s1 + β_j s2) Π_j Γ(1 - b_j - γ_j s1 - δ_j s2))
//! ```
//!
//! `χ1`, `χ2` are the kernels of two univariate [`FoxHSpec`] blocks. The
//! coupling factor `Ψ` uses the same sign convention as the univariate
//! kernel, so joint tuples with negative scales enter unchanged.

use num_complex::Complex;

use super::contour::{minimise_on, shrink, ContourConfig, Crossing, GammaRatio};
use super::foxh::FoxHSpec;
use super::gamma::log_gamma_unchecked;
use super::quadrature::{integrate_with_breaks, QuadSettings, Tracked};
use crate::error::{invalid, Error, Result};
use crate::Real;

/// Joint tuple `(a_j; α_j, β_j)` coupling both integration variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTuple<F> {
    pub shift: F,
    pub scale1: F,
    pub scale2: F,
}

impl<F> JointTuple<F> {
    pub const fn new(shift: F, scale1: F, scale2: F) -> Self {
        JointTuple { shift, scale1, scale2 }
    }
}

/// `H^{0,n:m1,n1;m2,n2}_{p,q:p1,q1;p2,q2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateFoxHSpec<F> {
    n: usize,
    joint_upper: Vec<JointTuple<F>>,
    joint_lower: Vec<JointTuple<F>>,
    first: FoxHSpec<F>,
    second: FoxHSpec<F>,
}

#[derive(Debug, Clone, Copy)]
struct JointFactor<F> {
    offset: F,
    slope1: F,
    slope2: F,
}

impl<F: Real> JointFactor<F> {
    #[inline]
    fn arg(&self, s1: Complex<F>, s2: Complex<F>) -> Complex<F> {
        s1 * self.slope1 + s2 * self.slope2 + self.offset
    }

    #[inline]
    fn slack(&self, c1: F, c2: F) -> F {
        let norm = (self.slope1 * self.slope1 + self.slope2 * self.slope2).sqrt();
        (self.offset + self.slope1 * c1 + self.slope2 * c2) / norm
    }
}

struct JointKernel<F> {
    num: Vec<JointFactor<F>>,
    den: Vec<JointFactor<F>>,
}

impl<F: Real> JointKernel<F> {
    fn log_at(&self, s1: Complex<F>, s2: Complex<F>) -> Complex<F> {
        let mut acc = Complex::new(F::zero(), F::zero());
        for g in &self.num {
            acc = acc + log_gamma_unchecked(g.arg(s1, s2));
        }
        for g in &self.den {
            acc = acc - log_gamma_unchecked(g.arg(s1, s2));
        }
        acc
    }

    fn ln_abs_real(&self, c1: F, c2: F) -> F {
        let c1 = Complex::new(c1, F::zero());
        let c2 = Complex::new(c2, F::zero());
        self.log_at(c1, c2).re
    }
}

impl<F: Real> BivariateFoxHSpec<F> {
    /// `n` counts the leading joint upper tuples that enter the numerator.
    pub fn new(
        n: usize,
        joint_upper: Vec<JointTuple<F>>,
        joint_lower: Vec<JointTuple<F>>,
        first: FoxHSpec<F>,
        second: FoxHSpec<F>,
    ) -> Result<Self> {
        if n > joint_upper.len() {
            return Err(invalid("n", format!("n = {n} exceeds joint p = {}", joint_upper.len())));
        }
        for t in joint_upper.iter().chain(joint_lower.iter()) {
            let finite = t.shift.is_finite() && t.scale1.is_finite() && t.scale2.is_finite();
            if !finite || (t.scale1 == F::zero() && t.scale2 == F::zero()) {
                return Err(invalid("joint tuple", "needs finite entries and a non-zero scale"));
            }
        }
        Ok(BivariateFoxHSpec {
            n,
            joint_upper,
            joint_lower,
            first,
            second,
        })
    }

    pub fn joint_upper(&self) -> &[JointTuple<F>] {
        &self.joint_upper
    }

    pub fn joint_lower(&self) -> &[JointTuple<F>] {
        &self.joint_lower
    }

    pub fn blocks(&self) -> (&FoxHSpec<F>, &FoxHSpec<F>) {
        (&self.first, &self.second)
    }

    /// Same function with the roles of the two variables exchanged.
    pub fn swapped(&self) -> Self {
        let swap = |t: &JointTuple<F>| JointTuple::new(t.shift, t.scale2, t.scale1);
        BivariateFoxHSpec {
            n: self.n,
            joint_upper: self.joint_upper.iter().map(swap).collect(),
            joint_lower: self.joint_lower.iter().map(swap).collect(),
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    fn joint_kernel(&self) -> JointKernel<F> {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (j, t) in self.joint_upper.iter().enumerate() {
            if j < self.n {
                num.push(JointFactor {
                    offset: F::one() - t.shift,
                    slope1: -t.scale1,
                    slope2: -t.scale2,
                });
            } else {
                den.push(JointFactor {
                    offset: t.shift,
                    slope1: t.scale1,
                    slope2: t.scale2,
                });
            }
        }
        for t in &self.joint_lower {
            den.push(JointFactor {
                offset: F::one() - t.shift,
                slope1: -t.scale1,
                slope2: -t.scale2,
            });
        }
        JointKernel { num, den }
    }
}

/// Result of a bivariate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateValue<F> {
    pub value: F,
    /// Outer quadrature error plus the integrated inner errors and tails.
    pub abs_err: F,
    pub crossings: (F, F),
    pub half_lengths: (F, F),
}

struct Placement<'a, F> {
    k1: &'a GammaRatio<F>,
    k2: &'a GammaRatio<F>,
    joint: &'a JointKernel<F>,
    ln_z1: F,
    ln_z2: F,
    margin: F,
}

impl<F: Real> Placement<'_, F> {
    fn objective(&self, c1: F, c2: F) -> F {
        self.k1.ln_abs_real(c1) + self.k2.ln_abs_real(c2) + self.joint.ln_abs_real(c1, c2)
            - c1 * self.ln_z1
            - c2 * self.ln_z2
    }

    fn feasible(&self, c1: F, c2: F) -> bool {
        let (l1, r1) = self.k1.strip();
        let (l2, r2) = self.k2.strip();
        c1 > l1 && c1 < r1 && c2 > l2 && c2 < r2 && self.joint.num.iter().all(|g| g.slack(c1, c2) > F::zero())
    }

    fn min_slack(&self, c1: F, c2: F) -> F {
        let (l1, r1) = self.k1.strip();
        let (l2, r2) = self.k2.strip();
        let mut s = (c1 - l1).min(r1 - c1).min(c2 - l2).min(r2 - c2);
        for g in &self.joint.num {
            s = s.min(g.slack(c1, c2));
        }
        s
    }

    // Interval of c1 (given c2) or c2 (given c1) that keeps every constraint
    // satisfied with the margin.
    fn line_interval(&self, fixed: F, vary_first: bool) -> (F, F) {
        let (mut lo, mut hi) = if vary_first { self.k1.strip() } else { self.k2.strip() };
        for g in &self.joint.num {
            let (k, rest) = if vary_first {
                (g.slope1, g.offset + g.slope2 * fixed)
            } else {
                (g.slope2, g.offset + g.slope1 * fixed)
            };
            if k > F::zero() {
                lo = lo.max(-rest / k);
            } else if k < F::zero() {
                hi = hi.min(-rest / k);
            } else if rest <= F::zero() {
                return (F::nan(), F::nan());
            }
        }
        shrink(lo, hi, self.margin)
    }

    fn bounding_box(&self) -> ((F, F), (F, F)) {
        let clip = |(l, r): (F, F)| {
            let ten = F::lit(10.0);
            match (l.is_finite(), r.is_finite()) {
                (true, true) => (l, r),
                (true, false) => (l, l + ten),
                (false, true) => (r - ten, r),
                (false, false) => (-ten, ten),
            }
        };
        (clip(self.k1.strip()), clip(self.k2.strip()))
    }

    fn place(&self, fix1: Option<F>, fix2: Option<F>, centred: bool) -> Result<(F, F)> {
        if let (Some(c1), Some(c2)) = (fix1, fix2) {
            return if self.feasible(c1, c2) {
                Ok((c1, c2))
            } else {
                Err(Error::PoleCollision)
            };
        }
        let ((a1, b1), (a2, b2)) = self.bounding_box();
        const GRID: usize = 40;
        let mut best: Option<(F, F, F)> = None;
        for i in 1..GRID {
            let c1 = fix1.unwrap_or(a1 + (b1 - a1) * F::from_usize_lossy(i) / F::from_usize_lossy(GRID));
            for j in 1..GRID {
                let c2 = fix2.unwrap_or(a2 + (b2 - a2) * F::from_usize_lossy(j) / F::from_usize_lossy(GRID));
                if !self.feasible(c1, c2) || self.min_slack(c1, c2) < self.margin {
                    continue;
                }
                let score = if centred {
                    -self.min_slack(c1, c2)
                } else {
                    self.objective(c1, c2)
                };
                if score.is_finite() && best.is_none_or(|b| score < b.2) {
                    best = Some((c1, c2, score));
                }
            }
        }
        let Some((mut c1, mut c2, _)) = best else {
            return Err(Error::PoleCollision);
        };
        if centred {
            return Ok((c1, c2));
        }
        for _ in 0..8 {
            if fix1.is_none() {
                let (lo, hi) = self.line_interval(c2, true);
                if lo < hi {
                    c1 = minimise_on(lo, hi, |x| self.objective(x, c2));
                }
            }
            if fix2.is_none() {
                let (lo, hi) = self.line_interval(c1, false);
                if lo < hi {
                    c2 = minimise_on(lo, hi, |y| self.objective(c1, y));
                }
            }
        }
        if !self.feasible(c1, c2) {
            return Err(Error::PoleCollision);
        }
        Ok((c1, c2))
    }
}

fn symmetric_breaks<F: Real>(l: F) -> Vec<F> {
    let mut b = vec![F::zero()];
    for k in 1..=5 {
        let x = l / F::lit(f64::from(1u32 << k));
        b.push(x);
        b.push(-x);
    }
    b.sort_by(|a, b| a.partial_cmp(b).expect("finite breaks"));
    b
}

/// Evaluates the bivariate H-function at `(z1, z2)`, both positive.
///
/// `contour1` governs the outer (`s1`) integral and `contour2` the inner
/// (`s2`) one. Fails with [`Error::PoleCollision`] when no pair of crossings
/// keeps every numerator gamma argument in the right half-plane.
pub fn fox_h_bivariate<F: Real>(
    spec: &BivariateFoxHSpec<F>,
    z1: F,
    z2: F,
    contour1: &ContourConfig<F>,
    contour2: &ContourConfig<F>,
) -> Result<BivariateValue<F>> {
    for (name, z) in [("z1", z1), ("z2", z2)] {
        if !(z > F::zero()) || !z.is_finite() {
            return Err(invalid(name, format!("argument must be positive and finite, got {z}")));
        }
    }
    fox_h_bivariate_scaled(spec, z1.ln(), z2.ln(), F::zero(), contour1, contour2)
}

/// `e^{ln_scale} H[e^{ln_z1}, e^{ln_z2}]`, with tolerances applying to the
/// scaled value.
pub fn fox_h_bivariate_scaled<F: Real>(
    spec: &BivariateFoxHSpec<F>,
    ln_z1: F,
    ln_z2: F,
    ln_scale: F,
    contour1: &ContourConfig<F>,
    contour2: &ContourConfig<F>,
) -> Result<BivariateValue<F>> {
    contour1.validate()?;
    contour2.validate()?;
    if !ln_z1.is_finite() || !ln_z2.is_finite() || !ln_scale.is_finite() {
        return Err(invalid("z", "non-finite log argument or scale"));
    }
    let k1 = spec.first.kernel();
    let k2 = spec.second.kernel();
    let joint = spec.joint_kernel();
    let placement = Placement {
        k1: &k1,
        k2: &k2,
        joint: &joint,
        ln_z1,
        ln_z2,
        margin: contour1.margin.max(contour2.margin),
    };
    let fixed = |c: &Crossing<F>| if let Crossing::At(v) = c { Some(*v) } else { None };
    let centred = matches!(contour1.crossing, Crossing::Midpoint) && matches!(contour2.crossing, Crossing::Midpoint);
    let (c1, c2) = placement.place(fixed(&contour1.crossing), fixed(&contour2.crossing), centred)?;

    let log_g = |t1: F, t2: F| {
        let s1 = Complex::new(c1, t1);
        let s2 = Complex::new(c2, t2);
        k1.log_at(s1) + k2.log_at(s2) + joint.log_at(s1, s2) - s1 * ln_z1 - s2 * ln_z2 + ln_scale
    };
    // Full-range result = (2 / (2π)^2) Re ∫_0^∞ dt1 ∫_{-∞}^{∞} dt2 G.
    let norm = F::lit(2.0) / (F::TAU() * F::TAU());

    let sample_max = |f: &dyn Fn(F) -> F, l: F| {
        (0..=32).fold(F::zero(), |m, i| {
            let t = -l + l * F::lit(2.0) * F::from_usize_lossy(i) / F::lit(32.0);
            m.max(f(t))
        })
    };
    let grow = |contour: &ContourConfig<F>, tail: &dyn Fn(F) -> F| -> Result<(F, F)> {
        let mut l = contour.half_length;
        let mut est = tail(l);
        let mut k = 0;
        while !(est <= contour.abs_tol * F::lit(0.1)) && k < contour.max_doublings {
            l = l * F::lit(2.0);
            est = tail(l);
            k += 1;
        }
        if !(est <= contour.abs_tol * F::lit(0.1)) {
            return Err(Error::NonConvergence {
                what: "bivariate Fox H truncation",
                error: est.to_f64_lossy(),
                tolerance: (contour.abs_tol * F::lit(0.1)).to_f64_lossy(),
            });
        }
        Ok((l, est))
    };

    let l2_probe = contour2.half_length;
    let (l1, tail1) = grow(contour1, &|l1: F| {
        let peak = sample_max(&|t2| log_g(l1, t2).re.exp(), l2_probe);
        norm * peak * l1 * l2_probe * F::lit(2.0)
    })?;
    let (l2, tail2) = grow(contour2, &|l2: F| {
        let peak = sample_max(
            &|t1| log_g(t1.abs(), l2).re.exp().max(log_g(t1.abs(), -l2).re.exp()),
            l1,
        );
        norm * peak * l2 * l1
    })?;

    let inner_settings = QuadSettings {
        abs_tol: contour2.abs_tol / norm,
        rel_tol: contour2.rel_tol,
        max_subdivisions: contour2.max_subdivisions,
    };
    let outer_settings = QuadSettings {
        abs_tol: contour1.abs_tol / norm,
        rel_tol: contour1.rel_tol,
        max_subdivisions: contour1.max_subdivisions,
    };
    let inner_breaks = symmetric_breaks(l2);
    let outer_breaks: Vec<F> = (1..=5).map(|k| l1 / F::lit(f64::from(1u32 << k))).rev().collect();

    // Inner failures are carried out of the closure and reported after the
    // outer loop finishes.
    let mut inner_failure: Option<Error> = None;
    let outer = integrate_with_breaks(
        |t1: F| {
            if inner_failure.is_some() {
                return Tracked {
                    value: F::zero(),
                    aux: F::zero(),
                };
            }
            let r = integrate_with_breaks(
                |t2: F| {
                    let w = log_g(t1, t2);
                    Complex::from_polar(w.re.exp(), w.im)
                },
                -l2,
                l2,
                &inner_breaks,
                &inner_settings,
                "bivariate Fox H inner integral",
            );
            match r {
                Ok(v) => Tracked {
                    value: v.value.re,
                    aux: v.abs_err,
                },
                Err(e) => {
                    inner_failure = Some(e);
                    Tracked {
                        value: F::zero(),
                        aux: F::zero(),
                    }
                }
            }
        },
        F::zero(),
        l1,
        &outer_breaks,
        &outer_settings,
        "bivariate Fox H outer integral",
    );
    if let Some(e) = inner_failure {
        return Err(e);
    }
    let outer = outer?;
    Ok(BivariateValue {
        value: norm * outer.value.value,
        abs_err: norm * (outer.abs_err + outer.value.aux) + tail1 + tail2,
        crossings: (c1, c2),
        half_lengths: (l1, l2),
    })
}
