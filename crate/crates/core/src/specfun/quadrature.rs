//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `abs_tol` or `rel_tol * |I|`, whichever is looser, or the
//! subdivision budget runs out. Integrands may be real, complex, or any value
//! implementing [`QuadValue`].

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod abscissae (indices 1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values an integrand may return.
pub trait QuadValue<F: Real>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<F, Output = Self> {
    fn zero() -> Self;
    /// Magnitude used for error control.
    fn magnitude(&self) -> F;
}

impl<F: Real> QuadValue<F> for F {
    fn zero() -> Self {
        F::zero()
    }
    fn magnitude(&self) -> F {
        self.abs()
    }
}

impl<F: Real> QuadValue<F> for Complex<F> {
    fn zero() -> Self {
        Complex::new(F::zero(), F::zero())
    }
    fn magnitude(&self) -> F {
        self.norm()
    }
}

/// A value carried together with an auxiliary non-negative quantity that is
/// integrated alongside it but excluded from error control.
///
/// Nested integrations use this to integrate the inner error estimates.
#[derive(Debug, Clone, Copy)]
pub struct Tracked<F, V> {
    pub value: V,
    pub aux: F,
}

impl<F: Real, V: QuadValue<F>> Add for Tracked<F, V> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Tracked {
            value: self.value + o.value,
            aux: self.aux + o.aux,
        }
    }
}

impl<F: Real, V: QuadValue<F>> Sub for Tracked<F, V> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Tracked {
            value: self.value - o.value,
            aux: self.aux - o.aux,
        }
    }
}

impl<F: Real, V: QuadValue<F>> Mul<F> for Tracked<F, V> {
    type Output = Self;
    fn mul(self, k: F) -> Self {
        Tracked {
            value: self.value * k,
            aux: self.aux * k,
        }
    }
}

impl<F: Real, V: QuadValue<F>> QuadValue<F> for Tracked<F, V> {
    fn zero() -> Self {
        Tracked {
            value: V::zero(),
            aux: F::zero(),
        }
    }
    fn magnitude(&self) -> F {
        self.value.magnitude()
    }
}

/// Tolerances and budget of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings<F> {
    pub abs_tol: F,
    pub rel_tol: F,
    pub max_subdivisions: usize,
}

impl<F: Real> Default for QuadSettings<F> {
    fn default() -> Self {
        QuadSettings {
            abs_tol: F::lit(1e-12).max(F::tolerance_floor()),
            rel_tol: F::lit(1e-10).max(F::tolerance_floor()),
            max_subdivisions: 2000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral<F, V> {
    pub value: V,
    pub abs_err: F,
    /// Integral of `|f|`, used to judge the achievable precision.
    pub abs_mass: F,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<F, V> {
    a: F,
    b: F,
    value: V,
    err: F,
    mass: F,
}

struct ByError<F, V>(Segment<F, V>);

impl<F: Real, V> PartialEq for ByError<F, V> {
    fn eq(&self, o: &Self) -> bool {
        self.0.err == o.0.err
    }
}
impl<F: Real, V> Eq for ByError<F, V> {}
impl<F: Real, V> PartialOrd for ByError<F, V> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl<F: Real, V> Ord for ByError<F, V> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        // NaN errors sort as largest so they get refined (and surface) first.
        self.0
            .err
            .partial_cmp(&o.0.err)
            .unwrap_or_else(|| self.0.err.is_nan().cmp(&o.0.err.is_nan()))
    }
}

fn kronrod<F: Real, V: QuadValue<F>>(f: &mut impl FnMut(F) -> V, a: F, b: F) -> Segment<F, V> {
    let half = F::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let fc = f(center);
    let mut res_k = fc * F::lit(WGK[7]);
    let mut res_g = fc * F::lit(WG[3]);
    let mut res_abs = fc.magnitude() * F::lit(WGK[7]);
    let mut samples = [(V::zero(), V::zero()); 7];

    for (j, slot) in samples.iter_mut().enumerate() {
        let dx = half_len * F::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        *slot = (f1, f2);
        let wk = F::lit(WGK[j]);
        res_k = res_k + (f1 + f2) * wk;
        res_abs = res_abs + (f1.magnitude() + f2.magnitude()) * wk;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * F::lit(WG[j / 2]);
        }
    }

    let mean = res_k * half;
    let mut res_asc = (fc - mean).magnitude() * F::lit(WGK[7]);
    for (j, &(f1, f2)) in samples.iter().enumerate() {
        res_asc = res_asc + ((f1 - mean).magnitude() + (f2 - mean).magnitude()) * F::lit(WGK[j]);
    }

    let value = res_k * half_len;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half_len).magnitude();
    if res_asc != F::zero() && err != F::zero() {
        let scale = (F::lit(200.0) * err / res_asc).powf(F::lit(1.5));
        err = if scale < F::one() { res_asc * scale } else { res_asc };
    }
    let eps50 = F::lit(50.0) * F::epsilon();
    if res_abs > F::min_positive_value() / eps50 {
        err = err.max(eps50 * res_abs);
    }
    if !value.magnitude().is_finite() {
        err = F::nan();
    }
    Segment {
        a,
        b,
        value,
        err,
        mass: res_abs,
    }
}

/// Integrates `f` over `[a, b]` starting from the given interior breakpoints.
///
/// Breakpoints must be strictly inside `(a, b)` and increasing; they seed the
/// initial partition and are useful when the integrand is concentrated near
/// one end of a long interval.
pub fn integrate_with_breaks<F, V>(
    mut f: impl FnMut(F) -> V,
    a: F,
    b: F,
    breaks: &[F],
    settings: &QuadSettings<F>,
    what: &'static str,
) -> Result<Integral<F, V>>
where
    F: Real,
    V: QuadValue<F>,
{
    let mut nodes = Vec::with_capacity(breaks.len() + 2);
    nodes.push(a);
    nodes.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    nodes.push(b);

    let mut heap = BinaryHeap::new();
    let mut total = V::zero();
    let mut total_err = F::zero();
    let mut total_mass = F::zero();
    let mut evaluations = 0usize;
    for w in nodes.windows(2) {
        let seg = kronrod(&mut f, w[0], w[1]);
        evaluations += 15;
        total = total + seg.value;
        total_err = total_err + seg.err;
        total_mass = total_mass + seg.mass;
        heap.push(ByError(seg));
    }

    let mut subdivisions = heap.len();
    loop {
        if total_err.is_nan() {
            return Err(Error::NonConvergence {
                what,
                error: f64::NAN,
                tolerance: settings.abs_tol.to_f64_lossy(),
            });
        }
        let roundoff = F::lit(50.0) * F::epsilon() * total_mass;
        let tolerance = settings.abs_tol.max(settings.rel_tol * total.magnitude()).max(roundoff);
        if total_err <= tolerance {
            return Ok(Integral {
                value: total,
                abs_err: total_err,
                abs_mass: total_mass,
                evaluations,
            });
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::NonConvergence {
                what,
                error: total_err.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
        let Some(ByError(worst)) = heap.pop() else {
            unreachable!("heap holds every segment");
        };
        let mid = F::lit(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval collapsed to adjacent floats; nothing left to refine.
            return Err(Error::NonConvergence {
                what,
                error: total_err.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        evaluations += 30;
        total = total - worst.value + left.value + right.value;
        total_err = total_err - worst.err + left.err + right.err;
        total_mass = total_mass - worst.mass + left.mass + right.mass;
        // Guard against drift of the running sums.
        if total_err < F::zero() {
            total_err = F::zero();
        }
        heap.push(ByError(left));
        heap.push(ByError(right));
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            total = V::zero();
            total_err = F::zero();
            total_mass = F::zero();
            for s in heap.iter() {
                total = total + s.0.value;
                total_err = total_err + s.0.err;
                total_mass = total_mass + s.0.mass;
            }
        }
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F, V>(
    f: impl FnMut(F) -> V,
    a: F,
    b: F,
    settings: &QuadSettings<F>,
    what: &'static str,
) -> Result<Integral<F, V>>
where
    F: Real,
    V: QuadValue<F>,
{
    integrate_with_breaks(f, a, b, &[], settings, what)
}
