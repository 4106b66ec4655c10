//! Principal-branch complex log-gamma.
//!
//! Stirling series away from the origin, a Taylor expansion around the zeros
//! at 1 and 2, upward recurrence in the remaining right half-plane and the
//! reflection formula for `Re(s) < 0`. The branch matches the analytic
//! continuation of `ln Γ` from the positive real axis, with the cut along the
//! negative real axis.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Real;

const STIRLING_X: f64 = 7.0;
const STIRLING_Y: f64 = 7.0;
const TAYLOR_RADIUS: f64 = 0.2;

// Bernoulli terms B_{2k} / (2k (2k-1)) for k = 8, 7, ..., 1.
const STIRLING_COEFFS: [f64; 8] = [
    -2.955_065_359_477_124_183e-2,
    6.410_256_410_256_410_256_4e-3,
    -1.917_526_917_526_917_526_9e-3,
    8.417_508_417_508_417_508_4e-4,
    -5.952_380_952_380_952_381e-4,
    7.936_507_936_507_936_507_9e-4,
    -2.777_777_777_777_777_777_8e-3,
    8.333_333_333_333_333_333_3e-2,
];

// (-1)^k zeta(k) / k for k = 23, 22, ..., 2, followed by -euler_gamma (k = 1).
const TAYLOR_COEFFS: [f64; 23] = [
    -4.347_826_605_304_025_936_1e-2,
    4.545_455_629_320_466_944_2e-2,
    -4.761_907_033_014_222_799_1e-2,
    5.000_004_769_810_169_364e-2,
    -5.263_167_937_961_666_073_4e-2,
    5.555_576_762_740_361_110_2e-2,
    -5.882_397_865_868_458_233_9e-2,
    6.250_095_514_121_304_074_2e-2,
    -6.666_870_588_242_046_803_3e-2,
    7.143_294_629_536_133_605_9e-2,
    -7.693_251_641_135_219_147_3e-2,
    8.335_384_054_610_900_402_5e-2,
    -9.095_401_714_582_904_223_3e-2,
    1.000_994_575_127_818_085_3e-1,
    -1.113_342_658_695_646_904_9e-1,
    1.255_096_695_247_430_424_2e-1,
    -1.440_498_967_688_461_181_2e-1,
    1.695_571_769_974_081_899_5e-1,
    -2.073_855_510_286_739_852_7e-1,
    2.705_808_084_277_845_478_8e-1,
    -4.006_856_343_865_314_284_7e-1,
    8.224_670_334_241_132_182_4e-1,
    -5.772_156_649_015_328_606_1e-1,
];

/// Principal branch of `ln Γ(s)`.
///
/// Fails with [`Error::GammaPole`] at the non-positive integers.
pub fn log_gamma_complex<F: Real>(s: Complex<F>) -> Result<Complex<F>> {
    if s.re <= F::zero() && s.im == F::zero() && s.re == s.re.floor() {
        return Err(Error::GammaPole(s.re.to_f64_lossy()));
    }
    Ok(log_gamma_unchecked(s))
}

/// `ln |Γ(x)|` for real `x`, failing at the poles.
pub fn ln_gamma<F: Real>(x: F) -> Result<F> {
    log_gamma_complex(Complex::new(x, F::zero())).map(|v| v.re)
}

/// `Γ(x)` for real positive `x`, through the logarithm.
pub fn gamma<F: Real>(x: F) -> Result<F> {
    if x <= F::zero() {
        return Err(crate::error::invalid(
            "x",
            "gamma() is only provided for positive arguments",
        ));
    }
    ln_gamma(x).map(F::exp)
}

pub(crate) fn log_gamma_unchecked<F: Real>(z: Complex<F>) -> Complex<F> {
    let seven_x = F::lit(STIRLING_X);
    let seven_y = F::lit(STIRLING_Y);
    let one = Complex::new(F::one(), F::zero());
    let radius = F::lit(TAYLOR_RADIUS);

    if z.re > seven_x || z.im.abs() > seven_y {
        return stirling(z);
    }
    if (z - one).norm() < radius {
        return taylor(z);
    }
    if (z - one - one).norm() < radius {
        return (z - one).ln() + taylor(z - one);
    }
    if z.re < F::zero() {
        let two_pi = F::TAU();
        let k = (F::lit(0.5) * z.re + F::lit(0.25)).floor();
        let branch = if z.im.is_sign_negative() {
            -two_pi * k
        } else {
            two_pi * k
        };
        let head = Complex::new(F::PI().ln(), branch);
        let mut sin = sin_pi(z);
        if sin.im == F::zero() {
            // On the cut the side is taken from Im(z), as the branch term expects.
            sin.im = if z.im.is_sign_negative() { -F::zero() } else { F::zero() };
        }
        return head - sin.ln() - log_gamma_unchecked(one - z);
    }
    if z.im.is_sign_negative() {
        recurrence(z.conj()).conj()
    } else {
        recurrence(z)
    }
}

fn stirling<F: Real>(z: Complex<F>) -> Complex<F> {
    let rz = z.inv();
    let rzz = rz / z;
    let mut acc = Complex::new(F::lit(STIRLING_COEFFS[0]), F::zero());
    for &c in &STIRLING_COEFFS[1..] {
        acc = acc * rzz + F::lit(c);
    }
    let half_log_two_pi = F::lit(0.918_938_533_204_672_741_780_329_736_4);
    (z - F::lit(0.5)) * z.ln() - z + half_log_two_pi + rz * acc
}

fn taylor<F: Real>(z: Complex<F>) -> Complex<F> {
    let w = z - F::one();
    let mut acc = Complex::new(F::lit(TAYLOR_COEFFS[0]), F::zero());
    for &c in &TAYLOR_COEFFS[1..] {
        acc = acc * w + F::lit(c);
    }
    w * acc
}

// Valid for Im(z) >= 0 and Re(z) <= STIRLING_X: shifts z past the Stirling
// threshold while tracking how often the running product crosses the cut.
fn recurrence<F: Real>(z: Complex<F>) -> Complex<F> {
    let mut sign_flips = 0u32;
    let mut was_negative = false;
    let mut shift_prod = z;
    let mut w = z + F::one();
    while w.re <= F::lit(STIRLING_X) {
        shift_prod = shift_prod * w;
        let negative = shift_prod.im.is_sign_negative();
        if negative && !was_negative {
            sign_flips += 1;
        }
        was_negative = negative;
        w = w + F::one();
    }
    let correction = Complex::new(F::zero(), F::TAU() * F::lit(f64::from(sign_flips)));
    stirling(w) - shift_prod.ln() - correction
}

fn sin_pi<F: Real>(z: Complex<F>) -> Complex<F> {
    let pi_y = F::PI() * z.im;
    Complex::new(sin_pi_real(z.re) * pi_y.cosh(), cos_pi_real(z.re) * pi_y.sinh())
}

fn sin_pi_real<F: Real>(x: F) -> F {
    let two = F::lit(2.0);
    let r = x % two;
    let r = if r < F::zero() { r + two } else { r };
    let half = F::lit(0.5);
    if r <= half {
        (F::PI() * r).sin()
    } else if r <= F::lit(1.5) {
        (F::PI() * (F::one() - r)).sin()
    } else {
        (F::PI() * (r - two)).sin()
    }
}

fn cos_pi_real<F: Real>(x: F) -> F {
    sin_pi_real(x + F::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lg(re: f64, im: f64) -> Complex<f64> {
        log_gamma_complex(Complex::new(re, im)).unwrap()
    }

    fn close(got: Complex<f64>, want: (f64, f64), rel: f64) {
        let want = Complex::new(want.0, want.1);
        let err = (got - want).norm() / want.norm().max(1.0);
        assert!(err <= rel, "got {got}, want {want}, err {err:e}");
    }

    #[test]
    fn values_at_one_and_half() {
        assert!(lg(1.0, 0.0).norm() < 1e-16);
        assert!(lg(2.0, 0.0).norm() < 1e-16);
        let half = lg(0.5, 0.0);
        assert!((half.re - 0.572_364_942_924_700_087_1).abs() < 1e-14);
        assert_eq!(half.im, 0.0);
    }

    // Reference values: 40-digit evaluations of the principal branch.
    #[test]
    fn complex_reference_values() {
        close(lg(3.0, 4.0), (-1.756_626_784_603_784_1, 4.742_664_438_034_657_9), 1e-14);
        close(
            lg(-2.5, 0.3),
            (-0.432_088_892_613_201_92, -9.093_345_421_289_741_5),
            1e-13,
        );
        close(
            lg(0.2, -30.0),
            (-47.225_301_594_789_441, -71.564_571_416_837_277),
            1e-14,
        );
        close(
            lg(500.0, 800.0),
            (2_112.480_817_430_273_6, 5_185.183_028_996_903_8),
            1e-14,
        );
        close(
            lg(-300.5, 2.0),
            (-1_422.197_657_060_078, -934.205_152_564_942_47),
            1e-13,
        );
    }

    #[test]
    fn recurrence_identity_across_the_plane() {
        for &(re, im) in &[(0.3, 0.1), (-3.7, 1.2), (4.5, -6.9), (0.01, 0.0), (-0.5, -0.5)] {
            let z = Complex::new(re, im);
            let lhs = log_gamma_unchecked(z + 1.0);
            let rhs = log_gamma_unchecked(z) + z.ln();
            let d = lhs - rhs;
            // Equal modulo 2πi.
            let k = (d.im / std::f64::consts::TAU).round();
            assert!(d.re.abs() < 1e-13, "{z}: {d}");
            assert!((d.im - k * std::f64::consts::TAU).abs() < 1e-12, "{z}: {d}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let a = lg(1.3, 2.7);
        let b = lg(1.3, -2.7);
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    fn poles_are_errors() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(
                log_gamma_complex(Complex::new(x, 0.0)),
                Err(Error::GammaPole(_))
            ));
        }
        assert!(log_gamma_complex(Complex::new(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn real_gamma_matches_factorials() {
        for n in 1..20u32 {
            let fact: f64 = (1..n).map(f64::from).product();
            let g = gamma(f64::from(n)).unwrap();
            assert!((g - fact).abs() / fact < 1e-13);
        }
        assert!((gamma(0.5f64).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn single_precision_instantiation() {
        let v = log_gamma_complex(Complex::new(3.0f32, 4.0)).unwrap();
        assert!((v.re + 1.756_626_8).abs() < 1e-5);
        assert!((v.im - 4.742_664_4).abs() < 1e-5);
    }
}
