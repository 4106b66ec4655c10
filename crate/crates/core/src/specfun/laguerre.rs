//! Gauss–Laguerre nodes and weights.

use crate::error::{invalid, Error, Result};
use crate::Real;

/// N-point Gauss–Laguerre rule for `∫_0^∞ e^{-x} f(x) dx`.
///
/// Weights of the outermost nodes underflow in `f64` beyond roughly
/// `N = 170`; `log_weights` keeps them exactly, and
/// [`QuadratureRule::integrate_plain`] works from the logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<F> {
    pub nodes: Vec<F>,
    pub weights: Vec<F>,
    pub log_weights: Vec<F>,
}

impl<F: Real> QuadratureRule<F> {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `Σ w_k f(x_k) ≈ ∫_0^∞ e^{-x} f(x) dx`.
    pub fn integrate(&self, mut f: impl FnMut(F) -> F) -> F {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(F::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// `Σ w_k e^{x_k} g(x_k) ≈ ∫_0^∞ g(x) dx`.
    pub fn integrate_plain(&self, mut g: impl FnMut(F) -> F) -> F {
        self.nodes
            .iter()
            .zip(&self.log_weights)
            .fold(F::zero(), |acc, (&x, &lw)| acc + (lw + x).exp() * g(x))
    }

    /// `Σ w_k x_k^r`.
    pub fn moment(&self, r: i32) -> F {
        self.integrate(|x| x.powi(r))
    }
}

/// Builds the `n`-point rule, `1 ≤ n ≤ 256`, by Newton iteration on the
/// three-term recurrence (evaluated with an `e^{-x/2}` scale factor so large
/// nodes do not overflow).
pub fn gauss_laguerre<F: Real>(n: usize) -> Result<QuadratureRule<F>> {
    if !(1..=256).contains(&n) {
        return Err(invalid("N", format!("quadrature order must be in 1..=256, got {n}")));
    }
    let nf = F::from_usize_lossy(n);
    let tol = F::epsilon() * F::lit(4.0);
    let stall_tol = F::lit(1e-10).max(F::epsilon() * F::lit(1e3));
    let mut nodes: Vec<F> = Vec::with_capacity(n);
    let mut log_weights: Vec<F> = Vec::with_capacity(n);
    let mut z = F::zero();

    for i in 0..n {
        z = initial_guess(i, n, z, &nodes);
        let mut converged = false;
        let mut last = (F::zero(), F::zero());
        let mut prev_step = F::infinity();
        for _ in 0..100 {
            let (ln, ln_1) = scaled_laguerre(n, z);
            let deriv = nf * (ln - ln_1) / z;
            let step = (ln / deriv).abs();
            last = (deriv, ln_1);
            // Rounding in the recurrence grows with n, so Newton can stall a
            // little above `tol`; a step that stops shrinking ends the loop.
            let stalled = step >= prev_step && step <= stall_tol * z.abs();
            if step <= tol * z.abs() || stalled {
                converged = true;
                break;
            }
            z = z - ln / deriv;
            prev_step = step;
        }
        if !converged || !(z > F::zero()) {
            return Err(Error::NonConvergence {
                what: "Gauss-Laguerre root iteration",
                error: z.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
        let (deriv, prev) = last;
        // w = -1 / (n L_n'(x) L_{n-1}(x)); both factors carry e^{-x/2}.
        log_weights.push(-z - (nf * deriv * prev).abs().ln());
        nodes.push(z);
    }

    if nodes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::NonConvergence {
            what: "Gauss-Laguerre root ordering",
            error: f64::NAN,
            tolerance: 0.0,
        });
    }
    // The zeroth moment is exactly 1; renormalising removes the rounding
    // the recurrence accumulates at large n.
    let peak = log_weights.iter().copied().fold(F::neg_infinity(), F::max);
    let mass = log_weights.iter().fold(F::zero(), |acc, &lw| acc + (lw - peak).exp());
    let shift = peak + mass.ln();
    let log_weights: Vec<F> = log_weights.into_iter().map(|lw| lw - shift).collect();
    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        log_weights,
    })
}

// (L_n(x), L_{n-1}(x)) times e^{-x/2}.
fn scaled_laguerre<F: Real>(n: usize, x: F) -> (F, F) {
    let mut p1 = (-x * F::lit(0.5)).exp();
    let mut p2 = F::zero();
    for j in 0..n {
        let jf = F::from_usize_lossy(j);
        let p3 = p2;
        p2 = p1;
        p1 = ((F::lit(2.0) * jf + F::one() - x) * p2 - jf * p3) / (jf + F::one());
    }
    (p1, p2)
}

fn initial_guess<F: Real>(i: usize, n: usize, prev: F, nodes: &[F]) -> F {
    let nf = F::from_usize_lossy(n);
    match i {
        0 => F::lit(3.0) / (F::one() + F::lit(2.4) * nf),
        1 => prev + F::lit(15.0) / (F::one() + F::lit(2.5) * nf),
        _ => {
            let ai = F::from_usize_lossy(i - 1);
            prev + (F::one() + F::lit(2.55) * ai) / (F::lit(1.9) * ai) * (prev - nodes[i - 2])
        }
    }
}
