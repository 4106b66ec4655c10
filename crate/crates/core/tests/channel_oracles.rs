use secrecy_lab::channel::{reduce_special_case, Channel, ChannelParams, SpecialCase};
use secrecy_lab::specfun::{integrate, ln_gamma, QuadSettings};

// Spans α ∈ {1, 2, 3.5}, μ ∈ {0.8, 1, 2.5}, m ∈ {1.5, 3, 25}, z ∈ {0.7, 1.2, 50}.
// α = 1 needs m > 2, so it is paired with the larger m values.
const SETS: [(f64, f64, f64, f64, f64); 6] = [
    (1.0, 0.8, 3.0, 0.7, 1.0),
    (1.0, 2.5, 25.0, 1.2, 10.0),
    (2.0, 1.0, 1.5, 50.0, 1.0),
    (2.0, 0.8, 25.0, 0.7, 0.3),
    (3.5, 2.5, 1.5, 1.2, 1.0),
    (3.5, 1.0, 3.0, 50.0, 100.0),
];

fn channel(s: (f64, f64, f64, f64, f64)) -> Channel<f64> {
    Channel::new(ChannelParams::new(s.0, s.1, s.2, s.3, s.4).unwrap()).unwrap()
}

#[test]
fn density_integrates_to_one() {
    for s in SETS {
        let ch = channel(s);
        let total = ch
            .expectation(|_| Ok(1.0), &QuadSettings::default(), "normalisation")
            .unwrap();
        assert!((total.value - 1.0).abs() < 1e-6, "{s:?}: {}", total.value);
    }
}

/// `E[γ^k]` by quadrature over `ln γ`, with the upper limit pushed out far
/// enough for the power-law tail `γ^{k - mα/2}`.
fn moment_by_quadrature(ch: &Channel<f64>, k: f64) -> f64 {
    let p = ch.params();
    let (lo, hi) = ch.log_snr_range(-40.0);
    let hi = hi + 40.0 / (p.m * p.alpha / 2.0 - k);
    let s = QuadSettings {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_subdivisions: 5000,
    };
    integrate(
        |u: f64| (k * u).exp() * ch.log_density(u).unwrap(),
        lo,
        hi,
        &s,
        "moment",
    )
    .unwrap()
    .value
}

#[test]
fn mean_is_gamma_bar() {
    for s in SETS {
        let ch = channel(s);
        let m1 = moment_by_quadrature(&ch, 1.0);
        assert!((m1 / s.4 - 1.0).abs() < 1e-7, "{s:?}: {m1}");
        assert!((ch.snr_moment(1.0).unwrap() / s.4 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn moments_match_mellin_transform() {
    for s in SETS {
        let ch = channel(s);
        let kmax = s.2 * s.0 / 2.0;
        for k in [0.3, 0.5 * kmax, 0.8 * kmax] {
            let q = moment_by_quadrature(&ch, k);
            let m = ch.snr_moment(k).unwrap();
            assert!((q / m - 1.0).abs() < 1e-6, "{s:?} k = {k}: {q} vs {m}");
        }
    }
}

#[test]
fn cdf_derivative_is_the_density() {
    let h = 1e-4;
    for s in SETS {
        let ch = channel(s);
        let (lo, hi) = ch.log_snr_range(-12.0);
        for i in 0..20 {
            let u = lo + (hi - lo) * (i as f64 + 0.5) / 20.0;
            // dF/d(ln γ) = γ f(γ)
            let fd = (ch.cdf_at_log(u + h).unwrap() - ch.cdf_at_log(u - h).unwrap()) / (2.0 * h);
            let dens = ch.log_density(u).unwrap();
            assert!(
                (fd - dens).abs() <= 1e-5 * dens.max(1e-2),
                "{s:?} u = {u}: {fd} vs {dens}"
            );
        }
    }
}

#[test]
fn cdf_and_survival_are_complementary() {
    for s in SETS {
        let ch = channel(s);
        for g in [1e-3, 0.1, 1.0, 5.0, 100.0] {
            let g = g * s.4;
            let sum = ch.cdf(g).unwrap() + ch.sf(g).unwrap();
            assert!((sum - 1.0).abs() < 1e-9, "{s:?} γ = {g}: {sum}");
        }
    }
}

/// α = 2: `x = Θγ` is a beta-prime variate times `U^{1/ζ}`. Its density is
/// computed here by direct quadrature of that product.
fn fisher_f_pointing_pdf(mu: f64, m: f64, z: f64, theta: f64, gamma: f64) -> f64 {
    let zeta = z * z / 2.0;
    let ln_beta = ln_gamma(mu).unwrap() + ln_gamma(m).unwrap() - ln_gamma(mu + m).unwrap();
    let beta_prime = |y: f64| ((mu - 1.0) * y.ln() - (mu + m) * y.ln_1p() - ln_beta).exp();
    let x = theta * gamma;
    // v = w^{1/ζ} removes the endpoint singularity of ζ v^{ζ-1}.
    let inner = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let v = w.powf(1.0 / zeta);
        beta_prime(x / v) / v
    };
    let s = QuadSettings {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_subdivisions: 5000,
    };
    theta * integrate(inner, 0.0, 1.0, &s, "Fisher-F oracle").unwrap().value
}

#[test]
fn fisher_f_reduction() {
    for &(mu, m, z) in &[(1.0, 1.5, 0.7), (2.5, 3.0, 1.2), (1.0, 25.0, 3.0)] {
        let p = reduce_special_case(&ChannelParams::new(3.0, mu, m, z, 2.0).unwrap(), SpecialCase::FisherF);
        let ch = Channel::new(p).unwrap();
        let theta = ch.constants().theta;
        let mut sup: f64 = 0.0;
        for i in 0..40 {
            let g = 2.0 * 10f64.powf(-3.0 + 5.0 * i as f64 / 39.0);
            let want = fisher_f_pointing_pdf(mu, m, z, theta, g);
            sup = sup.max((ch.pdf(g).unwrap() - want).abs());
        }
        assert!(sup <= 1e-6, "μ = {mu}, m = {m}, z = {z}: sup-norm {sup}");
    }
}

/// Sup-norm distance between the `m`-surrogate density and the α-μ density
/// with the same mean, over `[γ̄/100, 10 γ̄]`, and the peak of the latter.
fn alpha_mu_distance(alpha: f64, mu: f64, m: f64) -> (f64, f64) {
    let gb = 1.5;
    let p = ChannelParams::new(alpha, mu, m, f64::INFINITY, gb).unwrap();
    let ch = Channel::new(p).unwrap();
    let k = 2.0 / alpha;
    // E[γ] = β^{2/α} Γ(μ+2/α)/Γ(μ) = γ̄ fixes the scale β of γ^{α/2}.
    let ln_beta = (gb.ln() + ln_gamma(mu).unwrap() - ln_gamma(mu + k).unwrap()) / k;
    let oracle = |g: f64| {
        let ln_y = g.ln() / k - ln_beta;
        (alpha / 2.0)
            * ((alpha / 2.0 - 1.0) * g.ln() + (mu - 1.0) * ln_y - ln_y.exp() - ln_gamma(mu).unwrap() - ln_beta).exp()
    };
    let (mut sup, mut peak) = (0.0f64, 0.0f64);
    for i in 0..40 {
        let g = gb * 10f64.powf(-2.0 + 3.0 * i as f64 / 39.0);
        let want = oracle(g);
        peak = peak.max(want);
        sup = sup.max((ch.pdf(g).unwrap() - want).abs());
    }
    (sup, peak)
}

#[test]
fn alpha_mu_reduction() {
    // The shadowing surrogate is off by O(1/m): about 0.5% of the peak at
    // m = 200 and ten times less at m = 2000.
    for &(alpha, mu) in &[(2.0, 1.0), (3.5, 2.5), (1.0, 1.2)] {
        let (d200, peak) = alpha_mu_distance(alpha, mu, 200.0);
        let (d2000, _) = alpha_mu_distance(alpha, mu, 2000.0);
        assert!(d200 < 1e-2 * peak, "α = {alpha}, μ = {mu}: {d200} of {peak}");
        assert!(d2000 < 1e-3 * peak, "α = {alpha}, μ = {mu}: {d2000} of {peak}");
        let ratio = d200 / d2000;
        assert!((8.0..12.0).contains(&ratio), "α = {alpha}, μ = {mu}: ratio {ratio}");
    }
}

#[test]
fn pointing_surrogate_is_converged() {
    for s in SETS {
        let p = ChannelParams::new(s.0, s.1, s.2, f64::INFINITY, s.4).unwrap();
        let a = Channel::with_surrogate(p, 50.0).unwrap();
        let b = Channel::with_surrogate(p, 200.0).unwrap();
        let (lo, hi) = a.log_snr_range(-20.0);
        for i in 0..25 {
            let u = lo + (hi - lo) * i as f64 / 24.0;
            let d = (a.cdf_at_log(u).unwrap() - b.cdf_at_log(u).unwrap()).abs();
            assert!(d < 1e-4, "{s:?} u = {u}: {d}");
        }
    }
}

#[test]
fn cdf_is_monotone_and_bounded() {
    for s in SETS {
        let ch = channel(s);
        let (lo, hi) = ch.log_snr_range(-30.0);
        let mut prev = 0.0;
        for i in 0..60 {
            let u = lo + (hi - lo) * i as f64 / 59.0;
            let c = ch.cdf_at_log(u).unwrap();
            assert!(
                (0.0..=1.0).contains(&c) && c >= prev - 1e-12,
                "{s:?} u = {u}: {c} after {prev}"
            );
            prev = c;
        }
        assert!(prev > 1.0 - 1e-9);
    }
}
