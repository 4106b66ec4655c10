use secrecy_lab::channel::ChannelParams;
use secrecy_lab::secrecy::{sop_exponent, Evaluator, ExponentCase, SecrecyOptions, SecrecyScenario};

fn ch(alpha: f64, mu: f64, m: f64, z: f64, gb: f64) -> ChannelParams<f64> {
    ChannelParams::new(alpha, mu, m, z, gb).unwrap()
}

fn grid() -> Vec<SecrecyScenario<f64>> {
    let e07 = ch(2.0, 1.0, 3.0, 0.7, 1.0);
    [
        (ch(2.0, 1.0, 1.5, 1.2, 10.0), e07),
        (ch(2.0, 1.0, 1.5, f64::INFINITY, 10.0), e07),
        (ch(2.0, 1.0, 3.0, 1.2, 1.0), ch(2.0, 1.0, 3.0, 1.2, 1.0)),
        (ch(2.5, 2.0, 4.0, 1.5, 30.0), ch(2.0, 1.0, 3.0, 1.0, 1.0)),
        (ch(1.5, 0.8, 5.0, 2.0, 5.0), ch(3.0, 2.5, 2.0, 0.9, 2.0)),
        (ch(3.5, 2.5, 25.0, 50.0, 100.0), ch(2.0, 1.0, 1.5, 0.7, 10.0)),
        (ch(1.0, 1.0, 3.0, 1.0, 3.0), ch(1.0, 1.0, 3.0, 1.0, 1.0)),
        (ch(2.0, 2.5, 25.0, 3.0, 1000.0), e07),
        (ch(3.0, 1.5, 2.0, 0.8, 0.5), ch(2.0, 1.0, 3.0, 1.2, 1.0)),
        (ch(2.0, 1.0, 1.5, 0.7, 1.0), ch(2.0, 1.0, 1.5, 0.7, 3.0)),
    ]
    .into_iter()
    .map(|(d, e)| SecrecyScenario::new(d, e, 0.5).unwrap())
    .collect()
}

fn ev(s: &SecrecyScenario<f64>) -> Evaluator<f64> {
    Evaluator::new(s, &SecrecyOptions::default()).unwrap()
}

#[test]
fn spsc_matches_quadrature() {
    for s in grid() {
        let e = ev(&s);
        let (c, q) = (e.spsc().unwrap().value, e.spsc_quadrature().unwrap().value);
        assert!((c - q).abs() < 1e-7, "{s:?}: {c} vs {q}");
    }
}

#[test]
fn spsc_complements_sop_at_zero_rate() {
    for s in grid() {
        let e0 = ev(&s.with_rate(0.0));
        let sum = e0.spsc().unwrap().value + e0.sop_lower().unwrap().value;
        assert!((sum - 1.0).abs() < 1e-6, "{s:?}: {sum}");
    }
}

#[test]
fn spsc_of_swapped_roles_is_the_complement() {
    for s in grid() {
        let sum = ev(&s).spsc().unwrap().value + ev(&s.swapped()).spsc().unwrap().value;
        assert!((sum - 1.0).abs() < 1e-7, "{s:?}: {sum}");
    }
}

#[test]
fn sop_matches_quadrature() {
    for s in grid() {
        let e = ev(&s);
        let (c, q) = (e.sop_lower().unwrap().value, e.sop_lower_quadrature().unwrap().value);
        assert!((c - q).abs() < 1e-4, "{s:?}: {c} vs {q}");
    }
}

#[test]
fn asc_matches_quadrature() {
    for s in grid() {
        let e = ev(&s);
        let (c, q) = (e.asc_exact().unwrap().value, e.asc_quadrature().unwrap().value);
        assert!((c / q - 1.0).abs() < 1e-3, "{s:?}: {c} vs {q}");
    }
}

#[test]
fn sop_is_monotone_in_rate_and_snr() {
    let s = grid()[0];
    let mut prev = 0.0;
    for i in 0..=16 {
        let v = ev(&s.with_rate(0.25 * i as f64)).sop_lower().unwrap().value;
        assert!(v >= prev - 1e-9, "R_s = {}: {v} < {prev}", 0.25 * i as f64);
        prev = v;
    }
    let mut prev = 1.0;
    for i in 0..=12 {
        let gd = 10f64.powf(i as f64 / 4.0);
        let v = ev(&s.with_gamma_bars(gd, s.e.gamma_bar)).sop_lower().unwrap().value;
        assert!(v <= prev + 1e-9, "γ̄_D = {gd}: {v} > {prev}");
        prev = v;
    }
}

/// Log-log slope of the outage bound over the decade ending at `top` dB.
fn slope(s: &SecrecyScenario<f64>, top_db: f64) -> f64 {
    let at = |db: f64| {
        let g = 10f64.powf(db / 10.0);
        ev(&s.with_gamma_bars(g, s.e.gamma_bar))
            .sop_lower()
            .unwrap()
            .value
            .log10()
    };
    // Least squares over five points.
    let xs: Vec<f64> = (0..5).map(|i| top_db - 10.0 + 2.5 * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| at(x)).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 5.0, ys.iter().sum::<f64>() / 5.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den * 10.0
}

#[test]
fn diversity_gain_matches_fitted_slope() {
    let cases = [
        (
            SecrecyScenario::new(ch(2.0, 0.8, 2.0, 2.0, 1.0), ch(2.0, 1.0, 3.0, 1.0, 1.0), 0.5).unwrap(),
            ExponentCase::Multipath,
        ),
        (
            SecrecyScenario::new(ch(2.0, 2.0, 2.0, 0.9, 1.0), ch(2.0, 1.0, 3.0, 1.0, 1.0), 0.5).unwrap(),
            ExponentCase::Pointing,
        ),
        (
            SecrecyScenario::new(ch(2.0, 2.0, 2.0, 3.0, 1.0), ch(2.0, 1.0, 1.2, 1.0, 1.0), 0.5).unwrap(),
            ExponentCase::Shadowing,
        ),
    ];
    for (s, case) in cases {
        let xi = sop_exponent(&s, 50.0).unwrap();
        assert_eq!(xi.case, case);
        let gd = ev(&s).diversity_gain().unwrap();
        assert!((gd - s.d.alpha * xi.value / 2.0).abs() < 1e-12);
        let fitted = -slope(&s, 60.0);
        assert!((fitted / gd - 1.0).abs() < 0.05, "{case:?}: fitted {fitted} vs {gd}");
        let s50 = s.with_gamma_bars(1e5, s.e.gamma_bar);
        let e = ev(&s50);
        let r = e.sop_lower().unwrap().value / e.sop_asymptotic().unwrap().value;
        assert!((r - 1.0).abs() < 0.03, "{case:?}: ratio {r}");
    }
}

#[test]
fn shadowing_asymptote_converges_slowly_with_a_close_second_pole() {
    // Ξ = 1.25 with the next pole half a unit away: 5% off at 50 dB, 0.2% at 80 dB.
    let s = SecrecyScenario::new(ch(2.0, 2.0, 2.0, 3.0, 1.0), ch(1.0, 1.0, 2.5, 1.0, 1.0), 0.5).unwrap();
    let ratio = |db: f64| {
        let e = ev(&s.with_gamma_bars(10f64.powf(db / 10.0), 1.0));
        e.sop_lower().unwrap().value / e.sop_asymptotic().unwrap().value
    };
    let (r50, r80) = (ratio(50.0), ratio(80.0));
    assert!(
        (r80 - 1.0).abs() < 5e-3 && (r80 - 1.0).abs() < (r50 - 1.0).abs() / 10.0,
        "{r50} {r80}"
    );
}

#[test]
fn identical_channels_are_symmetric() {
    let p = ch(2.0, 1.0, 3.0, 1.2, 10.0);
    let s = SecrecyScenario::new(p, p, 0.0).unwrap();
    assert!((ev(&s).spsc().unwrap().value - 0.5).abs() < 1e-9);
}

#[test]
fn asc_saturates_with_common_snr() {
    // Fig. 2(b) shape: equal average SNRs, ASC levels off as they grow.
    let d = ch(2.0, 1.0, 3.0, 1.5, 1.0);
    let e = ch(2.0, 1.0, 3.0, 2.0, 1.0);
    let s = SecrecyScenario::new(d, e, 0.0).unwrap();
    let mut prev = 0.0;
    let mut values = vec![];
    for db in [0.0, 10.0, 20.0, 30.0, 40.0] {
        let g = 10f64.powf(db / 10.0);
        let v = ev(&s.with_gamma_bars(g, g)).asc_quadrature().unwrap().value;
        assert!(v >= prev - 1e-9);
        prev = v;
        values.push(v);
    }
    let limit = ev(&s.with_gamma_bars(1e4, 1e4))
        .asc_asymptotic_quadrature()
        .unwrap()
        .value;
    assert!(
        limit >= values[4] - 1e-6 && (values[4] / limit - 1.0).abs() < 0.01,
        "{values:?} {limit}"
    );
}

#[test]
fn strong_eavesdropper_pointing_error_saturates_slowly() {
    // ζ_E α_E/2 = 0.245: the eavesdropper's deep fades fade out slowly and
    // 40 dB is still well below the limit.
    let s = SecrecyScenario::new(ch(2.0, 1.0, 3.0, 1.5, 1.0), ch(2.0, 1.0, 3.0, 0.7, 1.0), 0.0).unwrap();
    let at = |g: f64| ev(&s.with_gamma_bars(g, g)).asc_quadrature().unwrap().value;
    let limit = ev(&s.with_gamma_bars(1e4, 1e4))
        .asc_asymptotic_quadrature()
        .unwrap()
        .value;
    let (a40, a60) = (at(1e4), at(1e6));
    assert!(a40 < a60 && a60 < limit, "{a40} {a60} {limit}");
    assert!((limit - a60) < (limit - a40) / 2.0);
}

#[test]
fn weak_eavesdropper_gives_the_ergodic_capacity() {
    use secrecy_lab::channel::Channel;
    use secrecy_lab::specfun::QuadSettings;
    let d = ch(2.0, 1.0, 1.5, 1.2, 10.0);
    let e = ch(2.0, 1.0, 3.0, 0.7, 1e-4);
    let asc = ev(&SecrecyScenario::new(d, e, 0.0).unwrap()).asc_exact().unwrap().value;
    let cap = Channel::new(d)
        .unwrap()
        .expectation(
            |g| Ok(g.ln_1p() / std::f64::consts::LN_2),
            &QuadSettings::default(),
            "capacity",
        )
        .unwrap()
        .value;
    assert!((asc / cap - 1.0).abs() < 1e-3, "{asc} vs {cap}");
}

// With μ = 1 the integrands have a logarithmic singularity at the origin
// and the printed Gauss-Laguerre sum converges slowly in N.
#[test]
fn laguerre_sum_approaches_the_limit_slowly_for_unit_mu() {
    let g = 1e3;
    let s = SecrecyScenario::new(ch(2.0, 1.0, 3.0, 1.5, g), ch(2.0, 1.0, 3.0, 2.0, g), 0.0).unwrap();
    let e = ev(&s);
    let a = e.asc_asymptotic_with_order(32).unwrap().value;
    let b = e.asc_asymptotic_with_order(64).unwrap().value;
    let limit = e.asc_asymptotic_quadrature().unwrap().value;
    assert!((a - b).abs() > 1e-2, "{a} {b}");
    assert!((b - limit).abs() < (a - limit).abs(), "{a} {b} {limit}");
}
