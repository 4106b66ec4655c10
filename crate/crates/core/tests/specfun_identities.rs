use num_complex::Complex64;
use secrecy_lab::specfun::{
    fox_h, fox_h_bivariate, gamma, gauss_laguerre, ln_gamma, log_gamma_complex, BivariateFoxHSpec, ContourConfig,
    FoxHSpec, HTuple, JointTuple,
};

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
}

#[test]
fn exponential_at_twenty_points() {
    // H^{1,0}_{0,1}[z | -; (0,1)] = e^{-z}
    let spec = FoxHSpec::new(1, 0, vec![], vec![HTuple::new(0.0, 1.0)]).unwrap();
    for z in log_grid(1e-3, 50.0, 20) {
        let v = fox_h(&spec, z, &ContourConfig::default()).unwrap().value;
        let want = (-z).exp();
        assert!((v / want - 1.0).abs() <= 1e-8, "z = {z}: {v} vs {want}");
    }
}

#[test]
fn binomial_at_twenty_points() {
    // H^{1,1}_{1,1}[z | (1-a,1); (0,1)] = Γ(a) (1+z)^{-a}
    for a in [0.5, 1.0, 2.5, 7.0] {
        let spec = FoxHSpec::new(1, 1, vec![HTuple::new(1.0 - a, 1.0)], vec![HTuple::new(0.0, 1.0)]).unwrap();
        for z in log_grid(1e-3, 1e3, 20) {
            let v = fox_h(&spec, z, &ContourConfig::default()).unwrap().value;
            let want = gamma(a).unwrap() * (1.0 + z).powf(-a);
            assert!((v / want - 1.0).abs() <= 1e-8, "a = {a}, z = {z}: {v} vs {want}");
        }
    }
}

#[test]
fn meijer_g_product_of_gammas() {
    // H^{2,0}_{0,2}[z | (a,1),(b,1)] = 2 z^{(a+b)/2} K_{a-b}(2√z); at a-b = 1/2
    // K_{1/2}(x) = √(π/(2x)) e^{-x}.
    let (a, b) = (1.0, 0.5);
    let spec = FoxHSpec::new(2, 0, vec![], vec![HTuple::new(a, 1.0), HTuple::new(b, 1.0)]).unwrap();
    for z in log_grid(1e-2, 20.0, 12) {
        let x = 2.0 * z.sqrt();
        let k = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
        let want = 2.0 * z.powf((a + b) / 2.0) * k;
        let v = fox_h(&spec, z, &ContourConfig::default()).unwrap().value;
        assert!((v / want - 1.0).abs() <= 1e-8, "z = {z}: {v} vs {want}");
    }
}

#[test]
fn bivariate_factorises_without_joint_terms() {
    // No joint gamma functions: the double integral is a product of two
    // univariate H-functions.
    let e = FoxHSpec::new(1, 0, vec![], vec![HTuple::new(0.0, 1.0)]).unwrap();
    let r = FoxHSpec::new(1, 1, vec![HTuple::new(0.0, 1.0)], vec![HTuple::new(0.0, 1.0)]).unwrap();
    let spec = BivariateFoxHSpec::new(0, Vec::<JointTuple<f64>>::new(), vec![], e.clone(), r.clone()).unwrap();
    let cfg = ContourConfig::default();
    let v = fox_h_bivariate(&spec, 0.7, 2.0, &cfg, &cfg).unwrap().value;
    let want = (-0.7f64).exp() / 3.0;
    assert!((v / want - 1.0).abs() < 1e-8, "{v} vs {want}");
}

#[test]
fn log_gamma_reflection_and_recurrence() {
    for &(re, im) in &[(-2.5, 0.3), (0.1, -7.0), (3.3, 12.0), (-0.7, 0.0)] {
        let z = Complex64::new(re, im);
        let lhs = log_gamma_complex(z + 1.0).unwrap();
        let rhs = log_gamma_complex(z).unwrap() + z.ln();
        let d = lhs - rhs;
        // Equal modulo 2πi.
        let k = (d.im / (2.0 * std::f64::consts::PI)).round();
        assert!(
            d.re.abs() < 1e-12 && (d.im - 2.0 * std::f64::consts::PI * k).abs() < 1e-12,
            "{z}: {d}"
        );
    }
    assert!((ln_gamma(0.5).unwrap() - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
}

#[test]
fn laguerre_integrates_polynomials_exactly() {
    let rule = gauss_laguerre::<f64>(32).unwrap();
    // ∫ x^k e^{-x} = k!
    let mut fact = 1.0;
    for k in 0..30 {
        if k > 0 {
            fact *= k as f64;
        }
        let v = rule.integrate(|x| x.powi(k));
        assert!((v / fact - 1.0).abs() < 1e-10, "k = {k}: {v} vs {fact}");
    }
}
