use dunkl_core::operators::{Grid1D, GridFunction1D};
use dunkl_core::rearrangement::{
    decreasing_rearrangement, distribution_function, hl_pairing, lp_norm, moment, reciprocal_rearrangement,
    MeasurableSample, NormRoute, RearrangedProfile, WeightSpec,
};
use dunkl_core::{DunklStructure, Extended, RadialProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// d_k/(2 gamma + d) from c_k, independent of the measure module: Gamma and c_k by hand for Z2^d.
fn unit_ball_z2(ks: &[f64]) -> f64 {
    // c_k^{-1} = prod_j 2^{k_j+1/2} Gamma(k_j+1/2); d_k/n = c_k^{-1} / (2^{n/2} Gamma(n/2+1)).
    let gamma = lanczos_gamma;
    let n: f64 = ks.iter().map(|k| 2.0 * k + 1.0).sum();
    let inv_ck: f64 = ks.iter().map(|k| 2f64.powf(k + 0.5) * gamma(k + 0.5)).product();
    inv_ck / (2f64.powf(n / 2.0) * gamma(n / 2.0 + 1.0))
}

/// Lanczos approximation, g = 7.
fn lanczos_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let s = G[1..].iter().enumerate().fold(G[0], |acc, (i, g)| acc + g / (x + i as f64 + 1.0));
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * s
}

#[test]
fn closed_forms_of_the_power_indicator_example() {
    for ks in [vec![1.0], vec![0.0], vec![0.5, 1.5]] {
        let cfg = DunklStructure::z2(&ks).unwrap();
        let n = cfg.homogeneous_dimension();
        let nu1 = unit_ball_z2(&ks);
        assert!(rel(cfg.ball_measure(1.0), nu1) < 1e-12);
        let (delta, beta, r) = (-0.5, 1.0, 2.0);
        let u = MeasurableSample::Power { coefficient: 1.0, exponent: delta };
        let f = MeasurableSample::Indicator { radius: r, height: 1.0 };
        for s in [0.3, 1.0, 4.0] {
            let d = distribution_function(&u, &cfg, s).unwrap().to_f64();
            assert!(rel(d, nu1 * s.powf(n / delta)) < 1e-12);
        }
        assert_eq!(distribution_function(&f, &cfg, 0.5).unwrap().to_f64(), cfg.ball_measure(r));
        assert_eq!(distribution_function(&f, &cfg, 1.0).unwrap(), Extended::ZERO);
        let u_star = decreasing_rearrangement(&u, &cfg).unwrap();
        let v_star = reciprocal_rearrangement(&WeightSpec::Power(beta), &cfg).unwrap();
        for t in [0.01, 0.5, 7.0] {
            assert!(rel(u_star.eval(t), (1.0 / nu1).powf(delta / n) * t.powf(delta / n)) < 1e-12);
            assert!(rel(v_star.eval(t), (1.0 / nu1).powf(-beta / n) * t.powf(-beta / n)) < 1e-12);
        }
        let big_r = nu1 * r.powf(n);
        let f_star = decreasing_rearrangement(&f, &cfg).unwrap();
        assert_eq!(f_star.eval(0.999 * big_r), 1.0);
        assert_eq!(f_star.eval(1.001 * big_r), 0.0);
        let dk = nu1 * n;
        let pu = hl_pairing(&f, &WeightSpec::Power(delta), &cfg).unwrap();
        let want = dk * r.powf(delta + n) / (delta + n);
        assert!(rel(pu.lhs_direct.to_f64(), want) < 1e-12, "{pu:?}");
        assert!(rel(pu.rhs_upper.to_f64(), want) < 1e-12);
        let pv = hl_pairing(&f, &WeightSpec::Power(beta), &cfg).unwrap();
        let want = dk * r.powf(beta + n) / (beta + n);
        assert!(rel(pv.lhs_direct.to_f64(), want) < 1e-12);
        assert!(rel(pv.lhs_lower.to_f64(), want) < 1e-12);
    }
}

#[test]
fn numeric_level_sets_reproduce_the_closed_forms() {
    let cfg = DunklStructure::rank_one(1.0).unwrap();
    let (delta, r) = (-0.5, 2.0);
    let exact = decreasing_rearrangement(&MeasurableSample::Power { coefficient: 1.0, exponent: delta }, &cfg).unwrap();
    let numeric = decreasing_rearrangement(&MeasurableSample::Radial(RadialProfile::power(1.0, delta)), &cfg).unwrap();
    assert!(matches!(numeric, RearrangedProfile::Numeric(_)));
    for t in [1e-3, 0.2, 3.0, 40.0] {
        assert!(rel(numeric.eval(t), exact.eval(t)) < 1e-9, "t={t}");
    }
    let f = MeasurableSample::Radial(RadialProfile::indicator(r, 1.0));
    let pairing = hl_pairing(&f, &WeightSpec::Radial(RadialProfile::power(1.0, delta)), &cfg).unwrap();
    let want = 2.0 * r.powf(delta + 3.0) / (delta + 3.0);
    assert!(rel(pairing.rhs_upper.to_f64(), want) < 1e-6, "{pairing:?}");
    assert!(rel(pairing.lhs_direct.to_f64(), want) < 1e-8);
}

fn gaussian_sample(n: usize, k: f64) -> MeasurableSample {
    let grid = Grid1D::balanced(n).unwrap();
    MeasurableSample::Grid(GridFunction1D::from_real_fn(grid, k, |x| (-x * x / 2.0).exp()).unwrap())
}

#[test]
fn sampled_norm_identity_and_refinement() {
    let cfg = DunklStructure::rank_one(0.5).unwrap();
    for p in [1.0, 2.0, 3.5] {
        let coarse = lp_norm(&gaussian_sample(512, 0.5), p, &cfg, NormRoute::Rearranged).unwrap().to_f64();
        let fine = lp_norm(&gaussian_sample(1024, 0.5), p, &cfg, NormRoute::Rearranged).unwrap().to_f64();
        let direct = lp_norm(&gaussian_sample(1024, 0.5), p, &cfg, NormRoute::Direct).unwrap().to_f64();
        // ||e^{-x^2/2}||_p^p = int |x| e^{-p x^2/2} dx = 2/p.
        let exact = (2.0 / p).powf(1.0 / p);
        assert!(rel(fine, coarse) < 1e-4, "p={p}: doubling moved {fine} vs {coarse}");
        assert!(rel(direct, exact) < 1e-8);
        assert!(rel(fine, direct) < 1e-4);
    }
}

#[test]
fn sampled_sandwich_and_equimeasurability() {
    let cfg = DunklStructure::rank_one(1.0).unwrap();
    let grid = Grid1D::balanced(512).unwrap();
    let g = GridFunction1D::from_real_fn(grid, 1.0, |x| (1.0 + 0.8 * x).abs() * (-x * x / 2.0).exp()).unwrap();
    let f = MeasurableSample::Grid(g);
    let star = decreasing_rearrangement(&f, &cfg).unwrap();
    assert!(star.is_non_increasing());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let s = rng.gen_range(0.0..1.3);
        let d = distribution_function(&f, &cfg, s).unwrap().to_f64();
        assert!((d - star.level_measure(s).to_f64()).abs() <= 1e-6 * (1.0 + d));
    }
    for w in [WeightSpec::Power(-0.7), WeightSpec::Power(1.2), WeightSpec::One] {
        let pairing = hl_pairing(&f, &w, &cfg).unwrap();
        assert!(pairing.sandwich_holds(1e-8), "{w:?}: {pairing:?}");
    }
    let p1 = moment(&[(&star, 1.0)], 0.0, 0.0, f64::INFINITY).unwrap().to_f64();
    assert!(rel(p1, lp_norm(&f, 1.0, &cfg, NormRoute::Direct).unwrap().to_f64()) < 1e-10);
}

#[test]
fn radial_sandwich_is_strict_for_mismatched_shapes() {
    let cfg = DunklStructure::z2(&[0.5, 0.5]).unwrap();
    // f peaks away from the origin while the weight is largest there.
    let f = RadialProfile::new(|r| (-(r - 2.0) * (r - 2.0)).exp()).with_infinity_exponent(f64::NEG_INFINITY);
    let f = MeasurableSample::Radial(f);
    let w = WeightSpec::Radial(RadialProfile::new(|r| 1.0 / (1.0 + r * r)).with_zero_exponent(0.0).with_infinity_exponent(-2.0));
    let pairing = hl_pairing(&f, &w, &cfg).unwrap();
    assert!(pairing.sandwich_holds(1e-8), "{pairing:?}");
    assert!(pairing.lhs_direct.to_f64() < 0.99 * pairing.rhs_upper.to_f64());
    assert!(pairing.lhs_lower.to_f64() < 0.99 * pairing.lhs_direct.to_f64());
}

#[test]
fn profiles_serialize_with_a_kind_tag() {
    let p = RearrangedProfile::PowerForm { coefficient: 2.0, exponent: -0.25, cutoff: None };
    let json = serde_json::to_value(&p).unwrap();
    assert_eq!(json["kind"], "power_form");
    let g: RearrangedProfile =
        serde_json::from_str(r#"{"kind":"grid","knots":[1.0,2.0],"values":[3.0,1.0]}"#).unwrap();
    assert_eq!(g.eval(1.5), 1.0);
    assert_eq!(g.eval(0.2), 3.0);
}
