use dunkl_core::operators::{DunklEngine, Grid1D, GridFunction1D, MaximalOptions};
use dunkl_core::quadrature::{integrate_half_line, TailHints, Tolerance};
use dunkl_core::special::gamma;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gaussian(x: f64) -> f64 {
    (-x * x / 2.0).exp()
}

fn re(values: &[Complex64]) -> Vec<f64> {
    values.iter().map(|v| v.re).collect()
}

#[test]
fn translation_by_zero_and_classical_shift() {
    let grid = Grid1D::balanced(512).unwrap();
    let e = DunklEngine::new(0.8, grid).unwrap();
    let f = GridFunction1D::from_real_fn(grid, 0.8, |x| (1.0 + x) * gaussian(x)).unwrap();
    assert!(e.translation(&f, 0.0).unwrap().sup_distance(&f) < 1e-6);

    let e0 = DunklEngine::new(0.0, grid).unwrap();
    let g = GridFunction1D::from_real_fn(grid, 0.0, gaussian).unwrap();
    let shifted = e0.translation(&g, 1.3).unwrap();
    for (v, x) in shifted.values.iter().zip(grid.nodes()) {
        assert!((v.re - gaussian(x + 1.3)).abs() < 1e-7, "x={x}");
    }
}

#[test]
fn translation_contracts_even_functions() {
    let grid = Grid1D::balanced(512).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &k in &[0.5, 1.0, 2.0] {
        let e = DunklEngine::new(k, grid).unwrap();
        let f = GridFunction1D::from_real_fn(grid, k, gaussian).unwrap();
        let (n1, n2) = (e.norm(&f, 1.0).unwrap(), e.norm(&f, 2.0).unwrap());
        for _ in 0..20 {
            let x = rng.gen_range(-4.0..4.0);
            let t = e.translation(&f, x).unwrap();
            assert!(e.norm(&t, 1.0).unwrap() <= (1.0 + 1e-3) * n1, "k={k} x={x}");
            assert!(e.norm(&t, 2.0).unwrap() <= (1.0 + 1e-5) * n2, "k={k} x={x}");
        }
    }
}

#[test]
fn convolution_bounds_and_approximate_identity() {
    let grid = Grid1D::balanced(1024).unwrap();
    let k = 1.0;
    let e = DunklEngine::new(k, grid).unwrap();
    let f = GridFunction1D::from_real_fn(grid, k, |x| (1.0 + 0.5 * x) * gaussian(x)).unwrap();
    let g = GridFunction1D::from_real_fn(grid, k, |x| (-x * x).exp()).unwrap();
    let fg = e.convolution(&f, &g).unwrap();
    let gf = e.convolution(&g, &f).unwrap();
    assert!(fg.sup_distance(&gf) < 1e-14);
    assert!(e.norm(&fg, 2.0).unwrap() <= e.norm(&f, 2.0).unwrap() * e.norm(&g, 1.0).unwrap());

    // f * g_eps -> c_k ||g_eps||_1 f as eps -> 0.
    let mut last = f64::INFINITY;
    for &eps in &[0.4, 0.2, 0.1] {
        let g = GridFunction1D::from_real_fn(grid, k, |x| (-x * x / (2.0 * eps * eps)).exp()).unwrap();
        let scale = e.mehta() * e.norm(&g, 1.0).unwrap();
        let c = e.convolution(&f, &g).unwrap().scale(Complex64::new(1.0 / scale, 0.0));
        let err = c.sup_distance(&f);
        assert!(err < last, "eps={eps}");
        last = err;
    }
    assert!(last < 0.05);
}

#[test]
fn riesz_potential_matches_classical_fractional_integral() {
    let alpha: f64 = 0.5;
    let grid = Grid1D::balanced(1024).unwrap();
    let e = DunklEngine::new(0.0, grid).unwrap();
    let f = GridFunction1D::from_real_fn(grid, 0.0, gaussian).unwrap();
    let i = e.riesz_potential(&f, alpha).unwrap();
    let constant = gamma(1.0 - alpha) * (std::f64::consts::PI * alpha / 2.0).sin() / std::f64::consts::PI;
    let hints = TailHints {
        zero_exponent: Some(alpha - 1.0),
        infinity_exponent: Some(f64::NEG_INFINITY),
        ..Default::default()
    };
    for &x in &[-3.0, -1.0, 0.0, 0.5, 2.0, 6.0] {
        let v = integrate_half_line(
            |u| (gaussian(x + u) + gaussian(x - u)) * u.powf(alpha - 1.0),
            &hints,
            Tolerance::default(),
        )
        .unwrap();
        let got = e.inverse_at(&e.transform(&f).unwrap().apply_symbol(dunkl_core::operators::Symbol::riesz_potential(alpha)), &[x])
            .unwrap()[0]
            .re;
        assert!((got - constant * v).abs() <= 1e-3 * constant * v, "x={x}: {got} vs {}", constant * v);
    }
    // The grid output agrees with the pointwise evaluation.
    let j = grid.len() / 2;
    let direct = e
        .inverse_at(&e.transform(&f).unwrap().apply_symbol(dunkl_core::operators::Symbol::riesz_potential(alpha)), &[grid.node(j)])
        .unwrap()[0];
    assert!((direct - i.values[j]).norm() < 1e-10);
}

#[test]
fn riesz_potential_scaling_law() {
    let (k, alpha) = (1.0, 0.7);
    let grid = Grid1D::balanced(1024).unwrap();
    let e = DunklEngine::new(k, grid).unwrap();
    let phi = |x: f64| (1.0 + 0.3 * x) * gaussian(x);
    let base = e.transform(&GridFunction1D::from_real_fn(grid, k, phi).unwrap()).unwrap();
    let base = base.apply_symbol(dunkl_core::operators::Symbol::riesz_potential(alpha));
    let xs = [-2.5, -1.0, -0.3, 0.4, 1.2, 2.0];
    for &lambda in &[0.5, 1.0, 2.0, 4.0] {
        let f = GridFunction1D::from_real_fn(grid, k, |x| phi(lambda * x)).unwrap();
        let spec = e
            .transform(&f)
            .unwrap()
            .apply_symbol(dunkl_core::operators::Symbol::riesz_potential(alpha));
        let got = re(&e.inverse_at(&spec, &xs).unwrap());
        let scaled: Vec<f64> = xs.iter().map(|x| lambda * x).collect();
        let want = re(&e.inverse_at(&base, &scaled).unwrap());
        for ((g, w), x) in got.iter().zip(&want).zip(&xs) {
            let w = lambda.powf(-alpha) * w;
            assert!((g - w).abs() <= 1e-3 * w.abs(), "lambda={lambda} x={x}: {g} vs {w}");
        }
    }
}

#[test]
fn riesz_potential_duality() {
    let (k, alpha) = (0.5, 0.8);
    let grid = Grid1D::balanced(1024).unwrap();
    let e = DunklEngine::new(k, grid).unwrap();
    let f = GridFunction1D::from_real_fn(grid, k, |x| (1.0 + x) * gaussian(x)).unwrap();
    let g = GridFunction1D::from_real_fn(grid, k, |x| (-x * x).exp()).unwrap();
    let i = e.riesz_potential(&f, alpha).unwrap();
    let lhs: Vec<Complex64> = i.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    let lhs = e.integrate_spatial(&lhs, 2.0 * k, false);
    let (ff, fg) = (e.transform(&f).unwrap(), e.transform(&g).unwrap());
    let rhs: Vec<Complex64> = ff.values.iter().zip(&fg.values).map(|(a, b)| a * b.conj()).collect();
    let rhs = e.integrate_spectral(&rhs, 2.0 * k - alpha, false);
    assert!((lhs - rhs).norm() <= 1e-4 * rhs.norm(), "{lhs} vs {rhs}");
}

#[test]
fn maximal_function_of_the_unit_indicator() {
    let grid = Grid1D::balanced(1024).unwrap();
    let e = DunklEngine::new(0.0, grid).unwrap();
    let f = GridFunction1D::from_real_fn(grid, 0.0, |x| if x.abs() < 1.0 { 1.0 } else { 0.0 }).unwrap();
    let v = e.fractional_maximal(&f, 0.0, &[0.0], MaximalOptions::default()).unwrap()[0];
    assert!((v.value - 1.0).abs() < 0.02, "{v:?}");
    let zero = GridFunction1D::from_real_fn(grid, 0.0, |_| 0.0).unwrap();
    assert_eq!(e.fractional_maximal(&zero, 0.0, &[0.3], MaximalOptions::default()).unwrap()[0].value, 0.0);
}

#[test]
fn maximal_radius_grid_is_converged() {
    let grid = Grid1D::balanced(256).unwrap();
    let e = DunklEngine::new(0.5, grid).unwrap();
    let f = GridFunction1D::from_real_fn(grid, 0.5, gaussian).unwrap();
    let xs = [0.0, 0.7, 1.5];
    let a = e.fractional_maximal(&f, 0.5, &xs, MaximalOptions::default()).unwrap();
    let b = e.fractional_maximal(&f, 0.5, &xs, MaximalOptions { radii: 256, ..Default::default() }).unwrap();
    for (a, b) in a.iter().zip(&b) {
        assert!((a.value - b.value).abs() <= 1e-3 * a.value, "{a:?} {b:?}");
    }
}
