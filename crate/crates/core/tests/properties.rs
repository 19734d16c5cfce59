use std::f64::consts::PI;

use escdyn::harness::{check_union_containment, SampleSpec};
use escdyn::orbit::orbit;
use escdyn::raster::{rasterize, GridSpec};
use escdyn::singular::{critical_points, singular_set};
use escdyn::{classify, Certificate, EscapeConfig, FunctionExpr, Value, Verdict, Window};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(x, y)| c(x, y))
}

fn coefficient() -> impl Strategy<Value = Complex64> {
    (0.2f64..2.0, -PI..PI).prop_map(|(m, t)| Complex64::from_polar(m, t))
}

fn atom() -> impl Strategy<Value = FunctionExpr> {
    (coefficient(), coefficient(), point(1.5), point(1.5))
        .prop_map(|(a, b, cc, d)| FunctionExpr::exp_affine(a, b, cc, d).expect("nonzero a, b"))
}

fn small_expr() -> impl Strategy<Value = FunctionExpr> {
    let leaf = prop_oneof![atom(), Just(FunctionExpr::fatou()), Just(FunctionExpr::exp(c(0.25, 0.0)).unwrap()),];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, g)| f.compose(&g)),
            (inner.clone(), 1u32..3).prop_map(|(f, n)| f.iterate(n).unwrap()),
            (inner, point(2.0)).prop_map(|(f, t)| f.translate(t)),
        ]
    })
}

fn iterate_n(f: &FunctionExpr, z: Complex64, n: u32) -> Value {
    (0..n).fold(Value::Finite(z), |v, _| f.eval_value(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fatou_translation_law(z in point(6.0), p in -20i64..20) {
        let f = FunctionExpr::fatou();
        let shift = c(0.0, 2.0 * PI * p as f64);
        if let (Value::Finite(a), Value::Finite(b)) = (f.eval(z + shift), f.eval(z)) {
            prop_assert!((a - (b + shift)).norm() <= 1e-12 * (1.0 + b.norm()) * (1.0 + shift.norm()));
        }
    }

    #[test]
    fn iterate_matches_repeated_eval_bitwise(f in small_expr(), z in point(2.0), n in 1u32..5) {
        prop_assert_eq!(f.iterate(n).unwrap().eval(z), iterate_n(&f, z, n));
    }

    #[test]
    fn derivative_matches_central_differences(f in small_expr(), z in point(1.4)) {
        let h = 1e-6;
        let d = f.eval_derivative(z);
        let parts = [f.eval(z + h), f.eval(z - h), f.eval(z + c(0.0, h)), f.eval(z - c(0.0, h))];
        if let (Value::Finite(d), [Value::Finite(xp), Value::Finite(xm), Value::Finite(yp), Value::Finite(ym)]) = (d, parts) {
            // Average of the real- and imaginary-direction estimates.
            let fd = ((xp - xm) / (2.0 * h) + (yp - ym) / c(0.0, 2.0 * h)) / 2.0;
            let value = f.eval(z).unwrap().norm();
            // Central differences lose about |f|·eps/h to cancellation.
            let noise = 1e-16 * (value + 1.0) / h;
            prop_assume!(d.norm() < 1e8);
            prop_assert!((d - fd).norm() <= 1e-6 * d.norm().max(1.0) + 10.0 * noise, "d={} fd={}", d, fd);
        }
    }

    #[test]
    fn translated_orbits_follow_the_shift(z in point(3.0)) {
        let f = FunctionExpr::fatou();
        let g = FunctionExpr::fatou_shifted();
        let (mut fv, mut gv) = (Value::Finite(z), Value::Finite(z));
        for n in 1..=20 {
            fv = f.eval_value(fv);
            gv = g.eval_value(gv);
            if let (Value::Finite(a), Value::Finite(b)) = (fv, gv) {
                let shift = 2.0 * PI * n as f64;
                prop_assert!((b - (a + c(0.0, shift))).norm() <= 1e-9 * (1.0 + a.norm() + shift));
            } else {
                break;
            }
        }
    }

    #[test]
    fn real_part_certificate_is_monotone(z in point(6.0), shifted in any::<bool>()) {
        let f = if shifted { FunctionExpr::fatou_shifted() } else { FunctionExpr::fatou() };
        let rec = orbit(&f, z, 80, &EscapeConfig::default());
        if rec.classification.certificate == Certificate::RealPartCert {
            let k = rec.classification.step;
            for w in rec.values[k..].windows(2) {
                // Past 2^46 the increment of at least 1 - e^{-0.05} is below
                // half an ulp and z + 1 rounds back to z.
                if w[0].re < (1u64 << 46) as f64 {
                    prop_assert!(w[1].re > w[0].re, "{} -> {}", w[0], w[1]);
                } else {
                    prop_assert!(w[1].re >= w[0].re);
                }
            }
        }
    }

    #[test]
    fn classify_is_deterministic(f in small_expr(), z in point(3.0)) {
        let cfg = EscapeConfig::default().with_max_iter(60);
        prop_assert_eq!(classify(&f, z, &cfg), classify(&f, z, &cfg));
    }

    #[test]
    fn raising_the_horizon_never_flips_a_verdict(f in small_expr(), z in point(3.0), m in 5usize..60) {
        let low = classify(&f, z, &EscapeConfig::default().with_max_iter(m)).verdict;
        let high = classify(&f, z, &EscapeConfig::default().with_max_iter(2 * m)).verdict;
        if low != Verdict::Undecided {
            prop_assert_eq!(low, high);
        }
    }

    #[test]
    fn critical_points_are_critical(a in coefficient(), b in coefficient(), cc in coefficient(), d in point(1.0)) {
        let f = FunctionExpr::exp_affine(a, b, cc, d).unwrap();
        let FunctionExpr::ExpAffine(atom) = &f else { unreachable!() };
        for (_, z) in critical_points(atom, 5) {
            let dz = f.eval_derivative(z).unwrap();
            prop_assert!(dz.norm() <= 1e-10 * (1.0 + (a * b).norm()) * (1.0 + cc.norm()), "f'({})={}", z, dz);
        }
    }

    #[test]
    fn exponential_maps_are_bounded_type(l in coefficient()) {
        let s = singular_set(&FunctionExpr::exp(l).unwrap(), 20).unwrap();
        prop_assert!(s.is_bounded());
        prop_assert_eq!(s.asymptotic_values().count(), 1);
    }

    #[test]
    fn reports_never_count_undecided(seed in any::<u64>(), m in 3usize..30) {
        // Short horizons leave many samples undecided; none may be counted.
        let f = FunctionExpr::exp(c(0.3, 0.0)).unwrap();
        let g = FunctionExpr::fatou();
        let cfg = EscapeConfig::default().with_max_iter(m);
        let spec = SampleSpec::random(Window::new(-3.0, 3.0, -3.0, 3.0), 40, seed);
        let r = check_union_containment(&f, &g, &spec, &cfg);
        prop_assert_eq!(r.counts.applicable, r.counts.passed + r.counts.violated);
        prop_assert_eq!(r.counts.total(), 40);
        let undecided = spec.points().iter().filter(|z| classify(&f.compose(&g), **z, &cfg).verdict != Verdict::Escaping).count();
        prop_assert!(r.counts.vacuous_undecided >= undecided);
        prop_assert_eq!(r.counts, check_union_containment(&f, &g, &spec, &cfg).counts);
    }
}

#[test]
fn doubling_max_iter_keeps_escaping_cells() {
    let grid = GridSpec::new(Window::new(-3.0, 1.0, -2.0, 2.0), 40, 40);
    for f in [FunctionExpr::exp(c(0.3, 0.0)).unwrap(), FunctionExpr::exp(c(0.5, 0.5)).unwrap(), FunctionExpr::fatou()] {
        let low = rasterize(&f, &grid, &EscapeConfig::default().with_max_iter(40)).unwrap();
        let high = rasterize(&f, &grid, &EscapeConfig::default().with_max_iter(80)).unwrap();
        for (a, b) in low.cells.iter().zip(&high.cells) {
            if a.verdict != Verdict::Undecided {
                assert_eq!(a.verdict, b.verdict);
            }
        }
    }
}

#[test]
fn raster_bytes_do_not_depend_on_worker_count() {
    let grid = GridSpec::new(Window::new(-2.0, 2.0, -4.0, 4.0), 33, 17);
    let f = FunctionExpr::exp(c(0.3, 0.2)).unwrap().compose(&FunctionExpr::fatou());
    let cfg = EscapeConfig::default();
    let images: Vec<Vec<u8>> = [1, 2, 5]
        .into_iter()
        .map(|n| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
            pool.install(|| rasterize(&f, &grid, &cfg).unwrap().ppm_bytes())
        })
        .collect();
    assert_eq!(images[0], images[1]);
    assert_eq!(images[0], images[2]);
}

#[test]
fn fatou_critical_values_have_unbounded_type() {
    let s = singular_set(&FunctionExpr::fatou(), 50).unwrap();
    assert!(!s.is_bounded());
    assert_eq!(s.asymptotic_values().count(), 0);
}
