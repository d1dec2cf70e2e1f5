use convdual::duality::{
    apply, default_kernel_family, in_dual, in_dual_hull, in_perp, in_t, is_complete_t, Functional,
};
use convdual::family::{complete_hull, sigma_search};
use convdual::{Config, Domain, FamilySpec, Generator, Status, TruncSeries, C};

fn poly(c: &[f64]) -> TruncSeries {
    TruncSeries::from_real(c).unwrap()
}

fn cpoly(c: &[C]) -> TruncSeries {
    TruncSeries::polynomial(c.to_vec()).unwrap()
}

fn pencil(k: usize, r: f64) -> FamilySpec {
    FamilySpec::new(vec![Generator::disk_pencil(k, r)])
}

fn cfg() -> Config {
    Config::default()
}

#[test]
fn apply_coefficient_functional() {
    let lam = Functional::coefficient(1);
    for x in [C::new(0.3, -0.2), C::new(-1.0, 0.0)] {
        let v = apply(&lam, &cpoly(&[C::new(1.0, 0.0), x])).unwrap();
        assert!((v.value - x).norm() < 1e-15);
    }
}

#[test]
fn apply_point_evaluation() {
    let v = apply(&Functional::point_evaluation(8), &poly(&[1.0, 0.3])).unwrap();
    assert!((v.value - 1.3).norm() < 1e-15);
}

#[test]
fn apply_rational_kernel_matches_coefficient_sum() {
    let kernel = TruncSeries::from_rational(C::new(0.7, 0.1), C::new(-0.4, 0.3), 64).unwrap();
    let f = poly(&[1.0, -0.5, 0.25, 2.0, -1.5, 0.125]);
    let direct: C = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| a * kernel.coeff(k).unwrap())
        .sum();
    let v = apply(&Functional::new(kernel, "rat"), &f).unwrap();
    assert!((v.value - direct).norm() <= v.error_bound.max(1e-14));
}

#[test]
fn apply_refuses_unbounded_evaluation() {
    let lam = Functional::point_evaluation(16);
    assert!(apply(&lam, &TruncSeries::ones(16)).is_err());
}

#[test]
fn transpose_pencil_threshold() {
    let v = pencil(1, 1.0);
    let c = in_t(&poly(&[1.0, 0.9]), &v, &cfg()).unwrap();
    assert_eq!(c.status, Status::Verified);
    assert!((c.min_modulus - 0.1).abs() < 1e-12);

    let c = in_t(&poly(&[1.0, 1.0]), &v, &cfg()).unwrap();
    assert_eq!(c.status, Status::Falsified);
    assert!(c.member.unwrap().contains("-1"));
}

#[test]
fn transpose_trivial_cases() {
    let e = TruncSeries::identity(4);
    for v in [pencil(1, 1.0), FamilySpec::counterexample(), FamilySpec::identity()] {
        assert!(in_t(&e, &v, &cfg()).unwrap().is_verified());
    }
    let g = TruncSeries::from_rational(C::new(2.0, 0.0), C::new(0.5, 0.0), 64).unwrap();
    assert!(in_t(&g, &FamilySpec::identity(), &cfg()).unwrap().is_verified());
}

#[test]
fn transpose_rejects_bad_kernels() {
    assert!(in_t(&poly(&[2.0, 1.0]), &pencil(1, 1.0), &cfg()).is_err());
    assert!(in_t(&TruncSeries::ones(8), &pencil(1, 1.0), &cfg()).is_err());
}

#[test]
fn transpose_rational_family_sampled() {
    let v = FamilySpec::new(vec![Generator::Rational {
        x: Domain::Disk { radius: 0.5 },
        y: Domain::Disk { radius: 0.5 },
    }]);
    // (f * e)(1) = 1 everywhere
    assert!(in_t(&TruncSeries::identity(8), &v, &cfg()).unwrap().is_verified());
    // g = 1 + 4z: (f * g)(1) = 1 + 4(x - y) vanishes at x - y = -1/4
    let c = in_t(&poly(&[1.0, 4.0]), &v, &cfg()).unwrap();
    assert_ne!(c.status, Status::Verified);
}

#[test]
fn dual_pencil_examples() {
    let v = pencil(1, 1.0);
    let c = in_dual(&TruncSeries::ones(64), &v, &cfg()).unwrap();
    assert_eq!(c.status, Status::Verified);

    let c = in_dual(&poly(&[1.0, 1.2]), &v, &cfg()).unwrap();
    assert_eq!(c.status, Status::Falsified);
    let z = c.witness.unwrap();
    assert!((z - C::new(-1.0 / 1.2, 0.0)).norm() < 1e-9, "{z}");

    for v in [pencil(1, 1.0), FamilySpec::counterexample(), FamilySpec::identity()] {
        assert!(in_dual(&TruncSeries::identity(3), &v, &cfg()).unwrap().is_verified());
    }
}

#[test]
fn dual_fixed_member_uses_contours() {
    let v = FamilySpec::new(vec![Generator::fixed(poly(&[1.0, 1.0]))]);
    assert!(in_dual(&poly(&[1.0, 0.5]), &v, &cfg()).unwrap().is_verified());
    let c = in_dual(&poly(&[1.0, 2.0]), &v, &cfg()).unwrap();
    assert_eq!(c.status, Status::Falsified);
    assert!((c.witness.unwrap() - C::new(-0.5, 0.0)).norm() < 1e-8);
}

#[test]
fn perp_examples() {
    let u = FamilySpec::new(vec![Generator::disk_pencil(1, 0.9)]);
    assert!(in_perp(&poly(&[1.0, 0.5]), &u, &cfg()).unwrap().is_verified());
    let c = in_perp(&poly(&[1.0, 1.2]), &u, &cfg()).unwrap();
    assert_eq!(c.status, Status::Falsified);
    let m = c.member.unwrap();
    assert!(m.contains("-0.8333"), "{m}");
    assert!(in_perp(&TruncSeries::identity(2), &u, &cfg()).unwrap().is_verified());
}

#[test]
fn dual_hull_pencil_examples() {
    let v = pencil(1, 1.0);
    let k = default_kernel_family();
    assert!(in_dual_hull(&poly(&[1.0, 1.0]), &v, &k, &cfg()).unwrap().is_verified());
    assert!(in_dual_hull(&poly(&[1.0, 1.01]), &v, &k, &cfg()).unwrap().is_falsified());
    assert!(in_dual_hull(&TruncSeries::identity(1), &v, &k, &cfg()).unwrap().is_verified());
    for f in v.sample(&cfg().grid, 8) {
        assert!(in_dual_hull(&f.series, &v, &k, &cfg()).unwrap().is_verified(), "{}", f.tag);
    }
}

#[test]
fn completeness_examples() {
    let k = default_kernel_family();
    assert!(is_complete_t(&pencil(1, 1.0), &k, &cfg()).unwrap().is_verified());

    let v = FamilySpec::new(vec![Generator::fixed(poly(&[1.0, 1.0]))]);
    let c = is_complete_t(&v, &k, &cfg()).unwrap();
    assert_eq!(c.status, Status::Falsified);
    // brute force over (c, x): 1 + c x = 0 with |x| <= 1 needs |c| >= 1
    let e = FamilySpec::new(vec![Generator::fixed(TruncSeries::identity(0))]);
    assert!(is_complete_t(&v, &e, &cfg()).unwrap().is_verified());
}

#[test]
fn completeness_brute_force_oracle() {
    let v = FamilySpec::new(vec![Generator::fixed(poly(&[1.0, 1.0]))]);
    let hull = complete_hull(&v);
    for i in 0..12 {
        for j in 0..12 {
            let c = C::new(-1.5 + 0.27 * i as f64, -1.5 + 0.27 * j as f64);
            let g = cpoly(&[C::new(1.0, 0.0), c]);
            let cert = in_t(&g, &hull, &cfg()).unwrap();
            // oracle: min over |x| <= 1 of |1 + c x| is max(0, 1 - |c|)
            let oracle = (0..=64)
                .flat_map(|a| (0..64).map(move |b| C::from_polar(a as f64 / 64.0, b as f64 * 0.0981747704)))
                .map(|x| (C::new(1.0, 0.0) + c * x).norm())
                .fold(f64::INFINITY, f64::min);
            if c.norm() < 0.999 {
                assert!(cert.is_verified(), "c = {c}");
                assert!(oracle > 0.0);
            } else if c.norm() > 1.001 {
                assert!(cert.is_falsified(), "c = {c}");
                assert!(oracle < 0.1);
            }
        }
    }
}

#[test]
fn sigma_search_examples() {
    let half = pencil(1, 0.5);
    let g = TruncSeries::ones(64);
    let s = sigma_search(&half, &g, 4.0, &cfg()).unwrap().unwrap();
    assert!(s > 1.0 && s < 2.0, "σ = {s}");
    assert!(s > 2.0 - 1e-6);

    let s = sigma_search(&FamilySpec::identity(), &poly(&[1.0, 3.0]), 4.0, &cfg()).unwrap();
    assert_eq!(s, Some(2.5));

    assert!(sigma_search(&pencil(1, 1.0), &g, 4.0, &cfg()).is_err());
}
