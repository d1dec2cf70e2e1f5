use convdual::duality::{apply, functional_image, in_dual, in_t, Functional};
use convdual::family::{border_elements, complete_hull};
use convdual::{Config, Domain, FamilySpec, Generator, ParamGrid, Status, TruncSeries, C};
use proptest::prelude::*;

fn small_cfg() -> Config {
    Config {
        grid: ParamGrid::new(2, 6),
        ..Config::default()
    }
}

fn complex(max: f64) -> impl Strategy<Value = C> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C::from_polar(r, t))
}

fn kernel() -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(complex(0.7), 1..5).prop_map(|tail| {
        let mut c = vec![C::new(1.0, 0.0)];
        c.extend(tail);
        TruncSeries::polynomial(c).unwrap()
    })
}

fn pencil_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (1usize..4, 0.3..1.5f64).prop_map(|(k, r)| FamilySpec::new(vec![Generator::disk_pencil(k, r)])),
        Just(FamilySpec::counterexample()),
        (0.2..1.0f64, 0.0..0.6f64).prop_map(|(a, b)| FamilySpec::new(vec![Generator::pencil(
            &[1, 2],
            vec![Domain::Disk { radius: a }, Domain::Annulus { inner: b * a, outer: a }],
        )])),
    ]
}

fn rational_family() -> FamilySpec {
    FamilySpec::new(vec![Generator::Rational {
        x: Domain::Disk { radius: 0.6 },
        y: Domain::Disk { radius: 0.4 },
    }])
}

fn status(g: &TruncSeries, v: &FamilySpec, cfg: &Config) -> Status {
    in_dual(g, v, cfg).unwrap().status
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pencil_closed_form_oracle(k in 1usize..5, a in complex(2.0), extra in prop::collection::vec(complex(3.0), 5)) {
        prop_assume!((a.norm() - 1.0).abs() > 1e-6);
        let mut c = vec![C::new(1.0, 0.0)];
        c.extend(extra);
        c[k] = a;
        let g = TruncSeries::polynomial(c).unwrap();
        let v = FamilySpec::new(vec![Generator::disk_pencil(k, 1.0)]);
        let cfg = Config::default();
        let dual = in_dual(&g, &v, &cfg).unwrap();
        let t = in_t(&g, &v, &cfg).unwrap();
        prop_assert_eq!(dual.is_verified(), a.norm() <= 1.0);
        prop_assert_eq!(dual.is_falsified(), a.norm() > 1.0);
        prop_assert_eq!(t.is_verified(), a.norm() < 1.0);
        prop_assert_eq!(t.is_falsified(), a.norm() > 1.0);
    }

    #[test]
    fn dual_boundary_is_included(k in 1usize..5, t in 0.0..std::f64::consts::TAU) {
        let mut c = vec![C::new(1.0, 0.0); k + 1];
        c[k] = C::from_polar(1.0, t);
        for j in 1..k {
            c[j] = C::new(0.0, 0.0);
        }
        let g = TruncSeries::polynomial(c).unwrap();
        let v = FamilySpec::new(vec![Generator::disk_pencil(k, 1.0)]);
        prop_assert!(in_dual(&g, &v, &Config::default()).unwrap().is_verified());
        prop_assert!(!in_t(&g, &v, &Config::default()).unwrap().is_verified());
    }

    #[test]
    fn duality_is_antitone_on_pencils(g in kernel(), k in 1usize..4, r in 0.1..1.5f64, s in 0.0..1.0f64) {
        let v = FamilySpec::new(vec![Generator::disk_pencil(k, r)]);
        let u = FamilySpec::new(vec![Generator::disk_pencil(k, r * s)]);
        let cfg = Config::default();
        if in_dual(&g, &v, &cfg).unwrap().is_verified() {
            prop_assert!(in_dual(&g, &u, &cfg).unwrap().is_verified());
        }
        if in_t(&g, &v, &cfg).unwrap().is_verified() {
            prop_assert!(in_t(&g, &u, &cfg).unwrap().is_verified());
        }
    }

    #[test]
    fn complete_hull_has_the_same_dual(g in kernel(), v in pencil_family()) {
        let cfg = Config::default();
        let plain = in_dual(&g, &v, &cfg).unwrap();
        let hull = in_dual(&g, &complete_hull(&v), &cfg).unwrap();
        prop_assert_eq!(plain.status, hull.status);
    }

    #[test]
    fn border_elements_have_the_same_dual(g in kernel(), v in pencil_family()) {
        let cfg = Config::default();
        let bor = border_elements(&v).unwrap();
        prop_assert_eq!(status(&g, &v, &cfg), status(&g, &bor, &cfg));
    }

    #[test]
    fn constant_kernel_is_in_every_dual(v in pencil_family()) {
        let e = TruncSeries::identity(4);
        let cfg = Config::default();
        prop_assert!(in_dual(&e, &v, &cfg).unwrap().is_verified());
        prop_assert!(in_t(&e, &v, &cfg).unwrap().is_verified());
        prop_assert!(in_t(&e, &complete_hull(&v), &cfg).unwrap().is_verified());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn duality_is_antitone_on_sampled_families(g in kernel(), k in 1usize..3) {
        let cfg = small_cfg();
        let u = rational_family();
        let mut gens = u.generators.clone();
        gens.push(Generator::disk_pencil(k, 0.8));
        let v = FamilySpec::new(gens);
        if in_dual(&g, &v, &cfg).unwrap().is_verified() {
            prop_assert!(in_dual(&g, &u, &cfg).unwrap().is_verified());
        }
        if in_t(&g, &v, &cfg).unwrap().is_verified() {
            prop_assert!(in_t(&g, &u, &cfg).unwrap().is_verified());
        }
    }

    #[test]
    fn sampled_values_lie_in_the_image_cloud(g in kernel(), v in pencil_family()) {
        let cfg = small_cfg();
        let lam = Functional::new(g, "g");
        let cloud = functional_image(&lam, &v, &cfg).unwrap();
        for f in v.sample(&cfg.grid, cfg.trunc) {
            let value = apply(&lam, &f.series).unwrap().value;
            prop_assert!(cloud.distance_to(value) <= 1e-12, "{} at {}", value, cloud.distance_to(value));
        }
    }
}

#[test]
fn constant_kernel_on_rational_family() {
    let e = TruncSeries::identity(4);
    let cfg = small_cfg();
    assert!(in_dual(&e, &rational_family(), &cfg).unwrap().is_verified());
    assert!(in_t(&e, &rational_family(), &cfg).unwrap().is_verified());
}
