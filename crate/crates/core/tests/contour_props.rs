use convdual::contour::{nonvanishing_in_disk, winding_number};
use convdual::{ContourConfig, Status, TruncSeries, C};
use proptest::prelude::*;

fn from_roots(roots: &[C]) -> TruncSeries {
    let mut c = vec![C::new(1.0, 0.0)];
    for &r in roots {
        // multiply by (1 - z / r)
        let mut next = vec![C::new(0.0, 0.0); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k] += a;
            next[k + 1] -= a / r;
        }
        c = next;
    }
    TruncSeries::polynomial(c).unwrap()
}

fn root_away_from(r: f64, gap: f64) -> impl Strategy<Value = C> {
    prop_oneof![
        (0.05..(r - gap), 0.0..std::f64::consts::TAU),
        ((r + gap)..2.5, 0.0..std::f64::consts::TAU),
    ]
    .prop_map(|(m, t)| C::from_polar(m, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn winding_counts_planted_roots(roots in proptest::collection::vec(root_away_from(0.8, 0.03), 1..7)) {
        let f = from_roots(&roots);
        let inside = roots.iter().filter(|z| z.norm() < 0.8).count() as i64;
        let w = winding_number(&f, 0.8, &ContourConfig::default()).unwrap();
        prop_assert_eq!(w, inside);
    }

    #[test]
    fn nonvanishing_is_sound(roots in proptest::collection::vec((0.05..2.5f64, 0.0..std::f64::consts::TAU), 1..6)) {
        let roots: Vec<C> = roots.into_iter().map(|(m, t)| C::from_polar(m, t)).collect();
        let f = from_roots(&roots);
        let cfg = ContourConfig::default();
        let r_max = cfg.outer_radius();
        let cert = nonvanishing_in_disk(&f, r_max, &cfg);
        if roots.iter().any(|z| z.norm() < r_max) {
            prop_assert_ne!(cert.status, Status::Verified);
        }
        if cert.status == Status::Verified {
            prop_assert!(cert.min_modulus > 0.0);
        }
        if cert.status == Status::Falsified {
            let w = cert.witness.unwrap();
            let v = f.eval(w);
            prop_assert!(v.value.norm() + v.error_bound < cfg.witness_tol);
        }
    }

    #[test]
    fn verified_radius_is_monotone(roots in proptest::collection::vec(root_away_from(1.0, 0.05), 1..5), a in 0.3..0.99f64, b in 0.0..1.0f64) {
        let roots: Vec<C> = roots.into_iter().filter(|z| z.norm() > 1.0).collect();
        prop_assume!(!roots.is_empty());
        let f = from_roots(&roots);
        let cfg = ContourConfig::default();
        let outer = nonvanishing_in_disk(&f, a, &cfg);
        prop_assume!(outer.status == Status::Verified);
        let inner = nonvanishing_in_disk(&f, a * b, &cfg);
        prop_assert_eq!(inner.status, Status::Verified);
        prop_assert!(inner.min_modulus >= outer.min_modulus * (1.0 - cfg.inflation_fraction) - 1e-12);
    }
}
