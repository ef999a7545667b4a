use hrnet_core::constants::{compute_absorbing, compute_c1, entry_time};
use hrnet_core::{DerivedConstants, HRParameters};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = HRParameters> {
    (
        (0.1f64..10.0, 0.1f64..5.0, 0.01f64..3.0, 0.1f64..8.0),
        (0.001f64..1.0, 0.001f64..2.0, -3.0f64..3.0, -5.0f64..5.0),
        (0.01f64..5.0, 0.0f64..20.0, 2usize..6),
    )
        .prop_map(|((a, b, alpha, beta), (q, r, c, j), (d, p, n))| HRParameters {
            a,
            b,
            alpha,
            beta,
            q,
            r,
            c,
            j,
            d,
            p,
            n,
        })
}

proptest! {
    #[test]
    fn c1_decreasing_in_b(p in params(), db in 0.01f64..3.0) {
        let larger = HRParameters { b: p.b + db, ..p };
        prop_assert!(compute_c1(&larger) < compute_c1(&p));
    }

    #[test]
    fn c1_increasing_in_beta(p in params(), dbeta in 0.01f64..3.0) {
        let larger = HRParameters { beta: p.beta + dbeta, ..p };
        prop_assert!(compute_c1(&larger) > compute_c1(&p));
        let negated = HRParameters { beta: -p.beta, ..p };
        prop_assert_eq!(compute_c1(&negated), compute_c1(&p));
    }

    #[test]
    fn q_is_linear_in_measure(p in params(), omega in 0.01f64..50.0) {
        let one = compute_absorbing(&p, omega).big_q;
        let two = compute_absorbing(&p, 2.0 * omega).big_q;
        prop_assert!((two - 2.0 * one).abs() <= 1e-15 * two);
    }

    #[test]
    fn entry_time_monotone_and_clamped(
        p in params(),
        eta1 in 0.1f64..20.0,
        omega in 0.1f64..10.0,
        x in 0.0f64..1.0,
        y in 0.0f64..1.0,
    ) {
        let consts = DerivedConstants::compute(&p, eta1, eta1 / omega, omega).unwrap();
        let floor = consts.big_m * omega / consts.c1.max(1.0);
        prop_assert_eq!(entry_time(floor * x, &consts), 0.0);
        prop_assert_eq!(entry_time(floor, &consts), 0.0);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let rho_lo = floor * (1.0 + 1e6 * lo);
        let rho_hi = floor * (1.0 + 1e6 * hi);
        prop_assert!(entry_time(rho_lo, &consts) <= entry_time(rho_hi, &consts));
    }

    #[test]
    fn constants_finite_and_positive(p in params(), eta1 in 0.1f64..20.0, omega in 0.1f64..10.0) {
        let consts = DerivedConstants::compute(&p, eta1, eta1 / omega, omega).unwrap();
        for (name, v) in DerivedConstants::NAMES.iter().zip(consts.values()) {
            prop_assert!(v.is_finite() && v > 0.0, "{} = {}", name, v);
        }
    }

    #[test]
    fn toml_round_trip_is_bit_identical(p in params(), eta1 in 0.1f64..20.0) {
        let text = toml::to_string(&p).unwrap();
        let back: HRParameters = toml::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
        let a = DerivedConstants::compute(&p, eta1, eta1, 1.0).unwrap();
        let b = DerivedConstants::compute(&back, eta1, eta1, 1.0).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn zero_beta_is_singular() {
    let p = HRParameters {
        beta: 0.0,
        ..HRParameters::default_profile()
    };
    let err = DerivedConstants::compute(&p, 1.0, 1.0, 1.0).unwrap_err();
    assert!(err.to_string().contains("beta"), "{err}");
}

#[test]
fn unknown_key_rejected() {
    let text = "a = 3.0\nb = 1.0\nalpha = 1.0\nbeta = 5.0\nq = 0.024\nr = 0.006\nc = -1.6\nJ = 3.25\nd = 1.0\np = 1.0\nN = 2\ngamma = 1.0\n";
    let err = toml::from_str::<HRParameters>(text).unwrap_err();
    assert!(err.to_string().contains("gamma"), "{err}");
}
