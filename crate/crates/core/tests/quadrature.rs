use ballint_core::bessel::Nu;
use ballint_core::quad::{
    bessel_integral, bessel_j_normalized, remainder_at, remainder_decay_fit, sinc_integral, Pipeline, Precision,
    TailTreatment,
};
use ballint_core::{Error, Rat};
use proptest::prelude::*;
use rug::Float;

fn nu(s: &str) -> Nu {
    s.parse().unwrap()
}

#[test]
fn repeated_runs_are_bit_identical() {
    let p = Precision::digits(30).unwrap();
    let a = sinc_integral(7, &p).unwrap();
    let b = sinc_integral(7, &p).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.abs_err_bound, b.abs_err_bound);
    assert_eq!(a.summary(30), b.summary(30));

    let v = nu("3/2");
    let a = bessel_integral(&v, 6, 2.0, &p).unwrap();
    let b = bessel_integral(&v, 6, 2.0, &p).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.to_string(), b.to_string());
}

#[test]
fn doubling_the_cutoff_stays_within_the_previous_tail_bound() {
    let p = Precision::digits(30).unwrap();
    for (order, n, mult) in [("1", 5u32, 4.0), ("1", 9, 5.0), ("3/2", 7, 3.0)] {
        let v = nu(order);
        let near = bessel_integral(&v, n, mult, &p).unwrap();
        let far = bessel_integral(&v, n, 2.0 * mult, &p).unwrap();
        let TailTreatment::Bounded { bound } = &near.tail else {
            panic!("odd n keeps the envelope bound");
        };
        let shift = Float::with_val(near.value.prec(), &far.value - &near.value).abs();
        assert!(shift < *bound, "nu={order} n={n}: shift {} vs bound {}", shift.to_f64(), bound.to_f64());
        assert!(far.abs_err_bound < near.abs_err_bound);
    }
}

#[test]
fn closed_form_value_inside_reported_bound() {
    let p = Precision::digits(40).unwrap();
    let est = bessel_integral(&nu("1"), 2, 1.0, &p).unwrap();
    assert!(est.contains(&Float::with_val(200, 4)));
    assert!(est.err_f64() < 1e-35);
}

#[test]
fn first_order_remainder_halves_when_n_doubles() {
    let p = Precision::digits(30).unwrap();
    let coeffs = vec![Rat::one()];
    let (r100, _) = remainder_at(&Pipeline::Sinc, &coeffs, 100, &p).unwrap();
    let (r200, _) = remainder_at(&Pipeline::Sinc, &coeffs, 200, &p).unwrap();
    let ratio = (r100 / r200).to_f64().abs();
    assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
}

#[test]
fn second_order_sinc_remainder_slope() {
    let p = Precision::digits(30).unwrap();
    let fit = remainder_decay_fit(&Pipeline::Sinc, 1, &[50, 100, 200, 400], &p).unwrap();
    assert!((fit.slope + 2.0).abs() < 0.1, "{}", fit.slope);
    assert_eq!(fit.residuals.len(), 4);
}

#[test]
fn bessel_remainder_skips_the_vanishing_coefficient() {
    // at nu = 1 the n^-2 coefficient is zero, so the order-1 remainder
    // already falls like n^-3
    let p = Precision::digits(30).unwrap();
    let fit = remainder_decay_fit(&Pipeline::Bessel(nu("1")), 1, &[20, 40, 80, 160], &p).unwrap();
    assert!((fit.slope + 3.0).abs() < 0.3, "{}", fit.slope);
    // n^2 r(n) extrapolates to that zero coefficient
    assert!(fit.leading_estimate.abs() < 1e-6, "{}", fit.leading_estimate);
}

#[test]
fn insufficient_grid_is_reported() {
    let p = Precision::digits(20).unwrap();
    let err = remainder_decay_fit(&Pipeline::Sinc, 0, &[100, 200], &p).unwrap_err();
    assert!(matches!(err, Error::InsufficientData { usable: 2, required: 3 }));
}

#[test]
fn order_below_half_is_rejected() {
    assert!(matches!("1/4".parse::<Nu>(), Err(Error::Domain(_))));
}

fn order_strategy() -> impl Strategy<Value = Nu> {
    (1i64..12, 1i64..5).prop_filter_map("order >= 1/2", |(p, q)| Nu::new(Rat::frac(p, q)).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalized_bessel_is_bounded_by_one(v in order_strategy(), t in 0.0f64..100.0) {
        let p = Precision::digits(20).unwrap();
        let e = bessel_j_normalized(&v, &Float::with_val(128, t), &p).unwrap();
        let magnitude = e.value.to_f64().abs();
        prop_assert!(magnitude <= 1.0 + e.err_bound.to_f64(), "nu={v} t={t}: {magnitude}");
    }
}
