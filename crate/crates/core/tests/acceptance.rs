//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::time::{Duration, Instant};

use ballint_core::appendix::appendix_fixture;
use ballint_core::bessel::{bessel_aj, bessel_expansion_default, c0_float, Nu};
use ballint_core::quad::{
    auto_cutoff_mult, bessel_integral, remainder_decay_fit, render, sinc_integral, Pipeline, Precision,
};
use ballint_core::report::{appendix_suite, richardson_second_coefficient, Status};
use ballint_core::sinc::{sinc_expansion, sinc_expansion_default, sinc_unit_value};
use ballint_core::Rat;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

fn verdict(criterion: u32, ok: bool, detail: String) {
    println!("criterion {criterion}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn rat(s: &str) -> Rat {
    s.parse().unwrap()
}

fn nu(s: &str) -> Nu {
    s.parse().unwrap()
}

#[test]
fn criterion_1_exact_sinc_coefficients() {
    let start = Instant::now();
    let coeffs = sinc_expansion(7, 8).unwrap().coeffs;
    let elapsed = start.elapsed();
    let published = [
        (0, "1"),
        (1, "-3/20"),
        (2, "-13/1120"),
        (3, "27/3200"),
        (4, "52791/3942400"),
        (6, "-124996631/10035200000"),
    ];
    let mismatches: Vec<String> = published
        .iter()
        .filter(|(j, v)| coeffs[*j] != rat(v))
        .map(|(j, v)| format!("c{j}: got {} want {v}", coeffs[*j]))
        .collect();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(10);
    verdict(1, ok, format!("c0..c4, c6 exact; {mismatches:?}; {elapsed:?}"));
}

#[test]
fn criterion_2_appendix_table() {
    let start = Instant::now();
    let reports = appendix_suite(&appendix_fixture()).unwrap();
    let elapsed = start.elapsed();
    let bad: Vec<&str> = reports
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.id.as_str())
        .collect();
    let errata: Vec<&str> = reports
        .iter()
        .filter(|r| r.status == Status::Erratum)
        .map(|r| r.id.as_str())
        .collect();
    // an erratum status already requires the engine inside 2x the fit
    // residual and the printed variant outside it
    let ok = bad.is_empty() && elapsed < Duration::from_secs(60);
    verdict(
        2,
        ok,
        format!("{} monomials, errata {errata:?}, failures {bad:?}, {elapsed:?}", reports.len()),
    );
}

#[test]
fn criterion_3_richardson_second_coefficient() {
    let (estimate, err) = richardson_second_coefficient().unwrap();
    let target = -13.0 / 1120.0;
    let ok = (estimate - target).abs() < 1e-4;
    verdict(3, ok, format!("L = {estimate:.10} (quadrature error {err:.1e}), c2 = {target:.10}"));
}

#[test]
fn criterion_4_closed_form_quadratures() {
    let start = Instant::now();
    let prec = Precision::digits(30).unwrap();
    let bits = prec.working_bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let root = |k: u32| Float::with_val(bits, k).sqrt();
    let cases = [
        (2u32, Float::with_val(bits, &pi / root(2))),
        (3, Float::with_val(bits, &pi * root(3)) * 3u32 / 8u32),
        (4, Float::with_val(bits, &pi * 2u32) / 3u32),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, truth) in cases {
        let est = sinc_integral(n, &prec).unwrap();
        let inside = est.contains(&truth);
        let tight = est.abs_err_bound <= 1e-20;
        ok &= inside && tight;
        detail.push(format!(
            "n={n}: {} vs {} ({})",
            est,
            render(&truth, 30),
            if inside && tight { "ok" } else { "outside bound" }
        ));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    verdict(4, ok, format!("{}; {elapsed:?}", detail.join("; ")));
}

#[test]
fn criterion_5_half_order_reduction() {
    let half = Nu::half();
    let mut ok = true;
    for m in 0..=4 {
        ok &= bessel_expansion_default(&half, m).unwrap().gammas == sinc_expansion_default(m).unwrap().coeffs;
    }
    let bits = 256;
    let c0 = c0_float(&half, bits);
    let unit = sinc_unit_value(bits);
    let gap = Float::with_val(bits, &c0 - &unit).abs();
    ok &= gap < 1e-30;
    verdict(
        5,
        ok,
        format!("gamma(1/2, m) == c(m) for m <= 4; c0(1/2) = {} (gap {:.1e})", render(&c0, 30), gap.to_f64()),
    );
}

#[test]
fn criterion_6_bessel_closed_forms() {
    let mut failures = Vec::new();
    for s in ["1/2", "1", "3/2", "2", "5/2", "3"] {
        let v = nu(s);
        let x = v.value().clone();
        let p = |c: i64| &x + &Rat::from(c);
        let sq = |r: Rat| &r * &r;
        let a = [
            Rat::from(-1i64) / (Rat::from(2i64) * sq(p(1)) * p(2)),
            Rat::from(-2i64) / (Rat::from(3i64) * sq(p(1)) * p(1) * p(2) * p(3)),
            p(-5) / (Rat::from(8i64) * sq(sq(p(1))) * p(2) * p(3) * p(4)),
        ];
        let x2 = &x * &x;
        let g = [
            -(&x * &p(1)) / (Rat::from(2i64) * p(2)),
            &x * &p(1) * (Rat::from(3i64) * x2.clone() + Rat::from(2i64) * x.clone() - Rat::from(5i64))
                / (Rat::from(24i64) * p(2) * p(3)),
            -(&x * &sq(p(1))) * (&x2 * &x - x2.clone() - Rat::from(4i64) * x.clone() - Rat::from(8i64))
                / (Rat::from(48i64) * sq(p(2)) * p(4)),
        ];
        let gammas = bessel_expansion_default(&v, 3).unwrap().gammas;
        for j in 0..3 {
            let order = j as u32 + 2;
            if bessel_aj(&v, order, order + 1) != a[j] {
                failures.push(format!("a{order}(nu={s})"));
            }
            if gammas[j + 1] != g[j] {
                failures.push(format!("gamma{}(nu={s})", j + 1));
            }
        }
    }
    verdict(6, failures.is_empty(), format!("36 identities; failures {failures:?}"));
}

#[test]
fn criterion_7_bessel_order_one() {
    let one = nu("1");
    let prec = Precision::digits(30).unwrap();
    let bits = prec.working_bits();
    let estimate = |n: u32| bessel_integral(&one, n, auto_cutoff_mult(&one, n, &prec).unwrap(), &prec).unwrap();
    let four = Float::with_val(bits, 4);
    let mut ok = true;
    let mut detail = Vec::new();

    let at_two = estimate(2);
    let gap = Float::with_val(bits, &at_two.value - &four).abs();
    ok &= gap <= 1e-8;
    detail.push(format!("I(2) = {at_two}"));

    let mut above = Vec::new();
    for n in 2..=20 {
        let e = estimate(n);
        if e.value > Float::with_val(bits, &four + &e.abs_err_bound) {
            above.push(n);
        }
    }
    ok &= above.is_empty();
    detail.push(format!("n in 2..=20 above 4 + bound: {above:?}"));

    // partial sum through n^-4, allowing twice the first omitted term
    let m = 4usize;
    let gammas = bessel_expansion_default(&one, m as u32 + 1).unwrap().gammas;
    let mut previous = Float::new(bits);
    for n in [10u32, 20, 40] {
        let e = estimate(n);
        let nf = Float::with_val(bits, n);
        let mut series = Float::new(bits);
        for (j, g) in gammas.iter().take(m + 1).enumerate() {
            series += g.to_float(bits) / Float::with_val(bits, nf.clone().pow(j as u32)) * 4u32;
        }
        let omitted = gammas[m + 1].to_float(bits) / Float::with_val(bits, nf.clone().pow(m as u32 + 1)) * 4u32;
        let allowed = Float::with_val(bits, &e.abs_err_bound + Float::with_val(bits, omitted.abs() * 2u32));
        let diff = Float::with_val(bits, &e.value - &series).abs();
        let consistent = diff <= allowed;
        let rising = e.value > previous && e.value < four;
        ok &= consistent && rising;
        detail.push(format!(
            "I({n}) = {e}, series gap {:.2e} <= {:.2e}: {consistent}",
            diff.to_f64(),
            allowed.to_f64()
        ));
        previous = e.value.clone();
    }
    verdict(7, ok, detail.join("; "));
}

#[test]
fn criterion_8_remainder_decay() {
    let prec = Precision::digits(30).unwrap();
    let mut ok = true;
    let mut slopes = Vec::new();
    for m in 0..=2u32 {
        let fit = remainder_decay_fit(&Pipeline::Sinc, m, &[50, 100, 200, 400], &prec).unwrap();
        let target = -(m as f64 + 1.0);
        ok &= (fit.slope - target).abs() <= 0.15;
        slopes.push(format!("m={m}: {:.4}", fit.slope));
    }
    verdict(8, ok, format!("slopes {}", slopes.join(", ")));
}

#[test]
fn criterion_9_ball_inequality() {
    let prec = Precision::digits(30).unwrap();
    let bits = prec.working_bits();
    let ball = Float::with_val(bits, Float::with_val(bits, 2).sqrt() * Float::with_val(bits, Constant::Pi));
    let ceiling = Float::with_val(bits, &ball + 1e-12);
    let mut violations = Vec::new();
    let mut equality = false;
    for n in 2..=40 {
        let doubled = Float::with_val(bits, &sinc_integral(n, &prec).unwrap().value * 2u32);
        if doubled > ceiling {
            violations.push(n);
        }
        if n == 2 {
            equality = Float::with_val(bits, &doubled - &ball).abs() <= 1e-12;
        }
    }
    verdict(
        9,
        violations.is_empty() && equality,
        format!("violations {violations:?}, equality at n=2: {equality}"),
    );
}
