//! Property and identity tests for the polynomial kernel, checked against an
//! independent monomial-basis oracle.

mod oracle;

use ctsched_bernstein::{
    antiderivative_coeffs, derivative_coeffs, eval_basis, fit_samples, from_hermite, matrices,
    to_hermite, BernsteinVec, PiecewisePoly, Sample,
};
use oracle::{
    bernstein_to_monomial, hermite_basis_monomials, monomial_to_bernstein4, Monomial,
};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -1000.0..1000.0f64
}

#[test]
fn partition_of_unity_all_degrees() {
    for degree in 2..=4usize {
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let sum: f64 = eval_basis(degree, t).unwrap().iter().sum();
            assert!(
                (sum - 1.0).abs() <= 1e-12,
                "degree {degree} t {t} sum {sum}"
            );
            assert!(eval_basis(degree, t).unwrap().iter().all(|&b| b >= -1e-15));
        }
    }
}

#[test]
fn basis_matches_symbolic_expansion() {
    for degree in 2..=4usize {
        for i in 0..=degree {
            let mono = oracle::bernstein_basis_monomial(i, degree);
            for k in 0..=50 {
                let t = k as f64 / 50.0;
                let got = eval_basis(degree, t).unwrap()[i];
                assert!((got - mono.eval(t)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn w_matrix_reproduces_hermite_basis() {
    let hermite = hermite_basis_monomials();
    for k in 0..=100 {
        let t = k as f64 / 100.0;
        let b3 = eval_basis(3, t).unwrap();
        for (row, h) in matrices::W.iter().zip(&hermite) {
            let got: f64 = row.iter().zip(&b3).map(|(w, b)| w * b).sum();
            assert!(
                (got - h.eval(t)).abs() <= 1e-12,
                "W * B3 mismatch at t {t}"
            );
        }
    }
}

#[test]
fn n_matrix_boundary_identities() {
    // N * B4(0) = 0 and N * B4(1) = 1/4 * ones.
    let b0 = eval_basis(4, 0.0).unwrap();
    let b1 = eval_basis(4, 1.0).unwrap();
    for row in matrices::N.iter() {
        let at0: f64 = row.iter().zip(&b0).map(|(n, b)| n * b).sum();
        let at1: f64 = row.iter().zip(&b1).map(|(n, b)| n * b).sum();
        assert!(at0.abs() <= 1e-12);
        assert!((at1 - 0.25).abs() <= 1e-12);
    }
}

#[test]
fn n_matrix_is_the_running_integral() {
    // Each row i: integral of B_{i,3} from 0 to t equals (N * B4)(t).
    for i in 0..4 {
        let mono = oracle::bernstein_basis_monomial(i, 3);
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let b4 = eval_basis(4, t).unwrap();
            let got: f64 = matrices::N[i].iter().zip(&b4).map(|(n, b)| n * b).sum();
            assert!((got - mono.integral(0.0, t)).abs() <= 1e-12);
        }
    }
}

#[test]
fn k_matrix_is_the_derivative() {
    for i in 0..4 {
        let dmono = oracle::bernstein_basis_monomial(i, 3).derivative();
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let b2 = eval_basis(2, t).unwrap();
            let got: f64 = matrices::K[i].iter().zip(&b2).map(|(kk, b)| kk * b).sum();
            assert!((got - dmono.eval(t)).abs() <= 1e-12);
        }
    }
}

#[test]
fn antiderivative_matches_symbolic_interpolation() {
    // Antiderivative of the constant one is t; interpolating t onto the
    // degree-4 basis must reproduce antiderivative_coeffs exactly.
    let one = BernsteinVec::cubic([1.0; 4]);
    let got = antiderivative_coeffs(&one).unwrap();
    let want = monomial_to_bernstein4(&Monomial(vec![0.0, 1.0]));
    for (g, w) in got.coeffs().iter().zip(want) {
        assert!((g - w).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn convex_hull_property(c in prop::array::uniform4(coeff())) {
        let v = BernsteinVec::cubic(c);
        let lo = v.min_coeff() - 1e-9;
        let hi = v.max_coeff() + 1e-9;
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let y = v.eval(t).unwrap();
            prop_assert!(y >= lo && y <= hi);
        }
    }

    #[test]
    fn hermite_round_trip(c in prop::array::uniform4(coeff())) {
        let v = BernsteinVec::cubic(c);
        let back = from_hermite(to_hermite(&v).unwrap());
        for (a, b) in v.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-9_f64.max(a.abs() * 1e-12));
        }
    }

    #[test]
    fn eval_agrees_with_monomial_expansion(c in prop::array::uniform4(coeff())) {
        let v = BernsteinVec::cubic(c);
        let mono = bernstein_to_monomial(v.coeffs());
        for i in 0..=50 {
            let t = i as f64 / 50.0;
            prop_assert!((v.eval(t).unwrap() - mono.eval(t)).abs() <= 1e-9);
        }
    }

    #[test]
    fn antiderivative_last_component_is_quarter_sum(c in prop::array::uniform4(coeff())) {
        let v = BernsteinVec::cubic(c);
        let f = antiderivative_coeffs(&v).unwrap();
        let want = 0.25 * v.coeffs().iter().sum::<f64>();
        prop_assert!((f.coeffs()[4] - want).abs() <= 1e-9);
        prop_assert_eq!(f.coeffs()[0], 0.0);
    }

    #[test]
    fn integration_differentiation_duality(
        c in prop::array::uniform4(coeff()),
        delta in 1.0..7200.0f64,
        v0 in -100.0..100.0f64,
    ) {
        // Reconstruct v(t) = v0 + delta * (N^T c)^T B4(tau), differentiate it
        // symbolically, and recover the original function values.
        let q = BernsteinVec::cubic(c);
        let anti = antiderivative_coeffs(&q).unwrap();
        let mut vol = bernstein_to_monomial(anti.coeffs());
        for a in vol.0.iter_mut() {
            *a *= delta;
        }
        vol.0[0] += v0;
        let dv = vol.derivative();
        for i in 0..=100 {
            let tau = i as f64 / 100.0;
            let recovered = dv.eval(tau) / delta;
            let original = q.eval(tau).unwrap();
            prop_assert!((recovered - original).abs() <= 1e-9 * original.abs().max(1.0));
        }
    }

    #[test]
    fn derivative_coeffs_agree_with_monomial_derivative(
        c in prop::array::uniform4(coeff()),
        delta in 1.0..7200.0f64,
    ) {
        let v = BernsteinVec::cubic(c);
        let d = derivative_coeffs(&v, delta).unwrap();
        let dmono = bernstein_to_monomial(v.coeffs()).derivative();
        for i in 0..=20 {
            let tau = i as f64 / 20.0;
            let got = d.eval(tau).unwrap();
            let want = dmono.eval(tau) / delta;
            prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }
}

#[test]
fn c1_fit_has_continuous_value_and_derivative() {
    // Hourly knots, 5-minute sampling of a smooth profile.
    let knots: Vec<f64> = (0..=6).map(|h| h as f64 * 3600.0).collect();
    let samples: Vec<Sample> = (0..=(6 * 12))
        .map(|i| {
            let t = i as f64 * 300.0;
            Sample {
                time_s: t,
                value: 60.0 + 25.0 * (t / 7000.0).sin() + 10.0 * (t / 2900.0).cos(),
            }
        })
        .collect();
    let fit = fit_samples(&samples, &knots, true).unwrap();
    for &k in &knots[1..6] {
        assert!((fit.eval(k).unwrap() - fit.left_limit(k).unwrap()).abs() < 1e-9);
        assert!((fit.eval_deriv(k).unwrap() - fit.left_deriv(k).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn piecewise_eval_spec_examples() {
    let p = PiecewisePoly::new(
        vec![0.0, 3600.0],
        vec![BernsteinVec::cubic([5.0; 4])],
    )
    .unwrap();
    assert_eq!(p.eval(1800.0).unwrap(), 5.0);

    let two = PiecewisePoly::new(
        vec![0.0, 1.0, 2.0],
        vec![
            BernsteinVec::cubic([0.0, 0.0, 0.0, 1.0]),
            BernsteinVec::cubic([1.0; 4]),
        ],
    )
    .unwrap();
    assert_eq!(two.eval(1.0).unwrap(), 1.0);
}
