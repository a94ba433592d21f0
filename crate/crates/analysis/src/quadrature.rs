//! Exact integration of the absolute difference of two piecewise
//! polynomials. The difference is piecewise polynomial of degree at most 4;
//! each interval is split at the real roots of the difference (located by
//! recursive critical-point bracketing and bisection) and integrated in
//! closed form between the splits.

use ctsched_bernstein::{BernsteinVec, PiecewisePoly};

use crate::error::AnalysisError;

const ROOT_TOL: f64 = 1e-13;
const KNOT_TOL: f64 = 1e-9;

/// Dense monomial coefficients, lowest power first.
#[derive(Debug, Clone)]
struct Monomial(Vec<f64>);

impl Monomial {
    fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, a| acc * t + a)
    }

    fn derivative(&self) -> Monomial {
        Monomial(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| k as f64 * a)
                .collect(),
        )
    }

    fn antiderivative(&self) -> Monomial {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, a)| a / (k + 1) as f64));
        Monomial(out)
    }

    fn degree(&self) -> usize {
        self.0
            .iter()
            .rposition(|a| a.abs() > 0.0)
            .unwrap_or(0)
    }

    fn scale(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, a| m.max(a.abs()))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

fn bernstein_to_monomial(c: &BernsteinVec) -> Monomial {
    let n = c.degree();
    let mut out = vec![0.0; n + 1];
    for (i, coeff) in c.coeffs().iter().enumerate() {
        // B_{i,n}(t) = C(n,i) sum_j C(n-i,j) (-1)^j t^(i+j)
        for j in 0..=(n - i) {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            out[i + j] += coeff * binomial(n, i) * binomial(n - i, j) * sign;
        }
    }
    Monomial(out)
}

/// Compose p with the affine map t -> alpha + beta * s, exactly.
fn affine_compose(p: &Monomial, alpha: f64, beta: f64) -> Monomial {
    let n = p.0.len();
    let mut out = vec![0.0; n];
    // (alpha + beta s)^k expanded binomially.
    for (k, a) in p.0.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        for j in 0..=k {
            out[j] += a * binomial(k, j) * alpha.powi((k - j) as i32) * beta.powi(j as i32);
        }
    }
    Monomial(out)
}

/// Real roots of `p` inside [0, 1], ascending. Located by recursing on the
/// derivative for critical points and bisecting every sign-changing bracket.
fn roots_in_unit(p: &Monomial) -> Vec<f64> {
    let scale = p.scale();
    if scale == 0.0 {
        return Vec::new();
    }
    match p.degree() {
        0 => Vec::new(),
        1 => {
            let r = -p.0[0] / p.0[1];
            if (0.0..=1.0).contains(&r) {
                vec![r]
            } else {
                Vec::new()
            }
        }
        _ => {
            let mut brackets = vec![0.0];
            brackets.extend(roots_in_unit(&p.derivative()));
            brackets.push(1.0);
            brackets.dedup_by(|a, b| (*a - *b).abs() < ROOT_TOL);
            let mut roots = Vec::new();
            let zero_tol = scale * 1e-12;
            for pair in brackets.windows(2) {
                let (mut lo, mut hi) = (pair[0], pair[1]);
                let (flo, fhi) = (p.eval(lo), p.eval(hi));
                if flo.abs() <= zero_tol {
                    push_root(&mut roots, lo);
                    continue;
                }
                if fhi.abs() <= zero_tol {
                    push_root(&mut roots, hi);
                    continue;
                }
                if flo.signum() == fhi.signum() {
                    continue;
                }
                let mut flo = flo;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fmid = p.eval(mid);
                    if fmid == 0.0 || hi - lo < ROOT_TOL {
                        break;
                    }
                    if fmid.signum() == flo.signum() {
                        lo = mid;
                        flo = fmid;
                    } else {
                        hi = mid;
                    }
                }
                push_root(&mut roots, 0.5 * (lo + hi));
            }
            roots
        }
    }
}

fn push_root(roots: &mut Vec<f64>, r: f64) {
    if roots.last().is_none_or(|last| (r - last).abs() > ROOT_TOL) {
        roots.push(r);
    }
}

/// Exact integral of |p| over [0, 1].
fn integral_abs_unit(p: &Monomial) -> f64 {
    let mut splits = vec![0.0];
    splits.extend(roots_in_unit(p));
    splits.push(1.0);
    splits.dedup_by(|a, b| (*a - *b).abs() < ROOT_TOL);
    let anti = p.antiderivative();
    let mut total = 0.0;
    for pair in splits.windows(2) {
        total += (anti.eval(pair[1]) - anti.eval(pair[0])).abs();
    }
    total
}

fn union_knots(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b.iter()).cloned().collect();
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    all.dedup_by(|x, y| (*x - *y).abs() < KNOT_TOL);
    all
}

/// Integral over the shared horizon of |a(t) - b(t)| dt, in value-seconds.
pub fn integral_abs_diff(a: &PiecewisePoly, b: &PiecewisePoly) -> Result<f64, AnalysisError> {
    if (a.start_time() - b.start_time()).abs() > KNOT_TOL
        || (a.end_time() - b.end_time()).abs() > KNOT_TOL
    {
        return Err(AnalysisError::HorizonMismatch {
            a: (a.start_time(), a.end_time()),
            b: (b.start_time(), b.end_time()),
        });
    }
    let knots = union_knots(a.knots(), b.knots());
    let mut total = 0.0;
    for pair in knots.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let width = hi - lo;
        if width < KNOT_TOL {
            continue;
        }
        let diff = restricted_difference(a, b, lo, hi)?;
        total += width * integral_abs_unit(&diff);
    }
    Ok(total)
}

/// The difference a - b restricted to [lo, hi], as a monomial in the local
/// coordinate of that window.
fn restricted_difference(
    a: &PiecewisePoly,
    b: &PiecewisePoly,
    lo: f64,
    hi: f64,
) -> Result<Monomial, AnalysisError> {
    let mid = 0.5 * (lo + hi);
    let mut out = vec![0.0; 5];
    for (poly, sign) in [(a, 1.0), (b, -1.0)] {
        let h = poly.interval_index(mid.clamp(poly.start_time(), poly.end_time()))?;
        let k0 = poly.knots()[h];
        let delta = poly.interval_length(h);
        let mono = bernstein_to_monomial(&poly.pieces()[h]);
        // Local window coordinate s in [0,1] maps to tau = alpha + beta s.
        let alpha = (lo - k0) / delta;
        let beta = (hi - lo) / delta;
        let restricted = affine_compose(&mono, alpha, beta);
        for (k, c) in restricted.0.iter().enumerate() {
            out[k] += sign * c;
        }
    }
    Ok(Monomial(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots_are_found() {
        // (t - 0.2)(t - 0.5)(t - 0.9)
        let p = Monomial(vec![-0.09, 0.73, -1.6, 1.0]);
        let roots = roots_in_unit(&p);
        assert_eq!(roots.len(), 3);
        for (got, want) in roots.iter().zip([0.2, 0.5, 0.9]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn abs_integral_of_shifted_line() {
        // |t - 0.5| integrates to 0.25 over [0,1].
        let p = Monomial(vec![-0.5, 1.0]);
        assert!((integral_abs_unit(&p) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn double_root_does_not_break_the_split() {
        // (t - 0.5)^2 >= 0: integral of p itself.
        let p = Monomial(vec![0.25, -1.0, 1.0]);
        assert!((integral_abs_unit(&p) - (0.25 - 0.5 + 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn identical_polys_have_zero_distance() {
        let p = PiecewisePoly::constant_per_interval(vec![0.0, 3600.0, 7200.0], &[5.0, 7.0])
            .unwrap();
        assert!(integral_abs_diff(&p, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn constant_offset_integrates_to_area() {
        let a = PiecewisePoly::constant_per_interval(vec![0.0, 7200.0], &[10.0]).unwrap();
        let b = PiecewisePoly::constant_per_interval(vec![0.0, 3600.0, 7200.0], &[12.0, 12.0])
            .unwrap();
        // 2 MW over 2 h = 4 MWh = 14400 MW s.
        assert!((integral_abs_diff(&a, &b).unwrap() - 14400.0).abs() < 1e-9);
    }

    #[test]
    fn mismatched_horizons_error() {
        let a = PiecewisePoly::constant_per_interval(vec![0.0, 3600.0], &[1.0]).unwrap();
        let b = PiecewisePoly::constant_per_interval(vec![0.0, 7200.0], &[1.0]).unwrap();
        assert!(matches!(
            integral_abs_diff(&a, &b),
            Err(AnalysisError::HorizonMismatch { .. })
        ));
    }
}
