use nalgebra::{Cholesky, DMatrix, DVector};

use crate::basis::{eval_basis, BernsteinVec};
use crate::error::FitError;
use crate::piecewise::PiecewisePoly;
use crate::samples::Sample;

/// Least-squares fit of sampled data onto a piecewise cubic.
///
/// Without `enforce_c1` every interval is fitted independently and needs at
/// least four samples. With `enforce_c1` the value and time-derivative
/// continuity constraints at interior knots are eliminated by reparametrizing
/// the fit in knot values and slopes, and the normal equations are solved for
/// the whole horizon at once.
pub fn fit_samples(
    samples: &[Sample],
    knots: &[f64],
    enforce_c1: bool,
) -> Result<PiecewisePoly, FitError> {
    if knots.len() < 2 || knots.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(FitError::Basis(crate::BernsteinError::BadKnots));
    }
    for (i, pair) in samples.windows(2).enumerate() {
        if pair[1].time_s < pair[0].time_s {
            return Err(FitError::UnsortedSamples(i + 1));
        }
    }
    let num_intervals = knots.len() - 1;
    let mut per_interval: Vec<Vec<&Sample>> = vec![Vec::new(); num_intervals];
    for s in samples {
        if s.time_s < knots[0] || s.time_s > knots[num_intervals] {
            return Err(FitError::SampleOutsideKnots(s.time_s));
        }
        let h = if s.time_s == knots[num_intervals] {
            num_intervals - 1
        } else {
            knots.partition_point(|&k| k <= s.time_s) - 1
        };
        per_interval[h].push(s);
    }

    if enforce_c1 {
        fit_c1(&per_interval, knots)
    } else {
        fit_independent(&per_interval, knots)
    }
}

/// Root-mean-square residual of a fit against its samples.
pub fn fit_rmse(fit: &PiecewisePoly, samples: &[Sample]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let sum: f64 = samples
        .iter()
        .map(|s| {
            let v = fit.eval(s.time_s).unwrap_or(f64::NAN);
            (v - s.value) * (v - s.value)
        })
        .sum();
    (sum / samples.len() as f64).sqrt()
}

fn fit_independent(
    per_interval: &[Vec<&Sample>],
    knots: &[f64],
) -> Result<PiecewisePoly, FitError> {
    let mut pieces = Vec::with_capacity(per_interval.len());
    for (h, bucket) in per_interval.iter().enumerate() {
        if bucket.len() < 4 {
            return Err(FitError::Underdetermined {
                interval: h,
                samples: bucket.len(),
                needed: 4,
            });
        }
        let delta = knots[h + 1] - knots[h];
        let mut design = DMatrix::zeros(bucket.len(), 4);
        let mut rhs = DVector::zeros(bucket.len());
        for (row, s) in bucket.iter().enumerate() {
            let tau = ((s.time_s - knots[h]) / delta).clamp(0.0, 1.0);
            let b = eval_basis(3, tau)?;
            for (col, bv) in b.iter().enumerate() {
                design[(row, col)] = *bv;
            }
            rhs[row] = s.value;
        }
        let coeffs = solve_normal_equations(&design, &rhs)
            .ok_or(FitError::RankDeficient { interval: h })?;
        pieces.push(
            BernsteinVec::new(coeffs.iter().cloned().collect()).map_err(FitError::Basis)?,
        );
    }
    Ok(PiecewisePoly::new(knots.to_vec(), pieces)?)
}

fn fit_c1(per_interval: &[Vec<&Sample>], knots: &[f64]) -> Result<PiecewisePoly, FitError> {
    let num_intervals = per_interval.len();
    for (h, bucket) in per_interval.iter().enumerate() {
        if bucket.len() < 2 {
            return Err(FitError::Underdetermined {
                interval: h,
                samples: bucket.len(),
                needed: 2,
            });
        }
    }
    // Unknowns: value and slope at every knot. An interval's four Bernstein
    // coefficients follow from the Hermite form, which makes the continuity
    // constraints hold by construction.
    let num_samples: usize = per_interval.iter().map(Vec::len).sum();
    let num_unknowns = 2 * (num_intervals + 1);
    let mut design = DMatrix::zeros(num_samples, num_unknowns);
    let mut rhs = DVector::zeros(num_samples);
    let mut row = 0;
    for (h, bucket) in per_interval.iter().enumerate() {
        let delta = knots[h + 1] - knots[h];
        for s in bucket {
            let tau = ((s.time_s - knots[h]) / delta).clamp(0.0, 1.0);
            let b = eval_basis(3, tau)?;
            design[(row, 2 * h)] = b[0] + b[1];
            design[(row, 2 * h + 1)] = delta * b[1] / 3.0;
            design[(row, 2 * h + 2)] = b[2] + b[3];
            design[(row, 2 * h + 3)] = -delta * b[2] / 3.0;
            rhs[row] = s.value;
            row += 1;
        }
    }
    let theta = solve_normal_equations(&design, &rhs).ok_or_else(|| {
        let worst = per_interval
            .iter()
            .enumerate()
            .min_by_key(|(_, b)| b.len())
            .map(|(h, _)| h)
            .unwrap_or(0);
        FitError::RankDeficient { interval: worst }
    })?;
    let mut pieces = Vec::with_capacity(num_intervals);
    for h in 0..num_intervals {
        let delta = knots[h + 1] - knots[h];
        let v0 = theta[2 * h];
        let m0 = theta[2 * h + 1];
        let v1 = theta[2 * h + 2];
        let m1 = theta[2 * h + 3];
        pieces.push(BernsteinVec::cubic([
            v0,
            v0 + delta * m0 / 3.0,
            v1 - delta * m1 / 3.0,
            v1,
        ]));
    }
    Ok(PiecewisePoly::new(knots.to_vec(), pieces)?)
}

/// Solve `(G^T G) x = G^T y`. `None` signals rank deficiency; no silent
/// pseudo-inverse fallback.
fn solve_normal_equations(design: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let gram = design.transpose() * design;
    let moment = design.transpose() * rhs;
    Cholesky::new(gram).map(|chol| chol.solve(&moment))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(t: f64, v: f64) -> Sample {
        Sample {
            time_s: t,
            value: v,
        }
    }

    #[test]
    fn recovers_exact_cubic_single_interval() {
        let c = BernsteinVec::cubic([1.0, -2.0, 0.5, 3.0]);
        let samples: Vec<Sample> = (0..=10)
            .map(|i| {
                let t = i as f64 / 10.0;
                sample(t, c.eval(t).unwrap())
            })
            .collect();
        let fit = fit_samples(&samples, &[0.0, 1.0], false).unwrap();
        for (got, want) in fit.pieces()[0].coeffs().iter().zip(c.coeffs()) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn recovers_line_with_c1_over_two_intervals() {
        // x(t) = t on [0, 2] split at 1 is exactly representable with
        // coefficients [0, 1/3, 2/3, 1] and [1, 4/3, 5/3, 2].
        let samples: Vec<Sample> = (0..=20)
            .map(|i| {
                let t = i as f64 / 10.0;
                sample(t, t)
            })
            .collect();
        let fit = fit_samples(&samples, &[0.0, 1.0, 2.0], true).unwrap();
        let want0 = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        let want1 = [1.0, 4.0 / 3.0, 5.0 / 3.0, 2.0];
        for (got, want) in fit.pieces()[0].coeffs().iter().zip(want0) {
            assert!((got - want).abs() < 1e-9);
        }
        for (got, want) in fit.pieces()[1].coeffs().iter().zip(want1) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_samples_give_constant_coefficients() {
        let samples: Vec<Sample> = (0..=30).map(|i| sample(i as f64, 7.0)).collect();
        for enforce in [false, true] {
            let fit = fit_samples(&samples, &[0.0, 10.0, 30.0], enforce).unwrap();
            for piece in fit.pieces() {
                for c in piece.coeffs() {
                    assert!((c - 7.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn underdetermined_interval_is_reported() {
        let samples = vec![sample(0.0, 1.0), sample(0.5, 1.0), sample(1.5, 1.0)];
        let err = fit_samples(&samples, &[0.0, 1.0, 2.0], false).unwrap_err();
        assert_eq!(
            err,
            FitError::Underdetermined {
                interval: 0,
                samples: 2,
                needed: 4
            }
        );
    }

    #[test]
    fn unsorted_samples_rejected() {
        let samples = vec![sample(1.0, 0.0), sample(0.0, 0.0)];
        assert!(matches!(
            fit_samples(&samples, &[0.0, 2.0], false),
            Err(FitError::UnsortedSamples(1))
        ));
    }

    #[test]
    fn sample_outside_knots_rejected() {
        let samples = vec![sample(-1.0, 0.0)];
        assert!(matches!(
            fit_samples(&samples, &[0.0, 2.0], false),
            Err(FitError::SampleOutsideKnots(_))
        ));
    }

    #[test]
    fn c1_fit_is_continuous_at_knots() {
        // Noisy sinusoid over three intervals of unequal length.
        let knots = [0.0, 100.0, 250.0, 400.0];
        let samples: Vec<Sample> = (0..=80)
            .map(|i| {
                let t = i as f64 * 5.0;
                let v = 50.0 + 20.0 * (t / 70.0).sin() + 0.5 * ((i * 37 % 11) as f64 - 5.0);
                sample(t, v)
            })
            .collect();
        let fit = fit_samples(&samples, &knots, true).unwrap();
        for &k in &knots[1..3] {
            let jump = (fit.eval(k).unwrap() - fit.left_limit(k).unwrap()).abs();
            let djump = (fit.eval_deriv(k).unwrap() - fit.left_deriv(k).unwrap()).abs();
            assert!(jump < 1e-9, "value jump {jump} at {k}");
            assert!(djump < 1e-9, "derivative jump {djump} at {k}");
        }
    }
}
