use crate::basis::BernsteinVec;
use crate::error::BernsteinError;

/// A function of time represented by one Bernstein coefficient vector per
/// interval of a strictly increasing knot sequence (times in seconds).
///
/// At an interior knot the value of the right interval's start is returned
/// by [`eval`](Self::eval); hydropower variables may legitimately jump there,
/// so the left limit is exposed separately.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    knots: Vec<f64>,
    pieces: Vec<BernsteinVec>,
}

impl PiecewisePoly {
    pub fn new(knots: Vec<f64>, pieces: Vec<BernsteinVec>) -> Result<Self, BernsteinError> {
        if knots.len() < 2 || knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(BernsteinError::BadKnots);
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(BernsteinError::NonFinite);
        }
        if pieces.len() + 1 != knots.len() {
            return Err(BernsteinError::PieceCountMismatch {
                pieces: pieces.len(),
                intervals: knots.len() - 1,
            });
        }
        Ok(Self { knots, pieces })
    }

    /// A piecewise-constant function, one cubic-basis constant per interval.
    pub fn constant_per_interval(knots: Vec<f64>, values: &[f64]) -> Result<Self, BernsteinError> {
        let pieces = values
            .iter()
            .map(|&v| BernsteinVec::constant(3, v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(knots, pieces)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn pieces(&self) -> &[BernsteinVec] {
        &self.pieces
    }

    pub fn num_intervals(&self) -> usize {
        self.pieces.len()
    }

    pub fn start_time(&self) -> f64 {
        self.knots[0]
    }

    pub fn end_time(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn interval_length(&self, h: usize) -> f64 {
        self.knots[h + 1] - self.knots[h]
    }

    /// Index of the interval containing `t`. Interior knots belong to the
    /// right interval; the final knot belongs to the last interval.
    pub fn interval_index(&self, t: f64) -> Result<usize, BernsteinError> {
        if t < self.start_time() || t > self.end_time() {
            return Err(BernsteinError::OutsideHorizon {
                t,
                start: self.start_time(),
                end: self.end_time(),
            });
        }
        if t == self.end_time() {
            return Ok(self.pieces.len() - 1);
        }
        // partition_point returns the count of knots <= t, so the containing
        // interval starts one knot earlier.
        Ok(self.knots.partition_point(|&k| k <= t) - 1)
    }

    fn scaled(&self, h: usize, t: f64) -> f64 {
        ((t - self.knots[h]) / self.interval_length(h)).clamp(0.0, 1.0)
    }

    /// Evaluate at absolute time `t` using the right-interval convention at
    /// interior knots.
    pub fn eval(&self, t: f64) -> Result<f64, BernsteinError> {
        let h = self.interval_index(t)?;
        self.pieces[h].eval(self.scaled(h, t))
    }

    /// The left limit at `t`: at an interior knot this evaluates the interval
    /// ending at `t` instead of the one starting there.
    pub fn left_limit(&self, t: f64) -> Result<f64, BernsteinError> {
        let h = self.interval_index(t)?;
        if h > 0 && t == self.knots[h] {
            return self.pieces[h - 1].eval(1.0);
        }
        self.pieces[h].eval(self.scaled(h, t))
    }

    /// Derivative with respect to absolute time, right-interval convention.
    pub fn eval_deriv(&self, t: f64) -> Result<f64, BernsteinError> {
        let h = self.interval_index(t)?;
        Ok(self.pieces[h].eval_deriv(self.scaled(h, t))? / self.interval_length(h))
    }

    /// Left limit of the time derivative at `t`.
    pub fn left_deriv(&self, t: f64) -> Result<f64, BernsteinError> {
        let h = self.interval_index(t)?;
        if h > 0 && t == self.knots[h] {
            return Ok(self.pieces[h - 1].eval_deriv(1.0)? / self.interval_length(h - 1));
        }
        Ok(self.pieces[h].eval_deriv(self.scaled(h, t))? / self.interval_length(h))
    }

    /// Exact mean value over interval `h`.
    pub fn interval_mean(&self, h: usize) -> f64 {
        self.pieces[h].mean()
    }

    /// Coefficient-wise linear combination `self + factor * other` on a shared
    /// knot grid. Degrees must match per interval.
    pub fn axpy(&self, factor: f64, other: &PiecewisePoly) -> Result<PiecewisePoly, BernsteinError> {
        if self.knots != other.knots {
            return Err(BernsteinError::BadKnots);
        }
        let pieces = self
            .pieces
            .iter()
            .zip(&other.pieces)
            .map(|(a, b)| {
                if a.degree() != b.degree() {
                    return Err(BernsteinError::DegreeMismatch {
                        expected: a.degree(),
                        got: b.degree(),
                    });
                }
                let coeffs = a
                    .coeffs()
                    .iter()
                    .zip(b.coeffs())
                    .map(|(x, y)| x + factor * y)
                    .collect();
                BernsteinVec::new(coeffs)
            })
            .collect::<Result<Vec<_>, _>>()?;
        PiecewisePoly::new(self.knots.clone(), pieces)
    }

    /// The zero function on the given knots (cubic pieces).
    pub fn zero(knots: Vec<f64>) -> Result<Self, BernsteinError> {
        let n = knots.len().saturating_sub(1);
        Self::constant_per_interval(knots, &vec![0.0; n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_piece_evaluates_flat() {
        let p = PiecewisePoly::new(
            vec![0.0, 3600.0],
            vec![BernsteinVec::cubic([5.0, 5.0, 5.0, 5.0])],
        )
        .unwrap();
        assert_eq!(p.eval(1800.0).unwrap(), 5.0);
    }

    #[test]
    fn linear_ramp_on_unit_interval() {
        // [0, 1/3, 2/3, 1] is exactly x(t) = t.
        let p = PiecewisePoly::new(
            vec![0.0, 1.0],
            vec![BernsteinVec::cubic([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0])],
        )
        .unwrap();
        assert!((p.eval(0.25).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn knot_convention_right_interval() {
        let p = PiecewisePoly::new(
            vec![0.0, 1.0, 2.0],
            vec![
                BernsteinVec::cubic([0.0, 0.0, 0.0, 1.0]),
                BernsteinVec::cubic([1.0, 1.0, 1.0, 1.0]),
            ],
        )
        .unwrap();
        // Both sides agree at the knot here; the right interval is used.
        assert_eq!(p.eval(1.0).unwrap(), 1.0);
        assert_eq!(p.left_limit(1.0).unwrap(), 1.0);
    }

    #[test]
    fn left_limit_differs_on_jump() {
        let p = PiecewisePoly::new(
            vec![0.0, 1.0, 2.0],
            vec![
                BernsteinVec::cubic([0.0, 0.0, 0.0, 2.0]),
                BernsteinVec::cubic([7.0, 7.0, 7.0, 7.0]),
            ],
        )
        .unwrap();
        assert_eq!(p.eval(1.0).unwrap(), 7.0);
        assert_eq!(p.left_limit(1.0).unwrap(), 2.0);
    }

    #[test]
    fn out_of_horizon_is_an_error() {
        let p = PiecewisePoly::zero(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            p.eval(-0.5),
            Err(BernsteinError::OutsideHorizon { .. })
        ));
        assert!(matches!(
            p.eval(1.5),
            Err(BernsteinError::OutsideHorizon { .. })
        ));
    }

    #[test]
    fn bad_knots_rejected() {
        assert!(PiecewisePoly::zero(vec![0.0, 0.0]).is_err());
        assert!(PiecewisePoly::zero(vec![1.0, 0.0]).is_err());
        assert!(PiecewisePoly::new(vec![0.0, 1.0], vec![]).is_err());
    }
}
