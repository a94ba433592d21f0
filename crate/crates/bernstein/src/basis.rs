use crate::error::BernsteinError;
use crate::matrices;

/// Lowest supported basis degree.
pub const MIN_DEGREE: usize = 2;
/// Highest supported basis degree.
pub const MAX_DEGREE: usize = 4;

/// Evaluate the Bernstein basis of the given degree at scaled time `t`.
///
/// Returns the `degree + 1` basis values. The components are non-negative
/// and sum to one (partition of unity).
pub fn eval_basis(degree: usize, t: f64) -> Result<Vec<f64>, BernsteinError> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
        return Err(BernsteinError::UnsupportedDegree(degree));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(BernsteinError::OutOfUnitInterval(t));
    }
    let s = 1.0 - t;
    Ok(match degree {
        2 => vec![s * s, 2.0 * t * s, t * t],
        3 => vec![s * s * s, 3.0 * t * s * s, 3.0 * t * t * s, t * t * t],
        _ => vec![
            s * s * s * s,
            4.0 * t * s * s * s,
            6.0 * t * t * s * s,
            4.0 * t * t * t * s,
            t * t * t * t,
        ],
    })
}

/// A polynomial on the unit interval given by its Bernstein coefficients.
///
/// The degree (2, 3 or 4) is implied by the coefficient count. Units are
/// inherited from the quantity the polynomial represents.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinVec {
    coeffs: Vec<f64>,
}

impl BernsteinVec {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, BernsteinError> {
        let degree = coeffs.len().wrapping_sub(1);
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(BernsteinError::UnsupportedDegree(degree));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(BernsteinError::NonFinite);
        }
        Ok(Self { coeffs })
    }

    /// A cubic from its four coefficients.
    pub fn cubic(coeffs: [f64; 4]) -> Self {
        Self {
            coeffs: coeffs.to_vec(),
        }
    }

    /// The constant polynomial `value` in the degree-`degree` basis.
    pub fn constant(degree: usize, value: f64) -> Result<Self, BernsteinError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(BernsteinError::UnsupportedDegree(degree));
        }
        if !value.is_finite() {
            return Err(BernsteinError::NonFinite);
        }
        Ok(Self {
            coeffs: vec![value; degree + 1],
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluate at scaled time `t` in `[0, 1]` by de Casteljau's algorithm.
    pub fn eval(&self, t: f64) -> Result<f64, BernsteinError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(BernsteinError::OutOfUnitInterval(t));
        }
        let mut beta = self.coeffs.clone();
        let n = beta.len();
        for j in 1..n {
            for k in 0..n - j {
                beta[k] = beta[k] * (1.0 - t) + beta[k + 1] * t;
            }
        }
        Ok(beta[0])
    }

    /// Evaluate the derivative with respect to scaled time at `t`.
    pub fn eval_deriv(&self, t: f64) -> Result<f64, BernsteinError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(BernsteinError::OutOfUnitInterval(t));
        }
        let n = self.degree() as f64;
        let diffs: Vec<f64> = self
            .coeffs
            .windows(2)
            .map(|w| n * (w[1] - w[0]))
            .collect();
        // The derivative control net has degree one less; evaluate it directly.
        let mut beta = diffs;
        let m = beta.len();
        for j in 1..m {
            for k in 0..m - j {
                beta[k] = beta[k] * (1.0 - t) + beta[k + 1] * t;
            }
        }
        Ok(beta[0])
    }

    pub fn min_coeff(&self) -> f64 {
        self.coeffs.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact mean of the polynomial over the unit interval (the coefficient
    /// average, since every basis function integrates to `1/(degree+1)`).
    pub fn mean(&self) -> f64 {
        self.coeffs.iter().sum::<f64>() / self.coeffs.len() as f64
    }

    fn expect_cubic(&self) -> Result<(), BernsteinError> {
        if self.degree() != 3 {
            return Err(BernsteinError::DegreeMismatch {
                expected: 3,
                got: self.degree(),
            });
        }
        Ok(())
    }
}

/// Hermite coefficients `[x_start, x'_start, x_end, x'_end]` of a cubic,
/// with derivatives taken in scaled time. This is `(W^-1)^T * c`.
pub fn to_hermite(c: &BernsteinVec) -> Result<[f64; 4], BernsteinError> {
    c.expect_cubic()?;
    let b = c.coeffs();
    let m = matrices::W_INV_T;
    let mut h = [0.0; 4];
    for (i, row) in m.iter().enumerate() {
        h[i] = row.iter().zip(b).map(|(a, x)| a * x).sum();
    }
    Ok(h)
}

/// Inverse of [`to_hermite`]: `c = W^T * h`.
pub fn from_hermite(h: [f64; 4]) -> BernsteinVec {
    let w = matrices::W;
    let mut c = [0.0; 4];
    for (j, cj) in c.iter_mut().enumerate() {
        *cj = (0..4).map(|i| w[i][j] * h[i]).sum();
    }
    BernsteinVec::cubic(c)
}

/// Exact integral of the cubic over an interval of length `delta_s` seconds:
/// `delta / 4 * sum(c)`.
pub fn integrate_interval(c: &BernsteinVec, delta_s: f64) -> Result<f64, BernsteinError> {
    c.expect_cubic()?;
    if delta_s <= 0.0 {
        return Err(BernsteinError::NonPositiveInterval(delta_s));
    }
    Ok(delta_s / 4.0 * c.coeffs().iter().sum::<f64>())
}

/// Degree-4 coefficients `N^T * c` of the running integral in scaled time.
///
/// `v0 + delta * (N^T c)^T B4(tau)` is the running integral of the cubic
/// starting from `v0`; component 0 is always zero.
pub fn antiderivative_coeffs(c: &BernsteinVec) -> Result<BernsteinVec, BernsteinError> {
    c.expect_cubic()?;
    let b = c.coeffs();
    let mut out = [0.0; 5];
    let mut acc = 0.0;
    for k in 1..5 {
        acc += b[k - 1];
        out[k] = 0.25 * acc;
    }
    BernsteinVec::new(out.to_vec())
}

/// Degree-2 coefficients `(1/delta) K^T * c` of the time derivative of the
/// cubic over an interval of `delta_s` seconds.
pub fn derivative_coeffs(c: &BernsteinVec, delta_s: f64) -> Result<BernsteinVec, BernsteinError> {
    c.expect_cubic()?;
    if delta_s <= 0.0 {
        return Err(BernsteinError::NonPositiveInterval(delta_s));
    }
    let b = c.coeffs();
    let out = vec![
        3.0 * (b[1] - b[0]) / delta_s,
        3.0 * (b[2] - b[1]) / delta_s,
        3.0 * (b[3] - b[2]) / delta_s,
    ];
    BernsteinVec::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_endpoint_interpolation() {
        assert_eq!(eval_basis(3, 0.0).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(eval_basis(3, 1.0).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn basis_midpoint_cubic() {
        // Expanded symbolically at t = 1/2: [1/8, 3/8, 3/8, 1/8].
        let b = eval_basis(3, 0.5).unwrap();
        for (got, want) in b.iter().zip([0.125, 0.375, 0.375, 0.125]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn basis_domain_and_degree_errors() {
        assert!(matches!(
            eval_basis(3, -0.1),
            Err(BernsteinError::OutOfUnitInterval(_))
        ));
        assert!(matches!(
            eval_basis(3, 1.1),
            Err(BernsteinError::OutOfUnitInterval(_))
        ));
        assert!(matches!(
            eval_basis(5, 0.5),
            Err(BernsteinError::UnsupportedDegree(5))
        ));
    }

    #[test]
    fn hermite_of_constant() {
        let c = BernsteinVec::cubic([5.0, 5.0, 5.0, 5.0]);
        assert_eq!(to_hermite(&c).unwrap(), [5.0, 0.0, 5.0, 0.0]);
    }

    #[test]
    fn hermite_of_linear_ramp() {
        // x(t) = t has Bernstein coefficients [0, 1/3, 2/3, 1]; its value and
        // slope at both ends follow by direct differentiation.
        let c = BernsteinVec::cubic([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        let h = to_hermite(&c).unwrap();
        for (got, want) in h.iter().zip([0.0, 1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn integrate_constant_and_ramp() {
        let one = BernsteinVec::cubic([1.0, 1.0, 1.0, 1.0]);
        assert_eq!(integrate_interval(&one, 3600.0).unwrap(), 3600.0);
        let ramp = BernsteinVec::cubic([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert!((integrate_interval(&ramp, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let zero = BernsteinVec::cubic([0.0; 4]);
        assert_eq!(integrate_interval(&zero, 123.0).unwrap(), 0.0);
        assert!(matches!(
            integrate_interval(&one, 0.0),
            Err(BernsteinError::NonPositiveInterval(_))
        ));
    }

    #[test]
    fn antiderivative_of_one_is_ramp() {
        let one = BernsteinVec::cubic([1.0, 1.0, 1.0, 1.0]);
        let f = antiderivative_coeffs(&one).unwrap();
        assert_eq!(f.coeffs(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let zero = BernsteinVec::cubic([0.0; 4]);
        assert_eq!(
            antiderivative_coeffs(&zero).unwrap().coeffs(),
            &[0.0; 5]
        );
    }

    #[test]
    fn derivative_of_ramp() {
        let ramp = BernsteinVec::cubic([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        let d1 = derivative_coeffs(&ramp, 1.0).unwrap();
        for c in d1.coeffs() {
            assert!((c - 1.0).abs() < 1e-15);
        }
        let d2 = derivative_coeffs(&ramp, 2.0).unwrap();
        for c in d2.coeffs() {
            assert!((c - 0.5).abs() < 1e-15);
        }
        let flat = BernsteinVec::cubic([5.0; 4]);
        assert_eq!(derivative_coeffs(&flat, 1.0).unwrap().coeffs(), &[0.0; 3]);
    }
}
