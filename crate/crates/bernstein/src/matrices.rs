//! Constant change-of-basis, integration and differentiation matrices.
//!
//! All entries are exact multiples of 1/3 or 1/4 and are written out as
//! literal fractions so the matrix identities hold to machine precision.

/// Hermite change-of-basis matrix: `H(t) = W * B3(t)`.
pub const W: [[f64; 4]; 4] = [
    [1.0, 1.0, 0.0, 0.0],
    [0.0, 1.0 / 3.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 1.0],
    [0.0, 0.0, -1.0 / 3.0, 0.0],
];

/// Transpose of the inverse of [`W`]: maps Bernstein coefficients to Hermite
/// coefficients `[x(0), x'(0), x(1), x'(1)]` (derivatives in scaled time).
pub const W_INV_T: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [-3.0, 3.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -3.0, 3.0],
];

/// Integration matrix: `integral of B3 = N * B4(t)` with `N * B4(0) = 0` and
/// `N * B4(1) = 1/4`.
pub const N: [[f64; 5]; 4] = [
    [0.0, 0.25, 0.25, 0.25, 0.25],
    [0.0, 0.0, 0.25, 0.25, 0.25],
    [0.0, 0.0, 0.0, 0.25, 0.25],
    [0.0, 0.0, 0.0, 0.0, 0.25],
];

/// Differentiation matrix: `d B3(t) / dt = K * B2(t)`.
pub const K: [[f64; 3]; 4] = [
    [-3.0, 0.0, 0.0],
    [3.0, -3.0, 0.0],
    [0.0, 3.0, -3.0],
    [0.0, 0.0, 3.0],
];

/// The three constant operators bundled together.
#[derive(Debug, Clone, Copy)]
pub struct BasisMatrices {
    pub w: [[f64; 4]; 4],
    pub n: [[f64; 5]; 4],
    pub k: [[f64; 3]; 4],
}

impl BasisMatrices {
    pub const fn standard() -> Self {
        Self { w: W, n: N, k: K }
    }
}

impl Default for BasisMatrices {
    fn default() -> Self {
        Self::standard()
    }
}
