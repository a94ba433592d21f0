//! Independent polynomial oracle in the monomial basis.
//!
//! Everything here is derived by symbolic expansion (binomial theorem), so it
//! shares no code path with the Bernstein operators under test.

/// Monomial coefficients `a[0] + a[1] t + a[2] t^2 + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial(pub Vec<f64>);

impl Monomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, a| acc * t + a)
    }

    pub fn derivative(&self) -> Monomial {
        Monomial(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| k as f64 * a)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Monomial {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, a)| a / (k + 1) as f64));
        Monomial(out)
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Expand a single Bernstein basis function `B_{i,n}` into monomials:
/// `C(n,i) t^i (1-t)^(n-i) = C(n,i) sum_j C(n-i,j) (-1)^j t^(i+j)`.
pub fn bernstein_basis_monomial(i: usize, n: usize) -> Monomial {
    let mut coeffs = vec![0.0; n + 1];
    for j in 0..=(n - i) {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[i + j] += binomial(n, i) * binomial(n - i, j) * sign;
    }
    Monomial(coeffs)
}

/// Expand a full Bernstein coefficient vector into monomial form.
pub fn bernstein_to_monomial(coeffs: &[f64]) -> Monomial {
    let n = coeffs.len() - 1;
    let mut out = vec![0.0; n + 1];
    for (i, c) in coeffs.iter().enumerate() {
        let basis = bernstein_basis_monomial(i, n);
        for (k, b) in basis.0.iter().enumerate() {
            out[k] += c * b;
        }
    }
    Monomial(out)
}

/// The cubic Hermite basis on [0, 1] in monomial form:
/// `[h00, h10, h01, h11]`.
pub fn hermite_basis_monomials() -> [Monomial; 4] {
    [
        Monomial(vec![1.0, 0.0, -3.0, 2.0]),
        Monomial(vec![0.0, 1.0, -2.0, 1.0]),
        Monomial(vec![0.0, 0.0, 3.0, -2.0]),
        Monomial(vec![0.0, 0.0, -1.0, 1.0]),
    ]
}

/// Interpolate a monomial polynomial of degree <= 4 back onto the degree-4
/// Bernstein basis by solving the 5-point interpolation system with exact
/// nodes 0, 1/4, 1/2, 3/4, 1 via Gaussian elimination.
pub fn monomial_to_bernstein4(p: &Monomial) -> [f64; 5] {
    let nodes = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut a = [[0.0f64; 6]; 5];
    for (r, &t) in nodes.iter().enumerate() {
        let s = 1.0 - t;
        let row = [
            s * s * s * s,
            4.0 * t * s * s * s,
            6.0 * t * t * s * s,
            4.0 * t * t * t * s,
            t * t * t * t,
        ];
        a[r][..5].copy_from_slice(&row);
        a[r][5] = p.eval(t);
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..5 {
        let piv = (col..5)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        for r in 0..5 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..6 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut out = [0.0; 5];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a[i][5] / a[i][i];
    }
    out
}
