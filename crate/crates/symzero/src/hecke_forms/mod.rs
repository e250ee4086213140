//! Level-1 Hecke eigenforms and their Satake parameters.
//!
//! An eigenform of even weight k is carried as its normalized eigenvalues
//! lambda(m) = a(m) / m^((k-1)/2), together with the exact integer
//! coefficients a(m) when the construction is exact.  For the six weights
//! with dim S_k = 1 (12, 16, 18, 20, 22, 26) the eigenform is the Miller
//! basis element itself and everything is integer arithmetic.  Larger spaces
//! go through floating-point diagonalization of the Hecke operator T_2 in
//! the Miller basis.
//!
//! At every prime, lambda(p) determines the Satake pair (alpha, beta):
//! the roots of x^2 - lambda(p) x + 1, which lie on the unit circle by the
//! Ramanujan bound |lambda(p)| <= 2.

pub mod io;
mod qexpansion;

pub use qexpansion::{delta, dim_cusp_space, eisenstein, miller_basis, QExpansion};

use nalgebra::{Complex, DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default tolerance for floating-point identity checks at desk scale.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A normalized Hecke eigenform on SL(2, Z).
#[derive(Clone, Debug)]
pub struct Eigenform {
    weight: u32,
    /// lambda[m] = a(m) / m^((k-1)/2); entry 0 is unused and set to 0.
    lambda: Vec<f64>,
    /// Exact integer coefficients a(m) when available; entry 0 is 0.
    exact: Option<Vec<BigInt>>,
}

impl Eigenform {
    pub(crate) fn from_exact_coeffs(weight: u32, coeffs: Vec<BigInt>) -> Self {
        let lambda = coeffs
            .iter()
            .enumerate()
            .map(|(m, a)| {
                if m == 0 {
                    0.0
                } else {
                    normalized_coeff(a, m, weight)
                }
            })
            .collect();
        Eigenform {
            weight,
            lambda,
            exact: Some(coeffs),
        }
    }

    pub(crate) fn from_lambda(weight: u32, lambda: Vec<f64>) -> Self {
        Eigenform {
            weight,
            lambda,
            exact: None,
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Largest m with lambda(m) available.
    pub fn precision(&self) -> usize {
        self.lambda.len() - 1
    }

    /// Normalized eigenvalue lambda(m), 1 <= m <= precision.
    pub fn lambda(&self, m: usize) -> f64 {
        assert!(m >= 1 && m < self.lambda.len(), "lambda({m}) out of range");
        self.lambda[m]
    }

    /// Exact integer coefficient a(m), when the construction was exact.
    pub fn exact_coeff(&self, m: usize) -> Option<&BigInt> {
        self.exact.as_ref().map(|v| &v[m])
    }

    pub fn has_exact_coeffs(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_coeffs(&self) -> Result<&[BigInt]> {
        self.exact
            .as_deref()
            .ok_or(Error::ExactCoeffsUnavailable)
    }
}

/// a / m^((k-1)/2) without overflowing f64 en route: the exact coefficient
/// can exceed f64 range even though the normalized value is O(d(m)).
fn normalized_coeff(a: &BigInt, m: usize, weight: u32) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let half_log_m = (weight as f64 - 1.0) / 2.0 * (m as f64).ln();
    let bits = a.magnitude().bits();
    if bits <= 1000 && half_log_m < 700.0 {
        let af = a.to_f64().expect("|a| < 2^1000 fits in f64");
        return af / half_log_m.exp();
    }
    // log-space fallback for extreme weights
    let top = if bits > 53 {
        (a.magnitude() >> (bits - 53)).to_f64().unwrap()
    } else {
        a.magnitude().to_f64().unwrap()
    };
    let shift = bits.saturating_sub(53) as f64;
    let log_abs = top.ln() + shift * std::f64::consts::LN_2;
    let val = (log_abs - half_log_m).exp();
    if a.is_negative() {
        -val
    } else {
        val
    }
}

/// The unique normalized eigenform of weight k in {12, 16, 18, 20, 22, 26},
/// with exact integer coefficients up to q^x.
pub fn hecke_eigenform(weight: u32, x: usize) -> Result<Eigenform> {
    if weight % 2 != 0 || weight < 4 {
        return Err(Error::InvalidWeight(weight));
    }
    let d = dim_cusp_space(weight);
    if d != 1 {
        return Err(Error::DimensionNotOne { weight, dim: d });
    }
    if x < 1 {
        return Err(Error::Precision { min: 1, got: x });
    }
    let mut basis = miller_basis(weight, x)?;
    let coeffs = basis.remove(0).into_coeffs();
    Ok(Eigenform::from_exact_coeffs(weight, coeffs))
}

/// Eigenform number `index` (ordered by ascending a(2)) of weight k, via
/// floating-point diagonalization of T_2 on the Miller basis.  Fails when
/// the T_2 spectrum is split by less than `tol`.
pub fn eigenform_numeric(weight: u32, index: usize, x: usize, tol: f64) -> Result<Eigenform> {
    if weight % 2 != 0 {
        return Err(Error::InvalidWeight(weight));
    }
    let d = dim_cusp_space(weight);
    if index >= d {
        return Err(Error::EigenIndex {
            weight,
            index,
            dim: d,
        });
    }
    let work = x.max(2 * d + 2);
    let basis = miller_basis(weight, work)?;
    let coeff_f64: Vec<Vec<f64>> = basis
        .iter()
        .map(|g| {
            g.coeffs()
                .iter()
                .map(|c| c.to_f64().expect("coefficient in f64 range"))
                .collect()
        })
        .collect();

    // T_2 f(q) has m-th coefficient a(2m) + 2^(k-1) a(m/2); reading off
    // coefficients 1..=d against the echelon basis gives the matrix column.
    let two_pow = 2f64.powi(weight as i32 - 1);
    let t2 = DMatrix::from_fn(d, d, |row, col| {
        let m = row + 1;
        let mut v = coeff_f64[col][2 * m];
        if m % 2 == 0 {
            v += two_pow * coeff_f64[col][m / 2];
        }
        v
    });

    let scale = t2.amax().max(1.0);
    let mut eigs: Vec<f64> = t2
        .complex_eigenvalues()
        .iter()
        .map(|z: &Complex<f64>| {
            debug_assert!(z.im.abs() <= 1e-9 * scale, "T_2 spectrum must be real");
            z.re
        })
        .collect();
    eigs.sort_by(|a, b| a.total_cmp(b));
    for w in eigs.windows(2) {
        let gap = w[1] - w[0];
        if gap < tol {
            return Err(Error::EigenvalueCollision { gap, tol });
        }
    }
    let lam = eigs[index];

    // Inverse iteration at a slightly shifted eigenvalue.
    let shift = lam + scale * 1e-10;
    let shifted = &t2 - DMatrix::identity(d, d) * shift;
    let lu = shifted.lu();
    let mut v = DVector::from_element(d, 1.0);
    for _ in 0..4 {
        v = lu.solve(&v).ok_or(Error::EigenvalueCollision {
            gap: 0.0,
            tol,
        })?;
        let norm = v.norm();
        v /= norm;
    }
    let residual = (&t2 * &v - &v * lam).amax();
    debug_assert!(residual <= 1e-6 * scale, "inverse iteration residual");
    // Normalize to a(1) = 1: the echelon basis has f_i = q^(i+1) + ..., so
    // the q-coefficient of the combination is its first coordinate.
    if v[0].abs() < 1e-12 {
        return Err(Error::EigenvalueCollision { gap: 0.0, tol });
    }
    let v = &v / v[0];

    let mut lambda = vec![0.0; x + 1];
    let half = (weight as f64 - 1.0) / 2.0;
    for (m, slot) in lambda.iter_mut().enumerate().skip(1) {
        let mut a = 0.0;
        for i in 0..d {
            a += v[i] * coeff_f64[i][m];
        }
        *slot = a / (m as f64).powf(half);
    }
    Ok(Eigenform::from_lambda(weight, lambda))
}

/// Local Satake pair at p: the roots of x^2 - lambda_p x + 1 = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SatakeParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub prime: u64,
}

/// Solves for the Satake pair; alpha is the root with nonnegative imaginary
/// part (for |lambda_p| = 2 the double real root is returned twice).
/// Values within DEFAULT_TOL above 2 in absolute value are clamped to the
/// circle; anything larger is rejected as a Ramanujan violation.
pub fn satake(lambda_p: f64, prime: u64) -> Result<SatakeParams> {
    if lambda_p.abs() > 2.0 + DEFAULT_TOL {
        return Err(Error::RamanujanViolation {
            prime,
            value: lambda_p.abs(),
        });
    }
    let half = (lambda_p / 2.0).clamp(-1.0, 1.0);
    let disc = (1.0 - half * half).max(0.0);
    let alpha = Complex64::new(half, disc.sqrt());
    Ok(SatakeParams {
        alpha,
        beta: alpha.conj(),
        prime,
    })
}

impl SatakeParams {
    /// alpha + beta, which recovers lambda(p).
    pub fn trace(&self) -> f64 {
        (self.alpha + self.beta).re
    }

    /// Satake parameters of the eigenform at p.
    pub fn of(f: &Eigenform, p: u64) -> Result<SatakeParams> {
        satake(f.lambda(p as usize), p)
    }
}
