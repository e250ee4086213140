//! Local parameters and truncated Dirichlet series of L(s, Sym^n f).
//!
//! The symmetric power L-function attached to an eigenform f is the degree
//! n+1 Euler product
//!
//!   L(s, Sym^n f) = prod_p prod_{j=0}^{n} (1 - alpha_p^j beta_p^(n-j) p^-s)^-1,
//!
//! so its local data at p is the multiset {alpha^j beta^(n-j)} of unit-modulus
//! numbers closed under conjugation.  Expanding each local factor as a power
//! series in p^-s and gluing multiplicatively gives the coefficient array
//! lambda(1..X) that all downstream verification works on.

use num_complex::Complex64;

use crate::arith::smallest_prime_factor;
use crate::error::{Error, Result};
use crate::hecke_forms::{Eigenform, SatakeParams};

pub use crate::hecke_forms::DEFAULT_TOL;

/// The local parameter multiset of Sym^n at one prime.
#[derive(Clone, Debug)]
pub struct LocalParams {
    pub n: u32,
    pub prime: u64,
    params: Vec<Complex64>,
}

impl LocalParams {
    pub fn params(&self) -> &[Complex64] {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.params.len()
    }
}

/// {alpha^j beta^(n-j) : 0 <= j <= n}; n = 0 gives {1}, the zeta factor.
pub fn local_params(n: u32, satake: &SatakeParams) -> LocalParams {
    let params = (0..=n)
        .map(|j| satake.alpha.powu(j) * satake.beta.powu(n - j))
        .collect();
    LocalParams {
        n,
        prime: satake.prime,
        params,
    }
}

/// All pairwise products {gamma * delta}, the Rankin-Selberg local multiset.
pub fn pairwise_products(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &g in a {
        for &d in b {
            out.push(g * d);
        }
    }
    out
}

/// Series coefficients of prod_j (1 - gamma_j x)^-1 through x^depth.
///
/// The multiset must be closed under conjugation, so the coefficients are
/// real; the imaginary residue of each coefficient is checked against
/// `tol * (1 + |Re|)` (relative in the coefficient size, since a degree-d
/// convolution of unit-modulus parameters legitimately reaches size d^m)
/// and then dropped.
pub fn local_factor_coeffs(params: &[Complex64], depth: usize, tol: f64) -> Result<Vec<f64>> {
    let mut c = vec![Complex64::new(0.0, 0.0); depth + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for &g in params {
        // multiply the series by (1 - g x)^-1 in place
        for m in 1..=depth {
            let prev = c[m - 1];
            c[m] += g * prev;
        }
    }
    c.iter()
        .map(|z| {
            let bar = tol * (1.0 + z.re.abs());
            if z.im.abs() > bar {
                Err(Error::ImaginaryResidue {
                    imag: z.im,
                    tol: bar,
                })
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

/// A truncated Dirichlet series: real coefficients lambda(1..=X).
#[derive(Clone, Debug)]
pub struct DirichletSeries {
    label: String,
    /// coeffs[m] = lambda(m); slot 0 is unused and fixed at 0.
    coeffs: Vec<f64>,
}

impl DirichletSeries {
    /// Wraps coefficients indexed from 1 (slot 0 of `coeffs` must be the
    /// placeholder 0).
    pub fn new(label: impl Into<String>, coeffs: Vec<f64>) -> Self {
        assert!(coeffs.len() >= 2, "need at least lambda(1)");
        assert_eq!(coeffs[0], 0.0, "slot 0 is a placeholder");
        DirichletSeries {
            label: label.into(),
            coeffs,
        }
    }

    /// The all-ones series (Riemann zeta) to truncation x.
    pub fn ones(x: usize, label: impl Into<String>) -> Self {
        let mut coeffs = vec![1.0; x + 1];
        coeffs[0] = 0.0;
        DirichletSeries {
            label: label.into(),
            coeffs,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// lambda(m) for 1 <= m <= truncation.
    pub fn coeff(&self, m: usize) -> f64 {
        assert!(m >= 1 && m < self.coeffs.len(), "coeff({m}) out of range");
        self.coeffs[m]
    }

    /// Coefficients including the placeholder slot 0.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Dirichlet convolution, truncated to the shorter of the two series.
    pub fn multiply(&self, other: &DirichletSeries) -> DirichletSeries {
        let x = self.truncation().min(other.truncation());
        let mut out = vec![0.0; x + 1];
        for a in 1..=x {
            let ca = self.coeffs[a];
            if ca == 0.0 {
                continue;
            }
            for b in 1..=x / a {
                out[a * b] += ca * other.coeffs[b];
            }
        }
        DirichletSeries {
            label: format!("({}) * ({})", self.label, other.label),
            coeffs: out,
        }
    }

    /// Largest |lambda_self(m) - lambda_other(m)| over the common range.
    pub fn max_abs_diff(&self, other: &DirichletSeries) -> f64 {
        let x = self.truncation().min(other.truncation());
        (1..=x)
            .map(|m| (self.coeffs[m] - other.coeffs[m]).abs())
            .fold(0.0, f64::max)
    }

    /// Minimum coefficient and its index over 1..=truncation.
    pub fn min_coeff(&self) -> (usize, f64) {
        let mut arg = 1;
        let mut min = self.coeffs[1];
        for (m, &v) in self.coeffs.iter().enumerate().skip(2) {
            if v < min {
                min = v;
                arg = m;
            }
        }
        (arg, min)
    }

    /// CSV export: `# label: ...` / `# truncation: X` comments, then
    /// an `m,lambda` table.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# label: {}", self.label)?;
        writeln!(out, "# truncation: {}", self.truncation())?;
        writeln!(out, "m,lambda")?;
        for (m, v) in self.coeffs.iter().enumerate().skip(1) {
            writeln!(out, "{m},{v:.15e}")?;
        }
        Ok(())
    }
}

/// Assembles a multiplicative coefficient array from per-prime local series:
/// `local(p, depth)` must return the coefficients of the local factor at p
/// through depth floor(log_p x), with constant term 1.
pub(crate) fn assemble_multiplicative(
    x: usize,
    label: impl Into<String>,
    mut local: impl FnMut(u64, usize) -> Result<Vec<f64>>,
) -> Result<DirichletSeries> {
    assert!(x >= 1);
    let spf = smallest_prime_factor(x);
    // local expansions, keyed by prime
    let mut expansions: Vec<(u64, Vec<f64>)> = Vec::new();
    let mut index_of = vec![u32::MAX; x + 1];
    for p in 2..=x {
        if spf[p] == p as u32 {
            let mut depth = 0;
            let mut q = p;
            while q <= x {
                depth += 1;
                q = match q.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
            }
            index_of[p] = expansions.len() as u32;
            expansions.push((p as u64, local(p as u64, depth)?));
        }
    }

    let mut coeffs = vec![0.0; x + 1];
    coeffs[1] = 1.0;
    for m in 2..=x {
        let p = spf[m] as usize;
        let mut rest = m;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        let table = &expansions[index_of[p] as usize].1;
        coeffs[m] = table[e] * coeffs[rest];
    }
    Ok(DirichletSeries {
        label: label.into(),
        coeffs,
    })
}

/// The Dirichlet coefficients lambda_{Sym^n f}(m) for m <= x.
pub fn dirichlet_coeffs(n: u32, f: &Eigenform, x: usize) -> Result<DirichletSeries> {
    let label = format!("Sym^{n}(f), k={}", f.weight());
    if x == 0 {
        return Err(Error::Precision { min: 1, got: 0 });
    }
    if n == 0 {
        return Ok(DirichletSeries::ones(x, label));
    }
    if f.precision() < x {
        return Err(Error::Truncation {
            needed: x,
            available: f.precision(),
        });
    }
    assemble_multiplicative(x, label, |p, depth| {
        let sp = SatakeParams::of(f, p)?;
        local_factor_coeffs(local_params(n, &sp).params(), depth, DEFAULT_TOL)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisor_count_k, gcd};
    use crate::hecke_forms::{hecke_eigenform, satake};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn local_params_examples() {
        let s = satake(0.0, 3).unwrap(); // alpha = i, beta = -i
        let lp = local_params(0, &s);
        assert_eq!(lp.params(), &[c(1.0, 0.0)]);

        let lp = local_params(1, &s);
        assert!((lp.params()[0] - c(0.0, -1.0)).norm() < 1e-15); // beta
        assert!((lp.params()[1] - c(0.0, 1.0)).norm() < 1e-15); // alpha

        let lp = local_params(2, &s);
        let expect = [c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        for (got, want) in lp.params().iter().zip(expect) {
            assert!((got - want).norm() < 1e-15);
        }
        assert_eq!(lp.degree(), 3);
    }

    #[test]
    fn local_factor_geometric() {
        // zeta local factor: all-ones coefficients
        let ones = local_factor_coeffs(&[c(1.0, 0.0)], 3, 1e-12).unwrap();
        assert_eq!(ones, vec![1.0, 1.0, 1.0, 1.0]);

        // degree 2: first coefficient is the trace
        let s = satake(-0.7, 5).unwrap();
        let coeffs = local_factor_coeffs(local_params(1, &s).params(), 1, 1e-12).unwrap();
        assert!((coeffs[0] - 1.0).abs() < 1e-15);
        assert!((coeffs[1] + 0.7).abs() < 1e-14);
    }

    #[test]
    fn local_factor_symmetric_square_at_lambda_zero() {
        // oracle: 1/((1-x)(1+x)^2) = (1+x^2+...)(1-2x+3x^2-...) expanded
        // symbolically gives 1 - x + 2x^2 - 2x^3 + 3x^4 - ...
        let params = [c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        let got = local_factor_coeffs(&params, 5, 1e-12).unwrap();
        let want = [1.0, -1.0, 2.0, -2.0, 3.0, -3.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-13, "got {got:?}");
        }
    }

    #[test]
    fn imaginary_residue_detected() {
        // not closed under conjugation
        let params = [c(0.0, 1.0)];
        assert!(matches!(
            local_factor_coeffs(&params, 2, 1e-9),
            Err(Error::ImaginaryResidue { .. })
        ));
    }

    #[test]
    fn dirichlet_series_ops() {
        let z = DirichletSeries::ones(10, "zeta");
        assert_eq!(z.truncation(), 10);
        assert_eq!(z.coeff(7), 1.0);
        // zeta^2 has divisor-count coefficients
        let z2 = z.multiply(&z);
        let spf = smallest_prime_factor(10);
        for m in 1..=10 {
            assert_eq!(z2.coeff(m), divisor_count_k(2, m, &spf), "m = {m}");
        }
    }

    #[test]
    fn sym1_recovers_hecke_eigenvalues() {
        let f = hecke_eigenform(12, 200).unwrap();
        let s = dirichlet_coeffs(1, &f, 200).unwrap();
        for m in 1..=200 {
            assert!(
                (s.coeff(m) - f.lambda(m)).abs() < 1e-12 * (1.0 + f.lambda(m).abs()),
                "m = {m}"
            );
        }
    }

    #[test]
    fn sym0_is_zeta() {
        let f = hecke_eigenform(12, 10).unwrap();
        let s = dirichlet_coeffs(0, &f, 10).unwrap();
        assert!(s.coeffs()[1..].iter().all(|&v| v == 1.0));
    }

    #[test]
    fn sym2_prime_coefficient() {
        let f = hecke_eigenform(12, 50).unwrap();
        let s = dirichlet_coeffs(2, &f, 50).unwrap();
        for p in [2usize, 3, 5, 7] {
            let lam = f.lambda(p);
            assert!(
                (s.coeff(p) - (lam * lam - 1.0)).abs() < 1e-12,
                "p = {p}"
            );
        }
    }

    #[test]
    fn divisor_bound_holds() {
        let f = hecke_eigenform(12, 2000).unwrap();
        let spf = smallest_prime_factor(2000);
        for n in 1..=4u32 {
            let s = dirichlet_coeffs(n, &f, 2000).unwrap();
            for m in 1..=2000 {
                let bound = divisor_count_k(n + 1, m, &spf);
                assert!(
                    s.coeff(m).abs() <= bound + 1e-9,
                    "n = {n}, m = {m}: {} vs {bound}",
                    s.coeff(m)
                );
            }
        }
    }

    #[test]
    fn truncation_errors() {
        let f = hecke_eigenform(12, 10).unwrap();
        assert!(matches!(
            dirichlet_coeffs(1, &f, 11),
            Err(Error::Truncation {
                needed: 11,
                available: 10
            })
        ));
    }

    #[test]
    fn csv_shape() {
        let z = DirichletSeries::ones(3, "zeta");
        let mut buf = Vec::new();
        z.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# label: zeta"));
        assert_eq!(lines.next(), Some("# truncation: 3"));
        assert_eq!(lines.next(), Some("m,lambda"));
        assert_eq!(text.lines().count(), 6);
    }

    fn sym_fixture(n: u32) -> &'static DirichletSeries {
        use std::sync::OnceLock;
        static CACHE: OnceLock<Vec<DirichletSeries>> = OnceLock::new();
        &CACHE.get_or_init(|| {
            let f = hecke_eigenform(12, 1600).unwrap();
            (1..=3)
                .map(|n| dirichlet_coeffs(n, &f, 1600).unwrap())
                .collect()
        })[n as usize - 1]
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_pairs(n in 1u32..=3, a in 2usize..40, b in 2usize..40) {
            prop_assume!(gcd(a as u64, b as u64) == 1);
            let s = sym_fixture(n);
            let lhs = s.coeff(a) * s.coeff(b);
            let rhs = s.coeff(a * b);
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }

        #[test]
        fn pairwise_product_count(na in 0usize..5, nb in 0usize..5) {
            let xs: Vec<Complex64> = (0..na).map(|i| c(i as f64, 1.0)).collect();
            let ys: Vec<Complex64> = (0..nb).map(|i| c(1.0, i as f64)).collect();
            prop_assert_eq!(pairwise_products(&xs, &ys).len(), na * nb);
        }
    }
}
