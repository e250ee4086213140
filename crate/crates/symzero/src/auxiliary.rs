//! The auxiliary products D(s) with nonnegative Dirichlet coefficients.
//!
//! For the isobaric sum Pi = 1 ⊞ Sym^n f (n even) or 1 ⊞ Sym^n f ⊞ Sym^(n+1) f
//! (n odd), the Rankin-Selberg square D(s) = L(s, Pi x Pi) decomposes into
//! symmetric power L-functions:
//!
//!   n even:  D = zeta^2 L(Sym^n)^3 prod_{1 <= i <= n, i != n/2} L(Sym^2i),
//!   n odd:   D = zeta^3 L(Sym^n)^4 L(Sym^(n+1))^2
//!              x prod_{1 <= i <= n} L(Sym^2i)
//!              x prod_{0 <= j <= n, j != (n-1)/2} L(Sym^(2j+1))^2
//!              x prod_{1 <= k <= n+1} L(Sym^2k),
//!
//! with multiplicities merged.  The structural facts a Siegel-zero argument
//! consumes — pole order at s = 1 (2 or 3), the multiplicity of L(s, Sym^n)
//! itself (3 or 4, strictly larger than the pole order), total degree
//! (n+2)^2 or (2n+4)^2 — are properties of the factor multiset, not of any
//! numerics, and are exposed as such.  Coefficient expansion and the
//! positivity certification of the Rankin-Selberg square live alongside.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke_forms::{Eigenform, SatakeParams};
use crate::highprec::{to_f64, HighPrecCtx};
use crate::sym_power::{
    assemble_multiplicative, dirichlet_coeffs, local_factor_coeffs, local_params,
    pairwise_products, DirichletSeries, DEFAULT_TOL,
};
use crate::Precision;

/// Formal multiset of (symmetric-power index, multiplicity) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorMultiset {
    factors: BTreeMap<u32, u32>,
}

impl FactorMultiset {
    /// (index, multiplicity) pairs, ascending in the index.
    pub fn factors(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.factors.iter().map(|(&i, &m)| (i, m))
    }

    pub fn as_pairs(&self) -> Vec<(u32, u32)> {
        self.factors().collect()
    }

    pub fn multiplicity(&self, index: u32) -> u32 {
        self.factors.get(&index).copied().unwrap_or(0)
    }

    /// Order of the pole at s = 1: every zeta factor contributes one.
    pub fn pole_order(&self) -> u32 {
        self.multiplicity(0)
    }

    /// Degree of the underlying L-function: sum of (index+1) * multiplicity.
    pub fn total_degree(&self) -> u64 {
        self.factors()
            .map(|(i, m)| (i as u64 + 1) * m as u64)
            .sum()
    }

    /// Number of symmetric-power factors counted with multiplicity
    /// (zeta = Sym^0 included).
    pub fn factor_count(&self) -> u32 {
        self.factors().map(|(_, m)| m).sum()
    }
}

/// The factor multiset of D(s) for the given symmetric power index n >= 1.
pub fn factor_multiset(n: u32) -> Result<FactorMultiset> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "auxiliary product requires n >= 1".into(),
        ));
    }
    let mut factors: BTreeMap<u32, u32> = BTreeMap::new();
    let mut add = |idx: u32, mult: u32| *factors.entry(idx).or_insert(0) += mult;
    if n % 2 == 0 {
        add(0, 2);
        add(n, 3);
        for i in 1..=n {
            if i != n / 2 {
                add(2 * i, 1);
            }
        }
    } else {
        add(0, 3);
        add(n, 4);
        add(n + 1, 2);
        for i in 1..=n {
            add(2 * i, 1);
        }
        for j in 0..=n {
            if j != (n - 1) / 2 {
                add(2 * j + 1, 2);
            }
        }
        for k in 1..=n + 1 {
            add(2 * k, 1);
        }
    }
    Ok(FactorMultiset { factors })
}

/// Pole order of D(s) at s = 1: 2 for even n, 3 for odd.
pub fn pole_order(n: u32) -> u32 {
    if n % 2 == 0 {
        2
    } else {
        3
    }
}

/// Multiplicity with which L(s, Sym^n f) divides D(s): 3 for even n, 4 for
/// odd — strictly larger than the pole order, which is the whole argument.
pub fn target_multiplicity(n: u32) -> u32 {
    let t = if n % 2 == 0 { 3 } else { 4 };
    debug_assert!(t > pole_order(n));
    t
}

/// Local parameters of the isobaric sum Pi at one prime: the union of the
/// constituents' parameter multisets.
pub fn pi_params(n: u32, satake: &SatakeParams) -> Vec<Complex64> {
    let mut params = vec![Complex64::new(1.0, 0.0)];
    params.extend_from_slice(local_params(n, satake).params());
    if n % 2 == 1 {
        params.extend_from_slice(local_params(n + 1, satake).params());
    }
    params
}

/// Dirichlet coefficients of D(s) to x, by multiplying the factor series.
pub fn expand_coeffs(n: u32, f: &Eigenform, x: usize) -> Result<DirichletSeries> {
    let factors = factor_multiset(n)?;
    let mut out: Option<DirichletSeries> = None;
    for (idx, mult) in factors.factors() {
        let base = dirichlet_coeffs(idx, f, x)?;
        for _ in 0..mult {
            out = Some(match out {
                None => base.clone(),
                Some(acc) => acc.multiply(&base),
            });
        }
    }
    let series = out.expect("factor multiset is nonempty");
    Ok(DirichletSeries::new(
        format!("D_{n}(s), k={}", f.weight()),
        series.coeffs().to_vec(),
    ))
}

/// Independent expansion of D(s) as the Rankin-Selberg square of Pi: at each
/// prime the local parameters are the pairwise products of pi_params with
/// itself.  Used as the cross-check oracle for expand_coeffs.
pub fn rankin_selberg_expansion(n: u32, f: &Eigenform, x: usize) -> Result<DirichletSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "auxiliary product requires n >= 1".into(),
        ));
    }
    if f.precision() < x {
        return Err(Error::Truncation {
            needed: x,
            available: f.precision(),
        });
    }
    assemble_multiplicative(
        x,
        format!("Pi x Pi (n={n}, k={})", f.weight()),
        |p, depth| {
            let sp = SatakeParams::of(f, p)?;
            let pi = pi_params(n, &sp);
            let rs = pairwise_products(&pi, &pi);
            local_factor_coeffs(&rs, depth, DEFAULT_TOL)
        },
    )
}

/// Floor report of a coefficient array.
#[derive(Clone, Debug, Serialize)]
pub struct CoeffFloor {
    pub min_coeff: f64,
    pub argmin: usize,
    pub pass: bool,
}

/// Passes iff every coefficient is >= -tol.
pub fn check_nonneg(series: &DirichletSeries, tol: f64) -> CoeffFloor {
    let (argmin, min_coeff) = series.min_coeff();
    CoeffFloor {
        min_coeff,
        argmin,
        pass: min_coeff >= -tol,
    }
}

/// One borderline coefficient re-evaluated at high precision.
#[derive(Clone, Debug, Serialize)]
pub struct Recheck {
    pub m: usize,
    pub double_value: f64,
    pub high_value: f64,
}

/// Positivity certification for D(s) built from factor_multiset(n).
#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub n: u32,
    pub weight: u32,
    #[serde(rename = "X")]
    pub x: usize,
    pub min_coeff: f64,
    pub argmin: usize,
    pub pass: bool,
    /// Mantissa bits of the recheck pass, when one ran.
    pub recheck_bits: Option<u32>,
    pub rechecked: Vec<Recheck>,
}

/// Expands D(s) to x and certifies lambda_D(m) >= -tol for all m.  With
/// `Precision::High(bits)`, any coefficient in (-tol, 0) is recomputed at
/// the given mantissa width (exact integer seeds), and only a value that
/// stays below -2^(-bits/2) counts as a genuine violation.
pub fn certify_positivity(
    n: u32,
    f: &Eigenform,
    x: usize,
    tol: f64,
    precision: Precision,
) -> Result<PositivityReport> {
    let series = expand_coeffs(n, f, x)?;
    let floor = check_nonneg(&series, tol);
    let mut pass = floor.pass;

    let mut rechecked = Vec::new();
    let mut recheck_bits = None;
    if let Precision::High(bits) = precision {
        recheck_bits = Some(bits);
        let borderline: Vec<usize> = (1..=x)
            .filter(|&m| series.coeff(m) < 0.0 && series.coeff(m) >= -tol)
            .collect();
        if !borderline.is_empty() {
            let ctx = HighPrecCtx::new(bits);
            let factors = factor_multiset(n)?.as_pairs();
            let genuine_floor = -(2f64.powi(-(bits as i32) / 2));
            for m in borderline {
                let hi = ctx.lambda_d(&factors, f, m)?;
                let hi_f64 = to_f64(&hi);
                rechecked.push(Recheck {
                    m,
                    double_value: series.coeff(m),
                    high_value: hi_f64,
                });
                if hi_f64 < genuine_floor {
                    pass = false;
                }
            }
        }
    }

    Ok(PositivityReport {
        n,
        weight: f.weight(),
        x,
        min_coeff: floor.min_coeff,
        argmin: floor.argmin,
        pass,
        recheck_bits,
        rechecked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_forms::{hecke_eigenform, satake};
    use proptest::prelude::*;

    #[test]
    fn even_case_n2() {
        let fm = factor_multiset(2).unwrap();
        assert_eq!(fm.as_pairs(), vec![(0, 2), (2, 3), (4, 1)]);
        assert_eq!(fm.total_degree(), 16);
        assert_eq!(fm.factor_count(), 6); // n + 4
        assert_eq!(fm.pole_order(), 2);
    }

    #[test]
    fn odd_case_n1() {
        let fm = factor_multiset(1).unwrap();
        assert_eq!(
            fm.as_pairs(),
            vec![(0, 3), (1, 4), (2, 4), (3, 2), (4, 1)]
        );
        assert_eq!(fm.total_degree(), 36); // (2n+4)^2
        assert_eq!(fm.pole_order(), 3);
    }

    #[test]
    fn degree_and_pole_bookkeeping() {
        for n in 1..=100u32 {
            let fm = factor_multiset(n).unwrap();
            let expect = if n % 2 == 0 {
                ((n as u64) + 2).pow(2)
            } else {
                (2 * (n as u64) + 4).pow(2)
            };
            assert_eq!(fm.total_degree(), expect, "n = {n}");
            assert_eq!(fm.pole_order(), pole_order(n), "n = {n}");
            assert_eq!(fm.multiplicity(n), target_multiplicity(n), "n = {n}");
            assert!(target_multiplicity(n) > pole_order(n));
            if n % 2 == 0 {
                assert_eq!(fm.factor_count(), n + 4, "n = {n}");
            }
        }
        assert!(factor_multiset(0).is_err());
    }

    #[test]
    fn pi_degree_matches_square_root_of_total() {
        let s = satake(1.3, 7).unwrap();
        for n in 1..=8u32 {
            let d = pi_params(n, &s).len() as u64;
            assert_eq!(
                d * d,
                factor_multiset(n).unwrap().total_degree(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn expansion_matches_rankin_selberg() {
        let f = hecke_eigenform(12, 400).unwrap();
        for n in 1..=3u32 {
            let series = expand_coeffs(n, &f, 400).unwrap();
            let rs = rankin_selberg_expansion(n, &f, 400).unwrap();
            let dev = series.max_abs_diff(&rs);
            assert!(dev < 1e-8, "n = {n}: deviation {dev}");
        }
    }

    #[test]
    fn coefficients_nonnegative_small() {
        let f = hecke_eigenform(12, 300).unwrap();
        for n in 1..=4u32 {
            let series = expand_coeffs(n, &f, 300).unwrap();
            let floor = check_nonneg(&series, 1e-9);
            assert!(
                floor.pass,
                "n = {n}: min {} at {}",
                floor.min_coeff, floor.argmin
            );
        }
    }

    #[test]
    fn lambda_d_at_primes_is_square(){
        // at a prime, lambda_D(p) = |sum of pi_params|^2 >= 0
        let f = hecke_eigenform(12, 100).unwrap();
        for n in 1..=4u32 {
            let series = expand_coeffs(n, &f, 100).unwrap();
            for p in [2usize, 3, 5, 7, 11, 13] {
                let sp = SatakeParams::of(&f, p as u64).unwrap();
                let s: Complex64 = pi_params(n, &sp).iter().sum();
                let want = s.norm_sqr();
                assert!(
                    (series.coeff(p) - want).abs() < 1e-10,
                    "n = {n}, p = {p}"
                );
                assert!(series.coeff(p) >= 0.0);
            }
        }
    }

    #[test]
    fn certification_with_recheck() {
        let f = hecke_eigenform(12, 500).unwrap();
        let rep = certify_positivity(2, &f, 500, 1e-9, Precision::High(192)).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.n, 2);
        assert_eq!(rep.weight, 12);
        // any borderline coefficient that was rechecked must have come out
        // nonnegative at high precision
        for r in &rep.rechecked {
            assert!(r.high_value >= -1e-20, "m = {}", r.m);
        }
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"X\":500"));
    }

    #[test]
    fn high_precision_agrees_with_double() {
        let f = hecke_eigenform(12, 60).unwrap();
        let factors = factor_multiset(2).unwrap().as_pairs();
        let ctx = HighPrecCtx::new(256);
        let series = expand_coeffs(2, &f, 60).unwrap();
        for m in 1..=60 {
            let hi = to_f64(&ctx.lambda_d(&factors, &f, m).unwrap());
            assert!(
                (hi - series.coeff(m)).abs() < 1e-9 * (1.0 + series.coeff(m).abs()),
                "m = {m}: {hi} vs {}",
                series.coeff(m)
            );
        }
    }

    proptest! {
        #[test]
        fn factor_count_odd(n in proptest::num::u32::ANY.prop_map(|v| 1 + 2 * (v % 30))) {
            // odd n: count = 3 + 4 + 2 + n + 2n + (n+1) = 4n + 10
            let fm = factor_multiset(n).unwrap();
            prop_assert_eq!(fm.factor_count(), 4 * n + 10);
        }
    }
}
