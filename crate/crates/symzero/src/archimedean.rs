//! Archimedean data: gamma factors, analytic conductors, zero-free regions.
//!
//! For a weight-k level-1 eigenform, the completed symmetric power
//! L-function has gamma factor
//!
//!   n = 2m+1:  prod_{j=0}^{m} Gamma_C(s + (j + 1/2)(k-1)),
//!   n = 2m:    Gamma_R(s + delta) prod_{j=1}^{m} Gamma_C(s + j(k-1)),
//!
//! where Gamma_R(s) = pi^(-s/2) Gamma(s/2), Gamma_C(s) = 2 (2pi)^(-s)
//! Gamma(s), and delta in {0, 1} is the parity of m.  The analytic
//! conductor at s multiplies |s + mu|-type contributions over the shifts:
//! a factor Gamma_R(s + a) contributes (1 + |s + a|) and Gamma_C(s + a)
//! contributes (1 + |s + a|)(2 + |s + a|), evaluated here at real s.  The
//! arithmetic conductor is 1 throughout (level one), so the analytic
//! conductor is the whole story.
//!
//! The zero-free interval is the standard-shape region
//! sigma > 1 - c / (n^4 log(n k)) specialised to fixed n, giving
//! sigma > 1 - c_n / log k as k grows.

use serde::Serialize;

use crate::error::{Error, Result};

/// Arithmetic conductor of any level-one symmetric power: always 1.
pub const LEVEL_ONE_ARITHMETIC_CONDUCTOR: u64 = 1;

/// Gamma_R(s) = pi^(-s/2) Gamma(s/2) or Gamma_C(s) = 2 (2pi)^(-s) Gamma(s).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GammaKind {
    Real,
    Complex,
}

/// One factor Gamma_kind(s + shift) of the completed L-function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaFactor {
    pub kind: GammaKind,
    pub shift: f64,
}

impl GammaFactor {
    /// Degree contribution: 1 for Gamma_R, 2 for Gamma_C.
    pub fn degree(&self) -> u32 {
        match self.kind {
            GammaKind::Real => 1,
            GammaKind::Complex => 2,
        }
    }
}

/// Gamma factors of the completed L(s, Sym^n f) for weight k.
pub fn gamma_factors(n: u32, k: u32) -> Result<Vec<GammaFactor>> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    let km1 = (k - 1) as f64;
    let mut factors = Vec::new();
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        for j in 0..=m {
            factors.push(GammaFactor {
                kind: GammaKind::Complex,
                shift: (j as f64 + 0.5) * km1,
            });
        }
    } else {
        let m = n / 2;
        let delta = if m % 2 == 1 { 1.0 } else { 0.0 };
        factors.push(GammaFactor {
            kind: GammaKind::Real,
            shift: delta,
        });
        for j in 1..=m {
            factors.push(GammaFactor {
                kind: GammaKind::Complex,
                shift: j as f64 * km1,
            });
        }
    }
    debug_assert_eq!(
        factors.iter().map(GammaFactor::degree).sum::<u32>(),
        n + 1
    );
    Ok(factors)
}

/// Analytic conductor contribution of a list of gamma factors at real s,
/// times the arithmetic conductor (= 1): Gamma_R(s+a) contributes
/// (1 + |s+a|), Gamma_C(s+a) contributes (1 + |s+a|)(2 + |s+a|).
pub fn analytic_conductor_at(n: u32, k: u32, s: f64) -> Result<f64> {
    let mut q = LEVEL_ONE_ARITHMETIC_CONDUCTOR as f64;
    for g in gamma_factors(n, k)? {
        let t = (s + g.shift).abs();
        q *= match g.kind {
            GammaKind::Real => 1.0 + t,
            GammaKind::Complex => (1.0 + t) * (2.0 + t),
        };
    }
    Ok(q)
}

/// Analytic conductor at the central normalization point s = 0.
pub fn analytic_conductor(n: u32, k: u32) -> Result<f64> {
    analytic_conductor_at(n, k, 0.0)
}

/// log of the analytic conductor at s = 0, summed factorwise so large n
/// does not overflow the product.
pub fn log_analytic_conductor(n: u32, k: u32) -> Result<f64> {
    let mut lq = 0.0;
    for g in gamma_factors(n, k)? {
        let t = g.shift.abs();
        lq += match g.kind {
            GammaKind::Real => (1.0 + t).ln(),
            GammaKind::Complex => (1.0 + t).ln() + (2.0 + t).ln(),
        };
    }
    Ok(lq)
}

/// Additive conductor convention for an explicit factor list: the sum of
/// the per-factor log contributions at s = 0.
pub fn log_conductor_product(factors: &[GammaFactor]) -> f64 {
    factors
        .iter()
        .map(|g| {
            let t = g.shift.abs();
            match g.kind {
                GammaKind::Real => (1.0 + t).ln(),
                GammaKind::Complex => (1.0 + t).ln() + (2.0 + t).ln(),
            }
        })
        .sum()
}

/// (exact log Q(n,k), the comparison quantity n log(nk/2)).  For n >= 1 and
/// k >= 12 the exact value is bounded by a constant multiple of the second.
pub fn log_conductor_bound(n: u32, k: u32) -> Result<(f64, f64)> {
    let exact = log_analytic_conductor(n, k)?;
    let model = n as f64 * ((n as f64) * (k as f64) / 2.0).ln();
    Ok((exact, model))
}

/// Minimal constants C for the even-case conductor majorization
/// Q(2m, k) <= C * (k-1)^(2m) * (m!)^2 over 1 <= m <= m_max, returned as
/// (full, offsets_only): `full` keeps the parity factor (1 + delta) on the
/// left, `offsets_only` divides it out so C measures only the
/// (+1)(+2)-offset inflation.  The offsets-only constant stays below 2 for
/// k >= 14 (m <= 10) but not at k = 12.
pub fn majorization_constants(k: u32, m_max: u32) -> Result<(f64, f64)> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    let kappa = (k - 1) as f64;
    let mut offsets = 1.0;
    let mut full_max: f64 = 0.0;
    let mut off_max: f64 = 0.0;
    for m in 1..=m_max {
        let jk = m as f64 * kappa;
        offsets *= (jk + 1.0) * (jk + 2.0) / (jk * jk);
        let parity = if m % 2 == 1 { 2.0 } else { 1.0 };
        full_max = full_max.max(parity * offsets);
        off_max = off_max.max(offsets);
    }
    Ok((full_max, off_max))
}

/// The interval (left_endpoint, 1) asserted free of real zeros of
/// L(s, Sym^n f), shape 1 - c / (n^4 log(n k)).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZeroFreeInterval {
    pub left_endpoint: f64,
    pub c: f64,
    pub n: u32,
    pub k: u32,
}

/// Left endpoint 1 - c / (n^4 log(nk)).
pub fn zero_free_endpoint(n: u32, k: u32, c: f64) -> Result<ZeroFreeInterval> {
    if n == 0 {
        return Err(Error::InvalidArgument("zero-free region needs n >= 1".into()));
    }
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "zero-free constant must be positive, got {c}"
        )));
    }
    let n4 = (n as f64).powi(4);
    let left_endpoint = 1.0 - c / (n4 * ((n as f64) * (k as f64)).ln());
    Ok(ZeroFreeInterval {
        left_endpoint,
        c,
        n,
        k,
    })
}

/// Fixed-n form of the endpoint: 1 - c_n / log k.
pub fn theorem_form_endpoint(k: u32, c_n: f64) -> Result<f64> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k));
    }
    if !(c_n > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "zero-free constant must be positive, got {c_n}"
        )));
    }
    Ok(1.0 - c_n / (k as f64).ln())
}

/// One row of a conductor / zero-free-region sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub k: u32,
    pub q: f64,
    pub log_q: f64,
    pub bound: f64,
    pub endpoint: f64,
}

/// A single sweep cell: conductor, log-conductor, model bound, endpoint.
pub fn sweep_cell(n: u32, k: u32, c: f64) -> Result<SweepRow> {
    let log_q = log_analytic_conductor(n, k)?;
    let (_, bound) = log_conductor_bound(n, k)?;
    Ok(SweepRow {
        n,
        k,
        q: analytic_conductor(n, k)?,
        log_q,
        bound,
        endpoint: zero_free_endpoint(n, k, c)?.left_endpoint,
    })
}

/// Rows for 1 <= n <= n_max and even 12 <= k <= k_max, ordered by (n, k).
pub fn sweep_rows(n_max: u32, k_max: u32, c: f64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let mut k = 12;
        while k <= k_max {
            rows.push(sweep_cell(n, k, c)?);
            k += 2;
        }
    }
    Ok(rows)
}
