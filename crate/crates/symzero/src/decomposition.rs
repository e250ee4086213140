//! Verification of the Rankin-Selberg decomposition
//!
//!   L(s, Sym^n f x Sym^(n+r) f) = prod_{i=0}^{n} L(s, Sym^(2i+r) f)
//!
//! at three independent levels.  At the level of Satake exponents the
//! identity says two integer multisets coincide:
//!
//!   A_{n,r} = {n - i - j : 0 <= i <= n, 0 <= j <= n + r},
//!   B_{n,r} = {m - l : 0 <= m <= n, 0 <= l <= 2m + r},
//!
//! both of cardinality (n+1)(n+r+1) (a parameter alpha^a beta^b with
//! a + b = const is determined by the exponent difference, halved; A indexes
//! the left side, B the right).  The inductive proof peels the top row off
//! each multiset; the recursions it uses are exposed here and checked as
//! exact multiset equalities.  Floating-point verification then compares
//! local parameter multisets and, finally, globally assembled Dirichlet
//! coefficients computed by genuinely different code paths.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke_forms::{Eigenform, SatakeParams};
use crate::sym_power::{
    dirichlet_coeffs, local_factor_coeffs, local_params, pairwise_products, assemble_multiplicative,
    DEFAULT_TOL,
};

/// Integer multiset with explicit multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExponentMultiset {
    entries: BTreeMap<i64, u64>,
}

impl ExponentMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, value: i64) {
        self.insert_with_multiplicity(value, 1);
    }

    pub fn insert_with_multiplicity(&mut self, value: i64, mult: u64) {
        if mult > 0 {
            *self.entries.entry(value).or_insert(0) += mult;
        }
    }

    /// Multiset union (multiplicities add).
    pub fn union(mut self, other: &ExponentMultiset) -> Self {
        for (&v, &m) in &other.entries {
            self.insert_with_multiplicity(v, m);
        }
        self
    }

    /// The multiset {v + delta : v in self}.
    pub fn shifted(&self, delta: i64) -> Self {
        ExponentMultiset {
            entries: self.entries.iter().map(|(&v, &m)| (v + delta, m)).collect(),
        }
    }

    pub fn cardinality(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn multiplicity(&self, value: i64) -> u64 {
        self.entries.get(&value).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.entries.iter().map(|(&v, &m)| (v, m))
    }
}

impl FromIterator<i64> for ExponentMultiset {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        let mut out = ExponentMultiset::new();
        for v in iter {
            out.insert(v);
        }
        out
    }
}

/// A_{n,r} = {n - i - j : 0 <= i <= n, 0 <= j <= n + r}.
pub fn multiset_a(n: u32, r: u32) -> ExponentMultiset {
    assert!(n >= 1);
    let (n, r) = (n as i64, r as i64);
    (0..=n)
        .flat_map(|i| (0..=n + r).map(move |j| n - i - j))
        .collect()
}

/// B_{n,r} = {m - l : 0 <= m <= n, 0 <= l <= 2m + r}.
pub fn multiset_b(n: u32, r: u32) -> ExponentMultiset {
    assert!(n >= 1);
    let (n, r) = (n as i64, r as i64);
    (0..=n)
        .flat_map(|m| (0..=2 * m + r).map(move |l| m - l))
        .collect()
}

/// The tail both inductive recursions append after shifting by +1:
/// {-n-r-1} u {v with multiplicity 2 : -n-r <= v <= -r} u {v : -r+1 <= v <= 0}.
pub fn induction_tail(n: u32, r: u32) -> ExponentMultiset {
    let (n, r) = (n as i64, r as i64);
    let mut out = ExponentMultiset::new();
    out.insert(-n - r - 1);
    for v in -n - r..=-r {
        out.insert_with_multiplicity(v, 2);
    }
    for v in -r + 1..=0 {
        out.insert(v);
    }
    out
}

/// The A-side induction step: A_{n+1,r} = (A_{n,r} + 1) u {-i-r : 0 <= i <= n}
/// u {-j : 0 <= j <= n+r+1}, whose appended part merges to induction_tail.
pub fn a_recursion_holds(n: u32, r: u32) -> bool {
    let (ni, ri) = (n as i64, r as i64);
    let appended: ExponentMultiset = (0..=ni)
        .map(|i| -i - ri)
        .chain((0..=ni + ri + 1).map(|j| -j))
        .collect();
    let rhs = multiset_a(n, r).shifted(1).union(&appended);
    rhs == multiset_a(n + 1, r) && appended == induction_tail(n, r)
}

/// The B-side induction step: B_{n+1,r} = (B_{n,r} + 1)
/// u {-m-r, -m-r-1 : 0 <= m <= n} u {-l : 0 <= l <= r}, same merged tail.
pub fn b_recursion_holds(n: u32, r: u32) -> bool {
    let (ni, ri) = (n as i64, r as i64);
    let appended: ExponentMultiset = (0..=ni)
        .flat_map(|m| [-m - ri, -m - ri - 1])
        .chain((0..=ri).map(|l| -l))
        .collect();
    let rhs = multiset_b(n, r).shifted(1).union(&appended);
    rhs == multiset_b(n + 1, r) && appended == induction_tail(n, r)
}

/// One cell of a verification report, at any of the three levels.
#[derive(Clone, Debug, Serialize)]
pub struct DecompReport {
    pub n: u32,
    pub r: u32,
    pub level: String,
    pub pass: bool,
    pub max_deviation: f64,
    pub cardinality: u64,
}

/// Exact multiset check for a single (n, r).
pub fn verify_multiset_cell(n: u32, r: u32) -> DecompReport {
    let a = multiset_a(n, r);
    let b = multiset_b(n, r);
    let card = (n as u64 + 1) * ((n + r) as u64 + 1);
    let pass = a == b && a.cardinality() == card;
    DecompReport {
        n,
        r,
        level: "multiset".into(),
        pass,
        max_deviation: 0.0,
        cardinality: a.cardinality(),
    }
}

/// Outcome of an exhaustive multiset sweep.
#[derive(Clone, Debug, Serialize)]
pub struct MultisetSweep {
    pub pass: bool,
    pub cases: u64,
    pub first_failure: Option<(u32, u32)>,
}

/// A_{n,r} = B_{n,r} for all 1 <= n <= n_max, 0 <= r <= r_max.
pub fn verify_multiset_identity(n_max: u32, r_max: u32) -> MultisetSweep {
    assert!(n_max >= 1);
    let mut cases = 0;
    for n in 1..=n_max {
        for r in 0..=r_max {
            cases += 1;
            if !verify_multiset_cell(n, r).pass {
                return MultisetSweep {
                    pass: false,
                    cases,
                    first_failure: Some((n, r)),
                };
            }
        }
    }
    MultisetSweep {
        pass: true,
        cases,
        first_failure: None,
    }
}

fn sort_canonical(params: &mut [Complex64]) {
    params.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Max distance of a greedy nearest-neighbor matching between two equal-size
/// multisets.  Sorting both and zipping is unstable when parameters tie (a
/// -0.0 real part or a conjugate pair at the same real part can interleave
/// differently on the two sides), so match greedily instead: left elements
/// in canonical order, each taking its nearest unused partner.
fn multiset_max_distance(mut left: Vec<Complex64>, right: &[Complex64]) -> f64 {
    sort_canonical(&mut left);
    let mut used = vec![false; right.len()];
    let mut worst = 0.0f64;
    for l in left {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, r) in right.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (l - r).norm();
            if d < best {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

/// Compares the pairwise-product multiset of Sym^n x Sym^(n+r) against the
/// union over i of the Sym^(2i+r) local parameters, by canonical sort and
/// pairwise distance.
pub fn verify_local_identity(
    n: u32,
    r: u32,
    satake: &SatakeParams,
    tol: f64,
) -> Result<DecompReport> {
    assert!(n >= 1);
    let left_factors = local_params(n, satake);
    let right_factors = local_params(n + r, satake);
    let left = pairwise_products(left_factors.params(), right_factors.params());
    let right: Vec<Complex64> = (0..=n)
        .flat_map(|i| local_params(2 * i + r, satake).params().to_vec())
        .collect();
    if left.len() != right.len() {
        return Err(Error::MultisetCardinality {
            left: left.len(),
            right: right.len(),
        });
    }
    let cardinality = left.len() as u64;
    let max_deviation = multiset_max_distance(left, &right);
    Ok(DecompReport {
        n,
        r,
        level: "local".into(),
        pass: max_deviation < tol,
        max_deviation,
        cardinality,
    })
}

/// Expands both sides of the global identity to Dirichlet coefficients for
/// m <= x and reports the maximum deviation.  The left side goes through the
/// Rankin-Selberg pairwise-product parameters at each prime; the right side
/// multiplies independently assembled Sym^(2i+r) series.
pub fn verify_global_identity(
    n: u32,
    r: u32,
    f: &Eigenform,
    x: usize,
    tol: f64,
) -> Result<DecompReport> {
    assert!(n >= 1);
    if f.precision() < x {
        return Err(Error::Truncation {
            needed: x,
            available: f.precision(),
        });
    }
    let label = format!("Sym^{n} x Sym^{}", n + r);
    let left = assemble_multiplicative(x, label, |p, depth| {
        let sp = SatakeParams::of(f, p)?;
        let params = pairwise_products(
            local_params(n, &sp).params(),
            local_params(n + r, &sp).params(),
        );
        local_factor_coeffs(&params, depth, DEFAULT_TOL)
    })?;

    let mut right = dirichlet_coeffs(r, f, x)?;
    for i in 1..=n {
        right = right.multiply(&dirichlet_coeffs(2 * i + r, f, x)?);
    }

    let max_deviation = left.max_abs_diff(&right);
    Ok(DecompReport {
        n,
        r,
        level: "global".into(),
        pass: max_deviation < tol,
        max_deviation,
        cardinality: (n as u64 + 1) * ((n + r) as u64 + 1),
    })
}
