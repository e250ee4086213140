//! Software-float recheck path for positivity certification.
//!
//! Double precision flags a D(s) coefficient as borderline when it lands in
//! (-tol, 0); this module recomputes such a coefficient with a configurable
//! mantissa so rounding noise can be told apart from a genuine sign
//! violation.  The route avoids complex arithmetic entirely: with
//! lambda_p = 2 cos(theta_p), the Chebyshev values c_l = 2 cos(l theta_p)
//! obey c_(l+1) = lambda_p c_l - c_(l-1), and the Sym^idx local factor is
//! the real polynomial
//!
//!   F_idx(x) = (1 - x)^(idx even) prod_{l = idx, idx-2, ..., l >= 1} (1 - c_l x + x^2),
//!
//! so a D(s) local factor is an exact-seeded product of such polynomials,
//! inverted as a power series.  Seeds come from the eigenform's exact
//! integer coefficients; everything after that is correctly rounded at the
//! requested precision.

use astro_float::{BigFloat, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Signed as _;

use crate::error::{Error, Result};
use crate::hecke_forms::Eigenform;

/// Fixed-precision arithmetic context.
#[derive(Clone, Copy, Debug)]
pub struct HighPrecCtx {
    bits: usize,
    rm: RoundingMode,
}

impl HighPrecCtx {
    pub fn new(bits: u32) -> Self {
        HighPrecCtx {
            bits: bits as usize,
            rm: RoundingMode::ToEven,
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits)
    }

    fn from_bigint(&self, a: &BigInt) -> BigFloat {
        // accumulate base-2^64 digits most significant first, at enough
        // precision to hold the integer exactly
        let digits = a.magnitude().to_u64_digits();
        let work = self.bits.max(digits.len() * 64 + 64);
        let base = BigFloat::from_f64(18446744073709551616.0, work); // 2^64, exact
        let mut acc = BigFloat::from_u64(0, work);
        for &d in digits.iter().rev() {
            acc = acc.mul(&base, work, self.rm);
            acc = acc.add(&BigFloat::from_u64(d, work), work, self.rm);
        }
        if a.is_negative() {
            acc.neg()
        } else {
            acc
        }
    }

    /// lambda(p) = a(p) / p^((k-1)/2) from exact coefficients.
    pub fn lambda_p(&self, f: &Eigenform, p: u64) -> Result<BigFloat> {
        let coeffs = f.exact_coeffs()?;
        if p as usize >= coeffs.len() {
            return Err(Error::Truncation {
                needed: p as usize,
                available: coeffs.len() - 1,
            });
        }
        let a = self.from_bigint(&coeffs[p as usize]);
        let k = f.weight();
        // p^((k-1)/2) = p^((k-2)/2) * sqrt(p), (k-2)/2 integral for even k
        let pf = self.from_u64(p);
        let int_pow = pf.powi((k as usize - 2) / 2, self.bits, self.rm);
        let root = pf.sqrt(self.bits, self.rm);
        let denom = int_pow.mul(&root, self.bits, self.rm);
        Ok(a.div(&denom, self.bits, self.rm))
    }

    /// c_l = 2 cos(l theta) for l = 0..=l_max, via the trace recurrence.
    fn chebyshev_traces(&self, lambda_p: &BigFloat, l_max: u32) -> Vec<BigFloat> {
        let mut c = Vec::with_capacity(l_max as usize + 1);
        c.push(self.from_u64(2));
        if l_max >= 1 {
            c.push(lambda_p.clone());
        }
        for l in 2..=l_max as usize {
            let t = lambda_p.mul(&c[l - 1], self.bits, self.rm);
            c.push(t.sub(&c[l - 2], self.bits, self.rm));
        }
        c
    }

    /// Coefficients of the Sym^idx local polynomial F_idx(x), degree idx+1.
    fn local_polynomial(&self, idx: u32, traces: &[BigFloat]) -> Vec<BigFloat> {
        let one = self.from_u64(1);
        let mut poly = vec![one.clone()];
        if idx % 2 == 0 {
            // the exponent-zero parameter contributes (1 - x)
            poly = self.poly_mul(&poly, &[one.clone(), self.from_u64(1).neg()]);
        }
        let mut l = if idx % 2 == 0 { 2 } else { 1 };
        while l <= idx {
            let quad = [one.clone(), traces[l as usize].neg(), one.clone()];
            poly = self.poly_mul(&poly, &quad);
            l += 2;
        }
        poly
    }

    fn poly_mul(&self, a: &[BigFloat], b: &[BigFloat]) -> Vec<BigFloat> {
        let mut out = vec![self.from_u64(0); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let t = ai.mul(bj, self.bits, self.rm);
                out[i + j] = out[i + j].add(&t, self.bits, self.rm);
            }
        }
        out
    }

    /// Series coefficients of 1 / P(x) through x^depth, for P with P(0) = 1.
    fn invert_series(&self, poly: &[BigFloat], depth: usize) -> Vec<BigFloat> {
        let mut inv = Vec::with_capacity(depth + 1);
        inv.push(self.from_u64(1));
        for m in 1..=depth {
            let mut acc = self.from_u64(0);
            for t in 1..=m.min(poly.len() - 1) {
                let prod = poly[t].mul(&inv[m - t], self.bits, self.rm);
                acc = acc.add(&prod, self.bits, self.rm);
            }
            inv.push(acc.neg());
        }
        inv
    }

    /// lambda_D(p^e) for the product D = prod L(s, Sym^idx)^mult given by
    /// `factors`, at one prime.
    pub fn local_coefficient(
        &self,
        factors: &[(u32, u32)],
        lambda_p: &BigFloat,
        e: usize,
    ) -> BigFloat {
        let l_max = factors.iter().map(|&(idx, _)| idx).max().unwrap_or(0);
        let traces = self.chebyshev_traces(lambda_p, l_max);
        let mut poly = vec![self.from_u64(1)];
        for &(idx, mult) in factors {
            let f = self.local_polynomial(idx, &traces);
            for _ in 0..mult {
                poly = self.poly_mul(&poly, &f);
            }
        }
        self.invert_series(&poly, e).pop().expect("depth >= 0")
    }

    /// lambda_D(m) by multiplicativity, with exact eigenvalue seeds.
    pub fn lambda_d(&self, factors: &[(u32, u32)], f: &Eigenform, m: usize) -> Result<BigFloat> {
        assert!(m >= 1);
        let mut acc = self.from_u64(1);
        let mut rest = m;
        let mut p = 2usize;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                let lam = self.lambda_p(f, p as u64)?;
                let c = self.local_coefficient(factors, &lam, e);
                acc = acc.mul(&c, self.bits, self.rm);
            }
            p += 1;
        }
        if rest > 1 {
            let lam = self.lambda_p(f, rest as u64)?;
            let c = self.local_coefficient(factors, &lam, 1);
            acc = acc.mul(&c, self.bits, self.rm);
        }
        Ok(acc)
    }
}

/// Best-effort f64 view of a BigFloat (for reports; NaN for non-values).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    // value = 0.mantissa * 2^exp, mantissa words little-endian
    let len = words.len();
    let top = words[len - 1] as f64;
    let next = if len >= 2 { words[len - 2] as f64 } else { 0.0 };
    let mant = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
    let val = mant * (exp as f64).exp2();
    if sign == Sign::Neg {
        -val
    } else {
        val
    }
}
