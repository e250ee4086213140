//! Exact integer q-expansions of level-1 modular forms.
//!
//! Series are truncated power series sum_{m=0}^{X} a(m) q^m with BigInt
//! coefficients.  Products are computed by Kronecker substitution: pack the
//! coefficients of each factor into one huge integer at a fixed slot width,
//! multiply once with the bignum kernel, and read the product coefficients
//! back out of the slots.  That turns an O(X^2) schoolbook convolution of
//! multi-word coefficients into a single balanced multiplication, which is
//! what makes q-expansions to 10^5 terms cheap.
//!
//! The generators are E_4, E_6 with their classical divisor-sum expansions
//! and Delta = q prod (1-q^m)^24, computed from Jacobi's identity
//! (q;q)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2} by three squarings.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::arith::sigma_table;
use crate::error::{Error, Result};

/// Truncated integer q-expansion of a modular form of known weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    /// Wraps coefficients `a(0), ..., a(X)` of a weight-`weight` form.
    pub fn new(weight: u32, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "need at least the constant term");
        QExpansion { weight, coeffs }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Truncation order: coefficients a(0..=precision) are stored.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &BigInt {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Drops coefficients beyond q^x.
    pub fn truncated(mut self, x: usize) -> Self {
        assert!(x <= self.precision(), "cannot extend a truncated series");
        self.coeffs.truncate(x + 1);
        self
    }

    /// Product, truncated to the shorter precision.  Weights add.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let out_len = self.coeffs.len().min(other.coeffs.len());
        QExpansion {
            weight: self.weight + other.weight,
            coeffs: kronecker_mul(&self.coeffs, &other.coeffs, out_len),
        }
    }

    /// e-th power by repeated squaring; e = 0 gives the constant series 1
    /// of weight 0 at the same precision.
    pub fn pow(&self, e: u32) -> QExpansion {
        let mut acc = QExpansion {
            weight: 0,
            coeffs: {
                let mut c = vec![BigInt::zero(); self.coeffs.len()];
                c[0] = BigInt::one();
                c
            },
        };
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// In-place `self -= c * other`; both series must share weight and length.
    pub fn sub_scaled(&mut self, c: &BigInt, other: &QExpansion) {
        assert_eq!(self.weight, other.weight);
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= c * b;
        }
    }
}

/// Coefficient convolution of `a` and `b`, truncated to `out_len` terms,
/// via Kronecker substitution.
pub(crate) fn kronecker_mul(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    assert!(out_len <= a.len() + b.len());
    let bits_a = max_bits(a);
    let bits_b = max_bits(b);
    if bits_a == 0 || bits_b == 0 || out_len == 0 {
        return vec![BigInt::zero(); out_len];
    }
    // A convolution coefficient is a sum of at most min(|a|,|b|) products, so
    // its magnitude is < 2^(bits_a + bits_b + log2(min_len)).  One more bit
    // leaves room for the sign offset; round the slot up to whole 32-bit words.
    let min_len = a.len().min(b.len()) as u64;
    let slot_bits = {
        let needed = bits_a + bits_b + 64 - min_len.leading_zeros() as u64 + 2;
        needed.div_ceil(32) * 32
    };
    let words_per_slot = (slot_bits / 32) as usize;

    let pa = pack(a, words_per_slot);
    let pb = pack(b, words_per_slot);
    let prod = pa * pb;

    // Shift every slot by 2^(slot_bits - 1) so slot digits become nonnegative
    // and can be read straight out of the magnitude.
    let n_slots = a.len() + b.len() - 1;
    let mut offset_words = vec![0u32; n_slots * words_per_slot];
    for s in 0..n_slots {
        offset_words[s * words_per_slot + words_per_slot - 1] = 0x8000_0000;
    }
    let shifted = prod + BigInt::from_slice(Sign::Plus, &offset_words);
    debug_assert!(shifted.sign() != Sign::Minus, "slot width too small");

    let digits = shifted.magnitude().to_u32_digits();
    let half = BigInt::one() << (slot_bits - 1);
    let mut out = Vec::with_capacity(out_len);
    for s in 0..out_len.min(n_slots) {
        let lo = s * words_per_slot;
        let hi = (lo + words_per_slot).min(digits.len());
        let slot = if lo < digits.len() {
            BigUint::from_slice(&digits[lo..hi])
        } else {
            BigUint::zero()
        };
        out.push(BigInt::from(slot) - &half);
    }
    out.resize(out_len, BigInt::zero());
    out
}

fn max_bits(xs: &[BigInt]) -> u64 {
    xs.iter().map(|x| x.magnitude().bits()).max().unwrap_or(0)
}

/// Packs signed coefficients into one integer, one slot per coefficient.
/// Positive and negative parts are assembled as separate digit vectors so the
/// pack is a single subtraction rather than len(xs) shifted additions.
fn pack(xs: &[BigInt], words_per_slot: usize) -> BigInt {
    let mut pos = vec![0u32; xs.len() * words_per_slot];
    let mut neg = vec![0u32; xs.len() * words_per_slot];
    for (s, x) in xs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let target = if x.is_negative() { &mut neg } else { &mut pos };
        let digits = x.magnitude().to_u32_digits();
        debug_assert!(digits.len() <= words_per_slot);
        target[s * words_per_slot..s * words_per_slot + digits.len()].copy_from_slice(&digits);
    }
    BigInt::from_slice(Sign::Plus, &pos) - BigInt::from_slice(Sign::Plus, &neg)
}

/// Normalized Eisenstein series E_4 or E_6 to precision `x`:
/// E_4 = 1 + 240 sum sigma_3(m) q^m,  E_6 = 1 - 504 sum sigma_5(m) q^m.
pub fn eisenstein(weight: u32, x: usize) -> Result<QExpansion> {
    let (mult, r): (i64, u32) = match weight {
        4 => (240, 3),
        6 => (-504, 5),
        w => return Err(Error::EisensteinWeight(w)),
    };
    let sigma = sigma_table(r, x);
    let mut coeffs = Vec::with_capacity(x + 1);
    coeffs.push(BigInt::one());
    for m in 1..=x {
        coeffs.push(BigInt::from(mult) * BigInt::from(sigma[m]));
    }
    Ok(QExpansion::new(weight, coeffs))
}

/// The discriminant form Delta = q prod_{m>=1} (1-q^m)^24 to precision `x >= 1`.
pub fn delta(x: usize) -> Result<QExpansion> {
    if x < 1 {
        return Err(Error::Precision { min: 1, got: x });
    }
    // (q;q)_inf^3 truncated at q^(x-1); the final multiplication by q shifts
    // everything up one slot.
    let inner = x - 1;
    let mut eta3 = vec![BigInt::zero(); inner + 1];
    let mut j = 0usize;
    loop {
        let t = j * (j + 1) / 2;
        if t > inner {
            break;
        }
        let term = BigInt::from(2 * j as i64 + 1);
        eta3[t] = if j % 2 == 0 { term } else { -term };
        j += 1;
    }
    let eta6 = kronecker_mul(&eta3, &eta3, inner + 1);
    let eta12 = kronecker_mul(&eta6, &eta6, inner + 1);
    let eta24 = kronecker_mul(&eta12, &eta12, inner + 1);
    let mut coeffs = Vec::with_capacity(x + 1);
    coeffs.push(BigInt::zero());
    coeffs.extend(eta24);
    Ok(QExpansion::new(12, coeffs))
}

/// dim S_k(SL_2(Z)) for even k; zero for odd or small k.
pub fn dim_cusp_space(weight: u32) -> usize {
    if weight % 2 != 0 || weight < 12 {
        return 0;
    }
    let dim_mk = if weight % 12 == 2 {
        weight / 12
    } else {
        weight / 12 + 1
    };
    dim_mk as usize - 1
}

/// Echelonized integral basis of S_k: the i-th element is q^(i+1) + O(q^(d+1))
/// with integer coefficients, obtained from the monomials E_4^a E_6^b Delta^i
/// by integer elimination (the leading coefficients are 1, so no division
/// ever occurs).
pub fn miller_basis(weight: u32, x: usize) -> Result<Vec<QExpansion>> {
    if weight % 2 != 0 {
        return Err(Error::InvalidWeight(weight));
    }
    let d = dim_cusp_space(weight);
    if d == 0 {
        return Ok(Vec::new());
    }
    let work = x.max(d + 1);
    let e4 = eisenstein(4, work)?;
    let e6 = eisenstein(6, work)?;
    let dl = delta(work)?;

    let mut basis = Vec::with_capacity(d);
    for i in 1..=d as u32 {
        // Solve 4a + 6b = weight - 12i with b in {0, 1}.
        let w = weight - 12 * i;
        let b = if w % 4 == 2 { 1 } else { 0 };
        let a = (w - 6 * b) / 4;
        let g = e4.pow(a).mul(&e6.pow(b)).mul(&dl.pow(i));
        debug_assert_eq!(g.weight(), weight);
        debug_assert!(g.coeff(i as usize).is_one());
        basis.push(g);
    }
    // basis[i] = q^(i+1) + higher; clear the higher pivots in ascending order.
    for i in 0..d {
        for j in i + 1..d {
            let c = basis[i].coeff(j + 1).clone();
            if !c.is_zero() {
                let (head, tail) = basis.split_at_mut(j);
                head[i].sub_scaled(&c, &tail[0]);
            }
        }
    }
    Ok(basis.into_iter().map(|g| g.truncated(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_mul(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); out_len];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if i + j < out_len {
                    out[i + j] += ai * bj;
                }
            }
        }
        out
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a = ints(&[3, -7, 0, 12, -1]);
        let b = ints(&[-2, 5, 11, 0, 0, -9]);
        assert_eq!(kronecker_mul(&a, &b, 10), naive_mul(&a, &b, 10));
        // mixed magnitudes, forcing multi-word slots
        let big: BigInt = BigInt::from(3).pow(200);
        let c = vec![big.clone(), -&big, BigInt::one(), big.clone()];
        let d = vec![-&big, BigInt::from(17), big.pow(2)];
        assert_eq!(kronecker_mul(&c, &d, 6), naive_mul(&c, &d, 6));
    }

    #[test]
    fn kronecker_truncation_and_zero() {
        let a = ints(&[1, 1, 1]);
        let z = vec![BigInt::zero(); 3];
        assert_eq!(kronecker_mul(&a, &z, 5), vec![BigInt::zero(); 5]);
        assert_eq!(kronecker_mul(&a, &a, 2), ints(&[1, 2]));
    }

    #[test]
    fn eisenstein_leading_terms() {
        let e4 = eisenstein(4, 5).unwrap();
        assert_eq!(e4.coeffs(), &ints(&[1, 240, 2160, 6720, 17520, 30240]));
        let e6 = eisenstein(6, 4).unwrap();
        assert_eq!(e6.coeffs(), &ints(&[1, -504, -16632, -122976, -532728]));
        assert!(matches!(
            eisenstein(8, 4),
            Err(Error::EisensteinWeight(8))
        ));
    }

    #[test]
    fn delta_matches_product_expansion() {
        // Oracle: expand q prod_{m<=20} (1-q^m)^24 schoolbook.
        let x = 20usize;
        let mut prod = vec![BigInt::zero(); x + 1];
        prod[0] = BigInt::one();
        for m in 1..=x {
            // multiply by (1 - q^m)^24 one binomial factor at a time
            for _ in 0..24 {
                let mut next = prod.clone();
                for i in 0..=x {
                    if i >= m {
                        let t = prod[i - m].clone();
                        next[i] -= t;
                    }
                }
                prod = next;
            }
        }
        let mut expected = vec![BigInt::zero(); x + 1];
        for i in 0..x {
            expected[i + 1] = prod[i].clone();
        }
        let d = delta(x).unwrap();
        assert_eq!(d.coeffs(), &expected[..]);
        // spot values: tau(1..6) = 1, -24, 252, -1472, 4830, -6048
        assert_eq!(d.coeff(1), &BigInt::from(1));
        assert_eq!(d.coeff(2), &BigInt::from(-24));
        assert_eq!(d.coeff(3), &BigInt::from(252));
        assert_eq!(d.coeff(4), &BigInt::from(-1472));
        assert_eq!(d.coeff(5), &BigInt::from(4830));
        assert_eq!(d.coeff(6), &BigInt::from(-6048));
    }

    #[test]
    fn delta_equals_eisenstein_combination() {
        // 1728 Delta = E_4^3 - E_6^2
        let x = 60;
        let e4 = eisenstein(4, x).unwrap();
        let e6 = eisenstein(6, x).unwrap();
        let lhs = delta(x).unwrap();
        let rhs = {
            let mut c = e4.pow(3).into_coeffs();
            let c6 = e6.pow(2).into_coeffs();
            for (a, b) in c.iter_mut().zip(c6) {
                *a -= b;
            }
            c
        };
        for m in 0..=x {
            assert_eq!(lhs.coeff(m) * 1728, rhs[m], "m = {m}");
        }
    }

    #[test]
    fn cusp_dims() {
        let expect = [
            (4, 0),
            (12, 1),
            (14, 0),
            (16, 1),
            (18, 1),
            (20, 1),
            (22, 1),
            (24, 2),
            (26, 1),
            (28, 2),
            (36, 3),
            (38, 2),
        ];
        for (k, d) in expect {
            assert_eq!(dim_cusp_space(k), d, "k = {k}");
        }
        assert_eq!(dim_cusp_space(13), 0);
    }

    #[test]
    fn miller_basis_is_echelon() {
        for k in [12u32, 24, 28, 36, 48] {
            let d = dim_cusp_space(k);
            let basis = miller_basis(k, 2 * d + 6).unwrap();
            assert_eq!(basis.len(), d);
            for (i, g) in basis.iter().enumerate() {
                assert_eq!(g.weight(), k);
                for m in 0..=d {
                    let want = if m == i + 1 { 1 } else { 0 };
                    assert_eq!(g.coeff(m), &BigInt::from(want), "k={k} i={i} m={m}");
                }
            }
        }
    }

    #[test]
    fn miller_basis_weight_12_is_delta() {
        let basis = miller_basis(12, 30).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], delta(30).unwrap());
    }
}
