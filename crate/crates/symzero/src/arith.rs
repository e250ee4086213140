//! Elementary sieves and multiplicative bookkeeping.
//!
//! Everything downstream that assembles Dirichlet coefficients multiplicatively
//! leans on the smallest-prime-factor table built here: factorization of every
//! m <= X in O(log m) after an O(X log log X) sieve.

/// Primes `<= limit` in increasing order.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= limit {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Smallest-prime-factor table for `0..=limit`; entries 0 and 1 are 0.
pub fn smallest_prime_factor(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for p in 2..=limit {
        if spf[p] == 0 {
            let mut m = p;
            while m <= limit {
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
    }
    spf
}

/// Factorization of `m >= 1` as (prime, exponent) pairs, ascending in the prime.
/// Requires `m < spf.len()`.
pub fn factorize(mut m: usize, spf: &[u32]) -> Vec<(u64, u32)> {
    assert!(m >= 1 && m < spf.len(), "factorize: m out of table range");
    let mut out = Vec::new();
    while m > 1 {
        let p = spf[m] as usize;
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

/// k-dimensional divisor function d_k(m): the number of ordered factorizations
/// of m into k positive parts.  Multiplicative with d_k(p^e) = C(e+k-1, k-1).
pub fn divisor_count_k(k: u32, m: usize, spf: &[u32]) -> f64 {
    let mut out = 1.0;
    for (_, e) in factorize(m, spf) {
        out *= binomial_f64(e + k - 1, k - 1);
    }
    out
}

fn binomial_f64(n: u32, r: u32) -> f64 {
    let r = r.min(n - r);
    let mut out = 1.0;
    for i in 0..r {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out.round()
}

/// Table of sigma_r(m) = sum_{d | m} d^r for m <= limit, computed by sieving
/// over divisors.  Entry 0 is 0.  Widths stay inside u128 for the
/// Eisenstein ranges used here (r <= 5, limit <= ~10^6).
pub fn sigma_table(r: u32, limit: usize) -> Vec<u128> {
    let mut table = vec![0u128; limit + 1];
    for d in 1..=limit {
        let dr = (d as u128).pow(r);
        let mut m = d;
        while m <= limit {
            table[m] += dr;
            m += d;
        }
    }
    table
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
