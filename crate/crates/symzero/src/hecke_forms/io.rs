//! Plain-text eigenvalue exchange.
//!
//! Format: a header line `# weight=K normalized=true|false` followed by one
//! line per index, `m<TAB>value`.  Normalized files carry lambda(m) to 15
//! significant digits; exact files carry the integer coefficients a(m).

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::One;

use super::Eigenform;
use crate::error::{Error, Result};

/// Writes normalized eigenvalues `m<TAB>lambda(m)`.
pub fn write_lambda<W: Write>(f: &Eigenform, out: &mut W) -> Result<()> {
    writeln!(out, "# weight={} normalized=true", f.weight())?;
    for m in 1..=f.precision() {
        writeln!(out, "{m}\t{:.14e}", f.lambda(m))?;
    }
    Ok(())
}

/// Writes exact integer coefficients `m<TAB>a(m)`; errors when the eigenform
/// was constructed numerically.
pub fn write_exact<W: Write>(f: &Eigenform, out: &mut W) -> Result<()> {
    let coeffs = f.exact_coeffs()?;
    writeln!(out, "# weight={} normalized=false", f.weight())?;
    for (m, a) in coeffs.iter().enumerate().skip(1) {
        writeln!(out, "{m}\t{a}")?;
    }
    Ok(())
}

/// Reads either format back into an Eigenform.  Indices must be contiguous
/// from 1; a normalized file must satisfy lambda(1) = 1.  Comment lines other
/// than the `# weight=...` header are ignored, so files may carry extra
/// annotations.
pub fn read_eigenform<R: BufRead>(input: R) -> Result<Eigenform> {
    let mut header: Option<(u32, bool)> = None;
    let mut lambda: Vec<f64> = vec![0.0];
    let mut exact: Vec<BigInt> = vec![BigInt::from(0)];
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() && line.contains("weight=") {
                header = Some(parse_header(&line)?);
            }
            continue;
        }
        let bad = |reason: &str| Error::EigenFile {
            line: lineno,
            reason: reason.into(),
        };
        let (_, normalized) = header.ok_or_else(|| Error::EigenFile {
            line: lineno,
            reason: "data before '# weight=...' header".into(),
        })?;
        let (m_str, val_str) = line
            .split_once('\t')
            .ok_or_else(|| bad("expected m<TAB>value"))?;
        let m: usize = m_str.trim().parse().map_err(|_| bad("bad index"))?;
        let expect = if normalized { lambda.len() } else { exact.len() };
        if m != expect {
            return Err(bad(&format!("index {m}, expected {expect}")));
        }
        if normalized {
            let v: f64 = val_str.trim().parse().map_err(|_| bad("bad float"))?;
            lambda.push(v);
        } else {
            let v: BigInt = val_str.trim().parse().map_err(|_| bad("bad integer"))?;
            exact.push(v);
        }
    }

    let (weight, normalized) = header.ok_or(Error::EigenFile {
        line: 1,
        reason: "missing '# weight=...' header".into(),
    })?;
    if normalized {
        if lambda.len() < 2 || (lambda[1] - 1.0).abs() > 1e-12 {
            return Err(Error::EigenFile {
                line: 2,
                reason: "normalized eigenform must have lambda(1) = 1".into(),
            });
        }
        Ok(Eigenform::from_lambda(weight, lambda))
    } else {
        if exact.len() < 2 || !exact[1].is_one() {
            return Err(Error::EigenFile {
                line: 2,
                reason: "normalized eigenform must have a(1) = 1".into(),
            });
        }
        Ok(Eigenform::from_exact_coeffs(weight, exact))
    }
}

fn parse_header(header: &str) -> Result<(u32, bool)> {
    let bad = |reason: &str| Error::EigenFile {
        line: 1,
        reason: reason.into(),
    };
    let rest = header
        .strip_prefix('#')
        .ok_or_else(|| bad("missing '#' header"))?;
    let mut weight = None;
    let mut normalized = None;
    for token in rest.split_whitespace() {
        if let Some(v) = token.strip_prefix("weight=") {
            weight = Some(v.parse::<u32>().map_err(|_| bad("bad weight"))?);
        } else if let Some(v) = token.strip_prefix("normalized=") {
            normalized = Some(v.parse::<bool>().map_err(|_| bad("bad normalized flag"))?);
        }
    }
    match (weight, normalized) {
        (Some(w), Some(n)) => Ok((w, n)),
        _ => Err(bad("header needs weight= and normalized=")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_forms::hecke_eigenform;

    #[test]
    fn lambda_roundtrip() {
        let f = hecke_eigenform(12, 25).unwrap();
        let mut buf = Vec::new();
        write_lambda(&f, &mut buf).unwrap();
        let g = read_eigenform(&buf[..]).unwrap();
        assert_eq!(g.weight(), 12);
        assert_eq!(g.precision(), 25);
        assert!(!g.has_exact_coeffs());
        for m in 1..=25 {
            assert!((f.lambda(m) - g.lambda(m)).abs() < 1e-13 * f.lambda(m).abs().max(1.0));
        }
    }

    #[test]
    fn exact_roundtrip() {
        let f = hecke_eigenform(16, 40).unwrap();
        let mut buf = Vec::new();
        write_exact(&f, &mut buf).unwrap();
        let g = read_eigenform(&buf[..]).unwrap();
        assert!(g.has_exact_coeffs());
        for m in 1..=40 {
            assert_eq!(f.exact_coeff(m), g.exact_coeff(m));
            assert_eq!(f.lambda(m), g.lambda(m));
        }
    }

    #[test]
    fn tolerates_annotations() {
        let text = b"# produced by a tool\n# weight=12 normalized=false\n# note\n1\t1\n2\t-24\n";
        let f = read_eigenform(&text[..]).unwrap();
        assert_eq!(f.weight(), 12);
        assert_eq!(f.exact_coeff(2).unwrap(), &BigInt::from(-24));
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_eigenform(&b"no header\n1\t1.0\n"[..]).is_err());
        assert!(read_eigenform(&b"# weight=12 normalized=true\n2\t0.5\n"[..]).is_err());
        assert!(
            read_eigenform(&b"# weight=12 normalized=true\n1\t0.7\n"[..]).is_err(),
            "lambda(1) != 1 must be rejected"
        );
        let ok = read_eigenform(&b"# weight=12 normalized=false\n1\t1\n2\t-24\n"[..]).unwrap();
        assert_eq!(ok.exact_coeff(2).unwrap(), &BigInt::from(-24));
    }
}
