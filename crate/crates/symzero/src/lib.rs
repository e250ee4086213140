//! Symmetric power L-functions of level-1 Hecke eigenforms.
//!
//! The crate computes, at desk scale, everything a Siegel-zero argument for
//! L(s, Sym^n f) consumes:
//!
//! * exact q-expansions and Hecke eigenvalues of level-1 eigenforms
//!   ([`hecke_forms`]);
//! * local Satake parameters, Euler factors, and truncated Dirichlet series
//!   of L(s, Sym^n f) ([`sym_power`]);
//! * the decomposition Sym^n x Sym^(n+r) = prod_i Sym^(2i+r), verified on
//!   exponent multisets, local parameters, and global coefficients
//!   ([`decomposition`]);
//! * the auxiliary products D(s) with nonnegative coefficients, their pole
//!   and degree bookkeeping, and positivity certification ([`auxiliary`]);
//! * gamma factors, analytic conductors, and zero-free interval endpoints
//!   ([`archimedean`]);
//! * smoothed evaluation of L(1, Sym^n f), the Mellin kernel identity, and
//!   the lower-bound margin checks ([`lvalue`]).
//!
//! Everything upstream of a floating-point normalization is exact integer
//! arithmetic; numerical results carry explicit error accounting.

pub mod archimedean;
pub mod arith;
pub mod auxiliary;
pub mod decomposition;
pub mod error;
pub mod hecke_forms;
pub mod highprec;
pub mod lvalue;
pub mod sym_power;

pub use error::{Error, Result};

/// Arithmetic precision for coefficient expansion: hardware doubles, or
/// software floats with the given mantissa width for positivity rechecks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    High(u32),
}

impl std::str::FromStr for Precision {
    type Err = Error;

    /// Accepts `double`, `high` (default 256 bits), or `high:BITS`.
    fn from_str(s: &str) -> Result<Precision> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("double") {
            return Ok(Precision::Double);
        }
        if s.eq_ignore_ascii_case("high") {
            return Ok(Precision::High(256));
        }
        if let Some(bits) = s.strip_prefix("high:") {
            let bits: u32 = bits
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad precision '{s}'")))?;
            if !(64..=8192).contains(&bits) {
                return Err(Error::InvalidArgument(format!(
                    "precision bits must be in 64..=8192, got {bits}"
                )));
            }
            return Ok(Precision::High(bits));
        }
        Err(Error::InvalidArgument(format!(
            "precision must be 'double' or 'high:BITS', got '{s}'"
        )))
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Precision::Double => write!(f, "double"),
            Precision::High(bits) => write!(f, "high:{bits}"),
        }
    }
}
