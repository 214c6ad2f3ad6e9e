//! Exact computations with almost finite-dimensional representations of
//! algebras: Følner subspaces, ε-almost representations built from them,
//! rank-based obstructions, and paradoxical decompositions of graphs.
//!
//! All arithmetic is exact, over GF(p) (default `p = 32003`) or the
//! rationals. Ratios such as Følner ratios and defects are [`Ratio`]s.

pub mod almostrep;
pub mod carrier;
pub mod error;
pub mod exactlin;
pub mod folner;
pub mod graphlab;
pub mod pathology;
pub mod rankradical;

pub use error::{Error, Result};

/// Exact ratio of dimensions.
pub type Ratio = num_rational::Rational64;

/// Always `"num/den"`, including `"0/1"` and `"3/1"`.
pub fn ratio_string(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or an integer.
pub fn parse_ratio(s: &str) -> Result<Ratio> {
    let bad = || Error::Parse(format!("bad ratio {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1i64),
    };
    if d == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(Ratio::new(n, d))
}
