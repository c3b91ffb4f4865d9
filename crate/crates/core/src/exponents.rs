//! Quadratic exponent sequences, their sigma maps and term signs.
//!
//! Indices are 1-based: `exponent(kind, 1)` is the smallest element.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::exact_sqrt_u128;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentKind {
    /// Generalized pentagonal numbers `n(3n-1)/2`, `n` in Z.
    Pentagonal,
    /// `n(n+1)`, `n >= 0`.
    Trigonal,
    /// `n^2`, `n >= 1`.
    Square,
    /// `n^2 - 1`, `n >= 1`.
    AlmostSquare,
    /// `floor(n^2 / 4)`, `n >= 1`.
    QuarterSquare,
    /// `2 floor(n^2 / 8)`, `n >= 2`.
    A182568,
}

impl ExponentKind {
    pub const ALL: [ExponentKind; 6] = [
        ExponentKind::Pentagonal,
        ExponentKind::Trigonal,
        ExponentKind::Square,
        ExponentKind::AlmostSquare,
        ExponentKind::QuarterSquare,
        ExponentKind::A182568,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExponentKind::Pentagonal => "pentagonal",
            ExponentKind::Trigonal => "trigonal",
            ExponentKind::Square => "square",
            ExponentKind::AlmostSquare => "almost-square",
            ExponentKind::QuarterSquare => "quarter-square",
            ExponentKind::A182568 => "a182568",
        }
    }

    pub fn has_sigma(self) -> bool {
        !matches!(self, ExponentKind::QuarterSquare | ExponentKind::A182568)
    }
}

impl fmt::Display for ExponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExponentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        ExponentKind::ALL
            .into_iter()
            .find(|k| {
                k.name() == norm || (norm == "almostsquare" && *k == ExponentKind::AlmostSquare)
            })
            .ok_or_else(|| Error::Invalid(format!("unknown exponent kind `{s}`")))
    }
}

/// `e_i` of the strictly increasing enumeration.
///
/// # Panics
/// If `i == 0`.
pub fn exponent(kind: ExponentKind, i: u64) -> u64 {
    assert!(i >= 1, "exponent indices start at 1");
    match kind {
        ExponentKind::Pentagonal => {
            if i.is_multiple_of(2) {
                let k = i / 2;
                k * (3 * k - 1) / 2
            } else {
                let k = (i - 1) / 2;
                k * (3 * k + 1) / 2
            }
        }
        ExponentKind::Trigonal => (i - 1) * i,
        ExponentKind::Square => i * i,
        ExponentKind::AlmostSquare => i * i - 1,
        ExponentKind::QuarterSquare => i * i / 4,
        ExponentKind::A182568 => {
            let n = i + 1;
            2 * (n * n / 8)
        }
    }
}

/// First `n` exponents.
pub fn exponents(kind: ExponentKind, n: u64) -> Vec<u64> {
    (1..=n).map(|i| exponent(kind, i)).collect()
}

/// All exponents `<= t`.
pub fn exponents_up_to(kind: ExponentKind, t: u64) -> Vec<u64> {
    exponents(kind, truncation_count(kind, t))
}

pub fn is_member(kind: ExponentKind, c: u64) -> bool {
    let c = c as u128;
    let sq = |v: u128| exact_sqrt_u128(v).is_some();
    match kind {
        ExponentKind::Pentagonal => sq(24 * c + 1),
        ExponentKind::Trigonal => sq(4 * c + 1),
        ExponentKind::Square => c >= 1 && sq(c),
        ExponentKind::AlmostSquare => sq(c + 1),
        ExponentKind::QuarterSquare => sq(c) || sq(4 * c + 1),
        ExponentKind::A182568 => sq(4 * c + 1) || (c.is_multiple_of(2) && (sq(c) || sq(c + 1))),
    }
}

/// Forward sigma map. Squares map to their root.
pub fn sigma(kind: ExponentKind, c: u64) -> Result<u64> {
    let not_member = || Error::NotAMember { kind, c };
    let root = |v: u128| exact_sqrt_u128(v).map(|z| z as u64).ok_or_else(not_member);
    let c128 = c as u128;
    match kind {
        ExponentKind::Pentagonal => root(24 * c128 + 1),
        ExponentKind::Trigonal => root(4 * c128 + 1),
        ExponentKind::AlmostSquare => root(c128 + 1),
        ExponentKind::Square if c >= 1 => root(c128),
        ExponentKind::Square => Err(not_member()),
        ExponentKind::QuarterSquare | ExponentKind::A182568 => Err(Error::UnsupportedKind(kind)),
    }
}

pub fn sigma_inverse(kind: ExponentKind, z: u64) -> Result<u64> {
    let outside = Error::NotInCodomain { kind, z };
    let z2 = (z as u128) * (z as u128);
    let c = match kind {
        ExponentKind::Pentagonal if !z.is_multiple_of(2) && !z.is_multiple_of(3) => (z2 - 1) / 24,
        ExponentKind::Trigonal if z % 2 == 1 => (z2 - 1) / 4,
        ExponentKind::AlmostSquare if z >= 1 => z2 - 1,
        ExponentKind::Square if z >= 1 => z2,
        ExponentKind::QuarterSquare | ExponentKind::A182568 => {
            return Err(Error::UnsupportedKind(kind))
        }
        _ => return Err(outside),
    };
    u64::try_from(c).map_err(|_| outside)
}

/// Sign of the term `q^c` in the pentagonal expansion of the Euler function.
pub fn term_sign(c: u64) -> Result<i8> {
    let z = sigma(ExponentKind::Pentagonal, c)?;
    let n = if z % 6 == 5 { (z + 1) / 6 } else { (z - 1) / 6 };
    Ok(if n % 2 == 0 { 1 } else { -1 })
}

/// Number of exponents `<= t`.
pub fn truncation_count(kind: ExponentKind, t: u64) -> u64 {
    // Every kind grows at least like i^2 / 4, so 2 sqrt(t) + 4 is an upper bound.
    let (mut lo, mut hi) = (0u64, 2 * crate::arith::isqrt(t) + 4);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if exponent(kind, mid) <= t {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// 1-based index of member `c`, if it is one.
pub fn index_of(kind: ExponentKind, c: u64) -> Option<u64> {
    if !is_member(kind, c) {
        return None;
    }
    let i = truncation_count(kind, c);
    debug_assert_eq!(exponent(kind, i), c);
    Some(i)
}
