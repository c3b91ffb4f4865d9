//! Exhaustive checks of the decomposition criteria, the Pell families and
//! the powers-of-three equation.
//!
//! Every search here is a brute-force pair or triple scan over an
//! independently enumerated member list; nothing is shared with the
//! sequence builders.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt_u128, is_prime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Pentagonal,
    Trigonal,
    AlmostSquare,
    QuarterSquare,
    A182568,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    /// `c = a + b`.
    Add,
    /// `c = 2a + b`.
    DoubleAdd,
    /// `c` is a sum of at most three smaller members.
    TripleSum,
}

/// A checkable statement, addressed by a stable kebab-case id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statement {
    Decomposition(Family, Form),
    PowersOfThree,
    PellDouble,
    PellTriple,
}

impl Statement {
    pub const ALL: [Statement; 13] = [
        Statement::Decomposition(Family::Pentagonal, Form::DoubleAdd),
        Statement::Decomposition(Family::Pentagonal, Form::Add),
        Statement::Decomposition(Family::Trigonal, Form::Add),
        Statement::Decomposition(Family::Trigonal, Form::DoubleAdd),
        Statement::Decomposition(Family::Trigonal, Form::TripleSum),
        Statement::Decomposition(Family::AlmostSquare, Form::Add),
        Statement::Decomposition(Family::AlmostSquare, Form::DoubleAdd),
        Statement::Decomposition(Family::AlmostSquare, Form::TripleSum),
        Statement::Decomposition(Family::QuarterSquare, Form::DoubleAdd),
        Statement::Decomposition(Family::A182568, Form::Add),
        Statement::PowersOfThree,
        Statement::PellDouble,
        Statement::PellTriple,
    ];

    pub fn id(&self) -> String {
        match self {
            Statement::Decomposition(f, form) => {
                let f = match f {
                    Family::Pentagonal => "pentagonal",
                    Family::Trigonal => "trigonal",
                    Family::AlmostSquare => "almost-square",
                    Family::QuarterSquare => "quarter-square",
                    Family::A182568 => "a182568",
                };
                let form = match form {
                    Form::Add => "add",
                    Form::DoubleAdd => "double-add",
                    Form::TripleSum => "triple-sum",
                };
                format!("{f}-{form}")
            }
            Statement::PowersOfThree => "powers-of-three".into(),
            Statement::PellDouble => "pell-double".into(),
            Statement::PellTriple => "pell-triple".into(),
        }
    }

    /// Runs the statement up to `limit` (a bound on `c`, or on `n` for
    /// powers of three).
    pub fn run(&self, limit: u64) -> Result<VerificationReport> {
        match *self {
            Statement::Decomposition(family, form) => verify_decomposition(family, form, limit),
            Statement::PowersOfThree => Ok(powers_of_three_check(limit as u32)),
            Statement::PellDouble => Ok(pell_scan_report(PellKind::PentagonalDouble, limit)),
            Statement::PellTriple => Ok(pell_scan_report(PellKind::PentagonalTriple, limit)),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.id() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown statement `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statement: String,
    pub range: (u64, u64),
    pub checked: u64,
    /// Members for which the form does not exist; informative for
    /// equivalence statements.
    pub exceptional: u64,
    pub counterexamples: Vec<u64>,
    pub witnesses: Vec<String>,
    pub elapsed_secs: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Members `<= limit`, enumerated from the defining polynomials.
fn members(family: Family, limit: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut n: u64 = 0;
    loop {
        let vals: [Option<u64>; 2] = match family {
            Family::Pentagonal => [
                Some(n * (3 * n + 1) / 2),
                (n > 0).then(|| n * (3 * n - 1) / 2),
            ],
            Family::Trigonal => [Some(n * (n + 1)), None],
            Family::AlmostSquare => [(n > 0).then(|| n * n - 1), None],
            Family::QuarterSquare => [Some((n + 1) * (n + 1) / 4), None],
            Family::A182568 => [(n >= 2).then(|| 2 * (n * n / 8)), None],
        };
        let smallest = vals.iter().flatten().min().copied();
        if smallest.is_some_and(|s| s > limit) {
            break;
        }
        v.extend(vals.iter().flatten().filter(|&&x| x <= limit));
        n += 1;
    }
    v.sort_unstable();
    v.dedup();
    v
}

fn find_add(sorted: &[u64], set: &HashSet<u64>, c: u64) -> Option<(u64, u64)> {
    sorted
        .iter()
        .take_while(|&&a| 2 * a <= c)
        .find(|&&a| a > 0 && set.contains(&(c - a)))
        .map(|&a| (c - a, a))
}

fn find_double_add(sorted: &[u64], set: &HashSet<u64>, c: u64) -> Option<(u64, u64)> {
    sorted
        .iter()
        .take_while(|&&a| 2 * a <= c)
        .find(|&&a| a > 0 && c - 2 * a < c && set.contains(&(c - 2 * a)))
        .map(|&a| (a, c - 2 * a))
}

/// At most three smaller members, zeros allowed as padding.
fn find_triple(sorted: &[u64], set: &HashSet<u64>, c: u64) -> Option<(u64, u64, u64)> {
    for (i, &a) in sorted.iter().enumerate() {
        if 3 * a > c {
            break;
        }
        for &b in &sorted[i..] {
            if a + 2 * b > c {
                break;
            }
            let d = c - a - b;
            if d < c && b < c && set.contains(&d) {
                return Some((d, b, a));
            }
        }
    }
    None
}

fn is_p_or_2p(k: u64) -> bool {
    is_prime(k) || (k.is_multiple_of(2) && is_prime(k / 2))
}

/// The arithmetic criterion predicting existence, or `None` for
/// unconditional existence statements.
pub fn criterion(family: Family, form: Form, c: u64) -> Option<bool> {
    match (family, form) {
        (Family::Pentagonal, Form::Add) => Some(!is_prime(12 * c + 1)),
        (Family::Trigonal, Form::Add) => Some(!is_prime(2 * c + 1)),
        (Family::Trigonal, Form::DoubleAdd) => Some(!is_prime(4 * c + 3)),
        (Family::AlmostSquare, Form::Add) => Some(!is_p_or_2p(c + 2)),
        (Family::AlmostSquare, Form::DoubleAdd) => {
            let k = c + 3;
            let twice_prime_square = k.is_multiple_of(2)
                && exact_sqrt_u128((k / 2) as u128).is_some_and(|r| is_prime(r as u64));
            Some(!(is_p_or_2p(k) || twice_prime_square))
        }
        _ => None,
    }
}

/// Smallest member covered by the statement.
pub fn threshold(family: Family, form: Form) -> u64 {
    match (family, form) {
        (Family::Pentagonal, Form::DoubleAdd) => 5,
        (Family::Pentagonal, _) => 2,
        (Family::Trigonal, _) => 6,
        (Family::AlmostSquare, Form::TripleSum) => 24,
        (Family::AlmostSquare, _) => 3,
        (Family::QuarterSquare, _) => 2,
        (Family::A182568, _) => 4,
    }
}

/// Brute-force check of an existence or equivalence statement for all
/// members `threshold <= c <= c_max`.
pub fn verify_decomposition(family: Family, form: Form, c_max: u64) -> Result<VerificationReport> {
    let supported = match family {
        Family::Pentagonal => form != Form::TripleSum,
        Family::Trigonal | Family::AlmostSquare => true,
        Family::QuarterSquare => form == Form::DoubleAdd,
        Family::A182568 => form == Form::Add,
    };
    if !supported {
        return Err(Error::Invalid("no such statement".into()));
    }
    let start = Instant::now();
    let lo = threshold(family, form);
    let sorted = members(family, c_max);
    let set: HashSet<u64> = sorted.iter().copied().collect();
    let mut report = VerificationReport {
        statement: Statement::Decomposition(family, form).id(),
        range: (lo, c_max),
        checked: 0,
        exceptional: 0,
        counterexamples: Vec::new(),
        witnesses: Vec::new(),
        elapsed_secs: 0.0,
    };
    for &c in sorted.iter().filter(|&&c| c >= lo) {
        report.checked += 1;
        let found = match form {
            Form::Add => find_add(&sorted, &set, c).map(|(a, b)| format!("{c} = {a}+{b}")),
            Form::DoubleAdd => {
                find_double_add(&sorted, &set, c).map(|(a, b)| format!("{c} = 2·{a}+{b}"))
            }
            Form::TripleSum => {
                find_triple(&sorted, &set, c).map(|(a, b, d)| format!("{c} = {a}+{b}+{d}"))
            }
        };
        let ok = match criterion(family, form, c) {
            Some(expected) => expected == found.is_some(),
            None => found.is_some(),
        };
        if !ok {
            report.counterexamples.push(c);
        }
        match found {
            Some(w) if report.witnesses.len() < 8 => report.witnesses.push(w),
            Some(_) => {}
            None => report.exceptional += 1,
        }
    }
    report.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PellKind {
    /// `c = 2a`, from `z^2 + 1 = 2x^2`.
    PentagonalDouble,
    /// `c = 3a`, from `z^2 + 2 = 3x^2`.
    PentagonalTriple,
}

/// Pentagonal pairs `(c, a)` from the first `count` recurrence steps,
/// dropping steps whose `a` is not a member.
pub fn pell_family(kind: PellKind, count: usize) -> Vec<(Integer, Integer)> {
    let (mut z, mut x) = (Integer::from(1), Integer::from(1));
    let mut out = Vec::new();
    for _ in 0..count {
        let (nz, nx) = match kind {
            PellKind::PentagonalDouble => (
                Integer::from(&z * 3) + Integer::from(&x * 4),
                Integer::from(&z * 2) + Integer::from(&x * 3),
            ),
            PellKind::PentagonalTriple => (
                Integer::from(&z * 2) + Integer::from(&x * 3),
                Integer::from(&x * 2) + &z,
            ),
        };
        z = nz;
        x = nx;
        if x.is_divisible_u(3) || z.is_divisible_u(3) || x.is_even() || z.is_even() {
            continue;
        }
        let c = (Integer::from(z.square_ref()) - 1u32) / 24u32;
        let a = (Integer::from(x.square_ref()) - 1u32) / 24u32;
        out.push((c, a));
    }
    out
}

/// Exhaustive scan for pentagonal `c <= c_max` with `c/2` (or `c/3`) pentagonal.
pub fn pell_scan(kind: PellKind, c_max: u64) -> Vec<(u64, u64)> {
    let factor = match kind {
        PellKind::PentagonalDouble => 2,
        PellKind::PentagonalTriple => 3,
    };
    let sorted = members(Family::Pentagonal, c_max);
    let set: HashSet<u64> = sorted.iter().copied().collect();
    sorted
        .into_iter()
        .filter(|&c| c > 0 && c % factor == 0 && set.contains(&(c / factor)))
        .map(|c| (c, c / factor))
        .collect()
}

/// Recurrence output restricted to `c <= c_max`.
pub fn pell_family_up_to(kind: PellKind, c_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (c, a) in pell_family(kind, 64) {
        match c.to_u64() {
            Some(c) if c <= c_max => out.push((c, a.to_u64().expect("a < c"))),
            _ => break,
        }
    }
    out
}

fn pell_scan_report(kind: PellKind, c_max: u64) -> VerificationReport {
    let start = Instant::now();
    let scan = pell_scan(kind, c_max);
    let rec = pell_family_up_to(kind, c_max);
    let counterexamples = scan
        .iter()
        .filter(|p| !rec.contains(p))
        .chain(rec.iter().filter(|p| !scan.contains(p)))
        .map(|&(c, _)| c)
        .collect();
    VerificationReport {
        statement: match kind {
            PellKind::PentagonalDouble => Statement::PellDouble.id(),
            PellKind::PentagonalTriple => Statement::PellTriple.id(),
        },
        range: (0, c_max),
        checked: scan.len() as u64,
        exceptional: 0,
        counterexamples,
        witnesses: rec.iter().map(|(c, a)| format!("({c}, {a})")).collect(),
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// `3^n - 2 = x^2` for `0 <= n <= n_max`; the expected solutions are
/// `(1, 1)` and `(3, 5)`, anything else is reported as a counterexample.
pub fn powers_of_three_check(n_max: u32) -> VerificationReport {
    let start = Instant::now();
    let solutions = powers_of_three_solutions(n_max);
    let counterexamples = solutions
        .iter()
        .filter(|&&(n, _)| n != 1 && n != 3)
        .map(|&(n, _)| n as u64)
        .collect();
    VerificationReport {
        statement: Statement::PowersOfThree.id(),
        range: (0, n_max as u64),
        checked: n_max as u64 + 1,
        exceptional: 0,
        counterexamples,
        witnesses: solutions
            .iter()
            .map(|(n, x)| format!("3^{n} - 2 = {x}^2"))
            .collect(),
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// All `(n, x)` with `3^n - 2 = x^2`, `n <= n_max`.
pub fn powers_of_three_solutions(n_max: u32) -> Vec<(u32, Integer)> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        let v = Integer::from(Integer::u_pow_u(3, n)) - 2u32;
        if v < 0 {
            continue;
        }
        if v.is_perfect_square() {
            out.push((n, v.sqrt()));
        }
    }
    out
}

/// `a n^2 + b n + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadratic {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Quadratic {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Quadratic { a, b, c }
    }

    pub fn eval(&self, n: i64) -> i128 {
        let n = n as i128;
        self.a as i128 * n * n + self.b as i128 * n + self.c as i128
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}n^2{:+}n{:+}", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: u64,
    pub prime_count: u64,
    /// `prime_count * ln f(n) / n`.
    pub c_hat: f64,
}

/// Primes among `f(1..=n)`.
pub fn prime_density(poly: Quadratic, n: u64) -> Result<DensityReport> {
    if poly.a <= 0 {
        return Err(Error::LeadingCoefficientNonpositive);
    }
    let prime_count = (1..=n as i64)
        .filter(|&k| u64::try_from(poly.eval(k)).is_ok_and(is_prime))
        .count() as u64;
    let top = poly.eval(n as i64).max(2) as f64;
    Ok(DensityReport {
        n,
        prime_count,
        c_hat: prime_count as f64 * top.ln() / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_lists() {
        assert_eq!(
            members(Family::Pentagonal, 26),
            [0, 1, 2, 5, 7, 12, 15, 22, 26]
        );
        assert_eq!(
            members(Family::A182568, 30),
            [0, 2, 4, 6, 8, 12, 16, 20, 24, 30]
        );
        assert_eq!(
            members(Family::QuarterSquare, 16),
            [0, 1, 2, 4, 6, 9, 12, 16]
        );
    }

    #[test]
    fn small_decompositions() {
        let r = verify_decomposition(Family::Pentagonal, Form::DoubleAdd, 10_000).unwrap();
        assert!(r.passed());
        assert_eq!(r.witnesses[0], "5 = 2·2+1");
        let r = verify_decomposition(Family::Trigonal, Form::Add, 10_000).unwrap();
        assert!(r.passed());
        assert!(r.exceptional > 0);
    }

    #[test]
    fn almost_square_fifteen_has_no_short_split() {
        let sorted = members(Family::AlmostSquare, 15);
        let set = sorted.iter().copied().collect();
        assert_eq!(find_triple(&sorted, &set, 15), None);
        let r = verify_decomposition(Family::AlmostSquare, Form::TripleSum, 10_000).unwrap();
        assert!(r.passed());
        assert_eq!(r.range.0, 24);
    }

    #[test]
    fn pell_first_entries() {
        let d = pell_family(PellKind::PentagonalDouble, 3);
        let d: Vec<(u64, u64)> = d
            .iter()
            .map(|(c, a)| (c.to_u64().unwrap(), a.to_u64().unwrap()))
            .collect();
        assert_eq!(d, [(2, 1), (70, 35), (2380, 1190)]);
        let t = pell_family_up_to(PellKind::PentagonalTriple, 10_000);
        assert_eq!(t[..2], [(15, 5), (210, 70)]);
        assert!(pell_family(PellKind::PentagonalDouble, 40).len() == 40);
    }

    #[test]
    fn pell_scan_agrees() {
        for kind in [PellKind::PentagonalDouble, PellKind::PentagonalTriple] {
            assert_eq!(pell_scan(kind, 100_000), pell_family_up_to(kind, 100_000));
        }
    }

    #[test]
    fn powers_of_three() {
        let s = powers_of_three_solutions(60);
        assert_eq!(s, [(1, Integer::from(1)), (3, Integer::from(5))]);
        assert!(powers_of_three_check(120).passed());
    }

    #[test]
    fn densities() {
        let f = Quadratic::new(18, -6, 1);
        assert_eq!(f.eval(1), 13);
        assert!(
            prime_density(Quadratic::new(2, 2, 2), 1000)
                .unwrap()
                .prime_count
                <= 1
        );
        assert!(matches!(
            prime_density(Quadratic::new(0, 1, 1), 10),
            Err(Error::LeadingCoefficientNonpositive)
        ));
        let g = Quadratic::new(4, 0, 1);
        let d: Vec<f64> = [1000u64, 10_000, 100_000]
            .iter()
            .map(|&n| prime_density(g, n).unwrap().prime_count as f64 / n as f64)
            .collect();
        assert!(d[0] > d[1] && d[1] > d[2] && d[2] > 0.0);
    }

    #[test]
    fn statement_ids_round_trip() {
        for st in Statement::ALL {
            assert_eq!(st.id().parse::<Statement>().unwrap(), st);
        }
    }
}
