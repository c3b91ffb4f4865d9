use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{sorted_set, AdditionSequence, AdditionStep, Step};
use crate::error::{Error, Result};
use crate::exponents::{exponents, is_member, ExponentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Classical,
    Generic,
    Optimized,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Algorithm::Classical),
            "generic" => Ok(Algorithm::Generic),
            "optimized" => Ok(Algorithm::Optimized),
            _ => Err(Error::Invalid(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// Sequence covering the positive members among `e_1..e_n`.
pub fn build(kind: ExponentKind, n: u64, algo: Algorithm) -> Result<AdditionSequence> {
    match (algo, kind) {
        (Algorithm::Classical, _) => build_classical(kind, n),
        (Algorithm::Generic, _) => Ok(complete_generic(&exponents(kind, n))),
        (Algorithm::Optimized, ExponentKind::QuarterSquare) => Ok(build_quarter_square(n)),
        (Algorithm::Optimized, ExponentKind::A182568) => Ok(build_a182568(n)),
        (Algorithm::Optimized, _) => build_optimized(kind, n),
    }
}

/// Values produced so far, keyed by value so that iteration is ascending.
struct Chain {
    steps: BTreeMap<u64, Step>,
    values: BTreeSet<u64>,
}

impl Chain {
    fn new() -> Self {
        let mut c = Chain {
            steps: BTreeMap::new(),
            values: BTreeSet::new(),
        };
        c.insert(1, Step::Leaf);
        c
    }

    fn contains(&self, v: u64) -> bool {
        self.values.contains(&v)
    }

    fn insert(&mut self, v: u64, step: Step) {
        debug_assert_eq!(step.value(), Some(v));
        if self.values.insert(v) {
            self.steps.insert(v, step);
        }
    }

    /// `a + b`, emitted as a doubling when the operands coincide.
    fn insert_sum(&mut self, a: u64, b: u64) {
        let step = if a == b {
            Step::Double { a }
        } else {
            Step::Add {
                a: a.max(b),
                b: a.min(b),
            }
        };
        self.insert(a + b, step);
    }

    /// Justifies `c` and whatever halves it needs by repeated halving.
    fn fill_by_halving(&mut self, c: u64) {
        let mut pending = BTreeSet::from([c]);
        while let Some(v) = pending.pop_first() {
            if self.contains(v) {
                continue;
            }
            match sum_of_two(&self.values, v) {
                Some(step) => self.insert(v, step),
                None => {
                    let lo = v / 2;
                    for h in [lo, v - lo] {
                        if !self.contains(h) {
                            pending.insert(h);
                        }
                    }
                    pending.insert(v);
                }
            }
        }
    }

    fn finish(self, targets: Vec<u64>) -> AdditionSequence {
        let steps = self
            .steps
            .into_iter()
            .map(|(target, op)| AdditionStep { target, op })
            .collect();
        AdditionSequence::new(steps, targets)
    }
}

/// Doubling if possible, otherwise the pair with the smallest operand.
fn sum_of_two(set: &BTreeSet<u64>, c: u64) -> Option<Step> {
    if c.is_multiple_of(2) && set.contains(&(c / 2)) {
        return Some(Step::Double { a: c / 2 });
    }
    set.range(1..=c / 2)
        .find(|&&a| set.contains(&(c - a)))
        .map(|&a| Step::Add { a: c - a, b: a })
}

/// Completes `e` to an addition sequence by inserting halves of any
/// element that is not a sum of two smaller ones.
pub fn complete_generic(e: &[u64]) -> AdditionSequence {
    let targets: Vec<u64> = sorted_set(e.iter().copied()).into_iter().collect();
    let mut chain = Chain::new();
    let mut set: BTreeSet<u64> = targets.iter().copied().collect();
    set.insert(1);
    let mut pending = set.clone();
    while let Some(c) = pending.pop_first() {
        if chain.contains(c) {
            continue;
        }
        match sum_of_two(&set, c) {
            Some(step) => chain.insert(c, step),
            None => {
                let lo = c / 2;
                for h in [lo, c - lo] {
                    if set.insert(h) {
                        pending.insert(h);
                    }
                }
                pending.insert(c);
            }
        }
    }
    chain.finish(targets)
}

/// Cheapest of doubling, sum, and double-sum over `available`, in that order.
///
/// Operands are searched with the larger one descending; 0 is never an operand.
pub fn decompose_step(kind: ExponentKind, c: u64, available: &BTreeSet<u64>) -> Result<Step> {
    if !is_member(kind, c) {
        return Err(Error::NotAMember { kind, c });
    }
    if c.is_multiple_of(2) && c > 0 && available.contains(&(c / 2)) {
        return Ok(Step::Double { a: c / 2 });
    }
    for &a in available.range(1..c).rev() {
        let b = c - a;
        if b > a {
            break;
        }
        if available.contains(&b) {
            return Ok(Step::Add { a, b });
        }
    }
    if c >= 3 {
        for &a in available.range(1..=(c - 1) / 2).rev() {
            if available.contains(&(c - 2 * a)) {
                return Ok(Step::DoubleAdd { a, b: c - 2 * a });
            }
        }
    }
    Err(Error::NoDecomposition { c })
}

/// `c = a + b + d` with `a >= b >= d >= 1` all in `members`.
fn three_split(members: &BTreeSet<u64>, c: u64) -> Option<(u64, u64, u64)> {
    for &a in members.range(1..c).rev() {
        let rest = c - a;
        for &b in members.range(1..=a.min(rest)).rev() {
            let d = rest - b;
            if d > b {
                break;
            }
            if d >= 1 && members.contains(&d) {
                return Some((a, b, d));
            }
        }
    }
    None
}

fn positive_targets(kind: ExponentKind, n: u64) -> Vec<u64> {
    sorted_set(exponents(kind, n)).into_iter().collect()
}

/// Per-member decomposition for pentagonal, trigonal and almost-square exponents.
///
/// Members with no single-step decomposition get a three-term split through
/// an explicit helper, and failing that, halving insertions.
pub fn build_optimized(kind: ExponentKind, n: u64) -> Result<AdditionSequence> {
    if !matches!(
        kind,
        ExponentKind::Pentagonal | ExponentKind::Trigonal | ExponentKind::AlmostSquare
    ) {
        return Err(Error::UnsupportedKind(kind));
    }
    let targets = positive_targets(kind, n);
    let mut chain = Chain::new();
    match kind {
        ExponentKind::Trigonal => chain.insert(2, Step::Double { a: 1 }),
        ExponentKind::AlmostSquare => {
            chain.insert(2, Step::Double { a: 1 });
            chain.insert(3, Step::Add { a: 2, b: 1 });
        }
        _ => {}
    }
    let mut members = BTreeSet::new();
    for &c in &targets {
        if !chain.contains(c) {
            if let Ok(step) = decompose_step(kind, c, &chain.values) {
                chain.insert(c, step);
            } else if let Some((a, b, d)) = three_split(&members, c) {
                if !chain.contains(a + b) {
                    chain.insert_sum(a, b);
                }
                chain.insert_sum(a + b, d);
            } else {
                chain.fill_by_halving(c);
            }
        }
        members.insert(c);
    }
    Ok(chain.finish(targets))
}

/// Two finite-difference recurrences per term: `f += d; d += D`.
pub fn build_classical(kind: ExponentKind, n: u64) -> Result<AdditionSequence> {
    // (first positive value, its forward difference, second difference)
    let branches: &[(u64, u64, u64)] = match kind {
        ExponentKind::Square => &[(1, 3, 2)],
        ExponentKind::Trigonal => &[(2, 4, 2)],
        ExponentKind::AlmostSquare => &[(3, 5, 2)],
        ExponentKind::Pentagonal => &[(1, 4, 3), (2, 5, 3)],
        _ => return Err(Error::UnsupportedKind(kind)),
    };
    let targets = positive_targets(kind, n);
    let mut chain = Chain::new();
    let Some(&max) = targets.last() else {
        return Ok(chain.finish(targets));
    };
    for &(f0, d0, dd) in branches {
        if f0 > max {
            continue;
        }
        chain.fill_by_halving(f0);
        if f0 + d0 <= max {
            chain.fill_by_halving(dd);
            chain.fill_by_halving(d0);
        }
        let (mut f, mut d) = (f0, d0);
        while f + d <= max {
            if !chain.contains(f + d) {
                chain.insert_sum(f, d);
            }
            f += d;
            if f + d + dd > max {
                break;
            }
            if !chain.contains(d + dd) {
                chain.insert_sum(d, dd);
            }
            d += dd;
        }
    }
    Ok(chain.finish(targets))
}

/// `t(n) = floor((n+1)^2 / 4)`, extended by `t(-1) = 0`.
fn quarter(n: i64) -> u64 {
    let m = (n + 1) as u64;
    m * m / 4
}

/// Every quarter-square past the bootstrap as `2t(4k+beta) + t(2k+gamma)`.
pub fn build_quarter_square(n: u64) -> AdditionSequence {
    let targets = positive_targets(ExponentKind::QuarterSquare, n);
    let mut chain = Chain::new();
    // e_i = t(i - 1)
    for idx in 2..n as i64 {
        let c = quarter(idx);
        if idx == 2 {
            chain.insert(c, Step::Double { a: 1 });
            continue;
        }
        let (k, alpha) = (idx / 6, idx % 6);
        let (beta, gamma) = match alpha {
            0 => (4 * k, 2 * k - 2),
            1 => (4 * k, 2 * k + 1),
            2 => (4 * k + 1, 2 * k),
            3 => (4 * k + 2, 2 * k - 1),
            4 => (4 * k + 2, 2 * k + 2),
            _ => (4 * k + 3, 2 * k + 1),
        };
        let (a, b) = (quarter(beta), quarter(gamma));
        let step = if b == 0 {
            Step::Double { a }
        } else {
            Step::DoubleAdd { a, b }
        };
        chain.insert(c, step);
    }
    chain.finish(targets)
}

/// `g(n) = floor(n^2 / 8)`; members are `2g(n)`.
fn a182568_value(n: i64) -> u64 {
    let m = n.unsigned_abs();
    2 * (m * m / 8)
}

/// Every member from 4 on as a sum of two smaller members via
/// `g(20k+alpha) = g(16k+beta) + g(12k+gamma)`.
pub fn build_a182568(n: u64) -> AdditionSequence {
    const TABLE: [(i64, i64); 11] = [
        (0, 0),
        (2, -1),
        (1, 2),
        (3, 1),
        (2, 4),
        (4, 3),
        (6, 2),
        (5, 5),
        (7, 4),
        (6, 7),
        (8, 6),
    ];
    let targets = positive_targets(ExponentKind::A182568, n);
    let mut chain = Chain::new();
    // e_i = f(i + 1)
    for idx in 3..=(n as i64 + 1) {
        let c = a182568_value(idx);
        match idx {
            3 | 4 | 6 => {
                chain.insert(c, Step::Double { a: c / 2 });
                continue;
            }
            _ => {}
        }
        let k = (idx + 9) / 20;
        let alpha = idx - 20 * k;
        let (beta, gamma) = TABLE[alpha.unsigned_abs() as usize];
        let s = if alpha < 0 { -1 } else { 1 };
        let a = a182568_value(16 * k + s * beta);
        let b = a182568_value(12 * k + s * gamma);
        chain.insert_sum(a, b);
    }
    chain.finish(targets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::exponents_up_to;
    use ExponentKind::*;

    fn step_for(seq: &AdditionSequence, target: u64) -> Step {
        seq.steps.iter().find(|s| s.target == target).unwrap().op
    }

    #[test]
    fn generic_examples() {
        let fib = complete_generic(&[1, 2, 3, 5, 8, 13]);
        assert_eq!(fib.values().collect::<Vec<_>>(), [1, 2, 3, 5, 8, 13]);
        let nine = complete_generic(&[1, 9]);
        assert_eq!(nine.values().collect::<Vec<_>>(), [1, 2, 4, 5, 9]);
        assert_eq!(step_for(&nine, 2), Step::Double { a: 1 });
        assert_eq!(step_for(&nine, 4), Step::Double { a: 2 });
        assert_eq!(step_for(&nine, 5), Step::Add { a: 4, b: 1 });
        assert_eq!(step_for(&nine, 9), Step::Add { a: 5, b: 4 });
        let one = complete_generic(&[1]);
        assert_eq!(one.counts().total(), 0);
        nine.validate().unwrap();
    }

    #[test]
    fn decompose_examples() {
        let avail = |v: &[u64]| v.iter().copied().collect::<BTreeSet<u64>>();
        assert_eq!(
            decompose_step(Pentagonal, 5, &avail(&[0, 1, 2])),
            Ok(Step::DoubleAdd { a: 2, b: 1 })
        );
        let below70 = exponents_up_to(Pentagonal, 69).into_iter().collect();
        assert_eq!(
            decompose_step(Pentagonal, 70, &below70),
            Ok(Step::Double { a: 35 })
        );
        assert_eq!(
            decompose_step(Pentagonal, 12, &avail(&[0, 1, 2, 5, 7])),
            Ok(Step::Add { a: 7, b: 5 })
        );
        assert_eq!(
            decompose_step(Trigonal, 20, &avail(&[0, 2, 6, 12])),
            Err(Error::NoDecomposition { c: 20 })
        );
        assert!(matches!(
            decompose_step(Pentagonal, 4, &avail(&[1, 2])),
            Err(Error::NotAMember { .. })
        ));
    }

    #[test]
    fn classical_square() {
        let s = build_classical(Square, 4).unwrap();
        s.validate().unwrap();
        assert_eq!(s.targets, [1, 4, 9, 16]);
        let helpers = s.helpers();
        for h in [3, 5, 7] {
            assert!(helpers.contains(&h));
        }
        assert_eq!(step_for(&s, 16), Step::Add { a: 9, b: 7 });
    }

    #[test]
    fn classical_trigonal_uses_even_differences() {
        let s = build_classical(Trigonal, 4).unwrap();
        s.validate().unwrap();
        assert_eq!(s.targets, [2, 6, 12]);
        assert_eq!(step_for(&s, 6), Step::Add { a: 4, b: 2 });
        assert_eq!(step_for(&s, 12), Step::Double { a: 6 });
    }

    #[test]
    fn classical_pentagonal_is_two_per_term() {
        for n in [6u64, 50, 500] {
            let s = build_classical(Pentagonal, n).unwrap();
            s.validate().unwrap();
            // Differences that are themselves members are shared, O(sqrt N) of them.
            let steps = s.counts().total() as f64;
            let two_n = 2.0 * n as f64;
            assert!(
                steps <= two_n + 4.0 && steps >= two_n - 4.0 * (n as f64).sqrt(),
                "n={n} steps={steps}"
            );
        }
        assert!(matches!(
            build_classical(QuarterSquare, 5),
            Err(Error::UnsupportedKind(_))
        ));
        assert!(matches!(
            build_classical(A182568, 5),
            Err(Error::UnsupportedKind(_))
        ));
    }

    #[test]
    fn optimized_trigonal_twenty() {
        let s = build_optimized(Trigonal, 5).unwrap();
        s.validate().unwrap();
        assert_eq!(step_for(&s, 18), Step::Add { a: 12, b: 6 });
        assert_eq!(step_for(&s, 20), Step::Add { a: 18, b: 2 });
    }

    #[test]
    fn optimized_almost_square_twenty_four() {
        let s = build_optimized(AlmostSquare, 5).unwrap();
        s.validate().unwrap();
        // 24 = 8 + 8 + 8 in one double-sum step.
        assert_eq!(step_for(&s, 24), Step::DoubleAdd { a: 8, b: 8 });
        assert_eq!(s.targets, [3, 8, 15, 24]);
    }

    #[test]
    fn optimized_pentagonal_step_mix() {
        // Frozen from a run at N = 10^4. Doubling-plus-add steps fall with N
        // (0.306 at 100, 0.216 at 1000) as 12c+1 primes thin out.
        let s = build_optimized(Pentagonal, 10_000).unwrap();
        let c = s.counts();
        assert_eq!(
            (c.double, c.add, c.double_add, c.triple),
            (5, 8449, 1544, 0)
        );
        assert!(s.helpers().is_empty());
        let total = c.total() as f64;
        assert!(c.add as f64 / total > 0.8);
        assert!((c.double_add as f64 / total - 0.1544).abs() < 1e-4);
        // 11542 complex operations, 86.6% of them multiplications.
        let (mul, sqr) = c.complex_ops();
        assert_eq!(mul + sqr, 11_542);
        assert!(mul as f64 / (mul + sqr) as f64 > 0.8);
    }

    #[test]
    fn quarter_square_steps() {
        let s = build_quarter_square(12);
        s.validate().unwrap();
        assert_eq!(step_for(&s, 20), Step::DoubleAdd { a: 9, b: 2 });
        assert_eq!(step_for(&s, 12), Step::Double { a: 6 });
        assert_eq!(step_for(&s, 2), Step::Double { a: 1 });
        assert_eq!(step_for(&s, 6), Step::DoubleAdd { a: 2, b: 2 });
        assert!(s.helpers().is_empty());
    }

    #[test]
    fn a182568_steps() {
        let s = build_a182568(40);
        s.validate().unwrap();
        assert_eq!(step_for(&s, 4), Step::Double { a: 2 });
        assert_eq!(step_for(&s, 8), Step::Double { a: 4 });
        assert_eq!(step_for(&s, 30), Step::Add { a: 24, b: 6 });
        assert!(s.helpers().is_empty());
        assert_eq!(s.counts().double_add, 0);
    }

    #[test]
    fn builders_validate_and_cover_exactly() {
        for n in [1u64, 2, 3, 10, 100, 2000] {
            for kind in ExponentKind::ALL {
                for algo in [
                    Algorithm::Classical,
                    Algorithm::Generic,
                    Algorithm::Optimized,
                ] {
                    let Ok(s) = build(kind, n, algo) else {
                        continue;
                    };
                    s.validate()
                        .unwrap_or_else(|v| panic!("{kind} {algo:?} {n}: {v}"));
                    assert_eq!(s.targets, positive_targets(kind, n));
                }
            }
        }
    }
}
