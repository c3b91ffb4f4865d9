//! Number of values of the exponent polynomials modulo `m`, and the moduli
//! at which that count relative to `m` reaches a new low.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, isqrt, primes_up_to};
use crate::error::{Error, Result};
use crate::exponents::ExponentKind;

/// Number of squares modulo `p^e`.
pub fn s_prime_power(p: u64, e: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(squares_mod_prime_power(p, e))
}

fn squares_mod_prime_power(p: u64, e: u32) -> u64 {
    if e == 0 {
        return 1;
    }
    let p = p as u128;
    let v = if p == 2 {
        if e <= 2 {
            2
        } else {
            let t = 1u128 << (e - 3);
            t + (t - (1 << ((e + 1) % 2))) / 3 + 2
        }
    } else {
        let pe1 = p.pow(e - 1);
        (pe1 * p - pe1) / 2 + (pe1 - p.pow((e + 1) % 2)) / (2 * (p + 1)) + 1
    };
    v as u64
}

/// Count at one prime power, for the kinds with a closed form.
fn local_count(kind: ExponentKind, p: u64, e: u32) -> Option<u64> {
    Some(match (kind, p) {
        (ExponentKind::Square | ExponentKind::AlmostSquare, _) => squares_mod_prime_power(p, e),
        (ExponentKind::Trigonal, 2) => 1 << (e - 1),
        (ExponentKind::Trigonal, _) => squares_mod_prime_power(p, e),
        (ExponentKind::Pentagonal, 2 | 3) => p.pow(e),
        (ExponentKind::Pentagonal, _) => squares_mod_prime_power(p, e),
        _ => return None,
    })
}

/// Number of distinct values of the sequence modulo `m`.
pub fn count_values(kind: ExponentKind, m: u64) -> u64 {
    if m <= 1 {
        return 1;
    }
    let closed: Option<u64> = factorize(m)
        .into_iter()
        .map(|(p, e)| local_count(kind, p, e))
        .product();
    closed.unwrap_or_else(|| residues(kind, m).count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueProfile {
    pub kind: ExponentKind,
    pub m: u64,
    pub residues: Vec<u64>,
    pub count: u64,
}

/// Values of the sequence modulo `m` by enumeration over one period.
pub fn residues(kind: ExponentKind, m: u64) -> ResidueProfile {
    assert!(m >= 1, "modulus must be positive");
    let mut hit = vec![false; m as usize];
    let mm = m as u128;
    let mut mark = |v: u128| hit[(v % mm) as usize] = true;
    match kind {
        ExponentKind::Square => (0..mm).for_each(|n| mark(n * n)),
        ExponentKind::AlmostSquare => (0..mm).for_each(|n| mark(n * n + mm - 1)),
        ExponentKind::Trigonal => (0..mm).for_each(|n| mark(n * (n + 1))),
        // n(3n-1)/2 has period dividing 2m; negative n are covered by periodicity.
        ExponentKind::Pentagonal => (0..2 * mm).for_each(|n| mark(n * (3 * n + 2 * mm - 1) / 2)),
        ExponentKind::QuarterSquare => (0..2 * mm).for_each(|n| mark(n * n / 4)),
        ExponentKind::A182568 => (0..4 * mm).for_each(|n| mark(2 * (n * n / 8))),
    }
    let residues: Vec<u64> = (0..m).filter(|&r| hit[r as usize]).collect();
    let count = residues.len() as u64;
    ResidueProfile {
        kind,
        m,
        residues,
        count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaEntry {
    pub m: u64,
    pub count: u64,
    pub ratio: f64,
}

impl MinimaEntry {
    fn new(m: u64, count: u64) -> Self {
        MinimaEntry {
            m,
            count,
            ratio: count as f64 / m as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaTable {
    pub kind: ExponentKind,
    pub entries: Vec<MinimaEntry>,
}

/// Kinds whose minima tables are computed; almost-squares share the squares table.
pub const MINIMA_KINDS: [ExponentKind; 3] = [
    ExponentKind::Square,
    ExponentKind::Trigonal,
    ExponentKind::Pentagonal,
];

fn table_kind(kind: ExponentKind) -> Result<ExponentKind> {
    match kind {
        ExponentKind::AlmostSquare => Ok(ExponentKind::Square),
        k if MINIMA_KINDS.contains(&k) => Ok(k),
        k => Err(Error::UnsupportedKind(k)),
    }
}

/// Calls `visit(m, e2, e3, core)` for every `2 <= m <= limit`, where
/// `m = 2^e2 3^e3 r` with `gcd(r, 6) = 1` and `core` is the number of
/// squares modulo `r`.
fn sieve_counts(limit: u64, mut visit: impl FnMut(u64, u32, u32, u64)) {
    const SEGMENT: u64 = 1 << 18;
    let primes: Vec<u64> = primes_up_to(isqrt(limit))
        .into_iter()
        .filter(|&p| p >= 5)
        .collect();
    let mut rem = vec![0u64; SEGMENT as usize];
    let mut core = vec![0u64; SEGMENT as usize];
    let mut e3 = vec![0u32; SEGMENT as usize];
    let mut lo = 2;
    while lo <= limit {
        let hi = (lo + SEGMENT).min(limit + 1);
        let len = (hi - lo) as usize;
        for i in 0..len {
            let m = lo + i as u64;
            rem[i] = m >> m.trailing_zeros();
            core[i] = 1;
            e3[i] = 0;
        }
        let mut strip = |p: u64, on_power: &mut dyn FnMut(usize, u32, u64)| {
            let first = lo.div_ceil(p) * p;
            let mut m = first;
            while m < hi {
                let i = (m - lo) as usize;
                let mut e = 0;
                while rem[i].is_multiple_of(p) {
                    rem[i] /= p;
                    e += 1;
                }
                on_power(i, e, p);
                m += p;
            }
        };
        strip(3, &mut |i, e, _| e3[i] = e);
        for &p in &primes {
            strip(p, &mut |i, e, p| {
                core[i] *= if e == 1 {
                    p.div_ceil(2)
                } else {
                    squares_mod_prime_power(p, e)
                };
            });
        }
        for i in 0..len {
            let m = lo + i as u64;
            if rem[i] > 1 {
                core[i] *= rem[i].div_ceil(2);
            }
            visit(m, m.trailing_zeros(), e3[i], core[i]);
        }
        lo = hi;
    }
}

fn count_from_parts(kind: ExponentKind, e2: u32, e3: u32, core: u64) -> u64 {
    let two = match kind {
        ExponentKind::Trigonal if e2 == 0 => 1,
        ExponentKind::Trigonal => 1 << (e2 - 1),
        ExponentKind::Pentagonal => 1 << e2,
        _ => squares_mod_prime_power(2, e2),
    };
    let three = match kind {
        ExponentKind::Pentagonal => 3u64.pow(e3),
        _ => squares_mod_prime_power(3, e3),
    };
    two * three * core
}

struct RecordTracker {
    kind: ExponentKind,
    entries: Vec<MinimaEntry>,
}

impl RecordTracker {
    fn offer(&mut self, m: u64, count: u64) {
        let is_record = match self.entries.last() {
            None => true,
            Some(best) => (count as u128) * (best.m as u128) < (best.count as u128) * (m as u128),
        };
        if is_record {
            self.entries.push(MinimaEntry::new(m, count));
        }
    }
}

/// Successive minima of `count(m)/m` for `2 <= m <= m_limit`, from exact
/// counts at every `m`.
pub fn successive_minima(kind: ExponentKind, m_limit: u64) -> Result<MinimaTable> {
    let kind = table_kind(kind)?;
    let mut tracker = RecordTracker {
        kind,
        entries: Vec::new(),
    };
    sieve_counts(m_limit, |m, e2, e3, core| {
        tracker.offer(m, count_from_parts(kind, e2, e3, core))
    });
    Ok(MinimaTable {
        kind: tracker.kind,
        entries: tracker.entries,
    })
}

/// All three tables from one sieve pass.
pub fn successive_minima_all(m_limit: u64) -> [MinimaTable; 3] {
    let mut trackers = MINIMA_KINDS.map(|kind| RecordTracker {
        kind,
        entries: Vec::new(),
    });
    sieve_counts(m_limit, |m, e2, e3, core| {
        for t in trackers.iter_mut() {
            t.offer(m, count_from_parts(t.kind, e2, e3, core));
        }
    });
    trackers.map(|t| MinimaTable {
        kind: t.kind,
        entries: t.entries,
    })
}

/// The entry minimizing `g*floor(t/m) + count(m)`, ties toward smaller `m`.
pub fn choose_m(table: &MinimaTable, t: u64, g: u64) -> Result<MinimaEntry> {
    table
        .entries
        .iter()
        .min_by_key(|e| (g * (t / e.m) + e.count, e.m))
        .copied()
        .ok_or(Error::EmptyTable)
}

impl MinimaTable {
    pub fn get(&self, m: u64) -> Option<&MinimaEntry> {
        self.entries
            .binary_search_by_key(&m, |e| e.m)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Entries with `m <= limit`.
    pub fn truncated(&self, limit: u64) -> MinimaTable {
        MinimaTable {
            kind: self.kind,
            entries: self
                .entries
                .iter()
                .filter(|e| e.m <= limit)
                .copied()
                .collect(),
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("# {}\n", self.kind);
        for e in &self.entries {
            let _ = writeln!(out, "{}\t{}\t{:.6e}", e.m, e.count, e.ratio);
        }
        out
    }

    pub fn from_tsv(kind: ExponentKind, text: &str) -> Result<MinimaTable> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let mut f = line.split('\t');
            let mut next = || {
                f.next()
                    .ok_or_else(|| err("expected m, count and ratio".into()))
            };
            let m: u64 = next()?.parse().map_err(|e| err(format!("{e}")))?;
            let count: u64 = next()?.parse().map_err(|e| err(format!("{e}")))?;
            next()?;
            if m < 2 || count == 0 {
                return Err(err(format!("invalid row m={m} count={count}")));
            }
            if entries.last().is_some_and(|p: &MinimaEntry| p.m >= m) {
                return Err(err("moduli must increase".into()));
            }
            entries.push(MinimaEntry::new(m, count));
        }
        if entries.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(MinimaTable { kind, entries })
    }

    /// Reads `<dir>/<kind>.tsv`.
    pub fn load(kind: ExponentKind, dir: &Path) -> Result<MinimaTable> {
        let kind = table_kind(kind)?;
        let path = dir.join(format!("{kind}.tsv"));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        MinimaTable::from_tsv(kind, &text)
    }
}

/// Largest modulus covered by the embedded tables.
pub const EMBEDDED_LIMIT: u64 = 100_000_000;

/// Tables shipped with the library, `m <= EMBEDDED_LIMIT`.
pub fn embedded_table(kind: ExponentKind) -> Result<&'static MinimaTable> {
    static TABLES: OnceLock<[MinimaTable; 3]> = OnceLock::new();
    let kind = table_kind(kind)?;
    let tables = TABLES.get_or_init(|| {
        let parse = |k, s| MinimaTable::from_tsv(k, s).expect("embedded table parses");
        [
            parse(ExponentKind::Square, include_str!("../data/square.tsv")),
            parse(ExponentKind::Trigonal, include_str!("../data/trigonal.tsv")),
            parse(
                ExponentKind::Pentagonal,
                include_str!("../data/pentagonal.tsv"),
            ),
        ]
    });
    Ok(tables
        .iter()
        .find(|t| t.kind == kind)
        .expect("all minima kinds embedded"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExponentKind::*;

    #[test]
    fn prime_power_counts() {
        assert_eq!(s_prime_power(2, 3), Ok(3));
        assert_eq!(s_prime_power(2, 4), Ok(4));
        assert_eq!(s_prime_power(2, 5), Ok(7));
        assert_eq!(s_prime_power(3, 1), Ok(2));
        assert_eq!(s_prime_power(3, 2), Ok(4));
        assert_eq!(residues(Square, 9).residues, [0, 1, 4, 7]);
        assert_eq!(s_prime_power(9, 1), Err(Error::NotPrime(9)));
    }

    #[test]
    fn closed_form_matches_enumeration_on_prime_powers() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let mut pe = p;
            for e in 1..=12u32 {
                if pe > 200_000 {
                    break;
                }
                assert_eq!(
                    s_prime_power(p, e).unwrap(),
                    residues(Square, pe).count,
                    "{p}^{e}"
                );
                pe *= p;
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_values(Square, 720), 48);
        assert_eq!(count_values(Square, 1440), 84);
        assert_eq!(count_values(Trigonal, 630), 48);
        assert_eq!(count_values(Pentagonal, 385), 72);
        assert_eq!(residues(Square, 4).residues, [0, 1]);
        assert_eq!(residues(Square, 12).residues, [0, 1, 4, 9]);
        assert_eq!(residues(Pentagonal, 5).count, 3);
    }

    #[test]
    fn oracle_equivalence_small() {
        for kind in ExponentKind::ALL {
            for m in 1..=600 {
                assert_eq!(
                    count_values(kind, m),
                    residues(kind, m).count,
                    "{kind} m={m}"
                );
            }
        }
    }

    #[test]
    fn sieve_agrees_with_factorization() {
        let mut n = 0;
        sieve_counts(700_000, |m, e2, e3, core| {
            if m % 997 == 1 || m > 699_000 {
                for kind in MINIMA_KINDS {
                    assert_eq!(
                        count_from_parts(kind, e2, e3, core),
                        count_values(kind, m),
                        "{kind} {m}"
                    );
                }
                n += 1;
            }
        });
        assert!(n > 1000);
    }

    #[test]
    fn minima_prefixes() {
        let sq = successive_minima(Square, 10_000).unwrap();
        let ms: Vec<u64> = sq.entries.iter().take(13).map(|e| e.m).collect();
        assert_eq!(ms, [2, 3, 4, 8, 12, 16, 32, 48, 80, 96, 112, 144, 240]);
        let tr = successive_minima(Trigonal, 10_000).unwrap();
        let ms: Vec<u64> = tr.entries.iter().take(10).map(|e| e.m).collect();
        assert_eq!(ms, [2, 6, 10, 14, 18, 30, 42, 66, 70, 90]);
        let pe = successive_minima(Pentagonal, 10_000).unwrap();
        let ms: Vec<u64> = pe.entries.iter().take(10).map(|e| e.m).collect();
        assert_eq!(ms, [2, 5, 7, 11, 13, 17, 19, 23, 25, 35]);
        assert_eq!(successive_minima_all(10_000), [sq, tr, pe]);
    }

    #[test]
    fn choose_m_edges() {
        let t = successive_minima(Square, 10_000).unwrap();
        assert_eq!(choose_m(&t, 0, 1).unwrap().m, 2);
        assert_eq!(
            choose_m(&t, u64::MAX / 4, 1).unwrap().m,
            t.entries.last().unwrap().m
        );
        let empty = MinimaTable {
            kind: Square,
            entries: vec![],
        };
        assert_eq!(choose_m(&empty, 5, 1), Err(Error::EmptyTable));
    }

    #[test]
    fn tsv_round_trip() {
        let t = successive_minima(Trigonal, 5000).unwrap();
        let back = MinimaTable::from_tsv(Trigonal, &t.to_tsv()).unwrap();
        assert_eq!(
            back.entries
                .iter()
                .map(|e| (e.m, e.count))
                .collect::<Vec<_>>(),
            t.entries.iter().map(|e| (e.m, e.count)).collect::<Vec<_>>()
        );
        assert!(MinimaTable::from_tsv(Square, "4\t2\t0.5\n3\t2\t0.6\n").is_err());
    }

    #[test]
    fn embedded_tables_match_fresh_prefix() {
        for kind in MINIMA_KINDS {
            let fresh = successive_minima(kind, 1_000_000).unwrap();
            let embedded = embedded_table(kind).unwrap().truncated(1_000_000);
            assert_eq!(
                embedded
                    .entries
                    .iter()
                    .map(|e| (e.m, e.count))
                    .collect::<Vec<_>>(),
                fresh
                    .entries
                    .iter()
                    .map(|e| (e.m, e.count))
                    .collect::<Vec<_>>()
            );
        }
        assert_eq!(embedded_table(AlmostSquare).unwrap().kind, Square);
        assert!(embedded_table(QuarterSquare).is_err());
    }
}
