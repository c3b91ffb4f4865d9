//! Operation-count benchmarks at the class-polynomial CM point.
//!
//! Rows mirror the timing tables (bits, truncation order, AS vs BSGS) with
//! modeled costs in place of wall-clock time. The "theory" column is the
//! ratio of modeled FFT costs, AS / BSGS, for the series summation only.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::addseq::{
    build_a182568, build_optimized, complete_generic, AdditionSequence, CostModel,
};
use crate::bsgs::{self, BsgsPlan, CurvePoint};
use crate::error::{Error, Result};
use crate::evaluator::{benchmark_tau, compute_q, reduce_tau, truncation_order};
use crate::exponents::{exponents_up_to, truncation_count, ExponentKind};
use crate::modcount::embedded_table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchTable {
    /// Eta function, optimized pentagonal sequence vs BSGS.
    Eta,
    /// theta0, theta1, theta2 together: A182568 sequence vs BSGS with a
    /// shared baby table and three giant passes. Squares and trigonal
    /// numbers each get the modulus that is best for a single pass.
    ThetaSimultaneous,
    /// theta0 alone: generic sequence for the squares vs BSGS.
    ThetaSingle,
}

impl BenchTable {
    pub const ALL: [BenchTable; 3] = [
        BenchTable::Eta,
        BenchTable::ThetaSimultaneous,
        BenchTable::ThetaSingle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchTable::Eta => "eta",
            BenchTable::ThetaSimultaneous => "theta-simultaneous",
            BenchTable::ThetaSingle => "theta-single",
        }
    }
}

impl fmt::Display for BenchTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchTable::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown benchmark table `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Ops {
    pub mul: u64,
    pub sqr: u64,
}

impl Ops {
    fn of(seq: &AdditionSequence) -> Ops {
        let (mul, sqr) = seq.counts().complex_ops();
        Ops { mul, sqr }
    }

    pub fn cost(&self, model: CostModel) -> f64 {
        self.mul as f64 * model.add() + self.sqr as f64 * model.double()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub table: BenchTable,
    pub bits: u32,
    /// Truncation order from the error bound.
    pub t_bound: u64,
    /// Last included exponent.
    pub t: u64,
    /// Terms summed.
    pub n: u64,
    /// BSGS moduli.
    pub m: Vec<u64>,
    pub as_ops: Ops,
    pub bsgs_ops: Ops,
    pub as_cost: f64,
    pub bsgs_cost: f64,
    /// `as_cost / bsgs_cost` in the FFT model.
    pub theory: f64,
}

/// `-log2 |q|` at the benchmark point for eta (`l = 1`) or theta (`l = 2`).
fn benchmark_log2_q(divisor: u32) -> Result<f64> {
    let (tau, _) = reduce_tau(&benchmark_tau(256))?;
    let (_, q) = compute_q(&tau, divisor, 256)?;
    Ok(q.log2_abs())
}

pub fn theory_row(table: BenchTable, bits: u32) -> Result<TheoryRow> {
    let (divisor, c) = if table == BenchTable::Eta {
        (1, 1.0)
    } else {
        (2, 2.0)
    };
    let t_bound = truncation_order(bits, benchmark_log2_q(divisor)?, c)?;
    theory_row_at(table, bits, t_bound)
}

/// Row for an explicit truncation order.
pub fn theory_row_at(table: BenchTable, bits: u32, t_bound: u64) -> Result<TheoryRow> {
    let model = CostModel::FFT;
    let last = |kind| exponents_up_to(kind, t_bound).last().copied().unwrap_or(0);
    let plan_ops = |plans: &[(&BsgsPlan, u64)], seq: &AdditionSequence| {
        let giant: u64 = plans
            .iter()
            .map(|(p, passes)| passes * p.giant_steps())
            .sum();
        let baby = Ops::of(seq);
        Ops {
            mul: baby.mul + giant,
            sqr: baby.sqr,
        }
    };
    let (t, n, m, as_ops, bsgs_ops) = match table {
        BenchTable::Eta => {
            let kind = ExponentKind::Pentagonal;
            let n = truncation_count(kind, t_bound);
            let seq = build_optimized(kind, n)?;
            let pl = bsgs::plan(kind, t_bound, embedded_table(kind)?, 1)?;
            (
                last(kind),
                n,
                vec![pl.m],
                Ops::of(&seq),
                plan_ops(&[(&pl, 1)], &pl.residue_seq),
            )
        }
        BenchTable::ThetaSimultaneous => {
            let n = truncation_count(ExponentKind::A182568, t_bound);
            let seq = build_a182568(n);
            let sq = bsgs::plan(
                ExponentKind::Square,
                t_bound,
                embedded_table(ExponentKind::Square)?,
                1,
            )?;
            let tr = bsgs::plan(
                ExponentKind::Trigonal,
                t_bound,
                embedded_table(ExponentKind::Trigonal)?,
                1,
            )?;
            let shared = bsgs::BabyTable::shared(&[&sq, &tr]);
            let t = last(ExponentKind::Square).max(last(ExponentKind::Trigonal));
            (
                t,
                n,
                vec![sq.m, tr.m],
                Ops::of(&seq),
                plan_ops(&[(&sq, 2), (&tr, 1)], &shared),
            )
        }
        BenchTable::ThetaSingle => {
            let kind = ExponentKind::Square;
            let squares = exponents_up_to(kind, t_bound);
            let seq = complete_generic(&squares);
            let pl = bsgs::plan(kind, t_bound, embedded_table(kind)?, 1)?;
            (
                last(kind),
                squares.len() as u64,
                vec![pl.m],
                Ops::of(&seq),
                plan_ops(&[(&pl, 1)], &pl.residue_seq),
            )
        }
    };
    let (as_cost, bsgs_cost) = (as_ops.cost(model), bsgs_ops.cost(model));
    Ok(TheoryRow {
        table,
        bits,
        t_bound,
        t,
        n,
        m,
        as_ops,
        bsgs_ops,
        as_cost,
        bsgs_cost,
        theory: as_cost / bsgs_cost,
    })
}

/// Bit precisions of the timing tables.
pub const TABLE_BITS: [u32; 6] = [100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];

pub fn theory_table(table: BenchTable, bits: &[u32]) -> Result<Vec<TheoryRow>> {
    bits.iter().map(|&b| theory_row(table, b)).collect()
}

/// Term counts sampled for the normalized cost curve.
pub fn default_curve_ns() -> Vec<u64> {
    let mut ns = BTreeSet::new();
    for exp in 1..=6u32 {
        let base = 10u64.pow(exp);
        for k in [1, 2, 5] {
            if k * base <= 1_000_000 {
                ns.insert(k * base);
            }
        }
    }
    ns.into_iter().collect()
}

/// Normalized cost of the eta series for each method.
pub fn figure_curve(ns: &[u64]) -> Result<Vec<CurvePoint>> {
    bsgs::cost_curve(
        ExponentKind::Pentagonal,
        ns,
        embedded_table(ExponentKind::Pentagonal)?,
    )
}

pub fn rows_to_tsv(rows: &[TheoryRow]) -> String {
    let mut out = String::from(
        "table\tbits\tT\tN\tm\tas_mul\tas_sqr\tbsgs_mul\tbsgs_sqr\tas_cost\tbsgs_cost\ttheory\n",
    );
    for r in rows {
        let m: Vec<String> = r.m.iter().map(|m| m.to_string()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.1}\t{:.1}\t{:.3}\n",
            r.table,
            r.bits,
            r.t,
            r.n,
            m.join(","),
            r.as_ops.mul,
            r.as_ops.sqr,
            r.bsgs_ops.mul,
            r.bsgs_ops.sqr,
            r.as_cost,
            r.bsgs_cost,
            r.theory
        ));
    }
    out
}

pub fn curve_to_tsv(points: &[CurvePoint]) -> String {
    let mut out = String::from("N\tT\tclassical\toptimized\tbsgs\tm\n");
    for p in points {
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{}\n",
            p.n, p.t, p.classical, p.optimized, p.bsgs, p.m
        ));
    }
    out
}
