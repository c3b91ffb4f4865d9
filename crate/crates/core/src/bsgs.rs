//! Sparse baby-step giant-step summation of `sum s_i q^(e_i)`.
//!
//! Each exponent is split as `e = k m + r`. Powers `q^r` for the residues hit
//! modulo `m` are computed once by an addition sequence, and the sum is then
//! accumulated by Horner's rule in `q^m` from the top level down.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::addseq::{
    build_classical, build_optimized, complete_generic, AdditionSequence, CostModel, Step,
};
use crate::arb::{ArbComplex, OpCounts};
use crate::error::{Error, Result};
use crate::exponents::{exponent, is_member, truncation_count, ExponentKind};
use crate::modcount::{choose_m, MinimaTable};
use crate::theorems::{criterion, Family, Form};

/// Sign of the `i`-th term (1-based index into the exponent enumeration).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    Plus,
    /// Signs of the pentagonal expansion of the Euler function.
    Pentagonal,
    /// `(-1)^i`.
    Alternating,
}

impl SignRule {
    pub fn sign(self, i: u64) -> i8 {
        let odd = match self {
            SignRule::Plus => false,
            SignRule::Pentagonal => (i / 2) % 2 == 1,
            SignRule::Alternating => i % 2 == 1,
        };
        if odd {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsgsPlan {
    pub kind: ExponentKind,
    /// Requested truncation order.
    pub t: u64,
    /// Largest exponent `<= t`.
    pub e_max: u64,
    pub n_terms: u64,
    pub m: u64,
    /// Residues `r > 0` hit by exponents `<= t`, ascending.
    pub residues: Vec<u64>,
    /// Whether residue 0 is hit.
    pub hits_zero: bool,
    /// Baby steps: all hit residues, plus `m` when there is a giant step.
    pub residue_seq: AdditionSequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsgsCostEstimate {
    /// Giant-step multiplications, `floor(e_max / m)` per pass.
    pub giant: u64,
    /// Baby addition-sequence steps.
    pub baby: u64,
    /// Total under the cost model, in real multiplications.
    pub total: f64,
}

/// Plan with `m` taken from `table` for `g` giant-step passes.
pub fn plan(kind: ExponentKind, t: u64, table: &MinimaTable, g: u64) -> Result<BsgsPlan> {
    let n = truncation_count(kind, t);
    let e_max = if n == 0 { 0 } else { exponent(kind, n) };
    let entry = choose_m(table, e_max, g)?;
    Ok(plan_with_m(kind, t, entry.m))
}

/// Plan for a fixed modulus `m >= 1`.
pub fn plan_with_m(kind: ExponentKind, t: u64, m: u64) -> BsgsPlan {
    assert!(m >= 1, "modulus must be positive");
    let n = truncation_count(kind, t);
    let e_max = if n == 0 { 0 } else { exponent(kind, n) };
    let mut hit = vec![false; m as usize];
    for i in 1..=n {
        hit[(exponent(kind, i) % m) as usize] = true;
    }
    let residues: Vec<u64> = (1..m).filter(|&r| hit[r as usize]).collect();
    let mut baby: BTreeSet<u64> = residues.iter().copied().collect();
    if e_max >= m {
        baby.insert(m);
    }
    let baby: Vec<u64> = baby.into_iter().collect();
    BsgsPlan {
        kind,
        t,
        e_max,
        n_terms: n,
        m,
        residues,
        hits_zero: hit[0],
        residue_seq: complete_generic(&baby),
    }
}

impl BsgsPlan {
    pub fn giant_steps(&self) -> u64 {
        self.e_max / self.m
    }

    /// Elements the baby sequence needed beyond the hit residues, `m` and 1.
    pub fn insertions(&self) -> usize {
        self.residue_seq.helpers().len()
    }

    /// Terms as `(level k, residue r, index i)` with `e_i = k m + r`,
    /// streamed in descending order of exponent.
    pub fn levels(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        (1..=self.n_terms).rev().map(move |i| {
            let e = exponent(self.kind, i);
            (e / self.m, e % self.m, i)
        })
    }

    pub fn cost(&self, model: CostModel) -> BsgsCostEstimate {
        let giant = self.giant_steps();
        BsgsCostEstimate {
            giant,
            baby: self.residue_seq.counts().total(),
            total: giant as f64 * model.add() + self.residue_seq.cost(model),
        }
    }

    /// Debug summary: modulus, residue count, insertion count, level count.
    pub fn dump_json(&self) -> String {
        serde_json::json!({
            "kind": self.kind,
            "t": self.t,
            "e_max": self.e_max,
            "terms": self.n_terms,
            "m": self.m,
            "residues": self.residues.len() + self.hits_zero as usize,
            "baby_steps": self.residue_seq.len(),
            "insertions": self.insertions(),
            "levels": self.giant_steps() + 1,
        })
        .to_string()
    }
}

/// Powers `q^r` for every element of a baby-step sequence, at full precision.
pub struct BabyTable {
    pub seq: AdditionSequence,
    powers: HashMap<u64, ArbComplex>,
}

impl BabyTable {
    /// One sequence covering the baby steps of all `plans`.
    pub fn shared(plans: &[&BsgsPlan]) -> AdditionSequence {
        let mut all = BTreeSet::new();
        for p in plans {
            all.extend(p.residue_seq.targets.iter().copied());
        }
        complete_generic(&all.into_iter().collect::<Vec<_>>())
    }

    pub fn compute(seq: AdditionSequence, q: &ArbComplex, wp: u32, ops: &mut OpCounts) -> Self {
        let mut powers: HashMap<u64, ArbComplex> = HashMap::with_capacity(seq.len());
        for s in &seq.steps {
            let v = match s.op {
                Step::Leaf => q.with_prec(wp),
                Step::Double { a } => powers[&a].sqr(wp, ops),
                Step::Add { a, b } => powers[&a].mul(&powers[&b], wp, ops),
                Step::DoubleAdd { a, b } => powers[&a].sqr(wp, ops).mul(&powers[&b], wp, ops),
                Step::Triple { a } => powers[&a].cube(wp, ops),
            };
            powers.insert(s.target, v);
        }
        BabyTable { seq, powers }
    }

    pub fn get(&self, r: u64) -> Option<&ArbComplex> {
        self.powers.get(&r)
    }
}

/// Guard bits for accumulating `n` terms.
pub fn guard_bits(n: u64) -> u32 {
    16 + (64 - n.leading_zeros())
}

/// Precision for a quantity of magnitude about `|q|^e`, given `lambda = -log2 |q|`.
pub fn term_prec(wp: u32, guard: u32, e: u64, lambda: f64) -> u32 {
    if e == 0 {
        return wp;
    }
    let drop = e as f64 * lambda;
    if !drop.is_finite() || drop >= wp as f64 {
        return guard;
    }
    (wp - drop.floor() as u32).max(guard)
}

pub fn eval(
    plan: &BsgsPlan,
    q: &ArbComplex,
    sign: SignRule,
    p: u32,
    ops: &mut OpCounts,
) -> Result<ArbComplex> {
    let mut out = eval_shared(&[(plan, sign)], q, p, ops)?;
    Ok(out.pop().expect("one pass"))
}

/// Evaluates several passes over one baby table. Moduli may differ between
/// passes; the table covers the union of their residues and moduli.
pub fn eval_shared(
    passes: &[(&BsgsPlan, SignRule)],
    q: &ArbComplex,
    p: u32,
    ops: &mut OpCounts,
) -> Result<Vec<ArbComplex>> {
    if p < 8 {
        return Err(Error::PrecisionUnderflow(p));
    }
    let n_max = passes.iter().map(|(pl, _)| pl.n_terms).max().unwrap_or(0);
    let guard = guard_bits(n_max);
    let wp = p + guard;
    if q.is_zero() {
        return Ok(passes
            .iter()
            .map(|(pl, s)| constant_term(pl, *s, wp))
            .collect());
    }
    let lambda = -q.log2_abs();
    let plans: Vec<&BsgsPlan> = passes.iter().map(|(pl, _)| *pl).collect();
    let seq = if plans.len() == 1 {
        plans[0].residue_seq.clone()
    } else {
        BabyTable::shared(&plans)
    };
    let table = BabyTable::compute(seq, q, wp, ops);
    Ok(passes
        .iter()
        .map(|(pl, s)| horner(pl, *s, &table, wp, guard, lambda, ops))
        .collect())
}

fn constant_term(plan: &BsgsPlan, sign: SignRule, wp: u32) -> ArbComplex {
    let mut acc = ArbComplex::zero(wp);
    for (k, r, i) in plan.levels() {
        if k == 0 && r == 0 {
            acc.add_unit(sign.sign(i));
        }
    }
    acc
}

fn horner(
    plan: &BsgsPlan,
    sign: SignRule,
    table: &BabyTable,
    wp: u32,
    guard: u32,
    lambda: f64,
    ops: &mut OpCounts,
) -> ArbComplex {
    let m = plan.m;
    let top = plan.giant_steps();
    let mut level = top;
    let mut acc = ArbComplex::zero(term_prec(wp, guard, top * m, lambda));
    let step_down = |acc: &ArbComplex, level: u64, ops: &mut OpCounts| {
        let qm = table.get(m).expect("giant step power in baby table");
        acc.mul(qm, term_prec(wp, guard, level * m, lambda), ops)
    };
    for (k, r, i) in plan.levels() {
        while level > k {
            level -= 1;
            acc = step_down(&acc, level, ops);
        }
        if r == 0 {
            acc.add_unit(sign.sign(i));
        } else {
            acc.add_signed(table.get(r).expect("residue in baby table"), sign.sign(i));
        }
    }
    while level > 0 {
        level -= 1;
        acc = step_down(&acc, level, ops);
    }
    acc
}

/// One point of the normalized cost curve (real multiplications per `3N`,
/// FFT model).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: u64,
    pub t: u64,
    pub classical: f64,
    pub optimized: f64,
    pub bsgs: f64,
    pub m: u64,
}

/// Largest `n` for which the optimized pentagonal curve is taken from the
/// builder; above it the per-term criteria are used. The builder search is
/// quadratic in `n`.
pub const OPTIMIZED_BUILD_LIMIT: u64 = 20_000;

/// Cost curve over term counts `ns` for the eta (pentagonal), theta0/1
/// (almost-square) or theta2 (trigonal) series, one giant pass.
pub fn cost_curve(kind: ExponentKind, ns: &[u64], table: &MinimaTable) -> Result<Vec<CurvePoint>> {
    let model = CostModel::FFT;
    ns.iter()
        .map(|&n| {
            let t = exponent(kind, n.max(1));
            let norm = |c: f64| c / (3.0 * n as f64);
            let classical = norm(build_classical(kind, n)?.cost(model));
            let optimized = if n <= OPTIMIZED_BUILD_LIMIT || kind != ExponentKind::Pentagonal {
                norm(build_optimized(kind, n)?.cost(model))
            } else {
                norm(optimized_cost_by_criteria(kind, n, model)?)
            };
            let bsgs_kind = if kind == ExponentKind::AlmostSquare {
                ExponentKind::Square
            } else {
                kind
            };
            let t_series = if kind == ExponentKind::AlmostSquare {
                t + 1
            } else {
                t
            };
            let pl = plan(bsgs_kind, t_series, table, 1)?;
            Ok(CurvePoint {
                n,
                t,
                classical,
                optimized,
                bsgs: norm(pl.cost(model).total),
                m: pl.m,
            })
        })
        .collect()
}

/// Cost of the optimized pentagonal sequence predicted member by member from
/// the decomposition theorems: doubling when the half is a member, `a+b` when
/// `12c+1` is composite, and `2a+b` otherwise. The builder never needs
/// helpers for this kind, so the prediction is exact.
pub fn optimized_cost_by_criteria(kind: ExponentKind, n: u64, model: CostModel) -> Result<f64> {
    if kind != ExponentKind::Pentagonal {
        return Err(Error::UnsupportedKind(kind));
    }
    let mut cost = 0.0;
    for i in 1..=n {
        let c = exponent(kind, i);
        if c <= 1 {
            continue;
        }
        cost += if c.is_multiple_of(2) && is_member(kind, c / 2) {
            model.double()
        } else if criterion(Family::Pentagonal, Form::Add, c) == Some(true) {
            model.add()
        } else {
            model.double_add()
        };
    }
    Ok(cost)
}
