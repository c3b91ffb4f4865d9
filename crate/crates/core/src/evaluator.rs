//! End-to-end evaluation of the Dedekind eta function and the theta constants.
//!
//! Conventions: eta uses `q = e^(2 pi i tau)`, the theta constants use
//! `q = e^(pi i tau)`, and fractional powers `q^(1/l)` are `e^(gamma/l)` for
//! `q = e^gamma`. With a raw `q` input, `gamma` is the principal logarithm.
//!
//! ```text
//! eta    = q^(1/24) sum s(e) q^e              e generalized pentagonal
//! theta0 = 1 + 2 sum q^(n^2)                 = 1 + 2q sum q^(n^2-1)
//! theta1 = 1 + 2 sum (-1)^n q^(n^2)
//! theta2 = 2 q^(1/4) sum_{n>=0} q^(n(n+1))
//! ```

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::addseq::{
    build_a182568, build_classical, build_optimized, AdditionSequence, CostModel, Step,
};
use crate::arb::{pi, ArbComplex, OpCounts};
use crate::bsgs::{self, guard_bits, term_prec, SignRule};
use crate::error::{Error, Result};
use crate::exponents::{exponent, term_sign, truncation_count, ExponentKind};
use crate::modcount::{embedded_table, MinimaTable};

/// Default truncation order above which `Method::Auto` switches to BSGS.
pub const DEFAULT_CROSSOVER: u64 = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Function {
    Eta,
    Theta0,
    Theta1,
    Theta2,
    ThetaAll,
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Eta => "eta",
            Function::Theta0 => "theta0",
            Function::Theta1 => "theta1",
            Function::Theta2 => "theta2",
            Function::ThetaAll => "theta-all",
        }
    }

    /// `l` in `q = e^(2 pi i tau / l)`.
    fn q_divisor(self) -> u32 {
        if self == Function::Eta {
            1
        } else {
            2
        }
    }

    /// Bound on the coefficients of the series, for the tail estimate.
    fn coefficient_bound(self) -> f64 {
        if self == Function::Eta {
            1.0
        } else {
            2.0
        }
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Function {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "eta" => Ok(Function::Eta),
            "theta0" => Ok(Function::Theta0),
            "theta1" => Ok(Function::Theta1),
            "theta2" => Ok(Function::Theta2),
            "theta-all" | "thetaall" => Ok(Function::ThetaAll),
            _ => Err(Error::Invalid(format!("unknown function `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Classical,
    Optimized,
    Bsgs,
    Auto,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Optimized => "optimized",
            Method::Bsgs => "bsgs",
            Method::Auto => "auto",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" => Ok(Method::Classical),
            "optimized" => Ok(Method::Optimized),
            "bsgs" => Ok(Method::Bsgs),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::Invalid(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Tau(ArbComplex),
    /// `q` in the convention of the requested function.
    Q(ArbComplex),
}

#[derive(Debug, Clone)]
pub struct EvalRequest {
    pub function: Function,
    pub input: Input,
    /// Target precision in bits.
    pub prec: u32,
    pub method: Method,
    /// Truncation order at which `Auto` switches from AS to BSGS.
    pub crossover: u64,
    /// Compute each term at reduced precision according to its magnitude.
    pub precision_trick: bool,
    /// Directory with `square.tsv`, `trigonal.tsv`, `pentagonal.tsv`;
    /// the embedded tables are used when `None`.
    pub minima_dir: Option<PathBuf>,
}

impl EvalRequest {
    pub fn new(function: Function, input: Input, prec: u32, method: Method) -> Self {
        EvalRequest {
            function,
            input,
            prec,
            method,
            crossover: DEFAULT_CROSSOVER,
            precision_trick: true,
            minima_dir: None,
        }
    }

    /// Parses decimal `tau` at a precision sufficient for `prec`.
    pub fn tau(function: Function, re: &str, im: &str, prec: u32, method: Method) -> Result<Self> {
        Ok(Self::new(
            function,
            Input::Tau(ArbComplex::parse(re, im, input_prec(prec))?),
            prec,
            method,
        ))
    }

    pub fn q(function: Function, re: &str, im: &str, prec: u32, method: Method) -> Result<Self> {
        Ok(Self::new(
            function,
            Input::Q(ArbComplex::parse(re, im, input_prec(prec))?),
            prec,
            method,
        ))
    }
}

/// Bits carried by parsed inputs for a target precision `p`.
pub fn input_prec(p: u32) -> u32 {
    p + 64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesInfo {
    pub kind: ExponentKind,
    /// Largest exponent summed.
    pub t: u64,
    pub n: u64,
    pub m: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub function: Function,
    /// The method actually used (never `Auto`).
    pub method: Method,
    pub prec: u32,
    /// Truncation order from the error bound.
    pub t: u64,
    /// Total number of terms over all series.
    pub n: u64,
    pub series: Vec<SeriesInfo>,
    pub values: Vec<(String, ArbComplex)>,
    pub counts: OpCounts,
}

impl EvalReport {
    /// Modulus of the first BSGS series, if any.
    pub fn m(&self) -> Option<u64> {
        self.series.iter().find_map(|s| s.m)
    }

    pub fn modeled_cost(&self, model: CostModel) -> f64 {
        self.counts.modeled_cost(model)
    }

    pub fn value(&self, name: &str) -> Option<&ArbComplex> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn to_json(&self, report: bool) -> serde_json::Value {
        let values: serde_json::Map<String, serde_json::Value> = self
            .values
            .iter()
            .map(|(name, v)| {
                let (re, im) = v.to_decimal();
                let (hre, him) = v.to_hex();
                (
                    name.clone(),
                    serde_json::json!({ "re": re, "im": im, "re_hex": hre, "im_hex": him }),
                )
            })
            .collect();
        let mut out = serde_json::json!({
            "function": self.function,
            "prec": self.prec,
            "values": values,
        });
        if report {
            let (mul, sqr) = (self.counts.complex_mul, self.counts.complex_sqr);
            out["report"] = serde_json::json!({
                "method": self.method,
                "t": self.t,
                "n": self.n,
                "m": self.m(),
                "series": self.series,
                "counts": self.counts,
                "complex_mul": mul,
                "complex_sqr": sqr,
                "modeled_cost_fft": self.modeled_cost(CostModel::FFT),
                "modeled_cost_schoolbook": self.modeled_cost(CostModel::SCHOOLBOOK),
            });
        }
        out
    }
}

/// Unimodular matrix `[[a, b], [c, d]]` acting by `(a tau + b) / (c tau + d)`.
pub type Matrix = [[i64; 2]; 2];

/// Moves `tau` into the standard fundamental domain. Returns the reduced
/// point and the matrix mapping the input onto it.
pub fn reduce_tau(tau: &ArbComplex) -> Result<(ArbComplex, Matrix)> {
    if tau.im <= 0 {
        return Err(Error::NotUpperHalfPlane);
    }
    let prec = tau.prec();
    let mut z = tau.clone();
    let mut mat: Matrix = [[1, 0], [0, 1]];
    let overflow = || Error::Invalid("reduction matrix overflows 64 bits".into());
    for _ in 0..10_000 {
        let n =
            z.re.clone()
                .round()
                .to_integer()
                .and_then(|n| n.to_i64())
                .ok_or_else(overflow)?;
        if n != 0 {
            z.re -= n;
            // [[1, -n], [0, 1]] * mat
            for j in 0..2 {
                mat[0][j] = mat[1][j]
                    .checked_mul(n)
                    .and_then(|v| mat[0][j].checked_sub(v))
                    .ok_or_else(overflow)?;
            }
        }
        let norm =
            Float::with_val(prec, z.re.square_ref()) + Float::with_val(prec, z.im.square_ref());
        if norm >= 1 {
            return Ok((z, mat));
        }
        // tau -> -1/tau = (-x + i y) / |tau|^2; [[0, -1], [1, 0]] * mat
        z = ArbComplex {
            re: -Float::with_val(prec, &z.re / &norm),
            im: Float::with_val(prec, &z.im / &norm),
        };
        mat = [[-mat[1][0], -mat[1][1]], [mat[0][0], mat[0][1]]];
    }
    Err(Error::Invalid("reduction did not terminate".into()))
}

/// `gamma = 2 pi i tau / l` and `q = e^gamma`.
pub fn compute_q(tau: &ArbComplex, divisor: u32, prec: u32) -> Result<(ArbComplex, ArbComplex)> {
    if tau.im <= 0 {
        return Err(Error::NotUpperHalfPlane);
    }
    let wp = prec + 32;
    let c = Float::with_val(wp, pi(wp) * 2u32) / divisor;
    let gamma = ArbComplex {
        re: -Float::with_val(wp, &c * &tau.im),
        im: Float::with_val(wp, &c * &tau.re),
    };
    let q = gamma.exp(prec);
    Ok((gamma, q))
}

/// Smallest `T` with `c |q|^(T+1) / (1 - |q|) < 2^(-p-2)`, from
/// `log2 |q| = -lambda`.
pub fn truncation_order(p: u32, log2_abs_q: f64, c: f64) -> Result<u64> {
    if p < 8 {
        return Err(Error::PrecisionUnderflow(p));
    }
    if log2_abs_q == f64::NEG_INFINITY {
        return Ok(0);
    }
    let lambda = -log2_abs_q;
    if lambda.is_nan() || lambda < 2f64.powf(-(p as f64) / 2.0) {
        return Err(Error::QTooLarge(p));
    }
    // 1 - |q| = -expm1(ln |q|)
    let delta = -(log2_abs_q * std::f64::consts::LN_2).exp_m1();
    let x = p as f64 + 2.0 + c.log2() - delta.log2();
    Ok((x / lambda).floor().max(0.0) as u64)
}

fn table(kind: ExponentKind, dir: &Option<PathBuf>) -> Result<Cow<'static, MinimaTable>> {
    match dir {
        Some(d) => Ok(Cow::Owned(MinimaTable::load(kind, d)?)),
        None => Ok(Cow::Borrowed(embedded_table(kind)?)),
    }
}

/// Working state shared by the summation routines.
struct Ctx {
    q: ArbComplex,
    wp: u32,
    guard: u32,
    lambda: f64,
    trick: bool,
}

impl Ctx {
    fn prec(&self, e: u64) -> u32 {
        if self.trick {
            term_prec(self.wp, self.guard, e, self.lambda)
        } else {
            self.wp
        }
    }
}

/// Runs `seq` and adds `sign * q^(e_i)` for `i = 1..=n` into accumulator
/// `slot`, where `classify(i) = (slot, sign)`; `None` skips the term.
fn sum_by_sequence(
    ctx: &Ctx,
    seq: &AdditionSequence,
    kind: ExponentKind,
    n: u64,
    slots: usize,
    classify: impl Fn(u64) -> Option<(usize, i8)>,
    ops: &mut OpCounts,
) -> Vec<ArbComplex> {
    let mut powers: HashMap<u64, ArbComplex> = HashMap::with_capacity(seq.len());
    for s in &seq.steps {
        let prec = ctx.prec(s.target);
        let v = match s.op {
            Step::Leaf => ctx.q.with_prec(prec),
            Step::Double { a } => powers[&a].sqr(prec, ops),
            Step::Add { a, b } => powers[&a].mul(&powers[&b], prec, ops),
            Step::DoubleAdd { a, b } => powers[&a].sqr(prec, ops).mul(&powers[&b], prec, ops),
            Step::Triple { a } => powers[&a].cube(prec, ops),
        };
        powers.insert(s.target, v);
    }
    let mut acc = vec![ArbComplex::zero(ctx.wp); slots];
    for i in 1..=n {
        let Some((slot, sign)) = classify(i) else {
            continue;
        };
        let e = exponent(kind, i);
        if e == 0 {
            acc[slot].add_unit(sign);
        } else {
            acc[slot].add_signed(&powers[&e], sign);
        }
    }
    acc
}

fn single_slot(sign: SignRule) -> impl Fn(u64) -> Option<(usize, i8)> {
    move |i| Some((0, sign.sign(i)))
}

/// `1 + 2 s`.
fn one_plus_twice(s: &ArbComplex, prec: u32) -> ArbComplex {
    let mut v = s.mul_2exp(1).with_prec(prec);
    v.add_unit(1);
    v
}

/// `e^(gamma / l)`.
fn root_of_q(gamma: &ArbComplex, l: u32, prec: u32) -> ArbComplex {
    let g = ArbComplex {
        re: Float::with_val(prec + 16, &gamma.re / l),
        im: Float::with_val(prec + 16, &gamma.im / l),
    };
    g.exp(prec)
}

/// `q` and `gamma = log q` for the function's convention.
fn q_and_gamma(req: &EvalRequest, wp: u32) -> Result<(ArbComplex, ArbComplex)> {
    match &req.input {
        Input::Tau(tau) => {
            let (gamma, q) = compute_q(tau, req.function.q_divisor(), wp)?;
            Ok((q, gamma))
        }
        Input::Q(q) => {
            let q = q.with_prec(wp.max(q.prec()));
            if q.is_zero() {
                return Ok((q, ArbComplex::zero(wp)));
            }
            Ok((q.clone(), q.ln(wp)))
        }
    }
}

fn optimized_or_err(kind: ExponentKind, n: u64) -> Result<AdditionSequence> {
    build_optimized(kind, n)
}

fn resolve_method(req: &EvalRequest, t: u64) -> Method {
    match req.method {
        Method::Auto if t < req.crossover => Method::Optimized,
        Method::Auto => Method::Bsgs,
        m => m,
    }
}

pub fn eval(req: &EvalRequest) -> Result<EvalReport> {
    let p = req.prec;
    if p < 8 {
        return Err(Error::PrecisionUnderflow(p));
    }
    let f = req.function;
    // q is needed before the guard bits are known; carry a generous margin.
    let (q, gamma) = q_and_gamma(req, p + 96)?;
    let t = truncation_order(p, q.log2_abs(), f.coefficient_bound())?;
    let method = resolve_method(req, t);
    let mut ops = OpCounts::default();
    let mut series = Vec::new();

    let kinds_for_n: Vec<ExponentKind> = match (f, method) {
        (Function::Eta, _) => vec![ExponentKind::Pentagonal],
        (Function::Theta0 | Function::Theta1, Method::Bsgs) => vec![ExponentKind::Square],
        (Function::Theta0 | Function::Theta1, _) => vec![ExponentKind::AlmostSquare],
        (Function::Theta2, _) => vec![ExponentKind::Trigonal],
        (Function::ThetaAll, Method::Optimized) => vec![ExponentKind::A182568],
        (Function::ThetaAll, Method::Bsgs) => vec![ExponentKind::Square, ExponentKind::Trigonal],
        (Function::ThetaAll, _) => vec![ExponentKind::AlmostSquare, ExponentKind::Trigonal],
    };
    let n_total: u64 = kinds_for_n.iter().map(|&k| truncation_count(k, t)).sum();
    let guard = guard_bits(n_total);
    let wp = p + guard;
    let ctx = Ctx {
        q: q.with_prec(wp),
        wp,
        guard,
        lambda: -q.log2_abs(),
        trick: req.precision_trick,
    };

    let info = |kind: ExponentKind, m: Option<u64>| {
        let n = truncation_count(kind, t);
        SeriesInfo {
            kind,
            t: if n == 0 { 0 } else { exponent(kind, n) },
            n,
            m,
        }
    };

    let as_seq = |kind: ExponentKind, n: u64| -> Result<AdditionSequence> {
        match method {
            Method::Classical => build_classical(kind, n),
            _ => optimized_or_err(kind, n),
        }
    };

    // Zero q: only the constant terms survive.
    let values: Vec<(String, ArbComplex)> = if q.is_zero() {
        let one = ArbComplex::one(p);
        let zero = ArbComplex::zero(p);
        let v = |x: &ArbComplex| x.clone();
        match f {
            Function::Eta => vec![("eta".into(), v(&zero))],
            Function::Theta0 | Function::Theta1 => vec![(f.name().into(), v(&one))],
            Function::Theta2 => vec![("theta2".into(), v(&zero))],
            Function::ThetaAll => {
                vec![
                    ("theta0".into(), v(&one)),
                    ("theta1".into(), v(&one)),
                    ("theta2".into(), v(&zero)),
                ]
            }
        }
    } else {
        match (f, method) {
            (Function::Eta, Method::Bsgs) => {
                let tab = table(ExponentKind::Pentagonal, &req.minima_dir)?;
                let pl = bsgs::plan(ExponentKind::Pentagonal, t, &tab, 1)?;
                series.push(info(ExponentKind::Pentagonal, Some(pl.m)));
                let s = bsgs::eval_shared(&[(&pl, SignRule::Pentagonal)], &ctx.q, p, &mut ops)?
                    .remove(0);
                vec![("eta".into(), eta_value(&s, &gamma, p))]
            }
            (Function::Eta, _) => {
                let kind = ExponentKind::Pentagonal;
                let n = truncation_count(kind, t);
                let seq = as_seq(kind, n)?;
                series.push(info(kind, None));
                let s = sum_by_sequence(
                    &ctx,
                    &seq,
                    kind,
                    n,
                    1,
                    single_slot(SignRule::Pentagonal),
                    &mut ops,
                )
                .remove(0);
                vec![("eta".into(), eta_value(&s, &gamma, p))]
            }
            (Function::Theta0 | Function::Theta1, Method::Bsgs) => {
                let sign = if f == Function::Theta0 {
                    SignRule::Plus
                } else {
                    SignRule::Alternating
                };
                let tab = table(ExponentKind::Square, &req.minima_dir)?;
                let pl = bsgs::plan(ExponentKind::Square, t, &tab, 1)?;
                series.push(info(ExponentKind::Square, Some(pl.m)));
                let s = bsgs::eval_shared(&[(&pl, sign)], &ctx.q, p, &mut ops)?.remove(0);
                vec![(f.name().into(), one_plus_twice(&s, p))]
            }
            (Function::Theta0 | Function::Theta1, _) => {
                let kind = ExponentKind::AlmostSquare;
                let n = truncation_count(kind, t);
                let seq = as_seq(kind, n)?;
                series.push(info(kind, None));
                let sign = if f == Function::Theta0 {
                    SignRule::Plus
                } else {
                    SignRule::Alternating
                };
                let s =
                    sum_by_sequence(&ctx, &seq, kind, n, 1, single_slot(sign), &mut ops).remove(0);
                let qs = s.mul_plain(&ctx.q, wp);
                vec![(f.name().into(), one_plus_twice(&qs, p))]
            }
            (Function::Theta2, Method::Bsgs) => {
                let tab = table(ExponentKind::Trigonal, &req.minima_dir)?;
                let pl = bsgs::plan(ExponentKind::Trigonal, t, &tab, 1)?;
                series.push(info(ExponentKind::Trigonal, Some(pl.m)));
                let s = bsgs::eval_shared(&[(&pl, SignRule::Plus)], &ctx.q, p, &mut ops)?.remove(0);
                vec![("theta2".into(), theta2_value(&s, &gamma, p))]
            }
            (Function::Theta2, _) => {
                let kind = ExponentKind::Trigonal;
                let n = truncation_count(kind, t);
                let seq = as_seq(kind, n)?;
                series.push(info(kind, None));
                let s = sum_by_sequence(
                    &ctx,
                    &seq,
                    kind,
                    n,
                    1,
                    single_slot(SignRule::Plus),
                    &mut ops,
                )
                .remove(0);
                vec![("theta2".into(), theta2_value(&s, &gamma, p))]
            }
            (Function::ThetaAll, Method::Optimized) => {
                let kind = ExponentKind::A182568;
                let n = truncation_count(kind, t);
                let seq = build_a182568(n);
                series.push(info(kind, None));
                // e_i = 2 floor(j^2 / 8) with j = i + 1: j = 0 mod 4 gives the even
                // squares, j = 2 mod 4 the odd squares minus one, odd j the trigonal numbers.
                let classify = |i: u64| {
                    let j = i + 1;
                    Some((
                        if j.is_multiple_of(4) {
                            0
                        } else if j % 4 == 2 {
                            1
                        } else {
                            2
                        },
                        1,
                    ))
                };
                let acc = sum_by_sequence(&ctx, &seq, kind, n, 3, classify, &mut ops);
                let qo = acc[1].mul_plain(&ctx.q, wp);
                let mut tri = acc[2].clone();
                tri.add_unit(1);
                vec![
                    ("theta0".into(), one_plus_twice(&acc[0].add(&qo, wp), p)),
                    ("theta1".into(), one_plus_twice(&acc[0].sub(&qo, wp), p)),
                    ("theta2".into(), theta2_value(&tri, &gamma, p)),
                ]
            }
            (Function::ThetaAll, Method::Bsgs) => {
                let sq_tab = table(ExponentKind::Square, &req.minima_dir)?;
                let tr_tab = table(ExponentKind::Trigonal, &req.minima_dir)?;
                // Each exponent kind gets its own modulus; two giant passes
                // share the squares modulus. The baby table covers both.
                let sq = bsgs::plan(ExponentKind::Square, t, &sq_tab, 1)?;
                let tr = bsgs::plan(ExponentKind::Trigonal, t, &tr_tab, 1)?;
                series.push(info(ExponentKind::Square, Some(sq.m)));
                series.push(info(ExponentKind::Trigonal, Some(tr.m)));
                let passes = [
                    (&sq, SignRule::Plus),
                    (&sq, SignRule::Alternating),
                    (&tr, SignRule::Plus),
                ];
                let s = bsgs::eval_shared(&passes, &ctx.q, p, &mut ops)?;
                vec![
                    ("theta0".into(), one_plus_twice(&s[0], p)),
                    ("theta1".into(), one_plus_twice(&s[1], p)),
                    ("theta2".into(), theta2_value(&s[2], &gamma, p)),
                ]
            }
            (Function::ThetaAll, _) => {
                let ka = ExponentKind::AlmostSquare;
                let na = truncation_count(ka, t);
                let seq = as_seq(ka, na)?;
                series.push(info(ka, None));
                let classify = |i: u64| Some((usize::from(i % 2 == 1), 1));
                // slot 0: even n, slot 1: odd n
                let acc = sum_by_sequence(&ctx, &seq, ka, na, 2, classify, &mut ops);
                let plus = acc[0].add(&acc[1], wp).mul_plain(&ctx.q, wp);
                let minus = acc[0].sub(&acc[1], wp).mul_plain(&ctx.q, wp);
                let kt = ExponentKind::Trigonal;
                let nt = truncation_count(kt, t);
                let seq = as_seq(kt, nt)?;
                series.push(info(kt, None));
                let s =
                    sum_by_sequence(&ctx, &seq, kt, nt, 1, single_slot(SignRule::Plus), &mut ops)
                        .remove(0);
                vec![
                    ("theta0".into(), one_plus_twice(&plus, p)),
                    ("theta1".into(), one_plus_twice(&minus, p)),
                    ("theta2".into(), theta2_value(&s, &gamma, p)),
                ]
            }
        }
    };
    if series.is_empty() {
        series = kinds_for_n.iter().map(|&k| info(k, None)).collect();
    }
    Ok(EvalReport {
        function: f,
        method,
        prec: p,
        t,
        n: series.iter().map(|s| s.n).sum(),
        series,
        values,
        counts: ops,
    })
}

fn eta_value(s: &ArbComplex, gamma: &ArbComplex, p: u32) -> ArbComplex {
    let wp = s.prec().max(p) + 8;
    root_of_q(gamma, 24, wp).mul_plain(s, wp).with_prec(p)
}

fn theta2_value(s: &ArbComplex, gamma: &ArbComplex, p: u32) -> ArbComplex {
    let wp = s.prec().max(p) + 8;
    root_of_q(gamma, 4, wp)
        .mul_plain(s, wp)
        .mul_2exp(1)
        .with_prec(p)
}

/// `z^e` by left-to-right binary powering at full precision.
fn pow_binary(z: &ArbComplex, e: u64, prec: u32) -> ArbComplex {
    let mut acc = ArbComplex::one(prec);
    for bit in (0..64 - e.leading_zeros()).rev() {
        acc = acc.mul_plain(&acc, prec);
        if (e >> bit) & 1 == 1 {
            acc = acc.mul_plain(z, prec);
        }
    }
    acc
}

/// Direct evaluation from the series definitions: every power by independent
/// binary powering at `p + 64` bits, no shared powers, no precision reduction.
/// Uses the same truncation order as [`eval`].
pub fn eval_naive_oracle(req: &EvalRequest) -> Result<Vec<(String, ArbComplex)>> {
    let p = req.prec;
    if p < 8 {
        return Err(Error::PrecisionUnderflow(p));
    }
    let wp = p + 64 + 32;
    let f = req.function;
    let (q, gamma) = q_and_gamma(req, wp)?;
    let t = truncation_order(p, q.log2_abs(), f.coefficient_bound())?;
    let q = q.with_prec(wp);
    let pow = |e: u64| {
        if e == 0 {
            ArbComplex::one(wp)
        } else {
            pow_binary(&q, e, wp)
        }
    };
    let theta_sum = |alternate: bool| {
        let mut s = ArbComplex::one(wp);
        let mut n = 1u64;
        while n * n <= t {
            let term = pow(n * n).mul_2exp(1);
            s.add_signed(&term, if alternate && n % 2 == 1 { -1 } else { 1 });
            n += 1;
        }
        s
    };
    let theta2 = || {
        let mut s = ArbComplex::zero(wp);
        let mut n = 0u64;
        while n * (n + 1) <= t {
            s.add_signed(&pow(n * (n + 1)), 1);
            n += 1;
        }
        let r = root_of_q(&gamma, 4, wp);
        r.mul_plain(&s, wp).mul_2exp(1).with_prec(p)
    };
    Ok(match f {
        Function::Eta => {
            let mut s = ArbComplex::zero(wp);
            let mut e_list: Vec<u64> = Vec::new();
            // all n in Z with n(3n-1)/2 <= t
            let mut n: i64 = 0;
            loop {
                let mut any = false;
                for m in if n == 0 { vec![0] } else { vec![n, -n] } {
                    let e = (m * (3 * m - 1) / 2) as u64;
                    if e <= t {
                        e_list.push(e);
                        any = true;
                    }
                }
                if !any {
                    break;
                }
                n += 1;
            }
            for e in e_list {
                s.add_signed(&pow(e), term_sign(e)?);
            }
            let r = root_of_q(&gamma, 24, wp);
            vec![("eta".into(), r.mul_plain(&s, wp).with_prec(p))]
        }
        Function::Theta0 => vec![("theta0".into(), theta_sum(false).with_prec(p))],
        Function::Theta1 => vec![("theta1".into(), theta_sum(true).with_prec(p))],
        Function::Theta2 => vec![("theta2".into(), theta2())],
        Function::ThetaAll => vec![
            ("theta0".into(), theta_sum(false).with_prec(p)),
            ("theta1".into(), theta_sum(true).with_prec(p)),
            ("theta2".into(), theta2()),
        ],
    })
}

/// The CM point `(-B + sqrt(D)) / (2A)` with `A = 1305`, `B = 1523`,
/// `D = B^2 - 4AC = -6961631`, used as the benchmark argument.
pub fn benchmark_tau(prec: u32) -> ArbComplex {
    let re = Float::with_val(prec, -1523) / 2610u32;
    let im = Float::with_val(prec, 6_961_631u32).sqrt() / 2610u32;
    ArbComplex { re, im }
}
