//! Addition sequences over exponent sets and their cost accounting.
//!
//! Exponent 0 never appears: `q^0 = 1` is free, so target sets hold only
//! the positive exponents.

mod build;
mod serial;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use build::{
    build, build_a182568, build_classical, build_optimized, build_quarter_square, complete_generic,
    decompose_step, Algorithm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Step {
    /// The base element 1.
    Leaf,
    Double {
        a: u64,
    },
    Add {
        a: u64,
        b: u64,
    },
    /// `2a + b`.
    DoubleAdd {
        a: u64,
        b: u64,
    },
    Triple {
        a: u64,
    },
}

impl Step {
    pub fn value(&self) -> Option<u64> {
        match *self {
            Step::Leaf => Some(1),
            Step::Double { a } => a.checked_mul(2),
            Step::Add { a, b } => a.checked_add(b),
            Step::DoubleAdd { a, b } => a.checked_mul(2).and_then(|d| d.checked_add(b)),
            Step::Triple { a } => a.checked_mul(3),
        }
    }

    pub fn operands(&self) -> Vec<u64> {
        match *self {
            Step::Leaf => vec![],
            Step::Double { a } | Step::Triple { a } => vec![a],
            Step::Add { a, b } | Step::DoubleAdd { a, b } => vec![a, b],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Step::Leaf => "leaf",
            Step::Double { .. } => "double",
            Step::Add { .. } => "add",
            Step::DoubleAdd { .. } => "double-add",
            Step::Triple { .. } => "triple",
        }
    }

    fn expression(&self) -> String {
        match *self {
            Step::Leaf => "1".into(),
            Step::Double { a } => format!("2·{a}"),
            Step::Add { a, b } => format!("{a}+{b}"),
            Step::DoubleAdd { a, b } => format!("2·{a}+{b}"),
            Step::Triple { a } => format!("3·{a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditionStep {
    pub target: u64,
    #[serde(flatten)]
    pub op: Step,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounts {
    pub leaf: u64,
    pub double: u64,
    pub add: u64,
    pub double_add: u64,
    pub triple: u64,
}

impl StepCounts {
    /// Non-leaf steps.
    pub fn total(&self) -> u64 {
        self.double + self.add + self.double_add + self.triple
    }

    /// Complex multiplications and squarings executed by these steps.
    /// A triple is one squaring-based cube and is reported under neither.
    pub fn complex_ops(&self) -> (u64, u64) {
        (self.add + self.double_add, self.double + self.double_add)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditionSequence {
    pub steps: Vec<AdditionStep>,
    /// Positive exponents the sequence must produce, ascending.
    pub targets: Vec<u64>,
}

impl AdditionSequence {
    pub fn new(steps: Vec<AdditionStep>, targets: Vec<u64>) -> Self {
        AdditionSequence { steps, targets }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.steps.iter().map(|s| s.target)
    }

    pub fn counts(&self) -> StepCounts {
        let mut c = StepCounts::default();
        for s in &self.steps {
            match s.op {
                Step::Leaf => c.leaf += 1,
                Step::Double { .. } => c.double += 1,
                Step::Add { .. } => c.add += 1,
                Step::DoubleAdd { .. } => c.double_add += 1,
                Step::Triple { .. } => c.triple += 1,
            }
        }
        c
    }

    /// Elements that are not targets.
    pub fn helpers(&self) -> Vec<u64> {
        let targets: HashSet<u64> = self.targets.iter().copied().collect();
        self.values()
            .filter(|v| *v != 1 && !targets.contains(v))
            .collect()
    }

    /// Checks arithmetic, ordering, the base element and target coverage.
    pub fn validate(&self) -> Result<(), Violation> {
        let mut seen = HashSet::with_capacity(self.steps.len());
        let mut has_base = false;
        for (idx, s) in self.steps.iter().enumerate() {
            if s.op == Step::Leaf {
                if s.target != 1 {
                    return Err(Violation::LeafNotBase {
                        index: idx,
                        target: s.target,
                    });
                }
                has_base = true;
            } else if s.op.value() != Some(s.target) {
                return Err(Violation::Arithmetic {
                    index: idx,
                    step: *s,
                });
            }
            for a in s.op.operands() {
                if !seen.contains(&a) {
                    return Err(Violation::OperandNotEarlier {
                        index: idx,
                        target: s.target,
                        operand: a,
                    });
                }
            }
            if !seen.insert(s.target) {
                return Err(Violation::Duplicate { target: s.target });
            }
        }
        if !has_base {
            return Err(Violation::MissingBase);
        }
        if let Some(&t) = self.targets.iter().find(|t| !seen.contains(t)) {
            return Err(Violation::MissingTarget(t));
        }
        Ok(())
    }

    /// Total cost in units of one real multiplication.
    pub fn cost(&self, model: CostModel) -> f64 {
        self.steps.iter().map(|s| model.step_cost(&s.op)).sum()
    }

    /// Complex-operation cost per term in the FFT model, normalized so that
    /// one complex multiplication per term scores 1.
    pub fn normalized_cost(&self, n: u64) -> f64 {
        self.cost(CostModel::FFT) / (3.0 * n as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingBase,
    LeafNotBase {
        index: usize,
        target: u64,
    },
    Arithmetic {
        index: usize,
        step: AdditionStep,
    },
    OperandNotEarlier {
        index: usize,
        target: u64,
        operand: u64,
    },
    Duplicate {
        target: u64,
    },
    MissingTarget(u64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingBase => write!(f, "sequence does not contain 1"),
            Violation::LeafNotBase { index, target } => {
                write!(f, "step {index}: leaf {target} is not the base 1")
            }
            Violation::Arithmetic { step, .. } => {
                write!(f, "{} ≠ {}", step.target, step.op.expression())
            }
            Violation::OperandNotEarlier {
                index,
                target,
                operand,
            } => {
                write!(
                    f,
                    "step {index}: operand {operand} of {target} is not an earlier element"
                )
            }
            Violation::Duplicate { target } => write!(f, "{target} appears twice"),
            Violation::MissingTarget(t) => write!(f, "target {t} is not produced"),
        }
    }
}

impl std::error::Error for Violation {}

/// Real-operation costs in units of one real multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub mul: f64,
    pub sqr: f64,
}

impl CostModel {
    pub const FFT: CostModel = CostModel {
        mul: 1.0,
        sqr: 2.0 / 3.0,
    };
    pub const SCHOOLBOOK: CostModel = CostModel { mul: 1.0, sqr: 0.5 };

    pub fn double(&self) -> f64 {
        2.0 * self.sqr + self.mul
    }

    pub fn add(&self) -> f64 {
        3.0 * self.mul
    }

    pub fn triple(&self) -> f64 {
        2.0 * self.sqr + 2.0 * self.mul
    }

    pub fn quadruple(&self) -> f64 {
        4.0 * self.sqr + 2.0 * self.mul
    }

    pub fn double_add(&self) -> f64 {
        2.0 * self.sqr + 4.0 * self.mul
    }

    pub fn step_cost(&self, step: &Step) -> f64 {
        match step {
            Step::Leaf => 0.0,
            Step::Double { .. } => self.double(),
            Step::Add { .. } => self.add(),
            Step::DoubleAdd { .. } => self.double_add(),
            Step::Triple { .. } => self.triple(),
        }
    }
}

impl std::str::FromStr for CostModel {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "fft" => Ok(CostModel::FFT),
            "schoolbook" => Ok(CostModel::SCHOOLBOOK),
            _ => Err(crate::Error::Invalid(format!("unknown cost model `{s}`"))),
        }
    }
}

pub(crate) fn sorted_set(values: impl IntoIterator<Item = u64>) -> BTreeSet<u64> {
    values.into_iter().filter(|&v| v > 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(steps: &[(u64, Step)], targets: &[u64]) -> AdditionSequence {
        AdditionSequence::new(
            steps
                .iter()
                .map(|&(target, op)| AdditionStep { target, op })
                .collect(),
            targets.to_vec(),
        )
    }

    #[test]
    fn arithmetic_violation_message() {
        let s = seq(
            &[
                (1, Step::Leaf),
                (2, Step::Double { a: 1 }),
                (3, Step::Add { a: 2, b: 1 }),
                (5, Step::Add { a: 3, b: 2 }),
                (9, Step::Add { a: 3, b: 5 }),
            ],
            &[9],
        );
        assert_eq!(s.validate().unwrap_err().to_string(), "9 ≠ 3+5");
    }

    #[test]
    fn missing_base() {
        let s = seq(&[], &[]);
        assert_eq!(s.validate(), Err(Violation::MissingBase));
        let s = seq(&[(2, Step::Leaf)], &[]);
        assert!(matches!(s.validate(), Err(Violation::LeafNotBase { .. })));
    }

    #[test]
    fn operand_order() {
        let s = seq(
            &[
                (1, Step::Leaf),
                (4, Step::Double { a: 2 }),
                (2, Step::Double { a: 1 }),
            ],
            &[4],
        );
        assert!(matches!(
            s.validate(),
            Err(Violation::OperandNotEarlier { operand: 2, .. })
        ));
    }

    #[test]
    fn table_costs() {
        let fft = CostModel::FFT;
        assert!((fft.double() - 7.0 / 3.0).abs() < 1e-12);
        assert_eq!(fft.add(), 3.0);
        assert_eq!(CostModel::SCHOOLBOOK.add(), 3.0);
        assert!((fft.triple() - 10.0 / 3.0).abs() < 1e-12);
        assert!((fft.quadruple() - 14.0 / 3.0).abs() < 1e-12);
        assert!((fft.double_add() - 16.0 / 3.0).abs() < 1e-12);
        let d = seq(&[(1, Step::Leaf), (2, Step::Double { a: 1 })], &[2]);
        assert!((d.cost(fft) - 2.333).abs() < 1e-3);
        let t = seq(
            &[
                (1, Step::Leaf),
                (2, Step::Double { a: 1 }),
                (3, Step::Add { a: 2, b: 1 }),
            ],
            &[3],
        );
        assert_eq!(t.cost(fft) - d.cost(fft), 3.0);
    }
}
