//! Line format: one step per line, `target kind a [b]`.
//! A `# targets: ...` header line carries the target set.

use std::fmt::Write as _;

use super::{AdditionSequence, AdditionStep, Step};
use crate::error::{Error, Result};

impl AdditionSequence {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let targets: Vec<String> = self.targets.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "# targets: {}", targets.join(" "));
        for s in &self.steps {
            let _ = write!(out, "{} {}", s.target, s.op.name());
            for a in s.op.operands() {
                let _ = write!(out, " {a}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        let mut targets = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            if let Some(rest) = line.strip_prefix("# targets:") {
                let t: std::result::Result<Vec<u64>, _> =
                    rest.split_whitespace().map(str::parse).collect();
                targets = Some(t.map_err(|e| err(e.to_string()))?);
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |j: usize| -> Result<u64> {
                fields
                    .get(j)
                    .ok_or_else(|| err(format!("missing field {}", j + 1)))?
                    .parse()
                    .map_err(|e: std::num::ParseIntError| err(e.to_string()))
            };
            let target = num(0)?;
            let kind = *fields
                .get(1)
                .ok_or_else(|| err("missing step kind".into()))?;
            let (op, arity) = match kind {
                "leaf" => (Step::Leaf, 0),
                "double" => (Step::Double { a: num(2)? }, 1),
                "triple" => (Step::Triple { a: num(2)? }, 1),
                "add" => (
                    Step::Add {
                        a: num(2)?,
                        b: num(3)?,
                    },
                    2,
                ),
                "double-add" => (
                    Step::DoubleAdd {
                        a: num(2)?,
                        b: num(3)?,
                    },
                    2,
                ),
                other => return Err(err(format!("unknown step kind `{other}`"))),
            };
            if fields.len() != 2 + arity {
                return Err(err(format!(
                    "expected {} fields, found {}",
                    2 + arity,
                    fields.len()
                )));
            }
            steps.push(AdditionStep { target, op });
        }
        let targets = targets.unwrap_or_else(|| steps.iter().map(|s| s.target).collect());
        Ok(AdditionSequence::new(steps, targets))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}
