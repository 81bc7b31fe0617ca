//! Input documents.
//!
//! Every command except `limit`, `demo` and `selftest` reads one
//! [`ProblemDescription`]:
//!
//! ```json
//! {
//!   "group": {"factors": [4]},
//!   "lambda_generators": [[2]],
//!   "signals": {"d0": [[1,0],[0,0],[0,0],[0,0]]},
//!   "generators": ["d0"],
//!   "other_generators": [[[0,0],[1,0],[0,0],[0,0]]],
//!   "candidates": ["d0"],
//!   "support": [[0], [3]],
//!   "measure": "normalized",
//!   "tolerance": 1e-9
//! }
//! ```
//!
//! A signal reference is either a name from `signals` or an inline array of
//! `[re, im]` pairs. `limit` reads a JSON array of space descriptions
//! `{"group", "lambda_generators", "generators"}`.

use std::collections::BTreeMap;

use modspace::io::{self, ElementJson, GroupJson, SignalJson, SpaceDescription};
use modspace::{FiberContext, Measure, Side, Signal};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalRef {
    Name(String),
    Inline(SignalJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDescription {
    pub group: GroupJson,
    #[serde(default)]
    pub lambda_generators: Vec<ElementJson>,
    #[serde(default)]
    pub signals: BTreeMap<String, SignalJson>,
    #[serde(default)]
    pub generators: Vec<SignalRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_generators: Option<Vec<SignalRef>>,
    #[serde(default)]
    pub candidates: Vec<SignalRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<ElementJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Measure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// Deserializes with a path-qualified message on failure, e.g.
/// `signals.d0[2]: invalid type`.
pub fn parse<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::validation(format!("{path}: {}", e.inner()))
    })
}

pub fn parse_problem(text: &str) -> CliResult<ProblemDescription> {
    parse(text)
}

pub fn parse_sequence(text: &str) -> CliResult<Vec<SpaceDescription>> {
    parse(text)
}

/// A signal resolved against the named map, with a label for reports.
#[derive(Clone, Debug)]
pub struct Named {
    pub label: String,
    pub signal: Signal,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub description: ProblemDescription,
    pub ctx: FiberContext,
}

impl Problem {
    pub fn new(description: ProblemDescription) -> CliResult<Self> {
        let group = description
            .group
            .build()
            .map_err(|e| CliError::validation(format!("group: {e}")))?;
        let gens = io::elements_to_indices(&group, &description.lambda_generators)
            .map_err(|e| CliError::validation(format!("lambda_generators: {e}")))?;
        let ctx = FiberContext::from_generators(&group, &gens)?;
        if let Some(t) = description.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::validation(format!("tolerance: must be positive, got {t}")));
            }
        }
        let problem = Self { description, ctx };
        // resolve every named signal once so errors surface regardless of command
        for name in problem.description.signals.keys() {
            problem.resolve(&SignalRef::Name(name.clone()), &format!("signals.{name}"))?;
        }
        Ok(problem)
    }

    fn resolve(&self, r: &SignalRef, field: &str) -> CliResult<Named> {
        let (label, values) = match r {
            SignalRef::Name(n) => {
                let v = self
                    .description
                    .signals
                    .get(n)
                    .ok_or_else(|| CliError::validation(format!("{field}: unknown signal `{n}`")))?;
                (n.clone(), v)
            }
            SignalRef::Inline(v) => (String::new(), v),
        };
        let signal = io::signal_from_json(self.ctx.group(), Side::Primal, values)
            .map_err(|e| CliError::validation(format!("{field}: {e}")))?;
        Ok(Named { label, signal })
    }

    fn resolve_list(&self, refs: &[SignalRef], field: &str) -> CliResult<Vec<Named>> {
        refs.iter()
            .enumerate()
            .map(|(i, r)| {
                let mut n = self.resolve(r, &format!("{field}[{i}]"))?;
                if n.label.is_empty() {
                    n.label = format!("{field}[{i}]");
                }
                Ok(n)
            })
            .collect()
    }

    pub fn generators(&self) -> CliResult<Vec<Signal>> {
        Ok(self
            .resolve_list(&self.description.generators, "generators")?
            .into_iter()
            .map(|n| n.signal)
            .collect())
    }

    pub fn other_generators(&self) -> CliResult<Vec<Signal>> {
        let refs = self
            .description
            .other_generators
            .as_ref()
            .ok_or_else(|| CliError::validation("other_generators: required by this command"))?;
        Ok(self
            .resolve_list(refs, "other_generators")?
            .into_iter()
            .map(|n| n.signal)
            .collect())
    }

    pub fn candidates(&self) -> CliResult<Vec<Named>> {
        self.resolve_list(&self.description.candidates, "candidates")
    }

    pub fn support(&self) -> CliResult<Option<Vec<usize>>> {
        self.description
            .support
            .as_ref()
            .map(|s| {
                io::elements_to_indices(self.ctx.group(), s).map_err(|e| CliError::validation(format!("support: {e}")))
            })
            .transpose()
    }
}
