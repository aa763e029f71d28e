//! The operations behind each `vuln-factory` subcommand, producing JSON.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::abundance::{self, CountsInput, DeploymentProfile, ExposureInputs};
use crate::model_check;
use crate::scanner;
use crate::tm::{self, Scientific, TmState};
use crate::workspace::{GenerateError, Workspace};
use crate::{Error, Result};

/// Structured result plus diagnostics meant for standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub json: Value,
    pub warnings: Vec<String>,
}

impl From<Value> for Output {
    fn from(json: Value) -> Self {
        Output {
            json,
            warnings: Vec::new(),
        }
    }
}

/// Failure as reported on the command line.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    /// Modules written before a generate run stopped.
    pub written: Vec<PathBuf>,
}

impl Failure {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "error": self.error.kind(),
            "message": self.error.to_string(),
        });
        if !self.written.is_empty() {
            v["written"] = json!(self.written);
        }
        v
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            error,
            written: Vec::new(),
        }
    }
}

impl From<GenerateError> for Failure {
    fn from(e: GenerateError) -> Self {
        Failure {
            error: e.source,
            written: e.written,
        }
    }
}

pub fn generate(ws: &Workspace, count: u64) -> Result<Output, Failure> {
    let paths = ws.generate(count)?;
    let counter = ws.counter().read()?;
    Ok(json!({
        "generated": paths,
        "counter": crate::json::number(&counter),
    })
    .into())
}

pub fn census(ws: &Workspace) -> Result<Output> {
    let c = ws.census()?;
    Ok(Output {
        json: serde_json::to_value(&c.report)?,
        warnings: c.warning.into_iter().collect(),
    })
}

pub fn check(bound: &BigUint) -> Result<Output> {
    Ok(serde_json::to_value(model_check::check_bound(bound))?.into())
}

pub fn scan(path: &Path) -> Result<Output> {
    let source = fs::read_to_string(path).map_err(|e| Error::persistence(path, e))?;
    Ok(serde_json::to_value(scanner::scan_module(&source)?)?.into())
}

pub fn abundance(input: &Path) -> Result<Output> {
    let text = fs::read_to_string(input).map_err(|e| Error::persistence(input, e))?;
    let table = CountsInput::from_json(&text)?.abundance()?;
    Ok(serde_json::to_value(table)?.into())
}

pub fn exposure(inputs: ExposureInputs) -> Result<Output> {
    let e = abundance::exposure(&inputs)?;
    Ok(json!({
        "abundance": inputs.abundance,
        "deployment": inputs.deployment,
        "p_exploit": inputs.p_exploit,
        "exposure": e,
    })
    .into())
}

pub fn saturate(input: &Path, target: f64) -> Result<Output> {
    let text = fs::read_to_string(input).map_err(|e| Error::persistence(input, e))?;
    let profile = DeploymentProfile::from_json(&text)?;
    let mut warnings = Vec::new();
    if profile.exceeds_unity() {
        warnings.push(format!(
            "deployment shares sum to {}, above 1; stacks overlap",
            profile.total()
        ));
    }
    let coverage = abundance::min_exploits_for_coverage(&profile, target)?;
    let mut json = serde_json::to_value(coverage)?;
    json["target"] = json!(target);
    Ok(Output { json, warnings })
}

pub fn tm_run(invocations: u64) -> Result<Output> {
    let mut state = TmState::fresh();
    let mut emissions = Vec::new();
    let mut steps = 0u64;
    for _ in 0..invocations {
        let inv = tm::run_invocation(&state);
        debug_assert!(inv.halted);
        steps += inv.steps;
        emissions.push(inv.emission.dump());
        state = inv.next;
    }
    Ok(json!({
        "invocations": invocations,
        "emissions": emissions,
        "counter_tape": state.counter_tape(),
        "steps": steps,
    })
    .into())
}

pub fn fermi(num_cwes: u32) -> Result<Output> {
    let count = tm::fermi_factory_count(num_cwes)?;
    let sci = Scientific::of(&count);
    Ok(json!({
        "num_cwes": num_cwes,
        "value": crate::json::number(&count),
        "digits": sci.digits,
        "scientific": sci.to_string(),
    })
    .into())
}

pub fn reset(ws: &Workspace) -> Result<Output> {
    ws.reset()?;
    Ok(json!({ "reset": true }).into())
}
