//! Abundance, exploitation exposure and exploit saturation.
//!
//! Abundance of a CWE class is its share of the vulnerabilities counted in a
//! corpus snapshot. Exposure multiplies that abundance by the deployment
//! share of the affected software and the probability of exploitation.
//! Saturation asks how few exploits, one per software stack, reach a target
//! fraction of deployed machines.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slack allowed when comparing sums of shares against a target, and when
/// checking that fractions sum to one.
pub const FRACTION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbundanceTable {
    #[serde(rename = "label")]
    pub snapshot_label: String,
    /// CWE id to fraction of the snapshot.
    pub entries: BTreeMap<u32, f64>,
}

impl AbundanceTable {
    pub fn get(&self, cwe: u32) -> Option<f64> {
        self.entries.get(&cwe).copied()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }
}

/// Normalises per-class counts into an abundance table.
pub fn compute_abundance(counts: &BTreeMap<u32, u64>) -> Result<AbundanceTable> {
    let total: u128 = counts.values().map(|&c| u128::from(c)).sum();
    if total == 0 {
        return Err(Error::Domain("abundance needs at least one positive count".into()));
    }
    let total = total as f64;
    let entries = counts
        .iter()
        .map(|(&cwe, &c)| (cwe, c as f64 / total))
        .collect();
    Ok(AbundanceTable {
        snapshot_label: String::new(),
        entries,
    })
}

/// `{"counts": {"121": 70, ...}, "label": "corpus@date"}`
#[derive(Clone, Debug, Deserialize)]
pub struct CountsInput {
    pub counts: BTreeMap<String, u64>,
    #[serde(default)]
    pub label: String,
}

impl CountsInput {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn abundance(&self) -> Result<AbundanceTable> {
        let mut counts = BTreeMap::new();
        for (key, &count) in &self.counts {
            let id: u32 = key
                .trim_start_matches("CWE-")
                .parse()
                .map_err(|_| Error::Domain(format!("{key:?} is not a CWE id")))?;
            *counts.entry(id).or_insert(0) += count;
        }
        let mut table = compute_abundance(&counts)?;
        table.snapshot_label = self.label.clone();
        Ok(table)
    }
}

fn check_fraction(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::Domain(format!("{name} = {x} is outside [0, 1]")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExposureInputs {
    /// Abundance of the vulnerability's CWE class.
    pub abundance: f64,
    /// Deployment share of the affected software.
    pub deployment: f64,
    pub p_exploit: f64,
}

/// `E(v, s) = A(t_v) · D(s) · P_exploit(v)`, a dimensionless index.
pub fn exposure(inputs: &ExposureInputs) -> Result<f64> {
    let a = check_fraction("abundance", inputs.abundance)?;
    let d = check_fraction("deployment", inputs.deployment)?;
    let p = check_fraction("p_exploit", inputs.p_exploit)?;
    Ok(a * d * p)
}

/// Deployment share per software stack.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
pub struct DeploymentProfile {
    shares: BTreeMap<String, f64>,
}

impl DeploymentProfile {
    pub fn new(shares: impl IntoIterator<Item = (String, f64)>) -> Result<Self> {
        let shares: BTreeMap<String, f64> = shares.into_iter().collect();
        for (id, &share) in &shares {
            check_fraction(&format!("share of {id}"), share)?;
        }
        Ok(DeploymentProfile { shares })
    }

    /// Parses `{"shares": {"name": 0.5, ...}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DeploymentProfile = serde_json::from_str(text)?;
        Self::new(raw.shares)
    }

    pub fn shares(&self) -> &BTreeMap<String, f64> {
        &self.shares
    }

    pub fn total(&self) -> f64 {
        self.shares.values().sum()
    }

    /// Shares may overlap across stacks, so a total above one is legal but
    /// worth flagging.
    pub fn exceeds_unity(&self) -> bool {
        self.total() > 1.0 + FRACTION_TOLERANCE
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Coverage {
    Reachable {
        count: usize,
        /// Largest shares first.
        selected: Vec<String>,
        covered: f64,
    },
    Unreachable {
        total: f64,
    },
}

impl Coverage {
    pub fn count(&self) -> Option<usize> {
        match self {
            Coverage::Reachable { count, .. } => Some(*count),
            Coverage::Unreachable { .. } => None,
        }
    }
}

/// Fewest stacks whose shares reach `target`, taking the largest first.
/// Equal shares are taken in lexicographic id order.
pub fn min_exploits_for_coverage(profile: &DeploymentProfile, target: f64) -> Result<Coverage> {
    check_fraction("target", target)?;
    let mut ranked: Vec<(&String, f64)> = profile.shares.iter().map(|(k, &v)| (k, v)).collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });

    let mut covered = 0.0;
    let mut selected = Vec::new();
    for (id, share) in ranked {
        if reaches(covered, target) {
            break;
        }
        covered += share;
        selected.push(id.clone());
    }
    if reaches(covered, target) {
        Ok(Coverage::Reachable {
            count: selected.len(),
            selected,
            covered,
        })
    } else {
        Ok(Coverage::Unreachable { total: covered })
    }
}

/// Whether `covered` meets `target` up to [`FRACTION_TOLERANCE`].
pub fn reaches(covered: f64, target: f64) -> bool {
    covered + FRACTION_TOLERANCE >= target
}

/// Share of published CVEs that are known to be exploited.
pub fn kev_ratio(exploited_count: u64, published_count: u64) -> Result<f64> {
    if published_count == 0 {
        return Err(Error::Domain("published count must be positive".into()));
    }
    if exploited_count > published_count {
        return Err(Error::Domain(format!(
            "exploited count {exploited_count} exceeds published count {published_count}"
        )));
    }
    Ok(exploited_count as f64 / published_count as f64)
}
