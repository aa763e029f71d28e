//! Counting the factory's output.
//!
//! After `k` executions the active set holds the eleven base entries plus five
//! per generated module, `11 + 5k`. Everything here is exact arithmetic on
//! [`BigUint`].

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::factory::{ComponentId, CweClass, Params, VulnId, Vulnerability, BASE_COMPONENT};
use crate::{Error, Result};

pub const BASE_COUNT: u32 = 11;
pub const PER_MODULE: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub k: BigUint,
    pub base_count: u32,
    pub per_module: u32,
    pub total: BigUint,
}

impl CensusReport {
    pub fn after(k: BigUint) -> Self {
        CensusReport {
            total: total_after(&k),
            k,
            base_count: BASE_COUNT,
            per_module: PER_MODULE,
        }
    }

    /// Vulnerabilities contributed by generated modules.
    pub fn generated(&self) -> BigUint {
        &self.k * self.per_module
    }
}

impl Serialize for CensusReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            k: serde_json::Number,
            base: u32,
            generated: serde_json::Number,
            total: serde_json::Number,
        }
        Wire {
            k: crate::json::number(&self.k),
            base: self.base_count,
            generated: crate::json::number(&self.generated()),
            total: crate::json::number(&self.total),
        }
        .serialize(s)
    }
}

pub fn total_after(k: &BigUint) -> BigUint {
    k * PER_MODULE + BASE_COUNT
}

/// Smallest `k` with `11 + 5k > bound`.
pub fn min_iterations_exceeding(bound: &BigUint) -> BigUint {
    let base = BigUint::from(BASE_COUNT);
    if *bound < base {
        return BigUint::zero();
    }
    (bound - base) / PER_MODULE + 1u32
}

/// Two tuples are distinct when their components or parameter sets differ.
pub fn is_distinct(a: &Vulnerability, b: &Vulnerability) -> bool {
    a.component != b.component || a.params != b.params
}

/// Outcome of the three CVE-assignability criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AssignabilityVerdict {
    /// The class is one of the eleven catalogued CWEs.
    pub recognized_cwe: bool,
    pub identifiable_component: bool,
    /// The weakness lives in a file no other component shares.
    pub independently_fixable: bool,
    pub assignable: bool,
}

pub fn is_cve_assignable(v: &Vulnerability) -> AssignabilityVerdict {
    let recognized_cwe = CweClass::BASE_ORDER.contains(&v.cwe);
    let identifiable_component = is_well_formed_component(&v.component);
    let independently_fixable = identifiable_component && owns_its_file(v);
    AssignabilityVerdict {
        recognized_cwe,
        identifiable_component,
        independently_fixable,
        assignable: recognized_cwe && identifiable_component && independently_fixable,
    }
}

fn is_well_formed_component(c: &ComponentId) -> bool {
    let s = c.as_str();
    let mut chars = s.chars();
    match chars.next() {
        Some(first) if first.is_ascii_alphabetic() || first == '_' => {
            chars.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
        }
        _ => false,
    }
}

// A generated weakness is fixable alone when its component is exactly the
// module named by its id: that file belongs to no other module. Base entries
// live in the base file, which no generated module shares.
fn owns_its_file(v: &Vulnerability) -> bool {
    match (&v.id, &v.params) {
        (VulnId::Base { index }, Params::Base { function }) => {
            v.component.as_str() == BASE_COMPONENT && index == function
        }
        (VulnId::Generated { module, template }, Params::Generated { module: set, site }) => {
            v.component.module_index().as_ref() == Some(module)
                && &set.n == module
                && set.site(*template).as_ref() == Some(site)
        }
        _ => false,
    }
}

/// `f(n, i) = v_{n,i}`.
pub fn enumerate(n: &BigUint, template: u8) -> Result<VulnId> {
    if !(1..=5).contains(&template) {
        return Err(Error::Domain(format!("template index {template} is outside 1..=5")));
    }
    Ok(VulnId::Generated {
        module: n.clone(),
        template,
    })
}

pub fn enumerate_inverse(id: &VulnId) -> Result<(BigUint, u8)> {
    match id {
        VulnId::Generated { module, template } if (1..=5).contains(template) => {
            Ok((module.clone(), *template))
        }
        VulnId::Generated { template, .. } => Err(Error::Domain(format!(
            "template index {template} is outside 1..=5"
        ))),
        VulnId::Base { .. } => Err(Error::Domain(format!(
            "{id} is a base entry and has no preimage"
        ))),
    }
}

/// Template columns a reviewer has struck out, plus a count of individually
/// removed vulnerabilities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvalidationSet {
    columns: BTreeSet<u8>,
    pub finite_instances: BigUint,
}

impl InvalidationSet {
    pub fn new(columns: impl IntoIterator<Item = u8>, finite_instances: impl Into<BigUint>) -> Result<Self> {
        let columns: BTreeSet<u8> = columns.into_iter().collect();
        if let Some(bad) = columns.iter().find(|c| !(1..=5).contains(*c)) {
            return Err(Error::Domain(format!("column {bad} is outside 1..=5")));
        }
        Ok(InvalidationSet {
            columns,
            finite_instances: finite_instances.into(),
        })
    }

    pub fn columns(&self) -> &BTreeSet<u8> {
        &self.columns
    }

    /// Templates still producing per module.
    pub fn surviving_columns(&self) -> u32 {
        PER_MODULE - self.columns.len() as u32
    }
}

/// `max(0, (5 - |I|)·k + 11 - s)`.
pub fn surviving_growth(inv: &InvalidationSet, k: &BigUint) -> BigUint {
    let kept = k * inv.surviving_columns() + BASE_COUNT;
    if kept > inv.finite_instances {
        kept - &inv.finite_instances
    } else {
        BigUint::zero()
    }
}

/// Whether the surviving count still diverges. Finite removals never matter.
pub fn is_unbounded(inv: &InvalidationSet) -> bool {
    inv.surviving_columns() > 0
}

/// Smallest `k` with `surviving_growth(inv, k) > bound`, if one exists.
pub fn iterations_to_exceed(inv: &InvalidationSet, bound: &BigUint) -> Option<BigUint> {
    let rate = inv.surviving_columns();
    let deficit = bound + &inv.finite_instances;
    let base = BigUint::from(BASE_COUNT);
    if deficit < base {
        return Some(BigUint::zero());
    }
    if rate == 0 {
        return None;
    }
    Some((deficit - base) / rate + 1u32)
}
