//! Explicit-state bounded checking of `AG(|V| <= C)` on the factory's
//! transition system.
//!
//! States are `(k, count)` with `s0 = (0, 11)` and the single transition
//! `(k, c) -> (k + 1, c + 5)`. Every finite bound is eventually exceeded, so
//! the checker always returns a counterexample: the path from `s0` to the
//! first state whose count is above the bound.

use num_bigint::BigUint;
use serde::Serialize;

use crate::census::{self, BASE_COUNT, PER_MODULE};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TsState {
    #[serde(serialize_with = "crate::json::biguint")]
    pub k: BigUint,
    #[serde(serialize_with = "crate::json::biguint")]
    pub count: BigUint,
}

impl TsState {
    pub fn initial() -> Self {
        TsState {
            k: BigUint::ZERO,
            count: BigUint::from(BASE_COUNT),
        }
    }

    pub fn successor(&self) -> Self {
        TsState {
            k: &self.k + 1u32,
            count: &self.count + PER_MODULE,
        }
    }

    pub fn satisfies(&self, bound: &BigUint) -> bool {
        self.count <= *bound
    }

    fn is_successor_of(&self, prev: &TsState) -> bool {
        *self == prev.successor()
    }
}

/// States visited, `s0` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    states: Vec<TsState>,
}

impl Trace {
    pub fn states(&self) -> &[TsState] {
        &self.states
    }

    /// Number of states.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&TsState> {
        self.states.last()
    }

    /// Replays the trace against the transition relation.
    pub fn is_valid(&self) -> bool {
        self.states.first() == Some(&TsState::initial())
            && self.states.windows(2).all(|w| w[1].is_successor_of(&w[0]))
            && self.states.iter().all(|s| s.count == census::total_after(&s.k))
    }

    /// The last state violates the bound and no earlier state does.
    pub fn is_minimal_witness(&self, bound: &BigUint) -> bool {
        match self.states.split_last() {
            Some((last, prefix)) => !last.satisfies(bound) && prefix.iter().all(|s| s.satisfies(bound)),
            None => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub bound: BigUint,
    pub violated: bool,
    pub trace: Trace,
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            bound: serde_json::Number,
            violated: bool,
            trace_length: usize,
            final_state: Option<&'a TsState>,
        }
        Wire {
            bound: crate::json::number(&self.bound),
            violated: self.violated,
            trace_length: self.trace.len(),
            final_state: self.trace.last(),
        }
        .serialize(s)
    }
}

/// Walks the system from `s0` until the bound is exceeded.
pub fn check_bound(bound: &BigUint) -> Verdict {
    let mut states = vec![TsState::initial()];
    loop {
        let current = states.last().expect("trace starts non-empty");
        if !current.satisfies(bound) {
            break;
        }
        let next = current.successor();
        states.push(next);
    }
    Verdict {
        bound: bound.clone(),
        violated: true,
        trace: Trace { states },
    }
}

/// Length, in states, of the shortest counterexample for `bound`.
pub fn counterexample_length(bound: &BigUint) -> BigUint {
    census::min_iterations_exceeding(bound) + 1u32
}
