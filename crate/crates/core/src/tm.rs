//! A small-step Turing-machine model of one factory invocation.
//!
//! The machine owns a persistent counter tape holding `n` in binary (most
//! significant bit first) and an output tape. An invocation runs
//! read, generate, increment, then halts in the accepting state; the `k`-th
//! invocation from a fresh tape therefore emits `S_{k-1}`. Emitted
//! descriptions wrap the rendered module text: abstract tapes have no fixed
//! buffers to overflow, so `S_n` describes the weaknesses rather than
//! executing them.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::factory::render_module;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symbol {
    Blank,
    Zero,
    One,
}

/// Control states of the factory machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    /// Sweep right over the counter, decoding `n`.
    Read,
    /// Write `S_n` to the output tape, one symbol per step.
    Generate,
    /// Carry-propagating `+1`, moving left from the last digit.
    Increment,
    Accept,
}

/// Contents of the counter tape between invocations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TmState {
    counter_tape: String,
}

impl TmState {
    /// Counter tape holding `0`.
    pub fn fresh() -> Self {
        TmState {
            counter_tape: "0".to_owned(),
        }
    }

    /// Accepts any non-empty binary string and stores it canonically.
    pub fn from_tape(tape: &str) -> Result<Self> {
        let value = decode(tape)?;
        Ok(Self::from_value(&value))
    }

    pub fn from_value(n: &BigUint) -> Self {
        TmState {
            counter_tape: encode(n),
        }
    }

    pub fn counter_tape(&self) -> &str {
        &self.counter_tape
    }

    /// Value on the counter tape, i.e. invocations so far from a fresh tape.
    pub fn invocation_count(&self) -> BigUint {
        decode(&self.counter_tape).expect("state tapes are canonical binary")
    }
}

impl Default for TmState {
    fn default() -> Self {
        Self::fresh()
    }
}

/// The machine description `S_n` written during one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emission {
    pub n: BigUint,
    pub description: String,
}

impl Emission {
    pub fn dump(&self) -> EmissionDump {
        EmissionDump {
            n: self.n.clone(),
            description_hash: hex::encode(Sha256::digest(self.description.as_bytes())),
            description_len: self.description.len(),
        }
    }
}

/// Summary of an emission for JSON output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmissionDump {
    #[serde(serialize_with = "crate::json::biguint")]
    pub n: BigUint,
    pub description_hash: String,
    pub description_len: usize,
}

/// `S_n`: the module text for `n` inside a descriptive wrapper.
pub fn describe(n: &BigUint) -> String {
    let module = render_module(n.clone());
    let mut out = String::with_capacity(module.source.len() + 160);
    out.push_str(&format!("; S_{n}: machine description emitted for counter value {n}\n"));
    out.push_str("; weakness patterns parameterised by n; a description, not a tape program\n");
    out.push_str(&module.source);
    out.push_str(&format!("; end S_{n}\n"));
    out
}

/// Everything observed during one invocation.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub emission: Emission,
    pub next: TmState,
    /// Transitions taken until the accepting state.
    pub steps: u64,
    pub halted: bool,
}

/// Counter tape with a head; grows at either end on demand.
struct Tape {
    cells: Vec<Symbol>,
    head: usize,
}

impl Tape {
    fn from_binary(bits: &str) -> Self {
        let cells = bits
            .bytes()
            .map(|b| if b == b'1' { Symbol::One } else { Symbol::Zero })
            .collect();
        Tape { cells, head: 0 }
    }

    fn read(&self) -> Symbol {
        self.cells.get(self.head).copied().unwrap_or(Symbol::Blank)
    }

    fn write(&mut self, s: Symbol) {
        if self.head >= self.cells.len() {
            self.cells.resize(self.head + 1, Symbol::Blank);
        }
        self.cells[self.head] = s;
    }

    fn left(&mut self) {
        if self.head == 0 {
            self.cells.insert(0, Symbol::Blank);
        } else {
            self.head -= 1;
        }
    }

    fn right(&mut self) {
        self.head += 1;
    }

    /// Non-blank contents without leading zeros.
    fn canonical(&self) -> String {
        let bits: String = self
            .cells
            .iter()
            .filter_map(|s| match s {
                Symbol::Zero => Some('0'),
                Symbol::One => Some('1'),
                Symbol::Blank => None,
            })
            .collect();
        match bits.trim_start_matches('0') {
            "" => "0".to_owned(),
            rest => rest.to_owned(),
        }
    }
}

struct Machine {
    control: Control,
    counter: Tape,
    decoded: BigUint,
    output: Vec<u8>,
    pending: Vec<u8>,
    emit: bool,
    steps: u64,
}

impl Machine {
    fn new(tape: &str, emit: bool) -> Self {
        Machine {
            control: Control::Read,
            counter: Tape::from_binary(tape),
            decoded: BigUint::zero(),
            output: Vec::new(),
            pending: Vec::new(),
            emit,
            steps: 0,
        }
    }

    fn step(&mut self) {
        self.steps += 1;
        match self.control {
            Control::Read => match self.counter.read() {
                Symbol::Zero => {
                    self.decoded <<= 1;
                    self.counter.right();
                }
                Symbol::One => {
                    self.decoded <<= 1;
                    self.decoded += 1u32;
                    self.counter.right();
                }
                Symbol::Blank => {
                    self.counter.left();
                    if self.emit {
                        let mut text = describe(&self.decoded).into_bytes();
                        text.reverse();
                        self.pending = text;
                    }
                    self.control = Control::Generate;
                }
            },
            Control::Generate => match self.pending.pop() {
                Some(byte) => self.output.push(byte),
                None => self.control = Control::Increment,
            },
            Control::Increment => match self.counter.read() {
                Symbol::One => {
                    self.counter.write(Symbol::Zero);
                    self.counter.left();
                }
                Symbol::Zero | Symbol::Blank => {
                    self.counter.write(Symbol::One);
                    self.control = Control::Accept;
                }
            },
            Control::Accept => {}
        }
    }

    fn run(&mut self) {
        while self.control != Control::Accept {
            self.step();
        }
    }
}

/// Runs one full invocation from `state`.
pub fn run_invocation(state: &TmState) -> Invocation {
    let mut m = Machine::new(state.counter_tape(), true);
    m.run();
    let description = String::from_utf8(m.output).expect("descriptions are ASCII");
    Invocation {
        emission: Emission {
            n: m.decoded,
            description,
        },
        next: TmState {
            counter_tape: m.counter.canonical(),
        },
        steps: m.steps,
        halted: m.control == Control::Accept,
    }
}

pub fn tm_invoke(state: &TmState) -> (Emission, TmState) {
    let inv = run_invocation(state);
    (inv.emission, inv.next)
}

/// `+1` on a binary tape, computed by the machine's increment phase.
pub fn binary_increment(tape: &str) -> Result<String> {
    validate(tape)?;
    let mut m = Machine::new(tape, false);
    m.run();
    Ok(m.counter.canonical())
}

fn validate(tape: &str) -> Result<()> {
    if tape.is_empty() {
        return Err(Error::Encoding("empty tape".into()));
    }
    if let Some(bad) = tape.chars().find(|c| *c != '0' && *c != '1') {
        return Err(Error::Encoding(format!("symbol {bad:?} is not a binary digit")));
    }
    Ok(())
}

pub fn decode(tape: &str) -> Result<BigUint> {
    validate(tape)?;
    Ok(BigUint::parse_bytes(tape.as_bytes(), 2).expect("validated binary"))
}

pub fn encode(n: &BigUint) -> String {
    n.to_str_radix(2)
}

/// Factories running side by side; yields add per invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub factories: Vec<u64>,
}

impl Composition {
    pub fn new(factories: impl Into<Vec<u64>>) -> Self {
        Composition {
            factories: factories.into(),
        }
    }
}

/// Combined per-invocation yield of a composition.
pub fn compose(c: &Composition) -> Result<u64> {
    if c.factories.is_empty() {
        return Err(Error::Domain("cannot compose zero factories".into()));
    }
    if c.factories.contains(&0) {
        return Err(Error::Domain("factory yields must be positive".into()));
    }
    c.factories
        .iter()
        .try_fold(0u64, |acc, &y| acc.checked_add(y))
        .ok_or_else(|| Error::Domain("combined yield overflows u64".into()))
}

/// Naive count of factories over `num_cwes` classes: `2^num_cwes`.
pub fn fermi_factory_count(num_cwes: u32) -> Result<BigUint> {
    if num_cwes == 0 {
        return Err(Error::Domain("need at least one CWE class".into()));
    }
    Ok(BigUint::one() << num_cwes)
}

/// Decimal scientific view of a big integer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scientific {
    /// In `[1, 10)`, from the leading seventeen digits.
    pub mantissa: f64,
    pub exponent: usize,
    pub digits: usize,
}

impl Scientific {
    pub fn of(n: &BigUint) -> Self {
        let s = n.to_str_radix(10);
        let lead = &s[..s.len().min(17)];
        let mantissa_text = format!("{}.{}", &lead[..1], &lead[1..]);
        Scientific {
            mantissa: mantissa_text.parse().expect("decimal digits"),
            exponent: s.len() - 1,
            digits: s.len(),
        }
    }
}

impl fmt::Display for Scientific {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}e{}", self.mantissa, self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increment_examples() {
        assert_eq!(binary_increment("1011").unwrap(), "1100");
        assert_eq!(binary_increment("0").unwrap(), "1");
        assert_eq!(binary_increment("111").unwrap(), "1000");
        assert_eq!(binary_increment("0011").unwrap(), "100");
    }

    #[test]
    fn increment_rejects_non_binary() {
        assert!(matches!(binary_increment("10a1"), Err(Error::Encoding(_))));
        assert!(matches!(binary_increment(""), Err(Error::Encoding(_))));
        assert!(matches!(binary_increment("12"), Err(Error::Encoding(_))));
    }

    #[test]
    fn fresh_invocation() {
        let (e, next) = tm_invoke(&TmState::fresh());
        assert_eq!(e.n, BigUint::zero());
        assert_eq!(next.counter_tape(), "1");
    }

    #[test]
    fn three_invocations() {
        let mut s = TmState::fresh();
        for expected in 0u32..3 {
            let (e, next) = tm_invoke(&s);
            assert_eq!(e.n, BigUint::from(expected));
            s = next;
        }
        assert_eq!(s.counter_tape(), "11");
    }

    #[test]
    fn invocation_from_five() {
        let s = TmState::from_tape("101").unwrap();
        let inv = run_invocation(&s);
        assert!(inv.halted);
        assert_eq!(inv.emission.n, BigUint::from(5u32));
        assert_eq!(inv.next.counter_tape(), "110");
        // read sweep + generate + carry, nothing more
        let bound = 3 + 1 + inv.emission.description.len() as u64 + 1 + 4;
        assert!(inv.steps <= bound, "{} > {bound}", inv.steps);
    }

    #[test]
    fn descriptions_are_pure_and_distinct() {
        let a = describe(&BigUint::from(4u32));
        assert_eq!(a, describe(&BigUint::from(4u32)));
        assert_ne!(a, describe(&BigUint::from(5u32)));
        assert!(a.contains("char buffer[20];"));
    }

    #[test]
    fn emission_dump() {
        let (e, _) = tm_invoke(&TmState::fresh());
        let d = e.dump();
        assert_eq!(d.description_len, e.description.len());
        assert_eq!(d.description_hash.len(), 64);
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["n"], 0);
    }

    #[test]
    fn composition() {
        assert_eq!(compose(&Composition::new([5, 5])).unwrap(), 10);
        assert_eq!(compose(&Composition::new([5])).unwrap(), 5);
        assert_eq!(compose(&Composition::new([3, 4, 5])).unwrap(), 12);
        assert!(compose(&Composition::new([])).is_err());
        assert!(compose(&Composition::new([3, 0])).is_err());
    }

    #[test]
    fn fermi_small() {
        assert_eq!(fermi_factory_count(10).unwrap(), BigUint::from(1024u32));
        assert_eq!(fermi_factory_count(1).unwrap(), BigUint::from(2u32));
        assert!(fermi_factory_count(0).is_err());
    }

    #[test]
    fn fermi_1447_digits() {
        let n = fermi_factory_count(1447).unwrap();
        let sci = Scientific::of(&n);
        assert_eq!(sci.digits, 436);
        assert_eq!(sci.exponent, 435);
        // the leading digits of 2^1447 are 38940...
        assert!(n.to_string().starts_with("38940"));
    }

    #[test]
    fn scientific_display() {
        let sci = Scientific::of(&BigUint::from(1024u32));
        assert_eq!(sci.to_string(), "1.02e3");
        assert_eq!(Scientific::of(&BigUint::from(7u32)).digits, 1);
    }
}
