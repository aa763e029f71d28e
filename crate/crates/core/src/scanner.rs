//! Pattern scanner for the factory's emission grammar.
//!
//! Each rule anchors on the line that carries a module parameter, then looks
//! a few lines ahead (never past the end of the enclosing function) for the
//! dangerous use of what that line declared:
//!
//! - CWE-121: `char buf[S];` then `strcpy(buf, ...)`, `n = S - 16`
//! - CWE-134: `int ctx = N;` then `printf(ident);`, `n = N`
//! - CWE-190: `int t = INT_MAX - N;` then arithmetic on `t`, `n = N`
//! - CWE-416: `char *p = malloc(S);` then `free(p);` then a use of `p`, `n = S - 8`
//! - CWE-78: `snprintf(cmd, ..., "...module_N %s", arg);` then `system(cmd)`, `n = N`
//!
//! The scanner understands only what the factory emits. It is not a general
//! analyser.

use std::sync::LazyLock;

use num_bigint::BigUint;
use regex::Regex;
use serde::Serialize;

use crate::factory::{render_module, CweClass};
use crate::{Error, Result};

/// Lines examined after an anchor.
const LOOKAHEAD: usize = 6;

static HEADER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^/\* VULN_MODULE n=(0|[1-9][0-9]*) v=5 \*/$").unwrap());
static STACK_BUFFER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*char\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s*;").unwrap());
static FORMAT_CONTEXT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*int\s+([A-Za-z_]\w*)\s*=\s*(\d+)\s*;").unwrap());
static UNCHECKED_FORMAT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*printf\s*\(\s*[A-Za-z_]\w*\s*\)\s*;").unwrap());
static THRESHOLD: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s*int\s+([A-Za-z_]\w*)\s*=\s*INT_MAX\s*-\s*(\d+)\s*;").unwrap()
});
static HEAP_ALLOC: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s*char\s*\*\s*([A-Za-z_]\w*)\s*=\s*(?:\(\s*char\s*\*\s*\)\s*)?malloc\s*\(\s*(\d+)\s*\)\s*;")
        .unwrap()
});
static COMMAND_BUILD: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"^\s*snprintf\s*\(\s*([A-Za-z_]\w*)\s*,[^"]*"[^"]*\bmodule_(\d+)\b[^"]*%s[^"]*"\s*,\s*[A-Za-z_]\w*\s*\)\s*;"#)
        .unwrap()
});

static STRCPY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bstrcpy\s*\(\s*([A-Za-z_]\w*)\s*,").unwrap());
static ARITHMETIC: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\b([A-Za-z_]\w*)\s*[+*]|[+*]\s*([A-Za-z_]\w*)\b").unwrap()
});
static FREE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bfree\s*\(\s*([A-Za-z_]\w*)\s*\)\s*;").unwrap());
static NULL_RESET: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b([A-Za-z_]\w*)\s*=\s*NULL\b").unwrap());
static SYSTEM: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bsystem\s*\(\s*([A-Za-z_]\w*)\s*\)").unwrap());
static IDENT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z_]\w*").unwrap());

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanFinding {
    pub cwe: CweClass,
    #[serde(rename = "n", serialize_with = "crate::json::biguint")]
    pub recovered_n: BigUint,
    /// 1-based line of the parameter-carrying anchor.
    pub line: usize,
    #[serde(skip)]
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    #[serde(serialize_with = "crate::json::biguint")]
    pub manifest_n: BigUint,
    pub findings: Vec<ScanFinding>,
    pub consistent: bool,
}

impl ScanReport {
    pub fn finding(&self, cwe: CweClass) -> Option<&ScanFinding> {
        self.findings.iter().find(|f| f.cwe == cwe)
    }
}

pub fn scan_module(source: &str) -> Result<ScanReport> {
    let lines: Vec<&str> = source.lines().collect();
    let first = lines
        .first()
        .ok_or_else(|| Error::Format("empty source".into()))?;
    let manifest_n = HEADER
        .captures(first)
        .and_then(|c| BigUint::parse_bytes(c[1].as_bytes(), 10))
        .ok_or_else(|| Error::Format(format!("missing manifest header, found {first:?}")))?;

    let mut findings = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if let Some(f) = match_at(&lines, i) {
            findings.push(ScanFinding {
                cwe: f.0,
                recovered_n: f.1,
                line: i + 1,
                evidence: line.trim().to_owned(),
            });
        }
    }

    let consistent = CweClass::TEMPLATE_ORDER
        .iter()
        .all(|cwe| findings.iter().filter(|f| f.cwe == *cwe).count() == 1)
        && findings.iter().all(|f| f.recovered_n == manifest_n);

    Ok(ScanReport {
        manifest_n,
        findings,
        consistent,
    })
}

/// Whether a freshly rendered module scans back to its own index.
pub fn verify_roundtrip(n: impl Into<BigUint>) -> bool {
    scan_module(&render_module(n).source)
        .map(|r| r.consistent)
        .unwrap_or(false)
}

fn match_at(lines: &[&str], i: usize) -> Option<(CweClass, BigUint)> {
    let line = lines[i];
    let ahead = window(lines, i);

    if let Some(c) = STACK_BUFFER.captures(line) {
        let buf = &c[1];
        if ahead.iter().any(|l| captures_name(&STRCPY, l, buf)) {
            return Some((CweClass::StackBufferOverflow, offset_down(&c[2], 16)?));
        }
    }
    if let Some(c) = FORMAT_CONTEXT.captures(line) {
        if ahead.iter().any(|l| UNCHECKED_FORMAT.is_match(l)) {
            return Some((CweClass::FormatString, decimal(&c[2])?));
        }
    }
    if let Some(c) = THRESHOLD.captures(line) {
        let t = &c[1];
        if ahead.iter().any(|l| captures_name(&ARITHMETIC, l, t)) {
            return Some((CweClass::IntegerOverflow, decimal(&c[2])?));
        }
    }
    if let Some(c) = HEAP_ALLOC.captures(line) {
        let p = &c[1];
        if let Some(at) = ahead.iter().position(|l| captures_name(&FREE, l, p)) {
            let reused = ahead[at + 1..]
                .iter()
                .take_while(|l| !captures_name(&NULL_RESET, l, p))
                .any(|l| !captures_name(&FREE, l, p) && mentions(l, p));
            if reused {
                return Some((CweClass::UseAfterFree, offset_down(&c[2], 8)?));
            }
        }
    }
    if let Some(c) = COMMAND_BUILD.captures(line) {
        let cmd = &c[1];
        if ahead.iter().any(|l| captures_name(&SYSTEM, l, cmd)) {
            return Some((CweClass::OsCommandInjection, decimal(&c[2])?));
        }
    }
    None
}

/// Whether any match of `re` in `line` captures exactly `name`.
fn captures_name(re: &Regex, line: &str, name: &str) -> bool {
    re.captures_iter(line)
        .any(|c| c.iter().skip(1).flatten().any(|m| m.as_str() == name))
}

fn mentions(line: &str, name: &str) -> bool {
    IDENT.find_iter(line).any(|m| m.as_str() == name)
}

/// Up to `LOOKAHEAD` lines after `i`, stopping at a closing brace in column 0.
fn window<'a>(lines: &'a [&'a str], i: usize) -> &'a [&'a str] {
    let start = (i + 1).min(lines.len());
    let end = (start + LOOKAHEAD).min(lines.len());
    let slice = &lines[start..end];
    let stop = slice.iter().position(|l| l.starts_with('}')).unwrap_or(slice.len());
    &slice[..stop]
}

fn decimal(s: &str) -> Option<BigUint> {
    BigUint::parse_bytes(s.as_bytes(), 10)
}

fn offset_down(s: &str, base: u32) -> Option<BigUint> {
    let v = decimal(s)?;
    let base = BigUint::from(base);
    (v >= base).then(|| v - base)
}
