//! Module rendering and the base-set catalog.
//!
//! Module `n` carries five weaknesses, always in the order CWE-121, 134, 190,
//! 416, 78. Every parameter is a pure function of `n`:
//!
//! | slot | CWE | parameter |
//! |------|-----|-----------|
//! | 1 | 121 | stack buffer of `16 + n` bytes |
//! | 2 | 134 | format context `n` |
//! | 3 | 190 | threshold `INT_MAX - n` |
//! | 4 | 416 | heap allocation of `8 + n` bytes |
//! | 5 | 78  | command context `module_n` |
//!
//! `n` is a [`BigUint`]; sizes are rendered as exact decimal strings.

use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

/// Number of weakness templates instantiated per module.
pub const TEMPLATES_PER_MODULE: usize = 5;

/// Size of the base set.
pub const BASE_SET_SIZE: usize = 11;

/// Component name shared by every base-set entry.
pub const BASE_COMPONENT: &str = "base";

/// The one symbol a load harness may resolve in a generated module.
pub const MANIFEST_SYMBOL: &str = "vuln_module_manifest";

const BUFFER_BASE: u32 = 16;
const ALLOC_BASE: u32 = 8;

/// The eleven CWE classes the factory knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CweClass {
    StackBufferOverflow,
    HeapBufferOverflow,
    FormatString,
    IntegerOverflow,
    UseAfterFree,
    DoubleFree,
    OsCommandInjection,
    ToctouRace,
    NullPointerDeref,
    UninitialisedVariable,
    PathTraversal,
}

impl CweClass {
    /// Base-set order, `b_1` through `b_11`.
    pub const BASE_ORDER: [CweClass; BASE_SET_SIZE] = [
        CweClass::StackBufferOverflow,
        CweClass::HeapBufferOverflow,
        CweClass::FormatString,
        CweClass::IntegerOverflow,
        CweClass::UseAfterFree,
        CweClass::DoubleFree,
        CweClass::OsCommandInjection,
        CweClass::ToctouRace,
        CweClass::NullPointerDeref,
        CweClass::UninitialisedVariable,
        CweClass::PathTraversal,
    ];

    /// Slot order inside every generated module.
    pub const TEMPLATE_ORDER: [CweClass; TEMPLATES_PER_MODULE] = [
        CweClass::StackBufferOverflow,
        CweClass::FormatString,
        CweClass::IntegerOverflow,
        CweClass::UseAfterFree,
        CweClass::OsCommandInjection,
    ];

    pub fn id(self) -> u32 {
        match self {
            CweClass::StackBufferOverflow => 121,
            CweClass::HeapBufferOverflow => 122,
            CweClass::FormatString => 134,
            CweClass::IntegerOverflow => 190,
            CweClass::UseAfterFree => 416,
            CweClass::DoubleFree => 415,
            CweClass::OsCommandInjection => 78,
            CweClass::ToctouRace => 367,
            CweClass::NullPointerDeref => 476,
            CweClass::UninitialisedVariable => 457,
            CweClass::PathTraversal => 22,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CweClass::StackBufferOverflow => "Stack Buffer Overflow",
            CweClass::HeapBufferOverflow => "Heap Buffer Overflow",
            CweClass::FormatString => "Format String",
            CweClass::IntegerOverflow => "Integer Overflow",
            CweClass::UseAfterFree => "Use After Free",
            CweClass::DoubleFree => "Double Free",
            CweClass::OsCommandInjection => "OS Command Injection",
            CweClass::ToctouRace => "TOCTOU Race",
            CweClass::NullPointerDeref => "NULL Pointer Deref",
            CweClass::UninitialisedVariable => "Uninitialised Variable",
            CweClass::PathTraversal => "Path Traversal",
        }
    }

    pub fn from_id(id: u32) -> Option<CweClass> {
        Self::BASE_ORDER.into_iter().find(|c| c.id() == id)
    }

    pub fn is_template(self) -> bool {
        Self::TEMPLATE_ORDER.contains(&self)
    }

    /// 1-based slot within a module, for template classes.
    pub fn template_slot(self) -> Option<u8> {
        Self::TEMPLATE_ORDER
            .iter()
            .position(|&c| c == self)
            .map(|i| i as u8 + 1)
    }
}

impl fmt::Display for CweClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CWE-{}", self.id())
    }
}

impl Serialize for CweClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.id())
    }
}

/// Every parameter module `n` is instantiated with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamSet {
    pub n: BigUint,
    pub buffer_size: BigUint,
    pub format_context: BigUint,
    /// Rendered as `INT_MAX - overflow_offset`.
    pub overflow_offset: BigUint,
    pub alloc_size: BigUint,
    pub injection_context: BigUint,
}

impl ParamSet {
    pub fn for_module(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        ParamSet {
            buffer_size: &n + BUFFER_BASE,
            format_context: n.clone(),
            overflow_offset: n.clone(),
            alloc_size: &n + ALLOC_BASE,
            injection_context: n.clone(),
            n,
        }
    }

    /// The parameter that slot `template` (1..=5) is keyed on.
    pub fn site(&self, template: u8) -> Option<SiteParam> {
        Some(match template {
            1 => SiteParam::BufferSize(self.buffer_size.clone()),
            2 => SiteParam::FormatContext(self.format_context.clone()),
            3 => SiteParam::OverflowOffset(self.overflow_offset.clone()),
            4 => SiteParam::AllocSize(self.alloc_size.clone()),
            5 => SiteParam::InjectionContext(self.injection_context.clone()),
            _ => return None,
        })
    }
}

/// The exploit condition specific to one weakness site.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SiteParam {
    BufferSize(BigUint),
    FormatContext(BigUint),
    OverflowOffset(BigUint),
    AllocSize(BigUint),
    InjectionContext(BigUint),
}

/// Parameter set `p` of a vulnerability tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Params {
    /// Base-set function `b_function`.
    Base { function: u8 },
    Generated { module: ParamSet, site: SiteParam },
}

/// Identity of a vulnerability: `b_j` or `v_{n,i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VulnId {
    Base { index: u8 },
    Generated { module: BigUint, template: u8 },
}

impl fmt::Display for VulnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VulnId::Base { index } => write!(f, "b_{index}"),
            VulnId::Generated { module, template } => write!(f, "v_{{{module},{template}}}"),
        }
    }
}

/// A software component: a generated module's file stem, or `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId(pub String);

impl ComponentId {
    pub fn base() -> Self {
        ComponentId(BASE_COMPONENT.to_owned())
    }

    pub fn module(n: &BigUint) -> Self {
        ComponentId(format!("vuln_module_{n}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The module index encoded in a generated component's name.
    pub fn module_index(&self) -> Option<BigUint> {
        let digits = self.0.strip_prefix("vuln_module_")?;
        parse_canonical_decimal(digits)
    }

    /// Source file holding this component.
    pub fn file_name(&self) -> String {
        if self.0 == BASE_COMPONENT {
            "vuln_factory.c".to_owned()
        } else {
            format!("{}.c", self.0)
        }
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A vulnerability tuple `(component, CWE class, parameter set)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vulnerability {
    pub id: VulnId,
    pub component: ComponentId,
    pub cwe: CweClass,
    pub params: Params,
}

impl Vulnerability {
    /// `v_{n,template}`; `None` unless `template` is in 1..=5.
    pub fn generated(n: &BigUint, template: u8) -> Option<Self> {
        let set = ParamSet::for_module(n.clone());
        Self::from_params(set, template)
    }

    fn from_params(set: ParamSet, template: u8) -> Option<Self> {
        let site = set.site(template)?;
        Some(Vulnerability {
            id: VulnId::Generated {
                module: set.n.clone(),
                template,
            },
            component: ComponentId::module(&set.n),
            cwe: CweClass::TEMPLATE_ORDER[usize::from(template) - 1],
            params: Params::Generated { module: set, site },
        })
    }

    /// Module parameters, for generated entries.
    pub fn param_set(&self) -> Option<&ParamSet> {
        match &self.params {
            Params::Generated { module, .. } => Some(module),
            Params::Base { .. } => None,
        }
    }
}

/// A rendered module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub n: BigUint,
    pub component: ComponentId,
    pub vulns: [Vulnerability; TEMPLATES_PER_MODULE],
    pub source: String,
    pub file_name: String,
}

pub fn module_file_name(n: &BigUint) -> String {
    format!("vuln_module_{n}.c")
}

/// First line of every module.
pub fn manifest_header(n: &BigUint) -> String {
    format!("/* VULN_MODULE n={n} v=5 */")
}

/// String returned by a module's manifest function.
pub fn manifest_value(n: &BigUint) -> String {
    format!("n={n};vulns=5")
}

/// Renders module `n`. Pure: equal `n` gives byte-identical source.
pub fn render_module(n: impl Into<BigUint>) -> ModuleSpec {
    let params = ParamSet::for_module(n);
    let vulns = std::array::from_fn(|i| {
        Vulnerability::from_params(params.clone(), i as u8 + 1).expect("slot in 1..=5")
    });
    ModuleSpec {
        component: ComponentId::module(&params.n),
        file_name: module_file_name(&params.n),
        source: render_source(&params),
        n: params.n,
        vulns,
    }
}

fn render_source(p: &ParamSet) -> String {
    let n = &p.n;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };

    line(manifest_header(n));
    line("/*".into());
    line(format!(" * vuln_module_{n}.c: generated weakness module {n}."));
    line(" * Intentionally vulnerable teaching code. Never deploy it, never run it".into());
    line(" * outside a disposable sandbox, never run it as root.".into());
    line(" */".into());
    for header in ["limits.h", "stdio.h", "stdlib.h", "string.h"] {
        line(format!("#include <{header}>"));
    }
    line(String::new());

    line(format!("/* v_{{{n},1}} CWE-121 stack buffer overflow: buffer size 16 + {n} */"));
    line(format!("void vuln_121_{n}(const char *input)"));
    line("{".into());
    line(format!("    char buffer[{}];", p.buffer_size));
    line("    strcpy(buffer, input);".into());
    line("    puts(buffer);".into());
    line("}".into());
    line(String::new());

    line(format!("/* v_{{{n},2}} CWE-134 format string: format context {n} */"));
    line(format!("void vuln_134_{n}(const char *input)"));
    line("{".into());
    line(format!("    int context = {};", p.format_context));
    line("    printf(\"module %d: \", context);".into());
    line("    printf(input);".into());
    line("}".into());
    line(String::new());

    line(format!("/* v_{{{n},3}} CWE-190 integer overflow: threshold INT_MAX - {n} */"));
    line(format!("int vuln_190_{n}(int value)"));
    line("{".into());
    line(format!("    int threshold = INT_MAX - {};", p.overflow_offset));
    line("    return threshold + value;".into());
    line("}".into());
    line(String::new());

    line(format!("/* v_{{{n},4}} CWE-416 use after free: allocation size 8 + {n} */"));
    line(format!("void vuln_416_{n}(const char *input)"));
    line("{".into());
    line(format!("    char *data = malloc({});", p.alloc_size));
    line("    if (data == NULL)".into());
    line("        return;".into());
    line("    data[0] = input[0];".into());
    line("    free(data);".into());
    line("    printf(\"%c\\n\", data[0]);".into());
    line("}".into());
    line(String::new());

    line(format!("/* v_{{{n},5}} CWE-78 OS command injection: context module_{n} */"));
    line(format!("int vuln_78_{n}(const char *input)"));
    line("{".into());
    line("    char command[256];".into());
    line(format!(
        "    snprintf(command, sizeof(command), \"echo module_{} %s\", input);",
        p.injection_context
    ));
    line("    return system(command);".into());
    line("}".into());
    line(String::new());

    line("/* Identity probe for load harnesses; touches no weakness. */".into());
    line(format!("const char *{MANIFEST_SYMBOL}(void)"));
    line("{".into());
    line(format!("    return \"{}\";", manifest_value(n)));
    line("}".into());

    debug_assert!(out.is_ascii());
    out
}

/// The eleven base-set entries, `b_1..b_11`.
pub fn base_catalog() -> Vec<Vulnerability> {
    CweClass::BASE_ORDER
        .iter()
        .zip(1u8..)
        .map(|(&cwe, index)| Vulnerability {
            id: VulnId::Base { index },
            component: ComponentId::base(),
            cwe,
            params: Params::Base { function: index },
        })
        .collect()
}

/// Parses plain decimal without sign, whitespace or leading zeros.
pub(crate) fn parse_canonical_decimal(s: &str) -> Option<BigUint> {
    let canonical = !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_digit())
        && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return None;
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
}
