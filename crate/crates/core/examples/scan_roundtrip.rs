//! Scan a rendered module, then tamper with one literal and scan again.

use vuln_factory::render_module;
use vuln_factory::scanner::{scan_module, verify_roundtrip};

fn main() -> vuln_factory::Result<()> {
    let module = render_module(42u32);
    let report = scan_module(&module.source)?;
    println!("manifest n={} consistent={}", report.manifest_n, report.consistent);
    for f in &report.findings {
        println!("  CWE-{:<3} n={:<4} line {:<3} {}", f.cwe.id(), f.recovered_n, f.line, f.evidence);
    }

    let tampered = module.source.replacen("char buffer[58];", "char buffer[64];", 1);
    let report = scan_module(&tampered)?;
    println!("after tampering: consistent={}", report.consistent);

    let ok = (0..=200u32).all(verify_roundtrip);
    println!("n in 0..=200 round-trip: {ok}");
    Ok(())
}
