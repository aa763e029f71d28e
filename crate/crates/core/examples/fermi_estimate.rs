//! Count of distinct factories when each CWE class is either in or out.
//!
//! cargo run --example fermi_estimate -- [NUM_CWES]

use vuln_factory::tm::{fermi_factory_count, Scientific};

fn main() -> vuln_factory::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1447);
    let count = fermi_factory_count(n)?;
    let sci = Scientific::of(&count);
    println!("2^{n} = {sci} ({} digits)", sci.digits);
    if sci.digits <= 80 {
        println!("exact: {count}");
    }
    Ok(())
}
