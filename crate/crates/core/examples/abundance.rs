//! Turn per-class finding counts into an abundance table.

use vuln_factory::abundance::CountsInput;

fn main() -> vuln_factory::Result<()> {
    let input = CountsInput::from_json(
        r#"{"label": "sample-2026", "counts": {"CWE-79": 420, "CWE-787": 310, "CWE-89": 150, "CWE-416": 90, "CWE-78": 30}}"#,
    )?;
    let table = input.abundance()?;
    for (cwe, share) in &table.entries {
        println!("CWE-{cwe:<4} {share:.4}");
    }
    println!("sum {:.12}", table.total());
    Ok(())
}
