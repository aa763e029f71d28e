//! Generate a few modules into a scratch workspace and print the first one.
//!
//! cargo run --example generate_corpus -- [DIR] [COUNT]

use std::env;
use std::fs;

use vuln_factory::workspace::Workspace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = env::args().skip(1);
    let root = args.next().map(Into::into).unwrap_or_else(|| env::temp_dir().join("vuln-factory-demo"));
    let count: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);

    let ws = Workspace::new(&root);
    let paths = ws.generate(count).map_err(|e| e.source)?;
    for p in &paths {
        println!("wrote {}", p.display());
    }
    println!("counter now {}", ws.counter().read()?);
    println!("\n{}", fs::read_to_string(&paths[0])?);
    Ok(())
}
