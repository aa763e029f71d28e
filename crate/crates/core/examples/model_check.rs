//! Refute a claimed upper bound on the census with an explicit trace.
//!
//! cargo run --example model_check -- [BOUND]

use num_bigint::BigUint;
use vuln_factory::model_check::{check_bound, counterexample_length};

fn main() {
    let bound: BigUint = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(BigUint::from(100u32));
    let v = check_bound(&bound);
    println!("AG(|V| <= {bound}) violated: {}", v.violated);
    for (i, s) in v.trace.states().iter().enumerate() {
        println!("  s{i:<3} k={:<4} count={}", s.k, s.count);
    }
    println!("trace length {} (closed form {})", v.trace.len(), counterexample_length(&bound));
    println!("{}", serde_json::to_string_pretty(&v).unwrap());
}
