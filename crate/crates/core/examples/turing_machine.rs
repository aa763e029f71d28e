//! Step the generate/increment machine and show the counter tape.

use vuln_factory::tm::{self, TmState};

fn main() -> vuln_factory::Result<()> {
    let mut state = TmState::fresh();
    for _ in 0..6 {
        let inv = tm::run_invocation(&state);
        let dump = inv.emission.dump();
        println!(
            "tape {:>4} -> emit S_{} ({} bytes, sha256 {}...) in {} steps -> tape {}",
            state.counter_tape(),
            dump.n,
            dump.description_len,
            &dump.description_hash[..12],
            inv.steps,
            inv.next.counter_tape(),
        );
        state = inv.next;
    }

    println!("increment 1011 -> {}", tm::binary_increment("1011")?);
    println!("increment 0111 -> {}", tm::binary_increment("0111")?);

    // factories compose by adding their yields
    let per_iter = tm::compose(&tm::Composition::new(vec![5, 3, 8]))?;
    println!("three factories together yield {per_iter} per iteration");
    Ok(())
}
