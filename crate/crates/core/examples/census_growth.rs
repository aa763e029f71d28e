//! Growth of the vulnerability census, 11 + 5k, for a handful of k.

use num_bigint::BigUint;
use vuln_factory::census::{self, CensusReport};

fn main() {
    for k in [0u64, 1, 10, 1_000, 1_000_000] {
        let r = CensusReport::after(BigUint::from(k));
        println!("k={k:>8}  generated={:>8}  total={}", r.generated(), r.total);
    }
    let k = BigUint::from(10u32).pow(40);
    println!("k=10^40   total={}", census::total_after(&k));

    // every bound is passed after finitely many iterations
    for bound in [10u64, 100, 1_000_000] {
        let k = census::min_iterations_exceeding(&BigUint::from(bound));
        println!("first k with total > {bound}: {k}");
    }
}
