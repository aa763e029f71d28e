//! How much growth survives when detectors neutralise whole template columns
//! plus a finite number of individual instances.

use num_bigint::BigUint;
use vuln_factory::census::{self, InvalidationSet};

fn main() -> vuln_factory::Result<()> {
    let k = BigUint::from(10u32);
    for (columns, s) in [(vec![], 0u32), (vec![1], 0), (vec![1, 2, 3], 20), (vec![1, 2, 3, 4], 1000), (vec![1, 2, 3, 4, 5], 0)] {
        let inv = InvalidationSet::new(columns.clone(), s)?;
        let survivors = census::surviving_growth(&inv, &k);
        let beat_10k = census::iterations_to_exceed(&inv, &BigUint::from(10_000u32));
        println!(
            "I={columns:?} s={s:<4} survivors at k=10: {survivors:<3} unbounded: {:<5} k to exceed 10000: {}",
            census::is_unbounded(&inv),
            beat_10k.map_or("never".to_string(), |k| k.to_string()),
        );
    }
    Ok(())
}
