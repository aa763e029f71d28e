//! Serde helpers for writing unbounded integers as exact JSON numbers.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

pub(crate) fn number(n: &BigUint) -> serde_json::Number {
    // arbitrary_precision keeps the decimal string verbatim
    n.to_str_radix(10)
        .parse()
        .expect("decimal digits always form a JSON number")
}

pub(crate) fn biguint<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    number(n).serialize(s)
}
