//! Exact JSON encoding of big integers as plain numbers.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use serde_json::{Number, Value};

pub fn big(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integers are valid JSON numbers"))
}

pub fn serialize_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    big(v).serialize(s)
}

pub fn serialize_big_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    Value::Array(v.iter().map(big).collect()).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_values_stay_exact() {
        let v = num_traits::pow(BigInt::from(7), 40);
        let text = serde_json::to_string(&big(&v)).unwrap();
        assert_eq!(text, v.to_string());
    }
}
