//! Decimal-string serialization for big integers in JSON reports.

use num_bigint::{BigInt, BigUint};
use serde::ser::SerializeSeq;
use serde::Serializer;

pub(crate) fn big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn big_list<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub(crate) fn biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
