//! Serde helpers for exact values. Every number leaves the library as a
//! decimal string, so nothing is truncated by consumers that parse JSON
//! numbers as doubles.

use std::fmt::Display;

use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::exact::{format_rational, Scalar, SquareMatrix};

pub fn ser_display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub fn ser_opt_display<T: Display, S: Serializer>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

pub fn ser_rational<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(value))
}

pub fn ser_rat_vec<S: Serializer>(value: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(value.iter().map(format_rational))
}

pub fn ser_opt_rat_vec<S: Serializer>(value: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => ser_rat_vec(v, s),
        None => s.serialize_none(),
    }
}

pub fn ser_rat_vecs<S: Serializer>(value: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(value.len()))?;
    for v in value {
        seq.serialize_element(&v.iter().map(format_rational).collect::<Vec<_>>())?;
    }
    seq.end()
}

/// Matrix as a list of rows of decimal strings.
pub fn matrix_rows<T: Scalar + Display>(m: &SquareMatrix<T>) -> Vec<Vec<String>> {
    (0..m.dim())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect()
}

pub fn ser_matrix<T: Scalar + Display, S: Serializer>(m: &SquareMatrix<T>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(matrix_rows(m))
}

pub fn ser_matrices<T: Scalar + Display, S: Serializer>(ms: &[SquareMatrix<T>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ms.iter().map(matrix_rows))
}
