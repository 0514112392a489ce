//! Exact rational arithmetic, sparse polynomials and polynomial one-forms.

mod form;
mod parse;
mod poly;

pub use form::{
    dulac_limit, dulac_shift_family, dulac_unit_family, is_exact, log_pair_form, q4_form, q4_polys,
    DulacReport, EpsForm, Exactness, OneForm, Q4Report, EPS, X, Y,
};
pub use parse::{parse_poly, parse_rational};
pub use poly::{Monomial, Poly};

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sum, difference or product of two polynomials, aligned by variable name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Poly {
    match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    }
}

/// Serializes a rational as its `p/q` string.
pub fn ser_rational<S: serde::Serializer>(
    r: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}
