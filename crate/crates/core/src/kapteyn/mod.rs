//! Quadratic centers in Kapteyn form.
//!
//! `ẋ = λ₁x − y − λ₃x² + (2λ₂+λ₅)xy + λ₆y²`,
//! `ẏ = x + λ₁y + λ₂x² + (2λ₃+λ₄)xy − λ₂y²`.
//!
//! The parameters are the variables `l1..l6`. The center set has four
//! components `I₁..I₄`; this module classifies parameter points by the
//! finest stratum containing them, gives generators of the Bautin ideal
//! localized at each stratum, and builds the essential arc families and
//! their deformation witnesses.

mod complex;
mod family;
mod witness;

pub use complex::{
    complex_strata_membership, complex_to_realcoeffs, kapteyn_to_complex, realcoeffs_to_complex,
    vector_field, ComplexMembership, ComplexParams, ComplexQ, RealCoeffs, VectorField2,
};
pub use family::{
    default_base, essential_family, random_center, sample_family, FamilyId, FamilySampler,
    FamilySpec, ESSENTIAL_FAMILIES,
};
pub use witness::{
    closure_cases, closure_check, closure_suite, deformation_witness, delta_sweep, specialize,
    tamper_exponent, tampered_suite, ClosureReport, SweepRow, Witness, DELTA,
};

use std::fmt;

use serde::Serialize;

use crate::blowup::Ideal;
use crate::error::{Error, Result};
use crate::exactalg::{parse_poly, Rational};
use crate::jets::Coeff;

pub const VARS: [&str; 6] = ["l1", "l2", "l3", "l4", "l5", "l6"];

pub fn vars() -> Vec<String> {
    VARS.iter().map(|s| s.to_string()).collect()
}

fn ideal(gens: &[&str]) -> Ideal {
    Ideal::parse(&VARS, gens).expect("built-in generators parse")
}

/// `v₁ = λ₁`, `v₂ = λ₅(λ₃−λ₆)`, `v₃ = λ₂λ₄(λ₃−λ₆)(λ₄+5λ₃−5λ₆)`,
/// `v₄ = λ₂λ₄(λ₃−λ₆)²(λ₃λ₆−2λ₆²−λ₂²)`.
pub fn bautin_ideal() -> Ideal {
    let p = |s: &str| parse_poly(s, Some(&vars())).expect("built-in");
    let d = p("l3 - l6");
    let l = p("l4 + 5*l3 - 5*l6");
    let q = p("l3*l6 - 2*l6^2 - l2^2");
    let l2l4 = p("l2*l4");
    let gens = vec![
        p("l1"),
        &p("l5") * &d,
        &(&l2l4 * &d) * &l,
        &(&l2l4 * &d.pow(2)) * &q,
    ];
    Ideal::new(vars(), gens).expect("nonzero generators")
}

/// Which root of `λ₆(λ₃−2λ₆) = 0` a point of `I₂∩I₄` lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum I24Branch {
    /// `λ₆ = 0`.
    L6Zero,
    /// `λ₃ = 2λ₆`.
    L3TwiceL6,
}

/// Finest stratum of the center set containing a parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    I1,
    I2,
    I3,
    I4,
    I1I2,
    I1I3,
    I2I3,
    I2I4(I24Branch),
    I1I2I3,
    Origin,
    NotInCenterSet,
}

impl Stratum {
    pub const SMOOTH: [Stratum; 4] = [Stratum::I1, Stratum::I2, Stratum::I3, Stratum::I4];
    pub const SINGULAR: [Stratum; 6] = [
        Stratum::I1I3,
        Stratum::I1I2,
        Stratum::I2I3,
        Stratum::I2I4(I24Branch::L6Zero),
        Stratum::I1I2I3,
        Stratum::Origin,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stratum::I1 => "I1",
            Stratum::I2 => "I2",
            Stratum::I3 => "I3",
            Stratum::I4 => "I4",
            Stratum::I1I2 => "I1∩I2",
            Stratum::I1I3 => "I1∩I3",
            Stratum::I2I3 => "I2∩I3",
            Stratum::I2I4(I24Branch::L6Zero) => "I2∩I4",
            Stratum::I2I4(I24Branch::L3TwiceL6) => "I2∩I4 (l3=2l6)",
            Stratum::I1I2I3 => "I1∩I2∩I3",
            Stratum::Origin => "origin",
            Stratum::NotInCenterSet => "not in center set",
        }
    }

    pub fn parse(s: &str) -> Result<Stratum> {
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '∩' && *c != '_')
            .collect::<String>()
            .to_ascii_uppercase();
        Ok(match t.as_str() {
            "I1" => Stratum::I1,
            "I2" => Stratum::I2,
            "I3" => Stratum::I3,
            "I4" => Stratum::I4,
            "I1I2" | "I12" => Stratum::I1I2,
            "I1I3" | "I13" => Stratum::I1I3,
            "I2I3" | "I23" => Stratum::I2I3,
            "I2I4" | "I24" => Stratum::I2I4(I24Branch::L6Zero),
            "I2I4B" | "I24B" => Stratum::I2I4(I24Branch::L3TwiceL6),
            "I1I2I3" | "I123" => Stratum::I1I2I3,
            "ORIGIN" | "0" => Stratum::Origin,
            _ => return Err(Error::Invalid(format!("unknown stratum `{s}`"))),
        })
    }

    /// Same stratum, ignoring the `I₂∩I₄` branch.
    pub fn same_kind(&self, o: &Stratum) -> bool {
        matches!((self, o), (Stratum::I2I4(_), Stratum::I2I4(_))) || self == o
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Stratum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Component equations evaluated at a point with coefficients in `C`.
fn component_membership<C: Coeff>(l: &[C; 6]) -> [bool; 4] {
    let z = |c: &C| c.is_zero();
    let five = C::from_rational(&Rational::from_integer(5.into()));
    let two = C::from_rational(&Rational::from_integer(2.into()));
    let d = l[2].clone() - l[5].clone();
    let lin = l[3].clone() + five * d.clone();
    let quad = l[2].clone() * l[5].clone()
        - two * l[5].clone() * l[5].clone()
        - l[1].clone() * l[1].clone();
    [
        z(&l[0]) && z(&d),
        z(&l[0]) && z(&l[1]) && z(&l[4]),
        z(&l[0]) && z(&l[3]) && z(&l[4]),
        z(&l[0]) && z(&l[4]) && z(&lin) && z(&quad),
    ]
}

/// Finest stratum; with polynomial coefficients this is the stratum of a
/// generic value of the auxiliary parameters.
pub fn classify_stratum<C: Coeff>(l: &[C; 6]) -> Stratum {
    if l.iter().all(|c| c.is_zero()) {
        return Stratum::Origin;
    }
    let [i1, i2, i3, i4] = component_membership(l);
    match (i1, i2, i3, i4) {
        (true, true, true, _) => Stratum::I1I2I3,
        (true, true, _, _) => Stratum::I1I2,
        (true, _, true, _) => Stratum::I1I3,
        (_, true, true, _) => Stratum::I2I3,
        (_, true, _, true) => {
            if l[5].is_zero() {
                Stratum::I2I4(I24Branch::L6Zero)
            } else {
                Stratum::I2I4(I24Branch::L3TwiceL6)
            }
        }
        (true, _, _, _) => Stratum::I1,
        (_, true, _, _) => Stratum::I2,
        (_, _, true, _) => Stratum::I3,
        (_, _, _, true) => Stratum::I4,
        _ => Stratum::NotInCenterSet,
    }
}

/// Generators of the Bautin ideal localized at a generic point of the
/// stratum. At `I₁∩I₃` this needs `λ₂ ≠ 0` and at `I₁∩I₂∩I₃` it needs
/// `λ₃ ≠ 0`; both hold off the smaller strata.
pub fn localized_generators(s: Stratum) -> Result<Ideal> {
    Ok(match s {
        Stratum::I1 => ideal(&["l1", "l3 - l6"]),
        Stratum::I2 => ideal(&["l1", "l2", "l5"]),
        Stratum::I3 => ideal(&["l1", "l4", "l5"]),
        Stratum::I4 => ideal(&["l1", "l5", "l4 + 5*l3 - 5*l6", "l3*l6 - 2*l6^2 - l2^2"]),
        Stratum::I1I3 => ideal(&[
            "l1",
            "l5*l3 - l5*l6",
            "l4^2*l3 - l4^2*l6",
            "l4*l3^2 - 2*l4*l3*l6 + l4*l6^2",
        ]),
        Stratum::I1I2 => ideal(&["l1", "l5*l3 - l5*l6", "l2*l3 - l2*l6"]),
        Stratum::I2I3 => ideal(&["l1", "l5", "l2*l4"]),
        Stratum::I2I4(_) => ideal(&[
            "l1",
            "l5",
            "l2*l4 + 5*l2*l3 - 5*l2*l6",
            "l2*l3*l6 - 2*l2*l6^2 - l2^3",
        ]),
        Stratum::I1I2I3 => ideal(&[
            "l1",
            "l5*l3 - l5*l6",
            "l2*l4^2*l3 - l2*l4^2*l6",
            "l2*l4*l3^2 - 2*l2*l4*l3*l6 + l2*l4*l6^2",
        ]),
        Stratum::Origin => bautin_ideal(),
        Stratum::NotInCenterSet => {
            return Err(Error::Invalid(
                "no localized generators off the center set".into(),
            ))
        }
    })
}

/// Parses six comma-separated rationals.
pub fn parse_lambda(text: &str) -> Result<[Rational; 6]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 6 {
        return Err(Error::Invalid(format!(
            "expected 6 comma-separated parameters, got {}",
            parts.len()
        )));
    }
    let v = parts
        .iter()
        .map(|s| crate::exactalg::parse_rational(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    Ok(v.try_into().expect("length checked"))
}

/// Polynomial point `(λ₁..λ₆)` read from the constant terms of an arc.
pub(crate) fn base_of<C: Coeff>(arc: &crate::jets::Arc<C>) -> [C; 6] {
    let b = arc.base_point();
    VARS.map(|v| b.get(v).cloned().unwrap_or_else(C::zero))
}
