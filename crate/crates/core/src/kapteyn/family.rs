use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{classify_stratum, I24Branch, Stratum, VARS};
use crate::blowup::ArcSampler;
use crate::error::{Error, Result};
use crate::exactalg::{int, rat, Rational};
use crate::jets::{Arc, Jet};

/// Arc families through the strata of the center set, and the deformation
/// witnesses (ids starting with `W_`) that push them into larger strata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    SmoothI1,
    SmoothI2,
    SmoothI3,
    SmoothI4,
    I13A,
    I13B,
    I13C,
    I12,
    I23,
    I24,
    I123,
    Origin,
    WI13,
    WI12,
    WI23,
    WI24,
    WI123,
    WOrigin,
}

/// Essential families of each stratum, in table order.
pub const ESSENTIAL_FAMILIES: [(Stratum, &[FamilyId]); 10] = [
    (Stratum::I1, &[FamilyId::SmoothI1]),
    (Stratum::I2, &[FamilyId::SmoothI2]),
    (Stratum::I3, &[FamilyId::SmoothI3]),
    (Stratum::I4, &[FamilyId::SmoothI4]),
    (
        Stratum::I1I3,
        &[FamilyId::I13A, FamilyId::I13B, FamilyId::I13C],
    ),
    (Stratum::I1I2, &[FamilyId::I12]),
    (Stratum::I2I3, &[FamilyId::I23]),
    (Stratum::I2I4(I24Branch::L6Zero), &[FamilyId::I24]),
    (Stratum::I1I2I3, &[FamilyId::I123]),
    (Stratum::Origin, &[FamilyId::Origin]),
];

struct Def {
    stratum: Stratum,
    order: usize,
    units: &'static [&'static str],
    free: &'static [&'static str],
    /// Lowest `ε`-power at which extra `l{i}_{j}` tail symbols may enter `λᵢ`.
    tails: [usize; 6],
}

const fn def(
    stratum: Stratum,
    order: usize,
    units: &'static [&'static str],
    free: &'static [&'static str],
    tails: [usize; 6],
) -> Def {
    Def {
        stratum,
        order,
        units,
        free,
        tails,
    }
}

impl FamilyId {
    pub const ALL: [FamilyId; 18] = [
        FamilyId::SmoothI1,
        FamilyId::SmoothI2,
        FamilyId::SmoothI3,
        FamilyId::SmoothI4,
        FamilyId::I13A,
        FamilyId::I13B,
        FamilyId::I13C,
        FamilyId::I12,
        FamilyId::I23,
        FamilyId::I24,
        FamilyId::I123,
        FamilyId::Origin,
        FamilyId::WI13,
        FamilyId::WI12,
        FamilyId::WI23,
        FamilyId::WI24,
        FamilyId::WI123,
        FamilyId::WOrigin,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyId::SmoothI1 => "SMOOTH_I1",
            FamilyId::SmoothI2 => "SMOOTH_I2",
            FamilyId::SmoothI3 => "SMOOTH_I3",
            FamilyId::SmoothI4 => "SMOOTH_I4",
            FamilyId::I13A => "I13_A",
            FamilyId::I13B => "I13_B",
            FamilyId::I13C => "I13_C",
            FamilyId::I12 => "I12",
            FamilyId::I23 => "I23",
            FamilyId::I24 => "I24",
            FamilyId::I123 => "I123",
            FamilyId::Origin => "ORIGIN",
            FamilyId::WI13 => "W_I13",
            FamilyId::WI12 => "W_I12",
            FamilyId::WI23 => "W_I23",
            FamilyId::WI24 => "W_I24",
            FamilyId::WI123 => "W_I123",
            FamilyId::WOrigin => "W_ORIGIN",
        }
    }

    pub fn parse(s: &str) -> Result<FamilyId> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown family id `{s}`")))
    }

    pub fn is_witness(&self) -> bool {
        self.lower().is_some()
    }

    /// For a witness, the family it degenerates to at `δ = 0`.
    pub fn lower(&self) -> Option<FamilyId> {
        Some(match self {
            FamilyId::WI13 => FamilyId::I13B,
            FamilyId::WI12 => FamilyId::I12,
            FamilyId::WI23 => FamilyId::I23,
            FamilyId::WI24 => FamilyId::I24,
            FamilyId::WI123 => FamilyId::I123,
            FamilyId::WOrigin => FamilyId::Origin,
            _ => return None,
        })
    }

    /// The witness deforming this family, if there is one.
    pub fn witness(&self) -> Option<FamilyId> {
        FamilyId::ALL.into_iter().find(|w| w.lower() == Some(*self))
    }

    /// The family whose symbols and base point this id uses.
    pub fn carrier(&self) -> FamilyId {
        self.lower().unwrap_or(*self)
    }

    fn def(&self) -> Def {
        use Stratum as S;
        match self.carrier() {
            FamilyId::SmoothI1 => def(S::I1, 1, &["l1_1", "l6_1"], &[], [2; 6]),
            FamilyId::SmoothI2 => def(S::I2, 1, &["l1_1", "l2_1", "l5_1"], &[], [2; 6]),
            FamilyId::SmoothI3 => def(S::I3, 1, &["l1_1", "l4_1", "l5_1"], &[], [2; 6]),
            FamilyId::SmoothI4 => def(S::I4, 1, &["l1_1", "l2_1", "l4_1", "l5_1"], &[], [2; 6]),
            FamilyId::I13A => def(
                S::I1I3,
                3,
                &["l1_3", "l5_2", "l4_1"],
                &["l3_1", "l6_1", "l2_1"],
                [4, 2, 2, 2, 3, 2],
            ),
            FamilyId::I13B => def(
                S::I1I3,
                4,
                &["l1_4", "l5_3", "l4_2"],
                &["l3_1", "l6_1", "l2_1"],
                [5, 2, 2, 3, 4, 2],
            ),
            FamilyId::I13C => def(
                S::I1I3,
                4,
                &["l1_4", "l5_2", "l6_2", "l4_1"],
                &["l2_1"],
                [5, 2, 3, 2, 3, 3],
            ),
            FamilyId::I12 => def(
                S::I1I2,
                2,
                &["l1_2", "l2_1", "l5_1"],
                &["l3_1", "l6_1"],
                [3, 2, 2, 1, 2, 2],
            ),
            FamilyId::I23 => def(
                S::I2I3,
                2,
                &["l1_2", "l2_1", "l4_1", "l5_2"],
                &[],
                [3, 2, 1, 2, 3, 1],
            ),
            FamilyId::I24 => def(
                S::I2I4(I24Branch::L6Zero),
                2,
                &["l1_2", "l5_2", "l2_1"],
                &["l3_1", "l4_1", "l6_1"],
                [3, 2, 2, 2, 3, 2],
            ),
            FamilyId::I123 => def(
                S::I1I2I3,
                4,
                &["l1_4", "l5_3", "l2_1", "l4_1"],
                &["l3_1", "l6_1"],
                [5, 2, 2, 2, 4, 2],
            ),
            FamilyId::Origin => def(
                S::Origin,
                6,
                &["l1_6", "l5_5", "l2_1"],
                &["l3_1", "l6_1", "l3_2", "l6_2", "l3_3", "l6_3", "l4_3"],
                [7, 2, 4, 4, 6, 4],
            ),
            _ => unreachable!("carrier is never a witness"),
        }
    }

    /// Stratum of the base point.
    pub fn stratum(&self) -> Stratum {
        self.def().stratum
    }

    /// Order of a generic member with respect to the localized generators of
    /// its stratum (for witnesses: of the generic, `δ ≠ 0`, member).
    pub fn order(&self) -> usize {
        match self {
            FamilyId::WI13 | FamilyId::WI123 => 3,
            FamilyId::WI12 | FamilyId::WI23 | FamilyId::WI24 => 1,
            FamilyId::WOrigin => 4,
            _ => self.def().order,
        }
    }

    pub fn units(&self) -> &'static [&'static str] {
        self.def().units
    }

    pub fn free(&self) -> &'static [&'static str] {
        self.def().free
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FamilyId::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A concrete member of a family: base point, symbol values and, for
/// witnesses, an optional value of `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: FamilyId,
    pub base: [Rational; 6],
    pub symbols: BTreeMap<String, Rational>,
    pub delta: Option<Rational>,
}

impl FamilySpec {
    pub fn new(family: FamilyId, base: [Rational; 6], symbols: &[(&str, Rational)]) -> Self {
        FamilySpec {
            family,
            base,
            symbols: symbols
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            delta: None,
        }
    }

    pub fn with_delta(mut self, delta: Rational) -> Self {
        self.delta = Some(delta);
        self
    }

    fn sym(&self, name: &str) -> Rational {
        self.symbols
            .get(name)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Named nonvanishing conditions beyond the unit symbols.
    pub fn combos(&self) -> Vec<(&'static str, Rational)> {
        let s = |n: &str| self.sym(n);
        let d = || s("l3_1") - s("l6_1");
        match self.family.carrier() {
            FamilyId::I13A | FamilyId::I13B | FamilyId::I12 | FamilyId::I123 => {
                vec![("l3_1 - l6_1", d())]
            }
            FamilyId::I24 => {
                let l = s("l4_1") + int(5) * s("l3_1") - int(5) * s("l6_1");
                let q =
                    &self.base[2] * s("l6_1") + &self.base[5] * (s("l3_1") - int(4) * s("l6_1"));
                vec![
                    ("l4_1 + 5*l3_1 - 5*l6_1", l),
                    ("l3*l6_1 + l6*(l3_1 - 4*l6_1)", q),
                ]
            }
            FamilyId::Origin => {
                let p1 = s("l4_3") + int(5) * s("l3_3") - int(5) * s("l6_3");
                let p2 =
                    s("l3_1") * s("l6_1") - int(2) * s("l6_1") * s("l6_1") - s("l2_1") * s("l2_1");
                vec![
                    ("l3_1 - l6_1", d()),
                    ("l4_3 + 5*l3_3 - 5*l6_3", p1),
                    ("l3_1*l6_1 - 2*l6_1^2 - l2_1^2", p2),
                ]
            }
            _ => Vec::new(),
        }
    }

    /// Checks the base point, the symbol names and the genericity conditions.
    pub fn validate(&self) -> Result<()> {
        let id = self.family.carrier();
        let def = id.def();
        let got = classify_stratum(&self.base);
        if !got.same_kind(&def.stratum) {
            return Err(Error::Genericity(format!(
                "family {} needs a base point on {}, got {}",
                self.family, def.stratum, got
            )));
        }
        for name in self.symbols.keys() {
            if def.units.contains(&name.as_str()) || def.free.contains(&name.as_str()) {
                continue;
            }
            match parse_symbol(name) {
                Some((i, j)) if j >= def.tails[i] => {}
                _ => {
                    return Err(Error::Invalid(format!(
                        "symbol `{name}` is not a parameter or tail coefficient of {}",
                        self.family
                    )))
                }
            }
        }
        for u in def.units {
            match self.symbols.get(*u) {
                None => return Err(Error::Invalid(format!("missing symbol `{u}`"))),
                Some(v) if v.is_zero() => {
                    return Err(Error::Genericity(format!("symbol `{u}` must be nonzero")))
                }
                _ => {}
            }
        }
        for (name, v) in self.combos() {
            if v.is_zero() {
                return Err(Error::Genericity(format!("`{name}` must be nonzero")));
            }
        }
        if self.delta.is_some() && !self.family.is_witness() {
            return Err(Error::Invalid(
                "delta is only meaningful for witness families".into(),
            ));
        }
        Ok(())
    }
}

/// `l{i}_{j}` names the coefficient of `ε^j` in `λᵢ`; returns `(i − 1, j)`.
pub(crate) fn parse_symbol(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix('l')?;
    let (i, j) = rest.split_once('_')?;
    let i: usize = i.parse().ok()?;
    let j: usize = j.parse().ok()?;
    if (1..=6).contains(&i) && j >= 1 {
        Some((i - 1, j))
    } else {
        None
    }
}

/// Builds the rational arc of a non-witness family without validation.
pub(crate) fn build_arc(spec: &FamilySpec, n: usize) -> Arc {
    let mut jets: Vec<Jet> = spec
        .base
        .iter()
        .map(|b| Jet::constant(b.clone(), n))
        .collect();
    for (name, v) in &spec.symbols {
        if let Some((i, j)) = parse_symbol(name) {
            jets[i] = jets[i].add(&Jet::monomial(v.clone(), j, n));
        }
    }
    if spec.family.carrier() == FamilyId::Origin {
        // λ₄ cancels the first two orders of 5(λ₃ − λ₆).
        for j in 1..=2 {
            let c = -int(5) * (spec.sym(&format!("l3_{j}")) - spec.sym(&format!("l6_{j}")));
            jets[3] = jets[3].add(&Jet::monomial(c, j, n));
        }
    }
    Arc::from_jets(n, VARS.iter().map(|v| v.to_string()).zip(jets))
}

/// Arc of a family member. Witness ids need `delta` and give the member at
/// that value of `δ`.
pub fn essential_family(spec: &FamilySpec, n: usize) -> Result<Arc> {
    spec.validate()?;
    if spec.family.is_witness() {
        let delta = spec.delta.clone().ok_or_else(|| {
            Error::Invalid(format!("witness {} needs a value of delta", spec.family))
        })?;
        let w = super::deformation_witness(spec, n)?;
        return Ok(super::witness::specialize(&w.arc, &delta));
    }
    Ok(build_arc(spec, n))
}

/// A base point on each stratum with small coordinates.
pub fn default_base(s: Stratum) -> [Rational; 6] {
    let z = Rational::zero;
    let q = |n, d| rat(n, d);
    match s {
        Stratum::I1 => [z(), q(1, 4), q(1, 4), q(1, 2), q(1, 4), q(1, 4)],
        Stratum::I2 => [z(), z(), q(1, 2), q(1, 4), z(), q(1, 4)],
        Stratum::I3 => [z(), q(1, 4), q(1, 2), z(), z(), q(1, 4)],
        Stratum::I4 => [z(), q(1, 20), q(3, 20), q(-1, 2), z(), q(1, 20)],
        Stratum::I1I3 => [z(), q(1, 4), q(1, 4), z(), z(), q(1, 4)],
        Stratum::I1I2 => [z(), z(), q(1, 4), q(1, 2), z(), q(1, 4)],
        Stratum::I2I3 => [z(), z(), q(1, 2), z(), z(), q(1, 4)],
        Stratum::I2I4(I24Branch::L6Zero) => [z(), z(), q(1, 10), q(-1, 2), z(), z()],
        Stratum::I2I4(I24Branch::L3TwiceL6) => [z(), z(), q(1, 5), q(-1, 2), z(), q(1, 10)],
        Stratum::I1I2I3 => [z(), z(), q(1, 4), z(), z(), q(1, 4)],
        Stratum::Origin | Stratum::NotInCenterSet => [z(), z(), z(), z(), z(), z()],
    }
}

/// Random member: unit symbols from `[−b, b] \ {0}`, free ones from
/// `[−b, b]`, redrawn until every genericity condition holds.
pub fn sample_family(
    id: FamilyId,
    base: &[Rational; 6],
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> FamilySpec {
    let carrier = id.carrier();
    loop {
        let mut symbols = BTreeMap::new();
        for u in carrier.units() {
            let v = loop {
                let v: i64 = rng.gen_range(-bound..=bound);
                if v != 0 {
                    break v;
                }
            };
            symbols.insert(u.to_string(), int(v));
        }
        for f in carrier.free() {
            symbols.insert(f.to_string(), int(rng.gen_range(-bound..=bound)));
        }
        let spec = FamilySpec {
            family: id,
            base: base.clone(),
            symbols,
            delta: None,
        };
        if spec.combos().iter().all(|(_, v)| !v.is_zero()) {
            return spec;
        }
    }
}

/// Samples members of one family over a fixed base point.
pub struct FamilySampler {
    pub family: FamilyId,
    pub base: [Rational; 6],
    pub truncation: usize,
    /// Symbols are drawn from `[−bound, bound]`.
    pub bound: i64,
}

impl FamilySampler {
    pub fn new(family: FamilyId) -> Self {
        FamilySampler {
            family,
            base: default_base(family.stratum()),
            truncation: crate::DEFAULT_TRUNCATION,
            bound: 9,
        }
    }

    /// Small symbols keep the perturbed fields inside the period annulus
    /// for the `ε` values the return map is sampled at.
    pub fn numeric(family: FamilyId) -> Self {
        FamilySampler {
            bound: 2,
            ..FamilySampler::new(family)
        }
    }
}

impl ArcSampler for FamilySampler {
    fn label(&self) -> String {
        self.family.to_string()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Arc> {
        let spec = sample_family(self.family, &self.base, self.bound, rng);
        essential_family(&spec, self.truncation)
    }
}

/// Random point of a component of the center set with coordinates in
/// `[−1/2, 1/2]`, built from multiples of `1/8`.
pub fn random_center(component: Stratum, rng: &mut ChaCha8Rng) -> Result<[Rational; 6]> {
    let mut r = |unit: bool| loop {
        let k: i64 = rng.gen_range(-4..=4);
        if !unit || k != 0 {
            break rat(k, 8);
        }
    };
    let z = Rational::zero;
    Ok(match component {
        Stratum::I1 => {
            let a = r(false);
            [z(), r(false), a.clone(), r(false), r(false), a]
        }
        Stratum::I2 => [z(), z(), r(false), r(false), z(), r(false)],
        Stratum::I3 => [z(), r(false), r(false), z(), z(), r(false)],
        Stratum::I4 => {
            // The component is a cone, so any point can be scaled into the box.
            let l6 = r(true);
            let l2 = r(false);
            let l3 = (&l2 * &l2 + int(2) * &l6 * &l6) / &l6;
            let l4 = -int(5) * (&l3 - &l6);
            let mut p = [z(), l2, l3, l4, z(), l6];
            let m = p
                .iter()
                .map(num_traits::Signed::abs)
                .max()
                .expect("six entries");
            let s = rat(1, 2) / m;
            if s < Rational::from_integer(1.into()) {
                for c in p.iter_mut() {
                    *c = &*c * &s;
                }
            }
            p
        }
        other => {
            return Err(Error::Invalid(format!(
                "random centers are drawn on I1..I4, not {other}"
            )))
        }
    })
}
