//! Deformation witnesses for closure relations between arc families.
//!
//! A witness is an arc whose coefficients are polynomials in an auxiliary
//! parameter `δ`. At `δ = 0` it is the lower family member; for generic `δ`
//! it is centered on a larger stratum. The closure relation is confirmed when
//! the projective point of the generic member tends, as `δ → 0`, to the
//! point of the lower member.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::family::build_arc;
use super::{
    base_of, classify_stratum, localized_generators, FamilyId, FamilySpec, I24Branch, Stratum, VARS,
};
use crate::blowup::{order_of_arc, ProjPoint};
use crate::error::{Error, Result};
use crate::exactalg::{int, Poly, Rational};
use crate::jets::{Arc, Jet};

pub const DELTA: &str = "delta";

#[derive(Clone, Debug)]
pub struct Witness {
    pub id: FamilyId,
    pub lower: FamilyId,
    pub upper: Stratum,
    pub arc: Arc<Poly>,
    /// Built by analogy rather than taken from a worked construction.
    pub extrapolated: bool,
}

fn delta() -> Poly {
    Poly::var(DELTA)
}

fn r2p(r: &Rational) -> Poly {
    Poly::constant(r.clone())
}

struct Lambda {
    n: usize,
    jets: Vec<Jet<Poly>>,
}

impl Lambda {
    fn from_arc(arc: &Arc) -> Self {
        let n = arc.truncation();
        let jets = VARS
            .iter()
            .map(|v| arc.get(v).expect("kapteyn arc").map(r2p))
            .collect();
        Lambda { n, jets }
    }

    /// `λᵢ += c·ε^k`.
    fn add(&mut self, i: usize, c: Poly, k: usize) {
        self.jets[i] = self.jets[i].add(&Jet::monomial(c, k, self.n));
    }

    fn into_arc(self, n: usize) -> Arc<Poly> {
        Arc::from_jets(n, VARS.iter().map(|v| v.to_string()).zip(self.jets))
    }
}

/// The witness attached to a family member; `spec.family` may be either the
/// lower family or its witness id.
pub fn deformation_witness(spec: &FamilySpec, n: usize) -> Result<Witness> {
    let id = match spec.family.witness() {
        Some(w) => w,
        None if spec.family.is_witness() => spec.family,
        None => {
            return Err(Error::Invalid(format!(
                "family {} has no deformation witness",
                spec.family
            )))
        }
    };
    let lower = id.lower().expect("witness");
    let mut low_spec = spec.clone();
    low_spec.family = lower;
    low_spec.delta = None;
    low_spec.validate()?;
    let s = |name: &str| r2p(low_spec.symbols.get(name).expect("validated symbol"));
    let d = delta();
    let (upper, extrapolated, arc) = match id {
        FamilyId::WI13 => {
            let mut l = Lambda::from_arc(&build_arc(&low_spec, n));
            l.add(0, &d * &s("l1_4"), 3);
            l.add(4, &d * &s("l5_3"), 2);
            l.add(3, &d * &s("l4_2"), 1);
            (Stratum::I1I3, false, l.into_arc(n))
        }
        FamilyId::WI12 => {
            let mut l = Lambda::from_arc(&build_arc(&low_spec, n));
            l.add(0, &d * &s("l1_2"), 1);
            l.add(1, &d * &s("l2_1"), 0);
            l.add(4, &d * &s("l5_1"), 0);
            (Stratum::I1, false, l.into_arc(n))
        }
        FamilyId::WI23 => {
            let mut l = Lambda::from_arc(&build_arc(&low_spec, n));
            l.add(0, &d * &s("l1_2"), 1);
            l.add(4, &d * &s("l5_2"), 1);
            l.add(1, &d * &s("l2_1"), 0);
            (Stratum::I3, true, l.into_arc(n))
        }
        FamilyId::WI24 => {
            let mut l = Lambda::from_arc(&build_arc(&low_spec, n));
            l.add(0, &d * &s("l1_2"), 1);
            l.add(4, &d * &s("l5_2"), 1);
            l.add(1, &d * &s("l2_1"), 0);
            // Move the base point along I4 so that λ₆(λ₃−2λ₆) = λ₂(0)².
            let l21 = low_spec.symbols["l2_1"].clone();
            let d2 = d.pow(2);
            let branch = match classify_stratum(&spec.base) {
                Stratum::I2I4(b) => b,
                other => {
                    return Err(Error::Genericity(format!(
                        "W_I24 needs a base on I2∩I4, got {other}"
                    )))
                }
            };
            match branch {
                I24Branch::L6Zero => {
                    let s = &l21 * &l21 / &spec.base[2];
                    l.add(5, &d2 * &r2p(&s), 0);
                    l.add(2, &d2 * &r2p(&(int(2) * &s)), 0);
                    l.add(3, &d2 * &r2p(&(int(-5) * &s)), 0);
                }
                I24Branch::L3TwiceL6 => {
                    let s = &l21 * &l21 / &spec.base[5];
                    l.add(2, &d2 * &r2p(&s), 0);
                    l.add(3, &d2 * &r2p(&(int(-5) * &s)), 0);
                }
            }
            let extrapolated = branch == I24Branch::L3TwiceL6;
            (Stratum::I4, extrapolated, l.into_arc(n))
        }
        FamilyId::WI123 => {
            let mut l = Lambda::from_arc(&build_arc(&low_spec, n));
            l.add(0, &d * &s("l1_4"), 3);
            l.add(4, &d * &s("l5_3"), 2);
            l.add(1, &d * &s("l2_1"), 0);
            (Stratum::I1I3, false, l.into_arc(n))
        }
        FamilyId::WOrigin => (Stratum::I1I2I3, false, origin_witness(&low_spec, n)?),
        _ => unreachable!("witness ids only"),
    };
    Ok(Witness {
        id,
        lower,
        upper,
        arc,
        extrapolated,
    })
}

/// Deformation of an origin arc into arcs centered at `(0,0,δ,0,0,δ)`.
///
/// Write `X = λ₆`, `Y = λ₃ − 2λ₆`, `Z = λ₂`, so that the quartic factor is
/// `XY − Z² = ε²q(ε)`. With `X + δ`, `Y + δ(η − 1)`, `Z + δζ` the factor
/// becomes `W·q` where `W = ε² + w₁δε + w₂δ²`, provided the jets `η, ζ`
/// (both vanishing at `ε = 0`) solve
/// `x̂(η − 1) + ŷ − 2ẑζ = w₁q` and `η − ζ² = 1 + w₂q` with hats meaning
/// division by `ε`. These are triangular in the `ε`-coefficients because
/// `ẑ(0) = λ₂,₁ ≠ 0`, so everything stays polynomial in `δ`. The remaining
/// coordinates carry the same factor `W`:
/// `λ₁ = ε⁴W·(λ₁/ε⁶)`, `λ₅ = ε³W·(λ₅/ε⁵)`,
/// `λ₄ + 5(λ₃−λ₆) = εW·((λ₄ + 5(λ₃−λ₆))/ε³)`.
fn origin_witness(spec: &FamilySpec, n: usize) -> Result<Arc<Poly>> {
    let m = n + 6;
    let low = build_arc(spec, m);
    let lam = |i: usize| low.get(VARS[i]).expect("kapteyn arc").clone();
    let (l1, l2, l3, l4, l5, l6) = (lam(0), lam(1), lam(2), lam(3), lam(4), lam(5));
    let x = l6.clone();
    let y = l3.sub(&l6.scale(&int(2)));
    let z = l2.clone();
    let down = |j: &Jet, k: usize, what: &str| {
        j.shift_down(k)
            .ok_or_else(|| Error::Genericity(format!("{what} must vanish to order {k}")))
    };
    let xh = down(&x, 1, "l6")?;
    let yh = down(&y, 1, "l3 - 2*l6")?;
    let zh = down(&z, 1, "l2")?;
    let q = down(&x.mul(&y).sub(&z.mul(&z)), 2, "l3*l6 - 2*l6^2 - l2^2")?;
    let p2 = q.coeff(0);
    let z0 = zh.coeff(0);
    if p2.is_zero() || z0.is_zero() {
        return Err(Error::Genericity(
            "origin witness needs l2_1 and the quadric coefficient nonzero".into(),
        ));
    }
    let w2 = -Rational::one() / &p2;
    let w1 = (yh.coeff(0) - xh.coeff(0)) / &p2;
    let k_max = q.truncation();
    let mut eta = vec![Rational::zero(); k_max + 1];
    let mut zeta = vec![Rational::zero(); k_max + 1];
    for k in 0..=k_max {
        let mut e = &w2 * q.coeff(k);
        if k == 0 {
            e += Rational::one();
        }
        for j in 1..k {
            e += &zeta[j] * &zeta[k - j];
        }
        eta[k] = e;
        let mut r = yh.coeff(k) - &w1 * q.coeff(k);
        for j in 0..=k {
            let em1 = if j == 0 {
                &eta[0] - Rational::one()
            } else {
                eta[j].clone()
            };
            r += xh.coeff(k - j) * em1;
        }
        for j in 1..=k {
            r -= int(2) * zh.coeff(j) * &zeta[k - j];
        }
        zeta[k] = r / (int(2) * &z0);
    }
    debug_assert!(eta[0].is_zero() && zeta[0].is_zero());
    let d = delta();
    let pj = |j: &Jet| j.map(r2p);
    let eta = Jet::new(eta.iter().map(r2p).collect(), k_max);
    let zeta = Jet::new(zeta.iter().map(r2p).collect(), k_max);
    let dj = |p: Poly| Jet::constant(p, m);
    let l6d = pj(&l6).add(&dj(d.clone()));
    let l3d = pj(&l3).add(&dj(d.clone())).add(&eta.scale(&d));
    let l2d = pj(&l2).add(&zeta.scale(&d));
    let dd = l3d.sub(&l6d);
    let w = Jet::new(vec![&d.pow(2) * &r2p(&w2), &d * &r2p(&w1), Poly::one()], m);
    let p1 = down(&l4.add(&l3.sub(&l6).scale(&int(5))), 3, "l4 + 5*l3 - 5*l6")?;
    let a = down(&l1, 6, "l1")?;
    let b = down(&l5, 5, "l5")?;
    let l4d = w.mul(&pj(&p1)).shift_up(1).sub(&dd.scale(&r2p(&int(5))));
    let l1d = w.mul(&pj(&a)).shift_up(4);
    let l5d = w.mul(&pj(&b)).shift_up(3);
    let jets = [l1d, l2d, l3d, l4d, l5d, l6d];
    Ok(Arc::from_jets(
        n,
        VARS.iter()
            .map(|v| v.to_string())
            .zip(jets.into_iter().map(|j| j.truncate(n))),
    ))
}

/// Value of a `δ`-polynomial arc at a rational `δ`.
pub fn specialize(arc: &Arc<Poly>, delta: &Rational) -> Arc {
    let pt: BTreeMap<String, Rational> = [(DELTA.to_string(), delta.clone())].into();
    arc.map(|p| p.eval(&pt).expect("only delta occurs"))
}

/// Replaces `δ` by `δ²` in one coordinate; used as a negative control.
pub fn tamper_exponent(w: &Witness, coordinate: usize) -> Witness {
    let mut arc = w.arc.clone();
    let var = VARS[coordinate];
    let j = arc
        .get(var)
        .expect("kapteyn arc")
        .map(|p| p.substitute(DELTA, &delta().pow(2)));
    arc.set(var, j);
    Witness { arc, ..w.clone() }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub witness: FamilyId,
    pub lower: FamilyId,
    pub upper: Stratum,
    pub extrapolated: bool,
    /// The witness at `δ = 0` is the lower family member.
    pub at_zero_matches: bool,
    pub generic_stratum: Stratum,
    pub generic_order: Option<usize>,
    pub expected_order: usize,
    pub lower_order: Option<usize>,
    pub lower_point: Option<ProjPoint>,
    pub limit_point: Option<ProjPoint>,
    pub pass: bool,
}

/// Checks the closure relation carried by a witness against its lower member,
/// using the generators localized at the lower stratum.
pub fn closure_check(w: &Witness, spec: &FamilySpec, n: usize) -> Result<ClosureReport> {
    let mut low_spec = spec.clone();
    low_spec.family = w.lower;
    low_spec.delta = None;
    low_spec.validate()?;
    let low = build_arc(&low_spec, n);
    let ideal = localized_generators(classify_stratum(&low_spec.base))?;
    let lo = order_of_arc(&ideal, &low)?;
    let at_zero_matches = specialize(&w.arc, &Rational::zero()) == low;
    let generic_stratum = classify_stratum(&base_of(&w.arc));
    let gen = order_of_arc(&ideal, &w.arc)?;
    let limit_point = gen.limit_point(DELTA);
    let lower_point = lo.point();
    let expected_order = w.id.order();
    let pass = at_zero_matches
        && generic_stratum.same_kind(&w.upper)
        && gen.order == Some(expected_order)
        && lo.order == Some(w.lower.order())
        && limit_point.is_some()
        && limit_point == lower_point;
    Ok(ClosureReport {
        witness: w.id,
        lower: w.lower,
        upper: w.upper,
        extrapolated: w.extrapolated,
        at_zero_matches,
        generic_stratum,
        generic_order: gen.order,
        expected_order,
        lower_order: lo.order,
        lower_point,
        limit_point,
        pass,
    })
}

/// Witnesses with the lower members they deform: every witness on `draws`
/// seeded members, plus the second `I₂∩I₄` branch.
pub fn closure_cases(seed: u64, draws: usize, n: usize) -> Result<Vec<(Witness, FamilySpec)>> {
    let ids = [
        FamilyId::WI13,
        FamilyId::WI12,
        FamilyId::WI23,
        FamilyId::WI24,
        FamilyId::WI123,
        FamilyId::WOrigin,
    ];
    let mut bases: Vec<(FamilyId, [Rational; 6])> = ids
        .iter()
        .map(|id| (*id, super::default_base(id.stratum())))
        .collect();
    bases.push((
        FamilyId::WI24,
        super::default_base(Stratum::I2I4(I24Branch::L3TwiceL6)),
    ));
    let mut out = Vec::new();
    for (k, (id, base)) in bases.iter().enumerate() {
        for t in 0..draws {
            let mut rng = crate::rng::stream(seed, ((k as u64) << 32) | t as u64);
            let spec = super::sample_family(*id, base, 9, &mut rng);
            let w = deformation_witness(&spec, n)?;
            out.push((w, spec));
        }
    }
    Ok(out)
}

pub fn closure_suite(seed: u64, draws: usize, n: usize) -> Result<Vec<ClosureReport>> {
    closure_cases(seed, draws, n)?
        .iter()
        .map(|(w, spec)| closure_check(w, spec, n))
        .collect()
}

/// The suite with `δ` replaced by `δ²` in `λ₁` of every witness. Each
/// report is expected to fail: the `λ₁` entry of the generic point then
/// vanishes to higher order in `δ` and the limit point loses it.
pub fn tampered_suite(seed: u64, n: usize) -> Result<Vec<ClosureReport>> {
    closure_cases(seed, 1, n)?
        .iter()
        .map(|(w, spec)| closure_check(&tamper_exponent(w, 0), spec, n))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "crate::exactalg::ser_rational")]
    pub delta: Rational,
    pub order: Option<usize>,
    pub point: Option<ProjPoint>,
    /// The generic `δ`-polynomial point evaluated at this `δ`.
    pub expected_point: Option<ProjPoint>,
    pub consistent: bool,
}

/// Specializes a witness at each `δ` and compares the order and point with
/// the symbolic generic member evaluated there.
pub fn delta_sweep(w: &Witness, spec: &FamilySpec, deltas: &[Rational]) -> Result<Vec<SweepRow>> {
    let ideal = localized_generators(classify_stratum(&spec.base))?;
    let gen = order_of_arc(&ideal, &w.arc)?;
    deltas
        .iter()
        .map(|d| {
            let r = order_of_arc(&ideal, &specialize(&w.arc, d))?;
            let pt: BTreeMap<String, Rational> = [(DELTA.to_string(), d.clone())].into();
            let expected: Vec<Rational> = gen
                .leading
                .iter()
                .map(|p| p.eval(&pt))
                .collect::<Result<_>>()?;
            let expected_point = gen.order.and(ProjPoint::from_rationals(&expected));
            let point = r.point();
            Ok(SweepRow {
                delta: d.clone(),
                order: r.order,
                consistent: r.order == gen.order && point.is_some() && point == expected_point,
                point,
                expected_point,
            })
        })
        .collect()
}
