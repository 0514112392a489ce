//! Orders of arcs with respect to an ideal and their images on the
//! exceptional divisor of the blow-up.
//!
//! For `I = (u₁, …, u_N)` and an arc `α`, the order is the smallest
//! `ε`-valuation of the `uᵢ(α(ε))`; the leading coefficients form a vector
//! whose projective class is the point where the lifted arc meets the
//! exceptional divisor.

pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{parse_poly, Poly, Rational};
use crate::jets::{eval_on_arc, Arc, Coeff, Jet, Valuation};
use linalg::{EchelonBasis, Insert};

/// Polynomial ideal given by generators over a fixed variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    vars: Vec<String>,
    generators: Vec<Poly>,
}

impl Ideal {
    pub fn new(vars: Vec<String>, generators: Vec<Poly>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invalid(
                "an ideal needs at least one generator".into(),
            ));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            if g.is_zero() {
                return Err(Error::Invalid(format!("generator {i} is zero")));
            }
            gens.push(g.align(&vars)?);
        }
        Ok(Ideal {
            vars,
            generators: gens,
        })
    }

    /// Generators in text form over the given variables.
    pub fn parse(vars: &[&str], generators: &[&str]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = generators
            .iter()
            .map(|g| parse_poly(g, Some(&vars)))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(vars, gens)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Point of projective space in canonical integer form: coprime entries,
/// first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Vec<BigInt>);

impl ProjPoint {
    /// None for the zero vector.
    pub fn from_rationals(v: &[Rational]) -> Option<Self> {
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        let lcm = v.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let mut ints: Vec<BigInt> = v.iter().map(|r| (r * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
        let first_neg = ints
            .iter()
            .find(|a| !a.is_zero())
            .is_some_and(|a| a.is_negative());
        for a in ints.iter_mut() {
            *a = &*a / &g;
            if first_neg {
                *a = -&*a;
            }
        }
        Some(ProjPoint(ints))
    }

    pub fn from_ints(v: &[i64]) -> Option<Self> {
        let r: Vec<Rational> = v
            .iter()
            .map(|&a| Rational::from_integer(a.into()))
            .collect();
        ProjPoint::from_rationals(&r)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|a| a.to_string()).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.to_strings();
        write!(f, "[{}]", s.join(":"))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Order of an arc and the leading coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderResult<C = Rational> {
    /// None means every generator vanished to the truncation order.
    pub order: Option<usize>,
    pub leading: Vec<C>,
    pub truncation: usize,
}

impl OrderResult<Rational> {
    pub fn point(&self) -> Option<ProjPoint> {
        self.order
            .and_then(|_| ProjPoint::from_rationals(&self.leading))
    }
}

impl OrderResult<Poly> {
    /// Limit of the projective point as the parameter `var` tends to 0:
    /// divide by the lowest power of `var` present and set it to zero.
    pub fn limit_point(&self, var: &str) -> Option<ProjPoint> {
        self.order?;
        let m = self
            .leading
            .iter()
            .filter_map(|p| p.valuation_in(var))
            .min()?;
        let v: Vec<Rational> = self
            .leading
            .iter()
            .map(|p| {
                p.coefficients_in(var)
                    .get(m as usize)
                    .map(|c| c.constant_term())
                    .unwrap_or_else(Rational::zero)
            })
            .collect();
        ProjPoint::from_rationals(&v)
    }
}

/// Generator values along the arc.
pub fn generator_jets<C: Coeff>(ideal: &Ideal, arc: &Arc<C>) -> Result<Vec<Jet<C>>> {
    ideal
        .generators
        .iter()
        .map(|g| eval_on_arc(g, arc))
        .collect()
}

pub fn order_of_arc<C: Coeff>(ideal: &Ideal, arc: &Arc<C>) -> Result<OrderResult<C>> {
    let jets = generator_jets(ideal, arc)?;
    let order = jets.iter().filter_map(|j| j.valuation().finite()).min();
    let leading = match order {
        Some(k) => jets.iter().map(|j| j.coeff(k)).collect(),
        None => vec![C::zero(); jets.len()],
    };
    Ok(OrderResult {
        order,
        leading,
        truncation: arc.truncation(),
    })
}

pub fn exceptional_point(ideal: &Ideal, arc: &Arc) -> Result<ProjPoint> {
    let r = order_of_arc(ideal, arc)?;
    r.point().ok_or_else(|| {
        Error::Undetermined(format!(
            "arc lies in the zero set up to truncation {}",
            r.truncation
        ))
    })
}

pub fn in_zero_set<C: Coeff>(ideal: &Ideal, arc: &Arc<C>) -> Result<bool> {
    Ok(generator_jets(ideal, arc)?
        .iter()
        .all(|j| j.valuation() == Valuation::ZeroToTruncation))
}

/// Membership in `M_k`, the arcs of order at most `k`.
pub fn filtration_level(ideal: &Ideal, arc: &Arc, k: usize) -> Result<bool> {
    let r = order_of_arc(ideal, arc)?;
    match r.order {
        Some(o) => Ok(o <= k),
        // The order is known to exceed the truncation.
        None if k <= r.truncation => Ok(false),
        None => Err(Error::Undetermined(format!(
            "order exceeds truncation {}; cannot compare with {k}",
            r.truncation
        ))),
    }
}

/// Source of random arcs for sampling.
pub trait ArcSampler: Sync {
    fn label(&self) -> String;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Arc>;
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSample {
    pub dimension: i64,
    pub rank: usize,
    pub samples: usize,
    pub undetermined: usize,
    /// Orders seen per sampler label.
    pub orders: BTreeMap<String, Vec<usize>>,
}

/// Projective dimension of the span of sampled exceptional points.
///
/// Draw `t` of sampler `f` uses the random stream `(seed, f·2³² + t)`, so the
/// result does not depend on how the work is split across threads.
pub fn fiber_dimension_sample(
    ideal: &Ideal,
    samplers: &[&dyn ArcSampler],
    trials: usize,
    seed: u64,
) -> Result<FiberSample> {
    let jobs: Vec<(usize, usize)> = (0..samplers.len())
        .flat_map(|f| (0..trials).map(move |t| (f, t)))
        .collect();
    let results: Vec<Result<(usize, OrderResult)>> = jobs
        .par_iter()
        .map(|&(f, t)| {
            let mut rng = crate::rng::stream(seed, ((f as u64) << 32) | t as u64);
            let arc = samplers[f].sample(&mut rng)?;
            Ok((f, order_of_arc(ideal, &arc)?))
        })
        .collect();
    let mut basis = EchelonBasis::new(ideal.len());
    let mut undetermined = 0;
    let mut orders: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for r in results {
        let (f, o) = r?;
        match o.order {
            Some(k) => {
                let set = orders.entry(samplers[f].label()).or_default();
                if !set.contains(&k) {
                    set.push(k);
                    set.sort_unstable();
                }
                basis.insert(&o.leading, &[]);
            }
            None => undetermined += 1,
        }
    }
    if undetermined == jobs.len() {
        return Err(Error::Undetermined(
            "every sampled arc is undetermined".into(),
        ));
    }
    Ok(FiberSample {
        dimension: basis.rank() as i64 - 1,
        rank: basis.rank(),
        samples: jobs.len(),
        undetermined,
        orders,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub pass: bool,
    pub arcs: usize,
    pub groups: usize,
    /// Rank of the span of leading vectors under the first ideal, per base point.
    pub ranks: Vec<usize>,
    pub mismatches: Vec<String>,
}

/// Checks that two generator lists give the same orders on every arc and
/// that, for arcs sharing a base point, the leading vectors are related by
/// one fixed linear map.
pub fn generator_invariance_check(a: &Ideal, b: &Ideal, arcs: &[Arc]) -> Result<InvarianceReport> {
    let mut groups: BTreeMap<String, EchelonBasis> = BTreeMap::new();
    let mut mismatches = Vec::new();
    for (i, arc) in arcs.iter().enumerate() {
        let ra = order_of_arc(a, arc)?;
        let rb = order_of_arc(b, arc)?;
        if ra.order != rb.order {
            mismatches.push(format!(
                "arc {i}: orders {:?} vs {:?}; arc {}",
                ra.order,
                rb.order,
                crate::io::arc_to_json(arc)
            ));
            continue;
        }
        if ra.order.is_none() {
            continue;
        }
        let key = format!("{:?}", arc.base_point());
        let basis = groups
            .entry(key)
            .or_insert_with(|| EchelonBasis::new(a.len()));
        if let Insert::Dependent(rest) = basis.insert(&ra.leading, &rb.leading) {
            if rest.iter().any(|c| !c.is_zero()) {
                mismatches.push(format!(
                    "arc {i}: leading vectors break the linear correspondence; arc {}",
                    crate::io::arc_to_json(arc)
                ));
            }
        }
    }
    Ok(InvarianceReport {
        pass: mismatches.is_empty(),
        arcs: arcs.len(),
        groups: groups.len(),
        ranks: groups.values().map(EchelonBasis::rank).collect(),
        mismatches,
    })
}
