//! Arcs on the blow-up of `(x, y^{k+1})`.
//!
//! Origin-centered arcs split into `k+1` components: component `i ≤ k` holds
//! the arcs with `x₁ = … = x_{i−1} = 0`, `xᵢ ≠ 0`; component `k+1` holds
//! those with `x₁ = … = x_k = 0` and `(x_{k+1}, y₁) ≠ (0, 0)`. Arcs of still
//! higher order lie in the closure of component `k+1`.

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blowup::{
    exceptional_point, fiber_dimension_sample, order_of_arc, ArcSampler, Ideal, ProjPoint,
};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rational};
use crate::jets::{Arc, Jet};
use crate::rng::small_int;

pub const X: &str = "x";
pub const Y: &str = "y";

pub fn ak_ideal(k: u32) -> Result<Ideal> {
    if k < 1 {
        return Err(Error::Invalid(format!("k must be at least 1, got {k}")));
    }
    Ideal::new(
        vec![X.into(), Y.into()],
        vec![Poly::var(X), Poly::var(Y).pow(k + 1)],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AkComponentId {
    /// `1..=k+1`.
    pub index: u32,
    /// False for arcs with `(x_{k+1}, y₁) = (0, 0)`, which lie only in the
    /// closure of component `k+1`.
    pub generic: bool,
}

fn jets(arc: &Arc) -> Result<(&Jet, &Jet)> {
    let x = arc.get(X).ok_or_else(|| Error::UnknownVariable(X.into()))?;
    let y = arc.get(Y).ok_or_else(|| Error::UnknownVariable(Y.into()))?;
    Ok((x, y))
}

pub fn ak_classify(k: u32, arc: &Arc) -> Result<AkComponentId> {
    let ideal = ak_ideal(k)?;
    let (x, y) = jets(arc)?;
    let zero = Rational::zero();
    if x.coeff(0) != zero || y.coeff(0) != zero {
        return Err(Error::Invalid("arc is not centered at the origin".into()));
    }
    if order_of_arc(&ideal, arc)?.order.is_none() {
        return Err(Error::Undetermined(format!(
            "arc lies in the zero set up to truncation {}",
            arc.truncation()
        )));
    }
    if let Some(v) = x.valuation().finite() {
        if v <= k as usize {
            return Ok(AkComponentId {
                index: v as u32,
                generic: true,
            });
        }
    }
    let xk1 = if (k as usize + 1) < x.coeffs().len() {
        x.coeff(k as usize + 1)
    } else {
        zero.clone()
    };
    Ok(AkComponentId {
        index: k + 1,
        generic: xk1 != zero || y.coeff(1) != zero,
    })
}

pub fn ak_center(k: u32, arc: &Arc) -> Result<ProjPoint> {
    ak_classify(k, arc)?;
    exceptional_point(&ak_ideal(k)?, arc)
}

/// Random arcs of one component with integer coefficients in `[−9, 9]`.
pub struct AkSampler {
    pub k: u32,
    pub component: u32,
    pub truncation: usize,
}

impl ArcSampler for AkSampler {
    fn label(&self) -> String {
        format!("A{}:M{}", self.k, self.component)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Arc> {
        let n = self.truncation;
        let (k, i) = (self.k as usize, self.component as usize);
        let mut xs = vec![Rational::zero(); n + 1];
        let mut ys = xs.clone();
        loop {
            for (j, c) in xs.iter_mut().enumerate().skip(i) {
                *c = small_int(rng, j == i && i <= k);
            }
            for c in ys.iter_mut().skip(1) {
                *c = small_int(rng, false);
            }
            if i <= k || !xs[k + 1].is_zero() || !ys[1].is_zero() {
                break;
            }
        }
        Ok(Arc::from_jets(
            n,
            [
                (X.to_string(), Jet::new(xs, n)),
                (Y.to_string(), Jet::new(ys, n)),
            ],
        ))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentImage {
    pub component: u32,
    /// Projective dimension of the span of sampled centers.
    pub dimension: i64,
    pub points: Vec<ProjPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EssentialSet {
    pub k: u32,
    pub components: Vec<u32>,
    pub images: Vec<ComponentImage>,
    pub seed: u64,
    pub trials: usize,
}

/// The components whose sampled centers span all of `E = P¹`; a single such
/// component is already a minimal essential set.
pub fn ak_essential_set(k: u32, trials: usize, seed: u64) -> Result<EssentialSet> {
    let ideal = ak_ideal(k)?;
    let n = crate::DEFAULT_TRUNCATION.max(k as usize + 2);
    let mut images = Vec::new();
    for c in 1..=k + 1 {
        let s = AkSampler {
            k,
            component: c,
            truncation: n,
        };
        let fs = fiber_dimension_sample(&ideal, &[&s], trials, seed.wrapping_add(c as u64))?;
        let mut points = Vec::new();
        for t in 0..trials.min(8) {
            let mut rng = crate::rng::stream(seed.wrapping_add(c as u64), t as u64);
            let p = exceptional_point(&ideal, &s.sample(&mut rng)?)?;
            if !points.contains(&p) {
                points.push(p);
            }
        }
        images.push(ComponentImage {
            component: c,
            dimension: fs.dimension,
            points,
        });
    }
    let components: Vec<u32> = images
        .iter()
        .filter(|im| im.dimension == 1)
        .map(|im| im.component)
        .collect();
    if components.is_empty() {
        return Err(Error::Undetermined(
            "no single component covers the exceptional divisor".into(),
        ));
    }
    Ok(EssentialSet {
        k,
        components,
        images,
        seed,
        trials,
    })
}
