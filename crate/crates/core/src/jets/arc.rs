use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Coeff, Jet};
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Poly, Rational};

/// A jet for each variable, all truncated at the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc<C = Rational> {
    truncation: usize,
    vars: BTreeMap<String, Jet<C>>,
}

impl<C: Coeff> Arc<C> {
    pub fn new(truncation: usize) -> Self {
        Arc {
            truncation,
            vars: BTreeMap::new(),
        }
    }

    pub fn from_jets(truncation: usize, jets: impl IntoIterator<Item = (String, Jet<C>)>) -> Self {
        let mut a = Arc::new(truncation);
        for (k, v) in jets {
            a.set(&k, v);
        }
        a
    }

    /// Stores a jet, re-truncated to the arc's order.
    pub fn set(&mut self, var: &str, jet: Jet<C>) {
        let j = jet.truncate(self.truncation);
        self.vars.insert(var.to_string(), j);
    }

    pub fn get(&self, var: &str) -> Option<&Jet<C>> {
        self.vars.get(var)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn vars(&self) -> impl Iterator<Item = (&String, &Jet<C>)> {
        self.vars.iter()
    }

    /// `α(0)`.
    pub fn base_point(&self) -> BTreeMap<String, C> {
        self.vars
            .iter()
            .map(|(k, j)| (k.clone(), j.coeff(0)))
            .collect()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Arc<D> {
        Arc {
            truncation: self.truncation,
            vars: self
                .vars
                .iter()
                .map(|(k, j)| (k.clone(), j.map(&f)))
                .collect(),
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.truncation);
        Arc {
            truncation: n,
            vars: self
                .vars
                .iter()
                .map(|(k, j)| (k.clone(), j.truncate(n)))
                .collect(),
        }
    }
}

/// Substitutes the arc into `p`, Horner style in the polynomial's variable
/// order. Every variable that occurs in `p` must be assigned.
pub fn eval_on_arc<C: Coeff>(p: &Poly, arc: &Arc<C>) -> Result<Jet<C>> {
    let n = arc.truncation();
    let mut jets = Vec::with_capacity(p.vars().len());
    for (i, v) in p.vars().iter().enumerate() {
        let used = p.terms().any(|(m, _)| m.0[i] > 0);
        match arc.get(v) {
            Some(j) => jets.push(Some(j)),
            None if used => return Err(Error::UnknownVariable(v.clone())),
            None => jets.push(None),
        }
    }
    let terms: Vec<(&Monomial, &Rational)> = p.terms().collect();
    Ok(horner(&terms, 0, &jets, n))
}

fn horner<C: Coeff>(
    terms: &[(&Monomial, &Rational)],
    var: usize,
    jets: &[Option<&Jet<C>>],
    n: usize,
) -> Jet<C> {
    if terms.is_empty() {
        return Jet::zero(n);
    }
    if var == jets.len() {
        let c = terms
            .iter()
            .fold(Rational::zero(), |acc, (_, c)| acc + (*c).clone());
        return Jet::constant(C::from_rational(&c), n);
    }
    let top = terms.iter().map(|(m, _)| m.0[var]).max().unwrap_or(0);
    if top == 0 {
        return horner(terms, var + 1, jets, n);
    }
    let x = jets[var].expect("used variables are assigned");
    let mut acc = Jet::zero(n);
    for k in (0..=top).rev() {
        let slice: Vec<(&Monomial, &Rational)> = terms
            .iter()
            .filter(|(m, _)| m.0[var] == k)
            .copied()
            .collect();
        acc = acc.mul(x).add(&horner(&slice, var + 1, jets, n));
    }
    acc
}

/// `α(ε) ↦ α(cε)`.
pub fn reparameterize(arc: &Arc<Rational>, c: &Rational) -> Result<Arc<Rational>> {
    if c.is_zero() {
        return Err(Error::Invalid(
            "reparameterization factor must be nonzero".into(),
        ));
    }
    Ok(Arc {
        truncation: arc.truncation,
        vars: arc
            .vars
            .iter()
            .map(|(k, j)| (k.clone(), j.reparameterize(c)))
            .collect(),
    })
}
