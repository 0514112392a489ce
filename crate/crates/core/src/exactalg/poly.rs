use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// Zero coefficients are never stored. Operands with different variable
/// lists are aligned on the union of their names, so equality is semantic:
/// `x` over `[x]` equals `x` over `[x, y]`.
#[derive(Clone, Debug, Default)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero_in(vars: &[&str]) -> Poly {
        Poly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Poly {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![]), c);
        }
        p
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(Rational::from_integer(c.into()))
    }

    pub fn var(name: &str) -> Poly {
        Poly::from_terms(vec![name.to_string()], vec![(vec![1], Rational::one())])
    }

    /// Builds from (exponents, coefficient) pairs; repeated monomials add up.
    pub fn from_terms(vars: Vec<String>, terms: Vec<(Vec<u32>, Rational)>) -> Poly {
        let n = vars.len();
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent length must match variable count");
            let slot = map.entry(Monomial(e)).or_insert_with(Rational::zero);
            *slot += c;
        }
        map.retain(|_, c| !c.is_zero());
        Poly { vars, terms: map }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.degree() == 0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest total degree in the listed variables only.
    pub fn degree_in(&self, names: &[&str]) -> Option<u32> {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.var_index(n)).collect();
        self.terms
            .keys()
            .map(|m| idx.iter().map(|&i| m.0[i]).sum())
            .max()
    }

    /// Re-express over `vars`, which must contain every variable actually used.
    pub fn align(&self, vars: &[String]) -> Result<Poly> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = k,
                    None => return Err(Error::UnknownVariable(self.vars[i].clone())),
                }
            }
            terms.insert(Monomial(e), c.clone());
        }
        Ok(Poly {
            vars: vars.to_vec(),
            terms,
        })
    }

    fn union_vars(&self, other: &Poly) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned_pair(&self, other: &Poly) -> (Poly, Poly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.union_vars(other);
        (
            self.align(&vars).expect("union contains all variables"),
            other.align(&vars).expect("union contains all variables"),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative. Differentiating by a name the polynomial does not
    /// know is an error; use [`Poly::diff_or_zero`] for forms over fixed
    /// coordinates.
    pub fn diff(&self, var: &str) -> Result<Poly> {
        let i = self
            .var_index(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[i];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            out.insert(Monomial(e), c * Rational::from_integer(k.into()));
        }
        Ok(Poly {
            vars: self.vars.clone(),
            terms: out,
        })
    }

    pub fn diff_or_zero(&self, var: &str) -> Poly {
        self.diff(var).unwrap_or_else(|_| Poly::zero())
    }

    /// Antiderivative in `var` with zero constant of integration.
    pub fn integrate(&self, var: &str) -> Poly {
        let vars = if self.var_index(var).is_some() {
            self.vars.clone()
        } else {
            let mut v = self.vars.clone();
            v.push(var.to_string());
            v
        };
        let p = self.align(&vars).expect("superset");
        let i = p.var_index(var).expect("present");
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e[i] += 1;
                (Monomial(e.clone()), c / Rational::from_integer(e[i].into()))
            })
            .collect();
        Poly { vars, terms }
    }

    /// Substitutes `value` for `var`.
    pub fn substitute(&self, var: &str, value: &Poly) -> Poly {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut rest = m.0.clone();
            rest[i] = 0;
            let mono = Poly {
                vars: self.vars.clone(),
                terms: std::iter::once((Monomial(rest), c.clone())).collect(),
            };
            acc = &acc + &(&mono * &value.pow(m.0[i]));
        }
        acc.drop_unused()
    }

    /// Evaluates at a rational point; every variable with a nonzero exponent
    /// must be assigned.
    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = point
                    .get(&self.vars[i])
                    .ok_or_else(|| Error::UnknownVariable(self.vars[i].clone()))?;
                t *= num_traits::pow(v.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Coefficients of powers of `var`: `self = sum_k out[k] * var^k`.
    pub fn coefficients_in(&self, var: &str) -> Vec<Poly> {
        let Some(i) = self.var_index(var) else {
            return vec![self.clone()];
        };
        let top = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, Rational)>> = vec![Vec::new(); top + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[i], 0);
            buckets[k as usize].push((e, c.clone()));
        }
        buckets
            .into_iter()
            .map(|t| Poly::from_terms(self.vars.clone(), t).drop_var(var))
            .collect()
    }

    /// Smallest exponent of `var` over all terms (None for the zero polynomial).
    pub fn valuation_in(&self, var: &str) -> Option<u32> {
        let i = self.var_index(var);
        self.terms.keys().map(|m| i.map_or(0, |i| m.0[i])).min()
    }

    fn drop_var(self, var: &str) -> Poly {
        match self.var_index(var) {
            Some(i) if self.terms.keys().all(|m| m.0[i] == 0) => {
                let mut vars = self.vars;
                vars.remove(i);
                let terms = self
                    .terms
                    .into_iter()
                    .map(|(mut m, c)| {
                        m.0.remove(i);
                        (m, c)
                    })
                    .collect();
                Poly { vars, terms }
            }
            _ => self,
        }
    }

    /// Removes variables that do not occur in any term.
    pub fn drop_unused(&self) -> Poly {
        let used: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m.0[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect();
        self.align(&used).expect("used variables cover all terms")
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned_pair(other);
        a.terms == b.terms
    }
}

impl Eq for Poly {}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut a, b) = self.aligned_pair(rhs);
        for (m, c) in b.terms {
            match a.terms.get_mut(&m) {
                Some(slot) => {
                    *slot += c;
                    if slot.is_zero() {
                        a.terms.remove(&m);
                    }
                }
                None => {
                    a.terms.insert(m, c);
                }
            }
        }
        a
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let (a, b) = self.aligned_pair(rhs);
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let slot = out.entry(Monomial(e)).or_insert_with(Rational::zero);
                *slot += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly {
            vars: a.vars,
            terms: out,
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { (&self).$f(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Zero for Poly {
    fn zero() -> Poly {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Poly {
        Poly::int(1)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.degree() == 0 {
                factors.push(a.to_string());
            }
            for (i, &k) in m.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
