//! Truncated power series in `ε` and arcs built from them.
//!
//! Coefficients are generic so that the same code runs over the rationals and
//! over polynomials in an auxiliary parameter (used for deformation witnesses).

mod arc;

pub use arc::{eval_on_arc, reparameterize, Arc};

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactalg::{Poly, Rational};

pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
}

impl Coeff for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Coeff for Poly {
    fn from_rational(r: &Rational) -> Self {
        Poly::constant(r.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(usize),
    /// Every stored coefficient vanishes.
    ZeroToTruncation,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::ZeroToTruncation => None,
        }
    }
}

/// `c₀ + c₁ε + … + c_N ε^N`, known modulo `ε^{N+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<C = Rational> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Jet<C> {
    /// Coefficients beyond `n` are dropped, missing ones are zero.
    pub fn new(mut coeffs: Vec<C>, n: usize) -> Self {
        coeffs.resize(n + 1, C::zero());
        Jet { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Jet::new(Vec::new(), n)
    }

    pub fn constant(c: C, n: usize) -> Self {
        Jet::new(vec![c], n)
    }

    /// `c·ε^k`.
    pub fn monomial(c: C, k: usize, n: usize) -> Self {
        let mut j = Jet::zero(n);
        if k <= n {
            j.coeffs[k] = c;
        }
        j
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn set_coeff(&mut self, i: usize, c: C) {
        if i < self.coeffs.len() {
            self.coeffs[i] = c;
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        Jet::new(self.coeffs.iter().take(n + 1).cloned().collect(), n)
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Valuation::Finite(k),
            None => Valuation::ZeroToTruncation,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation() == Valuation::ZeroToTruncation
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.truncation().min(o.truncation());
        Jet {
            coeffs: (0..=n)
                .map(|i| self.coeffs[i].clone() + o.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.truncation().min(o.truncation());
        Jet {
            coeffs: (0..=n)
                .map(|i| self.coeffs[i].clone() - o.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.truncation().min(o.truncation());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Jet { coeffs: out }
    }

    pub fn neg(&self) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Jet::constant(C::one(), self.truncation());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `ε^k`; the truncation order is kept.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.truncation();
        let mut c = vec![C::zero(); k.min(n + 1)];
        c.extend(self.coeffs.iter().take((n + 1).saturating_sub(k)).cloned());
        Jet::new(c, n)
    }

    /// Divides by `ε^k` (requires valuation at least `k`); the result is known
    /// to order `N − k`.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        let n = self.truncation();
        if k > n || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Jet::new(self.coeffs[k..].to_vec(), n - k))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Jet<D> {
        Jet {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl Jet<Rational> {
    /// `ε ↦ cε`.
    pub fn reparameterize(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &p);
            p *= c;
        }
        Jet { coeffs: out }
    }
}

/// Truncated product `a·b`, known to the smaller of the two orders.
pub fn jet_arith<C: Coeff>(a: &Jet<C>, b: &Jet<C>, op: crate::exactalg::PolyOp) -> Jet<C> {
    use crate::exactalg::PolyOp;
    match op {
        PolyOp::Add => a.add(b),
        PolyOp::Sub => a.sub(b),
        PolyOp::Mul => a.mul(b),
    }
}

pub fn jet_valuation<C: Coeff>(a: &Jet<C>) -> Valuation {
    a.valuation()
}
