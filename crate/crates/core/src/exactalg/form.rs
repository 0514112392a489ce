use num_traits::{One, Zero};

use super::{Poly, Rational};
use crate::error::{Error, Result};

pub const X: &str = "x";
pub const Y: &str = "y";
pub const EPS: &str = "eps";

/// Polynomial one-form `P dx + Q dy`. Other variables are parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    pub p: Poly,
    pub q: Poly,
}

impl OneForm {
    pub fn new(p: Poly, q: Poly) -> Self {
        OneForm { p, q }
    }

    /// Exterior derivative of a function.
    pub fn d(f: &Poly) -> OneForm {
        OneForm::new(f.diff_or_zero(X), f.diff_or_zero(Y))
    }

    pub fn zero() -> Self {
        OneForm::new(Poly::zero(), Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn mul_poly(&self, f: &Poly) -> OneForm {
        OneForm::new(&self.p * f, &self.q * f)
    }

    pub fn scale(&self, c: &Rational) -> OneForm {
        OneForm::new(self.p.scale(c), self.q.scale(c))
    }

    pub fn add(&self, o: &OneForm) -> OneForm {
        OneForm::new(&self.p + &o.p, &self.q + &o.q)
    }

    pub fn sub(&self, o: &OneForm) -> OneForm {
        OneForm::new(&self.p - &o.p, &self.q - &o.q)
    }

    /// Largest total degree in `x, y` of the two coefficients.
    pub fn degree(&self) -> Option<u32> {
        let a = self.p.degree_in(&[X, Y]);
        let b = self.q.degree_in(&[X, Y]);
        a.max(b)
    }

    /// `dω / (dx ∧ dy) = ∂Q/∂x − ∂P/∂y`.
    pub fn curl(&self) -> Poly {
        &self.q.diff_or_zero(X) - &self.p.diff_or_zero(Y)
    }
}

/// Closedness of a form together with a primitive when it is closed.
#[derive(Clone, Debug)]
pub struct Exactness {
    pub closed: bool,
    pub primitive: Option<Poly>,
}

/// Closed polynomial forms on the plane are exact; the primitive is
/// `∫P dx + ∫(Q − ∂_y ∫P dx) dy`.
pub fn is_exact(w: &OneForm) -> Exactness {
    if !w.curl().is_zero() {
        return Exactness {
            closed: false,
            primitive: None,
        };
    }
    let a = w.p.integrate(X);
    let rest = &w.q - &a.diff_or_zero(Y);
    let f = &a + &rest.integrate(Y);
    Exactness {
        closed: true,
        primitive: Some(f.drop_unused()),
    }
}

/// `a·g·df − b·f·dg`, the cleared form of `a df/f − b dg/g` times `f g`.
pub fn log_pair_form(f: &Poly, g: &Poly, a: &Rational, b: &Rational) -> OneForm {
    OneForm::d(f)
        .mul_poly(g)
        .scale(a)
        .sub(&OneForm::d(g).mul_poly(f).scale(b))
}

/// The two polynomials of the Q4 pencil for a parameter value (or symbol) `alpha`.
pub fn q4_polys(alpha: &Poly) -> (Poly, Poly) {
    let x = Poly::var(X);
    let y = Poly::var(Y);
    let f2 = &(&x.pow(2) + &y.scale(&Rational::from_integer(4.into()))) + &Poly::one();
    let six_y = y.scale(&Rational::from_integer(6.into()));
    let cubic = &(&x * &(&x.pow(2) + &six_y)) * alpha;
    let f3 = &(&cubic + &six_y) + &Poly::one();
    (f2, f3)
}

#[derive(Clone, Debug)]
pub struct Q4Report {
    pub form: OneForm,
    /// Degree in `x, y`; parameters count as constants.
    pub degree: u32,
    /// Coefficients (polynomials in the parameters) of the `x, y` monomials of
    /// degree above two. Empty when the cancellation holds identically.
    pub residual: Vec<Poly>,
}

/// `ω₀ = 3 f₃ df₂ − 2 f₂ df₃` and how far it is from degree two.
pub fn q4_form(alpha: &Poly) -> Q4Report {
    let (f2, f3) = q4_polys(alpha);
    let form = log_pair_form(
        &f2,
        &f3,
        &Rational::from_integer(3.into()),
        &Rational::from_integer(2.into()),
    );
    let degree = form.degree().unwrap_or(0);
    let mut residual = Vec::new();
    for c in [&form.p, &form.q] {
        for (deg_x, px) in c.coefficients_in(X).into_iter().enumerate() {
            for (deg_y, pxy) in px.coefficients_in(Y).into_iter().enumerate() {
                if deg_x + deg_y > 2 && !pxy.is_zero() {
                    residual.push(pxy);
                }
            }
        }
    }
    Q4Report {
        form,
        degree,
        residual,
    }
}

/// One-form family `eps^shift · (P dx + Q dy)` with `P, Q` polynomial in `eps`.
#[derive(Clone, Debug)]
pub struct EpsForm {
    pub shift: i32,
    pub form: OneForm,
}

impl EpsForm {
    pub fn regular(form: OneForm) -> Self {
        EpsForm { shift: 0, form }
    }

    /// `eps^-1 · form`.
    pub fn over_eps(form: OneForm) -> Self {
        EpsForm { shift: -1, form }
    }

    pub fn add(&self, o: &EpsForm) -> EpsForm {
        let s = self.shift.min(o.shift);
        let lift = |f: &EpsForm| f.form.mul_poly(&Poly::var(EPS).pow((f.shift - s) as u32));
        EpsForm {
            shift: s,
            form: lift(self).add(&lift(o)),
        }
    }

    /// True eps-valuation of the family, None when it vanishes.
    pub fn valuation(&self) -> Option<i64> {
        let a = self.form.p.valuation_in(EPS);
        let b = self.form.q.valuation_in(EPS);
        let v = match (a, b) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return None,
        };
        Some(v as i64 + self.shift as i64)
    }

    /// Coefficient of `eps^0`; errors on a pole.
    pub fn limit(&self) -> Result<OneForm> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(Error::Pole((-v) as u32));
            }
        }
        let k = (-self.shift) as usize;
        let pick = |p: &Poly| {
            p.coefficients_in(EPS)
                .get(k)
                .cloned()
                .unwrap_or_else(Poly::zero)
        };
        Ok(OneForm::new(pick(&self.form.p), pick(&self.form.q)))
    }
}

#[derive(Clone, Debug)]
pub struct DulacReport {
    pub limit: OneForm,
    pub matches: bool,
}

/// Compares the `eps → 0` limit of a family with the expected form.
pub fn dulac_limit(family: &EpsForm, target: &OneForm) -> Result<DulacReport> {
    let limit = family.limit()?;
    let matches = limit == *target;
    Ok(DulacReport { limit, matches })
}

/// `p₁p₂(1+εq)·(λ₁dp₁/p₁ + λ₂dp₂/p₂ + ε⁻¹ d(1+εq)/(1+εq))` cleared of
/// denominators, and its expected limit `λ₁p₂dp₁ + λ₂p₁dp₂ + p₁p₂dq`.
pub fn dulac_unit_family(
    p1: &Poly,
    p2: &Poly,
    q: &Poly,
    l1: &Rational,
    l2: &Rational,
) -> (EpsForm, OneForm) {
    let eps = Poly::var(EPS);
    let u = &Poly::one() + &(&eps * q);
    let a = OneForm::d(p1).mul_poly(&(p2 * &u)).scale(l1);
    let b = OneForm::d(p2).mul_poly(&(p1 * &u)).scale(l2);
    let c = OneForm::d(&u).mul_poly(&(p1 * p2));
    let family = EpsForm::regular(a.add(&b)).add(&EpsForm::over_eps(c));
    let target = OneForm::d(p1)
        .mul_poly(p2)
        .scale(l1)
        .add(&OneForm::d(p2).mul_poly(p1).scale(l2))
        .add(&OneForm::d(q).mul_poly(&(p1 * p2)));
    (family, target)
}

/// `p₁p₂(p₁+εq)·(λ₁dp₁/p₁ + λ₂dp₂/p₂ + ε⁻¹(d(p₁+εq)/(p₁+εq) − dp₁/p₁))`
/// cleared of denominators. Its limit is `p₁·p₂·p₁·η₀` with
/// `η₀ = λ₁dp₁/p₁ + λ₂dp₂/p₂ + d(q/p₁)`, i.e.
/// `p₁(λ₁p₂dp₁ + λ₂p₁dp₂) + p₂(p₁dq − q dp₁)`.
pub fn dulac_shift_family(
    p1: &Poly,
    p2: &Poly,
    q: &Poly,
    l1: &Rational,
    l2: &Rational,
) -> (EpsForm, OneForm) {
    let eps = Poly::var(EPS);
    let u = p1 + &(&eps * q);
    let a = OneForm::d(p1).mul_poly(&(p2 * &u)).scale(l1);
    let b = OneForm::d(p2).mul_poly(&(p1 * &u)).scale(l2);
    let c = OneForm::d(&u)
        .mul_poly(&(p1 * p2))
        .sub(&OneForm::d(p1).mul_poly(&(p2 * &u)));
    let family = EpsForm::regular(a.add(&b)).add(&EpsForm::over_eps(c));
    let target = OneForm::d(p1)
        .mul_poly(p2)
        .scale(l1)
        .add(&OneForm::d(p2).mul_poly(p1).scale(l2))
        .mul_poly(p1)
        .add(
            &OneForm::d(q)
                .mul_poly(p1)
                .sub(&OneForm::d(p1).mul_poly(q))
                .mul_poly(p2),
        );
    (family, target)
}
