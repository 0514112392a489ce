//! Complex parameters `ż = (i+λ)z + Az² + B|z|² + Cz̄²` and the planar
//! coefficients `ẋ = λx − y + ax² + bxy + cy²`, `ẏ = x + λy + a'x² + b'xy + c'y²`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactalg::{rat, ser_rational, Rational};

/// Complex number with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ComplexQ {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexQ { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexQ::new(re, Rational::zero())
    }

    pub fn conj(&self) -> Self {
        ComplexQ::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ComplexQ::new(&self.re * c, &self.im * c)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(ComplexQ::real(Rational::one()), |acc, _| &acc * self)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for &ComplexQ {
    type Output = ComplexQ;
    fn add(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &ComplexQ {
    type Output = ComplexQ;
    fn sub(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &ComplexQ {
    type Output = ComplexQ;
    fn mul(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &ComplexQ {
    type Output = ComplexQ;
    fn neg(self) -> ComplexQ {
        ComplexQ::new(-&self.re, -&self.im)
    }
}

impl Serialize for ComplexQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.re.to_string(), self.im.to_string()].serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexParams {
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
    pub a: ComplexQ,
    pub b: ComplexQ,
    pub c: ComplexQ,
}

/// `A = (λ₃−λ₆+λ₄−iλ₅)/4`, `B = (λ₆−λ₃)/2`,
/// `C = (−(3λ₃+λ₆+λ₄) + (4λ₂+λ₅)i)/4`, trace `λ₁`.
pub fn kapteyn_to_complex(l: &[Rational; 6]) -> ComplexParams {
    let q = rat(1, 4);
    let [l1, l2, l3, l4, l5, l6] = l;
    ComplexParams {
        lambda: l1.clone(),
        a: ComplexQ::new((l3 - l6 + l4) * &q, -l5 * &q),
        b: ComplexQ::real((l6 - l3) * rat(1, 2)),
        c: ComplexQ::new(-(l3 * rat(3, 1) + l6 + l4) * &q, (l2 * rat(4, 1) + l5) * &q),
    }
}

/// Quadratic coefficients of the planar field.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct RealCoeffs {
    #[serde(serialize_with = "ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub b: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub c: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub ap: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bp: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub cp: Rational,
}

/// Returns `(A, B, C)`.
pub fn realcoeffs_to_complex(r: &RealCoeffs) -> (ComplexQ, ComplexQ, ComplexQ) {
    let q = rat(1, 4);
    let a = ComplexQ::new((&r.a - &r.c + &r.bp) * &q, (&r.ap - &r.cp - &r.b) * &q);
    let b = ComplexQ::new((&r.a + &r.c) * rat(1, 2), (&r.ap + &r.cp) * rat(1, 2));
    let c = ComplexQ::new((&r.a - &r.c - &r.bp) * &q, (&r.ap - &r.cp + &r.b) * &q);
    (a, b, c)
}

/// Inverse of [`realcoeffs_to_complex`]: `a + ia' = A+B+C`,
/// `b + ib' = 2i(A−C)`, `c + ic' = −A+B−C`.
pub fn complex_to_realcoeffs(a: &ComplexQ, b: &ComplexQ, c: &ComplexQ) -> RealCoeffs {
    let s = &(a + b) + c;
    let two_i = ComplexQ::new(Rational::zero(), rat(2, 1));
    let t = &two_i * &(a - c);
    let u = &(b - a) - c;
    RealCoeffs {
        a: s.re,
        ap: s.im,
        b: t.re,
        bp: t.im,
        c: u.re,
        cp: u.im,
    }
}

/// Membership in the four components written in complex parameters,
/// assuming the trace vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct ComplexMembership {
    pub lv: bool,
    pub r: bool,
    pub h: bool,
    pub q4: bool,
}

pub fn complex_strata_membership(a: &ComplexQ, b: &ComplexQ, c: &ComplexQ) -> ComplexMembership {
    let bc = b.conj();
    let two = rat(2, 1);
    ComplexMembership {
        lv: b.is_zero(),
        r: (a * b).im.is_zero() && (&bc.pow(3) * c).im.is_zero() && (&a.pow(3) * c).im.is_zero(),
        h: (&a.scale(&two) + &bc).is_zero(),
        q4: (a - &bc.scale(&two)).is_zero() && b.norm_sqr() == c.norm_sqr(),
    }
}

/// Coefficients of `ẋ` and `ẏ` on the monomials `x, y, x², xy, y²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorField2<T = f64> {
    pub xdot: [T; 5],
    pub ydot: [T; 5],
}

impl<T> VectorField2<T>
where
    T: Clone + Add<Output = T> + Mul<Output = T>,
{
    /// Evaluates `(ẋ, ẏ)` at a point.
    pub fn eval(&self, x: T, y: T) -> (T, T) {
        let m = [
            x.clone(),
            y.clone(),
            x.clone() * x.clone(),
            x * y.clone(),
            y.clone() * y,
        ];
        let dot = |c: &[T; 5]| {
            let mut s = c[0].clone() * m[0].clone();
            for i in 1..5 {
                s = s + c[i].clone() * m[i].clone();
            }
            s
        };
        (dot(&self.xdot), dot(&self.ydot))
    }
}

impl<T: Clone> VectorField2<T> {
    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> VectorField2<U> {
        VectorField2 {
            xdot: std::array::from_fn(|i| f(&self.xdot[i])),
            ydot: std::array::from_fn(|i| f(&self.ydot[i])),
        }
    }
}

/// The Kapteyn field `X_λ`.
pub fn vector_field<T>(l: &[T; 6]) -> VectorField2<T>
where
    T: Clone + Zero + One + Add<Output = T> + Neg<Output = T>,
{
    let [l1, l2, l3, l4, l5, l6] = l.clone();
    VectorField2 {
        xdot: [
            l1.clone(),
            -T::one(),
            -l3.clone(),
            l2.clone() + l2.clone() + l5,
            l6,
        ],
        ydot: [T::one(), l1, l2.clone(), l3.clone() + l3 + l4, -l2],
    }
}

impl VectorField2<Rational> {
    pub fn real_coeffs(&self) -> RealCoeffs {
        RealCoeffs {
            a: self.xdot[2].clone(),
            b: self.xdot[3].clone(),
            c: self.xdot[4].clone(),
            ap: self.ydot[2].clone(),
            bp: self.ydot[3].clone(),
            cp: self.ydot[4].clone(),
        }
    }
}
