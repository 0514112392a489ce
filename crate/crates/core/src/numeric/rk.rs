//! Runge–Kutta–Fehlberg 7(8) for planar autonomous systems.
//!
//! Coefficients are kept as integer fractions and converted to the working
//! scalar type, so the double-double integrator is not limited by rounding
//! of the tableau.

use super::dd::Real;

type Frac = (i64, i64);

const A: [&[Frac]; 13] = [
    &[],
    &[(2, 27)],
    &[(1, 36), (1, 12)],
    &[(1, 24), (0, 1), (1, 8)],
    &[(5, 12), (0, 1), (-25, 16), (25, 16)],
    &[(1, 20), (0, 1), (0, 1), (1, 4), (1, 5)],
    &[(-25, 108), (0, 1), (0, 1), (125, 108), (-65, 27), (125, 54)],
    &[
        (31, 300),
        (0, 1),
        (0, 1),
        (0, 1),
        (61, 225),
        (-2, 9),
        (13, 900),
    ],
    &[
        (2, 1),
        (0, 1),
        (0, 1),
        (-53, 6),
        (704, 45),
        (-107, 9),
        (67, 90),
        (3, 1),
    ],
    &[
        (-91, 108),
        (0, 1),
        (0, 1),
        (23, 108),
        (-976, 135),
        (311, 54),
        (-19, 60),
        (17, 6),
        (-1, 12),
    ],
    &[
        (2383, 4100),
        (0, 1),
        (0, 1),
        (-341, 164),
        (4496, 1025),
        (-301, 82),
        (2133, 4100),
        (45, 82),
        (45, 164),
        (18, 41),
    ],
    &[
        (3, 205),
        (0, 1),
        (0, 1),
        (0, 1),
        (0, 1),
        (-6, 41),
        (-3, 205),
        (-3, 41),
        (3, 41),
        (6, 41),
        (0, 1),
    ],
    &[
        (-1777, 4100),
        (0, 1),
        (0, 1),
        (-341, 164),
        (4496, 1025),
        (-289, 82),
        (2193, 4100),
        (51, 82),
        (33, 164),
        (12, 41),
        (0, 1),
        (1, 1),
    ],
];

/// Eighth-order weights; the seventh-order solution differs only through
/// stages 0, 10, 11, 12.
const B8: [Frac; 13] = [
    (0, 1),
    (0, 1),
    (0, 1),
    (0, 1),
    (0, 1),
    (34, 105),
    (9, 35),
    (9, 35),
    (9, 280),
    (9, 280),
    (0, 1),
    (41, 840),
    (41, 840),
];

/// Scaled tableau in the working type.
pub struct Rkf78<T> {
    a: Vec<Vec<(usize, T)>>,
    b: [T; 13],
    err: T,
}

fn frac<T: Real>((n, d): Frac) -> T {
    T::from_f64(n as f64) / T::from_f64(d as f64)
}

impl<T: Real> Default for Rkf78<T> {
    fn default() -> Self {
        Rkf78 {
            a: A.iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, f)| f.0 != 0)
                        .map(|(j, f)| (j, frac(*f)))
                        .collect()
                })
                .collect(),
            b: B8.map(frac),
            err: frac((41, 840)),
        }
    }
}

pub type State<T> = [T; 2];

impl<T: Real> Rkf78<T> {
    /// One step of size `h`: the eighth-order solution and the max-norm
    /// estimate of the local error.
    pub fn step(&self, f: &impl Fn(&State<T>) -> State<T>, y: &State<T>, h: T) -> (State<T>, f64) {
        let mut k: [State<T>; 13] = [[T::zero(); 2]; 13];
        for s in 0..13 {
            let mut ys = *y;
            for &(j, a) in &self.a[s] {
                ys[0] += h * a * k[j][0];
                ys[1] += h * a * k[j][1];
            }
            k[s] = f(&ys);
        }
        let mut out = *y;
        let mut e = 0.0f64;
        for i in 0..2 {
            let mut acc = T::zero();
            for s in 0..13 {
                if self.b[s] != T::zero() {
                    acc += self.b[s] * k[s][i];
                }
            }
            out[i] += h * acc;
            let est = (h * self.err * (k[0][i] + k[10][i] - k[11][i] - k[12][i]))
                .to_f64()
                .abs();
            e = e.max(est);
        }
        (out, e)
    }
}
