//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::exactalg::Rational;

/// Incrementally maintained row-echelon basis.
///
/// Rows are split into a key part (used for pivoting) and a payload that is
/// carried along. A new row whose key part reduces to zero is a linear
/// combination of earlier rows; its reduced payload then tells whether the
/// payload follows the same combination.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    key_len: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

pub enum Insert {
    /// The key part was independent and has been added.
    New,
    /// The key part was dependent; the reduced payload is returned.
    Dependent(Vec<Rational>),
}

impl EchelonBasis {
    pub fn new(key_len: usize) -> Self {
        EchelonBasis {
            key_len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        v
    }

    pub fn insert(&mut self, key: &[Rational], payload: &[Rational]) -> Insert {
        assert_eq!(key.len(), self.key_len);
        let mut v: Vec<Rational> = key.iter().chain(payload).cloned().collect();
        v = self.reduce(v);
        match v[..self.key_len].iter().position(|c| !c.is_zero()) {
            None => Insert::Dependent(v[self.key_len..].to_vec()),
            Some(p) => {
                let inv = Rational::one() / &v[p];
                for a in v.iter_mut() {
                    *a *= &inv;
                }
                for (_, row) in self.rows.iter_mut() {
                    if row[p].is_zero() {
                        continue;
                    }
                    let f = row[p].clone();
                    for (a, b) in row.iter_mut().zip(&v) {
                        *a -= &f * b;
                    }
                }
                self.rows.push((p, v));
                Insert::New
            }
        }
    }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut b = EchelonBasis::new(first.len());
    for r in rows {
        b.insert(r, &[]);
    }
    b.rank()
}

/// Solves the square system `m·x = rhs`; None if singular.
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for c in col..=n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}
