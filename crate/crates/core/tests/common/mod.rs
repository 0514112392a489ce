//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::BTreeMap;

use bautin_core::exactalg::{int, Rational};
use bautin_core::{Arc, Jet, Poly};
use num_traits::Zero;

/// Polynomial as a map from `{name: exponent}` to coefficient.
pub type Naive = BTreeMap<BTreeMap<String, u32>, Rational>;

pub fn naive_var(name: &str) -> Naive {
    let mut m = BTreeMap::new();
    m.insert(name.to_string(), 1);
    [(m, int(1))].into()
}

pub fn naive_const(c: Rational) -> Naive {
    let mut n = Naive::new();
    if !c.is_zero() {
        n.insert(BTreeMap::new(), c);
    }
    n
}

pub fn naive_add(a: &Naive, b: &Naive) -> Naive {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn naive_scale(a: &Naive, s: &Rational) -> Naive {
    let mut out: Naive = a.iter().map(|(m, c)| (m.clone(), c * s)).collect();
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn naive_sub(a: &Naive, b: &Naive) -> Naive {
    naive_add(a, &naive_scale(b, &int(-1)))
}

/// Term-by-term product, every pair of terms multiplied.
pub fn naive_mul(a: &Naive, b: &Naive) -> Naive {
    let mut out = Naive::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = ma.clone();
            for (v, k) in mb {
                *m.entry(v.clone()).or_insert(0) += k;
            }
            let e = out.entry(m).or_insert_with(Rational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn naive_pow(a: &Naive, k: u32) -> Naive {
    (0..k).fold(naive_const(int(1)), |acc, _| naive_mul(&acc, a))
}

pub fn naive_diff(a: &Naive, var: &str) -> Naive {
    let mut out = Naive::new();
    for (m, c) in a {
        if let Some(&k) = m.get(var) {
            let mut m2 = m.clone();
            if k == 1 {
                m2.remove(var);
            } else {
                m2.insert(var.to_string(), k - 1);
            }
            *out.entry(m2).or_insert_with(Rational::zero) += c * int(k as i64);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn to_naive(p: &Poly) -> Naive {
    let vars = p.vars().to_vec();
    let mut out = Naive::new();
    for (m, c) in p.terms() {
        let key: BTreeMap<String, u32> =
            m.0.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (vars[i].clone(), k))
                .collect();
        out.insert(key, c.clone());
    }
    out
}

pub fn from_naive(a: &Naive) -> Poly {
    let mut vars: Vec<String> = a.keys().flat_map(|m| m.keys().cloned()).collect();
    vars.sort();
    vars.dedup();
    let terms = a
        .iter()
        .map(|(m, c)| {
            let e = vars
                .iter()
                .map(|v| m.get(v).copied().unwrap_or(0))
                .collect();
            (e, c.clone())
        })
        .collect();
    Poly::from_terms(vars, terms)
}

/// Truncated Cauchy product of dense coefficient lists.
pub fn cauchy(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= n {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Substitutes dense series for the variables of a naive polynomial by
/// repeated Cauchy products.
pub fn naive_on_series(
    a: &Naive,
    series: &BTreeMap<String, Vec<Rational>>,
    n: usize,
) -> Vec<Rational> {
    let mut total = vec![Rational::zero(); n + 1];
    for (m, c) in a {
        let mut term = vec![Rational::zero(); n + 1];
        term[0] = c.clone();
        for (v, &k) in m {
            for _ in 0..k {
                term = cauchy(&term, &series[v], n);
            }
        }
        for i in 0..=n {
            total[i] += &term[i];
        }
    }
    total
}

pub fn series_of(arc: &Arc) -> BTreeMap<String, Vec<Rational>> {
    arc.vars()
        .map(|(k, j)| (k.clone(), j.coeffs().to_vec()))
        .collect()
}

pub fn jet(coeffs: &[i64], n: usize) -> Jet {
    Jet::new(coeffs.iter().map(|&c| int(c)).collect(), n)
}

/// First index with a nonzero entry.
pub fn first_nonzero(v: &[Rational]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

/// Rank over the rationals by plain Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}
