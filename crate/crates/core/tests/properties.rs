//! Randomized invariants, 1000 cases each from fixed seeds.

mod common;

use bautin_core::blowup::{filtration_level, order_of_arc};
use bautin_core::exactalg::{int, is_exact, rat, OneForm, Rational};
use bautin_core::jets::{eval_on_arc, reparameterize};
use bautin_core::kapteyn::{bautin_ideal, default_base, VARS};
use bautin_core::{Arc, Jet, Poly, Stratum, Valuation};
use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

const N: usize = 8;

fn config(seed: u64) -> Config {
    Config {
        cases: 1000,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn xy() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

/// Polynomials in `x, y` of degree ≤ 3 with small integer coefficients.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..=3, 0u32..=3), -5i64..=5), 0..6).prop_map(|terms| {
        Poly::from_terms(
            xy(),
            terms
                .into_iter()
                .map(|((a, b), c)| (vec![a, b], int(c)))
                .collect(),
        )
    })
}

fn jet_strategy() -> impl Strategy<Value = Jet> {
    (0usize..=N + 1, prop::collection::vec(-4i64..=4, N + 1)).prop_map(|(v, c)| {
        let coeffs: Vec<Rational> = c
            .iter()
            .enumerate()
            .map(|(i, &x)| if i < v { int(0) } else { int(x) })
            .collect();
        Jet::new(coeffs, N)
    })
}

fn xy_arc() -> impl Strategy<Value = Arc> {
    (jet_strategy(), jet_strategy())
        .prop_map(|(x, y)| Arc::from_jets(N, [("x".to_string(), x), ("y".to_string(), y)]))
}

/// Arcs over a stratum base point, each coordinate moved at a random order.
fn kapteyn_arc() -> impl Strategy<Value = Arc> {
    let strata = prop::sample::select(vec![
        Stratum::I1,
        Stratum::I2,
        Stratum::I3,
        Stratum::I4,
        Stratum::I1I3,
        Stratum::I1I2I3,
        Stratum::Origin,
    ]);
    let coord = (1usize..=4, prop::collection::vec(-3i64..=3, 4));
    (strata, prop::collection::vec(coord, 6)).prop_map(|(s, coords)| {
        let base = default_base(s);
        let jets = coords.into_iter().zip(base).map(|((shift, c), b)| {
            let mut v = vec![b];
            v.resize(shift, int(0));
            v.extend(c.into_iter().map(int));
            Jet::new(v, N)
        });
        Arc::from_jets(N, VARS.iter().map(|v| v.to_string()).zip(jets))
    })
}

fn factor() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![
        int(1),
        int(-1),
        int(2),
        int(-2),
        int(3),
        int(-3),
        rat(1, 2),
    ])
}

proptest! {
    #![proptest_config(config(1))]
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert!((a.clone() - a.clone()).is_zero());
        prop_assert_eq!(a.clone() * Poly::int(1), a.clone());
        prop_assert_eq!(to_naive(&(a.clone() * b.clone())), naive_mul(&to_naive(&a), &to_naive(&b)));
    }
}

proptest! {
    #![proptest_config(config(2))]
    #[test]
    fn derivatives(a in poly(), b in poly()) {
        for v in ["x", "y"] {
            let lhs = (a.clone() * b.clone()).diff(v).unwrap();
            let rhs = a.diff(v).unwrap() * b.clone() + a.clone() * b.diff(v).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(to_naive(&a.diff(v).unwrap()), naive_diff(&to_naive(&a), v));
        }
        prop_assert_eq!(a.diff("x").unwrap().diff("y").unwrap(), a.diff("y").unwrap().diff("x").unwrap());
    }
}

proptest! {
    #![proptest_config(config(3))]
    #[test]
    fn differentials_are_exact(q in poly()) {
        let e = is_exact(&OneForm::d(&q));
        prop_assert!(e.closed);
        let diff = e.primitive.unwrap() - q;
        prop_assert!(diff.is_constant());
    }
}

proptest! {
    #![proptest_config(config(4))]
    #[test]
    fn valuation_is_additive(a in jet_strategy(), b in jet_strategy()) {
        let p = a.mul(&b);
        let oracle = cauchy(a.coeffs(), b.coeffs(), N);
        prop_assert_eq!(p.coeffs(), oracle.as_slice());
        if let (Valuation::Finite(i), Valuation::Finite(j)) = (a.valuation(), b.valuation()) {
            if i + j <= N {
                prop_assert_eq!(p.valuation(), Valuation::Finite(i + j));
            } else {
                prop_assert_eq!(p.valuation(), Valuation::ZeroToTruncation);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(5))]
    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), q in poly(), arc in xy_arc()) {
        let ep = eval_on_arc(&p, &arc).unwrap();
        let eq = eval_on_arc(&q, &arc).unwrap();
        prop_assert_eq!(eval_on_arc(&(p.clone() + q.clone()), &arc).unwrap(), ep.add(&eq));
        prop_assert_eq!(eval_on_arc(&(p.clone() * q.clone()), &arc).unwrap(), ep.mul(&eq));
        let oracle = naive_on_series(&to_naive(&p), &series_of(&arc), N);
        prop_assert_eq!(ep.coeffs(), oracle.as_slice());
    }
}

proptest! {
    #![proptest_config(config(6))]
    #[test]
    fn reparameterization_commutes_with_evaluation(p in poly(), arc in xy_arc(), c in factor()) {
        let lhs = eval_on_arc(&p, &reparameterize(&arc, &c).unwrap()).unwrap();
        let rhs = eval_on_arc(&p, &arc).unwrap().reparameterize(&c);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(config(7))]
    #[test]
    fn order_and_point_ignore_reparameterization(arc in kapteyn_arc(), c in factor()) {
        let ideal = bautin_ideal();
        let a = order_of_arc(&ideal, &arc).unwrap();
        let b = order_of_arc(&ideal, &reparameterize(&arc, &c).unwrap()).unwrap();
        prop_assert_eq!(a.order, b.order);
        prop_assert_eq!(a.point(), b.point());
    }
}

proptest! {
    #![proptest_config(config(8))]
    #[test]
    fn tail_perturbation_keeps_order(
        arc in kapteyn_arc(),
        var in 0usize..6,
        offset in 1usize..=N,
        value in -9i64..=9,
    ) {
        let ideal = bautin_ideal();
        let r = order_of_arc(&ideal, &arc).unwrap();
        if let Some(k) = r.order {
            let i = k + offset;
            if i <= N {
                let mut j = arc.get(VARS[var]).unwrap().clone();
                j.set_coeff(i, int(value));
                let mut b = arc.clone();
                b.set(VARS[var], j);
                let s = order_of_arc(&ideal, &b).unwrap();
                prop_assert_eq!(s.order, r.order);
                prop_assert_eq!(s.point(), r.point());
            }
        }
        // An edit at index i leaves every generator coefficient below i alone,
        // so the new order is at least min(k, i). A random edit inside the
        // leading block may still cancel a leading term and raise the order.
        let mut j = arc.get(VARS[var]).unwrap().clone();
        let i = offset.min(N);
        j.set_coeff(i, int(value));
        let mut b = arc.clone();
        b.set(VARS[var], j);
        let s = order_of_arc(&ideal, &b).unwrap();
        let floor = r.order.map_or(i, |k| k.min(i));
        prop_assert!(s.order.map_or(true, |o| o >= floor));
    }
}

proptest! {
    #![proptest_config(config(9))]
    #[test]
    fn filtration_is_monotone(arc in kapteyn_arc(), k in 0usize..N) {
        let ideal = bautin_ideal();
        if filtration_level(&ideal, &arc, k).unwrap() {
            prop_assert!(filtration_level(&ideal, &arc, k + 1).unwrap());
        }
        let order = order_of_arc(&ideal, &arc).unwrap().order;
        prop_assert_eq!(filtration_level(&ideal, &arc, k).unwrap(), order.is_some_and(|o| o <= k));
    }
}

#[test]
fn zero_is_absorbing() {
    let z = Poly::from_terms(xy(), vec![]);
    assert!(z.is_zero());
    assert!((Poly::var("x") * z).is_zero());
}
