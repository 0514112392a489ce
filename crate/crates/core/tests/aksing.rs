mod common;

use bautin_core::aksing::{ak_center, ak_classify, ak_essential_set, ak_ideal, AkSampler};
use bautin_core::blowup::{in_zero_set, order_of_arc, ArcSampler};
use bautin_core::rng::stream;
use bautin_core::{Arc, Error, Jet, ProjPoint};
use common::*;
use rand::Rng;

fn arc(x: &[i64], y: &[i64], n: usize) -> Arc {
    Arc::from_jets(
        n,
        [("x".to_string(), jet(x, n)), ("y".to_string(), jet(y, n))],
    )
}

#[test]
fn ideals() {
    assert_eq!(
        ak_ideal(1).unwrap().generators()[1],
        bautin_core::Poly::var("y").pow(2)
    );
    assert_eq!(
        ak_ideal(2).unwrap().generators()[1],
        bautin_core::Poly::var("y").pow(3)
    );
    assert!(matches!(ak_ideal(0), Err(Error::Invalid(_))));
    let i = ak_ideal(3).unwrap();
    assert!(in_zero_set(&i, &arc(&[0], &[0], 4)).unwrap());
    assert!(!in_zero_set(&i, &arc(&[1], &[0], 4)).unwrap());
    assert!(!in_zero_set(&i, &arc(&[0], &[2], 4)).unwrap());
}

#[test]
fn classification_examples() {
    assert_eq!(
        ak_classify(2, &arc(&[0, 1, 4], &[0, 3, 1], 8))
            .unwrap()
            .index,
        1
    );
    assert_eq!(
        ak_classify(2, &arc(&[0, 0, 5], &[0, 1], 8)).unwrap().index,
        2
    );
    let c = ak_classify(2, &arc(&[0], &[0, 1], 8)).unwrap();
    assert_eq!(c.index, 3);
    assert!(c.generic);
}

#[test]
fn classification_errors() {
    assert!(matches!(
        ak_classify(2, &arc(&[1, 1], &[0, 1], 8)),
        Err(Error::Invalid(_))
    ));
    assert!(matches!(
        ak_classify(2, &arc(&[0], &[0], 8)),
        Err(Error::Undetermined(_))
    ));
    // x ≡ 0 and (k+1)·val(y) beyond the truncation.
    assert!(matches!(
        ak_classify(2, &arc(&[0], &[0, 0, 0, 1], 8)),
        Err(Error::Undetermined(_))
    ));
}

#[test]
fn centers() {
    assert_eq!(
        ak_center(2, &arc(&[0, 3], &[0, 1], 8)).unwrap(),
        ProjPoint::from_ints(&[1, 0]).unwrap()
    );
    assert_eq!(
        ak_center(2, &arc(&[0, 0, -7], &[0, 2], 8)).unwrap(),
        ProjPoint::from_ints(&[1, 0]).unwrap()
    );
    for (a, b) in [(2i64, 3i64), (-1, 1), (5, -2), (0, 1), (4, 0)] {
        let p = ak_center(2, &arc(&[0, 0, 0, a], &[0, b], 8)).unwrap();
        assert_eq!(p, ProjPoint::from_ints(&[a, b.pow(3)]).unwrap());
    }
    for k in 1..=4u32 {
        let mut x = vec![0i64; k as usize + 2];
        x[k as usize + 1] = 1;
        assert_eq!(
            ak_center(k, &arc(&x, &[0, 1], 10)).unwrap().to_string(),
            "[1:1]"
        );
    }
}

/// Origin-centered arcs with random valuations.
fn random_origin_arc(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Arc {
    let series = |rng: &mut rand_chacha::ChaCha8Rng| {
        let v = rng.gen_range(1..=n + 2);
        let mut c = vec![0i64; v.min(n + 1)];
        while c.len() <= n {
            c.push(rng.gen_range(-4..=4));
        }
        c
    };
    let x = series(rng);
    let y = series(rng);
    arc(&x, &y, n)
}

#[test]
fn components_partition_and_match_orders() {
    let n = 10;
    for k in 1..=4u32 {
        let ideal = ak_ideal(k).unwrap();
        for t in 0..300 {
            let a = random_origin_arc(&mut stream(31, ((k as u64) << 32) | t), n);
            let r = order_of_arc(&ideal, &a).unwrap();
            let vx = a.get("x").unwrap().valuation().finite();
            let vy = a.get("y").unwrap().valuation().finite();
            let oracle = [vx, vy.map(|v| (k as usize + 1) * v).filter(|&o| o <= n)]
                .into_iter()
                .flatten()
                .min();
            assert_eq!(r.order, oracle);
            match ak_classify(k, &a) {
                Ok(c) => {
                    assert!((1..=k + 1).contains(&c.index));
                    let order = r.order.unwrap();
                    if c.index <= k {
                        assert_eq!(order, c.index as usize);
                    } else {
                        assert!(order > k as usize);
                        assert_eq!(c.generic, order == k as usize + 1);
                    }
                }
                Err(Error::Undetermined(_)) => assert_eq!(r.order, None),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn tail_changes_keep_the_component() {
    let n = 10;
    for k in 1..=3u32 {
        for c in 1..=k + 1 {
            let s = AkSampler {
                k,
                component: c,
                truncation: n,
            };
            for t in 0..50 {
                let mut rng = stream(57, ((c as u64) << 32) | t);
                let a = s.sample(&mut rng).unwrap();
                let id = ak_classify(k, &a).unwrap();
                assert_eq!(id.index, c);
                let mut b = a.clone();
                let cut = k as usize + 2;
                for var in ["x", "y"] {
                    let mut j: Jet = b.get(var).unwrap().clone();
                    for i in cut..=n {
                        j.set_coeff(i, bautin_core::exactalg::int(rng.gen_range(-9..=9)));
                    }
                    b.set(var, j);
                }
                assert_eq!(ak_classify(k, &b).unwrap(), id);
            }
        }
    }
}

#[test]
fn essential_sets() {
    let e = ak_essential_set(1, 32, 5).unwrap();
    assert_eq!(e.components, vec![2]);
    let e = ak_essential_set(3, 32, 5).unwrap();
    assert_eq!(e.components, vec![4]);
    let top = e.images.iter().find(|i| i.component == 4).unwrap();
    assert_eq!(top.dimension, 1);
    for im in e.images.iter().filter(|i| i.component <= 3) {
        assert_eq!(im.dimension, 0);
        assert_eq!(im.points, vec![ProjPoint::from_ints(&[1, 0]).unwrap()]);
    }
}
