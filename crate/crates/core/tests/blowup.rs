mod common;

use bautin_core::blowup::{
    exceptional_point, fiber_dimension_sample, filtration_level, generator_invariance_check,
    in_zero_set, order_of_arc, ArcSampler,
};
use bautin_core::exactalg::{int, Rational};
use bautin_core::kapteyn::{
    bautin_ideal, default_base, essential_family, localized_generators, FamilySampler, VARS,
};
use bautin_core::rng::stream;
use bautin_core::{Arc, Error, FamilyId, FamilySpec, Ideal, Jet, ProjPoint, Stratum};
use common::*;
use rand::Rng;

const N: usize = 12;

fn point_arc(l: [Rational; 6]) -> Arc {
    Arc::from_jets(
        N,
        VARS.iter()
            .map(|v| v.to_string())
            .zip(l.into_iter().map(|c| Jet::constant(c, N))),
    )
}

fn xy_arc(x: &[i64], y: &[i64], n: usize) -> Arc {
    Arc::from_jets(
        n,
        [("x".to_string(), jet(x, n)), ("y".to_string(), jet(y, n))],
    )
}

/// λ* + ε^{aᵢ}(random cubic) in each coordinate, with random shifts aᵢ ∈ 1..=4.
fn random_arc(base: &[Rational; 6], rng: &mut rand_chacha::ChaCha8Rng) -> Arc {
    let jets = base.iter().map(|b| {
        let shift = rng.gen_range(1..=4);
        let mut c = vec![b.clone()];
        c.resize(shift, int(0));
        for _ in 0..3 {
            c.push(int(rng.gen_range(-9..=9)));
        }
        Jet::new(c, N)
    });
    Arc::from_jets(N, VARS.iter().map(|v| v.to_string()).zip(jets))
}

fn spec(id: FamilyId, symbols: &[(&str, i64)]) -> FamilySpec {
    let s: Vec<(&str, Rational)> = symbols.iter().map(|(k, v)| (*k, int(*v))).collect();
    FamilySpec::new(id, default_base(id.stratum()), &s)
}

#[test]
fn i13a_unit_symbols() {
    let arc = essential_family(
        &spec(
            FamilyId::I13A,
            &[
                ("l1_3", 1),
                ("l5_2", 1),
                ("l4_1", 1),
                ("l3_1", 2),
                ("l6_1", 1),
                ("l2_1", 0),
            ],
        ),
        N,
    )
    .unwrap();
    let r = order_of_arc(&localized_generators(Stratum::I1I3).unwrap(), &arc).unwrap();
    assert_eq!(r.order, Some(3));
    assert_eq!(r.point(), ProjPoint::from_ints(&[1, 1, 1, 1]));
    assert_eq!(r.truncation, N);
}

#[test]
fn i13b_unit_symbols() {
    let arc = essential_family(
        &spec(
            FamilyId::I13B,
            &[
                ("l1_4", 1),
                ("l5_3", 1),
                ("l4_2", 1),
                ("l3_1", 2),
                ("l6_1", 1),
                ("l2_1", 0),
            ],
        ),
        N,
    )
    .unwrap();
    let r = order_of_arc(&localized_generators(Stratum::I1I3).unwrap(), &arc).unwrap();
    assert_eq!(r.order, Some(4));
    assert_eq!(r.point(), ProjPoint::from_ints(&[1, 1, 0, 1]));
}

#[test]
fn ak_example() {
    let ideal = Ideal::parse(&["x", "y"], &["x", "y^3"]).unwrap();
    let r = order_of_arc(&ideal, &xy_arc(&[0, 0, 1], &[0, 1], 6)).unwrap();
    assert_eq!(r.order, Some(2));
    assert_eq!(r.point(), ProjPoint::from_ints(&[1, 0]));
}

#[test]
fn canonical_points() {
    assert_eq!(
        ProjPoint::from_ints(&[2, 4, 0, 6]).unwrap().to_string(),
        "[1:2:0:3]"
    );
    assert_eq!(ProjPoint::from_ints(&[-3, 0]).unwrap().to_string(), "[1:0]");
    assert_eq!(
        ProjPoint::from_ints(&[0, -2, 4]).unwrap().to_string(),
        "[0:1:-2]"
    );
    let half = Rational::new(1.into(), 2.into());
    assert_eq!(
        ProjPoint::from_rationals(&[half, int(3)])
            .unwrap()
            .to_string(),
        "[1:6]"
    );
    assert_eq!(ProjPoint::from_ints(&[0, 0]), None);
}

#[test]
fn origin_family_point_matches_oracle() {
    let s = spec(
        FamilyId::Origin,
        &[
            ("l1_6", 1),
            ("l5_5", 1),
            ("l2_1", 1),
            ("l3_1", 2),
            ("l6_1", 1),
            ("l3_2", 0),
            ("l6_2", 0),
            ("l3_3", 0),
            ("l6_3", 0),
            ("l4_3", 1),
        ],
    );
    let arc = essential_family(&s, N).unwrap();
    let ideal = bautin_ideal();
    let leading: Vec<Rational> = ideal
        .generators()
        .iter()
        .map(|g| naive_on_series(&to_naive(g), &series_of(&arc), N)[6].clone())
        .collect();
    for g in ideal.generators() {
        let series = naive_on_series(&to_naive(g), &series_of(&arc), N);
        assert!(first_nonzero(&series).unwrap() >= 6);
    }
    let p = exceptional_point(&ideal, &arc).unwrap();
    assert_eq!(Some(p.clone()), ProjPoint::from_rationals(&leading));
    // λ1,6 : λ5,5 (λ3,1 − λ6,1) : ...
    assert_eq!(&p.to_strings()[..2], &["1", "1"]);
    assert!(filtration_level(&ideal, &arc, 6).unwrap());
    assert!(!filtration_level(&ideal, &arc, 5).unwrap());
}

#[test]
fn zero_set_membership() {
    let ideal = bautin_ideal();
    let z = || int(0);
    assert!(in_zero_set(&ideal, &point_arc([z(), z(), z(), z(), z(), z()])).unwrap());
    assert!(in_zero_set(&ideal, &point_arc([z(), z(), int(1), z(), z(), int(1)])).unwrap());
    assert!(!in_zero_set(&ideal, &point_arc([int(1), z(), z(), z(), z(), z()])).unwrap());
}

#[test]
fn undetermined_is_a_value() {
    let ideal = bautin_ideal();
    let arc = point_arc(default_base(Stratum::I1I3));
    let r = order_of_arc(&ideal, &arc).unwrap();
    assert_eq!(r.order, None);
    assert_eq!(r.point(), None);
    assert!(matches!(
        exceptional_point(&ideal, &arc),
        Err(Error::Undetermined(_))
    ));
}

#[test]
fn filtration_levels() {
    let arc = essential_family(
        &spec(
            FamilyId::I13A,
            &[
                ("l1_3", 2),
                ("l5_2", -1),
                ("l4_1", 3),
                ("l3_1", 1),
                ("l6_1", -1),
                ("l2_1", 4),
            ],
        ),
        N,
    )
    .unwrap();
    let ideal = localized_generators(Stratum::I1I3).unwrap();
    assert!(filtration_level(&ideal, &arc, 3).unwrap());
    assert!(filtration_level(&ideal, &arc, 4).unwrap());
    assert!(!filtration_level(&ideal, &arc, 2).unwrap());

    let smooth =
        essential_family(&spec(FamilyId::SmoothI1, &[("l1_1", 1), ("l6_1", 2)]), N).unwrap();
    assert!(filtration_level(&localized_generators(Stratum::I1).unwrap(), &smooth, 1).unwrap());
}

#[test]
fn global_and_localized_agree_on_i13() {
    let global = bautin_ideal();
    let local = localized_generators(Stratum::I1I3).unwrap();
    let base = default_base(Stratum::I1I3);
    let mut arcs = Vec::new();
    for t in 0..100 {
        let mut rng = stream(5, t);
        arcs.push(match t % 4 {
            0 => random_arc(&base, &mut rng),
            1 => FamilySampler::new(FamilyId::I13A).sample(&mut rng).unwrap(),
            2 => FamilySampler::new(FamilyId::I13B).sample(&mut rng).unwrap(),
            _ => FamilySampler::new(FamilyId::I13C).sample(&mut rng).unwrap(),
        });
    }
    let r = generator_invariance_check(&global, &local, &arcs).unwrap();
    assert!(r.pass, "{:?}", r.mismatches);
    assert_eq!(r.arcs, 100);
}

#[test]
fn identical_ideals_correspond() {
    let ideal = bautin_ideal();
    let base = default_base(Stratum::I1I2I3);
    let arcs: Vec<Arc> = (0..40)
        .map(|t| random_arc(&base, &mut stream(9, t)))
        .collect();
    assert!(
        generator_invariance_check(&ideal, &ideal, &arcs)
            .unwrap()
            .pass
    );
}

#[test]
fn unimodular_change_keeps_orders() {
    let a = Ideal::parse(&["x", "y"], &["x", "y^2"]).unwrap();
    let b = Ideal::parse(&["x", "y"], &["x + y^2", "y^2"]).unwrap();
    let mut arcs = Vec::new();
    for t in 0..200 {
        let mut rng = stream(13, t);
        let coeffs = |rng: &mut rand_chacha::ChaCha8Rng| {
            let shift = rng.gen_range(1..=4);
            let mut c = vec![0i64; shift];
            c.extend((0..4).map(|_| rng.gen_range(-3..=3)));
            c
        };
        let x = coeffs(&mut rng);
        let y = coeffs(&mut rng);
        arcs.push(xy_arc(&x, &y, 8));
    }
    for arc in &arcs {
        assert_eq!(
            order_of_arc(&a, arc).unwrap().order,
            order_of_arc(&b, arc).unwrap().order
        );
    }
    assert!(generator_invariance_check(&a, &b, &arcs).unwrap().pass);
}

#[test]
fn broken_correspondence_is_reported() {
    let a = Ideal::parse(&["x", "y"], &["x", "y"]).unwrap();
    // Not the same ideal: orders differ on x = 0, y = ε.
    let b = Ideal::parse(&["x", "y"], &["x", "y^2"]).unwrap();
    let arcs = vec![xy_arc(&[0, 1], &[0, 1], 4), xy_arc(&[0], &[0, 1], 4)];
    let r = generator_invariance_check(&a, &b, &arcs).unwrap();
    assert!(!r.pass);
    assert_eq!(r.mismatches.len(), 1);
}

fn dimension(stratum: Stratum, families: &[FamilyId], trials: usize, seed: u64) -> i64 {
    let samplers: Vec<FamilySampler> = families.iter().map(|f| FamilySampler::new(*f)).collect();
    let refs: Vec<&dyn ArcSampler> = samplers.iter().map(|s| s as &dyn ArcSampler).collect();
    fiber_dimension_sample(&localized_generators(stratum).unwrap(), &refs, trials, seed)
        .unwrap()
        .dimension
}

#[test]
fn fiber_dimensions() {
    assert_eq!(dimension(Stratum::I1, &[FamilyId::SmoothI1], 32, 1), 1);
    assert_eq!(dimension(Stratum::I4, &[FamilyId::SmoothI4], 32, 1), 3);
    let i13 = [FamilyId::I13A, FamilyId::I13B, FamilyId::I13C];
    assert_eq!(dimension(Stratum::I1I3, &i13, 32, 1), 3);
}

#[test]
fn fiber_dimension_stabilizes() {
    for seed in [1, 7, 42] {
        let i13 = [FamilyId::I13A, FamilyId::I13B, FamilyId::I13C];
        let small = dimension(Stratum::I1I3, &i13, 16, seed);
        let large = dimension(Stratum::I1I3, &i13, 32, seed);
        assert!(large >= small);
        assert_eq!(dimension(Stratum::I1I3, &i13, 64, seed), large);
    }
}

#[test]
fn all_undetermined_is_an_error() {
    struct Fixed;
    impl ArcSampler for Fixed {
        fn label(&self) -> String {
            "fixed".into()
        }
        fn sample(&self, _: &mut rand_chacha::ChaCha8Rng) -> bautin_core::Result<Arc> {
            Ok(point_arc(default_base(Stratum::I1)))
        }
    }
    let r = fiber_dimension_sample(&bautin_ideal(), &[&Fixed], 4, 0);
    assert!(matches!(r, Err(Error::Undetermined(_))));
}
