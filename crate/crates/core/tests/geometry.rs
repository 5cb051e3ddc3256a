use privfeas::arith::{RatVector, Rational};
use privfeas::dp::RandomSource;
use privfeas::geometry::{
    caratheodory_membership, cdepth_oracle, depth, fm_hull_membership, general_position_check, is_realizable,
    is_realizable_points, lp_hull_membership, Constraint, ConstraintSet,
};
use privfeas::harness::{generate_feasibility_instance_with_point, generate_labeled_instance_with_hidden, tight_witness};
use proptest::prelude::*;

fn instance(d: usize, x: i64) -> impl Strategy<Value = ConstraintSet> {
    let c = (prop::collection::vec(-x..=x, d), -x..=x)
        .prop_filter("nonzero normal", |(a, _)| a.iter().any(|v| *v != 0))
        .prop_map(|(a, w)| Constraint::from_i64(&a, w).unwrap());
    prop::collection::vec(c, 1..6).prop_map(move |items| ConstraintSet::new(d, x, items).unwrap())
}

fn point(d: usize) -> impl Strategy<Value = RatVector> {
    prop::collection::vec((-6i64..=6, 1i64..=3), d)
        .prop_map(|v| RatVector::new(v.into_iter().map(|(n, q)| Rational::new(n, q).unwrap()).collect()).unwrap())
}

#[test]
fn depth_counts_satisfied_constraints() {
    let s = ConstraintSet::new(
        2,
        2,
        vec![
            Constraint::from_i64(&[1, 0], 0).unwrap(),
            Constraint::from_i64(&[0, 1], 0).unwrap(),
            Constraint::from_i64(&[-1, -1], -1).unwrap(),
            Constraint::from_i64(&[1, 1], 2).unwrap(),
        ],
    )
    .unwrap();
    assert_eq!(depth(&s, &RatVector::from_ints(&[0, 0])).unwrap(), 3);
    assert_eq!(depth(&s, &RatVector::from_ints(&[1, 1])).unwrap(), 3);
    assert_eq!(depth(&s, &RatVector::from_ints(&[-1, -1])).unwrap(), 1);
    assert!(!is_realizable(&s));
    assert!(depth(&s, &RatVector::from_ints(&[0])).is_err());
}

#[test]
fn tight_witness_has_cdepth_two_but_depth_one() {
    let (s, x) = tight_witness().unwrap();
    assert_eq!(depth(&s, &x).unwrap(), 1);
    assert_eq!(cdepth_oracle(&s, &x).unwrap(), 2);
}

#[test]
fn constraint_invariants() {
    assert!(Constraint::from_i64(&[0, 0], 1).is_err());
    assert!(Constraint::from_i64(&[], 1).is_err());
    assert!(ConstraintSet::new(1, 2, vec![Constraint::from_i64(&[3], 0).unwrap()]).is_err());
    assert!(ConstraintSet::new(2, 2, vec![Constraint::from_i64(&[1], 0).unwrap()]).is_err());
}

#[test]
fn generated_instances_contain_their_hidden_point() {
    for seed in 0..20 {
        let mut rng = RandomSource::new(seed, 0);
        let inst = generate_feasibility_instance_with_point(2, 3, 15, &mut rng).unwrap();
        assert_eq!(inst.constraints.len(), 15);
        assert_eq!(depth(&inst.constraints, &inst.hidden).unwrap(), 15);
        assert!(is_realizable(&inst.constraints));
        let lab = generate_labeled_instance_with_hidden(2, 3, 6, &mut rng, true).unwrap();
        assert!(is_realizable_points(&lab.points).unwrap());
        let xs: Vec<RatVector> = lab.points.iter().map(|p| p.x.clone()).collect();
        assert!(general_position_check(&xs).unwrap());
        assert!(xs.iter().all(|x| !x.is_zero()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_membership_methods_agree(
        pts in prop::collection::vec(point(2), 1..5),
        x in point(2),
    ) {
        let raw: Vec<Vec<Rational>> = pts.iter().map(|p| p.entries().to_vec()).collect();
        let lp = lp_hull_membership(x.entries(), &raw, &[], &[]);
        prop_assert_eq!(fm_hull_membership(&x, &pts).unwrap(), lp);
        prop_assert_eq!(caratheodory_membership(&x, &pts).unwrap(), lp);
    }

    #[test]
    fn hull_contains_its_points(pts in prop::collection::vec(point(3), 1..5)) {
        for p in &pts {
            prop_assert!(fm_hull_membership(p, &pts).unwrap());
        }
        let mut centroid = RatVector::zeros(3);
        for p in &pts {
            centroid = centroid.add(p).unwrap();
        }
        let centroid = centroid.scale(&Rational::new(1, pts.len() as i64).unwrap());
        prop_assert!(caratheodory_membership(&centroid, &pts).unwrap());
    }

    #[test]
    fn cdepth_bounds(s in instance(2, 2), x in point(2)) {
        let dep = depth(&s, &x).unwrap();
        let cd = cdepth_oracle(&s, &x).unwrap();
        prop_assert!(dep <= cd && cd <= s.len(), "depth {} cdepth {} m {}", dep, cd, s.len());
    }

    #[test]
    fn realizability_matches_a_full_depth_witness(s in instance(1, 3)) {
        // In one dimension the feasible set, if any, contains a breakpoint
        // or is unbounded; probing those is a complete check.
        let mut probes = vec![Rational::from(-100), Rational::from(100)];
        for c in s.iter() {
            probes.push(Rational::new(c.w().clone(), c.a()[0].clone()).unwrap());
        }
        let full = probes
            .into_iter()
            .any(|p| depth(&s, &RatVector::new(vec![p]).unwrap()).unwrap() == s.len());
        prop_assert_eq!(is_realizable(&s), full);
    }
}
