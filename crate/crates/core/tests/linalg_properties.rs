use polydecomp::linalg::{affinely_independent, hyperplane_through, int, RVector};
use proptest::prelude::*;

fn points(n: usize, d: usize) -> impl Strategy<Value = Vec<RVector>> {
    proptest::collection::vec(proptest::collection::vec(-5i64..6, d), n)
        .prop_map(|rows| rows.iter().map(|r| RVector::from_ints(r)).collect())
}

proptest! {
    #[test]
    fn affine_independence_ignores_order_and_translation(
        pts in points(3, 3),
        shift in proptest::collection::vec(-9i64..10, 3),
        rot in 0usize..3,
    ) {
        let base = affinely_independent(&pts).unwrap();
        let mut rotated = pts.clone();
        rotated.rotate_left(rot);
        prop_assert_eq!(affinely_independent(&rotated).unwrap(), base);
        let s = RVector::from_ints(&shift);
        let moved: Vec<RVector> = pts.iter().map(|p| p + &s).collect();
        prop_assert_eq!(affinely_independent(&moved).unwrap(), base);
    }

    #[test]
    fn hyperplanes_do_not_depend_on_point_order(pts in points(3, 3), rot in 0usize..3) {
        let mut rotated = pts.clone();
        rotated.rotate_left(rot);
        rotated.swap(0, 1);
        let a = hyperplane_through(&pts).unwrap();
        prop_assert_eq!(&a, &hyperplane_through(&rotated).unwrap());
        if let Some((normal, offset)) = a {
            let lead = normal.coords().iter().find(|x| **x != int(0)).unwrap();
            prop_assert_eq!(lead, &int(1));
            for p in &pts {
                prop_assert_eq!(normal.dot(p), offset.clone());
            }
        }
    }
}
