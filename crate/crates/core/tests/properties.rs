use fibexp::linalg::{det3, proj_dist, scalar, wedge, Mat2, SymPoint};
use num_bigint::BigInt;
use proptest::prelude::*;

const BOUND: i64 = 1_000_000;

fn point() -> impl Strategy<Value = SymPoint> {
    [-BOUND..=BOUND, -BOUND..=BOUND, -BOUND..=BOUND].prop_map(|[a, b, c]| SymPoint::new(a, b, c))
}

fn nonzero_point() -> impl Strategy<Value = SymPoint> {
    point().prop_filter("non-zero", |p| !p.is_zero())
}

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(10_000)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn scalar_combination_bound(x in point(), y in point(), z in point()) {
        let v = &y.scale(&scalar(&x, &z)) - &z.scale(&scalar(&x, &y));
        prop_assert!(v.norm() <= BigInt::from(2) * x.norm() * wedge(&y, &z).norm());
    }

    #[test]
    fn wedge_triangle_bound(x in point(), y in point(), z in point()) {
        let lhs = y.norm() * wedge(&x, &z).norm();
        let rhs = z.norm() * wedge(&x, &y).norm() + BigInt::from(2) * x.norm() * wedge(&y, &z).norm();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn projective_near_triangle(x in nonzero_point(), y in nonzero_point(), z in nonzero_point()) {
        let xz = proj_dist(&x, &z).unwrap();
        let xy = proj_dist(&x, &y).unwrap();
        let yz = proj_dist(&y, &z).unwrap();
        prop_assert!(xz <= xy + yz * BigInt::from(2));
    }

    #[test]
    fn double_wedge_is_det_times_middle(x in point(), y in point(), z in point()) {
        let lhs = wedge(&wedge(&x, &y), &wedge(&y, &z));
        prop_assert_eq!(lhs, y.scale(&det3(&x, &y, &z)));
    }

    #[test]
    fn xjx_is_det_j(x in point()) {
        let m = x.to_mat2();
        let lhs = &(&m * &Mat2::j()) * &m;
        prop_assert_eq!(lhs, Mat2::j().scale(&x.det()));
    }

    #[test]
    fn wedge_bounded_by_twisted_product(x in point(), y in point()) {
        let twisted = &(&x.to_mat2() * &Mat2::j()) * &y.to_mat2();
        prop_assert!(wedge(&x, &y).norm() <= BigInt::from(2) * twisted.norm());
    }

    #[test]
    fn det_is_multiplicative(
        a in [-BOUND..=BOUND, -BOUND..=BOUND, -BOUND..=BOUND, -BOUND..=BOUND],
        b in [-BOUND..=BOUND, -BOUND..=BOUND, -BOUND..=BOUND, -BOUND..=BOUND],
    ) {
        let (m, n) = (Mat2::new(a[0], a[1], a[2], a[3]), Mat2::new(b[0], b[1], b[2], b[3]));
        prop_assert_eq!((&m * &n).det(), m.det() * n.det());
    }
}
