use privfeas::arith::{determinant, solve_linear_system, RatMatrix, RatVector, Rational, RowEchelon};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn square(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, n), n).prop_map(|rows| {
        RatMatrix::new(rows.iter().map(|r| RatVector::from_ints(r)).collect()).unwrap()
    })
}

fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.nrows();
    let rows = (0..n)
        .map(|i| {
            let row = (0..b.ncols())
                .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &a.row(i)[k] * &b.row(k)[j]))
                .collect();
            RatVector::new(row).unwrap()
        })
        .collect();
    RatMatrix::new(rows).unwrap()
}

#[test]
fn frozen_determinants() {
    let a = RatMatrix::from_ints(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).unwrap();
    assert_eq!(determinant(&a).unwrap(), Rational::from(6));
    let v = RatMatrix::from_ints(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 9]]).unwrap();
    assert_eq!(determinant(&v).unwrap(), Rational::from(2));
    let singular = RatMatrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
    assert!(determinant(&singular).unwrap().is_zero());
    assert_eq!(determinant(&RatMatrix::identity(4)).unwrap(), Rational::one());
}

#[test]
fn rational_display_and_rounding() {
    let x = Rational::new(-7, 2).unwrap();
    assert_eq!(x.to_string(), "-7/2");
    assert_eq!(x.floor(), (-4).into());
    assert_eq!(x.ceil(), (-3).into());
    assert!(Rational::new(1, 0).is_err());
    assert_eq!(Rational::new(6, -4).unwrap(), Rational::new(-3, 2).unwrap());
}

proptest! {
    #[test]
    fn field_laws(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn order_matches_f64(a in rat(), b in rat()) {
        if (a.to_f64() - b.to_f64()).abs() > 1e-9 {
            prop_assert_eq!(a < b, a.to_f64() < b.to_f64());
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in square(3), b in square(3)) {
        let lhs = determinant(&mul(&a, &b)).unwrap();
        let rhs = &determinant(&a).unwrap() * &determinant(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn solutions_satisfy_system(a in square(3), x in prop::collection::vec(rat(), 3)) {
        let x = RatVector::new(x).unwrap();
        let b = a.mul_vec(&x).unwrap();
        match solve_linear_system(&a, &b).unwrap() {
            Some(sol) => prop_assert_eq!(sol, x),
            None => prop_assert!(determinant(&a).unwrap().is_zero()),
        }
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..4)) {
        let a: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect();
        let ech = RowEchelon::homogeneous(4, &a);
        let null = ech.null_space();
        prop_assert_eq!(ech.rank() + null.len(), 4);
        for v in &null {
            for r in &a {
                let dot = r.iter().zip(v).fold(Rational::zero(), |acc, (p, q)| acc + p * q);
                prop_assert!(dot.is_zero());
            }
        }
    }
}
