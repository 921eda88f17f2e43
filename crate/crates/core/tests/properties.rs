use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sigrho::numbers::{parse_alpha_spec, AlgebraicField, AlgebraicNumber};
use sigrho::oracle::{count_bruteforce, Graph};
use sigrho::polytope::membership::check_witness;
use sigrho::polytope::{hull_le, member_conv_le, Membership, Point};
use sigrho::sigma_rho::{parse_set, Problem};

fn field() -> Arc<AlgebraicField> {
    parse_alpha_spec("root(3, poly x^3-x^2-1 in [1.4,1.5])").unwrap()
}

fn element(f: &Arc<AlgebraicField>, c: &[(i64, i64)]) -> AlgebraicNumber {
    let coeffs: Vec<BigRational> = c.iter().map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d))).collect();
    f.from_coeffs(&coeffs)
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..20, 1i64..8), 3)
}

fn point(f: &Arc<AlgebraicField>, v: &[u32]) -> Point {
    Point::new(v.iter().map(|&x| f.from_i64(x as i64)).collect())
}

fn points(dim: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0u32..12, dim), 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_arithmetic(a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = field();
        let (a, b, c) = (element(&f, &a), element(&f, &b), element(&f, &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn comparison_agrees_with_floats(a in coeffs(), b in coeffs()) {
        let f = field();
        let (a, b) = (element(&f, &a), element(&f, &b));
        let diff = a.to_f64() - b.to_f64();
        if diff.abs() > 1e-9 {
            prop_assert_eq!(a.compare(&b), diff.partial_cmp(&0.0).unwrap());
        }
        prop_assert_eq!(a.compare(&b), (&a - &b).signum());
        prop_assert_eq!(a.compare(&a), Ordering::Equal);
    }

    #[test]
    fn set_membership(singles in prop::collection::vec(0usize..8, 0..4), start in 0usize..6, step in 1usize..5) {
        let items: Vec<String> = singles.iter().map(|s| s.to_string()).chain([format!("{start}+{step}k")]).collect();
        let set = parse_set(&format!("{{{}}}", items.join(","))).unwrap();
        for n in 0..40 {
            let want = singles.contains(&n) || (n >= start && (n - start) % step == 0);
            prop_assert_eq!(set.contains(n), want, "n = {}", n);
        }
        for n in set.preperiod()..40 {
            prop_assert_eq!(set.contains(n), set.contains(n + set.period()));
        }
    }

    #[test]
    fn membership_witnesses(xs in points(3), weights in prop::collection::vec(1u32..5, 7), shrink in prop::collection::vec(0u32..3, 3)) {
        let f = field();
        let pts: Vec<Point> = xs.iter().map(|v| point(&f, v)).collect();
        let refs: Vec<&Point> = pts.iter().collect();
        // a convex combination, lowered coordinate-wise, lies inside
        let total: u32 = weights[..pts.len()].iter().sum();
        let y: Vec<AlgebraicNumber> = (0..3)
            .map(|i| {
                let s: u32 = xs.iter().zip(&weights).map(|(x, w)| x[i] * w).sum();
                let q = BigRational::new(BigInt::from(s), BigInt::from(total));
                let lower = BigRational::from_integer(BigInt::from(shrink[i])).min(q.clone());
                f.from_rational(&(q - lower))
            })
            .collect();
        let y = Point::new(y);
        match member_conv_le(&pts, &y) {
            Membership::Inside(lambda) => prop_assert!(check_witness(&refs, &y, &lambda)),
            Membership::Outside => prop_assert!(false, "convex combination reported outside"),
        }
        // above every point in the first coordinate: outside
        let top = xs.iter().map(|x| x[0]).max().unwrap() + 1;
        let mut z = vec![0; 3];
        z[0] = top;
        prop_assert!(!member_conv_le(&pts, &point(&f, &z)).is_inside());
    }

    #[test]
    fn downward_closure(xs in points(3), y in prop::collection::vec(0u32..12, 3), cut in prop::collection::vec(0u32..12, 3)) {
        let f = field();
        let pts: Vec<Point> = xs.iter().map(|v| point(&f, v)).collect();
        let lower: Vec<u32> = y.iter().zip(&cut).map(|(a, b)| a.saturating_sub(*b)).collect();
        if member_conv_le(&pts, &point(&f, &y)).is_inside() {
            prop_assert!(member_conv_le(&pts, &point(&f, &lower)).is_inside());
        }
    }

    #[test]
    fn hull_is_irredundant_and_complete(xs in points(3)) {
        let f = field();
        let pts: Vec<Point> = xs.iter().map(|v| point(&f, v)).collect();
        let hull = hull_le(&pts);
        for p in &pts {
            prop_assert!(member_conv_le(&hull, p).is_inside());
        }
        for i in 0..hull.len() {
            let others: Vec<Point> = hull.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            prop_assert!(!member_conv_le(&others, &hull[i]).is_inside());
        }
    }

    #[test]
    fn counts_grow_with_rho(n in 1usize..8, edges in prop::collection::vec((0usize..8, 0usize..8), 0..12)) {
        // enlarging ρ can only add solutions
        let mut g = Graph::new(n);
        for (a, b) in edges {
            if a < n && b < n && a != b {
                g.add_edge(a, b);
            }
        }
        let narrow = count_bruteforce(&g, &Problem::parse("{0}", "{1}", "all").unwrap()).unwrap();
        let wide = count_bruteforce(&g, &Problem::parse("{0}", "N+", "all").unwrap()).unwrap();
        let all = count_bruteforce(&g, &Problem::parse("N", "N", "all").unwrap()).unwrap();
        prop_assert!(narrow <= wide && wide <= all);
        prop_assert_eq!(all, 1u64 << n);
    }
}
