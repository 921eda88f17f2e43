use super::*;
use crate::numbers::parse_alpha_spec;
use crate::sigma_rho::Problem;

fn pt(f: &std::sync::Arc<crate::numbers::AlgebraicField>, xs: &[&str]) -> Point {
    Point::new(xs.iter().map(|s| f.parse_element(s).unwrap()).collect())
}

#[test]
fn membership_examples() {
    let f = parse_alpha_spec("nthroot(2, 2)").unwrap();
    let x = vec![pt(&f, &["1", "0"]), pt(&f, &["0", "1"])];
    assert!(member_conv_le(&x, &pt(&f, &["1/2", "1/2"])).is_inside());
    assert!(!member_conv_le(&x, &pt(&f, &["1", "1"])).is_inside());
    assert!(member_conv_le(&x[..1], &x[0]).is_inside());
    // a/2 ≈ 0.707: (a/2, a/2) is outside, (a/2 - 1/5, 1/5) is inside
    assert!(!member_conv_le(&x, &pt(&f, &["a/2", "a/2"])).is_inside());
    assert!(member_conv_le(&x, &pt(&f, &["a/2 - 1/5", "1/5"])).is_inside());
    // exactly on the boundary
    assert!(member_conv_le(&x, &pt(&f, &["a - 1", "2 - a"])).is_inside());
    assert!(!member_conv_le(&x, &pt(&f, &["a - 1", "2 - a + 1/1000000000000"])).is_inside());
}

#[test]
fn witness_reproduces_domination() {
    let f = parse_alpha_spec("nthroot(3, 3)").unwrap();
    let x = vec![pt(&f, &["a", "0", "1"]), pt(&f, &["0", "a^2", "1"]), pt(&f, &["1", "1", "0"])];
    let y = pt(&f, &["1/3", "1/2", "1/4"]);
    match member_conv_le(&x, &y) {
        Membership::Inside(l) => {
            let refs: Vec<&Point> = x.iter().collect();
            assert!(membership::check_witness(&refs, &y, &l));
        }
        Membership::Outside => panic!("expected inside"),
    }
}

#[test]
fn hull_examples() {
    let f = parse_alpha_spec("2").unwrap();
    let x = vec![pt(&f, &["1", "0"]), pt(&f, &["0", "1"]), pt(&f, &["2/5", "2/5"])];
    assert_eq!(hull_le(&x), x[..2].to_vec());
    assert_eq!(hull_le(&x[..1]), x[..1].to_vec());
    let dup = vec![x[0].clone(), x[0].clone()];
    assert_eq!(hull_le(&dup).len(), 1);
}

#[test]
fn induced_matching_pathwidth_one() {
    let p = Problem::parse("{1}", "N", "all").unwrap();
    let bp = BoundProblem::new(&p, crate::sigma_rho::GraphClass::Pathwidth(1)).unwrap();
    let f = parse_alpha_spec("root(3, poly x^3-x^2-1 in [1.4,1.5])").unwrap();
    let (cert, _) = saturate(&bp, &f.generator(), &[], Limits::default()).unwrap().unwrap();
    let first = vec![
        f.parse_element("1 + a - a^2").unwrap(),
        f.parse_element("3 + 3a - 3a^2").unwrap(),
        f.parse_element("1 + a - a^2").unwrap(),
    ];
    assert!(cert.points.contains(&first), "{}", cert.to_text());
    assert_eq!(cert.points.len(), 5, "{}", cert.to_text());
    assert!(verify_certificate(&cert).unwrap().is_verified());
    let again = Certificate::parse(&cert.to_text()).unwrap();
    assert_eq!(again.to_text(), cert.to_text());
    let mut fewer = cert.clone();
    fewer.points.remove(0);
    assert!(!verify_certificate(&fewer).unwrap().is_verified());
}

#[test]
fn lower_bound_induced_matching() {
    let p = Problem::parse("{1}", "N", "all").unwrap();
    let bp = BoundProblem::new(&p, crate::sigma_rho::GraphClass::Pathwidth(1)).unwrap();
    let lb = lower_bound(&bp.system, 1);
    assert!(lb.value > 1.4655 && lb.value < 1.465572, "{lb:?}");
}

#[test]
fn lower_bound_independent_dominating_trees() {
    let p = Problem::parse("{0}", "N+", "all").unwrap();
    let bp = BoundProblem::new(&p, crate::sigma_rho::GraphClass::Tree).unwrap();
    let lb = lower_bound(&bp.system, 2);
    assert!((lb.value - 2f64.sqrt()).abs() < 1e-6, "{lb:?}");
}
