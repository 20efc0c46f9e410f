use num_complex::Complex;
use proptest::prelude::*;
use stemcalc::clifford::parse_multivector;
use stemcalc::dsl::{differentiate, find_poles, parse, simplify, Expr, Func};
use stemcalc::stem::{gfc_eval, verify_stem, Evaluator};
use stemcalc::{dsl, BasisIndex, CMultivector, Error, Paravector, PlanarDomain};

fn cx(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn c(src: &str, n: usize) -> CMultivector<f64> {
    parse_multivector::<f64>(src, n).unwrap().to_complex()
}

#[test]
fn parses_and_evaluates() {
    let e = parse("z^2 + (1+2e1)*z - e12", 2).unwrap();
    let v = e.eval(2, cx(1.0, 0.0)).unwrap();
    assert!(v.dist(&c("2+2e1-e12", 2)) < 1e-15);

    let exp = parse("exp(3*z)", 1).unwrap();
    assert!((exp.eval_scalar(cx(0.0, 0.0)).unwrap() - cx(1.0, 0.0)).norm() < 1e-15);

    let z = parse("z", 1).unwrap().eval(1, cx(1.0, 2.0)).unwrap();
    assert_eq!(z, CMultivector::scalar(1, cx(1.0, 2.0)));

    let e1z = parse("e1*z", 1).unwrap().eval(1, cx(0.0, 1.0)).unwrap();
    assert!(e1z.dist(&c("e1", 1).scale(cx(0.0, 1.0))) < 1e-15);
}

#[test]
fn rejects_invalid_sources() {
    assert!(matches!(parse("e5", 4), Err(Error::RankViolation { index: 5, n: 4 })));
    assert!(matches!(parse("z +", 1), Err(Error::Syntax { .. })));
    assert!(matches!(parse("log(z)", 1), Err(Error::Syntax { .. })));
    assert!(parse("1/(e1 + z)", 1).is_err());
    let pole = parse("1/z", 1).unwrap();
    assert!(matches!(pole.eval(1, cx(0.0, 0.0)), Err(Error::DivisionByZero { .. })));
}

#[test]
fn symbolic_derivatives() {
    let d = |src: &str| differentiate(&parse(src, 1).unwrap()).to_string();
    assert_eq!(d("z^2"), "2*z");
    assert_eq!(d("exp(3*z)"), "3*exp(3*z)");
    assert_eq!(simplify(&parse("0*z + 1*e1", 1).unwrap()).to_string(), "e1");
}

#[test]
fn poles_are_located() {
    let domain = PlanarDomain::disk(cx(0.0, 0.0), 5.0).unwrap();
    let mut poles = find_poles(&parse("1/(z^2 + 4) + exp(z)/(z - 1)", 1).unwrap(), &domain);
    poles.sort_by(|a, b| a.im.total_cmp(&b.im));
    let expected = [cx(0.0, -2.0), cx(1.0, 0.0), cx(0.0, 2.0)];
    assert_eq!(poles.len(), 3);
    for (p, q) in poles.iter().zip(expected) {
        assert!((p - q).norm() < 1e-10);
    }
    assert!(find_poles(&parse("1/(z - 7)", 1).unwrap(), &domain).is_empty());

    let f = dsl::stem_function::<f64>("1/(z - 1)", 1, None).unwrap();
    assert!(f.singularities().iter().any(|p| (p - cx(1.0, 0.0)).norm() < 1e-10));
}

#[test]
fn functions_become_stem_functions() {
    let f = dsl::stem_function::<f64>("(1+e1)*exp(z) - e1*z^2", 1, None).unwrap();
    let domain = PlanarDomain::disk(cx(0.0, 0.0), 3.0).unwrap();
    assert!(verify_stem(&f, &domain, 64, 1e-12).unwrap().passed);
    let k = Paravector::new(1, vec![0.0, std::f64::consts::PI]).unwrap();
    let v = gfc_eval(&f, &k).unwrap();
    let expected = c("-1-e1", 1).try_add(&c(&format!("{}e1", std::f64::consts::PI.powi(2)), 1)).unwrap();
    assert!(v.dist(&expected) < 1e-12);
}

fn blade(n: usize) -> impl Strategy<Value = BasisIndex> {
    (0u32..(1 << n)).prop_map(BasisIndex)
}

fn expr(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        ((-30i32..30).prop_map(|k| k as f64 / 10.0), blade(n)).prop_map(|(coeff, blade)| Expr::Literal { coeff, blade }),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let scalar = scalar_expr();
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            (inner.clone(), scalar).prop_map(|(a, b)| {
                let shifted = Expr::Add(Box::new(Expr::Mul(Box::new(b.clone()), Box::new(b))), Box::new(Expr::number(5.0)));
                Expr::Div(Box::new(a), Box::new(shifted))
            }),
        ]
    })
}

fn scalar_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::Var), (-20i32..20).prop_map(|k| Expr::number(k as f64 / 10.0))];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (prop::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
        ]
    })
}

fn rank_and_expr() -> impl Strategy<Value = (usize, Expr)> {
    (0..=3usize).prop_flat_map(|n| (Just(n), expr(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printer_round_trips((n, e) in rank_and_expr(), x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let printed = e.to_string();
        let back = parse(&printed, n).unwrap();
        prop_assert_eq!(back.to_string(), printed);
        let z = cx(x, y);
        if let (Ok(a), Ok(b)) = (e.eval::<f64>(n, z), back.eval::<f64>(n, z)) {
            prop_assert!(a.dist(&b) <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn expressions_satisfy_the_stem_identity((n, e) in rank_and_expr(), x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let z = cx(x, y);
        if let (Ok(a), Ok(b)) = (e.eval::<f64>(n, z), e.eval::<f64>(n, z.conj())) {
            prop_assert!(a.conjugation_bar().dist(&b) <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn derivatives_match_finite_differences((n, e) in rank_and_expr(), x in -0.8..0.8f64, y in -0.8..0.8f64) {
        let z = cx(x, y);
        let h = 1e-4;
        let f = stemcalc::dsl::DslFunction::new(e.clone(), n);
        let at = |w: Complex<f64>| Evaluator::<f64>::eval(&f, w);
        let (Ok(p), Ok(m), Ok(d)) = (at(z + h), at(z - h), differentiate(&e).eval::<f64>(n, z)) else {
            return Ok(());
        };
        let (Ok(p2), Ok(m2)) = (at(z + 2.0 * h), at(z - 2.0 * h)) else { return Ok(()) };
        // Fourth-order central difference.
        let fd = p.try_sub(&m).unwrap().scale(cx(8.0, 0.0)).try_sub(&p2.try_sub(&m2).unwrap()).unwrap().scale(cx(1.0 / (12.0 * h), 0.0));
        prop_assert!(fd.dist(&d) <= 1e-6 * d.norm().max(p.norm()).max(1.0));
    }
}
