use qseries::identities::{
    domain_validate, evaluate_identity, lookup, parse_rational, register_all, sample_params, Mode,
    Params, SampleOptions, SlotKind, Strategy, Verdict,
};
use qseries::{Policy, QError, Rational};

const IDS: [&str; 24] = [
    "GENFUN_SA", "GENFUN_CAUCHY", "QBINOM_THM", "EULER", "EULER_INV", "THM1_3_T", "THM1_3_E",
    "COR1_4_T", "COR1_4_E", "THM2_1a", "THM2_1b", "THM2_2a", "THM2_2b", "COR2_3a", "COR2_3b", "CHU",
    "THM3_1", "THM3_2", "REMARK3", "AA", "PROP4_2a", "PROP4_2b", "THM4_3", "THM4_4",
];

fn p(pairs: &[(&str, &str)]) -> Params {
    let mut out = Params::new();
    for (k, v) in pairs {
        match v.parse::<i64>() {
            Ok(i) => out.set_int(k, i),
            Err(_) => out.set_scalar(k, parse_rational(v).unwrap()),
        };
    }
    out
}

#[test]
fn registry_lists_every_entry_once_in_order() {
    let ids: Vec<_> = register_all().iter().map(|d| d.id).collect();
    assert_eq!(ids, IDS);
    for d in register_all() {
        assert!(!d.anchor.trim().is_empty(), "{} has no anchor", d.id);
        assert!(d.default_tol > 0.0);
    }
    assert_eq!(lookup("CHU").unwrap().anchor, "q-Chu-Vandermonde summation formula is recalled");
    assert!(matches!(lookup("NOPE"), Err(QError::UnknownIdentity(_))));
}

#[test]
fn exact_capability() {
    let exact: Vec<_> = register_all().iter().filter(|d| d.exact_capable).map(|d| d.id).collect();
    assert_eq!(exact, ["CHU", "THM3_2", "REMARK3"]);
}

#[test]
fn terminating_order_is_a_positive_integer_slot() {
    let def = lookup("THM4_3").unwrap();
    let m = def.slots.iter().find(|s| s.name == "M").expect("M slot");
    match m.kind {
        SlotKind::Int { hard, .. } => assert_eq!(hard.0, 1),
        _ => panic!("M must be an integer slot"),
    }
    assert!(!def.slots.iter().any(|s| s.name == "r"), "r is derived from M");
}

#[test]
fn domain_examples() {
    let pol = Policy::default();
    let v = domain_validate("QBINOM_THM", &p(&[("a", "1/4"), ("z", "1.2"), ("q", "1/2")]), Mode::Float, &pol).unwrap();
    assert!(v.iter().any(|m| m.starts_with("|z|<1")), "{v:?}");

    // ac = 0.5, ad = 0.3, bc = 0.2, bd = 0.12
    let aa = p(&[("a", "1"), ("b", "2/5"), ("c", "1/2"), ("d", "3/10"), ("q", "1/2")]);
    assert_eq!(domain_validate("AA", &aa, Mode::Float, &pol).unwrap(), Vec::<String>::new());

    let thm31 = p(&[
        ("r", "0.1"), ("f", "0.2"), ("g", "0.3"), ("v", "0.1"), ("w", "0.2"), ("u", "0.1"),
        ("x", "0.3"), ("y", "0"), ("q", "0.5"), ("n", "2"),
    ]);
    let v = domain_validate("THM3_1", &thm31, Mode::Float, &pol).unwrap();
    assert!(v.iter().any(|m| m == "y ≠ 0"), "{v:?}");
    assert!(matches!(domain_validate("NOPE", &thm31, Mode::Float, &pol), Err(QError::UnknownIdentity(_))));
}

#[test]
fn margin_tightens_open_conditions_in_float_mode() {
    let pol = Policy::default();
    let near = p(&[("a", "1/4"), ("z", "0.97"), ("q", "1/2")]);
    assert!(!domain_validate("QBINOM_THM", &near, Mode::Float, &pol).unwrap().is_empty());
    let loose = Policy { margin: 0.0, ..pol };
    assert!(domain_validate("QBINOM_THM", &near, Mode::Float, &loose).unwrap().is_empty());
}

#[test]
fn evaluate_examples() {
    let pol = Policy::default();
    let chu = p(&[("n", "1"), ("x", "1/3"), ("y", "1/5"), ("q", "1/2")]);
    let r = evaluate_identity("CHU", &chu, Mode::Exact, None, &pol).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.lhs.as_deref(), Some("1/6"));
    assert_eq!(r.rhs.as_deref(), Some("1/6"));

    let qb = p(&[("a", "1/4"), ("z", "1/2"), ("q", "1/2")]);
    let r = evaluate_identity("QBINOM_THM", &qb, Mode::Float, Some(1e-10), &pol).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.rel_residual.unwrap() <= 1e-10);

    for n in 0..6 {
        let t = p(&[("n", &n.to_string()), ("m", "0"), ("x", "2/7"), ("y", "-3/5"), ("q", "1/3")]);
        let r = evaluate_identity("THM3_2", &t, Mode::Exact, None, &pol).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    let bad = p(&[("a", "1/4"), ("z", "3/2"), ("q", "1/2")]);
    let r = evaluate_identity("QBINOM_THM", &bad, Mode::Float, None, &pol).unwrap();
    assert_eq!(r.verdict, Verdict::SkippedDomain);
    assert!(!r.diagnostics.violations.is_empty());

    assert!(matches!(
        evaluate_identity("AA", &p(&[("a", "0"), ("b", "0"), ("c", "1/3"), ("d", "1/2"), ("q", "1/2")]), Mode::Exact, None, &pol),
        Err(QError::ExactModeUnsupported(_))
    ));
    assert!(matches!(
        evaluate_identity("CHU", &p(&[("x", "1/3")]), Mode::Exact, None, &pol),
        Err(QError::InvalidParams(_))
    ));
}

#[test]
fn sampler_is_deterministic_and_admissible() {
    let pol = Policy::default();
    let opts = SampleOptions::new(7, 3, Strategy::Random, Mode::Exact);
    let a = sample_params("CHU", &opts, &pol).unwrap();
    let b = sample_params("CHU", &opts, &pol).unwrap();
    assert_eq!(a.len(), 3);
    assert_eq!(a, b);
    let other = sample_params("CHU", &SampleOptions::new(8, 3, Strategy::Random, Mode::Exact), &pol).unwrap();
    assert_ne!(a, other);

    for def in register_all() {
        let mode = if def.exact_capable { Mode::Exact } else { Mode::Float };
        for strategy in [Strategy::Random, Strategy::Grid] {
            let pts = sample_params(def.id, &SampleOptions::new(11, 12, strategy, mode), &pol).unwrap();
            assert_eq!(pts.len(), 12, "{}", def.id);
            for pt in &pts {
                assert!(def.violations(pt, mode, &pol).unwrap().is_empty(), "{} {:?}", def.id, pt);
            }
        }
    }
}

#[test]
fn euler_draws_respect_the_margin() {
    let pol = Policy::default();
    let pts = sample_params("EULER", &SampleOptions::new(3, 100, Strategy::Random, Mode::Float), &pol).unwrap();
    assert_eq!(pts.len(), 100);
    let cap = Rational::from(95) / 100 * (Rational::from(1) - Rational::from(5) / 100);
    assert!(pts.iter().all(|pt| pt.scalar("z").unwrap().clone().abs() <= cap));
}

#[test]
fn terminating_grid_cycles_through_small_orders() {
    let pol = Policy::default();
    let pts = sample_params("THM4_3", &SampleOptions::new(0, 16, Strategy::Grid, Mode::Float), &pol).unwrap();
    let orders: Vec<i64> = pts.iter().map(|pt| pt.int("M").unwrap()).collect();
    assert_eq!(&orders[..4], &[1, 2, 3, 4]);
    for m in 1..=4 {
        assert_eq!(orders.iter().filter(|&&o| o == m).count(), 4);
    }
}

#[test]
fn exact_mode_rejected_for_analytic_entries() {
    let pol = Policy::default();
    let opts = SampleOptions::new(0, 2, Strategy::Random, Mode::Exact);
    assert!(matches!(sample_params("AA", &opts, &pol), Err(QError::ExactModeUnsupported(_))));
}
