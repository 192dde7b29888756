use skewrate_core::classify::{classify, CaseKind};
use skewrate_core::fixtures::{ALL, G1, G2, G3, G4, G5};
use skewrate_core::newton::{LatticePoint, NewtonPolygon};
use skewrate_core::predict::{gamma_n, Bracket};
use skewrate_core::rational::{from_u64, int, ratio};
use skewrate_core::verify::{verify_germ, FindingKind, VerificationReport, VerifyOptions};
use skewrate_core::Limits;

fn report(f: &skewrate_core::fixtures::Fixture, n_max: u32) -> VerificationReport {
    verify_germ(&f.germ(), &VerifyOptions::new(n_max))
}

fn failures(r: &VerificationReport) -> Vec<String> {
    r.failures()
        .map(|(s, o)| format!("n={} [{}] {} observed {}", s.n, o.tag, o.claim, o.observed))
        .chain(r.failed_lemmas().map(|l| format!("{}: {}", l.name, l.detail)))
        .collect()
}

#[test]
fn every_fixture_passes_to_n4() {
    for f in ALL.iter().take(5) {
        let r = report(f, 4);
        assert!(r.resource_stop.is_none(), "{}", f.name);
        assert!(r.passed(), "{}: {:?}", f.name, failures(&r));
        assert!(r.claim_count() > 0);
        assert!(
            r.findings.iter().all(|x| x.kind != FindingKind::CoefficientMismatch),
            "{}",
            f.name
        );
    }
}

#[test]
fn case2_bracket_and_previous_vertex() {
    let r = report(&G2, 2);
    let o = &r.oracle[1];
    assert_eq!(o.c_qn, 8);
    let step = r.steps.iter().find(|s| s.n == 2 && s.reading == 0).unwrap();
    assert_eq!(step.prediction.cqn, Bracket::new(ratio(11, 2), true, int(10), true));
    let (prev, _) = step.prediction.prev_vertex.clone().unwrap();
    assert_eq!(prev, LatticePoint::new(7u64, 2u64));
    assert!(o.vertices.contains(&prev));
    assert_eq!(
        NewtonPolygon::from_vertices(o.vertices.clone()).previous_vertex(&LatticePoint::new(9u64, 1u64)),
        Some(&prev)
    );
}

#[test]
fn case3_next_vertex() {
    let r = report(&G3, 2);
    let step = r.steps.iter().find(|s| s.n == 2 && s.reading == 0).unwrap();
    let (next, _) = step.prediction.next_vertex.clone().unwrap();
    assert_eq!(next, LatticePoint::new(2u64, 2u64));
    let polygon = NewtonPolygon::from_vertices(r.oracle[1].vertices.clone());
    assert_eq!(polygon.next_vertex(&LatticePoint::new(0u64, 4u64)), Some(&next));
}

#[test]
fn case4_rate_is_exact() {
    let r = report(&G4, 2);
    assert_eq!(r.oracle[1].c_qn, 4);
    let step = r.steps.iter().find(|s| s.n == 2 && s.reading == 0).unwrap();
    assert_eq!(step.prediction.cqn_exact(), Some(&int(4)));
}

#[test]
fn cancellation_at_second_step() {
    let f = G5.germ();
    let r = report(&G5, 2);
    let event = r.vanishing.iter().find(|v| v.reading == 0).unwrap();
    assert_eq!(event.n0, 2);
    assert_eq!(event.term, LatticePoint::new(4u64, 0u64));
    let case = classify(&f);
    let q2 = f.iterate(2, &Limits::default()).unwrap();
    assert_eq!(q2.q().coeff_at(4, 0), int(0));
    assert_eq!(NewtonPolygon::of(q2.q()).unwrap().weight(&case.l1), int(4));
    assert!(r.passed(), "{:?}", failures(&r));
}

#[test]
fn order_propositions() {
    // ord_w(Q^n) = d^n for Case 2 with d > 0; ord_z(Q^n) = γ_n for Case 3
    for (fixture, kind) in [(G2, CaseKind::Case2), (G3, CaseKind::Case3)] {
        let f = fixture.germ();
        let case = classify(&f);
        assert_eq!(case.kind, kind);
        let r = report(&fixture, 4);
        for o in &r.oracle {
            match kind {
                CaseKind::Case2 => assert_eq!(o.ord_w, case.d.pow(o.n)),
                _ => assert_eq!(
                    from_u64(o.ord_z),
                    skewrate_core::rational::from_uint(&gamma_n(case.delta, case.gamma, case.d, o.n))
                ),
            }
        }
    }
}

#[test]
fn monomial_fixture_collapses() {
    let r = report(&G1, 4);
    for s in &r.steps {
        let o = r.oracle.iter().find(|o| o.n == s.n).unwrap();
        assert_eq!(s.prediction.cqn_exact(), Some(&from_u64(o.c_qn)));
        assert_eq!(s.prediction.cfn.exact_value(), Some(&from_u64(o.c_fn)));
    }
}
