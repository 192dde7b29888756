//! Checks every prediction against the exact iterates.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{Pow, Zero};

use crate::classify::{r_map, r_step, readings, CaseData};
use crate::germ::{coefficient_at, Iterates, SkewGerm};
use crate::newton::{slope, LatticePoint, NewtonPolygon};
use crate::poly::{Limits, Orders, PolyError, SparsePoly2};
use crate::predict::{
    asymptotic, default_weights, predict, AsymptoticRate, Check, ClaimLevel, Quantity, RatePrediction,
};
use crate::rational::{from_u64, from_uint, Rational};

/// A named inequality or identity with a witness when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<LatticePoint>,
    pub detail: String,
}

impl LemmaCheck {
    pub fn new(name: &'static str, holds: bool, witness: Option<LatticePoint>, detail: String) -> Self {
        LemmaCheck {
            name,
            holds,
            witness,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n_max: u32,
    pub limits: Limits,
    /// Weights sampled in addition to the endpoints and midpoints of the equality range.
    pub extra_weights: Vec<Rational>,
}

impl VerifyOptions {
    pub fn new(n_max: u32) -> Self {
        VerifyOptions {
            n_max,
            limits: Limits::default(),
            extra_weights: Vec::new(),
        }
    }
}

/// Oracle data of one iterate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOracle {
    pub n: u32,
    pub c_pn: u64,
    pub c_qn: u64,
    pub c_fn: u64,
    pub ord_z: u64,
    pub ord_w: u64,
    pub vertices: Vec<LatticePoint>,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimOutcome {
    pub tag: &'static str,
    pub level: ClaimLevel,
    pub claim: String,
    pub passed: bool,
    /// The exact oracle value the claim was compared with.
    pub observed: String,
}

/// Claims of one reading at one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub n: u32,
    pub reading: usize,
    pub prediction: RatePrediction,
    pub outcomes: Vec<ClaimOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindingKind {
    CoefficientMismatch,
    Vanishing,
    /// The watched term is present again after an earlier vanishing.
    Reappearance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub kind: FindingKind,
    pub reading: usize,
    pub n: u32,
    pub message: String,
}

/// First step at which the watched term of a reading is absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingEvent {
    pub reading: usize,
    pub n0: u32,
    pub term: LatticePoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticRecord {
    pub reading: usize,
    pub rate: AsymptoticRate,
    /// `min_n c(f^n) / c_∞^n` over the computed iterates.
    pub observed_constant: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceStop {
    pub n: u32,
    pub error: PolyError,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub germ: SkewGerm,
    pub readings: Vec<CaseData>,
    pub n_max: u32,
    pub oracle: Vec<StepOracle>,
    pub steps: Vec<StepRecord>,
    pub lemma_checks: Vec<LemmaCheck>,
    pub findings: Vec<Finding>,
    pub vanishing: Vec<VanishingEvent>,
    pub asymptotic: Vec<AsymptoticRecord>,
    /// Set when an iterate exceeded the resource limits; earlier steps are kept.
    pub resource_stop: Option<ResourceStop>,
}

impl VerificationReport {
    /// Failed theorem-level claims and lemma checks.
    pub fn failures(&self) -> impl Iterator<Item = (&StepRecord, &ClaimOutcome)> + '_ {
        self.steps.iter().flat_map(|s| {
            s.outcomes
                .iter()
                .filter(|o| !o.passed && o.level == ClaimLevel::Theorem)
                .map(move |o| (s, o))
        })
    }

    pub fn failed_lemmas(&self) -> impl Iterator<Item = &LemmaCheck> + '_ {
        self.lemma_checks.iter().filter(|c| !c.holds)
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count() + self.failed_lemmas().count()
    }

    pub fn passed(&self) -> bool {
        self.failure_count() == 0
    }

    pub fn claim_count(&self) -> usize {
        self.steps.iter().map(|s| s.outcomes.len()).sum()
    }
}

struct IterateData {
    p_order: u64,
    q: SparsePoly2,
    orders: Orders,
    polygon: NewtonPolygon,
}

impl IterateData {
    fn new(f_n: &SkewGerm) -> Self {
        let q = f_n.q().clone();
        let orders = q.orders().expect("iterate has nonzero Q");
        let polygon = NewtonPolygon::of(&q).expect("iterate has nonzero Q");
        IterateData {
            p_order: f_n.delta(),
            q,
            orders,
            polygon,
        }
    }

    fn quantity(&self, q: &Quantity) -> Rational {
        match q {
            Quantity::CQn => from_u64(self.orders.c),
            Quantity::CFn => from_u64(self.orders.c.min(self.p_order)),
            Quantity::CPn => from_u64(self.p_order),
            Quantity::OrdZ => from_u64(self.orders.ord_z),
            Quantity::OrdW => from_u64(self.orders.ord_w),
            Quantity::Weight(l) => self.polygon.weight(l),
        }
    }

    fn vertex_list(&self) -> String {
        let parts: Vec<String> = self.polygon.vertices().iter().map(|v| v.to_string()).collect();
        parts.join(",")
    }

    fn evaluate(&self, check: &Check) -> (bool, String) {
        match check {
            Check::Range { quantity, lower, upper } => {
                let v = self.quantity(quantity);
                let lo_ok = lower
                    .as_ref()
                    .is_none_or(|b| if b.strict { v > b.value } else { v >= b.value });
                let hi_ok = upper
                    .as_ref()
                    .is_none_or(|b| if b.strict { v < b.value } else { v <= b.value });
                (lo_ok && hi_ok, format!("{} = {}", quantity, v))
            }
            Check::TermPresence { at, present } => {
                let c = coefficient_at(&self.q, &at.i, &at.j);
                (c.is_zero() != *present, format!("coefficient {}", c))
            }
            Check::Coefficient { at, value } => {
                let c = coefficient_at(&self.q, &at.i, &at.j);
                (c == *value, format!("coefficient {}", c))
            }
            Check::IsVertex(p) => (self.polygon.is_vertex(p), format!("vertices {}", self.vertex_list())),
            Check::FirstVertex(p) => (self.polygon.vertex(1) == p, format!("vertices {}", self.vertex_list())),
            Check::LastVertex(p) => (
                self.polygon.vertex(self.polygon.len()) == p,
                format!("vertices {}", self.vertex_list()),
            ),
            Check::SingleVertex(p) => (
                self.polygon.len() == 1 && self.polygon.vertex(1) == p,
                format!("vertices {}", self.vertex_list()),
            ),
            Check::PrevVertex { of, expected } => (
                self.polygon.previous_vertex(of) == Some(expected),
                format!("vertices {}", self.vertex_list()),
            ),
            Check::NextVertex { of, expected } => (
                self.polygon.next_vertex(of) == Some(expected),
                format!("vertices {}", self.vertex_list()),
            ),
            Check::PrevSlope { of, claim, m } => {
                if !self.polygon.is_vertex(of) {
                    return (false, format!("{} is not a vertex of {}", of, self.vertex_list()));
                }
                // no predecessor: the vertical side, M_n = +∞
                let m_n = self
                    .polygon
                    .previous_vertex(of)
                    .map(|a| -slope(a, of).expect("distinct vertices differ in x"));
                let shown = m_n.as_ref().map_or_else(|| "inf".to_string(), |x| x.to_string());
                (claim.holds(m_n.as_ref(), m), format!("M_n = {}", shown))
            }
            Check::NextSlope { of, claim, m } => {
                if !self.polygon.is_vertex(of) {
                    return (false, format!("{} is not a vertex of {}", of, self.vertex_list()));
                }
                // no successor: the horizontal side, M_n = 0
                let m_n = self
                    .polygon
                    .next_vertex(of)
                    .map(|c| -slope(of, c).expect("distinct vertices differ in x"))
                    .unwrap_or_else(Rational::zero);
                (claim.holds(Some(&m_n), m), format!("M_n = {}", m_n))
            }
            Check::Compare { lhs, relation, rhs } => (relation.holds(lhs, rhs), format!("{} vs {}", lhs, rhs)),
        }
    }
}

/// Identities of the weight map and the dominant bidegree that need no iterate.
fn reading_lemmas(case: &CaseData, reading: usize, n_max: u32) -> Vec<LemmaCheck> {
    let mut out = Vec::new();
    let delta = from_u64(case.delta);
    let d = from_u64(case.d);
    let gamma = from_u64(case.gamma);
    let mut mismatches = Vec::new();
    for l in default_weights(case) {
        let mut stepped = l.clone();
        for n in 1..=n_max {
            stepped = r_step(case, &stepped);
            let closed = r_map(case, &l, n);
            if closed != stepped {
                mismatches.push(format!("R^{}({}) = {} but iteration gives {}", n, l, closed, stepped));
            }
        }
    }
    out.push(LemmaCheck::new(
        "weight_map.closed_form",
        mismatches.is_empty(),
        None,
        if mismatches.is_empty() {
            format!("reading {}: R^n(l) = (γ_n + l d^n)/δ^n for n ≤ {}", reading, n_max)
        } else {
            format!("reading {}: {}", reading, mismatches.join("; "))
        },
    ));

    if case.gamma > 0 {
        let base = (&d - &delta) / &gamma;
        let mut ok = true;
        let mut witness = None;
        for n in 1..=n_max {
            let g = from_uint(&crate::predict::gamma_n(case.delta, case.gamma, case.d, n));
            let s = (Pow::pow(&d, n) - Pow::pow(&delta, n)) / &g;
            if s != base && ok {
                ok = false;
                witness = Some(LatticePoint::new(
                    crate::predict::gamma_n(case.delta, case.gamma, case.d, n),
                    num_bigint::BigUint::from(case.d).pow(n),
                ));
            }
        }
        out.push(LemmaCheck::new(
            "dominant_bidegree.constant_slope",
            ok,
            witness,
            format!("reading {}: slope from (0, δ^n) to (γ_n, d^n) is {}", reading, base),
        ));
    }
    out
}

/// Verifies every applicable reading of `f` up to `n_max`.
pub fn verify_germ(f: &SkewGerm, options: &VerifyOptions) -> VerificationReport {
    let readings = readings(f);
    let mut oracle = Vec::new();
    let mut steps = Vec::new();
    let mut findings = Vec::new();
    let mut vanishing: Vec<VanishingEvent> = Vec::new();
    let mut resource_stop = None;
    let mut observed: Vec<Option<Rational>> = alloc::vec![None; readings.len()];
    let rates: Vec<AsymptoticRate> = readings.iter().map(asymptotic).collect();

    let mut lemma_checks = Vec::new();
    for (r, case) in readings.iter().enumerate() {
        lemma_checks.extend(reading_lemmas(case, r, options.n_max));
    }

    for (idx, item) in Iterates::new(f, options.limits)
        .take(options.n_max as usize)
        .enumerate()
    {
        let n = idx as u32 + 1;
        let f_n = match item {
            Ok(g) => g,
            Err(error) => {
                resource_stop = Some(ResourceStop { n, error });
                break;
            }
        };
        let data = IterateData::new(&f_n);
        oracle.push(StepOracle {
            n,
            c_pn: data.p_order,
            c_qn: data.orders.c,
            c_fn: data.orders.c.min(data.p_order),
            ord_z: data.orders.ord_z,
            ord_w: data.orders.ord_w,
            vertices: data.polygon.vertices().to_vec(),
            terms: data.q.len(),
        });

        for (r, case) in readings.iter().enumerate() {
            let mut watched_absent = false;
            if let Some(term) = crate::predict::watched_term(case, n) {
                watched_absent = coefficient_at(&data.q, &term.i, &term.j).is_zero();
                let seen = vanishing.iter().any(|v| v.reading == r);
                if watched_absent && !seen {
                    findings.push(Finding {
                        kind: FindingKind::Vanishing,
                        reading: r,
                        n,
                        message: format!("z^{} w^{} is absent from Q^{}", term.i, term.j, n),
                    });
                    vanishing.push(VanishingEvent {
                        reading: r,
                        n0: n,
                        term,
                    });
                } else if !watched_absent && seen {
                    findings.push(Finding {
                        kind: FindingKind::Reappearance,
                        reading: r,
                        n,
                        message: format!("z^{} w^{} is back in Q^{}", term.i, term.j, n),
                    });
                }
            }
            let prediction = predict(f, case, n, &options.extra_weights, Some(watched_absent));
            let mut outcomes = Vec::with_capacity(prediction.claims.len());
            for claim in &prediction.claims {
                let (passed, observed) = data.evaluate(&claim.check);
                if !passed && claim.level == ClaimLevel::Remark {
                    findings.push(Finding {
                        kind: FindingKind::CoefficientMismatch,
                        reading: r,
                        n,
                        message: format!("{}: predicted {}, oracle {}", claim.tag, claim.check, observed),
                    });
                }
                outcomes.push(ClaimOutcome {
                    tag: claim.tag,
                    level: claim.level,
                    claim: claim.check.to_string(),
                    passed,
                    observed,
                });
            }
            let ratio = from_u64(data.orders.c.min(data.p_order)) / Pow::pow(&rates[r].c_infinity, n);
            observed[r] = Some(match observed[r].take() {
                Some(prev) if prev <= ratio => prev,
                _ => ratio,
            });
            steps.push(StepRecord {
                n,
                reading: r,
                prediction,
                outcomes,
            });
        }
    }

    let asymptotic = rates
        .into_iter()
        .zip(observed)
        .enumerate()
        .map(|(reading, (rate, observed_constant))| AsymptoticRecord {
            reading,
            rate,
            observed_constant,
        })
        .collect();

    VerificationReport {
        germ: f.clone(),
        readings,
        n_max: options.n_max,
        oracle,
        steps,
        lemma_checks,
        findings,
        vanishing,
        asymptotic,
        resource_stop,
    }
}

/// Whether `c_∞^n · D ≤ c(f^n)` holds for some candidate `D` at every computed step.
pub fn some_candidate_holds(record: &AsymptoticRecord) -> bool {
    match &record.observed_constant {
        Some(obs) => record.rate.d_candidates.iter().any(|d| d <= obs),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ALL, G2, G5};
    use crate::rational::{int, ratio};

    fn show_failures(r: &VerificationReport) -> String {
        let mut s = String::new();
        for (step, o) in r.failures() {
            s += &format!(
                "n={} reading={} {}: {} [{}]\n",
                step.n, step.reading, o.tag, o.claim, o.observed
            );
        }
        for l in r.failed_lemmas() {
            s += &format!("{}: {}\n", l.name, l.detail);
        }
        s
    }

    #[test]
    fn fixtures_pass() {
        for fx in ALL {
            let report = verify_germ(&fx.germ(), &VerifyOptions::new(4));
            assert!(report.passed(), "{}:\n{}", fx.name, show_failures(&report));
            assert!(report.resource_stop.is_none());
            assert!(
                report
                    .findings
                    .iter()
                    .all(|f| f.kind != FindingKind::CoefficientMismatch),
                "{}: {:?}",
                fx.name,
                report.findings
            );
            assert!(report.asymptotic.iter().all(some_candidate_holds));
        }
    }

    #[test]
    fn case2_fixture_report() {
        let report = verify_germ(&G2.germ(), &VerifyOptions::new(2));
        assert_eq!(report.oracle[1].c_qn, 8);
        let step = report.steps.iter().find(|s| s.n == 2).unwrap();
        assert_eq!(step.prediction.cqn.lower, ratio(11, 2));
        assert_eq!(step.prediction.cqn.upper, int(10));
        assert!(step.prediction.cqn.lower_strict && step.prediction.cqn.upper_strict);
    }

    #[test]
    fn vanishing_fixture_report() {
        let report = verify_germ(&G5.germ(), &VerifyOptions::new(2));
        assert!(report.passed(), "{}", show_failures(&report));
        let ev = report.vanishing.iter().find(|v| v.reading == 0).unwrap();
        assert_eq!((ev.n0, ev.term.clone()), (2, LatticePoint::new(4u64, 0u64)));
        let step = report.steps.iter().find(|s| s.n == 2 && s.reading == 0).unwrap();
        assert!(step
            .outcomes
            .iter()
            .any(|o| o.tag == "case2_d0.weight_equality" && o.passed && o.observed.ends_with("= 4")));
    }

    #[test]
    fn resource_stop_keeps_earlier_steps() {
        let mut opts = VerifyOptions::new(6);
        opts.limits.max_degree = 30;
        let report = verify_germ(&G2.germ(), &opts);
        let stop = report.resource_stop.clone().expect("degree guard trips");
        assert_eq!(report.oracle.len() as u32, stop.n - 1);
        assert!(report.passed());
    }
}
