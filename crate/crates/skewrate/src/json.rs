//! Serializable views of the core records. Rationals, `+∞` and lattice
//! coordinates are strings; only small germ-level counts are JSON numbers.

use serde::Serialize;
use skewrate_core::classify::{weight_intervals, CaseData, RectangleShape, WeightInterval, WeightSet};
use skewrate_core::fuzz::{FuzzConfig, FuzzSummary};
use skewrate_core::newton::{LatticePoint, NewtonPolygon};
use skewrate_core::predict::{asymptotic, may_vanish, vanishing_sum, Bracket, ClaimLevel, RatePrediction};
use skewrate_core::verify::{FindingKind, StepOracle, VerificationReport};
use skewrate_core::{ExtendedRational, Rational, SkewGerm, SparsePoly2};

pub fn rat(r: &Rational) -> String {
    r.to_string()
}

pub fn ext(r: &ExtendedRational) -> String {
    r.to_string()
}

pub fn point(p: &LatticePoint) -> [String; 2] {
    [p.i.to_string(), p.j.to_string()]
}

fn level(l: ClaimLevel) -> &'static str {
    match l {
        ClaimLevel::Theorem => "theorem",
        ClaimLevel::Remark => "remark",
    }
}

#[derive(Serialize)]
pub struct GermJson {
    pub p: String,
    pub q: String,
    pub delta: u64,
    pub a_delta: String,
}

impl GermJson {
    pub fn new(f: &SkewGerm) -> Self {
        GermJson {
            p: f.p().to_string(),
            q: f.q().to_string(),
            delta: f.delta(),
            a_delta: rat(f.a_delta()),
        }
    }
}

#[derive(Serialize)]
pub struct PolygonJson {
    pub vertices: Vec<[String; 2]>,
    /// `T_k`: y-intercept of the edge from vertex `k` to vertex `k + 1`.
    pub intercepts: Vec<String>,
}

impl PolygonJson {
    pub fn new(polygon: &NewtonPolygon) -> Self {
        PolygonJson {
            vertices: polygon.vertices().iter().map(point).collect(),
            intercepts: polygon.intercepts().iter().map(rat).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct IntervalJson {
    pub lower: String,
    pub upper: String,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl IntervalJson {
    pub fn new(iv: &WeightInterval) -> Self {
        IntervalJson {
            lower: ext(&iv.lower),
            upper: ext(&iv.upper),
            lower_closed: iv.lower_closed,
            upper_closed: iv.upper_closed,
        }
    }
}

#[derive(Serialize)]
pub struct RectangleJson {
    pub shape: &'static str,
    pub first: IntervalJson,
    pub excluded_corner: Option<[String; 2]>,
    pub alpha: String,
    pub l1_plus_l2: String,
}

#[derive(Serialize)]
pub struct BoundaryJson {
    pub delta_eq_t_upper: bool,
    pub delta_eq_t_lower: bool,
}

/// One classification reading.
#[derive(Serialize)]
pub struct CaseJson {
    pub case: &'static str,
    pub k: usize,
    pub gamma: u64,
    pub d: u64,
    pub l1: String,
    pub l2: String,
    pub l1_plus_l2: String,
    pub alpha: Option<String>,
    pub boundary: BoundaryJson,
    /// The weights where `w_l(Q^n)` is asserted exactly, as `[lower, upper]`.
    pub interval: [String; 2],
    pub interval_closed: [bool; 2],
    pub rectangle: Option<RectangleJson>,
    pub may_vanish: bool,
    pub vanishing_sum: Option<String>,
}

impl CaseJson {
    pub fn new(f: &SkewGerm, case: &CaseData) -> Self {
        let intervals = weight_intervals(case);
        let range = intervals.equality_range();
        let rectangle = match &intervals.i_f {
            WeightSet::Interval(_) => None,
            WeightSet::Rectangle(r) => Some(RectangleJson {
                shape: match r.shape {
                    RectangleShape::UpperBoundary => "upper_boundary",
                    RectangleShape::Interior => "interior",
                    RectangleShape::LowerBoundary => "lower_boundary",
                },
                first: IntervalJson::new(&r.first),
                excluded_corner: r.excluded_corner.as_ref().map(|(a, b)| [rat(a), rat(b)]),
                alpha: rat(&r.alpha),
                l1_plus_l2: rat(&r.l1_plus_l2),
            }),
        };
        CaseJson {
            case: case.kind.name(),
            k: case.k,
            gamma: case.gamma,
            d: case.d,
            l1: rat(&case.l1),
            l2: ext(&case.l2),
            l1_plus_l2: ext(&case.l1_plus_l2),
            alpha: case.alpha.as_ref().map(rat),
            boundary: BoundaryJson {
                delta_eq_t_upper: case.boundary.delta_eq_t_upper,
                delta_eq_t_lower: case.boundary.delta_eq_t_lower,
            },
            interval: [ext(&range.lower), ext(&range.upper)],
            interval_closed: [range.lower_closed, range.upper_closed],
            rectangle,
            may_vanish: may_vanish(case),
            vanishing_sum: vanishing_sum(f, case).ok().map(|(s, _)| rat(&s)),
        }
    }
}

#[derive(Serialize)]
pub struct ClassifyJson {
    pub germ: GermJson,
    pub polygon: PolygonJson,
    #[serde(flatten)]
    pub case: CaseJson,
    /// Every applicable reading, the selected one first.
    pub readings: Vec<CaseJson>,
}

#[derive(Serialize)]
pub struct TermJson {
    pub i: String,
    pub j: String,
    pub coeff: String,
}

pub fn terms(poly: &SparsePoly2) -> Vec<TermJson> {
    poly.terms()
        .map(|(m, c)| TermJson {
            i: m.z.to_string(),
            j: m.w.to_string(),
            coeff: rat(c),
        })
        .collect()
}

#[derive(Serialize)]
pub struct IterateJson {
    pub germ: GermJson,
    pub n: u32,
    pub p_n: String,
    pub q_n: String,
    pub q_terms: Vec<TermJson>,
    pub polygon: PolygonJson,
    pub c_pn: String,
    pub c_qn: String,
    pub c_fn: String,
    pub ord_z: String,
    pub ord_w: String,
}

#[derive(Serialize)]
pub struct BracketJson {
    pub lower: String,
    pub lower_strict: bool,
    pub upper: String,
    pub upper_strict: bool,
    pub exact: Option<String>,
}

impl BracketJson {
    pub fn new(b: &Bracket) -> Self {
        BracketJson {
            lower: rat(&b.lower),
            lower_strict: b.lower_strict,
            upper: rat(&b.upper),
            upper_strict: b.upper_strict,
            exact: b.exact_value().map(rat),
        }
    }
}

#[derive(Serialize)]
pub struct WeightJson {
    pub l: String,
    pub value: String,
    pub exact: bool,
}

#[derive(Serialize)]
pub struct VertexJson {
    pub point: [String; 2],
    pub tag: &'static str,
}

#[derive(Serialize)]
pub struct ClaimJson {
    pub tag: &'static str,
    pub level: &'static str,
    pub statement: String,
}

#[derive(Serialize)]
pub struct PredictionJson {
    pub n: u32,
    pub gamma_n: String,
    pub d_n: String,
    pub delta_n: String,
    pub dominant_coeff: Option<String>,
    pub weights: Vec<WeightJson>,
    pub c_qn: BracketJson,
    pub c_fn: BracketJson,
    pub prev_vertex: Option<VertexJson>,
    pub next_vertex: Option<VertexJson>,
    pub prev_slope: Option<&'static str>,
    pub next_slope: Option<&'static str>,
    pub may_vanish: bool,
    pub watched_term: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimJson>,
}

impl PredictionJson {
    pub fn new(p: &RatePrediction, with_claims: bool) -> Self {
        let vertex = |v: &Option<(LatticePoint, skewrate_core::predict::VertexTag)>| {
            v.as_ref().map(|(pt, tag)| VertexJson {
                point: point(pt),
                tag: tag.name(),
            })
        };
        let claims = if with_claims {
            p.claims
                .iter()
                .map(|c| ClaimJson {
                    tag: c.tag,
                    level: level(c.level),
                    statement: c.check.to_string(),
                })
                .collect()
        } else {
            Vec::new()
        };
        PredictionJson {
            n: p.n,
            gamma_n: p.gamma_n.to_string(),
            d_n: p.d_pow_n.to_string(),
            delta_n: p.delta_pow_n.to_string(),
            dominant_coeff: p.dominant_coeff.as_ref().map(rat),
            weights: p
                .weight_claims
                .iter()
                .map(|w| WeightJson {
                    l: rat(&w.l),
                    value: rat(&w.value),
                    exact: w.exact,
                })
                .collect(),
            c_qn: BracketJson::new(&p.cqn),
            c_fn: BracketJson::new(&p.cfn),
            prev_vertex: vertex(&p.prev_vertex),
            next_vertex: vertex(&p.next_vertex),
            prev_slope: p.prev_slope_claim.map(|c| c.name()),
            next_slope: p.next_slope_claim.map(|c| c.name()),
            may_vanish: p.may_vanish,
            watched_term: p.watched_term.as_ref().map(point),
            claims,
        }
    }
}

#[derive(Serialize)]
pub struct AsymptoticJson {
    pub c_infinity: String,
    pub d_candidates: Vec<String>,
}

impl AsymptoticJson {
    pub fn new(case: &CaseData) -> Self {
        let a = asymptotic(case);
        AsymptoticJson {
            c_infinity: rat(&a.c_infinity),
            d_candidates: a.d_candidates.iter().map(rat).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct PredictReadingJson {
    pub reading: CaseJson,
    pub asymptotic: AsymptoticJson,
    pub prediction: PredictionJson,
}

#[derive(Serialize)]
pub struct PredictJson {
    pub germ: GermJson,
    pub n: u32,
    pub readings: Vec<PredictReadingJson>,
    /// Requested weights outside every reading's equality range.
    pub weights_outside_range: Vec<String>,
}

#[derive(Serialize)]
pub struct OracleJson {
    pub n: u32,
    pub c_pn: String,
    pub c_qn: String,
    pub c_fn: String,
    pub ord_z: String,
    pub ord_w: String,
    pub vertices: Vec<[String; 2]>,
    pub terms: usize,
}

impl OracleJson {
    pub fn new(o: &StepOracle) -> Self {
        OracleJson {
            n: o.n,
            c_pn: o.c_pn.to_string(),
            c_qn: o.c_qn.to_string(),
            c_fn: o.c_fn.to_string(),
            ord_z: o.ord_z.to_string(),
            ord_w: o.ord_w.to_string(),
            vertices: o.vertices.iter().map(point).collect(),
            terms: o.terms,
        }
    }
}

#[derive(Serialize)]
pub struct OutcomeJson {
    pub tag: &'static str,
    pub level: &'static str,
    pub claim: String,
    pub passed: bool,
    pub observed: String,
}

#[derive(Serialize)]
pub struct StepJson {
    pub n: u32,
    pub reading: usize,
    pub prediction: PredictionJson,
    pub outcomes: Vec<OutcomeJson>,
}

#[derive(Serialize)]
pub struct LemmaJson {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<[String; 2]>,
    pub detail: String,
}

#[derive(Serialize)]
pub struct FindingJson {
    pub kind: &'static str,
    pub reading: usize,
    pub n: u32,
    pub message: String,
}

#[derive(Serialize)]
pub struct VanishingJson {
    pub reading: usize,
    pub n0: u32,
    pub term: [String; 2],
}

#[derive(Serialize)]
pub struct AsymptoticRecordJson {
    pub reading: usize,
    pub c_infinity: String,
    pub d_candidates: Vec<String>,
    pub observed_constant: Option<String>,
}

#[derive(Serialize)]
pub struct ResourceStopJson {
    pub n: u32,
    pub error: String,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub germ: GermJson,
    pub n_max: u32,
    pub readings: Vec<CaseJson>,
    pub oracle: Vec<OracleJson>,
    pub steps: Vec<StepJson>,
    pub lemma_checks: Vec<LemmaJson>,
    pub findings: Vec<FindingJson>,
    pub vanishing: Vec<VanishingJson>,
    pub asymptotic: Vec<AsymptoticRecordJson>,
    pub resource_stop: Option<ResourceStopJson>,
    pub claims_checked: usize,
    pub failures: usize,
    pub passed: bool,
}

impl VerifyJson {
    pub fn new(r: &VerificationReport) -> Self {
        VerifyJson {
            germ: GermJson::new(&r.germ),
            n_max: r.n_max,
            readings: r.readings.iter().map(|c| CaseJson::new(&r.germ, c)).collect(),
            oracle: r.oracle.iter().map(OracleJson::new).collect(),
            steps: r
                .steps
                .iter()
                .map(|s| StepJson {
                    n: s.n,
                    reading: s.reading,
                    prediction: PredictionJson::new(&s.prediction, false),
                    outcomes: s
                        .outcomes
                        .iter()
                        .map(|o| OutcomeJson {
                            tag: o.tag,
                            level: level(o.level),
                            claim: o.claim.clone(),
                            passed: o.passed,
                            observed: o.observed.clone(),
                        })
                        .collect(),
                })
                .collect(),
            lemma_checks: r
                .lemma_checks
                .iter()
                .map(|c| LemmaJson {
                    name: c.name,
                    holds: c.holds,
                    witness: c.witness.as_ref().map(point),
                    detail: c.detail.clone(),
                })
                .collect(),
            findings: r
                .findings
                .iter()
                .map(|f| FindingJson {
                    kind: match f.kind {
                        FindingKind::CoefficientMismatch => "coefficient_mismatch",
                        FindingKind::Vanishing => "vanishing",
                        FindingKind::Reappearance => "reappearance",
                    },
                    reading: f.reading,
                    n: f.n,
                    message: f.message.clone(),
                })
                .collect(),
            vanishing: r
                .vanishing
                .iter()
                .map(|v| VanishingJson {
                    reading: v.reading,
                    n0: v.n0,
                    term: point(&v.term),
                })
                .collect(),
            asymptotic: r
                .asymptotic
                .iter()
                .map(|a| AsymptoticRecordJson {
                    reading: a.reading,
                    c_infinity: rat(&a.rate.c_infinity),
                    d_candidates: a.rate.d_candidates.iter().map(rat).collect(),
                    observed_constant: a.observed_constant.as_ref().map(rat),
                })
                .collect(),
            resource_stop: r.resource_stop.as_ref().map(|s| ResourceStopJson {
                n: s.n,
                error: s.error.to_string(),
            }),
            claims_checked: r.claim_count(),
            failures: r.failure_count(),
            passed: r.passed(),
        }
    }
}

#[derive(Serialize)]
pub struct FuzzConfigJson {
    pub seed: u64,
    pub germ_count: usize,
    pub delta_max: u64,
    pub support_max: usize,
    pub coeff_range: [i64; 2],
    pub n_max: u32,
    pub degree_cap: u64,
    pub boundary_bias: u32,
}

#[derive(Serialize)]
pub struct CaseCountsJson {
    #[serde(rename = "Case1")]
    pub case1: usize,
    #[serde(rename = "Case2")]
    pub case2: usize,
    #[serde(rename = "Case3")]
    pub case3: usize,
    #[serde(rename = "Case4")]
    pub case4: usize,
}

#[derive(Serialize)]
pub struct FuzzFailureJson {
    pub index: usize,
    pub p: String,
    pub q: String,
    pub n: u32,
    pub reading: usize,
    pub tag: String,
    pub claim: String,
    pub observed: String,
}

#[derive(Serialize)]
pub struct FuzzJson {
    pub config: FuzzConfigJson,
    pub seed: u64,
    pub generator: &'static str,
    pub germs_run: usize,
    pub skipped_resource: usize,
    pub case_counts: CaseCountsJson,
    pub boundary_germs: usize,
    pub vanishing_events: usize,
    pub claims_checked: usize,
    pub findings: usize,
    pub extra_draws: usize,
    pub coverage_met: bool,
    pub failure_count: usize,
    pub failures: Vec<FuzzFailureJson>,
}

impl FuzzJson {
    pub fn new(config: &FuzzConfig, s: &FuzzSummary) -> Self {
        FuzzJson {
            config: FuzzConfigJson {
                seed: config.seed,
                germ_count: config.germ_count,
                delta_max: config.delta_max,
                support_max: config.support_max,
                coeff_range: [config.coeff_min, config.coeff_max],
                n_max: config.n_max,
                degree_cap: config.degree_cap,
                boundary_bias: config.boundary_bias,
            },
            seed: s.seed,
            generator: s.generator,
            germs_run: s.germs_run,
            skipped_resource: s.skipped_resource,
            case_counts: CaseCountsJson {
                case1: s.case_counts[0],
                case2: s.case_counts[1],
                case3: s.case_counts[2],
                case4: s.case_counts[3],
            },
            boundary_germs: s.boundary_germs,
            vanishing_events: s.vanishing_events,
            claims_checked: s.claims_checked,
            findings: s.findings,
            extra_draws: s.extra_draws,
            coverage_met: s.coverage_met,
            failure_count: s.failure_count(),
            failures: s
                .failures
                .iter()
                .map(|f| FuzzFailureJson {
                    index: f.index,
                    p: f.p.clone(),
                    q: f.q.clone(),
                    n: f.n,
                    reading: f.reading,
                    tag: f.tag.clone(),
                    claim: f.claim.clone(),
                    observed: f.observed.clone(),
                })
                .collect(),
        }
    }
}
