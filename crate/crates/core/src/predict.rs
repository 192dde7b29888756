//! Predicted attraction-rate data for the iterates `f^n`.
//!
//! Every assertion about `Q^n` is emitted as a [`Claim`]: a tagged, checkable
//! statement that the verifier evaluates against the exact iterate. Bounds carry
//! their strictness, because the refined statements differ from the coarse ones
//! exactly in whether an inequality is strict.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::classify::{weight_intervals, CaseData, CaseKind, WeightInterval};
use crate::germ::SkewGerm;
use crate::newton::LatticePoint;
use crate::rational::{from_u64, from_uint, min_rat, Rational};

/// `γ_n = γ(δ^{n-1} + δ^{n-2} d + … + d^{n-1})`, via `γ_{k+1} = δ^k γ + d γ_k`.
pub fn gamma_n(delta: u64, gamma: u64, d: u64, n: u32) -> BigUint {
    assert!(n >= 1, "γ_n is defined for n ≥ 1");
    let (delta, d) = (BigUint::from(delta), BigUint::from(d));
    let gamma = BigUint::from(gamma);
    let mut g = gamma.clone();
    let mut delta_k = delta.clone();
    for _ in 1..n {
        g = &delta_k * &gamma + &d * &g;
        delta_k *= &delta;
    }
    g
}

fn pow(base: u64, n: u32) -> BigUint {
    BigUint::from(base).pow(n)
}

/// `x^{n-1} + x^{n-2} y + … + y^{n-1}`.
fn geometric(x: &BigUint, y: &BigUint, n: u32) -> BigUint {
    let mut sum = BigUint::zero();
    let mut xp = BigUint::one();
    let mut yp = y.pow(n - 1);
    for k in 0..n {
        sum += &xp * &yp;
        if k + 1 < n {
            xp *= x;
            yp /= y;
        }
    }
    sum
}

/// `(γ_n − (γ − P_i) d^{n-1}, P_j d^{n-1})`: the iterate of a neighbouring
/// vertex `P` when `δ` is strictly inside the intercept range.
pub fn shifted_vertex(case: &CaseData, p: &LatticePoint, n: u32) -> LatticePoint {
    let dn1 = pow(case.d, n - 1);
    let g = gamma_n(case.delta, case.gamma, case.d, n);
    let i = g - BigUint::from(case.gamma) * &dn1 + &p.i * &dn1;
    LatticePoint { i, j: &p.j * dn1 }
}

/// `((δ^{n-1} + δ^{n-2} P_j + … + P_j^{n-1}) P_i, P_j^n)`: the iterate of a
/// neighbouring vertex when `δ` equals the intercept of the edge towards it.
pub fn star_vertex(case: &CaseData, p: &LatticePoint, n: u32) -> LatticePoint {
    let delta = BigUint::from(case.delta);
    let i = if p.j.is_zero() {
        delta.pow(n - 1) * &p.i
    } else {
        geometric(&delta, &p.j, n) * &p.i
    };
    LatticePoint {
        i,
        j: Pow::pow(&p.j, n),
    }
}

/// How a predicted neighbour of `(γ_n, d^n)` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexTag {
    /// `(A_n, B_n)` from the previous vertex, `δ < T_{k-1}`.
    AB,
    /// `(A*_n, B*_n)`, `δ = T_{k-1}`.
    ABStar,
    /// `(C_n, D_n)` from the next vertex, `δ > T_k`.
    CD,
    /// `(C*_n, D*_n)`, `δ = T_k`.
    CDStar,
}

impl VertexTag {
    pub fn name(self) -> &'static str {
        match self {
            VertexTag::AB => "AB",
            VertexTag::ABStar => "ABstar",
            VertexTag::CD => "CD",
            VertexTag::CDStar => "CDstar",
        }
    }
}

/// Relation of the edge slope `M_n` at `(γ_n, d^n)` to the slope `M` at `n = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlopeClaim {
    EqualsM,
    GreaterThanM,
    AtLeastM,
    AtMostM,
}

impl SlopeClaim {
    pub fn name(self) -> &'static str {
        match self {
            SlopeClaim::EqualsM => "equals_M",
            SlopeClaim::GreaterThanM => "greater_than_M",
            SlopeClaim::AtLeastM => "at_least_M",
            SlopeClaim::AtMostM => "at_most_M",
        }
    }

    pub fn holds(self, m_n: Option<&Rational>, m: &Rational) -> bool {
        // None stands for M_n = +∞
        match (self, m_n) {
            (SlopeClaim::EqualsM, Some(x)) => x == m,
            (SlopeClaim::GreaterThanM, Some(x)) => x > m,
            (SlopeClaim::AtLeastM, Some(x)) => x >= m,
            (SlopeClaim::AtMostM, Some(x)) => x <= m,
            (SlopeClaim::EqualsM | SlopeClaim::AtMostM, None) => false,
            (SlopeClaim::GreaterThanM | SlopeClaim::AtLeastM, None) => true,
        }
    }
}

/// Observable quantities of `f^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// `c(Q^n)`.
    CQn,
    /// `c(f^n) = min(c(p^n), c(Q^n))`.
    CFn,
    /// `c(p^n)`.
    CPn,
    OrdZ,
    OrdW,
    /// `w_l(Q^n)`.
    Weight(Rational),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::CQn => f.write_str("c(Q^n)"),
            Quantity::CFn => f.write_str("c(f^n)"),
            Quantity::CPn => f.write_str("c(p^n)"),
            Quantity::OrdZ => f.write_str("ord_z(Q^n)"),
            Quantity::OrdW => f.write_str("ord_w(Q^n)"),
            Quantity::Weight(l) => write!(f, "w_{}(Q^n)", l),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: Rational,
    pub strict: bool,
}

impl Bound {
    pub fn weak(value: Rational) -> Self {
        Bound { value, strict: false }
    }

    pub fn strict(value: Rational) -> Self {
        Bound { value, strict: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    LessEq,
    Equal,
    GreaterEq,
    Greater,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Less => lhs < rhs,
            Relation::LessEq => lhs <= rhs,
            Relation::Equal => lhs == rhs,
            Relation::GreaterEq => lhs >= rhs,
            Relation::Greater => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Less => "<",
            Relation::LessEq => "<=",
            Relation::Equal => "=",
            Relation::GreaterEq => ">=",
            Relation::Greater => ">",
        }
    }
}

/// A checkable statement about `f^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Range {
        quantity: Quantity,
        lower: Option<Bound>,
        upper: Option<Bound>,
    },
    /// The coefficient of `z^i w^j` in `Q^n` is nonzero (`present`) or zero.
    TermPresence {
        at: LatticePoint,
        present: bool,
    },
    IsVertex(LatticePoint),
    /// `at` is the vertex with the smallest `x`-coordinate.
    FirstVertex(LatticePoint),
    /// `at` is the vertex with the smallest `y`-coordinate.
    LastVertex(LatticePoint),
    /// `N(Q^n) = D(at)`.
    SingleVertex(LatticePoint),
    PrevVertex {
        of: LatticePoint,
        expected: LatticePoint,
    },
    NextVertex {
        of: LatticePoint,
        expected: LatticePoint,
    },
    /// `M_n = −slope` from `of` to its previous vertex (`+∞` if none) compared with `m`.
    PrevSlope {
        of: LatticePoint,
        claim: SlopeClaim,
        m: Rational,
    },
    /// `M_n = −slope` from `of` to its next vertex (`0` if none) compared with `m`.
    NextSlope {
        of: LatticePoint,
        claim: SlopeClaim,
        m: Rational,
    },
    Coefficient {
        at: LatticePoint,
        value: Rational,
    },
    /// A relation between predicted numbers alone.
    Compare {
        lhs: Rational,
        relation: Relation,
        rhs: Rational,
    },
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Range { quantity, lower, upper } => {
                if let (Some(lo), Some(hi)) = (lower, upper) {
                    if lo.value == hi.value && !lo.strict && !hi.strict {
                        return write!(f, "{} = {}", quantity, lo.value);
                    }
                }
                if let Some(lo) = lower {
                    write!(f, "{} {} ", lo.value, if lo.strict { "<" } else { "<=" })?;
                }
                write!(f, "{}", quantity)?;
                if let Some(hi) = upper {
                    write!(f, " {} {}", if hi.strict { "<" } else { "<=" }, hi.value)?;
                }
                Ok(())
            }
            Check::TermPresence { at, present } => {
                let verb = if *present { "contains" } else { "lacks" };
                write!(f, "Q^n {} z^{} w^{}", verb, at.i, at.j)
            }
            Check::IsVertex(p) => write!(f, "{} is a vertex of N(Q^n)", p),
            Check::FirstVertex(p) => write!(f, "{} is the first vertex of N(Q^n)", p),
            Check::LastVertex(p) => write!(f, "{} is the last vertex of N(Q^n)", p),
            Check::SingleVertex(p) => write!(f, "N(Q^n) = D{}", p),
            Check::PrevVertex { of, expected } => {
                write!(f, "vertex before {} is {}", of, expected)
            }
            Check::NextVertex { of, expected } => write!(f, "vertex after {} is {}", of, expected),
            Check::PrevSlope { of, claim, m } => {
                write!(f, "slope before {}: M_n {} M = {}", of, claim.name(), m)
            }
            Check::NextSlope { of, claim, m } => {
                write!(f, "slope after {}: M_n {} M = {}", of, claim.name(), m)
            }
            Check::Coefficient { at, value } => {
                write!(f, "coefficient of z^{} w^{} is {}", at.i, at.j, value)
            }
            Check::Compare { lhs, relation, rhs } => {
                write!(f, "{} {} {}", lhs, relation.symbol(), rhs)
            }
        }
    }
}

/// Whether a failed claim is a defect (`Theorem`) or only a finding (`Remark`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClaimLevel {
    Theorem,
    Remark,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub tag: &'static str,
    pub level: ClaimLevel,
    pub check: Check,
}

impl Claim {
    fn theorem(tag: &'static str, check: Check) -> Self {
        Claim {
            tag,
            level: ClaimLevel::Theorem,
            check,
        }
    }
}

/// A predicted weight value `w_l(Q^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightClaim {
    pub l: Rational,
    pub value: Rational,
    pub exact: bool,
}

/// Lower and upper bound with strictness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lower: Rational,
    pub lower_strict: bool,
    pub upper: Rational,
    pub upper_strict: bool,
}

impl Bracket {
    pub fn exact(v: Rational) -> Self {
        Bracket {
            lower: v.clone(),
            lower_strict: false,
            upper: v,
            upper_strict: false,
        }
    }

    pub fn new(lower: Rational, lower_strict: bool, upper: Rational, upper_strict: bool) -> Self {
        Bracket {
            lower,
            lower_strict,
            upper,
            upper_strict,
        }
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        (self.lower == self.upper && !self.lower_strict && !self.upper_strict).then_some(&self.lower)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let lo = if self.lower_strict {
            *x > self.lower
        } else {
            *x >= self.lower
        };
        let hi = if self.upper_strict {
            *x < self.upper
        } else {
            *x <= self.upper
        };
        lo && hi
    }

    fn as_range(&self, quantity: Quantity) -> Check {
        Check::Range {
            quantity,
            lower: Some(Bound {
                value: self.lower.clone(),
                strict: self.lower_strict,
            }),
            upper: Some(Bound {
                value: self.upper.clone(),
                strict: self.upper_strict,
            }),
        }
    }

    /// Bracket of `min(cap, x)` for `x` in `self`.
    pub fn min_with(&self, cap: &Rational) -> Bracket {
        let (lower, lower_strict) = if self.lower < *cap {
            (self.lower.clone(), self.lower_strict)
        } else {
            (cap.clone(), false)
        };
        let (upper, upper_strict) = if self.upper <= *cap {
            (self.upper.clone(), self.upper_strict)
        } else {
            (cap.clone(), false)
        };
        Bracket {
            lower,
            lower_strict,
            upper,
            upper_strict,
        }
    }
}

/// Everything predicted for one `n` under one reading of the germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatePrediction {
    pub n: u32,
    pub gamma_n: BigUint,
    pub d_pow_n: BigUint,
    pub delta_pow_n: BigUint,
    /// Predicted coefficient of `z^{γ_n} w^{d^n}`, when small enough to compute
    /// and not subject to cancellation.
    pub dominant_coeff: Option<Rational>,
    pub weight_claims: Vec<WeightClaim>,
    pub cqn: Bracket,
    pub cfn: Bracket,
    pub prev_vertex: Option<(LatticePoint, VertexTag)>,
    pub next_vertex: Option<(LatticePoint, VertexTag)>,
    pub prev_slope_claim: Option<SlopeClaim>,
    pub next_slope_claim: Option<SlopeClaim>,
    pub may_vanish: bool,
    /// The term whose disappearance changes the prediction, in `may_vanish` configurations.
    pub watched_term: Option<LatticePoint>,
    pub claims: Vec<Claim>,
}

impl RatePrediction {
    pub fn bidegree(&self) -> LatticePoint {
        LatticePoint {
            i: self.gamma_n.clone(),
            j: self.d_pow_n.clone(),
        }
    }

    pub fn cqn_exact(&self) -> Option<&Rational> {
        self.cqn.exact_value()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("weight {0} lies outside the range where the weight equality is asserted")]
    OutsideEqualityRange(String),
    #[error("the vanishing criterion applies only to Case 2 with d = 0 and δ = T_{{s-1}}")]
    VanishingNotApplicable,
}

/// Configurations where a term of the prediction may cancel.
pub fn may_vanish(case: &CaseData) -> bool {
    match case.kind {
        CaseKind::Case1 => false,
        CaseKind::Case2 => case.d == 0 && case.boundary.delta_eq_t_upper,
        CaseKind::Case3 | CaseKind::Case4 => {
            case.boundary.delta_eq_t_lower && case.next_vertex().is_some_and(|c| c.j.is_zero())
        }
    }
}

/// The term whose presence at step `n` decides between the refined alternatives.
pub fn watched_term(case: &CaseData, n: u32) -> Option<LatticePoint> {
    if !may_vanish(case) {
        return None;
    }
    match case.kind {
        CaseKind::Case2 => Some(LatticePoint::new(gamma_n(case.delta, case.gamma, case.d, n), 0u64)),
        _ => Some(star_vertex(case, case.next_vertex()?, n)),
    }
}

/// Predicted coefficient of the dominant term, `a_δ^{γ_1+…+γ_{n-1}} b_{γd}^{1+d+…+d^{n-1}}`.
/// `None` when an exponent exceeds `exponent_cap`.
pub fn dominant_term(f: &SkewGerm, case: &CaseData, n: u32, exponent_cap: u64) -> (Option<Rational>, LatticePoint) {
    let bidegree = LatticePoint::new(gamma_n(case.delta, case.gamma, case.d, n), pow(case.d, n));
    let mut a_exp = BigUint::zero();
    for k in 1..n {
        a_exp += gamma_n(case.delta, case.gamma, case.d, k);
    }
    let mut b_exp = BigUint::zero();
    for k in 0..n {
        b_exp += pow(case.d, k);
    }
    let cap = BigUint::from(exponent_cap);
    if a_exp > cap || b_exp > cap {
        return (None, bidegree);
    }
    let a_exp = u32::try_from(&a_exp).expect("below cap");
    let b_exp = u32::try_from(&b_exp).expect("below cap");
    let b = f.b(case.gamma, case.d);
    let coeff = Pow::pow(f.a_delta(), a_exp) * Pow::pow(&b, b_exp);
    (Some(coeff), bidegree)
}

/// `w_l(Q^n)` where the weight equality is asserted.
pub fn predict_weight(case: &CaseData, n: u32, l: &Rational) -> Result<Rational, PredictError> {
    let range = weight_intervals(case);
    let range = range.equality_range();
    if !range.contains(l) {
        return Err(PredictError::OutsideEqualityRange(alloc::format!("{}", l)));
    }
    let g = from_uint(&gamma_n(case.delta, case.gamma, case.d, n));
    if case.kind == CaseKind::Case2 && case.d == 0 {
        return Ok(g);
    }
    Ok(g + l * from_uint(&pow(case.d, n)))
}

/// Edge sum `Σ a_δ^I b_{IJ} b_{γ0}^J` over support points with `I + l_1 J = γ`.
/// It is zero exactly when `z^{γ_2}` cancels in `Q^2`.
pub fn vanishing_sum(f: &SkewGerm, case: &CaseData) -> Result<(Rational, bool), PredictError> {
    if !(case.kind == CaseKind::Case2 && case.d == 0 && case.boundary.delta_eq_t_upper) {
        return Err(PredictError::VanishingNotApplicable);
    }
    let gamma = from_u64(case.gamma);
    let b_g0 = f.b(case.gamma, 0);
    let mut sum = Rational::zero();
    for (m, b) in f.q().terms() {
        if from_u64(m.z) + &case.l1 * from_u64(m.w) == gamma {
            let i = u32::try_from(m.z).expect("edge exponents are small");
            let j = u32::try_from(m.w).expect("edge exponents are small");
            sum += Pow::pow(f.a_delta(), i) * b * Pow::pow(&b_g0, j);
        }
    }
    let triggers = sum.is_zero();
    Ok((sum, triggers))
}

/// Default weights sampled from the equality range.
pub fn default_weights(case: &CaseData) -> Vec<Rational> {
    let range = weight_intervals(case);
    let range: &WeightInterval = range.equality_range();
    let mut out = range.samples();
    if case.kind == CaseKind::Case1 {
        out = alloc::vec![
            Rational::new(1.into(), 3.into()),
            Rational::one(),
            Rational::from_integer(3.into()),
        ];
    }
    out
}

/// Asymptotic rate `c_∞` and the candidate constants `D` with `D c_∞^n ≤ c(f^n) ≤ c_∞^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticRate {
    pub c_infinity: Rational,
    pub d_candidates: Vec<Rational>,
}

impl AsymptoticRate {
    /// The weakest candidate; one candidate bound must hold for every `n`.
    pub fn weakest(&self) -> Rational {
        self.d_candidates.iter().min().cloned().expect("nonempty")
    }
}

pub fn asymptotic(case: &CaseData) -> AsymptoticRate {
    let delta = from_u64(case.delta);
    let gamma = from_u64(case.gamma);
    let one = Rational::one();
    if case.gamma == 0 {
        let c_infinity = from_u64(case.delta.min(case.d));
        let d_candidates = match case.kind {
            CaseKind::Case3 => {
                let mut v = alloc::vec![one.clone()];
                if let Some(l2) = case.l2.finite() {
                    if *l2 != one {
                        v.push(l2.clone());
                    }
                }
                v
            }
            _ => alloc::vec![one],
        };
        return AsymptoticRate {
            c_infinity,
            d_candidates,
        };
    }
    let d_candidates = if case.d == 0 {
        let mut v = alloc::vec![one.clone(), &gamma / &delta];
        if case.kind == CaseKind::Case2 {
            v.push(&gamma / (&delta * &case.l1));
        }
        v.sort();
        v.dedup();
        v
    } else {
        match &case.alpha {
            Some(a) if case.delta > case.d && *a < one => alloc::vec![a.clone()],
            _ => alloc::vec![one],
        }
    };
    AsymptoticRate {
        c_infinity: delta,
        d_candidates,
    }
}

/// Full prediction for step `n` under `case`.
///
/// `watched_absent` tells whether the watched term (see [`watched_term`]) is absent
/// from `Q^n`; it selects between the conditional refinements. Absence at an earlier
/// step is not enough, because the term can reappear. `None` means unknown, and the
/// bracket then covers both alternatives.
pub fn predict(
    f: &SkewGerm,
    case: &CaseData,
    n: u32,
    extra_weights: &[Rational],
    watched_absent: Option<bool>,
) -> RatePrediction {
    assert!(n >= 1);
    let g_big = gamma_n(case.delta, case.gamma, case.d, n);
    let dn_big = pow(case.d, n);
    let deltan_big = pow(case.delta, n);
    let g = from_uint(&g_big);
    let dn = from_uint(&dn_big);
    let deltan = from_uint(&deltan_big);
    let top = LatticePoint {
        i: g_big.clone(),
        j: dn_big.clone(),
    };
    let one = Rational::one();
    let vanished = if may_vanish(case) { watched_absent } else { Some(false) };
    let mut claims = Vec::new();

    let mut weights: Vec<Rational> = default_weights(case);
    for l in extra_weights {
        if predict_weight(case, n, l).is_ok() && !weights.contains(l) {
            weights.push(l.clone());
        }
    }
    let weight_claims: Vec<WeightClaim> = weights
        .into_iter()
        .map(|l| {
            let value = predict_weight(case, n, &l).expect("sampled inside the range");
            WeightClaim { l, value, exact: true }
        })
        .collect();
    let weight_tag = match (case.kind, case.d) {
        (CaseKind::Case1, _) => "case1.weight_equality",
        (CaseKind::Case2, 0) => "case2_d0.weight_equality",
        (CaseKind::Case2, _) => "case2.weight_equality",
        (CaseKind::Case3, _) => "case3.weight_equality",
        (CaseKind::Case4, _) => "case4.weight_equality",
    };
    for w in &weight_claims {
        claims.push(Claim::theorem(
            weight_tag,
            Check::Range {
                quantity: Quantity::Weight(w.l.clone()),
                lower: Some(Bound::weak(w.value.clone())),
                upper: Some(Bound::weak(w.value.clone())),
            },
        ));
    }
    claims.push(Claim::theorem(
        "orders.p_iterate",
        Check::Range {
            quantity: Quantity::CPn,
            lower: Some(Bound::weak(deltan.clone())),
            upper: Some(Bound::weak(deltan.clone())),
        },
    ));

    let mut prev_vertex = None;
    let mut next_vertex = None;
    let mut prev_slope_claim = None;
    let mut next_slope_claim = None;
    let may_vanish = may_vanish(case);
    let watched = watched_term(case, n);
    let dominant_is_watched = case.kind == CaseKind::Case2 && may_vanish;

    if !dominant_is_watched {
        claims.push(Claim::theorem(
            "dominant_term.present",
            Check::TermPresence {
                at: top.clone(),
                present: true,
            },
        ));
    }

    let cqn: Bracket = match case.kind {
        CaseKind::Case1 => {
            claims.push(Claim::theorem("case1.single_vertex", Check::SingleVertex(top.clone())));
            Bracket::exact(&g + &dn)
        }
        CaseKind::Case2 if case.d > 0 => {
            claims.push(Claim::theorem("case2.last_vertex", Check::LastVertex(top.clone())));
            claims.push(Claim::theorem(
                "case2.order_in_w",
                Check::Range {
                    quantity: Quantity::OrdW,
                    lower: Some(Bound::weak(dn.clone())),
                    upper: Some(Bound::weak(dn.clone())),
                },
            ));
            let l1_inv = case.l1.recip();
            let a = case.prev_vertex().expect("Case 2 has s > 1").clone();
            let at_boundary = case.boundary.delta_eq_t_upper;
            let (pv, tag) = if at_boundary {
                (star_vertex(case, &a, n), VertexTag::ABStar)
            } else {
                (shifted_vertex(case, &a, n), VertexTag::AB)
            };
            claims.push(Claim::theorem(
                "case2.previous_vertex",
                Check::PrevVertex {
                    of: top.clone(),
                    expected: pv.clone(),
                },
            ));
            claims.push(Claim::theorem(
                "case2.previous_slope",
                Check::PrevSlope {
                    of: top.clone(),
                    claim: SlopeClaim::EqualsM,
                    m: l1_inv.clone(),
                },
            ));
            claims.push(Claim::theorem(
                "case2.previous_intercept",
                Check::Compare {
                    lhs: deltan.clone(),
                    relation: if at_boundary { Relation::Equal } else { Relation::Less },
                    rhs: &dn + &g * &l1_inv,
                },
            ));
            prev_vertex = Some((pv, tag));
            prev_slope_claim = Some(SlopeClaim::EqualsM);

            if case.l1 <= one {
                Bracket::exact(&g + &dn)
            } else {
                let lower = &l1_inv * &g + &dn;
                let n1 = &case.polygon.vertex(1).i;
                if !n1.is_zero() || case.s() > 2 {
                    Bracket::new(lower, true, &g + &dn, true)
                } else if at_boundary || n == 1 {
                    Bracket::exact(lower)
                } else {
                    Bracket::new(lower, true, &g + &dn, true)
                }
            }
        }
        CaseKind::Case2 => {
            // d = 0
            let l1_inv = case.l1.recip();
            let a = case.prev_vertex().expect("Case 2 has s > 1").clone();
            if !case.boundary.delta_eq_t_upper {
                claims.push(Claim::theorem(
                    "case2_d0.term_present",
                    Check::TermPresence {
                        at: top.clone(),
                        present: true,
                    },
                ));
                if n >= 2 {
                    claims.push(Claim::theorem(
                        "case2_d0.previous_slope",
                        Check::PrevSlope {
                            of: top.clone(),
                            claim: SlopeClaim::GreaterThanM,
                            m: l1_inv.clone(),
                        },
                    ));
                    prev_slope_claim = Some(SlopeClaim::GreaterThanM);
                }
                if case.l1 <= one {
                    Bracket::exact(g.clone())
                } else if n == 1 {
                    let ab = from_uint(&a.i) + from_uint(&a.j);
                    claims.push(Claim::theorem(
                        "case2_d0.first_step_vertex_sum",
                        Check::Compare {
                            lhs: ab.clone(),
                            relation: Relation::Less,
                            rhs: g.clone(),
                        },
                    ));
                    Bracket::new(&l1_inv * &g, false, ab, false)
                } else {
                    Bracket::new(&l1_inv * &g, true, g.clone(), false)
                }
            } else {
                let star = star_vertex(case, &a, n);
                claims.push(Claim::theorem(
                    "case2_d0.boundary.star_term_present",
                    Check::TermPresence {
                        at: star.clone(),
                        present: true,
                    },
                ));
                claims.push(Claim::theorem(
                    "case2_d0.boundary.star_weight",
                    Check::Compare {
                        lhs: star.weight(&case.l1),
                        relation: Relation::Equal,
                        rhs: g.clone(),
                    },
                ));
                if n == 2 {
                    let (_, triggers) = vanishing_sum(f, case).expect("configuration checked");
                    claims.push(Claim::theorem(
                        "case2_d0.boundary.vanishing_criterion",
                        Check::TermPresence {
                            at: top.clone(),
                            present: !triggers,
                        },
                    ));
                }
                let star_sum = from_uint(&star.i) + from_uint(&star.j);
                if case.l1 <= one {
                    claims.push(Claim::theorem(
                        "case2_d0.boundary.star_sum_bound",
                        Check::Compare {
                            lhs: star_sum.clone(),
                            relation: Relation::LessEq,
                            rhs: &l1_inv * &g,
                        },
                    ));
                    match vanished {
                        // z^{γ_n} is present, so c(Q^n) ≤ γ_n as well
                        Some(false) => Bracket::exact(g.clone()),
                        Some(true) => Bracket::new(g.clone(), case.l1 < one, star_sum, false),
                        None => Bracket::new(g.clone(), false, star_sum, false),
                    }
                } else {
                    claims.push(Claim::theorem(
                        "case2_d0.boundary.star_sum_bound",
                        Check::Compare {
                            lhs: star_sum.clone(),
                            relation: Relation::Less,
                            rhs: g.clone(),
                        },
                    ));
                    Bracket::new(&l1_inv * &g, false, star_sum, false)
                }
            }
        }
        CaseKind::Case3 => {
            claims.push(Claim::theorem("case3.first_vertex", Check::FirstVertex(top.clone())));
            claims.push(Claim::theorem(
                "case3.order_in_z",
                Check::Range {
                    quantity: Quantity::OrdZ,
                    lower: Some(Bound::weak(g.clone())),
                    upper: Some(Bound::weak(g.clone())),
                },
            ));
            let l2 = case.l2.finite().cloned().expect("Case 3 has s > 1");
            let c = case.next_vertex().expect("Case 3 has s > 1").clone();
            let (nv, nc) = next_side(case, &c, n, &top, &dn, &g, &deltan, "case3", &mut claims);
            next_vertex = nv;
            next_slope_claim = nc;
            lower_side_bracket(&l2, &c, case, &g, &dn, vanished, watched.is_some())
        }
        CaseKind::Case4 => {
            claims.push(Claim::theorem("case4.is_vertex", Check::IsVertex(top.clone())));
            let l1_inv = case.l1.recip();
            let sum = case.l1_plus_l2.finite().cloned().expect("Case 4 has a next vertex");
            let a = case.prev_vertex().expect("Case 4 has a previous vertex").clone();
            let c = case.next_vertex().expect("Case 4 has a next vertex").clone();
            let at_upper = case.boundary.delta_eq_t_upper;
            let (pv, tag) = if at_upper {
                (star_vertex(case, &a, n), VertexTag::ABStar)
            } else {
                (shifted_vertex(case, &a, n), VertexTag::AB)
            };
            claims.push(Claim::theorem(
                "case4.previous_vertex",
                Check::PrevVertex {
                    of: top.clone(),
                    expected: pv.clone(),
                },
            ));
            claims.push(Claim::theorem(
                "case4.previous_slope",
                Check::PrevSlope {
                    of: top.clone(),
                    claim: SlopeClaim::EqualsM,
                    m: l1_inv.clone(),
                },
            ));
            claims.push(Claim::theorem(
                "case4.previous_intercept",
                Check::Compare {
                    lhs: deltan.clone(),
                    relation: if at_upper { Relation::Equal } else { Relation::Less },
                    rhs: &dn + &g * &l1_inv,
                },
            ));
            prev_vertex = Some((pv, tag));
            prev_slope_claim = Some(SlopeClaim::EqualsM);
            let (nv, nc) = next_side(case, &c, n, &top, &dn, &g, &deltan, "case4", &mut claims);
            next_vertex = nv;
            next_slope_claim = nc;

            if case.l1 <= one && one <= sum {
                Bracket::exact(&g + &dn)
            } else if case.l1 > one {
                let strict = !a.i.is_zero();
                Bracket::new(&l1_inv * &g + &dn, strict, &g + &dn, true)
            } else {
                lower_side_bracket(&sum, &c, case, &g, &dn, vanished, watched.is_some())
            }
        }
    };

    claims.push(Claim::theorem("rate.q_iterate", cqn.as_range(Quantity::CQn)));
    let cfn = cqn.min_with(&deltan);
    claims.push(Claim::theorem("rate.f_iterate", cfn.as_range(Quantity::CFn)));
    general_cfn_claims(case, n, &deltan, &dn, &mut claims);
    if case.kind == CaseKind::Case1 {
        monomial_table_claims(case, n, &g, &dn, &deltan, &mut claims);
    }
    let asym = asymptotic(case);
    let c_inf_n = Pow::pow(&asym.c_infinity, n);
    claims.push(Claim::theorem(
        "asymptotic.bracket",
        Check::Range {
            quantity: Quantity::CFn,
            lower: Some(Bound::weak(asym.weakest() * &c_inf_n)),
            upper: Some(Bound::weak(c_inf_n)),
        },
    ));

    let dominant_coeff = if dominant_is_watched {
        None
    } else {
        dominant_term(f, case, n, 4096).0
    };
    if let Some(value) = &dominant_coeff {
        claims.push(Claim {
            tag: "remark.dominant_coefficient",
            level: ClaimLevel::Remark,
            check: Check::Coefficient {
                at: top.clone(),
                value: value.clone(),
            },
        });
    }

    RatePrediction {
        n,
        gamma_n: g_big,
        d_pow_n: dn_big,
        delta_pow_n: deltan_big,
        dominant_coeff,
        weight_claims,
        cqn,
        cfn,
        prev_vertex,
        next_vertex,
        prev_slope_claim,
        next_slope_claim,
        may_vanish,
        watched_term: watched,
        claims,
    }
}

/// Next-vertex claims shared by Cases 3 and 4.
#[allow(clippy::too_many_arguments)]
fn next_side(
    case: &CaseData,
    c: &LatticePoint,
    n: u32,
    top: &LatticePoint,
    dn: &Rational,
    g: &Rational,
    deltan: &Rational,
    prefix: &'static str,
    claims: &mut Vec<Claim>,
) -> (Option<(LatticePoint, VertexTag)>, Option<SlopeClaim>) {
    let sum = case.l1_plus_l2.finite().cloned().expect("vertex has a successor");
    let m = sum.recip();
    let (vertex_tag, slope_tag, at_least_tag, intercept_tag) = if prefix == "case3" {
        (
            "case3.next_vertex",
            "case3.next_slope",
            "case3.next_slope_bound",
            "case3.next_intercept",
        )
    } else {
        (
            "case4.next_vertex",
            "case4.next_slope",
            "case4.next_slope_bound",
            "case4.next_intercept",
        )
    };
    claims.push(Claim::theorem(
        at_least_tag,
        Check::NextSlope {
            of: top.clone(),
            claim: SlopeClaim::AtMostM,
            m: m.clone(),
        },
    ));
    let at_lower = case.boundary.delta_eq_t_lower;
    let next = if !at_lower {
        Some((shifted_vertex(case, c, n), VertexTag::CD))
    } else if !c.j.is_zero() {
        Some((star_vertex(case, c, n), VertexTag::CDStar))
    } else {
        None
    };
    let Some((nv, tag)) = next else {
        return (None, Some(SlopeClaim::AtMostM));
    };
    claims.push(Claim::theorem(
        vertex_tag,
        Check::NextVertex {
            of: top.clone(),
            expected: nv.clone(),
        },
    ));
    claims.push(Claim::theorem(
        slope_tag,
        Check::NextSlope {
            of: top.clone(),
            claim: SlopeClaim::EqualsM,
            m: m.clone(),
        },
    ));
    claims.push(Claim::theorem(
        intercept_tag,
        Check::Compare {
            lhs: deltan.clone(),
            relation: if at_lower { Relation::Equal } else { Relation::Greater },
            rhs: dn + g * &m,
        },
    ));
    (Some((nv, tag)), Some(SlopeClaim::EqualsM))
}

/// `c(Q^n)` bracket governed by the edge after `(γ, d)` with inverse slope `lam`
/// (`l_2` in Case 3, `l_1 + l_2` in Case 4).
fn lower_side_bracket(
    lam: &Rational,
    c: &LatticePoint,
    case: &CaseData,
    g: &Rational,
    dn: &Rational,
    vanished: Option<bool>,
    watched: bool,
) -> Bracket {
    let one = Rational::one();
    if *lam >= one {
        return Bracket::exact(g + dn);
    }
    let lower = g + lam * dn;
    if !c.j.is_zero() {
        return Bracket::new(lower, true, g + dn, true);
    }
    if !case.boundary.delta_eq_t_lower {
        return Bracket::exact(lower);
    }
    debug_assert!(watched);
    match vanished {
        Some(true) => Bracket::new(lower, true, g + dn, false),
        Some(false) => Bracket::exact(lower),
        None => Bracket::new(lower, false, g + dn, false),
    }
}

/// Bounds on `c(f^n)` in terms of `δ`, `γ`, `d`, `α` that hold in every case.
fn general_cfn_claims(case: &CaseData, n: u32, deltan: &Rational, dn: &Rational, claims: &mut Vec<Claim>) {
    let one = Rational::one();
    let delta = from_u64(case.delta);
    let gamma = from_u64(case.gamma);
    let s = case.s();
    let range = |lower: Option<Bound>, upper: Option<Bound>| Check::Range {
        quantity: Quantity::CFn,
        lower,
        upper,
    };
    if case.gamma > 0 && case.d > 0 {
        match &case.alpha {
            Some(a) if case.delta > case.d && *a < one => claims.push(Claim::theorem(
                "cfn.alpha_below_one",
                range(Some(Bound::weak(a * deltan)), Some(Bound::strict(deltan.clone()))),
            )),
            _ => claims.push(Claim::theorem(
                "cfn.equals_delta_power",
                range(Some(Bound::weak(deltan.clone())), Some(Bound::weak(deltan.clone()))),
            )),
        }
    } else if case.d == 0 && s == 1 {
        let v = min_rat(one, &gamma / &delta) * deltan;
        claims.push(Claim::theorem(
            "cfn.monomial_d0",
            range(Some(Bound::weak(v.clone())), Some(Bound::weak(v))),
        ));
    } else if case.gamma == 0 && s == 1 {
        let v = min_rat(deltan.clone(), dn.clone());
        claims.push(Claim::theorem(
            "cfn.monomial_gamma0",
            range(Some(Bound::weak(v.clone())), Some(Bound::weak(v))),
        ));
    } else if case.d == 0 {
        let mut c = min_rat(one.clone(), &gamma / &delta);
        if case.l1 > Rational::zero() {
            c = min_rat(c, &gamma / (&delta * &case.l1));
        }
        claims.push(Claim::theorem(
            "cfn.d0_bracket",
            range(Some(Bound::weak(c * deltan)), Some(Bound::weak(deltan.clone()))),
        ));
    } else if case.gamma == 0 {
        if let Some(l2) = case.l2.finite() {
            claims.push(Claim::theorem(
                "cfn.gamma0_bracket",
                range(
                    Some(Bound::weak(min_rat(l2.clone(), one) * dn)),
                    Some(Bound::weak(dn.clone())),
                ),
            ));
        }
    }
    let _ = n;
}

/// Closed-form brackets for monomial-type germs (single polygon vertex).
fn monomial_table_claims(
    case: &CaseData,
    n: u32,
    g: &Rational,
    dn: &Rational,
    deltan: &Rational,
    claims: &mut Vec<Claim>,
) {
    let one = Rational::one();
    let cq = |lower: Bound, upper: Bound| Check::Range {
        quantity: Quantity::CQn,
        lower: Some(lower),
        upper: Some(upper),
    };
    let cf = |lower: Bound, upper: Bound| Check::Range {
        quantity: Quantity::CFn,
        lower: Some(lower),
        upper: Some(upper),
    };
    let delta = from_u64(case.delta);
    let gamma = from_u64(case.gamma);
    if case.gamma > 0 && case.d > 0 {
        if case.delta > case.d {
            let a = case.alpha.clone().expect("δ ≠ d");
            let adn = &a * deltan;
            // γ_n + d^n = αδ^n + (1 − α)d^n
            claims.push(Claim::theorem(
                "monomial.alpha_form",
                Check::Compare {
                    lhs: g + dn,
                    relation: Relation::Equal,
                    rhs: &adn + (&one - &a) * dn,
                },
            ));
            if a < one {
                claims.push(Claim::theorem(
                    "monomial.alpha_below_one",
                    cq(Bound::strict(adn.clone()), Bound::strict(deltan.clone())),
                ));
                claims.push(Claim::theorem(
                    "monomial.alpha_below_one",
                    cf(Bound::strict(adn), Bound::strict(deltan.clone())),
                ));
            } else if a > one {
                claims.push(Claim::theorem(
                    "monomial.alpha_above_one",
                    cq(Bound::strict(deltan.clone()), Bound::strict(adn)),
                ));
                claims.push(Claim::theorem(
                    "monomial.alpha_above_one",
                    cf(Bound::weak(deltan.clone()), Bound::weak(deltan.clone())),
                ));
            } else {
                claims.push(Claim::theorem(
                    "monomial.alpha_one",
                    cq(Bound::weak(deltan.clone()), Bound::weak(deltan.clone())),
                ));
                claims.push(Claim::theorem(
                    "monomial.alpha_one",
                    cf(Bound::weak(deltan.clone()), Bound::weak(deltan.clone())),
                ));
            }
        } else if case.delta < case.d {
            let a = case.alpha.clone().expect("δ ≠ d");
            claims.push(Claim::theorem(
                "monomial.delta_below_d",
                cq(Bound::strict(deltan.clone()), Bound::strict((&one - &a) * dn)),
            ));
            claims.push(Claim::theorem(
                "monomial.delta_below_d",
                cf(Bound::weak(deltan.clone()), Bound::weak(deltan.clone())),
            ));
        } else {
            // γ_n = nγδ^{n-1}
            let closed = from_u64(u64::from(n)) * &gamma * Pow::pow(&delta, n - 1) + deltan;
            claims.push(Claim::theorem(
                "monomial.delta_equals_d",
                cq(Bound::weak(closed.clone()), Bound::weak(closed)),
            ));
            claims.push(Claim::theorem(
                "monomial.delta_equals_d",
                Check::Compare {
                    lhs: deltan.clone(),
                    relation: Relation::Less,
                    rhs: g + dn,
                },
            ));
            claims.push(Claim::theorem(
                "monomial.delta_equals_d",
                cf(Bound::weak(deltan.clone()), Bound::weak(deltan.clone())),
            ));
        }
    } else if case.gamma == 0 {
        claims.push(Claim::theorem(
            "monomial.gamma_zero",
            cq(Bound::weak(dn.clone()), Bound::weak(dn.clone())),
        ));
        let v = min_rat(deltan.clone(), dn.clone());
        claims.push(Claim::theorem(
            "monomial.gamma_zero",
            cf(Bound::weak(v.clone()), Bound::weak(v)),
        ));
    } else {
        let dn1 = Pow::pow(&delta, n - 1);
        let v = &gamma * &dn1;
        claims.push(Claim::theorem(
            "monomial.d_zero",
            cq(Bound::weak(v.clone()), Bound::weak(v)),
        ));
        let w = min_rat(delta.clone(), gamma.clone()) * dn1;
        claims.push(Claim::theorem(
            "monomial.d_zero",
            cf(Bound::weak(w.clone()), Bound::weak(w)),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, readings};
    use crate::rational::{int, ratio};

    fn germ(p: &str, q: &str) -> SkewGerm {
        SkewGerm::parse(p, q).unwrap()
    }

    #[test]
    fn gamma_n_values() {
        assert_eq!(gamma_n(2, 3, 1, 2), BigUint::from(9u32));
        assert_eq!(gamma_n(3, 1, 3, 4), BigUint::from(108u32));
        assert_eq!(gamma_n(5, 0, 4, 7), BigUint::zero());
        assert_eq!(gamma_n(2, 1, 1, 3), BigUint::from(7u32));
    }

    #[test]
    fn geometric_sums() {
        let two = BigUint::from(2u32);
        let three = BigUint::from(3u32);
        assert_eq!(geometric(&two, &three, 3), BigUint::from(4u32 + 6 + 9));
        assert_eq!(geometric(&two, &three, 1), BigUint::one());
    }

    #[test]
    fn case2_fixture_prediction() {
        let f = germ("z^2", "z^3*w + z*w^2");
        let c = classify(&f);
        let p = predict(&f, &c, 2, &[], Some(false));
        assert_eq!(p.bidegree(), LatticePoint::new(9u64, 1u64));
        assert_eq!(p.cqn, Bracket::new(ratio(11, 2), true, int(10), true));
        assert_eq!(p.cfn, Bracket::exact(int(4)));
        assert_eq!(p.prev_vertex, Some((LatticePoint::new(7u64, 2u64), VertexTag::AB)));
        assert_eq!(p.dominant_coeff, Some(int(1)));
        assert_eq!(predict_weight(&c, 2, &int(2)), Ok(int(11)));
        assert!(predict_weight(&c, 2, &int(4)).is_err());
    }

    #[test]
    fn case3_fixture_prediction() {
        let f = germ("z^3", "w^2 + z*w");
        let c = classify(&f);
        let p = predict(&f, &c, 2, &[], Some(false));
        assert_eq!(p.next_vertex, Some((LatticePoint::new(2u64, 2u64), VertexTag::CD)));
        assert_eq!(predict_weight(&c, 2, &int(1)), Ok(int(4)));
        assert_eq!(p.cqn_exact(), Some(&int(4)));
        let asym = asymptotic(&c);
        assert_eq!(asym.c_infinity, int(2));
        assert_eq!(asym.d_candidates, alloc::vec![int(1)]);
    }

    #[test]
    fn case4_fixture_prediction() {
        let f = germ("z^2", "w^3 + z*w + z^3");
        let c = classify(&f);
        let p = predict(&f, &c, 2, &[], Some(false));
        assert_eq!(p.cqn_exact(), Some(&int(4)));
        assert_eq!(p.prev_vertex.as_ref().map(|v| v.1), Some(VertexTag::AB));
        assert_eq!(p.next_vertex.as_ref().map(|v| v.1), Some(VertexTag::CD));
    }

    #[test]
    fn boundary_fixture_vanishes() {
        let f = germ("z^2", "-2*w^2 + z*w + z^2");
        let c = &readings(&f)[0];
        assert!(may_vanish(c));
        assert_eq!(vanishing_sum(&f, c), Ok((int(0), true)));
        assert_eq!(predict_weight(c, 2, &int(1)), Ok(int(4)));
        let g = germ("z^2", "2*w^2 + z*w + z^2");
        let cg = classify(&g);
        assert_eq!(vanishing_sum(&g, &cg), Ok((int(4), false)));
        let other = classify(&germ("z^2", "z^3*w + z*w^2"));
        assert_eq!(vanishing_sum(&f, &other), Err(PredictError::VanishingNotApplicable));
    }

    #[test]
    fn case1_brackets_collapse() {
        let f = germ("z^2", "z*w");
        let c = classify(&f);
        let p = predict(&f, &c, 3, &[], Some(false));
        assert_eq!(p.cqn_exact(), Some(&int(8)));
        assert_eq!(p.cfn.exact_value(), Some(&int(8)));
        assert_eq!(
            dominant_term(&f, &c, 1, 100),
            (Some(int(1)), LatticePoint::new(1u64, 1u64))
        );
    }

    #[test]
    fn bracket_min_with_cap() {
        let b = Bracket::new(ratio(11, 2), true, int(10), true);
        assert_eq!(b.min_with(&int(4)), Bracket::exact(int(4)));
        let b = Bracket::new(int(2), true, int(4), true);
        assert_eq!(b.min_with(&int(4)), Bracket::new(int(2), true, int(4), true));
        let b = Bracket::new(int(2), false, int(5), false);
        assert_eq!(b.min_with(&int(4)), Bracket::new(int(2), false, int(4), false));
    }
}
