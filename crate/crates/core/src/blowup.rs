//! Monomial conjugations `π₁(z, c) = (z, z^l c)` and `π₂(t, w) = (t w^{1/l}, w)` for
//! integral weight data, with the exponent inequalities they are meant to produce.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::classify::{classify, readings, weight_intervals, CaseData, CaseKind, WeightSet};
use crate::germ::{substitute, SkewGerm};
use crate::newton::{rational_staircase, transform_lattice, LatticePoint, LatticeTransform, NewtonPolygon};
use crate::poly::{Limits, Monomial, PolyError, SparsePoly2};
use crate::rational::{from_u64, Rational};
use crate::verify::LemmaCheck;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("the weight must be a positive integer")]
    NonIntegralWeight,
    #[error("no reading of the germ admits this conjugation")]
    NotApplicable,
    #[error("weight {0} lies outside the admissible interval")]
    WeightOutsideInterval(Rational),
    #[error("division leaves the term z^-{neg} c^{c_exp}")]
    NegativeExponent { neg: u64, c_exp: u64 },
    #[error(transparent)]
    Resource(#[from] PolyError),
}

/// Result of one conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupReport {
    /// First component; for `π₂` only its leading monomial.
    pub first: SparsePoly2,
    pub second: SparsePoly2,
    /// The transformed map as a germ, when it fixes the origin.
    pub germ: Option<SkewGerm>,
    /// Terms of z-degree above this bound are not represented; `None` when exact.
    pub truncation: Option<u64>,
    /// Whether the `π₂` first component is a genuine monomial with nonnegative exponents.
    pub first_valid: bool,
    pub lemma_checks: Vec<LemmaCheck>,
}

impl BlowupReport {
    pub fn all_hold(&self) -> bool {
        self.lemma_checks.iter().all(|c| c.holds)
    }
}

/// `num(z, c) / den(z)` as power series in `z`, represented up to z-degree `order`.
///
/// Returns the quotient and whether the division was exact.
pub fn series_divide(num: &SparsePoly2, den: &SparsePoly2, order: u64) -> Result<(SparsePoly2, bool), BlowupError> {
    let shift = den.support().map(|m| m.z).min().expect("nonzero divisor");
    let lead = den.coeff_at(shift, 0);
    let unit = den.map_exponents(|m| Monomial::new(m.z - shift, m.w));
    let mut rem = num.clone();
    let mut quotient = Vec::new();
    loop {
        let Some((m, c)) = rem
            .terms()
            .min_by_key(|(m, _)| (m.z, m.w))
            .map(|(m, c)| (*m, c.clone()))
        else {
            return Ok((SparsePoly2::from_terms(quotient), true));
        };
        if m.z < shift {
            return Err(BlowupError::NegativeExponent {
                neg: shift - m.z,
                c_exp: m.w,
            });
        }
        let qz = m.z - shift;
        if qz > order {
            return Ok((SparsePoly2::from_terms(quotient), false));
        }
        let t = c / &lead;
        quotient.push((Monomial::new(qz, m.w), t.clone()));
        let sub = unit.map_exponents(|u| Monomial::new(u.z + m.z, u.w + m.w)).scale(&t);
        rem = rem.add_poly(&-&sub);
    }
}

/// `q(z, z^l c) / p(z)^l` up to z-degree `order` (exact for monomial `p`).
pub fn pi1_second(
    p: &SparsePoly2,
    q: &SparsePoly2,
    l: u64,
    order: u64,
    limits: &Limits,
) -> Result<(SparsePoly2, bool), BlowupError> {
    let zl_c = SparsePoly2::monomial(Monomial::new(l, 1), Rational::one());
    let num = substitute(q, &SparsePoly2::z(), &zl_c, limits)?;
    let den = p.checked_pow(l, limits)?;
    series_divide(&num, &den, order)
}

fn check(name: &'static str, failures: Vec<LatticePoint>, detail: alloc::string::String) -> LemmaCheck {
    let holds = failures.is_empty();
    LemmaCheck::new(name, holds, failures.into_iter().next(), detail)
}

fn reading_for(f: &SkewGerm, kinds: &[CaseKind]) -> Option<CaseData> {
    readings(f).into_iter().find(|c| kinds.contains(&c.kind))
}

/// Default truncation: every transformed support point of `q` is represented.
fn default_order(q: &SparsePoly2, l: u64, delta: u64) -> u64 {
    q.support()
        .map(|m| (m.z + l * m.w).saturating_sub(l * delta))
        .max()
        .unwrap_or(0)
}

/// `f̃ = π₁⁻¹ ∘ f ∘ π₁` for an integral weight `l` of a Case 1, 2 or 4 reading.
pub fn conjugate_pi1(f: &SkewGerm, l: u64, limits: &Limits) -> Result<BlowupReport, BlowupError> {
    if l == 0 {
        return Err(BlowupError::NonIntegralWeight);
    }
    let case =
        reading_for(f, &[CaseKind::Case1, CaseKind::Case2, CaseKind::Case4]).ok_or(BlowupError::NotApplicable)?;
    let lr = from_u64(l);
    let admissible = match weight_intervals(&case).i_f {
        WeightSet::Interval(iv) => iv.contains(&lr),
        WeightSet::Rectangle(rect) => rect.first.contains(&lr),
    };
    if !admissible {
        return Err(BlowupError::WeightOutsideInterval(lr));
    }
    let order = default_order(f.q(), l, f.delta());
    let (second, exact) = pi1_second(f.p(), f.q(), l, order, limits)?;
    let germ = SkewGerm::new(f.p().clone(), second.clone()).ok();

    let delta = case.delta;
    let tilde = |i: u64, j: u64| -> Option<u64> { (i + l * j).checked_sub(l * delta) };
    let gamma_t = tilde(case.gamma, case.d);
    let mut checks = Vec::new();
    let Some(gamma_t) = gamma_t else {
        checks.push(LemmaCheck::new(
            "pi1.gamma_tilde_nonnegative",
            false,
            Some(case.gamma_d()),
            format!("γ + l d − l δ < 0 for l = {}", l),
        ));
        return Ok(BlowupReport {
            first: f.p().clone(),
            second,
            germ,
            truncation: (!exact).then_some(order),
            first_valid: true,
            lemma_checks: checks,
        });
    };
    checks.push(LemmaCheck::new(
        "pi1.gamma_tilde_nonnegative",
        true,
        None,
        format!("γ̃ = {}", gamma_t),
    ));
    let bad: Vec<LatticePoint> = f
        .q()
        .support()
        .filter(|m| tilde(m.z, m.w).is_none_or(|it| it < gamma_t))
        .map(LatticePoint::from)
        .collect();
    checks.push(check(
        "pi1.gamma_tilde_minimal",
        bad,
        format!("γ̃ = {} ≤ ĩ on the support", gamma_t),
    ));

    let image = NewtonPolygon::of(&second).map_err(|_| BlowupError::NotApplicable)?;
    let top = LatticePoint::new(gamma_t, case.d);
    match case.kind {
        CaseKind::Case4 => checks.push(LemmaCheck::new(
            "pi1.first_vertex",
            image.vertex(1) == &top,
            (image.vertex(1) != &top).then(|| image.vertex(1).clone()),
            format!("(γ̃, d) = {} is the first vertex", top),
        )),
        _ => checks.push(LemmaCheck::new(
            "pi1.single_vertex",
            image.len() == 1 && image.vertex(1) == &top,
            (image.vertex(1) != &top).then(|| image.vertex(1).clone()),
            format!("N(q̃) = D{}", top),
        )),
    }

    let a1 = LatticeTransform::A1 {
        l: lr.clone(),
        delta: from_u64(delta),
    };
    let moved: Vec<(Rational, Rational)> = case
        .polygon
        .vertices()
        .iter()
        .map(|v| transform_lattice(&v.to_rational_pair(), &a1))
        .collect();
    let expected = rational_staircase(&moved);
    let actual: Vec<(Rational, Rational)> = image.vertices().iter().map(|v| v.to_rational_pair()).collect();
    checks.push(LemmaCheck::new(
        "pi1.polygon_commutes",
        expected == actual,
        None,
        format!("N(q̃) is the hull of the A₁-image of N(q), {} vertices", expected.len()),
    ));

    // vertex-wise refinements
    let n_t: Vec<Option<u64>> = case
        .polygon
        .vertices()
        .iter()
        .map(|v| tilde(u64::try_from(&v.i).ok()?, u64::try_from(&v.j).ok()?))
        .collect();
    let s = case.polygon.len();
    if case.kind == CaseKind::Case2 {
        let at_l1 = lr == case.l1;
        let mut wrong = Vec::new();
        for (idx, nt) in n_t.iter().enumerate() {
            let j = idx + 1;
            if j == s {
                continue;
            }
            let ok = match nt {
                None => false,
                Some(v) if at_l1 && j == s - 1 => *v == gamma_t,
                Some(v) => *v > gamma_t,
            };
            if !ok {
                wrong.push(case.polygon.vertex(j).clone());
            }
        }
        checks.push(check(
            "pi1.vertex_refinement",
            wrong,
            format!("ñ_j against γ̃ at l = {}", l),
        ));
        if let Some(alpha) = &case.alpha {
            if case.delta > case.d {
                let ok = if lr < *alpha {
                    gamma_t > 0
                } else if lr == *alpha {
                    gamma_t == 0
                } else {
                    true
                };
                checks.push(LemmaCheck::new(
                    "pi1.gamma_tilde_sign",
                    ok,
                    (!ok).then(|| top.clone()),
                    format!("γ̃ = {} at l = {}, α = {}", gamma_t, l, alpha),
                ));
            }
        }
    }
    if case.kind == CaseKind::Case4 && lr == case.l1 {
        if let Some(g) = &germ {
            let c = classify(g);
            // δ stays on the lower intercept exactly when it was on it before
            let same_side = case.boundary.delta_eq_t_lower == c.boundary.delta_eq_t_lower;
            checks.push(LemmaCheck::new(
                "pi1.case4_stage_is_case3",
                c.kind == CaseKind::Case3 && c.gamma == gamma_t && c.d == case.d && same_side,
                None,
                format!("first stage classifies as {} at ({}, {})", c.kind, c.gamma, c.d),
            ));
        }
    }

    Ok(BlowupReport {
        first: f.p().clone(),
        second,
        germ,
        truncation: (!exact).then_some(order),
        first_valid: true,
        lemma_checks: checks,
    })
}

/// `q̃(t, w) = q(t w^{1/l}, w)` for `1/l = l_inv` integral, on a Case 3 reading.
pub fn conjugate_pi2(f: &SkewGerm, l_inv: u64) -> Result<BlowupReport, BlowupError> {
    if l_inv == 0 {
        return Err(BlowupError::NonIntegralWeight);
    }
    let case = reading_for(f, &[CaseKind::Case3]).ok_or(BlowupError::NotApplicable)?;
    let l = Rational::new(1.into(), l_inv.into());
    if !weight_intervals(&case).equality_range().contains(&l) {
        return Err(BlowupError::WeightOutsideInterval(l));
    }
    let second = f.q().map_exponents(|m| Monomial::new(m.z, m.z * l_inv + m.w));
    let (gamma, d, delta) = (case.gamma, case.d, case.delta);
    let d_t = gamma * l_inv + d;
    let mut checks = Vec::new();

    let strict_ok = if gamma > 0 { d < d_t } else { d == d_t };
    checks.push(LemmaCheck::new(
        "pi2.d_tilde_lower",
        strict_ok,
        (!strict_ok).then(|| case.gamma_d()),
        format!("d = {} and d̃ = {} (strict when γ > 0)", d, d_t),
    ));
    let bad: Vec<LatticePoint> = f
        .q()
        .support()
        .filter(|m| m.z * l_inv + m.w < d_t)
        .map(LatticePoint::from)
        .collect();
    checks.push(check(
        "pi2.d_tilde_minimal",
        bad,
        format!("d̃ = {} ≤ j̃ on the support", d_t),
    ));
    let image = NewtonPolygon::of(&second).expect("nonzero");
    let top = LatticePoint::new(gamma, d_t);
    checks.push(LemmaCheck::new(
        "pi2.single_vertex",
        image.len() == 1 && image.vertex(1) == &top,
        (image.vertex(1) != &top).then(|| image.vertex(1).clone()),
        format!("N(q̃) = D{}", top),
    ));
    checks.push(LemmaCheck::new(
        "pi2.d_tilde_below_delta",
        d_t <= delta,
        None,
        format!("d̃ = {} ≤ δ = {}", d_t, delta),
    ));

    // leading monomial of p(t w^{1/l}) / q̃^{1/l}
    let t_exp = delta.checked_sub(gamma * l_inv);
    let w_exp = delta.checked_sub(d_t).map(|x| x * l_inv);
    let first_valid = t_exp.is_some() && w_exp.is_some();
    let b = f.b(gamma, d);
    let lead = f.a_delta() / num_traits::Pow::pow(&b, u32::try_from(l_inv).expect("small weight"));
    let first = match (t_exp, w_exp) {
        (Some(t), Some(w)) => SparsePoly2::monomial(Monomial::new(t, w), lead),
        _ => SparsePoly2::zero(),
    };
    Ok(BlowupReport {
        first,
        second,
        germ: None,
        truncation: None,
        first_valid,
        lemma_checks: checks,
    })
}

/// Two-stage conjugation of a Case 4 germ with integral `l_1` and `l_2^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeBlowup {
    pub first_stage: BlowupReport,
    pub second_stage: BlowupReport,
    pub lemma_checks: Vec<LemmaCheck>,
}

pub fn conjugate_case4(f: &SkewGerm, limits: &Limits) -> Result<CompositeBlowup, BlowupError> {
    let case = reading_for(f, &[CaseKind::Case4]).ok_or(BlowupError::NotApplicable)?;
    let l1 = integral(&case.l1)?;
    let l2 = case.l2.finite().cloned().expect("Case 4 has a next vertex");
    let l2_inv = integral(&l2.recip())?;
    let first_stage = conjugate_pi1(f, l1, limits)?;
    let stage_germ = first_stage.germ.clone().ok_or(BlowupError::NotApplicable)?;
    let second_stage = conjugate_pi2(&stage_germ, l2_inv)?;

    let delta = case.delta;
    let tilde_i = |m: &Monomial| (m.z + l1 * m.w).checked_sub(l1 * delta);
    let gamma_t = (case.gamma + l1 * case.d) - l1 * delta;
    let d_t = l2_inv * gamma_t + case.d;
    let mut bad = Vec::new();
    for m in f.q().support() {
        let ok = match tilde_i(&m) {
            Some(it) => gamma_t <= it && case.d <= d_t && d_t <= l2_inv * it + m.w,
            None => false,
        };
        if !ok {
            bad.push(LatticePoint::from(m));
        }
    }
    let mut checks = alloc::vec![check(
        "composite.exponent_bounds",
        bad,
        format!("0 ≤ γ̃ = {} ≤ ĩ and d ≤ d̃ = {} ≤ j̃", gamma_t, d_t),
    )];

    let a = LatticeTransform::A1 {
        l: case.l1.clone(),
        delta: from_u64(delta),
    }
    .then(LatticeTransform::A2 { l_inv: l2.recip() });
    let img = |k: usize| transform_lattice(&case.polygon.vertex(k).to_rational_pair(), &a);
    let (prev, top, next) = (img(case.k - 1), img(case.k), img(case.k + 1));
    let target = (from_u64(gamma_t), from_u64(d_t));
    let ok = top == target && prev.0 == top.0 && next.1 == top.1;
    checks.push(LemmaCheck::new(
        "composite.edges_to_axes",
        ok,
        None,
        format!("A₂∘A₁ sends L_(k-1) to x = {} and L_k to y = {}", top.0, top.1),
    ));
    Ok(CompositeBlowup {
        first_stage,
        second_stage,
        lemma_checks: checks,
    })
}

fn integral(r: &Rational) -> Result<u64, BlowupError> {
    if r.is_integer() && r.is_positive() {
        u64::try_from(r.to_integer()).map_err(|_| BlowupError::NonIntegralWeight)
    } else {
        Err(BlowupError::NonIntegralWeight)
    }
}

/// Compares `(π₁⁻¹ ∘ f ∘ π₁)^n` with `π₁⁻¹ ∘ f^n ∘ π₁` on terms of z-degree `≤ order`.
pub fn pi1_conjugacy_holds(f: &SkewGerm, l: u64, n: u32, order: u64, limits: &Limits) -> Result<bool, BlowupError> {
    let (q1, _) = pi1_second(f.p(), f.q(), l, order, limits)?;
    let conj = SkewGerm::new(f.p().clone(), q1).map_err(|_| BlowupError::NotApplicable)?;
    let lhs = conj.iterate(n, limits)?;
    let f_n = f.iterate(n, limits)?;
    let (rhs, _) = pi1_second(f_n.p(), f_n.q(), l, order, limits)?;
    let cut = |q: &SparsePoly2| q.filter(|m| m.z <= order);
    Ok(cut(lhs.q()) == cut(&rhs))
}
