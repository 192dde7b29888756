//! Case analysis of a germ by the position of `δ` among the polygon intercepts,
//! the weight intervals attached to each case, and the induced map on weights.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::germ::SkewGerm;
use crate::newton::{LatticePoint, NewtonPolygon};
use crate::predict::gamma_n;
use crate::rational::{from_u64, from_uint, ExtendedRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseKind {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl CaseKind {
    pub fn name(self) -> &'static str {
        match self {
            CaseKind::Case1 => "Case1",
            CaseKind::Case2 => "Case2",
            CaseKind::Case3 => "Case3",
            CaseKind::Case4 => "Case4",
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A case together with the index `k` (1-based) of the vertex playing `(γ, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    pub kind: CaseKind,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundaryFlags {
    /// `δ = T_{k-1}`: the edge before `(γ, d)` passes through `(0, δ)`.
    pub delta_eq_t_upper: bool,
    /// `δ = T_k`: the edge after `(γ, d)` passes through `(0, δ)`.
    pub delta_eq_t_lower: bool,
}

/// Classification payload for one reading of a germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseData {
    pub kind: CaseKind,
    /// 1-based index of `(γ, d)` in the vertex chain.
    pub k: usize,
    pub delta: u64,
    pub gamma: u64,
    pub d: u64,
    pub l1: Rational,
    pub l2: ExtendedRational,
    /// `l_1 + l_2`; `+∞` when `l_2` is.
    pub l1_plus_l2: ExtendedRational,
    /// `γ / (δ − d)`, undefined when `δ = d`.
    pub alpha: Option<Rational>,
    pub boundary: BoundaryFlags,
    pub applicable: Vec<Selection>,
    pub polygon: NewtonPolygon,
}

impl CaseData {
    pub fn gamma_d(&self) -> LatticePoint {
        LatticePoint::new(self.gamma, self.d)
    }

    pub fn selection(&self) -> Selection {
        Selection {
            kind: self.kind,
            k: self.k,
        }
    }

    /// Number of polygon vertices `s`.
    pub fn s(&self) -> usize {
        self.polygon.len()
    }

    /// The vertex before `(γ, d)`: `(n_{k-1}, m_{k-1})`.
    pub fn prev_vertex(&self) -> Option<&LatticePoint> {
        (self.k > 1).then(|| self.polygon.vertex(self.k - 1))
    }

    /// The vertex after `(γ, d)`: `(n_{k+1}, m_{k+1})`.
    pub fn next_vertex(&self) -> Option<&LatticePoint> {
        (self.k < self.s()).then(|| self.polygon.vertex(self.k + 1))
    }

    /// `T_{k-1}`, if the vertex has a predecessor.
    pub fn t_upper(&self) -> Option<&Rational> {
        (self.k > 1).then(|| self.polygon.intercept(self.k - 1))
    }

    /// `T_k`, if the vertex has a successor.
    pub fn t_lower(&self) -> Option<&Rational> {
        (self.k < self.s()).then(|| self.polygon.intercept(self.k))
    }

    pub fn delta_rat(&self) -> Rational {
        from_u64(self.delta)
    }
}

/// Selections whose defining inequalities hold, in priority order (Case 2, Case 3, Case 4 by `k`).
pub fn applicable_selections(polygon: &NewtonPolygon, delta: u64) -> Vec<Selection> {
    let s = polygon.len();
    if s == 1 {
        return alloc::vec![Selection {
            kind: CaseKind::Case1,
            k: 1
        }];
    }
    let delta = from_u64(delta);
    // vertex k is selected iff T_k ≤ δ ≤ T_{k-1}, with T_0 = +∞ and T_s = −∞
    let holds = |k: usize| {
        let above = k == 1 || delta <= *polygon.intercept(k - 1);
        let below = k == s || *polygon.intercept(k) <= delta;
        above && below
    };
    let mut out = Vec::new();
    if holds(s) {
        out.push(Selection {
            kind: CaseKind::Case2,
            k: s,
        });
    }
    if holds(1) {
        out.push(Selection {
            kind: CaseKind::Case3,
            k: 1,
        });
    }
    for k in 2..s {
        if holds(k) {
            out.push(Selection {
                kind: CaseKind::Case4,
                k,
            });
        }
    }
    out
}

/// Primary classification of `f`.
pub fn classify(f: &SkewGerm) -> CaseData {
    let polygon = NewtonPolygon::of(f.q()).expect("germ has nonzero q");
    let applicable = applicable_selections(&polygon, f.delta());
    let primary = applicable[0];
    reading(f.delta(), polygon, primary, applicable)
}

/// Every applicable reading of `f`; the first one is the primary classification.
pub fn readings(f: &SkewGerm) -> Vec<CaseData> {
    let polygon = NewtonPolygon::of(f.q()).expect("germ has nonzero q");
    let applicable = applicable_selections(&polygon, f.delta());
    applicable
        .iter()
        .map(|sel| reading(f.delta(), polygon.clone(), *sel, applicable.clone()))
        .collect()
}

fn reading(delta: u64, polygon: NewtonPolygon, sel: Selection, applicable: Vec<Selection>) -> CaseData {
    let s = polygon.len();
    let k = sel.k;
    let v = polygon.vertex(k).clone();
    let gamma = u64::try_from(&v.i).expect("polynomial exponent");
    let d = u64::try_from(&v.j).expect("polynomial exponent");
    let (gr, dr) = (from_u64(gamma), from_u64(d));
    // −1/slope of the edge between vertices a and b
    let edge = |a: usize, b: usize| -> Rational {
        let (na, ma) = polygon.vertex(a).to_rational_pair();
        let (nb, mb) = polygon.vertex(b).to_rational_pair();
        (nb - na) / (ma - mb)
    };
    let l1 = if k > 1 { edge(k - 1, k) } else { Rational::zero() };
    let l1_plus_l2 = if k < s {
        ExtendedRational::Finite(edge(k, k + 1))
    } else {
        ExtendedRational::Infinity
    };
    let l2 = match &l1_plus_l2 {
        ExtendedRational::Finite(sum) => ExtendedRational::Finite(sum - &l1),
        ExtendedRational::Infinity => ExtendedRational::Infinity,
    };
    let alpha = (delta != d).then(|| gr / (from_u64(delta) - dr));
    let dq = from_u64(delta);
    let boundary = BoundaryFlags {
        delta_eq_t_upper: k > 1 && *polygon.intercept(k - 1) == dq,
        delta_eq_t_lower: k < s && *polygon.intercept(k) == dq,
    };
    CaseData {
        kind: sel.kind,
        k,
        delta,
        gamma,
        d,
        l1,
        l2,
        l1_plus_l2,
        alpha,
        boundary,
        applicable,
        polygon,
    }
}

/// An interval of positive weights with extended endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightInterval {
    pub lower: ExtendedRational,
    pub upper: ExtendedRational,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl WeightInterval {
    pub fn closed(lower: Rational, upper: Rational) -> Self {
        WeightInterval {
            lower: lower.into(),
            upper: upper.into(),
            lower_closed: true,
            upper_closed: true,
        }
    }

    /// `[lower, +∞)`.
    pub fn ray(lower: Rational) -> Self {
        WeightInterval {
            lower: lower.into(),
            upper: ExtendedRational::Infinity,
            lower_closed: true,
            upper_closed: false,
        }
    }

    /// `(0, upper]`, or `(0, +∞)`.
    pub fn positive_up_to(upper: ExtendedRational) -> Self {
        let upper_closed = !upper.is_infinite();
        WeightInterval {
            lower: Rational::zero().into(),
            upper,
            lower_closed: false,
            upper_closed,
        }
    }

    pub fn contains(&self, l: &Rational) -> bool {
        let lower_ok = match self.lower.cmp_rational(l) {
            core::cmp::Ordering::Less => true,
            core::cmp::Ordering::Equal => self.lower_closed,
            core::cmp::Ordering::Greater => false,
        };
        let upper_ok = match self.upper.cmp_rational(l) {
            core::cmp::Ordering::Greater => true,
            core::cmp::Ordering::Equal => self.upper_closed,
            core::cmp::Ordering::Less => false,
        };
        lower_ok && upper_ok
    }

    pub fn is_empty(&self) -> bool {
        match self.lower.cmp(&self.upper) {
            core::cmp::Ordering::Less => false,
            core::cmp::Ordering::Equal => !(self.lower_closed && self.upper_closed),
            core::cmp::Ordering::Greater => true,
        }
    }

    /// Intersection with `(0, +∞)`.
    fn positive_part(mut self) -> Self {
        if self.lower.cmp_rational(&Rational::zero()) != core::cmp::Ordering::Greater {
            self.lower = Rational::zero().into();
            self.lower_closed = false;
        }
        self
    }

    /// Endpoints, the midpoint of finite intervals, and a point beyond the
    /// lower endpoint for rays: representative weights inside the interval.
    pub fn samples(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let lower = self.lower.finite().cloned();
        let upper = self.upper.finite().cloned();
        if let (Some(lo), true) = (&lower, self.lower_closed) {
            out.push(lo.clone());
        }
        if let (Some(hi), true) = (&upper, self.upper_closed) {
            out.push(hi.clone());
        }
        match (lower, upper) {
            (Some(lo), Some(hi)) => out.push((lo + hi) / Rational::from_integer(2.into())),
            (Some(lo), None) => {
                out.push(&lo + Rational::one());
                out.push(lo * Rational::from_integer(3.into()) + Rational::new(1.into(), 2.into()));
            }
            _ => {}
        }
        out.retain(|l| self.contains(l));
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for WeightInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        let close = if self.upper_closed { ']' } else { ')' };
        write!(f, "{}{}, {}{}", open, self.lower, self.upper, close)
    }
}

/// Which of the three Case-4 rectangle shapes applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RectangleShape {
    /// `T_k < δ = T_{k-1}`: `{l_1} × [l_1, l_1 + l_2]` minus `(l_1, l_1)`.
    UpperBoundary,
    /// `T_k < δ < T_{k-1}`: `[l_1, α] × [α, l_1 + l_2]` minus `(α, α)`.
    Interior,
    /// `T_k = δ < T_{k-1}`: `[l_1, l_1 + l_2) × {l_1 + l_2}`.
    LowerBoundary,
}

/// The Case-4 set of pairs `(l_(1), l_(1) + l_(2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRectangle {
    pub shape: RectangleShape,
    /// `𝓘¹ = [l_1, l_1 + l_2) ∩ (0, α]`.
    pub first: WeightInterval,
    pub excluded_corner: Option<(Rational, Rational)>,
    pub alpha: Rational,
    pub l1_plus_l2: Rational,
}

impl WeightRectangle {
    /// `𝓘²(l_(1)) = [α − l_(1), l_1 + l_2 − l_(1)] ∩ (0, +∞)` for `l_(1)` in `𝓘¹`.
    pub fn second_of(&self, l_first: &Rational) -> Option<WeightInterval> {
        if !self.first.contains(l_first) {
            return None;
        }
        let iv = WeightInterval::closed(&self.alpha - l_first, &self.l1_plus_l2 - l_first);
        Some(iv.positive_part())
    }

    /// Membership of `(l_(1), l_(1) + l_(2))`.
    pub fn contains(&self, l_first: &Rational, l_sum: &Rational) -> bool {
        match self.second_of(l_first) {
            Some(second) => second.contains(&(l_sum - l_first)),
            None => false,
        }
    }
}

// Built once per classification; boxing buys nothing.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSet {
    Interval(WeightInterval),
    Rectangle(WeightRectangle),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightIntervals {
    pub i_f: WeightSet,
    /// Case 4 only: `[l_1, l_1 + l_2]`.
    pub i_f_ar: Option<WeightInterval>,
}

impl WeightIntervals {
    /// Weights for which `w_l(Q^n)` is asserted exactly.
    pub fn equality_range(&self) -> &WeightInterval {
        match (&self.i_f, &self.i_f_ar) {
            (_, Some(ar)) => ar,
            (WeightSet::Interval(iv), None) => iv,
            (WeightSet::Rectangle(_), None) => unreachable!("rectangles come with 𝓘^AR"),
        }
    }
}

pub fn weight_intervals(case: &CaseData) -> WeightIntervals {
    let alpha = case.alpha.clone();
    match case.kind {
        CaseKind::Case1 => WeightIntervals {
            i_f: WeightSet::Interval(WeightInterval::positive_up_to(ExtendedRational::Infinity)),
            i_f_ar: None,
        },
        CaseKind::Case2 => {
            let iv = if case.delta > case.d {
                WeightInterval::closed(case.l1.clone(), alpha.expect("δ > d"))
            } else {
                WeightInterval::ray(case.l1.clone())
            };
            WeightIntervals {
                i_f: WeightSet::Interval(iv),
                i_f_ar: None,
            }
        }
        CaseKind::Case3 => {
            let l2 = case.l2.finite().cloned().expect("Case 3 has a next vertex");
            let iv = if case.gamma > 0 {
                WeightInterval::closed(alpha.expect("γ > 0 forces δ > d"), l2)
            } else {
                WeightInterval::positive_up_to(l2.into())
            };
            WeightIntervals {
                i_f: WeightSet::Interval(iv),
                i_f_ar: None,
            }
        }
        CaseKind::Case4 => {
            let alpha = alpha.expect("Case 4 has δ > d");
            let sum = case.l1_plus_l2.finite().cloned().expect("Case 4 has a next vertex");
            let l1 = case.l1.clone();
            let shape = match (case.boundary.delta_eq_t_upper, case.boundary.delta_eq_t_lower) {
                (true, _) => RectangleShape::UpperBoundary,
                (false, false) => RectangleShape::Interior,
                (false, true) => RectangleShape::LowerBoundary,
            };
            // [l1, l1 + l2) ∩ (0, α]
            let first = if alpha < sum {
                WeightInterval::closed(l1.clone(), alpha.clone())
            } else {
                WeightInterval {
                    lower: l1.clone().into(),
                    upper: sum.clone().into(),
                    lower_closed: true,
                    upper_closed: false,
                }
            };
            let excluded_corner = match shape {
                RectangleShape::UpperBoundary => Some((l1.clone(), l1.clone())),
                RectangleShape::Interior => Some((alpha.clone(), alpha.clone())),
                RectangleShape::LowerBoundary => None,
            };
            WeightIntervals {
                i_f: WeightSet::Rectangle(WeightRectangle {
                    shape,
                    first,
                    excluded_corner,
                    alpha,
                    l1_plus_l2: sum.clone(),
                }),
                i_f_ar: Some(WeightInterval::closed(l1, sum)),
            }
        }
    }
}

/// `R^n(l) = (γ_n + l·d^n) / δ^n`; `R^0(l) = l`.
pub fn r_map(case: &CaseData, l: &Rational, n: u32) -> Rational {
    if n == 0 {
        return l.clone();
    }
    let g = from_uint(&gamma_n(case.delta, case.gamma, case.d, n));
    let dn = from_uint(&num_bigint::BigUint::from(case.d).pow(n));
    let deltan = from_uint(&num_bigint::BigUint::from(case.delta).pow(n));
    (g + l * dn) / deltan
}

/// One application of `R(l) = (γ + l·d) / δ`.
pub fn r_step(case: &CaseData, l: &Rational) -> Rational {
    (from_u64(case.gamma) + l * from_u64(case.d)) / from_u64(case.delta)
}

/// Whether `l > 0` lies in the interval where the case's weight equality is asserted.
pub fn in_equality_range(case: &CaseData, l: &Rational) -> bool {
    l.is_positive() && weight_intervals(case).equality_range().contains(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn case(p: &str, q: &str) -> CaseData {
        classify(&SkewGerm::parse(p, q).unwrap())
    }

    #[test]
    fn case2_fixture() {
        let c = case("z^2", "z^3*w + z*w^2");
        assert_eq!(c.kind, CaseKind::Case2);
        assert_eq!((c.gamma, c.d), (3, 1));
        assert_eq!(c.l1, int(2));
        assert!(c.l2.is_infinite());
        assert_eq!(c.alpha, Some(int(3)));
        let iv = weight_intervals(&c);
        assert_eq!(iv.i_f, WeightSet::Interval(WeightInterval::closed(int(2), int(3))));
    }

    #[test]
    fn case3_fixture() {
        let c = case("z^3", "w^2 + z*w");
        assert_eq!(c.kind, CaseKind::Case3);
        assert_eq!((c.gamma, c.d), (0, 2));
        assert_eq!(c.l1, int(0));
        assert_eq!(c.l2, ExtendedRational::Finite(int(1)));
        let iv = weight_intervals(&c);
        assert_eq!(
            iv.i_f,
            WeightSet::Interval(WeightInterval::positive_up_to(int(1).into()))
        );
    }

    #[test]
    fn case4_fixture() {
        let c = case("z^2", "w^3 + z*w + z^3");
        assert_eq!(c.kind, CaseKind::Case4);
        assert_eq!(c.k, 2);
        assert_eq!((c.gamma, c.d), (1, 1));
        assert_eq!(c.l1, ratio(1, 2));
        assert_eq!(c.l1_plus_l2, ExtendedRational::Finite(int(2)));
        assert_eq!(c.alpha, Some(int(1)));
        let iv = weight_intervals(&c);
        let WeightSet::Rectangle(r) = &iv.i_f else {
            panic!("rectangle expected")
        };
        assert_eq!(r.shape, RectangleShape::Interior);
        assert_eq!(r.first, WeightInterval::closed(ratio(1, 2), int(1)));
        assert_eq!(r.excluded_corner, Some((int(1), int(1))));
        assert!(r.contains(&ratio(1, 2), &int(2)));
        assert!(!r.contains(&int(1), &int(1)));
        assert_eq!(iv.i_f_ar, Some(WeightInterval::closed(ratio(1, 2), int(2))));
    }

    #[test]
    fn boundary_germ_has_two_readings() {
        let f = SkewGerm::parse("z^2", "-2*w^2 + z*w + z^2").unwrap();
        let rs = readings(&f);
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].kind, CaseKind::Case2);
        assert!(rs[0].boundary.delta_eq_t_upper);
        assert_eq!((rs[0].gamma, rs[0].d), (2, 0));
        assert_eq!(rs[0].l1, int(1));
        assert_eq!(rs[1].kind, CaseKind::Case3);
        assert!(rs[1].boundary.delta_eq_t_lower);
    }

    #[test]
    fn case1_is_degenerate() {
        let c = case("z^2", "z*w");
        assert_eq!(c.kind, CaseKind::Case1);
        assert_eq!(c.l1, int(0));
        assert!(c.l2.is_infinite());
        assert!(weight_intervals(&c).equality_range().contains(&int(1000)));
    }

    #[test]
    fn r_map_values() {
        let c = case("z^2", "z^3*w + z*w^2");
        assert_eq!(r_map(&c, &int(2), 1), ratio(5, 2));
        assert_eq!(r_map(&c, &int(2), 2), ratio(11, 4));
        assert_eq!(r_map(&c, &int(3), 7), int(3));
        assert_eq!(r_step(&c, &r_map(&c, &int(2), 1)), r_map(&c, &int(2), 2));
    }

    #[test]
    fn interval_samples_stay_inside() {
        let iv = WeightInterval::ray(int(2));
        assert!(iv.samples().iter().all(|l| iv.contains(l)));
        assert!(!WeightInterval::positive_up_to(int(1).into()).contains(&int(0)));
        let half_open = WeightInterval {
            lower: int(1).into(),
            upper: int(1).into(),
            lower_closed: true,
            upper_closed: false,
        };
        assert!(half_open.is_empty());
    }
}
