//! Newton polygons, weights and the exponent-lattice affine maps.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::poly::{Monomial, SparsePoly2};
use crate::rational::{from_u64, from_uint, Rational};

/// Exponent pair `(i, j)` of unbounded size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub i: BigUint,
    pub j: BigUint,
}

impl LatticePoint {
    pub fn new(i: impl Into<BigUint>, j: impl Into<BigUint>) -> Self {
        LatticePoint {
            i: i.into(),
            j: j.into(),
        }
    }

    pub fn to_monomial(&self) -> Option<Monomial> {
        Some(Monomial::new(
            u64::try_from(&self.i).ok()?,
            u64::try_from(&self.j).ok()?,
        ))
    }

    pub fn to_rational_pair(&self) -> (Rational, Rational) {
        (from_uint(&self.i), from_uint(&self.j))
    }

    /// `i + l·j`.
    pub fn weight(&self, l: &Rational) -> Rational {
        from_uint(&self.i) + l * from_uint(&self.j)
    }
}

impl From<Monomial> for LatticePoint {
    fn from(m: Monomial) -> Self {
        LatticePoint::new(m.z, m.w)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("weights must be positive")]
    NonPositiveWeight,
}

/// Vertex chain `(n_1, m_1), …, (n_s, m_s)` with `n` increasing and `m` decreasing,
/// together with the y-intercepts `T_1 > … > T_{s-1}` of its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<LatticePoint>,
    intercepts: Vec<Rational>,
}

impl NewtonPolygon {
    pub fn of(poly: &SparsePoly2) -> Result<Self, NewtonError> {
        if poly.is_zero() {
            return Err(NewtonError::ZeroPolynomial);
        }
        let chain = staircase_hull(poly.support().map(|m| (m.z, m.w)));
        Ok(Self::from_vertices(
            chain.into_iter().map(|(i, j)| LatticePoint::new(i, j)).collect(),
        ))
    }

    /// Builds the polygon from an already extreme, ordered vertex chain.
    pub fn from_vertices(vertices: Vec<LatticePoint>) -> Self {
        let intercepts = vertices
            .windows(2)
            .map(|w| intercept(&w[0].to_rational_pair(), &w[1].to_rational_pair()))
            .collect();
        NewtonPolygon { vertices, intercepts }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Number of vertices `s`.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex `(n_k, m_k)` for `1 ≤ k ≤ s`.
    pub fn vertex(&self, k: usize) -> &LatticePoint {
        &self.vertices[k - 1]
    }

    pub fn intercepts(&self) -> &[Rational] {
        &self.intercepts
    }

    /// `T_k` for `1 ≤ k ≤ s - 1`.
    pub fn intercept(&self, k: usize) -> &Rational {
        &self.intercepts[k - 1]
    }

    pub fn position(&self, p: &LatticePoint) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn is_vertex(&self, p: &LatticePoint) -> bool {
        self.position(p).is_some()
    }

    /// The vertex before `p` in the chain (smaller `n`), if `p` is a vertex with a predecessor.
    pub fn previous_vertex(&self, p: &LatticePoint) -> Option<&LatticePoint> {
        let idx = self.position(p)?;
        idx.checked_sub(1).map(|k| &self.vertices[k])
    }

    /// The vertex after `p` in the chain (larger `n`).
    pub fn next_vertex(&self, p: &LatticePoint) -> Option<&LatticePoint> {
        let idx = self.position(p)?;
        self.vertices.get(idx + 1)
    }

    /// Minimum of `n_k + l·m_k` over the vertices.
    pub fn weight(&self, l: &Rational) -> Rational {
        self.vertices
            .iter()
            .map(|v| v.weight(l))
            .min()
            .expect("polygon has a vertex")
    }
}

/// Pareto-minimal points, then the lower-left convex chain through them.
/// Collinear points are dropped, so only extreme points remain.
pub fn staircase_hull(points: impl IntoIterator<Item = (u64, u64)>) -> Vec<(u64, u64)> {
    let mut pts: Vec<(u64, u64)> = points.into_iter().collect();
    pts.sort_unstable();
    let mut front: Vec<(u64, u64)> = Vec::new();
    for p in pts {
        match front.last() {
            Some(&(_, j)) if p.1 >= j => {}
            _ => front.push(p),
        }
    }
    let mut chain: Vec<(u64, u64)> = Vec::with_capacity(front.len());
    for p in front {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            if cross_u64(a, b, p) <= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    chain
}

fn cross_u64(a: (u64, u64), b: (u64, u64), c: (u64, u64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let (cx, cy) = (c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
}

/// [`staircase_hull`] over rational points, used for transformed exponents.
pub fn rational_staircase(points: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut pts: Vec<(Rational, Rational)> = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut front: Vec<(Rational, Rational)> = Vec::new();
    for p in pts {
        match front.last() {
            Some((_, j)) if p.1 >= *j => {}
            _ => front.push(p),
        }
    }
    let mut chain: Vec<(Rational, Rational)> = Vec::with_capacity(front.len());
    for p in front {
        while chain.len() >= 2 {
            let a = &chain[chain.len() - 2];
            let b = &chain[chain.len() - 1];
            let cross = (&b.0 - &a.0) * (&p.1 - &b.1) - (&b.1 - &a.1) * (&p.0 - &b.0);
            if !cross.is_positive() {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    chain
}

/// y-intercept of the line through `a` and `b` (with `a.0 < b.0`).
pub fn intercept(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    &a.1 + &a.0 * (&a.1 - &b.1) / (&b.0 - &a.0)
}

/// `(y_b - y_a) / (x_b - x_a)`; `None` for a vertical segment.
pub fn slope(a: &LatticePoint, b: &LatticePoint) -> Option<Rational> {
    let (ax, ay) = a.to_rational_pair();
    let (bx, by) = b.to_rational_pair();
    let dx = bx - ax;
    if dx.is_zero() {
        None
    } else {
        Some((by - ay) / dx)
    }
}

/// `w_l(poly) = min { i + l·j }` over the support.
pub fn weight(poly: &SparsePoly2, l: &Rational) -> Result<Rational, NewtonError> {
    if !l.is_positive() {
        return Err(NewtonError::NonPositiveWeight);
    }
    poly.support()
        .map(|m| from_u64(m.z) + l * from_u64(m.w))
        .min()
        .ok_or(NewtonError::ZeroPolynomial)
}

/// Affine maps of the exponent lattice that straighten polygon edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeTransform {
    /// `(i, j) ↦ (i + l·j − l·δ, j)`.
    A1 { l: Rational, delta: Rational },
    /// `(i, j) ↦ (i, l⁻¹·i + j)`.
    A2 { l_inv: Rational },
    /// Apply `first`, then `second`.
    Then(alloc::boxed::Box<LatticeTransform>, alloc::boxed::Box<LatticeTransform>),
}

impl LatticeTransform {
    pub fn then(self, second: LatticeTransform) -> LatticeTransform {
        LatticeTransform::Then(alloc::boxed::Box::new(self), alloc::boxed::Box::new(second))
    }
}

pub fn transform_lattice(point: &(Rational, Rational), kind: &LatticeTransform) -> (Rational, Rational) {
    let (i, j) = point;
    match kind {
        LatticeTransform::A1 { l, delta } => (i + l * j - l * delta, j.clone()),
        LatticeTransform::A2 { l_inv } => (i.clone(), l_inv * i + j),
        LatticeTransform::Then(a, b) => transform_lattice(&transform_lattice(point, a), b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, ALL_VARS};
    use crate::rational::{int, ratio};

    fn polygon(s: &str) -> NewtonPolygon {
        NewtonPolygon::of(&parse_poly(s, ALL_VARS).unwrap()).unwrap()
    }

    fn pts(v: &[(u64, u64)]) -> Vec<LatticePoint> {
        v.iter().map(|&(i, j)| LatticePoint::new(i, j)).collect()
    }

    #[test]
    fn two_vertex_polygon() {
        let n = polygon("z^3*w + z*w^2");
        assert_eq!(n.vertices(), &pts(&[(1, 2), (3, 1)])[..]);
        assert_eq!(n.intercepts(), &[ratio(5, 2)]);
    }

    #[test]
    fn single_vertex() {
        let n = polygon("z*w^2");
        assert_eq!(n.vertices(), &pts(&[(1, 2)])[..]);
        assert!(n.intercepts().is_empty());
    }

    #[test]
    fn three_vertices() {
        let n = polygon("w^3 + z*w + z^3");
        assert_eq!(n.vertices(), &pts(&[(0, 3), (1, 1), (3, 0)])[..]);
        assert_eq!(n.intercepts(), &[int(3), ratio(3, 2)]);
    }

    #[test]
    fn collinear_and_dominated_points_are_not_vertices() {
        let n = polygon("-2*w^2 + z*w + z^2 + z^2*w^2 + z^5");
        assert_eq!(n.vertices(), &pts(&[(0, 2), (2, 0)])[..]);
        let n = polygon("z^9*w + z^8*w^2 + z^7*w^2 + 2*z^6*w^3 + z^4*w^4");
        assert_eq!(n.vertices(), &pts(&[(4, 4), (7, 2), (9, 1)])[..]);
    }

    #[test]
    fn weights() {
        let q = parse_poly("z^3*w + z*w^2", ALL_VARS).unwrap();
        assert_eq!(weight(&q, &int(2)).unwrap(), int(5));
        assert_eq!(weight(&q, &int(1)).unwrap(), int(3));
        let zc = parse_poly("z^7", ALL_VARS).unwrap();
        assert_eq!(weight(&zc, &ratio(5, 3)).unwrap(), int(7));
        assert_eq!(weight(&q, &int(0)), Err(NewtonError::NonPositiveWeight));
        assert_eq!(weight(&SparsePoly2::zero(), &int(1)), Err(NewtonError::ZeroPolynomial));
    }

    #[test]
    fn affine_maps() {
        let a1 = LatticeTransform::A1 {
            l: int(2),
            delta: int(2),
        };
        assert_eq!(transform_lattice(&(int(3), int(1)), &a1), (int(1), int(1)));
        let at_alpha = LatticeTransform::A1 {
            l: int(3),
            delta: int(2),
        };
        assert_eq!(transform_lattice(&(int(3), int(1)), &at_alpha).0, int(0));
        let a2 = LatticeTransform::A2 { l_inv: int(1) };
        assert_eq!(transform_lattice(&(int(1), int(1)), &a2), (int(1), int(2)));
        let both = a1.then(a2);
        assert_eq!(transform_lattice(&(int(3), int(1)), &both), (int(1), int(2)));
    }

    #[test]
    fn neighbours_and_slopes() {
        let n = polygon("w^3 + z*w + z^3");
        let mid = LatticePoint::new(1u64, 1u64);
        assert_eq!(n.previous_vertex(&mid), Some(&LatticePoint::new(0u64, 3u64)));
        assert_eq!(n.next_vertex(&mid), Some(&LatticePoint::new(3u64, 0u64)));
        assert_eq!(slope(&mid, n.next_vertex(&mid).unwrap()), Some(ratio(-1, 2)));
    }
}
