//! Skew-product germs `f(z, w) = (p(z), q(z, w))` and their exact iterates.

use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::parse::{parse_poly, ParseError, ALL_VARS, Z_ONLY};
use crate::poly::{Limits, Monomial, PolyError, SparsePoly2};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("p is the zero polynomial")]
    ZeroP,
    #[error("q is the zero polynomial")]
    ZeroQ,
    #[error("p depends on w")]
    PDependsOnW,
    #[error("p has a constant term")]
    PConstantTerm,
    #[error("q has a constant term")]
    QConstantTerm,
    #[error("cannot parse p: {0}")]
    ParseP(ParseError),
    #[error("cannot parse q: {0}")]
    ParseQ(ParseError),
}

/// A validated skew product fixing the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewGerm {
    p: SparsePoly2,
    q: SparsePoly2,
    delta: u64,
    a_delta: Rational,
}

impl SkewGerm {
    pub fn new(p: SparsePoly2, q: SparsePoly2) -> Result<Self, GermError> {
        if p.is_zero() {
            return Err(GermError::ZeroP);
        }
        if q.is_zero() {
            return Err(GermError::ZeroQ);
        }
        if p.depends_on_w() {
            return Err(GermError::PDependsOnW);
        }
        if p.has_constant_term() {
            return Err(GermError::PConstantTerm);
        }
        if q.has_constant_term() {
            return Err(GermError::QConstantTerm);
        }
        let (lowest, a_delta) = p
            .terms()
            .min_by_key(|(m, _)| m.z)
            .map(|(m, c)| (m.z, c.clone()))
            .expect("p is nonzero");
        Ok(SkewGerm {
            p,
            q,
            delta: lowest,
            a_delta,
        })
    }

    /// Parses `p` (in `z` only) and `q` (in `z`, `w`) and validates the pair.
    pub fn parse(p: &str, q: &str) -> Result<Self, GermError> {
        let p = parse_poly(p, Z_ONLY).map_err(GermError::ParseP)?;
        let q = parse_poly(q, ALL_VARS).map_err(GermError::ParseQ)?;
        Self::new(p, q)
    }

    pub fn p(&self) -> &SparsePoly2 {
        &self.p
    }

    pub fn q(&self) -> &SparsePoly2 {
        &self.q
    }

    /// Order of `p` at the origin.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Lowest coefficient of `p`.
    pub fn a_delta(&self) -> &Rational {
        &self.a_delta
    }

    /// Coefficient `b_ij` of `q`.
    pub fn b(&self, i: u64, j: u64) -> Rational {
        self.q.coeff_at(i, j)
    }

    /// Whether `p` is the single monomial `a z^δ`.
    pub fn p_is_monomial(&self) -> bool {
        self.p.len() == 1
    }

    /// The n-th iterate `f^n = (p^n, Q^n)`, computed by exact composition.
    pub fn iterate(&self, n: u32, limits: &Limits) -> Result<SkewGerm, PolyError> {
        assert!(n >= 1, "iterates start at n = 1");
        let mut it = Iterates::new(self, *limits);
        let mut last = None;
        for _ in 0..n {
            last = Some(it.next().expect("iterator is infinite")?);
        }
        Ok(last.expect("n >= 1"))
    }

    /// Composition `self ∘ other` as maps of `(z, w)`.
    pub fn compose(&self, other: &SkewGerm, limits: &Limits) -> Result<SkewGerm, PolyError> {
        let p = compose_univariate(&self.p, &other.p, limits)?;
        let q = substitute(&self.q, &other.p, &other.q, limits)?;
        Ok(SkewGerm::new(p, q).expect("composition of germs is a germ"))
    }
}

/// Substitutes `(z, w) -> (x(z), y(z, w))` into `poly`, by Horner's rule in `w`.
///
/// Powers of `x` are cached; the accumulation multiplies by `y` once per `w`-degree step.
pub fn substitute(
    poly: &SparsePoly2,
    x: &SparsePoly2,
    y: &SparsePoly2,
    limits: &Limits,
) -> Result<SparsePoly2, PolyError> {
    let by_w = poly.w_coefficients();
    let Some(&(top, _)) = by_w.last() else {
        return Ok(SparsePoly2::zero());
    };
    let max_z = poly.degree_z() as usize;
    let mut x_powers: Vec<Option<SparsePoly2>> = alloc::vec![None; max_z + 1];
    let mut needed = alloc::vec![false; max_z + 1];
    for (_, c) in &by_w {
        for m in c.support() {
            needed[m.z as usize] = true;
        }
    }
    let mut current = SparsePoly2::one();
    for (e, flag) in needed.iter().enumerate() {
        if e > 0 {
            current = current.checked_mul(x, limits)?;
        }
        if *flag {
            x_powers[e] = Some(current.clone());
        }
    }
    let eval_z = |c: &SparsePoly2| -> SparsePoly2 {
        let mut acc = SparsePoly2::zero();
        for (m, coeff) in c.terms() {
            let xp = x_powers[m.z as usize].as_ref().expect("power cached");
            acc = acc.add_poly(&xp.scale(coeff));
        }
        acc
    };

    let mut coeffs = by_w.iter().rev().peekable();
    let mut acc = SparsePoly2::zero();
    let mut degree = top;
    loop {
        if let Some((j, c)) = coeffs.peek() {
            if *j == degree {
                acc = acc.add_poly(&eval_z(c));
                coeffs.next();
            }
        }
        if degree == 0 {
            break;
        }
        acc = acc.checked_mul(y, limits)?;
        degree -= 1;
    }
    Ok(acc)
}

fn compose_univariate(outer: &SparsePoly2, inner: &SparsePoly2, limits: &Limits) -> Result<SparsePoly2, PolyError> {
    substitute(outer, inner, &SparsePoly2::zero(), limits)
}

/// Successive iterates `f, f^2, f^3, …`, each built from the previous one by
/// `Q^{k+1}(z, w) = q(p^k(z), Q^k(z, w))` and `p^{k+1} = p(p^k)`.
pub struct Iterates<'a> {
    germ: &'a SkewGerm,
    limits: Limits,
    current: Option<SkewGerm>,
    failed: bool,
}

impl<'a> Iterates<'a> {
    pub fn new(germ: &'a SkewGerm, limits: Limits) -> Self {
        Iterates {
            germ,
            limits,
            current: None,
            failed: false,
        }
    }
}

impl Iterator for Iterates<'_> {
    type Item = Result<SkewGerm, PolyError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let next = match &self.current {
            None => Ok(self.germ.clone()),
            Some(prev) => {
                let step = || -> Result<SkewGerm, PolyError> {
                    let q = substitute(&self.germ.q, &prev.p, &prev.q, &self.limits)?;
                    let p = compose_univariate(&self.germ.p, &prev.p, &self.limits)?;
                    Ok(SkewGerm::new(p, q).expect("iterate of a germ is a germ"))
                };
                step()
            }
        };
        match &next {
            Ok(g) => self.current = Some(g.clone()),
            Err(_) => self.failed = true,
        }
        Some(next)
    }
}

/// Coefficient of `z^i w^j` in `poly`, zero if absent or the exponents are out of range.
pub fn coefficient_at(poly: &SparsePoly2, i: &num_bigint::BigUint, j: &num_bigint::BigUint) -> Rational {
    match (u64::try_from(i), u64::try_from(j)) {
        (Ok(i), Ok(j)) => poly.coeff(Monomial::new(i, j)).cloned().unwrap_or_else(Rational::zero),
        _ => Rational::zero(),
    }
}
