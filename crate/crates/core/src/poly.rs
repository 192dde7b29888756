//! Sparse bivariate polynomials in `z` and `w` with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` ordered graded-lexicographically by `(i + j, i)`,
//! so iteration order (and therefore every printed form) is deterministic.
//! Exponents are machine words; every operation that can grow them is guarded by
//! [`Limits`], which keeps materialized degrees far below `u64::MAX`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;

/// Exponent pair `(i, j)` of the monomial `z^i w^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub z: u64,
    pub w: u64,
}

impl Monomial {
    pub const fn new(z: u64, w: u64) -> Self {
        Monomial { z, w }
    }

    pub fn degree(&self) -> u128 {
        self.z as u128 + self.w as u128
    }

    fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        Some(Monomial {
            z: self.z.checked_add(other.z)?,
            w: self.w.checked_add(other.w)?,
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.z.cmp(&other.z))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Resource guard for polynomial growth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_terms: usize,
    pub max_degree: u64,
}

impl Limits {
    pub const DEFAULT_MAX_TERMS: usize = 1_000_000;
    pub const DEFAULT_MAX_DEGREE: u64 = 1_000_000;

    pub const fn unbounded() -> Self {
        Limits {
            max_terms: usize::MAX,
            max_degree: u64::MAX,
        }
    }

    fn check_degree(&self, degree: u128) -> Result<(), PolyError> {
        if degree > self.max_degree as u128 {
            return Err(PolyError::ResourceExceeded {
                resource: Resource::TotalDegree,
                limit: self.max_degree as u128,
            });
        }
        Ok(())
    }

    fn check_terms(&self, terms: usize) -> Result<(), PolyError> {
        if terms > self.max_terms {
            return Err(PolyError::ResourceExceeded {
                resource: Resource::TermCount,
                limit: self.max_terms as u128,
            });
        }
        Ok(())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: Self::DEFAULT_MAX_TERMS,
            max_degree: Self::DEFAULT_MAX_DEGREE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resource {
    TermCount,
    TotalDegree,
}

impl core::fmt::Display for Resource {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Resource::TermCount => f.write_str("term count"),
            Resource::TotalDegree => f.write_str("total degree"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("resource limit exceeded: {resource} above {limit}")]
    ResourceExceeded { resource: Resource, limit: u128 },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
}

/// Orders of a nonzero polynomial: total `c`, and in each variable separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orders {
    pub c: u64,
    pub ord_z: u64,
    pub ord_w: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct SparsePoly2 {
    terms: BTreeMap<Monomial, Rational>,
}

fn mul_coeff(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        Rational::new_raw(a.numer() * b.numer(), BigInt::one())
    } else {
        a * b
    }
}

fn add_coeff(acc: &mut Rational, v: Rational) {
    if acc.denom().is_one() && v.denom().is_one() {
        let (n, _) = v.into_raw();
        let sum = acc.numer() + n;
        *acc = Rational::new_raw(sum, BigInt::one());
    } else {
        *acc += v;
    }
}

impl SparsePoly2 {
    pub fn zero() -> Self {
        SparsePoly2 { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::new(0, 0), c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly2 { terms }
    }

    pub fn z() -> Self {
        Self::monomial(Monomial::new(1, 0), Rational::one())
    }

    pub fn w() -> Self {
        Self::monomial(Monomial::new(0, 1), Rational::one())
    }

    /// Builds a polynomial from possibly repeated terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            match out.get_mut(&m) {
                Some(acc) => add_coeff(acc, c),
                None => {
                    out.insert(m, c);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        SparsePoly2 { terms: out }
    }

    fn from_accumulator(acc: HashMap<Monomial, Rational>) -> Self {
        SparsePoly2 {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lexicographic order of `(i + j, i)`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, m: Monomial) -> Option<&Rational> {
        self.terms.get(&m)
    }

    pub fn coeff_at(&self, z: u64, w: u64) -> Rational {
        self.terms
            .get(&Monomial::new(z, w))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u128 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_z(&self) -> u64 {
        self.terms.keys().map(|m| m.z).max().unwrap_or(0)
    }

    pub fn degree_w(&self) -> u64 {
        self.terms.keys().map(|m| m.w).max().unwrap_or(0)
    }

    pub fn depends_on_w(&self) -> bool {
        self.terms.keys().any(|m| m.w > 0)
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.contains_key(&Monomial::new(0, 0))
    }

    pub fn orders(&self) -> Result<Orders, PolyError> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(PolyError::ZeroPolynomial)?;
        let mut ord = Orders {
            c: first.z + first.w,
            ord_z: first.z,
            ord_w: first.w,
        };
        for m in it {
            ord.c = ord.c.min(m.z + m.w);
            ord.ord_z = ord.ord_z.min(m.z);
            ord.ord_w = ord.ord_w.min(m.w);
        }
        Ok(ord)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly2 {
            terms: self.terms.iter().map(|(m, v)| (*m, mul_coeff(v, c))).collect(),
        }
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            match out.get_mut(m) {
                Some(acc) => add_coeff(acc, c.clone()),
                None => {
                    out.insert(*m, c.clone());
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        SparsePoly2 { terms: out }
    }

    pub fn checked_mul(&self, other: &Self, limits: &Limits) -> Result<Self, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        limits.check_degree(self.total_degree() + other.total_degree())?;
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.len().saturating_mul(other.len()).min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(*mb).ok_or(PolyError::ResourceExceeded {
                    resource: Resource::TotalDegree,
                    limit: limits.max_degree as u128,
                })?;
                let v = mul_coeff(ca, cb);
                match acc.get_mut(&m) {
                    Some(slot) => add_coeff(slot, v),
                    None => {
                        acc.insert(m, v);
                        limits.check_terms(acc.len())?;
                    }
                }
            }
        }
        Ok(Self::from_accumulator(acc))
    }

    /// `self^k` by repeated squaring; `self^0 = 1`.
    pub fn checked_pow(&self, k: u64, limits: &Limits) -> Result<Self, PolyError> {
        if k == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        limits.check_degree(self.total_degree().saturating_mul(k as u128))?;
        if self.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("one term");
            let m = Monomial::new(m.z * k, m.w * k);
            return Ok(Self::monomial(m, num_traits::pow::pow(c.clone(), k as usize)));
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = result.checked_mul(&base, limits)?;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.checked_mul(&base, limits)?;
        }
        Ok(result)
    }

    /// Splits into coefficients of powers of `w`: `self = Σ_j c_j(z) w^j`.
    /// Returns `(j, c_j)` pairs in increasing `j`, with `c_j` depending only on `z`.
    pub fn w_coefficients(&self) -> Vec<(u64, SparsePoly2)> {
        let mut by_w: BTreeMap<u64, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_w.entry(m.w).or_default().insert(Monomial::new(m.z, 0), c.clone());
        }
        by_w.into_iter().map(|(j, terms)| (j, SparsePoly2 { terms })).collect()
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter<F: FnMut(&Monomial) -> bool>(&self, mut keep: F) -> Self {
        SparsePoly2 {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Applies an exponent map term-by-term; the map must be injective on the support.
    pub fn map_exponents<F>(&self, mut f: F) -> Self
    where
        F: FnMut(Monomial) -> Monomial,
    {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(*m), c.clone())))
    }
}

/// The three arithmetic operations exposed on polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Pow(u64),
}

/// `a + b`, `a · b`, or `a^k` (ignoring `b`), under the given resource limits.
pub fn poly_arith(a: &SparsePoly2, b: &SparsePoly2, op: ArithOp, limits: &Limits) -> Result<SparsePoly2, PolyError> {
    match op {
        ArithOp::Add => {
            let sum = a.add_poly(b);
            limits.check_terms(sum.len())?;
            limits.check_degree(sum.total_degree())?;
            Ok(sum)
        }
        ArithOp::Mul => a.checked_mul(b, limits),
        ArithOp::Pow(k) => a.checked_pow(k, limits),
    }
}

impl Add for &SparsePoly2 {
    type Output = SparsePoly2;

    fn add(self, rhs: &SparsePoly2) -> SparsePoly2 {
        self.add_poly(rhs)
    }
}

impl Neg for &SparsePoly2 {
    type Output = SparsePoly2;

    fn neg(self) -> SparsePoly2 {
        SparsePoly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Sub for &SparsePoly2 {
    type Output = SparsePoly2;

    fn sub(self, rhs: &SparsePoly2) -> SparsePoly2 {
        self.add_poly(&-rhs)
    }
}

impl Mul for &SparsePoly2 {
    type Output = SparsePoly2;

    fn mul(self, rhs: &SparsePoly2) -> SparsePoly2 {
        self.checked_mul(rhs, &Limits::unbounded())
            .expect("unbounded multiplication")
    }
}
