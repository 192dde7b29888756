//! Seeded random germs and campaigns over them.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`), so a
//! config fixes the whole germ sequence. A configurable share of draws is built so
//! that `δ` equals an intercept of the Newton polygon; a third of those are built so
//! that the edge sum of the `d = 0` boundary configuration is zero, which makes the
//! dominant term cancel at `n = 2`. A fifth of the remaining draws place `δ` between
//! the intercepts of a middle vertex, since Case 4 is rare among uniform draws.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify, CaseKind};
use crate::germ::SkewGerm;
use crate::newton::NewtonPolygon;
use crate::poly::{Limits, Monomial, SparsePoly2};
use crate::rational::{int, Rational};
use crate::verify::{verify_germ, VerificationReport, VerifyOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub germ_count: usize,
    pub delta_max: u64,
    /// Maximal number of support points of `q`.
    pub support_max: usize,
    /// Coefficients are drawn from `[coeff_min, coeff_max] \ {0}`.
    pub coeff_min: i64,
    pub coeff_max: i64,
    pub n_max: u32,
    /// Total-degree guard for the iterates; germs that exceed it are skipped.
    pub degree_cap: u64,
    /// Support points of `q` satisfy `1 ≤ i + j ≤ total_degree_max`.
    pub total_degree_max: u64,
    /// Percentage of draws placed on a polygon intercept.
    pub boundary_bias: u32,
    /// Extra draws allowed to reach full coverage after `germ_count` germs.
    pub coverage_retry_cap: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            germ_count: 200,
            delta_max: 3,
            support_max: 6,
            coeff_min: -3,
            coeff_max: 3,
            n_max: 3,
            degree_cap: 10_000,
            total_degree_max: 4,
            boundary_bias: 25,
            coverage_retry_cap: 2_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrawKind {
    Plain,
    Boundary,
    Vanishing,
    /// `δ` between the intercepts of a middle vertex, which selects Case 4.
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzFailure {
    pub index: usize,
    pub p: String,
    pub q: String,
    pub n: u32,
    pub reading: usize,
    pub tag: String,
    pub claim: String,
    pub observed: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzSummary {
    pub seed: u64,
    pub generator: &'static str,
    pub germs_run: usize,
    pub skipped_resource: usize,
    /// Primary case counts, Case 1 to Case 4.
    pub case_counts: [usize; 4],
    pub boundary_germs: usize,
    pub vanishing_events: usize,
    pub claims_checked: usize,
    pub findings: usize,
    pub extra_draws: usize,
    pub coverage_met: bool,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzSummary {
    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }
}

/// Deterministic germ source.
pub struct GermGenerator {
    rng: ChaCha8Rng,
    config: FuzzConfig,
}

impl GermGenerator {
    pub fn new(config: &FuzzConfig) -> Self {
        GermGenerator {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config: config.clone(),
        }
    }

    fn coeff(&mut self) -> Rational {
        let (lo, hi) = (self.config.coeff_min, self.config.coeff_max);
        loop {
            let c = self.rng.gen_range(lo..=hi);
            if c != 0 {
                return int(c);
            }
        }
    }

    fn p(&mut self, delta: u64) -> SparsePoly2 {
        let mut p = SparsePoly2::monomial(Monomial::new(delta, 0), self.coeff());
        if self.rng.gen_bool(0.5) {
            let extra = delta + self.rng.gen_range(1..=2);
            p = p.add_poly(&SparsePoly2::monomial(Monomial::new(extra, 0), self.coeff()));
        }
        p
    }

    fn support(&mut self, count: usize) -> Vec<Monomial> {
        let t = self.config.total_degree_max.max(1);
        let mut pts: Vec<Monomial> = Vec::new();
        while pts.len() < count {
            let deg = self.rng.gen_range(1..=t);
            let i = self.rng.gen_range(0..=deg);
            let m = Monomial::new(i, deg - i);
            if !pts.contains(&m) {
                pts.push(m);
            }
            if pts.len() as u64 >= (t * (t + 3)) / 2 {
                break;
            }
        }
        pts
    }

    fn q_from(&mut self, support: &[Monomial]) -> SparsePoly2 {
        let mut q = SparsePoly2::zero();
        for m in support {
            let c = self.coeff();
            q = q.add_poly(&SparsePoly2::monomial(*m, c));
        }
        q
    }

    pub fn draw_plain(&mut self) -> SkewGerm {
        let delta = self.rng.gen_range(1..=self.config.delta_max);
        let count = self.rng.gen_range(1..=self.config.support_max.max(1));
        let support = self.support(count);
        let q = self.q_from(&support);
        let p = self.p(delta);
        SkewGerm::new(p, q).expect("generated germs are valid")
    }

    /// A germ whose `δ` equals an integral intercept of `N(q)`.
    pub fn draw_boundary(&mut self) -> Option<SkewGerm> {
        for _ in 0..64 {
            let count = self.rng.gen_range(2..=self.config.support_max.max(2));
            let support = self.support(count);
            let q = self.q_from(&support);
            let polygon = NewtonPolygon::of(&q).expect("nonzero");
            let hits: Vec<u64> = polygon
                .intercepts()
                .iter()
                .filter(|t| t.is_integer() && **t >= Rational::one())
                .filter_map(|t| u64::try_from(t.to_integer()).ok())
                .filter(|t| *t <= self.config.delta_max)
                .collect();
            if let Some(&delta) = hits.choose(&mut self.rng) {
                let p = self.p(delta);
                return Some(SkewGerm::new(p, q).expect("generated germs are valid"));
            }
        }
        None
    }

    /// A germ whose dominant term is a middle vertex of a polygon with `s ≥ 3`.
    pub fn draw_interior(&mut self) -> Option<SkewGerm> {
        let one = Rational::one();
        for _ in 0..64 {
            let count = self.rng.gen_range(3..=self.config.support_max.max(3));
            let support = self.support(count);
            let q = self.q_from(&support);
            let polygon = NewtonPolygon::of(&q).expect("nonzero");
            let s = polygon.len();
            if s < 3 {
                continue;
            }
            let k = self.rng.gen_range(2..s);
            let hi = polygon.intercept(k - 1).floor().to_integer();
            let lo = polygon.intercept(k).ceil().to_integer().max(one.to_integer());
            let hi = hi.min(self.config.delta_max.into());
            if lo > hi {
                continue;
            }
            let lo = u64::try_from(lo).expect("positive");
            let hi = u64::try_from(hi).expect("positive");
            let delta = self.rng.gen_range(lo..=hi);
            let p = self.p(delta);
            return Some(SkewGerm::new(p, q).expect("generated germs are valid"));
        }
        None
    }

    /// `d = 0`, `δ` on the last edge, one edge coefficient solved so the edge sum vanishes.
    pub fn draw_vanishing(&mut self) -> SkewGerm {
        loop {
            if let Some(g) = self.try_vanishing() {
                return g;
            }
        }
    }

    fn try_vanishing(&mut self) -> Option<SkewGerm> {
        let delta = self.rng.gen_range(1..=self.config.delta_max);
        let gamma = self.rng.gen_range(1..=self.config.total_degree_max.max(1));
        // edge points: δ I + γ J = γ δ with 0 ≤ I < γ
        let step = delta / delta.gcd(&gamma);
        let mut edge: Vec<Monomial> = (1..=delta / step)
            .map(|t| t * step)
            .map(|j| Monomial::new(gamma - gamma * j / delta, j))
            .collect();
        let p = self.p(delta);
        let a = p.coeff_at(delta, 0);
        let b_g0 = self.coeff();
        let mut q = SparsePoly2::monomial(Monomial::new(gamma, 0), b_g0.clone());
        edge.shuffle(&mut self.rng);
        let solved = edge.pop().expect("(0, δ) is an edge point");
        let mut sum = b_g0.clone() * Pow::pow(&a, u32::try_from(gamma).expect("small"));
        for m in &edge {
            if self.rng.gen_bool(0.6) {
                let c = self.coeff();
                sum += &c * Pow::pow(&a, m.z as u32) * Pow::pow(&b_g0, m.w as u32);
                q = q.add_poly(&SparsePoly2::monomial(*m, c));
            }
        }
        let scale = Pow::pow(&a, solved.z as u32) * Pow::pow(&b_g0, solved.w as u32);
        let c = -sum / scale;
        if c.is_zero() {
            return None;
        }
        q = q.add_poly(&SparsePoly2::monomial(solved, c));
        // points strictly above the edge
        let extra = self.rng.gen_range(0..=2usize);
        for _ in 0..extra {
            let j = self.rng.gen_range(1..=delta + 1);
            let i_min = (gamma * delta).saturating_sub(gamma * j).div_ceil(delta);
            let i = i_min + self.rng.gen_range(1..=2);
            let c = self.coeff();
            q = q.add_poly(&SparsePoly2::monomial(Monomial::new(i, j), c));
        }
        Some(SkewGerm::new(p, q).expect("generated germs are valid"))
    }

    pub fn draw(&mut self, kind: DrawKind) -> SkewGerm {
        match kind {
            DrawKind::Plain => self.draw_plain(),
            DrawKind::Boundary => self.draw_boundary().unwrap_or_else(|| self.draw_plain()),
            DrawKind::Vanishing => self.draw_vanishing(),
            DrawKind::Interior => self.draw_interior().unwrap_or_else(|| self.draw_plain()),
        }
    }

    /// The kind of the next scheduled draw.
    pub fn next_kind(&mut self) -> DrawKind {
        if self.rng.gen_range(0..100) < self.config.boundary_bias {
            if self.rng.gen_range(0..3) == 0 {
                DrawKind::Vanishing
            } else {
                DrawKind::Boundary
            }
        } else if self.rng.gen_range(0..5) == 0 {
            DrawKind::Interior
        } else {
            DrawKind::Plain
        }
    }
}

fn is_boundary(report: &VerificationReport) -> bool {
    report
        .readings
        .iter()
        .any(|c| c.boundary.delta_eq_t_upper || c.boundary.delta_eq_t_lower)
}

fn kind_index(kind: CaseKind) -> usize {
    match kind {
        CaseKind::Case1 => 0,
        CaseKind::Case2 => 1,
        CaseKind::Case3 => 2,
        CaseKind::Case4 => 3,
    }
}

/// Runs a campaign; the result depends only on `config`.
pub fn fuzz(config: &FuzzConfig) -> FuzzSummary {
    let mut summary = FuzzSummary {
        seed: config.seed,
        generator: "ChaCha8",
        ..FuzzSummary::default()
    };
    if config.germ_count == 0 {
        summary.coverage_met = false;
        return summary;
    }
    let mut gen = GermGenerator::new(config);
    let options = VerifyOptions {
        n_max: config.n_max,
        limits: Limits {
            max_degree: config.degree_cap,
            ..Limits::default()
        },
        extra_weights: Vec::new(),
    };
    let covered =
        |s: &FuzzSummary| s.case_counts.iter().all(|c| *c > 0) && s.boundary_germs > 0 && s.vanishing_events > 0;
    let mut index = 0;
    loop {
        let kind = if index < config.germ_count {
            gen.next_kind()
        } else if covered(&summary) || summary.extra_draws >= config.coverage_retry_cap {
            break;
        } else {
            summary.extra_draws += 1;
            if summary.vanishing_events == 0 {
                DrawKind::Vanishing
            } else if summary.boundary_germs == 0 {
                DrawKind::Boundary
            } else if summary.case_counts[3] == 0 {
                DrawKind::Interior
            } else {
                DrawKind::Plain
            }
        };
        let germ = gen.draw(kind);
        run_one(&mut summary, index, &germ, &options);
        index += 1;
    }
    summary.coverage_met = covered(&summary);
    summary
}

fn run_one(summary: &mut FuzzSummary, index: usize, germ: &SkewGerm, options: &VerifyOptions) {
    let report = verify_germ(germ, options);
    if report.resource_stop.is_some() {
        summary.skipped_resource += 1;
        return;
    }
    summary.germs_run += 1;
    summary.case_counts[kind_index(classify(germ).kind)] += 1;
    if is_boundary(&report) {
        summary.boundary_germs += 1;
    }
    summary.vanishing_events += report.vanishing.len();
    summary.claims_checked += report.claim_count();
    summary.findings += report.findings.len();
    let p = germ.p().to_string();
    let q = germ.q().to_string();
    for (step, o) in report.failures() {
        summary.failures.push(FuzzFailure {
            index,
            p: p.clone(),
            q: q.clone(),
            n: step.n,
            reading: step.reading,
            tag: o.tag.to_string(),
            claim: o.claim.clone(),
            observed: o.observed.clone(),
        });
    }
    for l in report.failed_lemmas() {
        summary.failures.push(FuzzFailure {
            index,
            p: p.clone(),
            q: q.clone(),
            n: 0,
            reading: 0,
            tag: l.name.to_string(),
            claim: l.detail.clone(),
            observed: l.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predict::vanishing_sum;

    #[test]
    fn vanishing_draws_cancel() {
        let mut gen = GermGenerator::new(&FuzzConfig::default());
        for _ in 0..30 {
            let g = gen.draw_vanishing();
            let c = classify(&g);
            assert_eq!((c.kind, c.d), (CaseKind::Case2, 0), "{} {}", g.p(), g.q());
            assert!(c.boundary.delta_eq_t_upper);
            assert!(vanishing_sum(&g, &c).unwrap().0.is_zero());
        }
    }

    #[test]
    fn boundary_draws_hit_an_intercept() {
        let mut gen = GermGenerator::new(&FuzzConfig::default());
        let g = gen.draw_boundary().expect("found within the attempt budget");
        let c = classify(&g);
        let delta = Rational::from_integer(g.delta().into());
        assert!(c.polygon.intercepts().contains(&delta));
    }

    #[test]
    fn empty_campaign() {
        let s = fuzz(&FuzzConfig {
            germ_count: 0,
            ..FuzzConfig::default()
        });
        assert_eq!((s.germs_run, s.failure_count()), (0, 0));
    }
}
