use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewrate_core::classify::{classify, r_map, r_step, weight_intervals, CaseData, CaseKind, WeightSet};
use skewrate_core::fixtures::{ALL, G2};
use skewrate_core::newton::NewtonPolygon;
use skewrate_core::predict::shifted_vertex;
use skewrate_core::{Limits, Rational, SkewGerm};

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn gamma_sum(delta: i64, gamma: i64, d: i64, n: u32) -> Rational {
    q((0..n).map(|k| gamma * delta.pow(n - 1 - k) * d.pow(k)).sum())
}

fn random_weight(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(1..=100), rng.gen_range(1..=20))
}

#[test]
fn r_iterates_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut germs: Vec<SkewGerm> = ALL.iter().map(|f| f.germ()).collect();
    // δ = d, where R is a translation
    germs.push(SkewGerm::parse("z^2", "z*w^2").unwrap());
    for f in &germs {
        let case = classify(f);
        let (delta, gamma, d) = (case.delta as i64, case.gamma as i64, case.d as i64);
        for _ in 0..50 {
            let l = random_weight(&mut rng);
            let mut stepped = l.clone();
            for n in 1..=10u32 {
                stepped = r_step(&case, &stepped);
                // n-fold application of R(l) = (γ + l d)/δ
                let mut direct = l.clone();
                for _ in 0..n {
                    direct = (q(gamma) + &direct * q(d)) / q(delta);
                }
                let closed = (gamma_sum(delta, gamma, d, n) + &l * q(d.pow(n))) / q(delta.pow(n));
                assert_eq!(stepped, direct);
                assert_eq!(r_map(&case, &l, n), closed);
                assert_eq!(direct, closed);
                if delta != d {
                    let alpha = frac(gamma, delta - d);
                    let ratio = frac(d, delta);
                    let mut ratio_n = q(1);
                    for _ in 0..n {
                        ratio_n *= &ratio;
                    }
                    assert_eq!(closed, ratio_n * (&l - &alpha) + &alpha);
                } else {
                    assert_eq!(closed, &l + frac(gamma * n as i64, delta));
                }
            }
        }
    }
}

#[test]
fn slope_through_delta_n_is_constant() {
    for delta in 1..=4i64 {
        for gamma in 1..=4i64 {
            for d in 0..=4i64 {
                if delta == d {
                    continue;
                }
                let m = frac(delta - d, gamma);
                for n in 1..=6u32 {
                    let s = (q(delta.pow(n)) - q(d.pow(n))) / gamma_sum(delta, gamma, d, n);
                    assert_eq!(s, m);
                }
            }
        }
    }
}

#[test]
fn previous_vertex_keeps_its_slope() {
    let f = G2.germ();
    let case = classify(&f);
    let prev = case.prev_vertex().unwrap().clone();
    let (a, b) = prev.to_rational_pair();
    let m = (b - q(case.d as i64)) / (q(case.gamma as i64) - a);
    for n in 1..=6u32 {
        let pv = shifted_vertex(&case, &prev, n);
        let (an, bn) = pv.to_rational_pair();
        let gn = gamma_sum(case.delta as i64, case.gamma as i64, case.d as i64, n);
        let dn = q((case.d as i64).pow(n));
        assert_eq!((bn - &dn) / (gn - an), m);
    }
    for (idx, fnth) in skewrate_core::Iterates::new(&f, Limits::default()).take(4).enumerate() {
        let n = idx as u32 + 1;
        let polygon = NewtonPolygon::of(fnth.unwrap().q()).unwrap();
        let top = skewrate_core::newton::LatticePoint::new(
            skewrate_core::predict::gamma_n(case.delta, case.gamma, case.d, n),
            num_bigint::BigUint::from(case.d).pow(n),
        );
        assert_eq!(polygon.previous_vertex(&top), Some(&shifted_vertex(&case, &prev, n)));
    }
}

/// `l` satisfies the defining inequalities of the weight interval of `case` for `f`.
fn in_interval_by_definition(f: &SkewGerm, case: &CaseData, l: &Rational) -> bool {
    let (delta, gamma, d) = (q(case.delta as i64), q(case.gamma as i64), q(case.d as i64));
    let top = &gamma + l * &d;
    let support = || f.q().support().map(|m| q(m.z as i64) + l * q(m.w as i64));
    match case.kind {
        CaseKind::Case1 => true,
        CaseKind::Case2 => l * &delta <= top && support().all(|w| top <= w),
        CaseKind::Case3 => top <= l * &delta && support().all(|w| top <= w),
        CaseKind::Case4 => unreachable!(),
    }
}

fn vertex_weight(case: &CaseData, j: usize, l: &Rational) -> Rational {
    let (i, m) = case.polygon.vertex(j).to_rational_pair();
    i + l * m
}

fn in_first_by_definition(case: &CaseData, l: &Rational) -> bool {
    let top = q(case.gamma as i64) + l * q(case.d as i64);
    (1..case.k).all(|j| top <= vertex_weight(case, j, l))
        && (case.k + 1..=case.s()).all(|j| top < vertex_weight(case, j, l))
        && l * q(case.delta as i64) <= top
}

fn in_second_by_definition(f: &SkewGerm, case: &CaseData, l1: &Rational, l2: &Rational) -> bool {
    let delta = q(case.delta as i64);
    let d = q(case.d as i64);
    let g_t = q(case.gamma as i64) + l1 * &d - l1 * &delta;
    let top = &g_t + l2 * &d;
    top <= l2 * &delta
        && f.q().support().all(|m| {
            let i_t = q(m.z as i64) + l1 * q(m.w as i64) - l1 * &delta;
            top <= i_t + l2 * q(m.w as i64)
        })
}

fn in_ar_by_definition(case: &CaseData, l: &Rational) -> bool {
    let top = q(case.gamma as i64) + l * q(case.d as i64);
    (1..=case.s())
        .filter(|&j| j != case.k)
        .all(|j| top <= vertex_weight(case, j, l))
}

fn samples(case: &CaseData, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut out: Vec<Rational> = (0..200).map(|_| random_weight(rng)).collect();
    let mut marks = vec![case.l1.clone()];
    marks.extend(case.alpha.clone());
    marks.extend(case.l2.finite().cloned());
    marks.extend(case.l1_plus_l2.finite().cloned());
    for m in marks {
        for eps in [frac(-1, 1000), q(0), frac(1, 1000)] {
            let x = &m + eps;
            if x > q(0) {
                out.push(x);
            }
        }
    }
    out
}

#[test]
fn interval_closed_forms_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for fixture in ALL {
        let f = fixture.germ();
        for case in skewrate_core::classify::readings(&f) {
            let intervals = weight_intervals(&case);
            let pts = samples(&case, &mut rng);
            match &intervals.i_f {
                WeightSet::Interval(iv) => {
                    for l in &pts {
                        assert_eq!(
                            iv.contains(l),
                            in_interval_by_definition(&f, &case, l),
                            "{} l={}",
                            fixture.name,
                            l
                        );
                    }
                }
                WeightSet::Rectangle(rect) => {
                    let ar = intervals.i_f_ar.as_ref().unwrap();
                    for l in &pts {
                        assert_eq!(
                            rect.first.contains(l),
                            in_first_by_definition(&case, l),
                            "{} l={}",
                            fixture.name,
                            l
                        );
                        assert_eq!(
                            ar.contains(l),
                            in_ar_by_definition(&case, l),
                            "{} l={}",
                            fixture.name,
                            l
                        );
                    }
                    let firsts: Vec<&Rational> = pts.iter().filter(|l| rect.first.contains(l)).collect();
                    assert!(!firsts.is_empty());
                    for l2 in &pts {
                        for l1 in &firsts {
                            let sum = *l1 + l2;
                            assert_eq!(
                                rect.contains(l1, &sum),
                                in_second_by_definition(&f, &case, l1, l2),
                                "{} l1={} l2={}",
                                fixture.name,
                                l1,
                                l2
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn interval_is_invariant_under_iteration() {
    let f = G2.germ();
    let case = classify(&f);
    let base = weight_intervals(&case);
    let WeightSet::Interval(iv) = &base.i_f else {
        panic!("Case 2 has an interval")
    };
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let pts = samples(&case, &mut rng);
    for n in 1..=3u32 {
        let fnth = f.iterate(n, &Limits::default()).unwrap();
        let case_n = classify(&fnth);
        assert_eq!(case_n.kind, CaseKind::Case2);
        assert_eq!(weight_intervals(&case_n).i_f, base.i_f);
        for l in &pts {
            assert_eq!(
                iv.contains(l),
                in_interval_by_definition(&fnth, &case_n, l),
                "n={} l={}",
                n,
                l
            );
        }
    }
}
