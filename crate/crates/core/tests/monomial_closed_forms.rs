//! Monomial germs `(z^δ, z^γ w^d)`: the iterates are monomials and every rate has a closed form.

use num_bigint::BigInt;
use skewrate_core::classify::{classify, CaseKind};
use skewrate_core::predict::predict;
use skewrate_core::{Limits, Rational, SkewGerm};

fn r(n: u128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `γ(δ^{n-1} + δ^{n-2} d + … + d^{n-1})` by direct summation.
fn gamma_sum(delta: u128, gamma: u128, d: u128, n: u32) -> u128 {
    (0..n).map(|k| gamma * delta.pow(n - 1 - k) * d.pow(k)).sum()
}

fn check(delta: u64, gamma: u64, d: u64) {
    let q = match (gamma, d) {
        (0, _) => format!("w^{}", d),
        (_, 0) => format!("z^{}", gamma),
        _ => format!("z^{}*w^{}", gamma, d),
    };
    let f = SkewGerm::parse(&format!("z^{}", delta), &q).unwrap();
    let case = classify(&f);
    assert_eq!(case.kind, CaseKind::Case1);
    let (dl, g, dd) = (delta as u128, gamma as u128, d as u128);
    for (idx, fnth) in skewrate_core::Iterates::new(&f, Limits::default()).take(6).enumerate() {
        let n = idx as u32 + 1;
        let fnth = fnth.unwrap();
        let gn = gamma_sum(dl, g, dd, n);
        let (dn, deltan) = (dd.pow(n), dl.pow(n));
        assert_eq!(fnth.q().len(), 1);
        assert_eq!(fnth.q().coeff_at(gn as u64, dn as u64), r(1));
        let c_qn = fnth.q().orders().unwrap().c as u128;
        let c_fn = c_qn.min(fnth.p().orders().unwrap().c as u128);
        assert_eq!(c_qn, gn + dn);
        assert_eq!(c_fn, deltan.min(gn + dn));

        let (cq, cf, dq) = (r(c_qn), r(c_fn), r(deltan));
        if delta != d {
            let alpha = Rational::new(BigInt::from(gamma), BigInt::from(delta as i64 - d as i64));
            // γ_n = α(δ^n − d^n), so γ_n + d^n = αδ^n + (1 − α)d^n
            assert_eq!(r(gn), &alpha * (r(deltan) - r(dn)));
            assert_eq!(
                cq,
                &alpha * r(deltan) + (Rational::from_integer(1.into()) - &alpha) * r(dn)
            );
            if gamma > 0 && d > 0 && delta > d {
                let one = Rational::from_integer(1.into());
                let ad = &alpha * &dq;
                if alpha < one {
                    assert!(ad < cq && cq < dq);
                    assert!(ad < cf && cf < dq);
                } else if alpha > one {
                    assert!(dq < cq && cq < ad);
                    assert_eq!(cf, dq);
                } else {
                    assert_eq!(cq, dq);
                    assert_eq!(cf, dq);
                }
            }
            if gamma > 0 && d > 0 && delta < d {
                let one = Rational::from_integer(1.into());
                assert!(dq < r(dn) && r(dn) < cq && cq < (one - &alpha) * r(dn));
                assert_eq!(cf, dq);
            }
        } else {
            assert_eq!(gn, n as u128 * g * dl.pow(n - 1));
            if gamma > 0 {
                assert!(dq < cq);
                assert_eq!(cf, dq);
            }
        }
        if gamma == 0 {
            assert_eq!(c_qn, dn);
            assert_eq!(c_fn, deltan.min(dn));
        }
        if d == 0 {
            assert_eq!(c_qn, g * dl.pow(n - 1));
            assert_eq!(c_fn, dl.min(g) * dl.pow(n - 1));
        }

        let p = predict(&f, &case, n, &[], Some(false));
        assert_eq!(p.cqn_exact(), Some(&cq), "δ={} γ={} d={} n={}", delta, gamma, d, n);
        assert_eq!(
            p.cfn.exact_value(),
            Some(&cf),
            "δ={} γ={} d={} n={}",
            delta,
            gamma,
            d,
            n
        );
    }
}

#[test]
fn closed_forms_on_grid() {
    for delta in 1..=4 {
        for gamma in 0..=4 {
            for d in 0..=4 {
                if gamma + d >= 1 {
                    check(delta, gamma, d);
                }
            }
        }
    }
}
