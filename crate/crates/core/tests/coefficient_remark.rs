use num_bigint::BigInt;
use num_traits::Pow;
use skewrate_core::classify::classify;
use skewrate_core::fixtures::ALL;
use skewrate_core::predict::{gamma_n, may_vanish, predict};
use skewrate_core::verify::{verify_germ, FindingKind, VerifyOptions};
use skewrate_core::{Iterates, Limits, Rational, SkewGerm};

fn germs() -> Vec<SkewGerm> {
    let mut out: Vec<SkewGerm> = ALL.iter().map(|f| f.germ()).collect();
    // non-unit coefficients, so both exponents matter
    for (p, q) in [
        ("2*z^2", "3*z^3*w + z*w^2"),
        ("-z^3", "2*w^2 + z*w"),
        ("1/2*z^2 + z^3", "-3*z*w + w^3 + z^3"),
        ("3*z", "2*z^2*w"),
    ] {
        out.push(SkewGerm::parse(p, q).unwrap());
    }
    out
}

#[test]
fn dominant_coefficient_follows_the_recursion() {
    for f in germs() {
        let case = classify(&f);
        if may_vanish(&case) {
            continue;
        }
        let a = f.a_delta().clone();
        let b = f.b(case.gamma, case.d);
        // c_{n+1} = b · (lead p^n)^γ · c_n^d, with lead p^n = a^{1 + δ + … + δ^{n-1}}
        let mut c = b.clone();
        let mut lead_p = a.clone();
        for (idx, fnth) in Iterates::new(&f, Limits::default()).take(3).enumerate() {
            let n = idx as u32 + 1;
            let fnth = fnth.unwrap();
            let (gn, dn) = (gamma_n(case.delta, case.gamma, case.d, n), BigInt::from(case.d).pow(n));
            let oracle = fnth
                .q()
                .coeff_at(u64::try_from(&gn).unwrap(), u64::try_from(&dn).unwrap());
            assert_eq!(oracle, c, "{} n={}", f.q(), n);

            let a_exp: u32 = (1..n)
                .map(|k| u32::try_from(gamma_n(case.delta, case.gamma, case.d, k)).unwrap())
                .sum();
            let b_exp: u32 = (0..n).map(|k| (case.d as u32).pow(k)).sum();
            let closed: Rational = Pow::pow(&a, a_exp) * Pow::pow(&b, b_exp);
            assert_eq!(closed, oracle);
            assert_eq!(predict(&f, &case, n, &[], Some(false)).dominant_coeff, Some(closed));

            c = &b * Pow::pow(&lead_p, case.gamma as u32) * Pow::pow(&c, case.d as u32);
            lead_p = &a * Pow::pow(&lead_p, case.delta as u32);
        }
        let r = verify_germ(&f, &VerifyOptions::new(3));
        assert!(
            r.findings.iter().all(|x| x.kind != FindingKind::CoefficientMismatch),
            "{}",
            f.q()
        );
    }
}
