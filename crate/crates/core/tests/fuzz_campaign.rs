use skewrate_core::classify::classify;
use skewrate_core::fuzz::{fuzz, DrawKind, FuzzConfig, GermGenerator};

fn small(seed: u64) -> FuzzConfig {
    FuzzConfig {
        seed,
        germ_count: 40,
        boundary_bias: 40,
        ..FuzzConfig::default()
    }
}

#[test]
fn identical_configs_give_identical_summaries() {
    assert_eq!(fuzz(&small(3)), fuzz(&small(3)));
    let mut a = GermGenerator::new(&small(5));
    let mut b = GermGenerator::new(&small(5));
    for _ in 0..50 {
        let (ka, kb) = (a.next_kind(), b.next_kind());
        assert_eq!(ka, kb);
        assert_eq!(a.draw(ka), b.draw(kb));
    }
}

#[test]
fn small_campaigns_have_no_failures() {
    for seed in 0..4 {
        let s = fuzz(&small(seed));
        assert_eq!(s.generator, "ChaCha8");
        assert!(s.failures.is_empty(), "seed {}: {:?}", seed, s.failures);
        assert_eq!(s.germs_run + s.skipped_resource, 40 + s.extra_draws);
    }
}

#[test]
fn empty_campaign() {
    let s = fuzz(&FuzzConfig {
        germ_count: 0,
        ..FuzzConfig::default()
    });
    assert_eq!((s.germs_run, s.claims_checked, s.failures.len()), (0, 0, 0));
}

#[test]
fn draws_respect_the_config() {
    let config = small(9);
    let mut g = GermGenerator::new(&config);
    for kind in [
        DrawKind::Plain,
        DrawKind::Boundary,
        DrawKind::Vanishing,
        DrawKind::Interior,
    ] {
        for _ in 0..20 {
            let f = g.draw(kind);
            assert!(f.delta() <= config.delta_max);
            assert!(f.q().len() <= config.support_max);
            for (m, c) in f.q().terms() {
                assert!(m.z + m.w >= 1);
                let c = i64::try_from(c.to_integer()).unwrap();
                assert!(c != 0 && config.coeff_min <= c && c <= config.coeff_max || kind == DrawKind::Vanishing);
            }
            let _ = classify(&f);
        }
    }
}
