use wva_core::analytic::{
    detect_probability_recycled, discarded_meter, fail_probability, meter_orthogonal,
    meter_postselected, postselection_probability, qfi_standard, recycled_meter, QfiForm,
    RecycleVariant,
};
use wva_core::grid::standard_grid;
use wva_core::oracle::{qfi_numeric, recycle_truncated, single_pass_meters, DEFAULT_MAX_PASSES};
use wva_core::readout::default_fd_step;
use wva_core::{ghz_states, make_config, weak_value, RawConfig};

#[test]
fn single_pass_states_match_on_grid() {
    for cfg in standard_grid() {
        let (success, fail) = single_pass_meters(&cfg).unwrap();
        assert!(
            success.max_abs_diff(&meter_postselected(&cfg)) < 1e-12,
            "{cfg:?}"
        );
        assert!(
            fail.max_abs_diff(&meter_orthogonal(&cfg)) < 1e-12,
            "{cfg:?}"
        );
        assert!((success.norm_sqr() - postselection_probability(&cfg)).abs() < 1e-12);
        assert!((fail.norm_sqr() - fail_probability(&cfg)).abs() < 1e-12);
    }
}

#[test]
fn recycled_states_match_on_grid() {
    for cfg in standard_grid() {
        let sum = recycle_truncated(&cfg, 1e-13, DEFAULT_MAX_PASSES).unwrap();
        let detected = recycled_meter(&cfg, RecycleVariant::Exact).unwrap();
        let discarded = discarded_meter(&cfg, RecycleVariant::Exact).unwrap();
        assert!(sum.detected.max_abs_diff(&detected) < 1e-10, "{cfg:?}");
        assert!(sum.discarded.max_abs_diff(&discarded) < 1e-10, "{cfg:?}");
        assert!(sum.report.tail_norm < 1e-13 * (1.0 - sum.report.last_ratio));
        if cfg.gamma() == 0.0 {
            let total = sum.detected.norm_sqr() + sum.discarded.norm_sqr();
            assert!((total - 1.0).abs() < 1e-12, "{cfg:?}");
        }
    }
}

#[test]
fn truncation_ratio_is_dominant_round_trip_eigenvalue() {
    let cfg = make_config(RawConfig {
        n: 1,
        g: 1e-3,
        phi: 0.1,
        r: 0.9,
        gamma: 0.0,
        q_keep_to_discard: 0.0,
        q_discard_to_keep: 0.0,
    })
    .unwrap();
    let sum = recycle_truncated(&cfg, 1e-12, DEFAULT_MAX_PASSES).unwrap();
    // Two close eigenvalues rL cos(n phi -+ n g); the dominant one wins slowly.
    let dominant = 0.9 * (0.1f64 - 1e-3).cos();
    let other = 0.9 * (0.1f64 + 1e-3).cos();
    assert!(sum.report.last_ratio <= dominant + 1e-12);
    assert!(sum.report.last_ratio >= other - 1e-12);
    assert!((sum.report.last_ratio - dominant).abs() < 0.5 * (dominant - other));

    let single = make_config(RawConfig {
        r: 0.0,
        ..cfg.raw()
    })
    .unwrap();
    let sum = recycle_truncated(&single, 1e-12, DEFAULT_MAX_PASSES).unwrap();
    assert_eq!(sum.report.passes_used, 1);
}

#[test]
fn ghz_overlaps_and_weak_value() {
    for n in 1..=8u32 {
        for k in 1..=5 {
            let phi = std::f64::consts::FRAC_PI_2 / f64::from(n) * f64::from(k) / 6.0;
            let states = ghz_states(n, phi).unwrap();
            let n_phi = f64::from(n) * phi;
            let overlap = states.postselected.inner(&states.initial).unwrap();
            assert!(overlap.re.abs() < 1e-15 && (overlap.im - n_phi.sin()).abs() < 1e-15);
            let overlap = states.orthogonal.inner(&states.initial).unwrap();
            assert!((overlap.re - n_phi.cos()).abs() < 1e-15 && overlap.im.abs() < 1e-15);
            let ortho = states.postselected.inner(&states.orthogonal).unwrap();
            assert!(ortho.norm() < 1e-15);

            let a_psi = states.initial.apply_collective_z();
            let explicit = states.postselected.inner(&a_psi).unwrap()
                / states.postselected.inner(&states.initial).unwrap();
            assert!((explicit - weak_value(n, phi).unwrap()).norm() < 1e-12 * explicit.norm());
        }
    }
}

#[test]
fn numeric_qfi_matches_derived_form() {
    for cfg in standard_grid() {
        if cfg.r() != 0.0 || cfg.gamma() != 0.0 {
            continue;
        }
        let numeric = qfi_numeric(
            |g| single_pass_meters(&cfg.with_g(g)).map(|(s, _)| s),
            cfg.g(),
            default_fd_step(cfg.g()),
        )
        .unwrap();
        let derived = qfi_standard(&cfg, QfiForm::Derived);
        assert!((numeric.value - derived).abs() <= 1e-6 * derived, "{cfg:?}");
    }
}

#[test]
fn recycled_split_matches_truncated_norms_at_leading_order() {
    for cfg in standard_grid() {
        if cfg.g() > 1e-5 {
            continue;
        }
        let sum = recycle_truncated(&cfg, 1e-13, DEFAULT_MAX_PASSES).unwrap();
        let (d, r) = (sum.detected.norm_sqr(), sum.discarded.norm_sqr());
        let pc = detect_probability_recycled(&cfg).unwrap();
        assert!((d / (d + r) - pc).abs() < 1e-6, "{cfg:?}");
    }
}
