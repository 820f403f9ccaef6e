use harmsum_core::blocks::{BallPoint, BlockFamily, DiskFamily};
use harmsum_core::construction::{build_plan, Band, HarmonicSum, PlanConfig};
use harmsum_core::harness::{verify_construction, SampleSpec};
use harmsum_core::weights::WeightFunction;
use harmsum_core::Error;
use proptest::prelude::*;

fn beta_one() -> HarmonicSum<DiskFamily> {
    let w = WeightFunction::power(1.0).unwrap();
    let plan = build_plan(&w, &DiskFamily, &PlanConfig::default()).unwrap();
    HarmonicSum::new(plan, DiskFamily).unwrap()
}

#[test]
fn verification_passes_for_power_weights() {
    for beta in [0.5, 1.0, 2.0] {
        let w = WeightFunction::power(beta).unwrap();
        let plan = build_plan(&w, &DiskFamily, &PlanConfig::default()).unwrap();
        let hs = HarmonicSum::new(plan, DiskFamily).unwrap();
        let spec = SampleSpec { radii_per_band: 3, directions: 16, ..SampleSpec::default() };
        let r = verify_construction(&hs, &w, &spec).unwrap();
        assert!(r.all_checks_pass(), "beta = {beta}");
    }
}

#[test]
fn exp_power_is_refused() {
    let w = WeightFunction::exp_power(1.0).unwrap();
    let err = build_plan(&w, &DiskFamily, &PlanConfig::default()).unwrap_err();
    assert!(matches!(err, Error::NotDoubling(_)), "{err:?}");
}

#[test]
fn sum_matches_direct_block_evaluation() {
    let hs = beta_one();
    let plan = &hs.plan;
    let x = BallPoint::planar(-5.5, 0.3).unwrap();
    let eval = hs.evaluate(&x, None).unwrap();
    // direct: 1 + sum over q, j of |sum_{k <= m+T} A^i u_q(n_i)|, i = kJ + j
    let m = match eval.band {
        Band::Shell { m, .. } => m as i64,
        Band::Center => -1,
    };
    let kmax = (m + plan.t as i64) as u64;
    let mut total = 1.0;
    for q in 1..=2 {
        for j in 0..plan.j as u64 {
            let mut f = 0.0;
            for k in 0..=kmax {
                let idx = (k * plan.j as u64 + j) as usize;
                f += plan.a.powi(idx as i32) * DiskFamily.eval(q, plan.n[idx], &x);
            }
            total += f.abs();
        }
    }
    assert!((eval.log_s - total.ln()).abs() < 1e-10, "{} vs {}", eval.log_s, total.ln());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_is_symmetric_under_conjugation(e in -20.0f64..-0.5, turn in 0.0f64..1.0) {
        // conjugation z -> conj z only flips the sign of the imaginary blocks
        let hs = beta_one();
        let a = hs.evaluate(&BallPoint::planar(e, turn).unwrap(), None).unwrap();
        let b = hs.evaluate(&BallPoint::planar(e, 1.0 - turn).unwrap(), None).unwrap();
        prop_assert!((a.log_s - b.log_s).abs() < 1e-9);
    }

    #[test]
    fn band_index_is_monotone_in_depth(e1 in -30.0f64..-0.1, de in 0.0f64..5.0) {
        let hs = beta_one();
        let outer = hs.plan.band_index(e1);
        let inner = hs.plan.band_index(e1 - de);
        prop_assert!(inner >= outer);
    }
}
