mod common;

use cscx_core::class_arithmetic::*;
use proptest::prelude::*;

#[test]
fn worked_two_dimensional_example() {
    let data = BlowupClassData::new(2, 1.0, 0.0, vec![1.0]).unwrap();
    let s = average_scal(&data, 0.1).unwrap();
    // 2·(0 − 0.01)/(1 − 10⁻⁴) = −0.02/0.9999.
    assert!((s - (-0.02 / 0.9999)).abs() <= 1e-9, "{s}");
    assert!((s + 0.020002).abs() < 1e-6);
}

#[test]
fn volume_correction_sign_alternates_with_dimension() {
    for m in 2..=6usize {
        let data = BlowupClassData::new(m, 3.0, 1.0, vec![0.5, 0.25]).unwrap();
        let eps = 0.3f64;
        let n = blowup_classes(&data, eps).unwrap();
        let ratio = (n.volume - 3.0) / (eps.powi(2 * m as i32) * 0.75);
        let expected = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
        assert!((ratio - expected).abs() < 1e-9, "m={m}: {ratio}");
        let chern_drop = (1.0 - n.chern_pair) / (eps.powi(2 * m as i32 - 2) * 0.75);
        assert!((chern_drop - (m - 1) as f64).abs() < 1e-9);
    }
}

#[test]
fn vanishing_parameter_returns_base_curvature() {
    let data = BlowupClassData::new(3, 2.0, 5.0, vec![1.0]).unwrap();
    assert_eq!(average_scal(&data, 0.0).unwrap(), data.base_scal());
}

#[test]
fn analytic_derivative_matches_finite_differences() {
    for m in 2..=5 {
        let data = BlowupClassData::new(m, 1.5, -0.7, vec![0.3, 1.1]).unwrap();
        for eps in [0.1, 0.3, 0.5] {
            let exact = average_scal_derivative(&data, eps).unwrap();
            let fd = common::fd1(|e| average_scal(&data, e).unwrap(), eps, 1e-4);
            assert!((exact - fd).abs() <= 1e-7 * exact.abs() + 1e-10, "m={m}, ε={eps}: {exact} vs {fd}");
        }
    }
}

#[test]
fn monotone_decrease_near_zero_for_fixtures() {
    let fixtures = [
        BlowupClassData::new(2, 1.0, 0.0, vec![1.0]).unwrap(),
        BlowupClassData::new(2, 4.0, 3.0, vec![0.5, 0.5, 2.0]).unwrap(),
        BlowupClassData::new(3, 1.0, -2.0, vec![1.0]).unwrap(),
        BlowupClassData::new(4, 10.0, 1.0, vec![0.1; 5]).unwrap(),
        BlowupClassData::new(5, 2.0, 0.5, vec![3.0]).unwrap(),
    ];
    for data in &fixtures {
        let report = monotonicity_check(data, 0.2).unwrap();
        assert!(report.decreasing && report.first_violation.is_none(), "{data:?}: {report:?}");
        // Direct sampling as an independent check (increments below roundoff
        // near ε = 0 for large m, hence non-strict steps and a strict total drop).
        let s0 = average_scal(data, 0.0).unwrap();
        let mut prev = s0;
        for i in 1..=200 {
            let s = average_scal(data, 0.2 * i as f64 / 200.0).unwrap();
            assert!(s <= prev, "{data:?} at step {i}");
            prev = s;
        }
        assert!(prev < s0);
    }
}

#[test]
fn monotonicity_violation_is_located() {
    let data = BlowupClassData::new(2, 1.0, 2.0, vec![1.0]).unwrap();
    let report = monotonicity_check(&data, 0.9).unwrap();
    let v = report.first_violation.expect("violation expected");
    // q(ε) = −2V + 8Cε² − 2ε⁴ vanishes at ε² = 2 − √3.
    assert!((v - (2.0 - 3f64.sqrt()).sqrt()).abs() < 1e-6, "{v}");
    assert!(!report.decreasing);
}

#[test]
fn errors_are_reported() {
    assert!(BlowupClassData::new(1, 1.0, 0.0, vec![1.0]).is_err());
    assert!(BlowupClassData::new(2, 1.0, 0.0, vec![-1.0]).is_err());
    let data = BlowupClassData::new(2, 1.0, 0.0, vec![1.0]).unwrap();
    assert!(matches!(blowup_classes(&data, 1.5), Err(ClassError::NegativeVolume { .. })));
    assert!(matches!(BaseFamily::new(vec![0.0, 1.0], vec![1.0, 2.0]), Err(ClassError::NoSignChange { .. })));
    assert!(BaseFamily::new(vec![0.0, 1.0, 2.0], vec![-1.0, 1.0, 0.5]).is_err());
}

#[test]
fn zero_scal_root_matches_linear_family_closed_form() {
    let family = BaseFamily::linear(1.0, 1.0).unwrap();
    let template = BlowupClassData::new(2, 1.0, 0.0, vec![1.0]).unwrap();
    let t = zero_scal_solve(&family, &template, 0.1).unwrap();
    assert!((t - 0.02).abs() <= 1e-10, "{t}");
}

fn closed_form_root(m: usize, c: f64, vol: f64, sum: f64, eps: f64) -> f64 {
    (m * (m - 1)) as f64 * eps.powi(2 * m as i32 - 2) * sum / (c * vol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_family_roots(m in 2usize..=5, c in 0.2f64..5.0, vol in 0.5f64..5.0,
                           w in prop::collection::vec(0.1f64..2.0, 1..4), eps in 0.01f64..0.3) {
        let sum: f64 = w.iter().sum();
        let template = BlowupClassData::new(m, vol, 0.0, w).unwrap();
        let family = BaseFamily::linear(c, 2.0).unwrap();
        let t = zero_scal_solve(&family, &template, eps).unwrap();
        prop_assert!((t - closed_form_root(m, c, vol, sum, eps)).abs() <= 1e-10);
    }

    #[test]
    fn root_increases_with_eps(m in 2usize..=4, e1 in 0.01f64..0.2, de in 0.001f64..0.1) {
        let template = BlowupClassData::new(m, 1.0, 0.0, vec![1.0]).unwrap();
        let family = BaseFamily::new(vec![-1.0, -0.2, 0.3, 1.0], vec![-2.0, -0.3, 0.4, 1.5]).unwrap();
        let t1 = zero_scal_solve(&family, &template, e1).unwrap();
        let t2 = zero_scal_solve(&family, &template, e1 + de).unwrap();
        prop_assert!(t2 > t1);
    }

    #[test]
    fn average_scal_is_scale_invariant_in_weights(m in 2usize..=5, lambda in 0.2f64..5.0, eps in 0.01f64..0.4) {
        // Scaling V by λ^m, C by λ^{m−1} and ε² by λ leaves s·λ invariant.
        let a = BlowupClassData::new(m, 1.3, 0.4, vec![0.7]).unwrap();
        let b = BlowupClassData::new(m, 1.3 * lambda.powi(m as i32), 0.4 * lambda.powi(m as i32 - 1), vec![0.7]).unwrap();
        let sa = average_scal(&a, eps).unwrap();
        let sb = average_scal(&b, eps * lambda.sqrt()).unwrap();
        prop_assert!((sb * lambda - sa).abs() <= 1e-12 * sa.abs().max(1.0));
    }
}
