mod common;

use cscx_core::ale_models::AleKind;
use cscx_core::mode_analysis::{CauchyData, GroupDescriptor, ModeVector};
use cscx_core::neck_gluing::*;

fn burns(eps: f64) -> GluingConfig {
    GluingConfig { a_weight: 0.5, ..GluingConfig::new(2, AleKind::Burns, eps) }
}

fn assert_matches_oracle(cfg: &GluingConfig) -> GluedSolution {
    let model = cfg.build_model().unwrap();
    let sol = solve_matching_with_model(cfg, &model).unwrap();
    let tau0 = cfg.eps * cfg.eps * model.tau0();
    let oracle = common::glued_nu_oracle(cfg.m, model.divisor_multiplicity(), tau0, cfg.r0);
    let rel = (sol.nu / oracle - 1.0).abs();
    assert!(rel < 1e-8, "{:?} ε={}: ν = {:e}, oracle {:e} ({rel:e})", cfg.ale, cfg.eps, sol.nu, oracle);
    sol
}

#[test]
fn burns_nu_matches_first_integral_oracle() {
    for eps in [0.1, 0.01] {
        let sol = assert_matches_oracle(&burns(eps));
        assert!(sol.mismatch_max() <= 1e-9);
        assert!(sol.m2_log_shift.is_some());
    }
}

#[test]
fn simanca_nu_matches_first_integral_oracle() {
    for eps in [0.1, 0.01] {
        let sol = assert_matches_oracle(&GluingConfig::new(3, AleKind::Simanca, eps));
        assert!(sol.mismatch_max() <= 1e-9);
        assert!(sol.m2_log_shift.is_none());
    }
}

#[test]
fn newton_cross_check_agrees_with_fixed_point() {
    let sol = solve_matching(&burns(0.03)).unwrap();
    assert!((sol.newton_nu - sol.nu).abs() <= 1e-9 * sol.nu.abs().max(1e-12), "{} vs {}", sol.newton_nu, sol.nu);
    assert!(sol.newton_data_gap <= 1e-8);
}

#[test]
fn glued_potential_is_c4_across_the_neck() {
    for cfg in [burns(0.03), GluingConfig::new(3, AleKind::Simanca, 0.03)] {
        let sol = solve_matching(&cfg).unwrap();
        for (j, jump) in sol.c4_jumps.iter().enumerate() {
            assert!(jump.abs() <= 1e-8, "{:?}: derivative {j} jumps by {jump:e}", cfg.ale);
        }
        assert!(sol.outer.residual_max <= 1e-8 && sol.inner.residual_max <= 1e-8);
    }
}

#[test]
fn weight_and_scale_are_interchangeable() {
    // ε²F_a(|z|²/ε²) = (ε√a)²F_1(|z|²/(ε√a)²): the glued curvature depends on ε√a only.
    let eps = 0.03f64;
    let a = 0.5f64;
    let weighted =
        solve_matching(&GluingConfig { a_weight: a, ..GluingConfig::new(3, AleKind::Simanca, eps) }).unwrap();
    let rescaled = solve_matching(&GluingConfig::new(3, AleKind::Simanca, eps * a.sqrt())).unwrap();
    assert!((weighted.nu / rescaled.nu - 1.0).abs() < 1e-8, "{} vs {}", weighted.nu, rescaled.nu);
}

#[test]
fn calabi_model_glues_with_negligible_curvature() {
    let sol = solve_matching(&GluingConfig::new(3, AleKind::CalabiZm, 0.1)).unwrap();
    assert!(sol.mismatch_max() <= 1e-9);
    // ν is of order ε^{4m} for the Ricci-flat model.
    assert!(sol.nu.abs() < 1e-9, "ν = {:e}", sol.nu);
}

#[test]
fn zero_data_outer_and_inner_solves() {
    let cfg = GluingConfig::new(3, AleKind::Simanca, 0.05);
    let zero = CauchyData::radial(3, 0.0, 0.0).unwrap();
    let outer = solve_outer(&cfg, &zero).unwrap();
    assert!(outer.nu.abs() < 1e-12);
    assert!(outer.residual_max < 1e-10);
}

#[test]
fn configuration_errors() {
    let mut cfg = burns(0.05);
    cfg.r0 = 0.1;
    assert!(matches!(solve_matching(&cfg), Err(GluingError::NeckCollision { .. })));
    assert!(matches!(solve_matching(&burns(0.5)), Err(GluingError::AboveGate { .. })));
    assert!(matches!(solve_matching(&GluingConfig::new(3, AleKind::Burns, 0.05)), Err(GluingError::InvalidConfig(_))));
    let cfg = GluingConfig { a_weight: -1.0, ..burns(0.05) };
    assert!(matches!(cfg.validate(), Err(GluingError::InvalidConfig(_))));
    // Non-radial boundary data is outside the radial solver's scope.
    let cfg = GluingConfig::new(3, AleKind::Simanca, 0.05);
    let g = GroupDescriptor::TRIVIAL;
    let data =
        CauchyData::new(ModeVector::single(3, g, 2, 2, 1e-3).unwrap(), ModeVector::zeros(3, g, 2).unwrap()).unwrap();
    assert!(solve_outer(&cfg, &data).is_err());
}

#[test]
fn explicit_three_quarter_exponent_radii() {
    let cfg = GluingConfig { neck_exponent: Some(0.75), ..GluingConfig::new(2, AleKind::Burns, 1e-2) };
    let (r, big_r) = neck_radii(&cfg).unwrap();
    assert!((r - 10f64.powf(-1.5)).abs() < 1e-15);
    assert!((big_r - 10f64.powf(0.5)).abs() < 1e-13);
    let shift = m2_log_shift(&GluingConfig { a_weight: 0.5, ..cfg }, 0.0).unwrap();
    assert!((shift + 1e-4 * 0.5 * 10f64.ln()).abs() < 1e-18);
}

#[test]
fn report_serializes_with_documented_keys() {
    let sol = solve_matching(&GluingConfig::new(3, AleKind::Simanca, 0.05)).unwrap();
    let json = serde_json::to_value(sol.report()).unwrap();
    for key in ["config", "nu", "mismatch", "iterations", "R_eps", "r_eps"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["mismatch"].as_array().unwrap().len(), 4);
    let cfg: GluingConfig = serde_json::from_value(json["config"].clone()).unwrap();
    assert_eq!(cfg, sol.config);
}

#[test]
fn convergence_study_rejects_bad_lists() {
    let cfg = burns(0.1);
    assert!(convergence_study(&cfg, &[0.01, 0.1]).is_err());
    assert!(convergence_study(&cfg, &[0.3, 0.1]).is_err());
}
