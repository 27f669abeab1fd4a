use heiscay::cli::{plan, run_pipeline, CertifyOptions, Lift, PipelineError};
use heiscay::OrientationKind;

const SWEEP_BUDGET: u64 = 100_000;

#[test]
fn every_small_instance_certifies() {
    let opts = CertifyOptions {
        budget: SWEEP_BUDGET,
        aut_cap: 64,
        ..Default::default()
    };
    let mut certified = 0;
    for k in 2..=9 {
        for m in 2..=5 {
            for kind in [OrientationKind::Graph, OrientationKind::Oriented] {
                let p = plan(k, m, kind, None).unwrap();
                if p.predicted_vertices > SWEEP_BUDGET {
                    continue;
                }
                let (out, report) = run_pipeline(k, m, kind, None, &opts)
                    .unwrap_or_else(|e| panic!("k={k} m={m} {kind:?}: {e}"));
                assert_eq!(report.vertices as u64, p.predicted_vertices);
                assert_eq!(report.block_size as u64, m);
                assert!(report.first_failure().is_none());
                if p.power == 1 {
                    assert_eq!(out.lift, Lift::None);
                }
                certified += 1;
            }
        }
    }
    assert!(certified >= 50, "only {certified} instances in budget");
}

#[test]
fn forced_base_prime() {
    let (_, r) = run_pipeline(6, 2, OrientationKind::Graph, Some(3), &Default::default()).unwrap();
    assert_eq!(r.plan.base_prime, 3);
    assert_eq!(r.vertices, 256);
    let err = run_pipeline(6, 2, OrientationKind::Graph, Some(5), &Default::default()).unwrap_err();
    assert!(err.is_usage());
    assert!(matches!(err, PipelineError::BadBasePrime { .. }));
}

#[test]
fn over_budget_is_reported_before_building() {
    let opts = CertifyOptions {
        budget: 100,
        ..Default::default()
    };
    let err = run_pipeline(5, 3, OrientationKind::Graph, None, &opts).unwrap_err();
    assert!(matches!(err, PipelineError::BudgetExceeded { needed: 486, budget: 100 }));
}
