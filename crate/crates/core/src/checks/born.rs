use alloc::format;
use alloc::vec::Vec;

use super::{compare, CheckError, CheckReport, CheckSettings, Estimate, Verdict};
use crate::integrate::{mc_expectations, IntegrateError, McConfig, McEstimate};
use crate::models::{OnticState, OntologicalModel, StateCatalog};
use crate::qubit::{born_probability, MeasurementBasis, PureState};

/// E_{λ~μ_ψ}[ξ_M(α|λ)] for every basis and outcome, outcome-major within
/// each basis, from one shared stream.
pub(crate) fn response_estimates<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
    bases: &[MeasurementBasis],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>, CheckError> {
    let sampler = |seed, index| model.sample_prepared(psi, seed, index);
    let f = |lambda: &OnticState, out: &mut [f64]| {
        for (b, basis) in bases.iter().enumerate() {
            for k in 0..2 {
                out[2 * b + k] = model.response(basis, k, lambda).unwrap_or(f64::NAN);
            }
        }
    };
    mc_expectations(&f, 2 * bases.len(), &sampler, cfg).map_err(|e| {
        explain(e, |index| {
            let lambda = sampler(cfg.seed(), index);
            for basis in bases {
                for k in 0..2 {
                    model.response(basis, k, &lambda)?;
                }
            }
            Ok(())
        })
    })
}

/// Turns a non-finite-integrand error into the model error that caused it,
/// when there is one.
pub(crate) fn explain<F>(err: IntegrateError, replay: F) -> CheckError
where
    F: FnOnce(u64) -> Result<(), crate::models::ModelError>,
{
    match err {
        IntegrateError::NonFinite { index } => match replay(index) {
            Err(model_err) => CheckError::Model(model_err),
            Ok(()) => CheckError::Integrate(err),
        },
        other => CheckError::Integrate(other),
    }
}

/// Compares E_{λ~μ_ψ}[ξ(α|λ)] with |⟨α|ψ⟩|² for every catalog state ψ,
/// basis M and outcome α ∈ M.
pub fn check_born_reproduction<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let cfg = &settings.mc;
    let mut report = CheckReport::new("born_reproduction", model.name(), settings.mc_tol, cfg);
    let mut verdict = Verdict::Satisfied;
    let mut worst = (0.0f64, None);
    for psi in catalog.states() {
        let est = response_estimates(model, psi, catalog.bases(), cfg)?;
        for (b, basis) in catalog.bases().iter().enumerate() {
            for (k, alpha) in basis.outcomes().iter().enumerate() {
                let e = &est[2 * b + k];
                let born = born_probability(alpha, psi);
                let d = e.mean - born;
                verdict = verdict.and(compare(d, e.std_error, settings.mc_tol));
                if libm::fabs(d) > worst.0 || worst.1.is_none() {
                    worst = (libm::fabs(d), Some((alpha, psi, born, e.mean)));
                }
                report.estimates.push(Estimate::new(
                    format!(
                        "P({}|{}) [{}]",
                        alpha.display_name(),
                        psi.display_name(),
                        basis.display_name()
                    ),
                    e,
                ));
            }
        }
    }
    if let (d, Some((alpha, psi, born, mean))) = worst {
        report.details = format!(
            "{} triples; largest discrepancy {d:.3e} at P({}|{}): estimate {mean:.6} vs Born {born:.6}",
            report.estimates.len(),
            alpha.display_name(),
            psi.display_name()
        );
    }
    Ok(report.finish(verdict, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ConstantHalf, KochenSpecker, ModelError};

    fn settings(n: u64) -> CheckSettings {
        CheckSettings::new(McConfig::new(n, 11, 4096).unwrap())
    }

    #[test]
    fn ks_reproduces_born_rule() {
        let r = check_born_reproduction(&KochenSpecker, &StateCatalog::axis(), &settings(200_000)).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied, "{}", r.details);
        assert_eq!(r.estimates.len(), 36);
    }

    #[test]
    fn constant_half_fails_where_born_is_one() {
        let r = check_born_reproduction(&ConstantHalf, &StateCatalog::axis(), &settings(1000)).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let own = r.estimates.iter().find(|e| e.label == "P(+z|+z) [z]").unwrap();
        assert_eq!(own.mean, 0.5);
    }

    #[test]
    fn undersampled_run_is_inconclusive() {
        let r = check_born_reproduction(&KochenSpecker, &StateCatalog::axis(), &settings(10)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    struct Broken;

    impl OntologicalModel for Broken {
        fn name(&self) -> &'static str {
            "broken"
        }
        fn sample_prepared(&self, psi: &PureState, _: u64, _: u64) -> OnticState {
            OnticState::Single(*psi.bloch())
        }
        fn has_density(&self) -> bool {
            false
        }
        fn density(&self, _: &PureState, _: &OnticState) -> Result<Option<f64>, ModelError> {
            Ok(None)
        }
        fn in_support(&self, _: &PureState, _: &OnticState) -> bool {
            true
        }
        fn response(&self, b: &MeasurementBasis, k: usize, _: &OnticState) -> Result<f64, ModelError> {
            if b.label() == Some("y") {
                Ok(f64::INFINITY)
            } else if b.label() == Some("x") && k == 1 {
                Err(ModelError::OutcomeIndex(7))
            } else {
                Ok(0.5)
            }
        }
        fn reference_sample(&self, _: u64, _: u64) -> OnticState {
            OnticState::Single(crate::qubit::BlochVector::PLUS_Z)
        }
    }

    #[test]
    fn errors_propagate() {
        let err = check_born_reproduction(&Broken, &StateCatalog::axis(), &settings(100)).unwrap_err();
        assert_eq!(err, CheckError::Model(ModelError::OutcomeIndex(7)));
        let only_y = StateCatalog::new(
            PureState::axis_states(),
            alloc::vec![StateCatalog::axis().bases()[1].clone()],
        )
        .unwrap();
        let err = check_born_reproduction(&Broken, &only_y, &settings(100)).unwrap_err();
        assert!(matches!(err, CheckError::Integrate(IntegrateError::NonFinite { .. })));
    }
}
