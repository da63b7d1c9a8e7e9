//! Outcome determinism and measurement noncontextuality, tested at ontic
//! states drawn from every catalog preparation and from the reference
//! measure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::born::explain;
use super::{CheckError, CheckReport, CheckSettings, Estimate, Verdict};
use crate::integrate::{mc_expectations, McConfig, McEstimate};
use crate::models::{ModelError, OnticState, OntologicalModel, StateCatalog};
use crate::qubit::{MeasurementBasis, PureState};

enum Source<'a> {
    Prepared(&'a PureState),
    Reference,
}

impl Source<'_> {
    fn sample<M: OntologicalModel + ?Sized>(&self, model: &M, seed: u64, index: u64) -> OnticState {
        match self {
            Source::Prepared(psi) => model.sample_prepared(psi, seed, index),
            Source::Reference => model.reference_sample(seed, index),
        }
    }

    fn label(&self) -> String {
        match self {
            Source::Prepared(psi) => format!("μ_{}", psi.display_name()),
            Source::Reference => String::from("reference"),
        }
    }
}

fn sources(catalog: &StateCatalog) -> Vec<Source<'_>> {
    catalog
        .states()
        .iter()
        .map(Source::Prepared)
        .chain(core::iter::once(Source::Reference))
        .collect()
}

fn estimate_over<M, F>(
    model: &M,
    source: &Source<'_>,
    k: usize,
    cfg: &McConfig,
    f: F,
) -> Result<Vec<McEstimate>, CheckError>
where
    M: OntologicalModel + ?Sized,
    F: Fn(&OnticState, &mut [f64]) -> Result<(), ModelError>,
{
    let sampler = |seed, index| source.sample(model, seed, index);
    let g = |lambda: &OnticState, out: &mut [f64]| {
        if f(lambda, out).is_err() {
            out.fill(f64::NAN);
        }
    };
    mc_expectations(&g, k, &sampler, cfg).map_err(|e| {
        explain(e, |index| {
            let mut scratch = alloc::vec![0.0; k];
            f(&sampler(cfg.seed(), index), &mut scratch)
        })
    })
}

/// Every response value at every sampled λ must be 0 or 1.
pub fn check_outcome_determinism<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let cfg = &settings.mc;
    let mut report = CheckReport::new("outcome_determinism", model.name(), 0.0, cfg);
    let bases = catalog.bases();
    let mut verdict = Verdict::Satisfied;
    let mut incomplete = 0.0f64;
    for source in sources(catalog) {
        let est = estimate_over(model, &source, 2, cfg, |lambda, out| {
            let mut nondeterministic = false;
            let mut unnormalized = false;
            for basis in bases {
                let mut sum = 0.0;
                for k in 0..2 {
                    let v = model.response(basis, k, lambda)?;
                    nondeterministic |= v != 0.0 && v != 1.0;
                    sum += v;
                }
                unnormalized |= sum != 1.0;
            }
            out[0] = f64::from(u8::from(nondeterministic));
            out[1] = f64::from(u8::from(unnormalized));
            Ok(())
        })?;
        if est[0].mean > 0.0 {
            verdict = Verdict::Violated;
        }
        incomplete = incomplete.max(est[1].mean);
        report.estimates.push(Estimate::new(
            format!("non-{{0,1}} response rate | {}", source.label()),
            &est[0],
        ));
        report.estimates.push(Estimate::new(
            format!("basis sum ≠ 1 rate | {}", source.label()),
            &est[1],
        ));
    }
    report.details = format!(
        "{} sources × {} samples; max rate of basis sums ≠ 1: {incomplete:e}",
        catalog.states().len() + 1,
        cfg.n_samples()
    );
    Ok(report.finish(verdict, cfg))
}

/// Basis descriptors containing `alpha`, from the catalog plus permuted and
/// relabelled copies, with the position of `alpha` in each.
fn contexts_for(alpha: &PureState, catalog: &StateCatalog) -> Vec<(MeasurementBasis, usize)> {
    let mut out = Vec::new();
    for basis in catalog.bases() {
        if let Some(i) = basis.index_of(alpha, crate::qubit::INVARIANT_TOL) {
            let relabel = match basis.label() {
                Some(l) => format!("{l}'"),
                None => String::from("context"),
            };
            out.push((basis.clone(), i));
            out.push((basis.permuted(), 1 - i));
            out.push((basis.clone().without_label(), i));
            out.push((basis.clone().with_label(relabel), i));
        }
    }
    out
}

/// The response to each outcome must not depend on the basis descriptor it
/// appears in.
///
/// Every projector of a qubit lies in exactly one orthonormal basis, so the
/// alternative contexts are the catalog descriptors plus synthesized
/// permutations and relabellings of them.
pub fn check_measurement_noncontextuality<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let cfg = &settings.mc;
    let mut report = CheckReport::new("measurement_noncontextuality", model.name(), 0.0, cfg);
    let outcomes: Vec<(&PureState, Vec<(MeasurementBasis, usize)>)> = catalog
        .states()
        .iter()
        .map(|a| (a, contexts_for(a, catalog)))
        .filter(|(_, ctx)| ctx.len() > 1)
        .collect();
    let mut verdict = Verdict::Satisfied;
    let mut n_contexts = 0;
    for source in sources(catalog) {
        let est = estimate_over(model, &source, outcomes.len(), cfg, |lambda, out| {
            for ((_, contexts), slot) in outcomes.iter().zip(out.iter_mut()) {
                let (b0, i0) = &contexts[0];
                let reference = model.response(b0, *i0, lambda)?;
                let mut mismatch = false;
                for (b, i) in &contexts[1..] {
                    mismatch |= model.response(b, *i, lambda)? != reference;
                }
                *slot = f64::from(u8::from(mismatch));
            }
            Ok(())
        })?;
        for ((alpha, contexts), e) in outcomes.iter().zip(&est) {
            n_contexts = n_contexts.max(contexts.len());
            if e.mean > 0.0 {
                verdict = Verdict::Violated;
            }
            report.estimates.push(Estimate::new(
                format!("context mismatch rate {} | {}", alpha.display_name(), source.label()),
                e,
            ));
        }
    }
    report.details = format!(
        "{} outcomes compared across up to {n_contexts} basis descriptors each",
        outcomes.len()
    );
    Ok(report.finish(verdict, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BellMermin, ConstantHalf, KochenSpecker, LabelReading};

    fn settings() -> CheckSettings {
        CheckSettings::new(McConfig::new(20_000, 3, 4096).unwrap())
    }

    #[test]
    fn ks_and_bm_are_deterministic_and_noncontextual() {
        let cat = StateCatalog::axis();
        for model in [&KochenSpecker as &dyn OntologicalModel, &BellMermin] {
            let d = check_outcome_determinism(model, &cat, &settings()).unwrap();
            assert_eq!(d.verdict, Verdict::Satisfied, "{}", model.name());
            assert!(d.estimates.iter().all(|e| e.mean == 0.0));
            let m = check_measurement_noncontextuality(model, &cat, &settings()).unwrap();
            assert_eq!(m.verdict, Verdict::Satisfied, "{}", model.name());
        }
    }

    #[test]
    fn controls_fail_their_targeted_check() {
        let cat = StateCatalog::axis();
        let d = check_outcome_determinism(&ConstantHalf, &cat, &settings()).unwrap();
        assert_eq!(d.verdict, Verdict::Violated);
        let m = check_measurement_noncontextuality(&ConstantHalf, &cat, &settings()).unwrap();
        assert_eq!(m.verdict, Verdict::Satisfied);

        let d = check_outcome_determinism(&LabelReading, &cat, &settings()).unwrap();
        assert_eq!(d.verdict, Verdict::Satisfied);
        let m = check_measurement_noncontextuality(&LabelReading, &cat, &settings()).unwrap();
        assert_eq!(m.verdict, Verdict::Violated);
    }

    #[test]
    fn synthesized_contexts() {
        let cat = StateCatalog::axis();
        let ctx = contexts_for(&PureState::minus_x(), &cat);
        assert_eq!(ctx.len(), 4);
        assert_eq!(ctx[1].1, 0);
        assert_eq!(ctx[3].0.label(), Some("x'"));
    }
}
