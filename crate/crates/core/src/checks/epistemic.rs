//! Overlaps between preparation distributions: maximal ψ-epistemicity and
//! the ψ-ontic / ψ-epistemic classification.

use alloc::format;
use alloc::vec::Vec;

use super::{compare, CheckError, CheckReport, CheckSettings, Estimate, Verdict, SIGMA_MULTIPLIER};
use crate::integrate::{mc_expectations, McConfig, McEstimate};
use crate::models::{OnticState, OntologicalModel, StateCatalog};
use crate::qubit::{born_probability, PureState, INVARIANT_TOL};

/// Born probabilities below this are treated as orthogonal pairs.
const ORTHOGONAL_TOL: f64 = 1e-12;

/// MC estimate of P_{λ~μ_ψ}(λ ∈ Λ_φ).
pub fn overlap_integral<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
    phi: &PureState,
    cfg: &McConfig,
) -> Result<McEstimate, CheckError> {
    Ok(overlaps_from(model, psi, core::slice::from_ref(phi), cfg)?[0])
}

fn overlaps_from<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
    targets: &[PureState],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>, CheckError> {
    let f = |lambda: &OnticState, out: &mut [f64]| {
        for (phi, slot) in targets.iter().zip(out.iter_mut()) {
            *slot = f64::from(u8::from(model.in_support(phi, lambda)));
        }
    };
    let sampler = |seed, index| model.sample_prepared(psi, seed, index);
    Ok(mc_expectations(&f, targets.len(), &sampler, cfg)?)
}

/// Overlap of μ_ψ with Λ_φ next to the Born probability it should carry.
#[derive(Debug, Clone, PartialEq)]
pub struct PairOverlap {
    pub psi: usize,
    pub phi: usize,
    pub overlap: McEstimate,
    pub born: f64,
}

impl PairOverlap {
    /// Born probability not accounted for by the overlap.
    pub fn deficit(&self) -> f64 {
        self.born - self.overlap.mean
    }
}

/// Overlaps for every ordered pair of catalog states (ψ major).
pub fn catalog_overlaps<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    cfg: &McConfig,
) -> Result<Vec<PairOverlap>, CheckError> {
    let states = catalog.states();
    let mut out = Vec::with_capacity(states.len() * states.len());
    for (i, psi) in states.iter().enumerate() {
        let est = overlaps_from(model, psi, states, cfg)?;
        for (j, (phi, overlap)) in states.iter().zip(est).enumerate() {
            out.push(PairOverlap {
                psi: i,
                phi: j,
                overlap,
                born: born_probability(phi, psi),
            });
        }
    }
    Ok(out)
}

/// Maximally ψ-epistemic: ∫_{Λ_φ} μ_ψ = |⟨φ|ψ⟩|² for every catalog pair.
pub fn check_max_psi_epistemic<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let cfg = &settings.mc;
    let pairs = catalog_overlaps(model, catalog, cfg)?;
    Ok(max_epistemic_report(model.name(), catalog, &pairs, settings))
}

pub(crate) fn max_epistemic_report(
    model_name: &str,
    catalog: &StateCatalog,
    pairs: &[PairOverlap],
    settings: &CheckSettings,
) -> CheckReport {
    let cfg = &settings.mc;
    let states = catalog.states();
    let mut report = CheckReport::new("max_psi_epistemic", model_name, settings.mc_tol, cfg);
    let mut verdict = Verdict::Satisfied;
    let mut worst: Option<&PairOverlap> = None;
    for p in pairs {
        verdict = verdict.and(compare(p.deficit(), p.overlap.std_error, settings.mc_tol));
        if worst.is_none_or(|w| libm::fabs(p.deficit()) > libm::fabs(w.deficit())) {
            worst = Some(p);
        }
        report.estimates.push(Estimate::new(
            format!(
                "overlap(μ_{} on Λ_{})",
                states[p.psi].display_name(),
                states[p.phi].display_name()
            ),
            &p.overlap,
        ));
    }
    if let Some(w) = worst {
        report.estimates.push(Estimate {
            label: format!(
                "worst deficit ({} → {})",
                states[w.psi].display_name(),
                states[w.phi].display_name()
            ),
            mean: w.deficit(),
            std_error: w.overlap.std_error,
        });
        report.details = format!(
            "worst pair ψ={}, φ={}: overlap {:.6} vs Born {:.6}, deficit {:.6}",
            states[w.psi].display_name(),
            states[w.phi].display_name(),
            w.overlap.mean,
            w.born,
            w.deficit()
        );
    }
    report.finish(verdict, cfg)
}

/// ψ-ontic when every distinct nonorthogonal pair has overlap
/// indistinguishable from zero; ψ-epistemic when some pair overlaps by more
/// than five standard errors.
pub fn classify_ontology<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let cfg = &settings.mc;
    let pairs = catalog_overlaps(model, catalog, cfg)?;
    let states = catalog.states();
    let mut report = CheckReport::new("ontology_class", model.name(), 0.0, cfg);
    let mut epistemic_pair = None;
    let mut max_orthogonal: f64 = 0.0;
    for p in &pairs {
        let (psi, phi) = (&states[p.psi], &states[p.phi]);
        if psi.same_state(phi, INVARIANT_TOL) {
            continue;
        }
        let label = format!("overlap(μ_{} on Λ_{})", psi.display_name(), phi.display_name());
        if p.born <= ORTHOGONAL_TOL {
            max_orthogonal = max_orthogonal.max(p.overlap.mean);
            report.estimates.push(Estimate::new(label, &p.overlap));
            continue;
        }
        if epistemic_pair.is_none() && p.overlap.mean > SIGMA_MULTIPLIER * p.overlap.std_error {
            epistemic_pair = Some(p);
        }
        report.estimates.push(Estimate::new(label, &p.overlap));
    }
    let verdict = match epistemic_pair {
        Some(p) => {
            report.details = format!(
                "μ_{} and μ_{} overlap with mass {:.6}; max overlap over orthogonal pairs {max_orthogonal:e}",
                states[p.psi].display_name(),
                states[p.phi].display_name(),
                p.overlap.mean
            );
            Verdict::PsiEpistemic
        }
        None => {
            report.details =
                format!("no nonorthogonal pair overlaps; max overlap over orthogonal pairs {max_orthogonal:e}");
            Verdict::PsiOntic
        }
    };
    Ok(report.finish(verdict, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BellMermin, KochenSpecker};

    fn cfg() -> McConfig {
        McConfig::new(200_000, 19, 8192).unwrap()
    }

    #[test]
    fn overlap_examples() {
        let (z, x) = (PureState::plus_z(), PureState::plus_x());
        let own = overlap_integral(&KochenSpecker, &z, &z, &cfg()).unwrap();
        assert_eq!((own.mean, own.std_error), (1.0, 0.0));
        let zx = overlap_integral(&KochenSpecker, &z, &x, &cfg()).unwrap();
        assert!((zx.mean - 0.5).abs() <= 5.0 * zx.std_error, "{zx:?}");
        let bm = overlap_integral(&BellMermin, &z, &x, &cfg()).unwrap();
        assert_eq!((bm.mean, bm.std_error), (0.0, 0.0));
        let orth = overlap_integral(&KochenSpecker, &z, &PureState::minus_z(), &cfg()).unwrap();
        assert_eq!(orth.mean, 0.0);
    }

    #[test]
    fn maximal_epistemicity_verdicts() {
        let s = CheckSettings::new(cfg());
        let cat = StateCatalog::axis();
        let ks = check_max_psi_epistemic(&KochenSpecker, &cat, &s).unwrap();
        assert_eq!(ks.verdict, Verdict::Satisfied, "{}", ks.details);
        let bm = check_max_psi_epistemic(&BellMermin, &cat, &s).unwrap();
        assert_eq!(bm.verdict, Verdict::Violated);
        let worst = bm.estimates.last().unwrap();
        assert_eq!(worst.mean, 0.5);
    }

    #[test]
    fn orthogonal_only_catalog_is_vacuously_maximal() {
        let s = CheckSettings::new(cfg());
        let cat = StateCatalog::from_states(alloc::vec![PureState::plus_z()]).unwrap();
        let bm = check_max_psi_epistemic(&BellMermin, &cat, &s).unwrap();
        assert_eq!(bm.verdict, Verdict::Satisfied);
    }

    #[test]
    fn classification() {
        let s = CheckSettings::new(cfg());
        let cat = StateCatalog::axis();
        assert_eq!(
            classify_ontology(&BellMermin, &cat, &s).unwrap().verdict,
            Verdict::PsiOntic
        );
        let ks = classify_ontology(&KochenSpecker, &cat, &s).unwrap();
        assert_eq!(ks.verdict, Verdict::PsiEpistemic);
        assert!(ks.details.contains("orthogonal pairs 0e0"), "{}", ks.details);
    }
}
