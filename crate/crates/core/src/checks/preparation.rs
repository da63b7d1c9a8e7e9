//! Mixed preparations, preparation noncontextuality and the Ω witness.

use alloc::format;
use alloc::vec::Vec;

use super::{compare, CheckError, CheckReport, CheckSettings, Estimate, Verdict, DENSITY_EQUALITY_TOL};
use crate::integrate::rng::derive_seed;
use crate::integrate::{mc_expectation, mc_expectations, McConfig, McEstimate, SampleStream};
use crate::models::{ModelError, OnticState, OntologicalModel, StateCatalog};
use crate::qubit::{ensemble_density_operator, Ensemble, MeasurementBasis, PureState, INVARIANT_TOL};

/// Sub-stream used for the classical coin that picks an ensemble member.
const COIN_STREAM: u64 = 0x636f_696e;

/// Most Ω exemplars kept in a witness.
pub const MAX_EXEMPLARS: usize = 10;

/// μ_E = Σ_j p_j μ_{ψ_j} for a model and ensemble.
pub struct EnsembleDistribution<'a, M: ?Sized> {
    model: &'a M,
    ensemble: &'a Ensemble,
}

/// The ontic distribution of preparing `e` with `model`.
pub fn ensemble_distribution<'a, M: OntologicalModel + ?Sized>(
    model: &'a M,
    e: &'a Ensemble,
) -> EnsembleDistribution<'a, M> {
    EnsembleDistribution { model, ensemble: e }
}

impl<M: OntologicalModel + ?Sized> EnsembleDistribution<'_, M> {
    /// Picks `j ~ p` from a coin stream independent of the ontic draw, then
    /// draws λ ~ μ_{ψ_j}.
    pub fn sample(&self, seed: u64, index: u64) -> OnticState {
        let entries = self.ensemble.entries();
        let j = if entries.len() == 1 {
            0
        } else {
            let u = SampleStream::new(derive_seed(seed, COIN_STREAM), index).next_open01();
            let mut acc = 0.0;
            entries
                .iter()
                .position(|(w, _)| {
                    acc += w;
                    u < acc
                })
                .unwrap_or_else(|| entries.iter().rposition(|(w, _)| *w > 0.0).unwrap_or(0))
        };
        self.model.sample_prepared(&entries[j].1, seed, index)
    }

    /// Σ_j p_j μ_{ψ_j}(λ), `None` if any component lacks a density.
    pub fn density(&self, lambda: &OnticState) -> Result<Option<f64>, ModelError> {
        let mut total = 0.0;
        for (w, psi) in self.ensemble.entries() {
            match self.model.density(psi, lambda)? {
                Some(d) => total += w * d,
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    /// λ ∈ ∪_j Λ_{ψ_j} over members with positive weight.
    pub fn in_support(&self, lambda: &OnticState) -> bool {
        self.ensemble
            .entries()
            .iter()
            .any(|(w, psi)| *w > 0.0 && self.model.in_support(psi, lambda))
    }
}

fn ensemble_name(e: &Ensemble) -> alloc::string::String {
    let parts: Vec<_> = e
        .entries()
        .iter()
        .map(|(w, s)| format!("{w} {}", s.display_name()))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Compares μ_{E1} and μ_{E2} for two ensembles with the same density
/// operator.
///
/// Models with densities on S₂ are compared by total-variation distance on
/// the quadrature grid; the others by the probability each ensemble assigns
/// to the support of E1.
pub fn check_preparation_noncontextuality<M: OntologicalModel + ?Sized>(
    model: &M,
    e1: &Ensemble,
    e2: &Ensemble,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let diff = ensemble_density_operator(e1).max_abs_diff(&ensemble_density_operator(e2));
    if diff > DENSITY_EQUALITY_TOL {
        return Err(CheckError::DensityMismatch(diff));
    }
    let cfg = &settings.mc;
    let d1 = ensemble_distribution(model, e1);
    let d2 = ensemble_distribution(model, e2);
    let on_sphere = matches!(model.reference_sample(cfg.seed(), 0), OnticState::Single(_));

    if model.has_density() && on_sphere {
        let density = |d: &EnsembleDistribution<'_, M>, v: &crate::qubit::BlochVector| {
            d.density(&OnticState::Single(*v)).map(|x| x.unwrap_or(f64::NAN))
        };
        let probe = OnticState::Single(crate::qubit::BlochVector::PLUS_Z);
        d1.density(&probe)?;
        d2.density(&probe)?;
        let rule = settings.grid.rule();
        let tv = rule.tv_distance(
            |v| density(&d1, v).unwrap_or(f64::NAN),
            |v| density(&d2, v).unwrap_or(f64::NAN),
        )?;
        let mut report = CheckReport::new("preparation_noncontextuality", model.name(), settings.quad_tol, cfg);
        report.n_samples = rule.nodes().len() as u64;
        report.estimates.push(Estimate::exact("tv_distance", tv));
        report.details = format!(
            "TV(μ_{}, μ_{}) = {tv:.9} on a {}×{} grid",
            ensemble_name(e1),
            ensemble_name(e2),
            2 * settings.grid.n_polar(),
            settings.grid.n_azimuth()
        );
        let verdict = if tv > settings.quad_tol {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        };
        // quadrature verdicts do not depend on the sample count
        report.verdict = verdict;
        return Ok(report);
    }

    let witness = |lambda: &OnticState| f64::from(u8::from(d1.in_support(lambda)));
    let under1 = mc_expectation(witness, |s, i| d1.sample(s, i), cfg)?;
    let under2 = mc_expectation(witness, |s, i| d2.sample(s, i), cfg)?;
    let diff = under1.mean - under2.mean;
    let se = libm::sqrt(under1.std_error * under1.std_error + under2.std_error * under2.std_error);
    let mut report = CheckReport::new("preparation_noncontextuality", model.name(), settings.mc_tol, cfg);
    report.estimates.push(Estimate::new(
        format!("P(λ ∈ supp E1) under {}", ensemble_name(e1)),
        &under1,
    ));
    report.estimates.push(Estimate::new(
        format!("P(λ ∈ supp E1) under {}", ensemble_name(e2)),
        &under2,
    ));
    report.details = format!(
        "support witness of {} differs by {diff:.6} (combined std error {se:.2e})",
        ensemble_name(e1)
    );
    let verdict = compare(diff, se, settings.mc_tol);
    Ok(report.finish(verdict, cfg))
}

/// Preparation noncontextuality across the catalog: for every two bases
/// {ψ, ψ⊥} and {φ, φ⊥}, the even mixtures must have the same ontic
/// distribution.
pub fn check_preparation_noncontextuality_catalog<M: OntologicalModel + ?Sized>(
    model: &M,
    catalog: &StateCatalog,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let cfg = &settings.mc;
    let bases = catalog.bases();
    let mut verdict = Verdict::Satisfied;
    let mut tolerance = settings.quad_tol;
    let mut estimates = Vec::new();
    let mut n_samples = cfg.n_samples();
    let mut first_violation = None;
    let mut n_pairs = 0;
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            let [a, a_perp] = bases[i].outcomes().clone();
            let [b, b_perp] = bases[j].outcomes().clone();
            let e1 = Ensemble::new(alloc::vec![(0.5, a), (0.5, a_perp)])?;
            let e2 = Ensemble::new(alloc::vec![(0.5, b), (0.5, b_perp)])?;
            let r = check_preparation_noncontextuality(model, &e1, &e2, settings)?;
            n_pairs += 1;
            tolerance = r.tolerance;
            n_samples = r.n_samples;
            if r.verdict == Verdict::Violated && first_violation.is_none() {
                first_violation = Some(r.details.clone());
            }
            verdict = verdict.and(r.verdict);
            let tag = format!("{} vs {}", bases[i].display_name(), bases[j].display_name());
            estimates.extend(r.estimates.into_iter().map(|mut e| {
                e.label = format!("{} [{tag}]", e.label);
                e
            }));
        }
    }
    let mut report = CheckReport::new("preparation_noncontextuality", model.name(), tolerance, cfg);
    report.n_samples = n_samples;
    report.estimates = estimates;
    report.details = match first_violation {
        Some(d) => format!("{n_pairs} ensemble pairs compared; first contextual pair: {d}"),
        None => format!("{n_pairs} ensemble pairs compared"),
    };
    report.verdict = verdict;
    Ok(report)
}

/// Ontic states reached by preparing ψ that lie outside Λ_φ yet still give
/// outcome φ with positive probability.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OmegaWitness {
    #[cfg_attr(feature = "serde", serde(skip))]
    pub pair: (PureState, PureState),
    /// μ_ψ(Ω).
    pub mu_psi_mass: McEstimate,
    /// ∫_Ω ξ(φ|λ) μ_ψ(λ) dλ.
    pub response_mass: McEstimate,
    pub sample_points: Vec<OnticState>,
}

/// Samples λ ~ μ_ψ and measures Ω = {λ ∉ Λ_φ : ξ(φ|λ) > 0}.
pub fn find_omega_witness<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
    phi: &PureState,
    basis_containing_phi: &MeasurementBasis,
    cfg: &McConfig,
) -> Result<OmegaWitness, CheckError> {
    let k = basis_containing_phi
        .index_of(phi, INVARIANT_TOL)
        .ok_or_else(|| CheckError::NotAnOutcome(phi.display_name()))?;
    let in_omega = |lambda: &OnticState| -> Result<(bool, f64), ModelError> {
        let r = model.response(basis_containing_phi, k, lambda)?;
        Ok((!model.in_support(phi, lambda) && r > 0.0, r))
    };
    let f = |lambda: &OnticState, out: &mut [f64]| match in_omega(lambda) {
        Ok((hit, r)) => {
            out[0] = f64::from(u8::from(hit));
            out[1] = if hit { r } else { 0.0 };
        }
        Err(_) => out.fill(f64::NAN),
    };
    let sampler = |seed, index| model.sample_prepared(psi, seed, index);
    let est = mc_expectations(&f, 2, &sampler, cfg)
        .map_err(|e| super::born::explain(e, |index| in_omega(&sampler(cfg.seed(), index)).map(|_| ())))?;
    let mut sample_points = Vec::new();
    if est[0].mean > 0.0 {
        for index in 0..cfg.n_samples() {
            let lambda = sampler(cfg.seed(), index);
            if in_omega(&lambda)?.0 {
                sample_points.push(lambda);
                if sample_points.len() == MAX_EXEMPLARS {
                    break;
                }
            }
        }
    }
    Ok(OmegaWitness {
        pair: (psi.clone(), phi.clone()),
        mu_psi_mass: est[0],
        response_mass: est[1],
        sample_points,
    })
}

/// Report form of [`find_omega_witness`]: satisfied when Ω is null.
pub fn check_omega_witness<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
    phi: &PureState,
    basis_containing_phi: &MeasurementBasis,
    settings: &CheckSettings,
) -> Result<CheckReport, CheckError> {
    let cfg = &settings.mc;
    let w = find_omega_witness(model, psi, phi, basis_containing_phi, cfg)?;
    let mut report = CheckReport::new("omega_witness", model.name(), settings.mc_tol, cfg);
    report.estimates.push(Estimate::new("mu_psi_mass", &w.mu_psi_mass));
    report.estimates.push(Estimate::new("response_mass", &w.response_mass));
    report.details = format!(
        "ψ={}, φ={}: μ_ψ(Ω) = {:.6}; {} exemplar points",
        psi.display_name(),
        phi.display_name(),
        w.mu_psi_mass.mean,
        w.sample_points.len()
    );
    let verdict = compare(w.mu_psi_mass.mean, w.mu_psi_mass.std_error, settings.mc_tol);
    Ok(report.finish(verdict, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BellMermin, KochenSpecker};
    use crate::qubit::{orthogonal_complement, BlochVector};
    use core::f64::consts::PI;

    fn settings() -> CheckSettings {
        CheckSettings::new(McConfig::new(200_000, 23, 8192).unwrap())
    }

    fn zmix() -> Ensemble {
        Ensemble::even_with_complement(&PureState::plus_z())
    }

    fn xmix() -> Ensemble {
        Ensemble::even_with_complement(&PureState::plus_x())
    }

    #[test]
    fn singleton_ensemble_matches_component_sampler() {
        let psi = PureState::new(BlochVector::from_angles(0.5, 0.5));
        let e = Ensemble::pure(psi.clone());
        let d = ensemble_distribution(&KochenSpecker, &e);
        for i in 0..100 {
            assert_eq!(d.sample(4, i), KochenSpecker.sample_prepared(&psi, 4, i));
        }
    }

    #[test]
    fn mixture_densities() {
        let zm = zmix();
        let xm = xmix();
        let z = ensemble_distribution(&KochenSpecker, &zm);
        let x = ensemble_distribution(&KochenSpecker, &xm);
        for k in 0..16 {
            let phi = k as f64 * 0.4;
            let eq = OnticState::Single(BlochVector::new(libm::cos(phi), libm::sin(phi), 0.0).unwrap());
            assert_eq!(z.density(&eq).unwrap(), Some(0.0));
        }
        let at_x = x.density(&OnticState::Single(BlochVector::PLUS_X)).unwrap().unwrap();
        assert!((at_x - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let bm_e = ensemble_distribution(&BellMermin, &zm);
        let l = BellMermin.sample_prepared(&PureState::plus_z(), 0, 0);
        assert_eq!(bm_e.density(&l).unwrap(), None);
    }

    #[test]
    fn mixture_sampler_draws_both_members() {
        let zm = zmix();
        let d = ensemble_distribution(&BellMermin, &zm);
        let cfg = McConfig::new(100_000, 6, 8192).unwrap();
        let up = mc_expectation(
            |l: &OnticState| f64::from(u8::from(l.as_pair().unwrap().0.z() > 0.0)),
            |s, i| d.sample(s, i),
            &cfg,
        )
        .unwrap();
        assert!((up.mean - 0.5).abs() <= 5.0 * up.std_error, "{up:?}");
    }

    #[test]
    fn ks_is_preparation_contextual() {
        let r = check_preparation_noncontextuality(&KochenSpecker, &zmix(), &xmix(), &settings()).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let tv = r.estimates[0].mean;
        assert!((tv - (core::f64::consts::SQRT_2 - 1.0)).abs() < 1e-3, "{tv}");
        let same = check_preparation_noncontextuality(&KochenSpecker, &zmix(), &zmix(), &settings()).unwrap();
        assert_eq!(same.verdict, Verdict::Satisfied);
        assert_eq!(same.estimates[0].mean, 0.0);
    }

    #[test]
    fn bell_mermin_support_witness() {
        let r = check_preparation_noncontextuality(&BellMermin, &zmix(), &xmix(), &settings()).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.estimates[0].mean, 1.0);
        assert_eq!(r.estimates[1].mean, 0.0);
        let same = check_preparation_noncontextuality(&BellMermin, &xmix(), &xmix(), &settings()).unwrap();
        assert_eq!(same.verdict, Verdict::Satisfied);
    }

    #[test]
    fn different_density_operators_are_rejected() {
        let e = Ensemble::pure(PureState::plus_z());
        let err = check_preparation_noncontextuality(&KochenSpecker, &e, &xmix(), &settings()).unwrap_err();
        assert!(matches!(err, CheckError::DensityMismatch(_)));
    }

    #[test]
    fn omega_witness_examples() {
        let cfg = settings().mc;
        let (z, x) = (PureState::plus_z(), PureState::plus_x());
        let basis = MeasurementBasis::containing(&x);
        let bm = find_omega_witness(&BellMermin, &z, &x, &basis, &cfg).unwrap();
        assert!((bm.mu_psi_mass.mean - 0.5).abs() <= 5.0 * bm.mu_psi_mass.std_error);
        assert_eq!(bm.sample_points.len(), MAX_EXEMPLARS);
        let ks = find_omega_witness(&KochenSpecker, &z, &x, &basis, &cfg).unwrap();
        assert_eq!(ks.mu_psi_mass.mean, 0.0);
        assert!(ks.sample_points.is_empty());
        let perp = orthogonal_complement(&z);
        let w = find_omega_witness(&BellMermin, &z, &perp, &MeasurementBasis::containing(&z), &cfg).unwrap();
        assert_eq!(w.response_mass.mean, 0.0);
        let err = find_omega_witness(&BellMermin, &z, &x, &MeasurementBasis::containing(&z), &cfg).unwrap_err();
        assert!(matches!(err, CheckError::NotAnOutcome(_)));
    }
}
