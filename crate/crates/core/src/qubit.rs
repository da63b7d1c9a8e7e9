//! Bloch-sphere geometry and the exact quantum predictions that every
//! checker compares against.
//!
//! Pure states are stored as unit Bloch vectors. Amplitudes are derived on
//! demand with the global phase fixed so that the first amplitude is real
//! and nonnegative (and the second is exactly `1` when the first vanishes).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Neg;

use num_complex::Complex64;

/// Maximum deviation from unit norm accepted (and then normalized away) at
/// construction.
pub const NORMALIZE_TOL: f64 = 1e-9;

/// Tolerance on the invariants of validated values (antipodal bases, ensemble
/// weights, density-operator properties).
pub const INVARIANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QubitError {
    #[error("vector ({x}, {y}, {z}) has norm {norm}, not within {NORMALIZE_TOL} of 1")]
    NotUnit { x: f64, y: f64, z: f64, norm: f64 },
    #[error("non-finite coordinate in Bloch vector")]
    NonFinite,
    #[error("basis outcomes are not antipodal (dot product {dot})")]
    NotAntipodal { dot: f64 },
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("ensemble weight {0} is negative or not finite")]
    BadWeight(f64),
    #[error("ensemble weights sum to {0}, not 1")]
    WeightSum(f64),
    #[error("amplitude vector has zero norm")]
    ZeroAmplitudes,
    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensity(&'static str),
}

/// A point on the unit sphere S₂.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "[f64; 3]", into = "[f64; 3]"))]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    pub const PLUS_X: Self = Self::new_unchecked(1.0, 0.0, 0.0);
    pub const MINUS_X: Self = Self::new_unchecked(-1.0, 0.0, 0.0);
    pub const PLUS_Y: Self = Self::new_unchecked(0.0, 1.0, 0.0);
    pub const MINUS_Y: Self = Self::new_unchecked(0.0, -1.0, 0.0);
    pub const PLUS_Z: Self = Self::new_unchecked(0.0, 0.0, 1.0);
    pub const MINUS_Z: Self = Self::new_unchecked(0.0, 0.0, -1.0);

    /// Builds a Bloch vector, normalizing inputs within [`NORMALIZE_TOL`] of
    /// unit norm and rejecting anything further off.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, QubitError> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(QubitError::NonFinite);
        }
        let norm = libm::sqrt(x * x + y * y + z * z);
        if libm::fabs(norm - 1.0) > NORMALIZE_TOL {
            return Err(QubitError::NotUnit { x, y, z, norm });
        }
        if norm == 1.0 {
            return Ok(Self { x, y, z });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Caller guarantees unit norm to round-off.
    pub(crate) const fn new_unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub(crate) fn normalized(x: f64, y: f64, z: f64) -> Self {
        let n = libm::sqrt(x * x + y * y + z * z);
        Self::new_unchecked(x / n, y / n, z / n)
    }

    /// Point with polar angle `theta` (from +z) and azimuth `phi`, radians.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = (libm::sin(theta), libm::cos(theta));
        let (sp, cp) = (libm::sin(phi), libm::cos(phi));
        Self::normalized(st * cp, st * sp, ct)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Euclidean distance in R³.
    pub fn distance(&self, other: &Self) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        libm::sqrt(dx * dx + dy * dy + dz * dz)
    }

    /// Polar angle in `[0, π]`.
    pub fn polar_angle(&self) -> f64 {
        libm::acos(self.z.clamp(-1.0, 1.0))
    }

    /// Azimuth in `(-π, π]`; defined as 0 on the poles.
    pub fn azimuth(&self) -> f64 {
        if self.x == 0.0 && self.y == 0.0 {
            0.0
        } else {
            libm::atan2(self.y, self.x)
        }
    }

    /// Two unit vectors completing `self` to a right-handed orthonormal frame
    /// `(e1, e2, self)`.
    pub fn orthonormal_frame(&self) -> (Self, Self) {
        // Pick the coordinate axis least aligned with self as a seed.
        let seed = if libm::fabs(self.x) <= libm::fabs(self.y) && libm::fabs(self.x) <= libm::fabs(self.z) {
            Self::PLUS_X
        } else if libm::fabs(self.y) <= libm::fabs(self.z) {
            Self::PLUS_Y
        } else {
            Self::PLUS_Z
        };
        let d = seed.dot(self);
        let e1 = Self::normalized(seed.x - d * self.x, seed.y - d * self.y, seed.z - d * self.z);
        let e2 = self.cross(&e1);
        (e1, e2)
    }

    pub(crate) fn cross(&self, o: &Self) -> Self {
        Self::normalized(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// Maps local coordinates `(a, b, c)` in the frame `(e1, e2, self)` to a
    /// point on the sphere. Inputs are assumed to be of unit norm.
    pub(crate) fn in_frame(&self, frame: &(Self, Self), a: f64, b: f64, c: f64) -> Self {
        let (e1, e2) = frame;
        Self::new_unchecked(
            a * e1.x + b * e2.x + c * self.x,
            a * e1.y + b * e2.y + c * self.y,
            a * e1.z + b * e2.z + c * self.z,
        )
    }
}

impl Neg for BlochVector {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new_unchecked(-self.x, -self.y, -self.z)
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = QubitError;

    fn try_from(v: [f64; 3]) -> Result<Self, QubitError> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        v.to_array()
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

/// A qubit pure state, optionally labelled.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    bloch: BlochVector,
    label: Option<String>,
}

impl PureState {
    pub fn new(bloch: BlochVector) -> Self {
        Self { bloch, label: None }
    }

    pub fn labeled(bloch: BlochVector, label: impl Into<String>) -> Self {
        Self {
            bloch,
            label: Some(label.into()),
        }
    }

    pub fn plus_x() -> Self {
        Self::labeled(BlochVector::PLUS_X, "+x")
    }

    pub fn minus_x() -> Self {
        Self::labeled(BlochVector::MINUS_X, "-x")
    }

    pub fn plus_y() -> Self {
        Self::labeled(BlochVector::PLUS_Y, "+y")
    }

    pub fn minus_y() -> Self {
        Self::labeled(BlochVector::MINUS_Y, "-y")
    }

    pub fn plus_z() -> Self {
        Self::labeled(BlochVector::PLUS_Z, "+z")
    }

    pub fn minus_z() -> Self {
        Self::labeled(BlochVector::MINUS_Z, "-z")
    }

    /// The six axis states `+x, -x, +y, -y, +z, -z`.
    pub fn axis_states() -> Vec<Self> {
        alloc::vec![
            Self::plus_x(),
            Self::minus_x(),
            Self::plus_y(),
            Self::minus_y(),
            Self::plus_z(),
            Self::minus_z(),
        ]
    }

    /// State from normalized-or-not amplitudes `(a, b)` in the computational
    /// basis. Global phase is discarded.
    pub fn from_amplitudes(amps: [Complex64; 2]) -> Result<Self, QubitError> {
        Ok(Self::new(amplitudes_to_bloch(amps)?))
    }

    pub fn bloch(&self) -> &BlochVector {
        &self.bloch
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Label for display: the given label, or the Bloch vector.
    pub fn display_name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => alloc::format!("{}", self.bloch),
        }
    }

    /// True when the two states have the same Bloch vector within `tol`.
    pub fn same_state(&self, other: &Self, tol: f64) -> bool {
        self.bloch.distance(&other.bloch) <= tol
    }
}

/// `|⟨φ|ψ⟩|² = (1 + φ⃗·ψ⃗)/2`.
pub fn born_probability(phi: &PureState, psi: &PureState) -> f64 {
    (0.5 * (1.0 + phi.bloch.dot(&psi.bloch))).clamp(0.0, 1.0)
}

/// The state orthogonal to `psi`: antipodal Bloch vector.
///
/// Labels of the form `+a`/`-a` swap sign; other labels gain or lose a
/// trailing `⊥`, so applying this twice restores the original exactly.
pub fn orthogonal_complement(psi: &PureState) -> PureState {
    let label = psi.label.as_deref().map(complement_label);
    PureState {
        bloch: -psi.bloch,
        label,
    }
}

fn complement_label(label: &str) -> String {
    if let Some(rest) = label.strip_prefix('+') {
        alloc::format!("-{rest}")
    } else if let Some(rest) = label.strip_prefix('-') {
        alloc::format!("+{rest}")
    } else if let Some(rest) = label.strip_suffix('⊥') {
        String::from(rest)
    } else {
        alloc::format!("{label}⊥")
    }
}

/// `(cos θ/2, e^{iϕ} sin θ/2)` with the phase conventions of this module.
pub fn bloch_to_amplitudes(psi: &PureState) -> [Complex64; 2] {
    let v = psi.bloch;
    let a = libm::sqrt((0.5 * (1.0 + v.z)).max(0.0));
    let mag_b = libm::sqrt((0.5 * (1.0 - v.z)).max(0.0));
    if a == 0.0 {
        return [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    }
    let phase = v.azimuth();
    [Complex64::new(a, 0.0), Complex64::from_polar(mag_b, phase)]
}

/// Bloch vector of the (normalized) amplitude pair:
/// `x = 2Re(a*b)`, `y = 2Im(a*b)`, `z = |a|² − |b|²`.
pub fn amplitudes_to_bloch(amps: [Complex64; 2]) -> Result<BlochVector, QubitError> {
    let [a, b] = amps;
    let n2 = a.norm_sqr() + b.norm_sqr();
    if !n2.is_finite() || n2 <= 0.0 {
        return Err(QubitError::ZeroAmplitudes);
    }
    let ab = a.conj() * b;
    Ok(BlochVector::normalized(
        2.0 * ab.re / n2,
        2.0 * ab.im / n2,
        (a.norm_sqr() - b.norm_sqr()) / n2,
    ))
}

/// An orthonormal qubit basis: two states with antipodal Bloch vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    outcomes: [PureState; 2],
    label: Option<String>,
}

impl MeasurementBasis {
    pub fn new(first: PureState, second: PureState) -> Result<Self, QubitError> {
        let dot = first.bloch.dot(&second.bloch);
        if first.bloch.distance(&(-second.bloch)) > INVARIANT_TOL {
            return Err(QubitError::NotAntipodal { dot });
        }
        Ok(Self {
            outcomes: [first, second],
            label: None,
        })
    }

    /// `{psi, psi⊥}`.
    pub fn containing(psi: &PureState) -> Self {
        Self {
            outcomes: [psi.clone(), orthogonal_complement(psi)],
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn without_label(mut self) -> Self {
        self.label = None;
        self
    }

    /// Same basis with the outcome order swapped.
    pub fn permuted(&self) -> Self {
        let [a, b] = self.outcomes.clone();
        Self {
            outcomes: [b, a],
            label: self.label.clone(),
        }
    }

    pub fn outcomes(&self) -> &[PureState; 2] {
        &self.outcomes
    }

    pub fn outcome(&self, index: usize) -> Option<&PureState> {
        self.outcomes.get(index)
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Index of the outcome equal to `state` within `tol`, if any.
    pub fn index_of(&self, state: &PureState, tol: f64) -> Option<usize> {
        self.outcomes.iter().position(|o| o.same_state(state, tol))
    }

    pub fn display_name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => alloc::format!(
                "{{{}, {}}}",
                self.outcomes[0].display_name(),
                self.outcomes[1].display_name()
            ),
        }
    }
}

/// A weighted mixture of pure-state preparations.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    entries: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, PureState)>) -> Result<Self, QubitError> {
        if entries.is_empty() {
            return Err(QubitError::EmptyEnsemble);
        }
        let mut sum = 0.0;
        for (w, _) in &entries {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(QubitError::BadWeight(*w));
            }
            sum += w;
        }
        if libm::fabs(sum - 1.0) > INVARIANT_TOL {
            return Err(QubitError::WeightSum(sum));
        }
        Ok(Self { entries })
    }

    pub fn pure(psi: PureState) -> Self {
        Self {
            entries: alloc::vec![(1.0, psi)],
        }
    }

    /// `{½ psi, ½ psi⊥}`.
    pub fn even_with_complement(psi: &PureState) -> Self {
        Self {
            entries: alloc::vec![(0.5, psi.clone()), (0.5, orthogonal_complement(psi))],
        }
    }

    pub fn entries(&self) -> &[(f64, PureState)] {
        &self.entries
    }

    pub fn states(&self) -> impl Iterator<Item = &PureState> {
        self.entries.iter().map(|(_, s)| s)
    }
}

/// A 2×2 density matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator {
    m: [[Complex64; 2]; 2],
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity within
    /// [`INVARIANT_TOL`].
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self, QubitError> {
        if m.iter().flatten().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(QubitError::InvalidDensity("non-finite entry"));
        }
        if (m[0][1] - m[1][0].conj()).norm() > INVARIANT_TOL
            || libm::fabs(m[0][0].im) > INVARIANT_TOL
            || libm::fabs(m[1][1].im) > INVARIANT_TOL
        {
            return Err(QubitError::InvalidDensity("not Hermitian"));
        }
        let rho = Self { m };
        if libm::fabs(rho.trace() - 1.0) > INVARIANT_TOL {
            return Err(QubitError::InvalidDensity("trace is not 1"));
        }
        if rho.eigenvalues()[0] < -INVARIANT_TOL {
            return Err(QubitError::InvalidDensity("negative eigenvalue"));
        }
        Ok(rho)
    }

    /// `I/2`.
    pub fn maximally_mixed() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Self { m: [[h, z], [z, h]] }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &PureState) -> Self {
        let v = bloch_to_amplitudes(psi);
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = v[i] * v[j].conj();
            }
        }
        Self { m }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (a, d) = (self.m[0][0].re, self.m[1][1].re);
        let b = self.m[0][1];
        let half_gap = libm::sqrt(0.25 * (a - d) * (a - d) + b.norm_sqr());
        let mid = 0.5 * (a + d);
        [mid - half_gap, mid + half_gap]
    }

    /// Bloch vector `r` with `ρ = (I + r·σ)/2`; length ≤ 1.
    pub fn bloch_components(&self) -> [f64; 3] {
        let b = self.m[0][1];
        [2.0 * b.re, -2.0 * b.im, self.m[0][0].re - self.m[1][1].re]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `ρ = Σ p_j |ψ_j⟩⟨ψ_j|`.
pub fn ensemble_density_operator(e: &Ensemble) -> DensityOperator {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (w, psi) in e.entries() {
        let p = DensityOperator::pure(psi);
        for (row, prow) in m.iter_mut().zip(&p.m) {
            for (cell, pc) in row.iter_mut().zip(prow) {
                *cell += pc * *w;
            }
        }
    }
    DensityOperator { m }
}

/// True iff the maximum entrywise absolute difference is at most `tol`.
pub fn density_operators_equal(a: &DensityOperator, b: &DensityOperator, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol
}
