//! Entangled photon pairs over antipodal modes and their gauge-invariant
//! phase measures.
//!
//! A pair produced in the Schmidt form
//!
//! Ψ = e^{−iβ/2} cos(α/2) |A⟩|A⟩ + e^{+iβ/2} sin(α/2) |B⟩|B⟩
//!
//! is parametrized by an entanglement strength α and an entanglement phase
//! β; |A⟩ and |B⟩ are the antipodal chart states of [`crate::modes`]. After
//! both photons traverse the same mode-converter circuit, every observable
//! here is a function of the four end-state projections
//! p_xy = ⟨X_i|Y_f⟩ alone:
//!
//! * the entangled projection P_Ψ and its separable part P_S;
//! * the geometric phase of entanglement G_Φ = arg P_Ψ − 2(λ_A arg p_aa +
//!   λ_B arg p_bb), the part of the pair's phase that survives removal of
//!   the single-photon dynamic and geometric contributions;
//! * the geometric projection of entanglement G_ℙ = P_Ψ − P_S, which is
//!   real-valued whenever the end states derive from a common chart;
//! * solo-transit variants (only one photon travels), which demonstrate
//!   that G_ℙ needs *both* photons in the circuit: G_ℙ^solo ≡ 0.
//!
//! Dynamic phases superpose: the pair's dynamic phase is the weighted sum
//! 2λ_A Φ_dyn,A + 2λ_B Φ_dyn,B of single-photon dynamic phases, which
//! [`entangled_dynamic_phase`] evaluates and the four-amplitude quadrature
//! over [`TwoPhotonPath`] confirms independently.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::angle::{seam_arg, wrap_to_pi};
use crate::holonomy::{dynamic_phase, HolonomyError, PathState, SampledPath, StatePath};
use crate::modes::{state_a, state_b, ModeVector, SpherePoint};

/// Magnitude below which an argument (phase) is undefined.
const PHASE_EPS: f64 = 1e-12;

/// Imaginary part above which the geometric projection is rejected.
const REALNESS_TOL: f64 = 1e-10;

/// Mode overlap above which two "antipodal" modes are rejected.
const ANTIPODAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BiPhotonError {
    #[error("phase undefined: |{name}| = {magnitude} is below 1e-12")]
    UndefinedPhase { name: &'static str, magnitude: f64 },
    #[error(
        "projection combination has imaginary part {imaginary}; the end states \
         were not built from a common chart"
    )]
    NotReal { imaginary: f64 },
    #[error("{name} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("modes are not antipodal: |⟨a|b⟩| = {overlap} exceeds 1e-10")]
    NotAntipodal { overlap: f64 },
    #[error("paths do not share an s-grid (first difference at sample {index})")]
    GridMismatch { index: usize },
    #[error(transparent)]
    Path(#[from] HolonomyError),
}

/// Schmidt parameters (α, β) of a tunably entangled pair.
///
/// α ∈ [0, 2π) sets the entanglement strength (α = 0 separable on |A⟩|A⟩,
/// α = π/2 maximal, α = π separable on |B⟩|B⟩); β is the relative Schmidt
/// phase. Inputs are folded modulo 2π, under which every derived quantity
/// is periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementParams {
    alpha: f64,
    beta: f64,
}

impl EntanglementParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        EntanglementParams { alpha: alpha.rem_euclid(2.0 * PI), beta }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Reduced-state eigenvalue λ_A = cos²(α/2).
    pub fn lambda_a(&self) -> f64 {
        (0.5 * self.alpha).cos().powi(2)
    }

    /// Reduced-state eigenvalue λ_B = 1 − λ_A (the pair sums to 1 exactly).
    pub fn lambda_b(&self) -> f64 {
        1.0 - self.lambda_a()
    }

    /// Schmidt amplitude on |A⟩|A⟩: e^{−iβ/2} cos(α/2).
    pub fn weight_a(&self) -> Complex64 {
        Complex64::from_polar((0.5 * self.alpha).cos(), -0.5 * self.beta)
    }

    /// Schmidt amplitude on |B⟩|B⟩: e^{+iβ/2} sin(α/2).
    pub fn weight_b(&self) -> Complex64 {
        Complex64::from_polar((0.5 * self.alpha).sin(), 0.5 * self.beta)
    }
}

/// Reduced single-photon eigenvalues (λ_A, λ_B) of the pair.
pub fn reduced_eigenvalues(params: &EntanglementParams) -> (f64, f64) {
    (params.lambda_a(), params.lambda_b())
}

/// A photon pair: Schmidt parameters plus the two antipodal carrier modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiPhotonState {
    pub params: EntanglementParams,
    pub mode_a: ModeVector,
    pub mode_b: ModeVector,
}

impl BiPhotonState {
    /// Build a pair over explicit carrier modes, enforcing that the modes
    /// are orthogonal (antipodal on the sphere) and unit-normalized, which
    /// together make the four-amplitude vector unit-normalized.
    pub fn new(
        params: EntanglementParams,
        mode_a: ModeVector,
        mode_b: ModeVector,
    ) -> Result<Self, BiPhotonError> {
        let cross = ModeVector::overlap(&mode_a, &mode_b).norm();
        if cross > ANTIPODAL_TOL {
            return Err(BiPhotonError::NotAntipodal { overlap: cross });
        }
        for m in [&mode_a, &mode_b] {
            let norm = PathState::norm(m);
            if (norm - 1.0).abs() > ANTIPODAL_TOL {
                return Err(BiPhotonError::OutOfRange {
                    name: "mode norm",
                    value: norm,
                    lo: 1.0 - ANTIPODAL_TOL,
                    hi: 1.0 + ANTIPODAL_TOL,
                });
            }
        }
        Ok(BiPhotonState { params, mode_a, mode_b })
    }

    /// The pair whose carrier modes are the chart frame at `point`.
    pub fn from_point(params: EntanglementParams, point: &SpherePoint) -> Self {
        BiPhotonState::new(params, state_a(point), state_b(point))
            .expect("chart frames are orthonormal")
    }

    /// Four amplitudes of w_A|a⟩|a⟩ + w_B|b⟩|b⟩ in the (++, +−, −+, −−)
    /// orbital-angular-momentum product basis.
    pub fn amplitudes(&self) -> TwoPhotonAmplitudes {
        let (wa, wb) = (self.params.weight_a(), self.params.weight_b());
        let (a, b) = (&self.mode_a, &self.mode_b);
        TwoPhotonAmplitudes {
            pp: wa * a.c_plus * a.c_plus + wb * b.c_plus * b.c_plus,
            pm: wa * a.c_plus * a.c_minus + wb * b.c_plus * b.c_minus,
            mp: wa * a.c_minus * a.c_plus + wb * b.c_minus * b.c_plus,
            mm: wa * a.c_minus * a.c_minus + wb * b.c_minus * b.c_minus,
        }
    }
}

/// The four end-state projections p_xy = ⟨X_i|Y_f⟩ of a circuit transit.
///
/// When both end-state pairs derive from a common chart the components obey
/// p_bb = conj(p_aa) and p_ba = −conj(p_ab); [`ProjectionSet::relations_residual`]
/// measures any violation. Raw construction is deliberately unchecked so
/// closed-form reference values can be represented too.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionSet {
    pub p_aa: Complex64,
    pub p_bb: Complex64,
    pub p_ab: Complex64,
    pub p_ba: Complex64,
}

impl ProjectionSet {
    pub fn new(p_aa: Complex64, p_bb: Complex64, p_ab: Complex64, p_ba: Complex64) -> Self {
        ProjectionSet { p_aa, p_bb, p_ab, p_ba }
    }

    /// Build the full set from the two independent components, imposing the
    /// common-chart relations exactly.
    pub fn from_common_chart(p_aa: Complex64, p_ab: Complex64) -> Self {
        ProjectionSet { p_aa, p_bb: p_aa.conj(), p_ab, p_ba: -p_ab.conj() }
    }

    /// Largest deviation from the common-chart relations.
    pub fn relations_residual(&self) -> f64 {
        let r1 = (self.p_bb - self.p_aa.conj()).norm();
        let r2 = (self.p_ba + self.p_ab.conj()).norm();
        r1.max(r2)
    }
}

/// Entangled two-photon projection
/// P_Ψ = (sin α/2)(e^{iβ} p_ab² + e^{−iβ} p_ba²) + λ_A p_aa² + λ_B p_bb².
pub fn entangled_projection(params: &EntanglementParams, proj: &ProjectionSet) -> Complex64 {
    cross_projection(params, proj) + separable_projection(params, proj)
}

/// Separable part P_S = λ_A p_aa² + λ_B p_bb².
pub fn separable_projection(params: &EntanglementParams, proj: &ProjectionSet) -> Complex64 {
    params.lambda_a() * proj.p_aa * proj.p_aa + params.lambda_b() * proj.p_bb * proj.p_bb
}

/// Cross part (sin α/2)(e^{iβ} p_ab² + e^{−iβ} p_ba²) — the entangled
/// excess P_Ψ − P_S.
fn cross_projection(params: &EntanglementParams, proj: &ProjectionSet) -> Complex64 {
    let phase = Complex64::from_polar(1.0, params.beta());
    0.5 * params.alpha().sin()
        * (phase * proj.p_ab * proj.p_ab + phase.conj() * proj.p_ba * proj.p_ba)
}

/// Geometric phase of entanglement
/// G_Φ = arg P_Ψ − 2(λ_A arg p_aa + λ_B arg p_bb), wrapped to (−π, π].
///
/// Subtracting the λ-weighted single-photon phases removes everything a
/// separable pair would accumulate; what remains is attributable to
/// entanglement alone and is gauge-invariant. The λ-weighted arguments are
/// branch-sensitive, so all arguments are taken through
/// [`seam_arg`], which keeps conjugate-pair projections consistent at the
/// ±π seam even under floating-point noise (aligned converters give
/// p_aa = p_bb = −1 + O(ε)i, both read as argument +π, and G_Φ = 0 there
/// as it must be).
pub fn g_phi(params: &EntanglementParams, proj: &ProjectionSet) -> Result<f64, BiPhotonError> {
    let p_psi = entangled_projection(params, proj);
    for (name, mag) in [
        ("P_Ψ", p_psi.norm()),
        ("p_aa", proj.p_aa.norm()),
        ("p_bb", proj.p_bb.norm()),
    ] {
        if mag < PHASE_EPS {
            return Err(BiPhotonError::UndefinedPhase { name, magnitude: mag });
        }
    }
    Ok(wrap_to_pi(
        seam_arg(p_psi)
            - 2.0
                * (params.lambda_a() * seam_arg(proj.p_aa)
                    + params.lambda_b() * seam_arg(proj.p_bb)),
    ))
}

/// Geometric projection of entanglement
/// G_ℙ = (sin α/2)(e^{iβ} p_ab² + e^{−iβ} p_ba²), a real number.
///
/// Realness follows from the common-chart relations (p_ba² = conj(p_ab²)
/// makes the two terms conjugates); a surviving imaginary part signals an
/// end-state pair that was not built from a common chart.
pub fn g_proj(params: &EntanglementParams, proj: &ProjectionSet) -> Result<f64, BiPhotonError> {
    let z = cross_projection(params, proj);
    if z.im.abs() > REALNESS_TOL {
        return Err(BiPhotonError::NotReal { imaginary: z.im });
    }
    Ok(z.re)
}

/// Projection when only photon #1 traverses the circuit:
/// λ_A p_aa + λ_B p_bb. The idle photon turns the quadratic projections
/// into linear ones and removes the cross terms entirely.
pub fn solo_projection(params: &EntanglementParams, proj: &ProjectionSet) -> Complex64 {
    params.lambda_a() * proj.p_aa + params.lambda_b() * proj.p_bb
}

/// Geometric projection for a solo transit: identically zero.
///
/// With photon #2 idle, the entangled projection picks up the idle-photon
/// overlaps ⟨a_i|a_i⟩ = 1 on the direct terms and ⟨a_i|b_i⟩ = 0 on the
/// cross terms, collapsing to exactly the separable expression; their
/// difference — the quantity that would be a geometric projection — is
/// zero in exact arithmetic, and this function computes it that way rather
/// than returning a literal.
pub fn g_proj_solo(params: &EntanglementParams, proj: &ProjectionSet) -> f64 {
    let idle_direct = Complex64::new(1.0, 0.0); // ⟨a_i|a_i⟩ = ⟨b_i|b_i⟩
    let idle_cross = Complex64::new(0.0, 0.0); // ⟨a_i|b_i⟩ = ⟨b_i|a_i⟩
    let phase = Complex64::from_polar(1.0, params.beta());
    let entangled_solo = 0.5
        * params.alpha().sin()
        * (phase * proj.p_ab * idle_cross + phase.conj() * proj.p_ba * idle_cross)
        + params.lambda_a() * proj.p_aa * idle_direct
        + params.lambda_b() * proj.p_bb * idle_direct;
    let separable_solo = solo_projection(params, proj);
    (entangled_solo - separable_solo).re
}

/// Geometric phase for a solo transit:
/// arg(λ_A p_aa + λ_B p_bb) − (λ_A arg p_aa + λ_B arg p_bb), wrapped.
///
/// Nonzero in general — one traveling photon is enough for a phase — in
/// contrast to the projection, which needs both.
pub fn g_phi_solo(params: &EntanglementParams, proj: &ProjectionSet) -> Result<f64, BiPhotonError> {
    let solo = solo_projection(params, proj);
    for (name, mag) in [
        ("solo projection", solo.norm()),
        ("p_aa", proj.p_aa.norm()),
        ("p_bb", proj.p_bb.norm()),
    ] {
        if mag < PHASE_EPS {
            return Err(BiPhotonError::UndefinedPhase { name, magnitude: mag });
        }
    }
    Ok(wrap_to_pi(
        seam_arg(solo)
            - (params.lambda_a() * seam_arg(proj.p_aa)
                + params.lambda_b() * seam_arg(proj.p_bb)),
    ))
}

/// Pair dynamic phase 2λ_A Φ_dyn,A + 2λ_B Φ_dyn,B.
///
/// Projection and summation commute for the dynamic phase, so the pair
/// value is the weighted sum of single-photon values — entanglement does
/// not influence dynamic-phase accumulation. The four-amplitude quadrature
/// over [`entangled_pair_path`] provides the independent check.
pub fn entangled_dynamic_phase(
    path_a: &StatePath,
    path_b: &StatePath,
    params: &EntanglementParams,
) -> Result<f64, BiPhotonError> {
    check_shared_grid(path_a, path_b)?;
    let phi_a = dynamic_phase(path_a)?;
    let phi_b = dynamic_phase(path_b)?;
    Ok(2.0 * params.lambda_a() * phi_a + 2.0 * params.lambda_b() * phi_b)
}

/// Effective Schmidt mode number K = 1/(λ_A² + λ_B²) = 4/(3 + cos 2α) ∈ [1, 2].
pub fn schmidt_number(params: &EntanglementParams) -> f64 {
    4.0 / (3.0 + (2.0 * params.alpha()).cos())
}

/// Which preimage of K the inversion should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchmidtBranch {
    /// α ∈ [0, π/2]
    Lower,
    /// α ∈ [π/2, π]
    Upper,
}

/// Invert the Schmidt number: α = ½ arccos(4/K − 3) on the lower branch,
/// π minus that on the upper branch.
pub fn alpha_from_schmidt(k: f64, branch: SchmidtBranch) -> Result<f64, BiPhotonError> {
    if !(1.0 - 1e-9..=2.0 + 1e-9).contains(&k) {
        return Err(BiPhotonError::OutOfRange { name: "K", value: k, lo: 1.0, hi: 2.0 });
    }
    let lower = 0.5 * (4.0 / k.clamp(1.0, 2.0) - 3.0).clamp(-1.0, 1.0).acos();
    Ok(match branch {
        SchmidtBranch::Lower => lower,
        SchmidtBranch::Upper => PI - lower,
    })
}

/// The four amplitudes of a two-photon state in the (++, +−, −+, −−)
/// orbital-angular-momentum product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonAmplitudes {
    pub pp: Complex64,
    pub pm: Complex64,
    pub mp: Complex64,
    pub mm: Complex64,
}

impl PathState for TwoPhotonAmplitudes {
    fn overlap(&self, other: &Self) -> Complex64 {
        self.pp.conj() * other.pp
            + self.pm.conj() * other.pm
            + self.mp.conj() * other.mp
            + self.mm.conj() * other.mm
    }

    fn with_phase(&self, gamma: f64) -> Self {
        let phase = Complex64::from_polar(1.0, gamma);
        TwoPhotonAmplitudes {
            pp: phase * self.pp,
            pm: phase * self.pm,
            mp: phase * self.mp,
            mm: phase * self.mm,
        }
    }
}

/// A sampled path of two-photon amplitude vectors.
pub type TwoPhotonPath = SampledPath<TwoPhotonAmplitudes>;

/// The four-amplitude path of the entangled pair
/// w_A |a(s)⟩|a(s)⟩ + w_B |b(s)⟩|b(s)⟩ built from two single-photon paths
/// on a shared s-grid.
pub fn entangled_pair_path(
    params: &EntanglementParams,
    path_a: &StatePath,
    path_b: &StatePath,
) -> Result<TwoPhotonPath, BiPhotonError> {
    check_shared_grid(path_a, path_b)?;
    let (wa, wb) = (params.weight_a(), params.weight_b());
    let samples = path_a
        .samples()
        .iter()
        .zip(path_b.samples())
        .map(|(&(s, a), &(_, b))| {
            (
                s,
                TwoPhotonAmplitudes {
                    pp: wa * a.c_plus * a.c_plus + wb * b.c_plus * b.c_plus,
                    pm: wa * a.c_plus * a.c_minus + wb * b.c_plus * b.c_minus,
                    mp: wa * a.c_minus * a.c_plus + wb * b.c_minus * b.c_plus,
                    mm: wa * a.c_minus * a.c_minus + wb * b.c_minus * b.c_minus,
                },
            )
        })
        .collect();
    Ok(TwoPhotonPath::from_samples(samples)?)
}

/// The product path |x(s)⟩ ⊗ |y(s)⟩ of two independently evolving photons.
pub fn product_pair_path(
    path_x: &StatePath,
    path_y: &StatePath,
) -> Result<TwoPhotonPath, BiPhotonError> {
    check_shared_grid(path_x, path_y)?;
    let samples = path_x
        .samples()
        .iter()
        .zip(path_y.samples())
        .map(|(&(s, x), &(_, y))| {
            (
                s,
                TwoPhotonAmplitudes {
                    pp: x.c_plus * y.c_plus,
                    pm: x.c_plus * y.c_minus,
                    mp: x.c_minus * y.c_plus,
                    mm: x.c_minus * y.c_minus,
                },
            )
        })
        .collect();
    Ok(TwoPhotonPath::from_samples(samples)?)
}

fn check_shared_grid(a: &StatePath, b: &StatePath) -> Result<(), BiPhotonError> {
    if a.len() != b.len() {
        return Err(BiPhotonError::GridMismatch { index: a.len().min(b.len()) });
    }
    for (i, (sa, sb)) in a
        .samples()
        .iter()
        .map(|(s, _)| s)
        .zip(b.samples().iter().map(|(s, _)| s))
        .enumerate()
    {
        if (sa - sb).abs() > 1e-12 {
            return Err(BiPhotonError::GridMismatch { index: i });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Eq.-free fixture: the common-chart projections of the standard
    /// circuit, p_aa = −cos 2η + i sin 2η cos θ, p_ab = i sin 2η sin θ.
    fn circuit_projections(eta: f64, theta: f64) -> ProjectionSet {
        ProjectionSet::from_common_chart(
            c(-(2.0 * eta).cos(), (2.0 * eta).sin() * theta.cos()),
            c(0.0, (2.0 * eta).sin() * theta.sin()),
        )
    }

    #[test]
    fn eigenvalues_at_landmarks() {
        let (la, lb) = reduced_eigenvalues(&EntanglementParams::new(0.0, 0.0));
        assert_eq!((la, lb), (1.0, 0.0));
        let (la, lb) = reduced_eigenvalues(&EntanglementParams::new(0.5 * PI, 0.0));
        assert_abs_diff_eq!(la, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(lb, 0.5, epsilon = 1e-15);
        let (la, lb) = reduced_eigenvalues(&EntanglementParams::new(PI, 0.0));
        assert_abs_diff_eq!(la, 0.0, epsilon = 1e-30);
        assert_abs_diff_eq!(lb, 1.0, epsilon = 1e-30);
    }

    #[test]
    fn eigenvalues_sum_to_one_exactly() {
        for k in 0..400 {
            let p = EntanglementParams::new(0.017 * k as f64, 0.0);
            assert_eq!(p.lambda_a() + p.lambda_b(), 1.0);
        }
    }

    #[test]
    fn alpha_is_folded() {
        let p = EntanglementParams::new(-0.3, 1.0);
        assert_abs_diff_eq!(p.alpha(), 2.0 * PI - 0.3, epsilon = 1e-15);
        assert!(EntanglementParams::new(2.0 * PI, 0.0).alpha().abs() < 1e-15);
    }

    #[test]
    fn entangled_projection_limits() {
        let proj = circuit_projections(0.37, 1.1);
        // Separable limit: everything collapses onto p_aa².
        let p = entangled_projection(&EntanglementParams::new(0.0, 0.64), &proj);
        assert!((p - proj.p_aa * proj.p_aa).norm() < 1e-15);
        // Identity circuit.
        let identity = ProjectionSet::from_common_chart(c(1.0, 0.0), c(0.0, 0.0));
        let p = entangled_projection(&EntanglementParams::new(1.2, 0.3), &identity);
        assert!((p - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn entangled_projection_at_maximal_cross_transfer() {
        // η = π/4, θ_i = π/2: p_aa = 0 and the cross projections are ±i,
        // so P_Ψ = (1/2)((±i)² + (±i)²) = −1 for β = 0, either sign.
        let params = EntanglementParams::new(0.5 * PI, 0.0);
        let p = entangled_projection(&params, &circuit_projections(0.25 * PI, 0.5 * PI));
        assert!((p - c(-1.0, 0.0)).norm() < 1e-15);
        let flipped = ProjectionSet::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0));
        let p = entangled_projection(&params, &flipped);
        assert!((p - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn separable_projection_values() {
        let proj = circuit_projections(0.37, 1.1);
        let p = separable_projection(&EntanglementParams::new(0.0, 0.0), &proj);
        assert!((p - proj.p_aa * proj.p_aa).norm() < 1e-15);
        let identity = ProjectionSet::from_common_chart(c(1.0, 0.0), c(0.0, 0.0));
        let p = separable_projection(&EntanglementParams::new(0.9, 0.0), &identity);
        assert!((p - c(1.0, 0.0)).norm() < 1e-15);
        let p = separable_projection(
            &EntanglementParams::new(0.9, 0.0),
            &circuit_projections(0.25 * PI, 0.5 * PI),
        );
        assert!(p.norm() < 1e-15);
    }

    #[test]
    fn g_phi_vanishes_without_entanglement() {
        // arg(p_aa²) − 2 arg(p_aa) is 0 modulo the branch; the wrap must
        // absorb the 2π whenever arg p_aa leaves (−π/2, π/2].
        for (re, im) in [(0.3, 0.8), (-0.5, 0.6), (-0.5, -0.6), (0.2, -0.9)] {
            let proj = ProjectionSet::from_common_chart(c(re, im), c(0.1, 0.0));
            let g = g_phi(&EntanglementParams::new(0.0, 0.4), &proj).unwrap();
            assert_abs_diff_eq!(g, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn g_phi_vanishes_for_aligned_converters() {
        // η = 0: p_aa = p_bb = −1, no cross transfer, for any entanglement.
        let proj = circuit_projections(0.0, 0.77);
        for alpha in [0.0, 0.4, 0.5 * PI, 2.2] {
            let g = g_phi(&EntanglementParams::new(alpha, 0.9), &proj).unwrap();
            assert_abs_diff_eq!(g, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn g_phi_undefined_where_projection_vanishes() {
        // Maximal entanglement at η = π/8, θ_i = π/2: the cross part is
        // +1/2 and the separable part −1/2 ⇒ P_Ψ = 0, no phase to read.
        let params = EntanglementParams::new(0.5 * PI, 0.0);
        let proj = circuit_projections(0.125 * PI, 0.5 * PI);
        assert!(matches!(
            g_phi(&params, &proj),
            Err(BiPhotonError::UndefinedPhase { name: "P_Ψ", .. })
        ));
    }

    #[test]
    fn g_phi_undefined_on_orthogonal_end_states() {
        let params = EntanglementParams::new(0.3, 0.0);
        let proj = circuit_projections(0.25 * PI, 0.5 * PI); // p_aa = 0
        assert!(matches!(
            g_phi(&params, &proj),
            Err(BiPhotonError::UndefinedPhase { name: "p_aa", .. })
        ));
    }

    #[test]
    fn g_proj_limits_and_extremum() {
        let proj = circuit_projections(0.33, 0.9);
        for alpha in [0.0, PI] {
            let g = g_proj(&EntanglementParams::new(alpha, 0.2), &proj).unwrap();
            assert_abs_diff_eq!(g, 0.0, epsilon = 1e-15);
        }
        let no_cross = ProjectionSet::from_common_chart(c(0.6, 0.8), c(0.0, 0.0));
        let g = g_proj(&EntanglementParams::new(1.1, 0.5), &no_cross).unwrap();
        assert_abs_diff_eq!(g, 0.0, epsilon = 1e-15);
        // Maximal positive value at α = π/2, β = π, θ_i = π/2, η = π/4:
        // −sin α cos β sin²θ sin²2η = +1.
        let g = g_proj(
            &EntanglementParams::new(0.5 * PI, PI),
            &circuit_projections(0.25 * PI, 0.5 * PI),
        )
        .unwrap();
        assert_abs_diff_eq!(g, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn g_proj_closed_form_over_a_grid() {
        // G_ℙ = −sin α cos β sin²θ sin²2η on the standard circuit.
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    for l in 0..5 {
                        let (alpha, beta) = (0.11 + 0.7 * i as f64, -1.2 + 0.83 * j as f64);
                        let (eta, theta) = (0.07 + 0.36 * k as f64, 0.13 + 0.67 * l as f64);
                        let g = g_proj(
                            &EntanglementParams::new(alpha, beta),
                            &circuit_projections(eta, theta),
                        )
                        .unwrap();
                        let expect = -alpha.sin()
                            * beta.cos()
                            * theta.sin().powi(2)
                            * (2.0 * eta).sin().powi(2);
                        assert_abs_diff_eq!(g, expect, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn g_proj_rejects_foreign_end_states() {
        let bad = ProjectionSet::new(c(0.5, 0.0), c(0.5, 0.0), c(0.8, 0.0), c(0.3, 0.0));
        assert!(matches!(
            g_proj(&EntanglementParams::new(1.0, 0.4), &bad),
            Err(BiPhotonError::NotReal { .. })
        ));
    }

    #[test]
    fn solo_projection_values() {
        let proj = circuit_projections(0.37, 1.1);
        let s = solo_projection(&EntanglementParams::new(0.0, 0.0), &proj);
        assert!((s - proj.p_aa).norm() < 1e-15);
        // α = π/2, η = π/4, θ_i = π/2: p_aa = −p_bb* = 0 ⇒ solo = 0.
        let s = solo_projection(
            &EntanglementParams::new(0.5 * PI, 0.0),
            &circuit_projections(0.25 * PI, 0.5 * PI),
        );
        assert!(s.norm() < 1e-15);
        // α = π/2, η = π/6, θ_i = 0: the imaginary parts of p_aa and p_bb
        // cancel, leaving −cos(π/3) = −1/2.
        let s = solo_projection(
            &EntanglementParams::new(0.5 * PI, 0.0),
            &circuit_projections(PI / 6.0, 0.0),
        );
        assert!((s - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn g_proj_solo_is_identically_zero() {
        let params = [
            EntanglementParams::new(0.5 * PI, 0.0),
            EntanglementParams::new(0.3, 1.7),
            EntanglementParams::new(2.9, -0.4),
        ];
        let projs = [
            circuit_projections(0.2, 0.9),
            circuit_projections(0.25 * PI, 0.5 * PI),
            ProjectionSet::from_common_chart(c(0.1, -0.7), c(0.4, 0.3)),
        ];
        for p in &params {
            for proj in &projs {
                assert_eq!(g_proj_solo(p, proj), 0.0);
            }
        }
    }

    #[test]
    fn g_phi_solo_values() {
        let proj = circuit_projections(0.41, 0.73);
        assert_abs_diff_eq!(
            g_phi_solo(&EntanglementParams::new(0.0, 0.0), &proj).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        // Real positive projections commute with the weighted argument.
        let pos = ProjectionSet::new(c(0.9, 0.0), c(0.8, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_abs_diff_eq!(
            g_phi_solo(&EntanglementParams::new(1.3, 0.0), &pos).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        // α = π/2, η = π/8, θ_i = 0: solo = −cos(π/4) is real negative while
        // the weighted single-photon arguments cancel ⇒ G_Φ^solo = π.
        let g = g_phi_solo(
            &EntanglementParams::new(0.5 * PI, 0.0),
            &circuit_projections(0.125 * PI, 0.0),
        )
        .unwrap();
        assert_abs_diff_eq!(g, PI, epsilon = 1e-15);
    }

    #[test]
    fn schmidt_number_landmarks() {
        assert_eq!(schmidt_number(&EntanglementParams::new(0.0, 0.0)), 1.0);
        assert_eq!(schmidt_number(&EntanglementParams::new(0.5 * PI, 0.0)), 2.0);
        assert_abs_diff_eq!(
            schmidt_number(&EntanglementParams::new(0.25 * PI, 0.0)),
            4.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn schmidt_number_equals_inverse_purity() {
        for k in 0..50 {
            let p = EntanglementParams::new(0.13 * k as f64, 0.0);
            let purity = p.lambda_a().powi(2) + p.lambda_b().powi(2);
            assert_abs_diff_eq!(schmidt_number(&p), 1.0 / purity, epsilon = 1e-12);
        }
    }

    #[test]
    fn alpha_from_schmidt_inverts() {
        assert_abs_diff_eq!(alpha_from_schmidt(1.0, SchmidtBranch::Lower).unwrap(), 0.0);
        assert_abs_diff_eq!(
            alpha_from_schmidt(2.0, SchmidtBranch::Lower).unwrap(),
            0.5 * PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            alpha_from_schmidt(4.0 / 3.0, SchmidtBranch::Lower).unwrap(),
            0.25 * PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            alpha_from_schmidt(4.0 / 3.0, SchmidtBranch::Upper).unwrap(),
            0.75 * PI,
            epsilon = 1e-15
        );
        for i in 0..=40 {
            let k = 1.0 + i as f64 / 40.0;
            for branch in [SchmidtBranch::Lower, SchmidtBranch::Upper] {
                let alpha = alpha_from_schmidt(k, branch).unwrap();
                let back = schmidt_number(&EntanglementParams::new(alpha, 0.0));
                assert_abs_diff_eq!(back, k, epsilon = 1e-12);
            }
        }
        assert!(matches!(
            alpha_from_schmidt(0.99, SchmidtBranch::Lower),
            Err(BiPhotonError::OutOfRange { .. })
        ));
        assert!(matches!(
            alpha_from_schmidt(2.01, SchmidtBranch::Upper),
            Err(BiPhotonError::OutOfRange { .. })
        ));
    }

    #[test]
    fn biphoton_state_enforces_antipodality() {
        let params = EntanglementParams::new(1.0, 0.5);
        let p = SpherePoint::new(0.8, 1.3, 0.2);
        let pair = BiPhotonState::from_point(params, &p);
        let amps = pair.amplitudes();
        assert_abs_diff_eq!(PathState::norm(&amps), 1.0, epsilon = 1e-12);
        let same = BiPhotonState::new(params, state_a(&p), state_a(&p));
        assert!(matches!(same, Err(BiPhotonError::NotAntipodal { .. })));
    }

    #[test]
    fn pair_dynamic_phase_superposes() {
        // Pair quadrature on the four-amplitude path equals the weighted
        // single-photon sum: entanglement does not touch dynamic phase.
        let traj = |s: f64| SpherePoint::new(1.0 + 0.3 * s.sin(), 0.7 * s, 0.2 * s);
        let pa = StatePath::from_fn(|s| state_a(&traj(s)), 0.0, 1.4, 513).unwrap();
        let pb = StatePath::from_fn(|s| state_b(&traj(s)), 0.0, 1.4, 513).unwrap();
        for (alpha, beta) in [(0.0, 0.0), (0.5 * PI, 0.3), (1.9, -0.8)] {
            let params = EntanglementParams::new(alpha, beta);
            let weighted = entangled_dynamic_phase(&pa, &pb, &params).unwrap();
            let pair = entangled_pair_path(&params, &pa, &pb).unwrap();
            let direct = dynamic_phase(&pair).unwrap();
            assert_abs_diff_eq!(direct, weighted, epsilon = 1e-10);
        }
        // Maximal entanglement: the antisymmetric single-photon phases cancel.
        let params = EntanglementParams::new(0.5 * PI, 0.0);
        assert_abs_diff_eq!(
            entangled_dynamic_phase(&pa, &pb, &params).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // No entanglement: twice the single-photon phase.
        let params = EntanglementParams::new(0.0, 0.0);
        assert_abs_diff_eq!(
            entangled_dynamic_phase(&pa, &pb, &params).unwrap(),
            2.0 * dynamic_phase(&pa).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn cross_mode_product_path_has_no_dynamic_phase() {
        // |A⟩⊗|B⟩ along a common trajectory: each pair increment is
        // o_a · conj(o_a), real positive, so the phase vanishes identically.
        let traj = |s: f64| SpherePoint::new(0.9 + 0.2 * (3.0 * s).cos(), 1.1 * s, 0.4 * s);
        let pa = StatePath::from_fn(|s| state_a(&traj(s)), 0.0, 1.0, 513).unwrap();
        let pb = StatePath::from_fn(|s| state_b(&traj(s)), 0.0, 1.0, 513).unwrap();
        let cross = product_pair_path(&pa, &pb).unwrap();
        assert_eq!(dynamic_phase(&cross).unwrap(), 0.0);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let traj = |s: f64| SpherePoint::new(1.0, 0.5 * s, 0.0);
        let pa = StatePath::from_fn(|s| state_a(&traj(s)), 0.0, 1.0, 129).unwrap();
        let pb = StatePath::from_fn(|s| state_b(&traj(s)), 0.0, 1.0, 257).unwrap();
        let params = EntanglementParams::new(1.0, 0.0);
        assert!(matches!(
            entangled_dynamic_phase(&pa, &pb, &params),
            Err(BiPhotonError::GridMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn prop_common_chart_sets_behave(
            re_aa in -0.9f64..0.9,
            im_aa in -0.9f64..0.9,
            re_ab in -0.9f64..0.9,
            im_ab in -0.9f64..0.9,
            alpha in 0.0f64..(2.0 * PI),
            beta in -3.0f64..3.0,
        ) {
            let proj = ProjectionSet::from_common_chart(c(re_aa, im_aa), c(re_ab, im_ab));
            let params = EntanglementParams::new(alpha, beta);
            prop_assert!(proj.relations_residual() < 1e-15);
            // Realness of the geometric projection holds by construction.
            let g = g_proj(&params, &proj).unwrap();
            // And the decomposition P_Ψ = P_S + G_ℙ is exact.
            let psi = entangled_projection(&params, &proj);
            let sep = separable_projection(&params, &proj);
            prop_assert!((psi - sep - c(g, 0.0)).norm() < 1e-14);
            prop_assert_eq!(g_proj_solo(&params, &proj), 0.0);
        }

        #[test]
        fn prop_schmidt_round_trip(alpha in 0.0f64..PI) {
            let k = schmidt_number(&EntanglementParams::new(alpha, 0.0));
            prop_assert!((1.0..=2.0 + 1e-12).contains(&k));
            let branch = if alpha <= 0.5 * PI { SchmidtBranch::Lower } else { SchmidtBranch::Upper };
            let back = alpha_from_schmidt(k, branch).unwrap();
            // cos 2α is even about α = π/2 within each branch, so compare K.
            let k2 = schmidt_number(&EntanglementParams::new(back, 0.0));
            prop_assert!((k - k2).abs() < 1e-12);
        }
    }
}
