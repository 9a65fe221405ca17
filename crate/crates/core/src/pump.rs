//! Pump engineering for thin-crystal Type-I down-conversion.
//!
//! A pump structured as a finite superposition of non-radial (p = 0)
//! Laguerre–Gaussian modes, Φ_pump = Σ_ℓ D_ℓ LG_ℓ, produces a two-photon
//! state with orbital-angular-momentum amplitudes
//!
//! C(ℓ₁, ℓ₂) = D_{ℓ₁+ℓ₂} · f(ℓ₁, ℓ₂),
//!
//! where f is the triple radial overlap of the waist profiles
//! ([`crate::modes::radial_overlap_f`]) and OAM conservation makes every
//! other component vanish identically. Because f > 0, the spectrum the
//! technique can reach is constrained: arg C(ℓ₁, ℓ₂) = arg D_{ℓ₁+ℓ₂} and
//! C(ℓ₁, ℓ₂) = C(ℓ₂, ℓ₁).
//!
//! Inverting the map on the first-order block |ℓ₁| = |ℓ₂| = 1 turns a
//! target set of bi-photon amplitudes (w₊₊, w₊₋, w₋₊, w₋₋) into the three
//! pump coefficients D₋₂, D₀, D₊₂ that generate it. The targets produced
//! by an entangled pair of sphere-of-modes states at polar angle θ_i (zero
//! initial azimuth) have w₊₋ = w₋₊ exactly, so they always lie inside the
//! reachable set.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

use crate::biphoton::EntanglementParams;
use crate::modes::radial_overlap_f;

/// Two determinations of D₀ must agree this closely.
const D0_CONSISTENCY_TOL: f64 = 1e-10;
/// Threshold below which the first-order block of a spectrum counts as empty.
const EMPTY_BLOCK_TOL: f64 = 1e-12;
/// Largest supported spectrum window (factorials beyond this lose exactness).
pub const MAX_WINDOW: u32 = 8;
/// Default spectrum window. Along the pump-supported lines the |C|² mass
/// decays geometrically (ratio → 4/9 per unit of |ℓ|), so truncation keeps
/// a tail; reported spectra are normalized within their stated window.
pub const DEFAULT_WINDOW: u32 = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PumpError {
    #[error(
        "target amplitudes are not symmetric: the two determinations of D₀ \
         differ by {delta:.3e} (w₊₋ must equal w₋₊ for a pump-engineered state)"
    )]
    InconsistentTarget { delta: f64 },
    #[error("first-order block is empty: |C|² sums to {norm_sqr:.3e}")]
    EmptyBlock { norm_sqr: f64 },
    #[error("target amplitudes have norm {norm} instead of 1")]
    NonUnitTarget { norm: f64 },
}

/// The four first-order two-photon amplitudes (w₊₊, w₊₋, w₋₊, w₋₋) in the
/// basis |ℓ₁ℓ₂⟩ ∈ {|++⟩, |+−⟩, |−+⟩, |−−⟩}, normalized to Σ|w|² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetAmplitudes {
    pub w_pp: Complex64,
    pub w_pm: Complex64,
    pub w_mp: Complex64,
    pub w_mm: Complex64,
}

impl TargetAmplitudes {
    /// Build a target, requiring unit norm within 1e-10.
    pub fn new(
        w_pp: Complex64,
        w_pm: Complex64,
        w_mp: Complex64,
        w_mm: Complex64,
    ) -> Result<Self, PumpError> {
        let t = TargetAmplitudes { w_pp, w_pm, w_mp, w_mm };
        let norm = t.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(PumpError::NonUnitTarget { norm });
        }
        Ok(t)
    }

    pub fn norm(&self) -> f64 {
        (self.w_pp.norm_sqr() + self.w_pm.norm_sqr() + self.w_mp.norm_sqr() + self.w_mm.norm_sqr())
            .sqrt()
    }
}

/// Pump coefficients D_ℓ of the p = 0 Laguerre–Gaussian superposition.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PumpSpec {
    pub coefficients: BTreeMap<i32, Complex64>,
}

impl PumpSpec {
    pub fn new(coefficients: BTreeMap<i32, Complex64>) -> Self {
        PumpSpec { coefficients }
    }

    /// A Gaussian pump: the single p = 0, ℓ = 0 mode with unit coefficient.
    pub fn gaussian() -> Self {
        PumpSpec { coefficients: BTreeMap::from([(0, Complex64::new(1.0, 0.0))]) }
    }

    /// D_ℓ, defaulting to zero off the stored support.
    pub fn coefficient(&self, ell: i32) -> Complex64 {
        self.coefficients.get(&ell).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Two-photon OAM spectrum over a square window |ℓ₁|, |ℓ₂| ≤ window.
///
/// Every pair in the window is stored; components killed by OAM
/// conservation hold exact zeros. `normalization` is Σ|C|² over the
/// window (the p = 0 probability mass, truncated at the window edge where
/// the factorial decay of f leaves a tail below 1e-6 of the total).
#[derive(Debug, Clone, PartialEq)]
pub struct OamSpectrum {
    pub entries: BTreeMap<(i32, i32), Complex64>,
    pub normalization: f64,
    window: u32,
}

impl OamSpectrum {
    pub fn window(&self) -> u32 {
        self.window
    }

    /// C(ℓ₁, ℓ₂), zero outside the stored window.
    pub fn entry(&self, l1: i32, l2: i32) -> Complex64 {
        self.entries.get(&(l1, l2)).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// The four target amplitudes of an entangled bi-photon prepared at polar
/// angle θ_i (zero initial azimuth) with entanglement parameters (α, β):
///
/// w₊₊ = w_A cos²(θ_i/2) + w_B sin²(θ_i/2),
/// w₊₋ = w₋₊ = ½ sin θ_i (w_A − w_B),
/// w₋₋ = w_A sin²(θ_i/2) + w_B cos²(θ_i/2),
///
/// with w_A = e^{−iβ/2} cos(α/2), w_B = e^{iβ/2} sin(α/2). Unit norm is
/// exact: Σ|w|² = (|w_A|² + |w_B|²)(cos² + sin²)² = 1.
pub fn target_from_entanglement(params: &EntanglementParams, theta_i: f64) -> TargetAmplitudes {
    let (wa, wb) = (params.weight_a(), params.weight_b());
    let c2 = (0.5 * theta_i).cos().powi(2);
    let s2 = (0.5 * theta_i).sin().powi(2);
    let cross = 0.5 * theta_i.sin() * (wa - wb);
    let t = TargetAmplitudes {
        w_pp: wa * c2 + wb * s2,
        w_pm: cross,
        w_mp: cross,
        w_mm: wa * s2 + wb * c2,
    };
    debug_assert!((t.norm() - 1.0).abs() < 1e-12);
    t
}

/// Invert the down-conversion map on the first-order block: the pump
/// {D₋₂, D₀, D₊₂} whose spectrum reproduces the target amplitudes.
///
/// D_{ℓ₁+ℓ₂} = C(ℓ₁, ℓ₂)/f(ℓ₁, ℓ₂) with C(1,1) = w₊₊, C(1,−1) = w₊₋,
/// C(−1,1) = w₋₊, C(−1,−1) = w₋₋. D₀ is determined twice, by (1,−1) and
/// (−1,1); both are computed and must agree within 1e-10 — a target with
/// w₊₋ ≠ w₋₊ is unreachable by this technique (the spectrum of any p = 0
/// pump is symmetric under ℓ₁ ↔ ℓ₂).
pub fn pump_from_target(target: &TargetAmplitudes) -> Result<PumpSpec, PumpError> {
    let f11 = radial_overlap_f(1, 1);
    let f1m1 = radial_overlap_f(1, -1);
    let d2 = target.w_pp / f11;
    let d0_a = target.w_pm / f1m1;
    let d0_b = target.w_mp / radial_overlap_f(-1, 1);
    let delta = (d0_a - d0_b).norm();
    if delta > D0_CONSISTENCY_TOL {
        return Err(PumpError::InconsistentTarget { delta });
    }
    let d0 = 0.5 * (d0_a + d0_b);
    let dm2 = target.w_mm / f11;
    Ok(PumpSpec::new(BTreeMap::from([(-2, dm2), (0, d0), (2, d2)])))
}

/// Closed-form pump coefficients (D₋₂, D₀, D₊₂) for an entangled bi-photon
/// target, independent of the overlap machinery:
///
/// D₊₂ = (27/8)√(π/2) (e^{−iβ/2} cos(α/2) cos²(θ_i/2) + e^{iβ/2} sin(α/2) sin²(θ_i/2)),
/// D₀  = (9/8)√π sin θ_i (e^{−iβ/2} cos(α/2) − e^{iβ/2} sin(α/2)),
/// D₋₂ = (27/8)√(π/2) (e^{iβ/2} sin(α/2) cos²(θ_i/2) + e^{−iβ/2} cos(α/2) sin²(θ_i/2)).
pub fn oracle_pump_coefficients(
    params: &EntanglementParams,
    theta_i: f64,
) -> (Complex64, Complex64, Complex64) {
    let (alpha, beta) = (params.alpha(), params.beta());
    let ea = Complex64::from_polar((0.5 * alpha).cos(), -0.5 * beta);
    let eb = Complex64::from_polar((0.5 * alpha).sin(), 0.5 * beta);
    let c2 = (0.5 * theta_i).cos().powi(2);
    let s2 = (0.5 * theta_i).sin().powi(2);
    let k2 = 27.0 / 8.0 * (0.5 * PI).sqrt();
    let k0 = 9.0 / 8.0 * PI.sqrt();
    (
        k2 * (eb * c2 + ea * s2),
        k0 * theta_i.sin() * (ea - eb),
        k2 * (ea * c2 + eb * s2),
    )
}

/// The two-photon OAM spectrum generated by a pump over the square window
/// |ℓ₁|, |ℓ₂| ≤ window (1 ≤ window ≤ 8): C(ℓ₁, ℓ₂) = D_{ℓ₁+ℓ₂} f(ℓ₁, ℓ₂)
/// where the sum lies in the pump's support, exact zero elsewhere.
pub fn spectrum_from_pump(pump: &PumpSpec, window: u32) -> OamSpectrum {
    assert!(
        (1..=MAX_WINDOW).contains(&window),
        "spectrum window must lie in 1..={MAX_WINDOW}, got {window}"
    );
    let w = window as i32;
    let mut entries = BTreeMap::new();
    let mut normalization = 0.0;
    for l1 in -w..=w {
        for l2 in -w..=w {
            let c = match pump.coefficients.get(&(l1 + l2)) {
                Some(d) => d * radial_overlap_f(l1, l2),
                None => Complex64::new(0.0, 0.0),
            };
            normalization += c.norm_sqr();
            entries.insert((l1, l2), c);
        }
    }
    OamSpectrum { entries, normalization, window }
}

/// Extract the first-order block C(±1, ±1) of a spectrum and renormalize
/// it to unit norm, discarding all higher-order and radial components.
pub fn first_order_block(spectrum: &OamSpectrum) -> Result<TargetAmplitudes, PumpError> {
    let c_pp = spectrum.entry(1, 1);
    let c_pm = spectrum.entry(1, -1);
    let c_mp = spectrum.entry(-1, 1);
    let c_mm = spectrum.entry(-1, -1);
    let norm_sqr = c_pp.norm_sqr() + c_pm.norm_sqr() + c_mp.norm_sqr() + c_mm.norm_sqr();
    if norm_sqr < EMPTY_BLOCK_TOL * EMPTY_BLOCK_TOL {
        return Err(PumpError::EmptyBlock { norm_sqr });
    }
    let n = norm_sqr.sqrt();
    Ok(TargetAmplitudes { w_pp: c_pp / n, w_pm: c_pm / n, w_mp: c_mp / n, w_mm: c_mm / n })
}
