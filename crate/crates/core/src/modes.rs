//! First-order orbital-angular-momentum mode space and its sphere chart.
//!
//! The single-photon state space considered throughout this crate is the
//! two-dimensional span of the first-order Laguerre–Gaussian modes
//! {|+1⟩, |−1⟩} (topological charge ±1, zero radial index). Unit
//! superpositions, modulo nothing — the overall phase is physical here — are
//! parametrized by a point on the sphere of modes together with a lift angle:
//!
//! |A(θ, φ, χ)⟩ = e^{iχ} ( e^{−iφ/2} cos(θ/2) |+1⟩ + e^{+iφ/2} sin(θ/2) |−1⟩ )
//!
//! θ is the polar angle (|+1⟩ at the north pole), φ the azimuth, and χ the
//! fiber coordinate recording the lift of the sphere point into the state
//! space. The antipodal companion
//!
//! |B(θ, φ, χ)⟩ = e^{−iχ} ( e^{−iφ/2} sin(θ/2) |+1⟩ − e^{+iφ/2} cos(θ/2) |−1⟩ )
//!
//! is orthogonal to |A⟩ for every chart point and sits at the antipode
//! (π − θ, φ + π) of the sphere. Together they form the orthonormal frame in
//! which entangled pairs are expanded.
//!
//! The radial content of each mode is the standard first-order ring profile;
//! its triple overlaps drive the pump-engineering arithmetic in
//! [`crate::pump`].

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::angle::wrap_to_pi;

/// Magnitude below which an amplitude is treated as sitting on a chart pole.
const POLE_EPS: f64 = 1e-12;

/// Tolerance on ‖v‖ = 1 for chart inversion.
const NORM_TOL: f64 = 1e-9;

/// Errors produced by mode-space constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeError {
    /// The vector handed to the inverse chart is not normalized.
    #[error("mode vector norm {norm} differs from 1 beyond tolerance {tol}")]
    NonUnitNorm { norm: f64, tol: f64 },
}

/// A chart point (θ, φ, χ) on the sphere of modes with its fiber lift.
///
/// Invariants: θ ∈ [0, π] (the constructor folds any input onto this range,
/// moving φ by π when the fold crosses a pole, so the underlying sphere point
/// is preserved); φ is kept as given and wrapped lazily by consumers; χ is
/// unbounded — it accumulates continuously along trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
    pub chi: f64,
}

impl SpherePoint {
    /// Build a chart point, folding θ into [0, π].
    pub fn new(theta: f64, phi: f64, chi: f64) -> Self {
        let t = theta.rem_euclid(2.0 * PI);
        if t > PI {
            SpherePoint { theta: 2.0 * PI - t, phi: phi + PI, chi }
        } else {
            SpherePoint { theta: t, phi, chi }
        }
    }

    /// The point as a unit vector in ℝ³ (north pole = |+1⟩ = +ẑ).
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// A (not necessarily normalized) vector in the {|+1⟩, |−1⟩} mode space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeVector {
    /// Amplitude on |+1⟩.
    pub c_plus: Complex64,
    /// Amplitude on |−1⟩.
    pub c_minus: Complex64,
}

impl ModeVector {
    pub fn new(c_plus: Complex64, c_minus: Complex64) -> Self {
        ModeVector { c_plus, c_minus }
    }

    /// Inner product ⟨self|other⟩, antilinear in `self`.
    pub fn overlap(&self, other: &ModeVector) -> Complex64 {
        self.c_plus.conj() * other.c_plus + self.c_minus.conj() * other.c_minus
    }

    pub fn norm(&self) -> f64 {
        (self.c_plus.norm_sqr() + self.c_minus.norm_sqr()).sqrt()
    }

    /// The same vector with an extra global phase e^{iγ}.
    pub fn with_phase(&self, gamma: f64) -> ModeVector {
        let ph = Complex64::from_polar(1.0, gamma);
        ModeVector::new(ph * self.c_plus, ph * self.c_minus)
    }
}

/// The lifted frame state |A(θ, φ, χ)⟩.
pub fn state_a(p: &SpherePoint) -> ModeVector {
    let lift = Complex64::from_polar(1.0, p.chi);
    let half = 0.5 * p.theta;
    ModeVector::new(
        lift * Complex64::from_polar(half.cos(), -0.5 * p.phi),
        lift * Complex64::from_polar(half.sin(), 0.5 * p.phi),
    )
}

/// The antipodal companion |B(θ, φ, χ)⟩, orthogonal to |A⟩ at every chart point.
pub fn state_b(p: &SpherePoint) -> ModeVector {
    let lift = Complex64::from_polar(1.0, -p.chi);
    let half = 0.5 * p.theta;
    ModeVector::new(
        lift * Complex64::from_polar(half.sin(), -0.5 * p.phi),
        -lift * Complex64::from_polar(half.cos(), 0.5 * p.phi),
    )
}

/// Invert the chart: recover (θ, φ, χ) from a unit vector read as |A⟩.
///
/// θ = 2 atan2(|c₋|, |c₊|) ∈ [0, π]; φ = arg c₋ − arg c₊ wrapped to (−π, π];
/// χ is then fixed (mod 2π) by the phase of either amplitude and is returned
/// on the principal branch. On a pole (the other amplitude below 1e-12) the
/// azimuth is undefined: φ is set to 0 and χ absorbs the full phase of the
/// surviving amplitude.
pub fn chart_from_vector(v: &ModeVector) -> Result<SpherePoint, ModeError> {
    let norm = v.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(ModeError::NonUnitNorm { norm, tol: NORM_TOL });
    }
    let rp = v.c_plus.norm();
    let rm = v.c_minus.norm();
    let theta = 2.0 * rm.atan2(rp);
    if rm < POLE_EPS {
        return Ok(SpherePoint { theta, phi: 0.0, chi: v.c_plus.arg() });
    }
    if rp < POLE_EPS {
        return Ok(SpherePoint { theta, phi: 0.0, chi: v.c_minus.arg() });
    }
    let phi = wrap_to_pi(v.c_minus.arg() - v.c_plus.arg());
    // Both amplitudes determine χ mod 2π and they agree by construction of φ;
    // derive it from c₊ so the branch stays consistent with the returned φ.
    let chi = wrap_to_pi(v.c_plus.arg() + 0.5 * phi);
    Ok(SpherePoint { theta, phi, chi })
}

/// Radial profile of a first-order OAM ring mode of topological charge `ell`
/// (waist units, azimuthal factor stripped):
///
/// R_ℓ(r) = e^{−r²/2} r^{|ℓ|} / √(π |ℓ|!),   normalized as 2π ∫ r R_ℓ² dr = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialProfile {
    pub ell: i32,
}

impl RadialProfile {
    pub fn new(ell: i32) -> Self {
        RadialProfile { ell }
    }

    /// Evaluate the profile at radius `r ≥ 0`.
    pub fn eval(&self, r: f64) -> f64 {
        assert!(r >= 0.0, "radial coordinate must be non-negative");
        let a = self.ell.unsigned_abs();
        (-0.5 * r * r).exp() * r.powi(a as i32) / (PI * factorial(a)).sqrt()
    }
}

/// Triple radial overlap driving the down-conversion mode coupling:
///
/// f(ℓ₁, ℓ₂) = 2π ∫₀^∞ dr · r · R_{ℓ₁+ℓ₂}(r) R_{ℓ₁}(r) R_{ℓ₂}(r).
///
/// The integrand is a Gaussian moment, so the integral evaluates in closed
/// form: with 2n = |ℓ₁+ℓ₂| + |ℓ₁| + |ℓ₂| (always even) and a = 3/2,
///
/// f = n! / ( a^{n+1} √π √(|ℓ₁+ℓ₂|! |ℓ₁|! |ℓ₂|!) ),
///
/// using ∫₀^∞ r^{2n+1} e^{−a r²} dr = n!/(2 a^{n+1}). Strictly positive and
/// symmetric in its arguments. Charges are restricted to |ℓ| ≤ 8 so every
/// factorial involved stays exactly representable in f64.
pub fn radial_overlap_f(l1: i32, l2: i32) -> f64 {
    assert!(
        l1.abs() <= 8 && l2.abs() <= 8,
        "radial_overlap_f: |ℓ| ≤ 8 required (got {l1}, {l2})"
    );
    let a0 = (l1 + l2).unsigned_abs();
    let a1 = l1.unsigned_abs();
    let a2 = l2.unsigned_abs();
    let n = (a0 + a1 + a2) / 2;
    factorial(n)
        / (1.5f64.powi(n as i32 + 1) * PI.sqrt() * (factorial(a0) * factorial(a1) * factorial(a2)).sqrt())
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
