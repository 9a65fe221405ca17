//! Mode-converter circuits: astigmatic-lens operators, misoriented
//! converter assemblies, and sampled transits of sphere-of-modes states.
//!
//! A cylindrical (astigmatic) lens acts on the two-dimensional first-order
//! mode space as a rotation generated by its Hermite–Gaussian eigenbasis:
//! the relative Gouy phase g accumulated through the lens, split
//! symmetrically (tracelessly) between the two eigenmodes, gives
//!
//! L(a, g) = R̂(a) · diag(e^{−ig/2}, e^{+ig/2})_HG · R̂(−a)
//!         = [[cos g/2, −i sin g/2 · e^{−2ia}], [−i sin g/2 · e^{2ia}, cos g/2]]
//!
//! in the (ℓ = +1, ℓ = −1) Laguerre–Gaussian basis, where a is the lens
//! axis in the transverse plane and R̂(a) = diag(e^{−ia}, e^{+ia}) rotates
//! that plane. On the sphere of modes L(a, g) is the rotation by g about
//! the equatorial axis at azimuth 2a. Four lenses of g = π/4 at a common
//! axis compose to a π-converter −iσ(2a), a half-turn; eight aligned lenses
//! give −𝟙, which is why the aligned two-converter circuit returns every
//! state to itself with projection −1.
//!
//! A `Rotation` element models misorienting everything downstream by η: it
//! shifts the axis of every later lens (a passive frame change, adding no
//! path samples of its own). The equivalent active description inserts a
//! frame-rotation *operator* between the converter halves; the composition
//! tests pin the exact correspondence L⁴(a+η)L⁴(a) = L⁴(a)R̂(−2η)L⁴(a) =
//! R̂(η)L⁴(a)R̂(−η)L⁴(a).
//!
//! Closed-form end-state oracles for the standard circuit
//! (`oracle_projections`, `oracle_g_phi`, `oracle_g_proj`) are kept here,
//! deliberately independent of the sampling machinery, so transit results
//! can be checked against them.

use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::{FRAC_PI_4, PI};
use thiserror::Error;

use crate::angle::{seam_arg, wrap_to_pi};
use crate::biphoton::{BiPhotonError, EntanglementParams, ProjectionSet};
use crate::holonomy::{HolonomyError, StatePath};
use crate::modes::{chart_from_vector, state_a, state_b, ModeVector, SpherePoint};

/// Default ζ resolution per lens.
pub const DEFAULT_LENS_SAMPLES: usize = 64;

/// Name of the built-in standard-circuit preset.
pub const STANDARD_PRESET: &str = "two-pi-converters";

/// Largest per-sample Gouy step allowed before a lens's sample count is
/// doubled; keeps adjacent path overlaps above the resolution guard with
/// margin (cos(0.25/2) ≈ 0.9922).
const MAX_GOUY_STEP: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("invalid lens: {reason}")]
    InvalidLens { reason: String },
    #[error("unknown circuit preset {name:?} (available: \"two-pi-converters\")")]
    UnknownPreset { name: String },
    #[error("malformed circuit description: {reason}")]
    MalformedDescription { reason: String },
    #[error(transparent)]
    Path(#[from] HolonomyError),
}

/// A 2×2 operator on the first-order mode space, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOperator {
    pub m: [[Complex64; 2]; 2],
}

impl ModeOperator {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        ModeOperator { m: [[o, z], [z, o]] }
    }

    pub fn apply(&self, v: &ModeVector) -> ModeVector {
        ModeVector::new(
            self.m[0][0] * v.c_plus + self.m[0][1] * v.c_minus,
            self.m[1][0] * v.c_plus + self.m[1][1] * v.c_minus,
        )
    }

    /// `self ∘ rhs`: apply `rhs` first, then `self`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        ModeOperator { m }
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        ModeOperator {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    /// Frobenius distance to another operator.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += (self.m[i][j] - other.m[i][j]).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// One astigmatic lens: eigenbasis orientation, total relative Gouy phase,
/// and the ζ resolution used when sampling a transit through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensElement {
    axis_angle: f64,
    gouy_total: f64,
    samples: usize,
}

impl LensElement {
    pub fn new(axis_angle: f64, gouy_total: f64, samples: usize) -> Result<Self, CircuitError> {
        if gouy_total <= 0.0 || !gouy_total.is_finite() {
            return Err(CircuitError::InvalidLens {
                reason: format!("gouy_total must be positive and finite, got {gouy_total}"),
            });
        }
        if samples < 2 {
            return Err(CircuitError::InvalidLens {
                reason: format!("samples must be ≥ 2, got {samples}"),
            });
        }
        Ok(LensElement { axis_angle, gouy_total, samples })
    }

    pub fn axis_angle(&self) -> f64 {
        self.axis_angle
    }

    pub fn gouy_total(&self) -> f64 {
        self.gouy_total
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Sample count after enforcing the per-step Gouy bound.
    fn effective_samples(&self) -> usize {
        let mut n = self.samples;
        while self.gouy_total / n as f64 > MAX_GOUY_STEP {
            n *= 2;
        }
        n
    }
}

/// A circuit element: a lens, or a passive frame rotation that misorients
/// everything downstream of it by η.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Lens(LensElement),
    Rotation { eta: f64 },
}

/// An ordered sequence of circuit elements.
///
/// A trailing `Rotation` (one with no lens after it) changes nothing: it
/// re-expresses the frame after the last optic, which no element ever sees.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    elements: Vec<Element>,
}

impl Circuit {
    pub fn new(elements: Vec<Element>) -> Self {
        Circuit { elements }
    }

    pub fn empty() -> Self {
        Circuit { elements: Vec::new() }
    }

    /// The standard circuit: two π-converters of four π/4-Gouy lenses each,
    /// the second converter misoriented by η. The common axis is π/4 so
    /// that a start point with φ_i = 0 traverses the first converter along
    /// a great circle.
    pub fn standard(eta: f64, samples: usize) -> Self {
        let lens = LensElement::new(FRAC_PI_4, FRAC_PI_4, samples)
            .expect("standard lens parameters are valid");
        let mut elements = vec![Element::Lens(lens); 4];
        elements.push(Element::Rotation { eta });
        elements.extend([Element::Lens(lens); 4]);
        Circuit { elements }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn lens_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::Lens(_)))
            .count()
    }

    /// The composed end-to-end operator, frame rotations folded into the
    /// downstream lens axes.
    pub fn composed_operator(&self) -> ModeOperator {
        let mut frame = 0.0;
        let mut acc = ModeOperator::identity();
        for element in &self.elements {
            match element {
                Element::Rotation { eta } => frame += eta,
                Element::Lens(lens) => {
                    acc = lens_at(lens.axis_angle + frame, lens.gouy_total).compose(&acc);
                }
            }
        }
        acc
    }

    /// Parse a circuit description: either an explicit element list
    /// `{"elements": [{"kind": "lens", "axis_deg": …, "gouy_total_deg": …,
    /// "samples": …}, {"kind": "rotation", "eta_deg": …}, …]}` or a preset
    /// `{"preset": "two-pi-converters", "eta_deg": …, "samples": …}`
    /// (angles in degrees; `eta` in radians is accepted instead of
    /// `eta_deg`; `samples` defaults to 64).
    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let file: CircuitFile = serde_json::from_str(text)
            .map_err(|e| CircuitError::MalformedDescription { reason: e.to_string() })?;
        match file {
            CircuitFile::Preset(p) => {
                if p.preset != STANDARD_PRESET {
                    return Err(CircuitError::UnknownPreset { name: p.preset });
                }
                let eta = match (p.eta, p.eta_deg) {
                    (Some(r), None) => r,
                    (None, Some(d)) => d.to_radians(),
                    (None, None) => {
                        return Err(CircuitError::MalformedDescription {
                            reason: "preset needs exactly one of \"eta\" or \"eta_deg\"".into(),
                        })
                    }
                    (Some(_), Some(_)) => {
                        return Err(CircuitError::MalformedDescription {
                            reason: "give either \"eta\" or \"eta_deg\", not both".into(),
                        })
                    }
                };
                Ok(Circuit::standard(eta, p.samples.unwrap_or(DEFAULT_LENS_SAMPLES)))
            }
            CircuitFile::Elements(list) => {
                let mut elements = Vec::with_capacity(list.elements.len());
                for item in list.elements {
                    elements.push(match item {
                        ElementFile::Lens { axis_deg, gouy_total_deg, samples } => {
                            Element::Lens(LensElement::new(
                                axis_deg.to_radians(),
                                gouy_total_deg.to_radians(),
                                samples.unwrap_or(DEFAULT_LENS_SAMPLES),
                            )?)
                        }
                        ElementFile::Rotation { eta_deg } => {
                            Element::Rotation { eta: eta_deg.to_radians() }
                        }
                    });
                }
                Ok(Circuit::new(elements))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    preset: String,
    eta: Option<f64>,
    eta_deg: Option<f64>,
    samples: Option<usize>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ElementFile {
    Lens { axis_deg: f64, gouy_total_deg: f64, samples: Option<usize> },
    Rotation { eta_deg: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementsFile {
    elements: Vec<ElementFile>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CircuitFile {
    Preset(PresetFile),
    Elements(ElementsFile),
}

/// Lens operator at axis `a` with accumulated relative Gouy phase `g`:
/// [[cos g/2, −i sin g/2 e^{−2ia}], [−i sin g/2 e^{2ia}, cos g/2]].
fn lens_at(a: f64, g: f64) -> ModeOperator {
    let (c, s) = ((0.5 * g).cos(), (0.5 * g).sin());
    let off = Complex64::new(0.0, -s);
    ModeOperator {
        m: [
            [Complex64::new(c, 0.0), off * Complex64::from_polar(1.0, -2.0 * a)],
            [off * Complex64::from_polar(1.0, 2.0 * a), Complex64::new(c, 0.0)],
        ],
    }
}

/// Partial-transit operator of a lens at fraction ζ ∈ [0, 1] of its length:
/// the symmetric Gouy split diag(e^{−iζg/2}, e^{+iζg/2}) in the lens
/// Hermite–Gaussian eigenbasis, expressed in the orbital-angular-momentum
/// basis. ζ = 0 is the identity.
pub fn lens_operator(elem: &LensElement, zeta: f64) -> ModeOperator {
    assert!((0.0..=1.0).contains(&zeta), "transit fraction ζ must lie in [0, 1]");
    lens_at(elem.axis_angle, zeta * elem.gouy_total)
}

/// Frame-rotation operator by η in the transverse plane: an
/// orbital-angular-momentum eigenstate of order ℓ acquires e^{−iℓη}, i.e.
/// diag(e^{−iη}, e^{+iη}) on (ℓ = +1, ℓ = −1).
pub fn frame_rotation(eta: f64) -> ModeOperator {
    let z = Complex64::new(0.0, 0.0);
    ModeOperator {
        m: [
            [Complex64::from_polar(1.0, -eta), z],
            [z, Complex64::from_polar(1.0, eta)],
        ],
    }
}

/// Everything a circuit transit produces: the sampled paths of both chart
/// states and the four end-state projections ⟨X_i|Y_f⟩.
#[derive(Debug, Clone)]
pub struct TransitRecord {
    pub path_a: StatePath,
    pub path_b: StatePath,
    pub end_projections: ProjectionSet,
}

/// Evolve the chart frame |A(start)⟩, |B(start)⟩ through the circuit.
///
/// Each lens contributes `samples` path points at uniform ζ (after
/// automatic doubling if its per-step Gouy phase would violate the path
/// resolution guard), parametrized so that lens j spans one unit of s.
/// Rotations re-orient the downstream frame and contribute no samples. An
/// empty (or lens-free) circuit yields a two-sample constant path.
pub fn transit(circuit: &Circuit, start: &SpherePoint) -> Result<TransitRecord, CircuitError> {
    let a0 = state_a(start);
    let b0 = state_b(start);
    let mut samples_a = vec![(0.0, a0)];
    let mut samples_b = vec![(0.0, b0)];
    let mut frame = 0.0;
    let mut s0 = 0.0;
    for element in circuit.elements() {
        match element {
            Element::Rotation { eta } => frame += eta,
            Element::Lens(lens) => {
                let n = lens.effective_samples();
                let v_in_a = samples_a.last().expect("seeded").1;
                let v_in_b = samples_b.last().expect("seeded").1;
                for k in 1..=n {
                    let zeta = k as f64 / n as f64;
                    let op = lens_at(lens.axis_angle + frame, zeta * lens.gouy_total);
                    samples_a.push((s0 + zeta, op.apply(&v_in_a)));
                    samples_b.push((s0 + zeta, op.apply(&v_in_b)));
                }
                s0 += 1.0;
            }
        }
    }
    if samples_a.len() == 1 {
        samples_a.push((1.0, a0));
        samples_b.push((1.0, b0));
    }
    let path_a = StatePath::from_samples(samples_a)?;
    let path_b = StatePath::from_samples(samples_b)?;
    let end_projections = ProjectionSet::new(
        a0.overlap(path_a.last()),
        b0.overlap(path_b.last()),
        a0.overlap(path_b.last()),
        b0.overlap(path_a.last()),
    );
    debug_assert!(
        end_projections.relations_residual() < 1e-10,
        "unitary evolution of a chart frame must satisfy the conjugation relations"
    );
    Ok(TransitRecord { path_a, path_b, end_projections })
}

/// Closed-form end projections of the standard circuit (misorientation η,
/// initial polar angle θ_i, zero initial lift):
///
/// p_aa = −cos 2η + i sin 2η cos θ_i,  p_bb = conj(p_aa),
/// p_ab = p_ba = −i sin 2η sin θ_i.
///
/// The cross projections are stated with the sign conventional in the
/// final-state-bra reading; the simulated transit (initial-state bra)
/// produces +i sin 2η sin θ_i. Every consumer uses the cross terms squared,
/// where the two agree identically, and agreement tests compare p_ab².
pub fn oracle_projections(eta: f64, theta_i: f64) -> ProjectionSet {
    let (c2, s2) = ((2.0 * eta).cos(), (2.0 * eta).sin());
    let (ct, st) = (theta_i.cos(), theta_i.sin());
    ProjectionSet::new(
        Complex64::new(-c2, s2 * ct),
        Complex64::new(-c2, -(s2 * ct)),
        Complex64::new(0.0, -(s2 * st)),
        Complex64::new(0.0, -(s2 * st)),
    )
}

/// Closed-form geometric phase of entanglement for the standard circuit.
///
/// Evaluates arg(T_R − i T_I) − 2(λ_A arg p_aa + λ_B arg p_bb) with
///
/// T_R = 6cos4η − 8 sinα cosβ sin²2η sin²θ_i + 2
///       + cos(4η − 2θ_i) + cos(4η + 2θ_i) − 2cos2θ_i,
/// T_I = 8 cosα sin4η cosθ_i,
///
/// where T_R − i T_I = 8 P_Ψ under the initial-state-bra convention used
/// throughout this crate (the final-state-bra reading conjugates the
/// projection, which flips the sign in front of T_I), and the p's come
/// from [`oracle_projections`]. Independent of the transit machinery.
pub fn oracle_g_phi(
    eta: f64,
    theta_i: f64,
    params: &EntanglementParams,
) -> Result<f64, BiPhotonError> {
    let (alpha, beta) = (params.alpha(), params.beta());
    let (e4, t2) = (4.0 * eta, 2.0 * theta_i);
    let t_r = 6.0 * e4.cos()
        - 8.0 * alpha.sin() * beta.cos() * (2.0 * eta).sin().powi(2) * theta_i.sin().powi(2)
        + 2.0
        + (e4 - t2).cos()
        + (e4 + t2).cos()
        - 2.0 * t2.cos();
    let t_i = 8.0 * alpha.cos() * e4.sin() * theta_i.cos();
    if t_r.abs() < 1e-14 && t_i.abs() < 1e-14 {
        return Err(BiPhotonError::UndefinedPhase { name: "P_Ψ", magnitude: 0.0 });
    }
    let proj = oracle_projections(eta, theta_i);
    for (name, mag) in [("p_aa", proj.p_aa.norm()), ("p_bb", proj.p_bb.norm())] {
        if mag < 1e-12 {
            return Err(BiPhotonError::UndefinedPhase { name, magnitude: mag });
        }
    }
    let weighted = params.lambda_a() * seam_arg(proj.p_aa)
        + params.lambda_b() * seam_arg(proj.p_bb);
    Ok(wrap_to_pi(
        seam_arg(Complex64::new(t_r, -t_i)) - 2.0 * weighted,
    ))
}

/// Closed-form geometric projection of entanglement for the standard
/// circuit: −sin α · cos β · sin²θ_i · sin²2η.
pub fn oracle_g_proj(eta: f64, theta_i: f64, params: &EntanglementParams) -> f64 {
    -params.alpha().sin()
        * params.beta().cos()
        * theta_i.sin().powi(2)
        * (2.0 * eta).sin().powi(2)
}

/// One row of an exported trajectory: the path parameter and the chart
/// coordinates, unwrapped for continuity.
///
/// θ continues past [0, π] across pole crossings: folding it back flips φ
/// by π and χ by π/2, so a continuous θ is what keeps all three columns
/// continuous. The unit vector (sinθ cosφ, sinθ sinφ, cosθ) is unchanged
/// by the fold and always lands on the right sphere point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartSample {
    pub s: f64,
    pub theta: f64,
    pub phi: f64,
    pub chi: f64,
}

/// Chart coordinates of every sample of a path, lifted to a continuous
/// branch along s.
///
/// The chart labels of a single state form the lattice
/// (σθ + 2πn, φ + (1−σ)π/2 + 2πk, χ + (1−σ)π/4 − πn + πk + 2πm) with
/// σ = ±1: reflecting θ through a pole shifts φ by π and χ by π/2, a full
/// θ turn costs χ a sign, and so does a full φ turn. Each sample picks the
/// representative closest to its predecessor (θ and φ jointly, which
/// disambiguates the reflection near poles, then χ), so pole crossings
/// stay smooth instead of folding. The first sample keeps the principal
/// chart values. Pole samples use the zero-azimuth convention of the chart
/// inversion and stay finite.
pub fn chart_samples(path: &StatePath) -> Vec<ChartSample> {
    let mut out: Vec<ChartSample> = Vec::with_capacity(path.len());
    for (s, v) in path.samples() {
        let p = chart_from_vector(v).expect("path samples are unit-normalized");
        let row = match out.last() {
            None => ChartSample { s: *s, theta: p.theta, phi: p.phi, chi: p.chi },
            Some(prev) => {
                let mut best: Option<(f64, ChartSample)> = None;
                for sigma in [1.0f64, -1.0] {
                    let theta_base = sigma * p.theta;
                    let n = ((prev.theta - theta_base) / (2.0 * PI)).round();
                    let theta = theta_base + 2.0 * PI * n;
                    let phi_base = p.phi + if sigma < 0.0 { PI } else { 0.0 };
                    let k = ((prev.phi - phi_base) / (2.0 * PI)).round();
                    let phi = phi_base + 2.0 * PI * k;
                    let chi_base = p.chi
                        + if sigma < 0.0 { 0.5 * PI } else { 0.0 }
                        - PI * n
                        + PI * k;
                    let m = ((prev.chi - chi_base) / (2.0 * PI)).round();
                    let chi = chi_base + 2.0 * PI * m;
                    let score = (theta - prev.theta).abs() + (phi - prev.phi).abs();
                    if best.is_none() || score < best.as_ref().unwrap().0 {
                        best = Some((score, ChartSample { s: *s, theta, phi, chi }));
                    }
                }
                best.expect("two candidate branches were scored").1
            }
        };
        out.push(row);
    }
    out
}

/// Trajectory of the |A⟩ chart state through a recorded transit.
pub fn trajectory_export(record: &TransitRecord) -> Vec<ChartSample> {
    chart_samples(&record.path_a)
}
