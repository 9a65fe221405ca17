//! Geometric-phase holonomy of first-order orbital-angular-momentum light.
//!
//! The crate models single photons and tunably entangled photon pairs whose
//! transverse profile lives in the two first-order Laguerre–Gaussian modes
//! (ℓ = ±1). That two-dimensional mode space maps onto a sphere — the sphere
//! of modes — on which cylindrical-lens mode converters act as rotations.
//! The modules build up from that picture:
//!
//! * [`modes`] — the mode sphere: chart states |A⟩, |B⟩, chart recovery,
//!   radial profiles and overlap integrals;
//! * [`holonomy`] — sampled state paths and their total, dynamic, and
//!   geometric phases, plus the oriented solid angle of closed loops;
//! * [`biphoton`] — Schmidt-decomposed photon pairs, their gauge-invariant
//!   entangled phases and projections;
//! * [`circuit`] — mode-converter circuits: lens operators, misoriented
//!   converter pairs, transit of sphere-of-modes states, and closed-form
//!   cross-checks for the standard two-converter circuit;
//! * [`pump`] — pump-beam engineering: which pump orbital-angular-momentum
//!   spectrum produces a requested first-order down-converted pair;
//! * [`verify`] — a named battery of internal consistency checks used by
//!   the command-line `verify` subcommand and the acceptance tests;
//! * [`angle`], [`quad`] — small shared helpers (principal-branch wrapping,
//!   adaptive quadrature).

pub mod angle;
pub mod biphoton;
pub mod circuit;
pub mod holonomy;
pub mod modes;
pub mod pump;
pub mod quad;
pub mod verify;
