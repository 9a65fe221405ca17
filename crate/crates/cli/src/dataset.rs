//! Dataset construction: sweep grids, trajectory tables, and spectrum
//! tables, rendered to deterministic CSV with a JSON metadata sidecar.
//!
//! Every float cell is written as `{:.16e}` (17 significant digits, `.`
//! decimal separator) and rows end with `\n`, so identical inputs produce
//! byte-identical files. Scalar rows always pair the simulated value with
//! its closed-form oracle and the absolute difference; where a phase is
//! undefined the cells read `NaN` rather than silently dropping the row.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

use biphoton_core::angle::wrap_to_pi;
use biphoton_core::biphoton::{
    g_phi, g_proj, reduced_eigenvalues, schmidt_number, EntanglementParams,
};
use biphoton_core::circuit::{
    oracle_g_phi, oracle_g_proj, oracle_projections, trajectory_export, transit, Circuit,
    TransitRecord,
};
use biphoton_core::holonomy::phase_profile;
use biphoton_core::modes::SpherePoint;
use biphoton_core::pump::{pump_from_target, spectrum_from_pump, target_from_entanglement};

use crate::spec::{Point, Quantity, ResolvedSweep};
use crate::CliError;

/// Render a float with 17 significant digits (`{:.16e}`); NaN prints `NaN`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// A rendered table: header plus rows of already-formatted cells.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Dataset {
    /// CSV text: comma-separated cells, `\n` line endings, trailing newline.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len(), "ragged dataset row");
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Metadata written next to a CSV file.
#[derive(Debug, Serialize)]
pub struct Sidecar {
    /// Tool name plus a git-describe-style build version.
    pub version: String,
    /// The subcommand that produced the dataset.
    pub command: String,
    /// Echo of the request (sweep spec or equivalent parameter map).
    pub spec: serde_json::Value,
    /// Number of data rows in the CSV (header excluded).
    pub rows: usize,
    /// Tolerances the check columns are verified against elsewhere.
    pub tolerances: BTreeMap<&'static str, f64>,
}

impl Sidecar {
    pub fn new(command: &str, spec: serde_json::Value, dataset: &Dataset) -> Self {
        Sidecar {
            version: format!("biphoton {}", env!("BIPHOTON_BUILD_VERSION")),
            command: command.to_string(),
            spec,
            rows: dataset.rows.len(),
            tolerances: tolerances_for(command),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("sidecar serializes");
        text.push('\n');
        text
    }
}

/// Verified agreement bounds for each kind of check column / dataset.
fn tolerances_for(command: &str) -> BTreeMap<&'static str, f64> {
    let mut map = BTreeMap::new();
    match command {
        "g_phi" => {
            map.insert("oracle_agreement", 1e-7);
        }
        "g_proj" | "p_aa" | "p_ab_sq" => {
            map.insert("oracle_agreement", 1e-8);
        }
        "schmidt" => {
            map.insert("oracle_agreement", 1e-12);
        }
        "spectrum" => {
            map.insert("pump_oracle", 1e-10);
            map.insert("round_trip", 1e-9);
        }
        "trajectory" => {
            map.insert("phase_quadrature", 1e-8);
        }
        _ => {}
    }
    map
}

/// Evaluate a resolved sweep into a dataset. Grid points run concurrently
/// on the ambient rayon pool; rows are emitted in row-major axis order
/// regardless of completion order.
pub fn sweep_dataset(sweep: &ResolvedSweep) -> Result<Dataset, CliError> {
    let quantity = sweep.spec.output;
    if quantity.is_table() {
        // Validation guarantees zero axes, so the grid is the single
        // fixed point and the dataset is the table itself.
        let point = sweep.point_at(0)?;
        return match quantity {
            Quantity::Trajectory => {
                let record = standard_transit(&point, sweep.samples)?;
                Ok(trajectory_dataset(&record))
            }
            Quantity::Spectrum => spectrum_dataset(
                &EntanglementParams::new(point.alpha.unwrap(), point.beta.unwrap()),
                point.theta_i.unwrap(),
                sweep.window,
            ),
            _ => unreachable!("only spectrum and trajectory are tables"),
        };
    }

    let points: Vec<Point> =
        (0..sweep.len()).map(|i| sweep.point_at(i)).collect::<Result<_, _>>()?;

    // Transits are the expensive part and depend only on (η, θ_i); compute
    // each distinct pair once, in parallel, keyed by exact bit patterns.
    let transits: HashMap<(u64, u64), TransitRecord> = if quantity.needs_transit() {
        let mut keys: Vec<(u64, u64)> = points
            .iter()
            .map(|p| (p.eta.unwrap().to_bits(), p.theta_i.unwrap().to_bits()))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_par_iter()
            .map(|(eb, tb)| {
                let point =
                    Point { eta: Some(f64::from_bits(eb)), theta_i: Some(f64::from_bits(tb)), ..Point::default() };
                standard_transit(&point, sweep.samples).map(|rec| ((eb, tb), rec))
            })
            .collect::<Result<_, _>>()?
    } else {
        HashMap::new()
    };

    let rows: Vec<Vec<String>> = points
        .par_iter()
        .enumerate()
        .map(|(index, point)| {
            let mut cells: Vec<String> = sweep.raw_axes_at(index).iter().copied().map(fmt_float).collect();
            let record = quantity.needs_transit().then(|| {
                &transits[&(point.eta.unwrap().to_bits(), point.theta_i.unwrap().to_bits())]
            });
            cells.extend(scalar_cells(quantity, point, record));
            cells
        })
        .collect();

    let mut header: Vec<String> = sweep.spec.axes.iter().map(|a| a.name.clone()).collect();
    header.extend(scalar_header(quantity).iter().map(|s| s.to_string()));
    Ok(Dataset { header, rows })
}

/// The standard two-π-converter circuit transit at a resolved point,
/// started on the φ = 0, χ = 0 meridian where the closed-form oracles live.
pub fn standard_transit(point: &Point, samples: usize) -> Result<TransitRecord, CliError> {
    let circuit = Circuit::standard(point.eta.unwrap(), samples);
    let start = SpherePoint::new(point.theta_i.unwrap(), 0.0, 0.0);
    Ok(transit(&circuit, &start)?)
}

fn scalar_header(quantity: Quantity) -> &'static [&'static str] {
    match quantity {
        Quantity::PAa | Quantity::PAbSq => {
            &["sim_re", "sim_im", "oracle_re", "oracle_im", "abs_diff"]
        }
        Quantity::GPhi | Quantity::GProj | Quantity::Schmidt => {
            &["simulated", "oracle", "abs_diff"]
        }
        Quantity::Spectrum | Quantity::Trajectory => unreachable!("tables have their own headers"),
    }
}

fn complex_cells(sim: Complex64, oracle: Complex64) -> Vec<String> {
    vec![
        fmt_float(sim.re),
        fmt_float(sim.im),
        fmt_float(oracle.re),
        fmt_float(oracle.im),
        fmt_float((sim - oracle).norm()),
    ]
}

fn real_cells(sim: f64, oracle: f64, diff: f64) -> Vec<String> {
    vec![fmt_float(sim), fmt_float(oracle), fmt_float(diff)]
}

fn scalar_cells(quantity: Quantity, point: &Point, record: Option<&TransitRecord>) -> Vec<String> {
    match quantity {
        Quantity::PAa => {
            let rec = record.expect("transit computed for projection sweeps");
            let oracle = oracle_projections(point.eta.unwrap(), point.theta_i.unwrap());
            complex_cells(rec.end_projections.p_aa, oracle.p_aa)
        }
        Quantity::PAbSq => {
            let rec = record.expect("transit computed for projection sweeps");
            let oracle = oracle_projections(point.eta.unwrap(), point.theta_i.unwrap());
            let sim = rec.end_projections.p_ab;
            complex_cells(sim * sim, oracle.p_ab * oracle.p_ab)
        }
        Quantity::GProj => {
            let rec = record.expect("transit computed for measure sweeps");
            let params = EntanglementParams::new(point.alpha.unwrap(), point.beta.unwrap());
            let sim = g_proj(&params, &rec.end_projections).unwrap_or(f64::NAN);
            let oracle = oracle_g_proj(point.eta.unwrap(), point.theta_i.unwrap(), &params);
            real_cells(sim, oracle, (sim - oracle).abs())
        }
        Quantity::GPhi => {
            let rec = record.expect("transit computed for measure sweeps");
            let params = EntanglementParams::new(point.alpha.unwrap(), point.beta.unwrap());
            let sim = g_phi(&params, &rec.end_projections).unwrap_or(f64::NAN);
            let oracle = oracle_g_phi(point.eta.unwrap(), point.theta_i.unwrap(), &params)
                .unwrap_or(f64::NAN);
            // Phases agree modulo 2π; compare on the wrapped difference.
            real_cells(sim, oracle, wrap_to_pi(sim - oracle).abs())
        }
        Quantity::Schmidt => {
            let params = EntanglementParams::new(point.alpha.unwrap(), 0.0);
            let sim = schmidt_number(&params);
            let (la, lb) = reduced_eigenvalues(&params);
            let oracle = 1.0 / (la * la + lb * lb);
            real_cells(sim, oracle, (sim - oracle).abs())
        }
        Quantity::Spectrum | Quantity::Trajectory => unreachable!("tables have their own builders"),
    }
}

/// Chart trajectory of the |A⟩ state with accumulated phases, one row
/// per path sample: s, θ, φ, χ, Φ_total, Φ_dynamic, Φ_geometric.
pub fn trajectory_dataset(record: &TransitRecord) -> Dataset {
    let charts = trajectory_export(record);
    let phases = phase_profile(&record.path_a);
    debug_assert_eq!(charts.len(), phases.len(), "chart and phase rows share the sample grid");
    let rows = charts
        .iter()
        .zip(&phases)
        .map(|(c, p)| {
            vec![
                fmt_float(c.s),
                fmt_float(c.theta),
                fmt_float(c.phi),
                fmt_float(c.chi),
                fmt_float(p.total),
                fmt_float(p.dynamic),
                fmt_float(p.geometric),
            ]
        })
        .collect();
    Dataset {
        header: ["s", "theta", "phi", "chi", "phi_total", "phi_dynamic", "phi_geometric"]
            .map(str::to_string)
            .to_vec(),
        rows,
    }
}

/// Two-photon orbital-angular-momentum spectrum of the pump engineered for
/// (α, β) at θ_i: one row per (ℓ1, ℓ2) in the window, in lexicographic
/// order — ℓ1, ℓ2, Re C, Im C, |C|, |C|²/normalization.
pub fn spectrum_dataset(
    params: &EntanglementParams,
    theta_i: f64,
    window: u32,
) -> Result<Dataset, CliError> {
    let target = target_from_entanglement(params, theta_i);
    let pump = pump_from_target(&target)?;
    let spectrum = spectrum_from_pump(&pump, window);
    let rows = spectrum
        .entries
        .iter()
        .map(|(&(l1, l2), c)| {
            vec![
                l1.to_string(),
                l2.to_string(),
                fmt_float(c.re),
                fmt_float(c.im),
                fmt_float(c.norm()),
                fmt_float(c.norm_sqr() / spectrum.normalization),
            ]
        })
        .collect();
    Ok(Dataset {
        header: ["l1", "l2", "re", "im", "abs", "abs_sq_normalized"].map(str::to_string).to_vec(),
        rows,
    })
}

impl Quantity {
    /// Whether evaluating the quantity requires simulating a circuit transit.
    fn needs_transit(self) -> bool {
        matches!(self, Quantity::PAa | Quantity::PAbSq | Quantity::GPhi | Quantity::GProj)
    }
}
