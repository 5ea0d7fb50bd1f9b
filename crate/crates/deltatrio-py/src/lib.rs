//! Python bindings for the deltatrio solver.
//!
//! Build with `cargo build -p deltatrio-py --release`, rename
//! `libdeltatrio_py.so` to `deltatrio.so` on the Python path, and import
//! `deltatrio` (see `python/smoke_test.py`).

use ::deltatrio::geometry::{self, ModelParams, Units};
use ::deltatrio::quadrature::{build_grid, QuadratureConfig};
use ::deltatrio::sectors::{self, SectorId, SolveConfig};
use ::deltatrio::verify::{self, GridOracleConfig};
use ::deltatrio::{critical, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::sync::Arc;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::InvalidParameter(_) => PyValueError::new_err(err.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Reduced geometry of the three delta lines.
#[pyclass(get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct Geometry {
    alpha_sq: f64,
    nu: f64,
    /// Repulsive-line coupling, `nu / Z`. Named with a trailing underscore
    /// because `lambda` is a Python keyword.
    lambda_: f64,
    theta12: f64,
    theta23: f64,
    unit_vectors: Vec<[f64; 2]>,
    mass_ratio: f64,
    charge: f64,
}

#[pymethods]
impl Geometry {
    fn __repr__(&self) -> String {
        format!(
            "Geometry(mass_ratio={}, charge={}, theta12={:.6}, theta23={:.6}, lambda_={:.6})",
            self.mass_ratio, self.charge, self.theta12, self.theta23, self.lambda_
        )
    }
}

/// One bound state found by the skeleton solver.
#[pyclass(get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct BoundState {
    sector: String,
    k_star: f64,
    energy_dimensionless: f64,
    energy_physical: f64,
    multiplicity: usize,
    eigenvector_samples: Vec<f64>,
}

#[pymethods]
impl BoundState {
    fn __repr__(&self) -> String {
        format!(
            "BoundState(sector='{}', k_star={:.12}, energy={:.12}, multiplicity={})",
            self.sector, self.k_star, self.energy_dimensionless, self.multiplicity
        )
    }
}

/// One point of the critical-charge curve.
#[pyclass(get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct CriticalPoint {
    theta12: f64,
    mass_ratio: f64,
    z_c_ub: f64,
    k00_at_root: f64,
    quad_tol: f64,
}

#[pymethods]
impl CriticalPoint {
    fn __repr__(&self) -> String {
        format!(
            "CriticalPoint(theta12={:.6}, mass_ratio={}, z_c_ub={:.12})",
            self.theta12, self.mass_ratio, self.z_c_ub
        )
    }
}

impl From<critical::CriticalPoint> for CriticalPoint {
    fn from(p: critical::CriticalPoint) -> Self {
        CriticalPoint {
            theta12: p.theta12,
            mass_ratio: p.mass_ratio,
            z_c_ub: p.z_c_ub,
            k00_at_root: p.k00_at_root,
            quad_tol: p.quad_tol,
        }
    }
}

/// The threshold kernel value and its two terms.
#[pyclass(get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct K00Result {
    value: f64,
    direct_term: f64,
    schur_term: f64,
    quad_tol: f64,
}

/// One verification check outcome.
#[pyclass(get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct CheckResult {
    name: String,
    claim: String,
    computed: Vec<f64>,
    expected: Vec<f64>,
    predicate: Option<String>,
    tolerance: f64,
    passed: bool,
}

fn make_params(mass_ratio: f64, charge: f64) -> PyResult<ModelParams> {
    ModelParams::new(mass_ratio, charge).map_err(to_py_err)
}

fn resolve_theta(theta12: Option<f64>, mass_ratio: Option<f64>) -> PyResult<f64> {
    match (theta12, mass_ratio) {
        (Some(theta), None) => {
            geometry::mass_ratio_from_theta12(theta).map_err(to_py_err)?;
            Ok(theta)
        }
        (None, Some(mu)) => Ok(geometry::derive_geometry(&make_params(mu, 1.0)?).theta12),
        _ => Err(PyValueError::new_err(
            "provide exactly one of theta12= or mass_ratio=",
        )),
    }
}

/// Map physical parameters (mass ratio, charge) to the reduced geometry.
#[pyfunction]
fn derive_geometry(mass_ratio: f64, charge: f64) -> PyResult<Geometry> {
    let params = make_params(mass_ratio, charge)?;
    let g = geometry::derive_geometry(&params);
    Ok(Geometry {
        alpha_sq: g.alpha_sq,
        nu: g.nu,
        lambda_: g.lambda,
        theta12: g.theta12,
        theta23: g.theta23,
        unit_vectors: g.unit_vectors.to_vec(),
        mass_ratio,
        charge,
    })
}

/// Inverse of the mass-ratio-to-angle map.
#[pyfunction]
fn mass_ratio_from_theta12(theta12: f64) -> PyResult<f64> {
    geometry::mass_ratio_from_theta12(theta12).map_err(to_py_err)
}

/// Energy conversion factor `m Z² e⁴ / (2 ħ² ν²)`.
#[pyfunction]
#[pyo3(signature = (mass_ratio, charge, hbar=1.0, mass=1.0, charge_unit=1.0))]
fn energy_scale(
    mass_ratio: f64,
    charge: f64,
    hbar: f64,
    mass: f64,
    charge_unit: f64,
) -> PyResult<f64> {
    let params = make_params(mass_ratio, charge)?;
    let g = geometry::derive_geometry(&params);
    let scale = geometry::energy_scale(
        &params,
        &g,
        Some(Units {
            hbar,
            mass,
            charge_unit,
        }),
    )
    .map_err(to_py_err)?;
    Ok(scale.factor)
}

/// Solve for bound states. Returns a dict mapping sector name to the list
/// of states (empty list: no bound state in that sector).
#[pyfunction]
#[pyo3(signature = (mass_ratio, charge, sector=None, grid_n=None, k_max=10.0, tol=1e-12))]
fn solve_bound_states<'py>(
    py: Python<'py>,
    mass_ratio: f64,
    charge: f64,
    sector: Option<&str>,
    grid_n: Option<usize>,
    k_max: f64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let params = make_params(mass_ratio, charge)?;
    let g = geometry::derive_geometry(&params);
    let sectors_requested: Vec<SectorId> = match sector {
        Some(s) => vec![s.parse().map_err(to_py_err)?],
        None => SectorId::all().to_vec(),
    };
    let n = grid_n.unwrap_or(if g.theta12 > 0.85 * std::f64::consts::PI {
        400
    } else {
        200
    });
    let grid = Arc::new(build_grid(&QuadratureConfig::with_n(n)).map_err(to_py_err)?);
    let out = PyDict::new(py);
    for id in sectors_requested {
        let skeleton = sectors::build_sector(&g, id, &grid).map_err(to_py_err)?;
        let states = sectors::solve_bound_states_with(
            &skeleton,
            &SolveConfig {
                k_max,
                tol,
                ..Default::default()
            },
        )
        .map_err(to_py_err)?;
        let converted: Vec<BoundState> = states
            .into_iter()
            .map(|s| BoundState {
                sector: s.sector.to_string(),
                k_star: s.k_star,
                energy_dimensionless: s.energy_dimensionless,
                energy_physical: s.energy_physical,
                multiplicity: s.multiplicity,
                eigenvector_samples: s.eigenvector_samples,
            })
            .collect();
        out.set_item(id.to_string(), converted)?;
    }
    Ok(out)
}

/// Threshold kernel value `K(0,0)` at the given geometry and charge.
#[pyfunction]
#[pyo3(signature = (charge, theta12=None, mass_ratio=None, tol=1e-13))]
fn k00(
    charge: f64,
    theta12: Option<f64>,
    mass_ratio: Option<f64>,
    tol: f64,
) -> PyResult<K00Result> {
    let theta = resolve_theta(theta12, mass_ratio)?;
    let eval = critical::k00_at_charge(theta, charge, tol).map_err(to_py_err)?;
    Ok(K00Result {
        value: eval.value,
        direct_term: eval.direct_term,
        schur_term: eval.schur_term,
        quad_tol: eval.tol,
    })
}

/// Critical-charge upper bound at one angle or mass ratio.
#[pyfunction]
#[pyo3(signature = (theta12=None, mass_ratio=None, tol=1e-13))]
fn z_critical_ub(
    theta12: Option<f64>,
    mass_ratio: Option<f64>,
    tol: f64,
) -> PyResult<CriticalPoint> {
    let theta = resolve_theta(theta12, mass_ratio)?;
    let mut point = critical::z_critical_ub(theta, tol).map_err(to_py_err)?;
    if let Some(mu) = mass_ratio {
        point.mass_ratio = mu;
    }
    Ok(point.into())
}

/// Extended-precision critical charge as a decimal string.
#[pyfunction]
#[pyo3(signature = (mass_ratio, digits=21, rule_points=128))]
fn z_critical_ub_extended(mass_ratio: f64, digits: usize, rule_points: usize) -> PyResult<String> {
    let root = critical::z_critical_ub_dd(mass_ratio, rule_points).map_err(to_py_err)?;
    Ok(root.to_decimal_string(digits))
}

/// Sweep of the critical-charge curve over a uniform angle grid.
#[pyfunction]
#[pyo3(signature = (theta_min, theta_max, steps, tol=1e-11))]
fn critical_curve(
    theta_min: f64,
    theta_max: f64,
    steps: usize,
    tol: f64,
) -> PyResult<Vec<CriticalPoint>> {
    let points = critical::critical_curve(theta_min, theta_max, steps, tol).map_err(to_py_err)?;
    points
        .into_iter()
        .map(|entry| entry.point.map(CriticalPoint::from).map_err(to_py_err))
        .collect()
}

/// Mass ratio below which an arbitrarily small charge binds.
#[pyfunction]
#[pyo3(signature = (tol=1e-6))]
fn zero_charge_mass_threshold(tol: f64) -> PyResult<f64> {
    critical::zero_charge_mass_threshold(tol).map_err(to_py_err)
}

/// Ground-state energy of the 2-D finite-difference oracle.
#[pyfunction]
#[pyo3(signature = (mass_ratio, charge, box_half_width=30.0, mesh=301, tol=1e-10))]
fn grid_oracle_ground_state(
    mass_ratio: f64,
    charge: f64,
    box_half_width: f64,
    mesh: usize,
    tol: f64,
) -> PyResult<f64> {
    let params = make_params(mass_ratio, charge)?;
    let config = GridOracleConfig {
        box_half_width,
        mesh,
        delta_width_cells: 1,
        eigensolver_tol: tol,
    };
    verify::grid_oracle_ground_state(&params, &config).map_err(to_py_err)
}

/// Run the verification suite; returns one result per check.
#[pyfunction]
#[pyo3(signature = (grid_n=400, with_oracle=false, oracle_mesh=301))]
fn run_verification(
    grid_n: usize,
    with_oracle: bool,
    oracle_mesh: usize,
) -> PyResult<Vec<CheckResult>> {
    let config = verify::VerifyConfig {
        grid_n,
        quad_tol: 1e-12,
        oracle: with_oracle.then_some(GridOracleConfig {
            mesh: oracle_mesh,
            ..Default::default()
        }),
    };
    let reports = verify::run_all(&config).map_err(to_py_err)?;
    Ok(reports
        .into_iter()
        .map(|r| CheckResult {
            name: r.name,
            claim: r.claim,
            computed: r.computed,
            expected: r.expected,
            predicate: r.predicate,
            tolerance: r.tolerance,
            passed: r.passed,
        })
        .collect())
}

#[pymodule]
fn deltatrio(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Geometry>()?;
    m.add_class::<BoundState>()?;
    m.add_class::<CriticalPoint>()?;
    m.add_class::<K00Result>()?;
    m.add_class::<CheckResult>()?;
    m.add_function(wrap_pyfunction!(derive_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(mass_ratio_from_theta12, m)?)?;
    m.add_function(wrap_pyfunction!(energy_scale, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bound_states, m)?)?;
    m.add_function(wrap_pyfunction!(k00, m)?)?;
    m.add_function(wrap_pyfunction!(z_critical_ub, m)?)?;
    m.add_function(wrap_pyfunction!(z_critical_ub_extended, m)?)?;
    m.add_function(wrap_pyfunction!(critical_curve, m)?)?;
    m.add_function(wrap_pyfunction!(zero_charge_mass_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(grid_oracle_ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
