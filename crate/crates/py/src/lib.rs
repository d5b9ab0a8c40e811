//! Python bindings. Grids cross the boundary as nested lists indexed
//! `[i][j]` (z first, then r).

use ndarray::Array2;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use forcefree::clebsch::{self, ClebschField, HalfPlaneGrid};
use forcefree::fields::{self, FieldParams};
use forcefree::relax::{self, RelaxConfig};
use forcefree::specfun::{self, BesselOrder};
use forcefree::{fluxsim, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.outer_iter().map(|row| row.to_vec()).collect()
}

fn from_rows(rows: Vec<Vec<f64>>, shape: (usize, usize)) -> PyResult<Array2<f64>> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(PyValueError::new_err(format!("expected a {}x{} nested list", shape.0, shape.1)));
    }
    Ok(Array2::from_shape_fn(shape, |(i, j)| rows[i][j]))
}

#[pyclass(name = "FieldParams", module = "forcefree_py", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyFieldParams(FieldParams);

#[pymethods]
impl PyFieldParams {
    #[new]
    #[pyo3(signature = (w, lam, gamma = 0.0))]
    fn new(w: f64, lam: f64, gamma: f64) -> PyResult<Self> {
        FieldParams::new(w, lam, gamma).map(Self).map_err(py_err)
    }

    #[getter]
    fn w(&self) -> f64 {
        self.0.w
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.0.lambda
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    /// Radius `R = c_{3/2} / λ^{1/2}` of the explicit solution.
    fn radius(&self) -> f64 {
        self.0.radius()
    }

    fn phi_inf(&self, r: f64) -> f64 {
        self.0.phi_inf(r)
    }

    fn __repr__(&self) -> String {
        format!("FieldParams(w={}, lam={}, gamma={})", self.0.w, self.0.lambda, self.0.gamma)
    }
}

#[pyclass(name = "HalfPlaneGrid", module = "forcefree_py", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyGrid(HalfPlaneGrid);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(z_min: f64, z_max: f64, r_max: f64, nz: usize, nr: usize) -> PyResult<Self> {
        HalfPlaneGrid::new(z_min, z_max, r_max, nz, nr).map(Self).map_err(py_err)
    }

    /// Box `[−half_width, half_width] × [0, r_max]`.
    #[staticmethod]
    fn centered(half_width: f64, r_max: f64, nz: usize, nr: usize) -> PyResult<Self> {
        HalfPlaneGrid::centered(half_width, r_max, nz, nr).map(Self).map_err(py_err)
    }

    #[getter]
    fn nz(&self) -> usize {
        self.0.nz()
    }

    #[getter]
    fn nr(&self) -> usize {
        self.0.nr()
    }

    #[getter]
    fn hz(&self) -> f64 {
        self.0.hz()
    }

    #[getter]
    fn hr(&self) -> f64 {
        self.0.hr()
    }

    fn z(&self, i: usize) -> f64 {
        self.0.z(i)
    }

    fn r(&self, j: usize) -> f64 {
        self.0.r(j)
    }

    fn __repr__(&self) -> String {
        let g = &self.0;
        format!(
            "HalfPlaneGrid(z=[{}, {}], r_max={}, nz={}, nr={})",
            g.z_min(),
            g.z_max(),
            g.r_max(),
            g.nz(),
            g.nr()
        )
    }
}

#[pyclass(name = "ClebschField", module = "forcefree_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField(ClebschField);

#[pymethods]
impl PyField {
    /// Field from nested lists; the axis column must be zero.
    #[new]
    fn new(grid: &PyGrid, phi: Vec<Vec<f64>>, g: Vec<Vec<f64>>) -> PyResult<Self> {
        let shape = grid.0.shape();
        ClebschField::from_samples(grid.0, from_rows(phi, shape)?, from_rows(g, shape)?)
            .map(Self)
            .map_err(py_err)
    }

    #[staticmethod]
    fn chandrasekhar(grid: &PyGrid, params: &PyFieldParams) -> PyResult<Self> {
        ClebschField::chandrasekhar(grid.0, &params.0).map(Self).map_err(py_err)
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(*self.0.grid())
    }

    #[getter]
    fn phi(&self) -> Vec<Vec<f64>> {
        to_rows(self.0.phi())
    }

    #[getter]
    fn g(&self) -> Vec<Vec<f64>> {
        to_rows(self.0.g())
    }

    fn with_negated_swirl(&self) -> Self {
        Self(self.0.with_negated_swirl())
    }

    fn shifted_z(&self, k: isize) -> Self {
        Self(self.0.shifted_z(k))
    }
}

#[pyfunction]
fn c32() -> f64 {
    specfun::c32()
}

#[pyfunction]
fn bessel_j(nu: f64, x: f64) -> PyResult<f64> {
    let order = BesselOrder::from_value(nu).map_err(py_err)?;
    specfun::bessel_j(order, x).map_err(py_err)
}

#[pyfunction]
fn first_positive_root(nu: f64) -> PyResult<f64> {
    let order = BesselOrder::from_value(nu).map_err(py_err)?;
    specfun::first_positive_root(order).map_err(py_err)
}

#[pyfunction]
fn helicity_constant_hc(params: &PyFieldParams) -> f64 {
    fields::helicity_constant_hc(&params.0)
}

#[pyfunction]
fn phi_c(z: f64, r: f64, params: &PyFieldParams) -> f64 {
    fields::phi_c(z, r, &params.0)
}

#[pyfunction]
fn energy(field: &PyField) -> f64 {
    clebsch::energy(&field.0)
}

#[pyfunction]
fn gen_helicity(field: &PyField, params: &PyFieldParams) -> f64 {
    clebsch::gen_helicity(&field.0, &params.0)
}

#[pyfunction]
fn mean_square_potential(field: &PyField, params: &PyFieldParams) -> f64 {
    clebsch::mean_square_potential(&field.0, &params.0)
}

#[pyfunction]
fn write_dump(path: &str, field: &PyField, params: &PyFieldParams) -> PyResult<()> {
    clebsch::write_dump(path, &field.0, &params.0).map_err(py_err)
}

#[pyfunction]
fn read_dump(path: &str) -> PyResult<(PyField, PyFieldParams)> {
    let (f, p) = clebsch::read_dump(path).map_err(py_err)?;
    Ok((PyField(f), PyFieldParams(p)))
}

/// Relaxes on the `[−4R, 4R] × [0, 4R]` box. Returns a dict with `field`,
/// `mu`, `converged`, `iterations`, `energy`.
#[pyfunction]
#[pyo3(signature = (params, nz, nr, target_h = None, max_iters = 500))]
fn minimize<'py>(
    py: Python<'py>,
    params: &PyFieldParams,
    nz: usize,
    nr: usize,
    target_h: Option<f64>,
    max_iters: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = RelaxConfig::benchmark(params.0, nz, nr).map_err(py_err)?;
    if let Some(h) = target_h {
        cfg.target_h = h;
    }
    cfg.max_iters = max_iters;
    let rep = py.detach(|| relax::minimize(&cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("mu", rep.mu)?;
    d.set_item("converged", rep.converged)?;
    d.set_item("iterations", rep.iterations)?;
    d.set_item("energy", rep.energy_history.last().copied().unwrap_or(0.0))?;
    d.set_item("field", PyField(rep.field))?;
    Ok(d)
}

/// Aligns `b` onto `a`; returns `(shift, distance)`.
#[pyfunction]
fn orbit_distance(a: &PyField, pa: &PyFieldParams, b: &PyField, pb: &PyFieldParams) -> PyResult<(f64, f64)> {
    let c = relax::orbit_distance(&a.0, &pa.0, &b.0, &pb.0).map_err(py_err)?;
    Ok((c.shift, c.distance))
}

/// Runs the flux-transport simulator with an optional ring flow and returns
/// the trace columns as a dict of lists.
#[pyfunction]
#[pyo3(signature = (params, initial, mu, t_end, stream_amplitude = 0.0, n_samples = 11))]
fn simulate<'py>(
    py: Python<'py>,
    params: &PyFieldParams,
    initial: &PyField,
    mu: f64,
    t_end: f64,
    stream_amplitude: f64,
    n_samples: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = fluxsim::SimConfig::new(params.0, initial.0.clone(), mu, t_end);
    cfg.n_samples = n_samples;
    if stream_amplitude != 0.0 {
        let r = params.0.radius();
        cfg.stream_psi = fluxsim::ring_stream(initial.0.grid(), stream_amplitude, r, 0.7 * r);
    }
    let tr = py.detach(|| fluxsim::run(&cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("t", tr.times)?;
    d.set_item("H", tr.h_series)?;
    d.set_item("M", tr.m_series)?;
    d.set_item("diss_H", tr.helicity_dissipation_accum)?;
    d.set_item("diss_M", tr.msp_dissipation_accum)?;
    d.set_item("res_H", tr.balance_residual_h)?;
    d.set_item("res_M", tr.balance_residual_m)?;
    Ok(d)
}

#[pymodule]
fn forcefree_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFieldParams>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(c32, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(first_positive_root, m)?)?;
    m.add_function(wrap_pyfunction!(helicity_constant_hc, m)?)?;
    m.add_function(wrap_pyfunction!(phi_c, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(gen_helicity, m)?)?;
    m.add_function(wrap_pyfunction!(mean_square_potential, m)?)?;
    m.add_function(wrap_pyfunction!(write_dump, m)?)?;
    m.add_function(wrap_pyfunction!(read_dump, m)?)?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_distance, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
