//! Python bindings: the density family with its closed forms, the Dido
//! flow, rearrangements, the comparison solver and the spectral/Hardy
//! quantities, exposed as plain functions and one density class.

use conedido::density;
use conedido::pde;
use conedido::profile::{ProfileQuadrature, RadialProfile};
use conedido::rearrange;
use conedido::search;
use conedido::spectral;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: conedido::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Density a x_N^k exp(c |x|^2) on the half-space {x_N > 0}.
#[pyclass]
#[derive(Clone)]
struct Density {
    inner: density::Density,
}

#[pymethods]
impl Density {
    #[new]
    #[pyo3(signature = (k, c, dim=2, a=1.0))]
    fn new(k: f64, c: f64, dim: usize, a: f64) -> PyResult<Self> {
        Ok(Density {
            inner: density::Density::new(a, k, c, dim, density::Domain::HalfSpace).map_err(err)?,
        })
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.n
    }

    /// Angular constant C_mu (a_k when dim = 2).
    fn angular_constant(&self) -> f64 {
        self.inner.angular_constant()
    }

    fn psi(&self, r: f64) -> PyResult<f64> {
        self.inner.psi(r).map_err(err)
    }

    fn psi_inv(&self, m: f64) -> PyResult<f64> {
        self.inner.psi_inv(m).map_err(err)
    }

    fn half_ball_measure(&self, radius: f64) -> PyResult<f64> {
        self.inner.half_ball_measure(radius).map_err(err)
    }

    fn half_ball_perimeter(&self, radius: f64) -> PyResult<f64> {
        self.inner.half_ball_perimeter(radius).map_err(err)
    }

    fn isoperimetric_profile(&self, tau: f64) -> PyResult<f64> {
        self.inner.isoperimetric_profile(tau).map_err(err)
    }

    fn star_radius(&self, tau: f64) -> PyResult<f64> {
        self.inner.star_radius(tau).map_err(err)
    }

    fn stability_rhs(&self, r: f64) -> PyResult<f64> {
        spectral::stability_rhs(&self.inner, r).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Density(k={}, c={}, dim={}, a={})",
            self.inner.k, self.inner.c, self.inner.n, self.inner.a
        )
    }
}

/// Perimeter and measure of a starlike profile rho(theta) on [0, pi].
#[pyfunction]
fn profile_perimeter_measure(d: &Density, rho: Vec<f64>) -> PyResult<(f64, f64)> {
    let p = RadialProfile::new(rho, d.inner).map_err(err)?;
    let q = ProfileQuadrature::new(&d.inner, p.panels()).map_err(err)?;
    Ok((q.perimeter(&p.rho), q.measure(&p.rho)))
}

/// Runs the constrained Dido flow; returns a dict with the final profile.
#[pyfunction]
#[pyo3(signature = (d, rho, target=None, max_iters=100_000))]
fn minimize_perimeter<'py>(
    py: Python<'py>,
    d: &Density,
    rho: Vec<f64>,
    target: Option<f64>,
    max_iters: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p0 = RadialProfile::new(rho, d.inner).map_err(err)?;
    let q = ProfileQuadrature::new(&d.inner, p0.panels()).map_err(err)?;
    let target = target.unwrap_or_else(|| q.measure(&p0.rho));
    let opts = search::FlowOptions {
        max_iters,
        ..search::FlowOptions::default()
    };
    let res = search::minimize_perimeter(&d.inner, target, &p0, &opts).map_err(err)?;
    let out = PyDict::new_bound(py);
    out.set_item("rho", res.profile.rho.clone())?;
    out.set_item("converged", res.converged)?;
    out.set_item("iterations", res.iterations)?;
    out.set_item("perimeter", res.perimeter)?;
    out.set_item("measure", res.measure)?;
    Ok(out)
}

/// Isoperimetric margin P(M) - I(mu(M)) of a starlike profile.
#[pyfunction]
fn isoperimetric_margin(d: &Density, rho: Vec<f64>) -> PyResult<f64> {
    let p = RadialProfile::new(rho, d.inner).map_err(err)?;
    search::verify_isoperimetric(&d.inner, &p).map_err(err)
}

/// Star rearrangement of node values on a (radii+1) x (angles+1) polar
/// grid, flattened row-major; returns (values, radii, angles, r_star).
#[pyfunction]
fn star_rearrangement(
    d: &Density,
    values: Vec<f64>,
    radii: usize,
    angles: usize,
    r_d: f64,
) -> PyResult<(Vec<f64>, usize, usize, f64)> {
    let u = rearrange::GridFunction::new(radii, angles, r_d, d.inner, values).map_err(err)?;
    let s = rearrange::star_rearrangement(&u).map_err(err)?;
    Ok((s.values.clone(), s.radii, s.angles, s.r_d))
}

/// Weighted Dirichlet-type energy (integral of |grad u|^q d mu).
#[pyfunction]
fn gradient_qnorm(
    d: &Density,
    values: Vec<f64>,
    radii: usize,
    angles: usize,
    r_d: f64,
    q: f64,
) -> PyResult<f64> {
    let u = rearrange::GridFunction::new(radii, angles, r_d, d.inner, values).map_err(err)?;
    rearrange::gradient_qnorm(&u, q).map_err(err)
}

/// Solves the isotropic degenerate problem with unit source on the
/// half-disk and returns (u_center, pointwise_margin, qnorm_margins).
#[pyfunction]
#[pyo3(signature = (d, grid=96, lambda_bound=1.0))]
fn pde_compare(
    d: &Density,
    grid: usize,
    lambda_bound: f64,
) -> PyResult<(f64, f64, Vec<(f64, f64)>)> {
    let src =
        rearrange::GridFunction::sample(grid, grid, 1.0, d.inner, |_, _| 1.0).map_err(err)?;
    let field = if lambda_bound > 1.0 {
        pde::MatrixField::AxisAligned { lambda: lambda_bound }
    } else {
        pde::MatrixField::Isotropic
    };
    let p = pde::ProblemSpec::new(d.inner, field, lambda_bound.max(1.0), src).map_err(err)?;
    let u = pde::solve_fd(&p).map_err(err)?;
    let rep = pde::compare(&u, &p).map_err(err)?;
    Ok((u.value(0, 0), rep.pointwise_margin, rep.qnorm_margins.clone()))
}

/// First nontrivial Neumann eigenvalue of the sin^k-weighted half-circle.
#[pyfunction]
#[pyo3(signature = (k, nodes=4096))]
fn neumann_eigenvalue(k: f64, nodes: usize) -> PyResult<(f64, Vec<f64>)> {
    let e = spectral::neumann_eigenvalue(k, nodes).map_err(err)?;
    Ok((e.lambda1, e.eigenvector.clone()))
}

/// Sharp Hardy constant ((N+m+k)/2)^2 - m on the quarter space.
#[pyfunction]
fn hardy_constant(dim: usize, k: f64, m: u32) -> PyResult<f64> {
    let spec = spectral::HardySpec::new(dim, k, m).map_err(err)?;
    Ok(spectral::hardy_constant(&spec))
}

/// Rayleigh quotient of the extremal-sequence member u_n.
#[pyfunction]
fn hardy_test_sequence(dim: usize, k: f64, m: u32, n: usize) -> PyResult<f64> {
    let spec = spectral::HardySpec::new(dim, k, m).map_err(err)?;
    spectral::hardy_test_sequence(&spec, n).map_err(err)
}

#[pymodule]
fn conedido_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Density>()?;
    m.add_function(wrap_pyfunction!(profile_perimeter_measure, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_perimeter, m)?)?;
    m.add_function(wrap_pyfunction!(isoperimetric_margin, m)?)?;
    m.add_function(wrap_pyfunction!(star_rearrangement, m)?)?;
    m.add_function(wrap_pyfunction!(gradient_qnorm, m)?)?;
    m.add_function(wrap_pyfunction!(pde_compare, m)?)?;
    m.add_function(wrap_pyfunction!(neumann_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_constant, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_test_sequence, m)?)?;
    Ok(())
}
