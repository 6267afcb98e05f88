//! Python module `lensfield`.
//!
//! Points are passed as `(x1, x2)` floats and small tensors come back as
//! tuples. Reports (integrals, scans, limits) come back as plain dicts.

use lensfield_core::boundary as bnd;
use lensfield_core::elasticity as ela;
use lensfield_core::fields;
use lensfield_core::geometry::{self, Point2};
use lensfield_core::numerics::{DiffConfig, QuadConfig};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

create_exception!(lensfield, LensfieldError, PyValueError);

fn err(e: lensfield_core::Error) -> PyErr {
    LensfieldError::new_err(e.to_string())
}

fn value_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, value_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| LensfieldError::new_err(e.to_string()))?;
    value_to_py(py, &v)
}

fn quad(abs_tol: Option<f64>, rel_tol: Option<f64>) -> PyResult<QuadConfig> {
    let d = QuadConfig::default();
    QuadConfig::new(abs_tol.unwrap_or(d.abs_tol), rel_tol.unwrap_or(d.rel_tol), d.max_subdivisions).map_err(err)
}

/// Lens between the circles `c = 1` and `c = R`, with stiffening parameter `k`.
#[pyclass(name = "LensDomain", frozen)]
struct PyLensDomain {
    inner: geometry::LensDomain,
}

#[pymethods]
impl PyLensDomain {
    #[new]
    #[pyo3(signature = (r, k = 0.0))]
    fn new(r: f64, k: f64) -> PyResult<Self> {
        Ok(Self { inner: geometry::LensDomain::new(r, k).map_err(err)? })
    }

    #[getter]
    fn inner_c(&self) -> f64 {
        self.inner.inner
    }

    #[getter]
    fn outer_c(&self) -> f64 {
        self.inner.outer
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k
    }

    /// One of "interior", "inner-boundary", "outer-boundary", "exterior", "cusp".
    fn classify(&self, x1: f64, x2: f64) -> PyResult<String> {
        let c = self.inner.classify(Point2::new(x1, x2));
        match serde_json::to_value(c) {
            Ok(Value::String(s)) => Ok(s),
            _ => Err(LensfieldError::new_err("unexpected classification")),
        }
    }

    fn contains(&self, x1: f64, x2: f64) -> bool {
        self.inner.contains(Point2::new(x1, x2))
    }

    fn intersection_points<'py>(&self, py: Python<'py>, a: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.intersection_points(a).map_err(err)?)
    }

    #[pyo3(signature = (a, abs_tol = None, rel_tol = None))]
    fn total_force<'py>(&self, py: Python<'py>, a: f64, abs_tol: Option<f64>, rel_tol: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &bnd::total_force(&self.inner, a, &quad(abs_tol, rel_tol)?).map_err(err)?)
    }

    #[pyo3(signature = (a, abs_tol = None, rel_tol = None))]
    fn total_moment<'py>(&self, py: Python<'py>, a: f64, abs_tol: Option<f64>, rel_tol: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &bnd::total_moment(&self.inner, a, &quad(abs_tol, rel_tol)?).map_err(err)?)
    }

    #[pyo3(signature = (a, abs_tol = None, rel_tol = None))]
    fn boundary_energy<'py>(&self, py: Python<'py>, a: f64, abs_tol: Option<f64>, rel_tol: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &bnd::boundary_energy(&self.inner, a, &quad(abs_tol, rel_tol)?).map_err(err)?)
    }

    /// `E_a` by area quadrature over the punctured lens.
    #[pyo3(signature = (a, abs_tol = None, rel_tol = None))]
    fn area_energy(&self, a: f64, abs_tol: Option<f64>, rel_tol: Option<f64>) -> PyResult<f64> {
        bnd::area_energy(&self.inner, a, &quad(abs_tol, rel_tol)?).map_err(err)
    }

    /// Tabulates the integrals over `radii` (default `0.4 * 2^-n`, n < 7) and
    /// extrapolates to `a -> 0`.
    #[pyo3(signature = (radii = None))]
    fn limit_report<'py>(&self, py: Python<'py>, radii: Option<Vec<f64>>) -> PyResult<Bound<'py, PyAny>> {
        let radii = radii.unwrap_or_else(bnd::default_radii);
        to_py(py, &bnd::limit_report(&self.inner, &radii, &QuadConfig::default()).map_err(err)?)
    }

    #[pyo3(signature = (grid = 64))]
    fn ellipticity_scan<'py>(&self, py: Python<'py>, grid: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &ela::ellipticity_scan(&self.inner, grid).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("LensDomain(R={}, k={})", self.inner.outer, self.inner.k)
    }
}

/// Circle parameter `c = r^2 / (2 x1)` of the family circle through the point.
#[pyfunction]
fn circle_of_point(x1: f64, x2: f64) -> PyResult<f64> {
    geometry::circle_of_point(Point2::new(x1, x2)).map_err(err)
}

#[pyfunction]
fn point_on_circle(c: f64, theta: f64) -> PyResult<(f64, f64)> {
    let p = geometry::CircleId::new(c).and_then(|circ| circ.point_at(theta)).map_err(err)?;
    Ok((p.x1, p.x2))
}

#[pyfunction]
fn displacement(x1: f64, x2: f64) -> PyResult<(f64, f64)> {
    let u = fields::displacement(Point2::new(x1, x2)).map_err(err)?;
    Ok((u.u1, u.u2))
}

/// `(e11, e12, e22)`.
#[pyfunction]
fn strain(x1: f64, x2: f64) -> PyResult<(f64, f64, f64)> {
    let e = fields::strain(Point2::new(x1, x2)).map_err(err)?;
    Ok((e.t11, e.t12, e.t22))
}

#[pyfunction]
fn circle_dilatation(c: f64, theta: f64) -> PyResult<f64> {
    fields::circle_dilatation(c, theta).map_err(err)
}

#[pyfunction]
fn cusp_limit(c: f64) -> PyResult<f64> {
    fields::cusp_limit(c).map_err(err)
}

#[pyfunction]
fn cusp_jump(c1: f64, c2: f64) -> PyResult<f64> {
    fields::cusp_jump(c1, c2).map_err(err)
}

fn material(x1: f64, x2: f64, k: f64) -> PyResult<ela::MaterialPoint> {
    ela::MaterialPoint::new(Point2::new(x1, x2), k).map_err(err)
}

/// `(sigma11, sigma12, sigma22)`.
#[pyfunction]
#[pyo3(signature = (x1, x2, k = 0.0))]
fn stress(x1: f64, x2: f64, k: f64) -> PyResult<(f64, f64, f64)> {
    let s = ela::stress(&material(x1, x2, k)?);
    Ok((s.t11, s.t12, s.t22))
}

/// `(value, (phi11, phi12, phi22))`.
#[pyfunction]
#[pyo3(signature = (x1, x2, k = 0.0))]
fn airy(x1: f64, x2: f64, k: f64) -> PyResult<(f64, (f64, f64, f64))> {
    let a = ela::airy(&material(x1, x2, k)?);
    Ok((a.value, (a.hessian.t11, a.hessian.t12, a.hessian.t22)))
}

#[pyfunction]
#[pyo3(signature = (x1, x2, k = 0.0))]
fn lame<'py>(py: Python<'py>, x1: f64, x2: f64, k: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ela::lame(&material(x1, x2, k)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (x1, x2, k = 0.0))]
fn equilibrium_residual(x1: f64, x2: f64, k: f64) -> PyResult<f64> {
    Ok(ela::equilibrium_residual(&material(x1, x2, k)?, &DiffConfig::default()).map_err(err)?.relative())
}

#[pyfunction]
fn ellipticity_margin(c: f64, theta: f64, k: f64) -> f64 {
    ela::ellipticity_margin(c, theta, k)
}

#[pyfunction]
fn lambda_coefficient(x1: f64, x2: f64) -> PyResult<f64> {
    ela::lambda_coefficient(Point2::new(x1, x2)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (m, k = 0.0))]
fn general_j_derivative_check(m: u32, k: f64) -> PyResult<f64> {
    ela::general_j_derivative_check(m, k, &DiffConfig::default()).map_err(err)
}

/// `(F1, F2)` across the circle `c` at polar angle `theta`.
#[pyfunction]
#[pyo3(signature = (c, theta, k = 0.0))]
fn traction(c: f64, theta: f64, k: f64) -> PyResult<(f64, f64)> {
    let t = bnd::traction(c, theta, k).map_err(err)?;
    Ok((t.f1, t.f2))
}

#[pyfunction]
#[pyo3(signature = (c, theta, k = 0.0))]
fn moment_density(c: f64, theta: f64, k: f64) -> PyResult<f64> {
    bnd::moment_density(c, theta, k).map_err(err)
}

#[pymodule]
fn lensfield(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LensfieldError", m.py().get_type::<LensfieldError>())?;
    m.add_class::<PyLensDomain>()?;
    m.add_function(wrap_pyfunction!(circle_of_point, m)?)?;
    m.add_function(wrap_pyfunction!(point_on_circle, m)?)?;
    m.add_function(wrap_pyfunction!(displacement, m)?)?;
    m.add_function(wrap_pyfunction!(strain, m)?)?;
    m.add_function(wrap_pyfunction!(circle_dilatation, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_limit, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_jump, m)?)?;
    m.add_function(wrap_pyfunction!(stress, m)?)?;
    m.add_function(wrap_pyfunction!(airy, m)?)?;
    m.add_function(wrap_pyfunction!(lame, m)?)?;
    m.add_function(wrap_pyfunction!(equilibrium_residual, m)?)?;
    m.add_function(wrap_pyfunction!(ellipticity_margin, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(general_j_derivative_check, m)?)?;
    m.add_function(wrap_pyfunction!(traction, m)?)?;
    m.add_function(wrap_pyfunction!(moment_density, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    // One test: the module must be registered before the interpreter starts.
    #[test]
    fn module_runs_from_python() {
        pyo3::append_to_inittab!(lensfield);
        Python::initialize();
        Python::attach(|py| {
            let m = py.import("lensfield").unwrap();
            let (u1, u2): (f64, f64) = m.getattr("displacement").unwrap().call1((1.0, 1.0)).unwrap().extract().unwrap();
            assert_eq!((u1, u2), (1.0, 0.0));
            let dom = m.getattr("LensDomain").unwrap().call1((2.0, 1.0)).unwrap();
            let force = dom.call_method1("total_force", (0.5,)).unwrap();
            let t2 = force.get_item("t2").unwrap();
            let q: f64 = t2.get_item("quadrature_value").unwrap().extract().unwrap();
            let c: f64 = t2.get_item("closed_form_value").unwrap().extract().unwrap();
            assert!((q - c).abs() < 1e-8);
            let e = m.getattr("LensDomain").unwrap().call1((0.5,)).unwrap_err();
            assert!(e.is_instance_of::<LensfieldError>(py));
            assert!(e.is_instance_of::<PyValueError>(py));

            let v = serde_json::json!({"a": [1, 2.5, null], "b": "x", "c": true});
            let obj = value_to_py(py, &v).unwrap();
            let a = obj.get_item("a").unwrap();
            assert_eq!(a.len().unwrap(), 3);
            assert_eq!(a.get_item(0).unwrap().extract::<i64>().unwrap(), 1);
            assert_eq!(a.get_item(1).unwrap().extract::<f64>().unwrap(), 2.5);
            assert!(a.get_item(2).unwrap().is_none());
            assert_eq!(obj.get_item("b").unwrap().extract::<String>().unwrap(), "x");
            assert!(obj.get_item("c").unwrap().extract::<bool>().unwrap());
        });
    }
}
