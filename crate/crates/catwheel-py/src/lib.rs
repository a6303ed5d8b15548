//! Python bindings.  Angles cross the boundary as fraction strings such as
//! "7/12"; laminations as `Lamination` objects or their JSON text.

use catwheel::analysis::{box_count_dimension, default_scales, densify, estimate_dimension_length_regression, Pt};
use catwheel::angle::{format_q, parse_q, Angle};
use catwheel::kleinian;
use catwheel::lamination::{
    check_pairwise_unlinked, find_perfect_fits, rainbow_search, CheckReport, FiniteLamination, GapClass, Leaf,
};
use catwheel::lattes::{hubbard, origami_curve, zipper};
use catwheel::mating::{self, GapCertificate};
use catwheel::origami::{generate_family, Family, SeedSign};
use catwheel::poly;
use catwheel::render;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn angle(s: &str) -> PyResult<Angle> {
    Ok(Angle::new(parse_q(s).map_err(err)?))
}

fn class(v: &[String]) -> PyResult<GapClass> {
    GapClass::new(v.iter().map(|s| angle(s)).collect::<PyResult<_>>()?).map_err(err)
}

fn class_strs(c: &GapClass) -> Vec<String> {
    c.angles().iter().map(|a| a.to_string()).collect()
}

fn leaf_strs(l: &Leaf) -> (String, String) {
    (l.a().to_string(), l.b().to_string())
}

#[pyclass(name = "Lamination", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLamination(FiniteLamination);

#[pymethods]
impl PyLamination {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        FiniteLamination::from_json_str(text).map(PyLamination).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    /// Classes per level, angles as fraction strings.
    #[getter]
    fn levels(&self) -> Vec<Vec<Vec<String>>> {
        self.0.levels.iter().map(|l| l.iter().map(class_strs).collect()).collect()
    }

    fn leaves(&self, depth: usize) -> Vec<(String, String)> {
        self.0.leaves_up_to(depth).iter().map(leaf_strs).collect()
    }

    fn __repr__(&self) -> String {
        let n: usize = self.0.levels.iter().map(Vec::len).sum();
        format!("Lamination(depth={}, classes={n})", self.0.depth())
    }
}

/// Invariant lamination of x -> d*x from a major given as lists of angles.
#[pyfunction]
fn generate_poly(degree: u32, classes: Vec<Vec<String>>, depth: usize) -> PyResult<PyLamination> {
    let cs = classes.iter().map(|c| class(c)).collect::<PyResult<Vec<_>>>()?;
    let m = poly::validate_major(degree, &cs).map_err(err)?;
    Ok(PyLamination(poly::generate_invariant_lamination(&m, depth).lamination))
}

#[pyfunction]
#[pyo3(signature = (family, theta, depth, sign = "plus"))]
fn generate_origami(family: &str, theta: &str, depth: usize, sign: &str) -> PyResult<PyLamination> {
    let fam = match family {
        "ordinary" => Family::Ordinary,
        "folded" => Family::Folded,
        _ => return Err(PyValueError::new_err("family must be 'ordinary' or 'folded'")),
    };
    let sg = match sign {
        "plus" => SeedSign::Plus,
        "minus" => SeedSign::Minus,
        _ => return Err(PyValueError::new_err("sign must be 'plus' or 'minus'")),
    };
    generate_family(fam, sg, parse_q(theta).map_err(err)?, depth).map(PyLamination).map_err(err)
}

/// (points, preperiod, period) of x under multiplication by d.
#[pyfunction]
#[pyo3(signature = (x, d, max_steps = 1000))]
fn forward_orbit(x: &str, d: u32, max_steps: usize) -> PyResult<(Vec<String>, usize, usize)> {
    let o = poly::forward_orbit(angle(x)?, d, max_steps).map_err(err)?;
    Ok((o.points.iter().map(|a| a.to_string()).collect(), o.preperiod, o.period))
}

/// None when all classes are pairwise unlinked, otherwise the first linked pair.
#[pyfunction]
fn check_unlinked(lam: &PyLamination) -> Option<(Vec<String>, Vec<String>)> {
    match check_pairwise_unlinked(&lam.0.all_classes()) {
        CheckReport::Ok => None,
        CheckReport::Violation(a, b) => Some((class_strs(&a), class_strs(&b))),
    }
}

#[pyfunction]
fn perfect_fits(plus: &PyLamination, minus: &PyLamination) -> Vec<(String, Vec<String>, Vec<String>)> {
    find_perfect_fits(&plus.0.all_classes(), &minus.0.all_classes())
        .iter()
        .map(|f| (f.angle.to_string(), class_strs(&f.plus), class_strs(&f.minus)))
        .collect()
}

#[pyfunction]
fn rainbow(lam: &PyLamination, point: &str, depth: usize) -> PyResult<Vec<(String, String)>> {
    Ok(rainbow_search(angle(point)?, &lam.0, depth).iter().map(leaf_strs).collect())
}

#[pyfunction]
fn ray_class_diameters(plus: &PyLamination, minus: &PyLamination, depth: usize) -> Vec<usize> {
    mating::ray_classes(&plus.0, &minus.0, depth).iter().map(|c| c.diameter).collect()
}

/// ("min_gap", fraction) or ("fit", angle); None if a side is empty.
#[pyfunction]
fn mate_certificate(plus: &PyLamination, minus: &PyLamination, depth: usize) -> Option<(&'static str, String)> {
    mating::no_perfect_fits_certificate(&plus.0, &minus.0, depth).map(|c| match c {
        GapCertificate::MinGap(g) => ("min_gap", format_q(g)),
        GapCertificate::Fit(a) => ("fit", a.to_string()),
    })
}

/// (embedded vertices, per-stage segment counts) of the Hubbard arc.
#[pyfunction]
fn hubbard_arc(depth: usize) -> (Vec<(f64, f64)>, Vec<usize>) {
    let a = hubbard::hubbard_arc(depth);
    (a.embedded(), a.stage_segment_counts)
}

#[pyfunction]
fn hubbard_growth_constant() -> f64 {
    hubbard::growth_constant()
}

#[pyfunction]
#[pyo3(signature = (depth, tree_levels = zipper::DEFAULT_TREE_LEVEL))]
fn zipper_crossings(depth: usize, tree_levels: usize) -> usize {
    let p = zipper::zipper_forest(hubbard::TreeSign::Plus, depth, tree_levels);
    let m = zipper::zipper_forest(hubbard::TreeSign::Minus, depth, tree_levels);
    zipper::count_transverse_crossings(&p, &m)
}

/// (vertices in the square, is_simple) for the last stage.
#[pyfunction]
#[pyo3(signature = (depth, choices = Vec::new()))]
fn lattes_origami(depth: usize, choices: Vec<u8>) -> PyResult<(Vec<(f64, f64)>, bool)> {
    let st = origami_curve::origami_curve(depth, &choices).map_err(err)?;
    let last = &st[depth];
    Ok((last.embedded(), last.is_simple()))
}

#[pyfunction]
fn lightning_polyline(n: u32, m: u32) -> PyResult<Vec<Complex64>> {
    let rep = kleinian::solve_representation(Some(n)).map_err(err)?;
    kleinian::lightning_polyline(&rep, m).map_err(err)
}

/// (m, D, stderr) for the group G_n at mesh eps.
#[pyfunction]
#[pyo3(signature = (n, eps = 1e-3, max_m = 16))]
fn lightning_dimension(n: u32, eps: f64, max_m: u32) -> PyResult<(u32, f64, f64)> {
    let r = kleinian::lightning_dimension(n, eps, max_m).map_err(err)?;
    Ok((r.m, r.estimate.d, r.estimate.stderr))
}

/// (D, stderr) by length regression or box counting.
#[pyfunction]
#[pyo3(signature = (points, scales = None, method = "length"))]
fn estimate_dimension(points: Vec<Pt>, scales: Option<Vec<f64>>, method: &str) -> PyResult<(f64, f64)> {
    let sc = scales.unwrap_or_else(|| default_scales(&points));
    let e = match method {
        "length" => estimate_dimension_length_regression(&points, &sc),
        "box" => {
            let h = sc.iter().cloned().fold(f64::INFINITY, f64::min) / 4.0;
            box_count_dimension(&densify(&points, h), &sc)
        }
        _ => return Err(PyValueError::new_err("method must be 'length' or 'box'")),
    }
    .map_err(err)?;
    Ok((e.d, e.stderr))
}

#[pyfunction]
#[pyo3(signature = (plus, minus = None))]
fn render_disk_svg(plus: &PyLamination, minus: Option<&PyLamination>) -> String {
    let scene = render::DiskScene::new(plus.0.all_classes(), minus.map(|m| m.0.all_classes()).unwrap_or_default());
    render::render_disk_svg(&scene)
}

#[pyfunction]
#[pyo3(signature = (points, closed = false))]
fn render_polyline_svg(points: Vec<Pt>, closed: bool) -> String {
    render::render_polyline_svg(&points, &render::PolylineStyle { closed, ..Default::default() })
}

#[pymodule]
#[pyo3(name = "catwheel")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLamination>()?;
    m.add_function(wrap_pyfunction!(generate_poly, m)?)?;
    m.add_function(wrap_pyfunction!(generate_origami, m)?)?;
    m.add_function(wrap_pyfunction!(forward_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(check_unlinked, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_fits, m)?)?;
    m.add_function(wrap_pyfunction!(rainbow, m)?)?;
    m.add_function(wrap_pyfunction!(ray_class_diameters, m)?)?;
    m.add_function(wrap_pyfunction!(mate_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(hubbard_arc, m)?)?;
    m.add_function(wrap_pyfunction!(hubbard_growth_constant, m)?)?;
    m.add_function(wrap_pyfunction!(zipper_crossings, m)?)?;
    m.add_function(wrap_pyfunction!(lattes_origami, m)?)?;
    m.add_function(wrap_pyfunction!(lightning_polyline, m)?)?;
    m.add_function(wrap_pyfunction!(lightning_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(render_disk_svg, m)?)?;
    m.add_function(wrap_pyfunction!(render_polyline_svg, m)?)?;
    Ok(())
}
