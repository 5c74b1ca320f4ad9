//! Python bindings: programs, grounding, the meta transformation,
//! guess/check integration, solving and the verification suites.

use gcmeta::ground::{ground_pair, GroundMode, Grounder};
use gcmeta::integrate::integrate_programs;
use gcmeta::suite::{run_suite, Family, SuiteConfig};
use gcmeta::{AnswerSet, Budget, Error, SolveConfig, TransformOptions};
use pyo3::exceptions::{PyTimeoutError, PyValueError};
use pyo3::prelude::*;
use std::collections::BTreeMap;
use std::time::Duration;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => PyTimeoutError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn mode(s: &str) -> PyResult<GroundMode> {
    match s {
        "naive" => Ok(GroundMode::Naive),
        "relevant" => Ok(GroundMode::Relevant),
        _ => Err(PyValueError::new_err(format!("unknown grounding mode `{s}`"))),
    }
}

fn options(s: &str) -> PyResult<TransformOptions> {
    TransformOptions::parse(s).map_err(py_err)
}

fn sets_to_py(sets: &[AnswerSet]) -> Vec<Vec<String>> {
    sets.iter().map(|s| s.literals.iter().map(ToString::to_string).collect()).collect()
}

/// A disjunctive logic program.
#[pyclass(name = "Program", module = "gcmeta", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyProgram {
    inner: gcmeta::Program,
}

#[pymethods]
impl PyProgram {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyProgram { inner: gcmeta::parse(text).map_err(py_err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Program(<{} rules>)", self.inner.len())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PyProgram) -> bool {
        self.inner == other.inner
    }

    #[getter]
    fn is_ground(&self) -> bool {
        self.inner.is_ground()
    }

    /// Syntactic class: ground, positive, normal, hcf, stratified.
    fn flags(&self) -> BTreeMap<&'static str, bool> {
        let f = self.inner.flags();
        BTreeMap::from([
            ("ground", f.ground),
            ("positive", f.positive),
            ("normal", f.normal),
            ("hcf", f.hcf),
            ("stratified", f.stratified),
        ])
    }

    fn rules(&self) -> Vec<String> {
        self.inner.rules().iter().map(ToString::to_string).collect()
    }
}

#[pyfunction]
#[pyo3(signature = (program, mode = "relevant"))]
fn ground(program: &PyProgram, mode: &str) -> PyResult<PyProgram> {
    let (g, _) = Grounder::new(self::mode(mode)?).ground(&program.inner).map_err(py_err)?;
    Ok(PyProgram { inner: g })
}

/// The meta program for a (ground or groundable) head-cycle-free program.
#[pyfunction]
#[pyo3(signature = (program, opt = "none"))]
fn transform(program: &PyProgram, opt: &str) -> PyResult<PyProgram> {
    let p = if program.inner.is_ground() && !program.inner.has_builtins() {
        program.inner.clone()
    } else {
        Grounder::new(GroundMode::Relevant).ground(&program.inner).map_err(py_err)?.0
    };
    Ok(PyProgram { inner: gcmeta::tr(&p, &options(opt)?).map_err(py_err)? })
}

/// Returns the integrated program, the predicate renames and any warnings.
#[pyfunction]
#[pyo3(signature = (guess, check, opt = "none"))]
fn integrate(guess: &PyProgram, check: &PyProgram, opt: &str) -> PyResult<(PyProgram, BTreeMap<String, String>, Vec<String>)> {
    let (g, c) = ground_pair(&guess.inner, &check.inner, GroundMode::Relevant).map_err(py_err)?;
    let i = integrate_programs(&g, &c, &options(opt)?).map_err(py_err)?;
    Ok((PyProgram { inner: i.program }, i.renames, i.warnings))
}

/// Answer sets as sorted lists of literal strings. `project` keeps only the
/// listed predicates (duplicates after projection are dropped).
#[pyfunction]
#[pyo3(signature = (program, limit = None, project = None, budget_ms = None))]
fn solve(program: &PyProgram, limit: Option<usize>, project: Option<Vec<String>>, budget_ms: Option<u64>) -> PyResult<Vec<Vec<String>>> {
    let mut budget = Budget::from_env();
    if let Some(ms) = budget_ms {
        budget.time = Some(Duration::from_millis(ms));
    }
    let cfg = SolveConfig { limit, project: None, budget };
    let (sets, _) = gcmeta::solve_program(&program.inner, &cfg).map_err(py_err)?;
    let mut out = sets_to_py(&sets);
    if let Some(preds) = project {
        let keep: Vec<&str> = preds.iter().map(String::as_str).collect();
        let mut seen = std::collections::BTreeSet::new();
        out = sets
            .iter()
            .map(|s| s.restrict_to_predicates(&keep))
            .filter(|s| seen.insert(s.clone()))
            .map(|s| s.iter().map(ToString::to_string).collect())
            .collect();
    }
    Ok(out)
}

/// Answer sets by exhaustive enumeration (small ground programs only).
#[pyfunction]
fn brute_force(program: &PyProgram) -> PyResult<Vec<Vec<String>>> {
    Ok(sets_to_py(&gcmeta::brute_force(&program.inner).map_err(py_err)?))
}

/// Runs an oracle-agreement suite; returns (passed, report text).
#[pyfunction]
#[pyo3(signature = (family, sizes, seeds, opt = None))]
fn verify(family: &str, sizes: Vec<usize>, seeds: Vec<u64>, opt: Option<&str>) -> PyResult<(bool, String)> {
    let mut cfg = SuiteConfig::new(Family::parse(family).map_err(py_err)?, sizes, seeds);
    if let Some(o) = opt {
        cfg.options = vec![options(o)?];
    }
    let report = run_suite(&cfg).map_err(py_err)?;
    Ok((report.passed(), report.to_string()))
}

#[pymodule]
#[pyo3(name = "gcmeta")]
fn gcmeta_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProgram>()?;
    m.add_function(wrap_pyfunction!(ground, m)?)?;
    m.add_function(wrap_pyfunction!(transform, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
