//! Python bindings. Reports come back as plain dicts and lists.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use lalg::families::{self, ClassFilter, SweepConfig};
use lalg::ideals::{all_ideals, is_ideal, spectrum};
use lalg::products::{self, ActionMap, ProductAlgebra};
use lalg::words::{self, Word};
use lalg::{AlgebraTable, ElemSet, LalgError};

create_exception!(pylalg, BudgetExceeded, PyException, "A search or word budget ran out.");
create_exception!(pylalg, Falsified, PyException, "A checked property failed.");

fn err(e: LalgError) -> PyErr {
    match e {
        LalgError::ResourceBound { .. } | LalgError::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        LalgError::Falsified { .. } => Falsified::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (_, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, r: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(r).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn sets(s: &[ElemSet]) -> Vec<Vec<usize>> {
    s.iter().map(|x| x.to_vec()).collect()
}

/// A finite operation table with the unit at index 0.
#[pyclass(name = "Table", module = "pylalg", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyTable {
    inner: AlgebraTable,
}

#[pymethods]
impl PyTable {
    #[new]
    fn new(rows: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyTable {
            inner: AlgebraTable::new(rows).map_err(err)?,
        })
    }

    /// Parses the text format or its JSON mirror.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyTable {
            inner: AlgebraTable::parse_any(text).map_err(err)?,
        })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        self.inner.rows()
    }

    fn op(&self, x: usize, y: usize) -> PyResult<usize> {
        self.inner.check_index(x).and(self.inner.check_index(y)).map_err(err)?;
        Ok(self.inner.op(x, y))
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Class flags with one witness per failed flag.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &lalg::validate(&self.inner))
    }

    fn ideals(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(sets(&all_ideals(&self.inner).map_err(err)?.ideals))
    }

    fn is_ideal(&self, subset: Vec<usize>) -> PyResult<bool> {
        let s: ElemSet = subset.iter().copied().collect();
        self.inner.check_set(&s).map_err(err)?;
        Ok(is_ideal(&self.inner, &s).map_err(err)?.is_ideal())
    }

    /// The prime ideals.
    fn spectrum(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(sets(&spectrum(&self.inner).map_err(err)?.primes))
    }

    fn canonical(&self) -> PyResult<Self> {
        Ok(PyTable {
            inner: lalg::canonical_form(&self.inner).map_err(err)?,
        })
    }

    fn isomorphic(&self, other: &PyTable) -> PyResult<bool> {
        lalg::isomorphic(&self.inner, &other.inner).map_err(err)
    }

    fn endomorphisms(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(lalg::endomorphisms(&self.inner).map_err(err)?.into_iter().map(|m| m.map).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!("Table({:?})", self.inner.rows())
    }
}

fn action(base: &PyTable, actor: &PyTable, rho: Vec<Vec<usize>>) -> PyResult<ActionMap> {
    ActionMap::new(base.inner.clone(), actor.inner.clone(), rho).map_err(err)
}

fn product_result(p: ProductAlgebra) -> (PyTable, Vec<(usize, usize)>) {
    (PyTable { inner: p.algebra }, p.carrier)
}

/// `X ⋊ Y` with carrier pairs `(x, u)`.
#[pyfunction]
fn semidirect(base: &PyTable, actor: &PyTable, rho: Vec<Vec<usize>>) -> PyResult<(PyTable, Vec<(usize, usize)>)> {
    Ok(product_result(products::semidirect(&action(base, actor, rho)?).map_err(err)?))
}

/// The symmetric semidirect product; `rho` must be a CKL operation.
#[pyfunction]
fn symmetric(base: &PyTable, actor: &PyTable, rho: Vec<Vec<usize>>) -> PyResult<(PyTable, Vec<(usize, usize)>)> {
    Ok(product_result(products::symmetric_semidirect(&action(base, actor, rho)?).map_err(err)?))
}

#[pyfunction]
fn make_a(n: usize) -> PyResult<PyTable> {
    Ok(PyTable {
        inner: families::make_a(n).map_err(err)?,
    })
}

#[pyfunction]
fn make_lh(n: usize) -> PyResult<PyTable> {
    Ok(PyTable {
        inner: families::make_lh(n).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, cls = "l", simple = false, budget_nodes = None))]
fn enumerate(py: Python<'_>, n: usize, cls: &str, simple: bool, budget_nodes: Option<u64>) -> PyResult<Vec<PyTable>> {
    let class: ClassFilter = cls.parse().map_err(err)?;
    let cfg = SweepConfig::default();
    let mut task = cfg.task(n, class).simple(simple);
    if let Some(nodes) = budget_nodes {
        task = task.with_budget(nodes, families::DEFAULT_TIME_BUDGET);
    }
    let tables = py.detach(|| families::enumerate(&task)).map_err(err)?;
    Ok(tables.into_iter().map(|inner| PyTable { inner }).collect())
}

#[pyfunction]
fn conjecture_search<'py>(py: Python<'py>, max_n: usize) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| families::conjecture_search(max_n, &SweepConfig::default())).map_err(err)?;
    report(py, &r)
}

/// `a·b` in the free monoid over the table's elements.
#[pyfunction]
#[pyo3(signature = (table, a, b, budget = words::DEFAULT_WORD_BUDGET))]
fn word_dot(table: &PyTable, a: Vec<usize>, b: Vec<usize>, budget: usize) -> PyResult<Vec<usize>> {
    let base = Arc::new(table.inner.clone());
    let a = Word::new(&base, a).map_err(err)?;
    let b = Word::new(&base, b).map_err(err)?;
    Ok(words::word_dot(&a, &b, budget).map_err(err)?.letters().to_vec())
}

/// Bounded context test of `a ≈ b`; the dict has an `outcome` key.
#[pyfunction]
#[pyo3(signature = (table, a, b, depth = words::DEFAULT_CONTEXT_DEPTH, budget = words::DEFAULT_WORD_BUDGET))]
fn approx_equiv<'py>(
    py: Python<'py>,
    table: &PyTable,
    a: Vec<usize>,
    b: Vec<usize>,
    depth: usize,
    budget: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let base = Arc::new(table.inner.clone());
    let a = Word::new(&base, a).map_err(err)?;
    let b = Word::new(&base, b).map_err(err)?;
    let r = py.detach(|| words::approx_equiv(&a, &b, depth, budget)).map_err(err)?;
    report(py, &r)
}

#[pymodule]
fn pylalg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTable>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("Falsified", m.py().get_type::<Falsified>())?;
    m.add_function(wrap_pyfunction!(semidirect, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(make_a, m)?)?;
    m.add_function(wrap_pyfunction!(make_lh, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_search, m)?)?;
    m.add_function(wrap_pyfunction!(word_dot, m)?)?;
    m.add_function(wrap_pyfunction!(approx_equiv, m)?)?;
    Ok(())
}
