use std::cmp::Ordering;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use shuffle_core::address::{self, Address};
use shuffle_core::algebra::{self, I1Element};
use shuffle_core::canonical;
use shuffle_core::enumerate;
use shuffle_core::fixtures::{self, FIXTURES};
use shuffle_core::ordinal::{OrderType, Orientation};
use shuffle_core::shuffle;

const DEFAULT_BUDGET: u64 = 1_000_000;

create_exception!(shuffles, ShuffleError, PyValueError);

fn fail<E: std::fmt::Display>(e: E) -> PyErr {
    ShuffleError::new_err(e.to_string())
}

fn orientation(sign: &str) -> PyResult<Orientation> {
    match sign {
        "+" => Ok(Orientation::Plus),
        "-" => Ok(Orientation::Minus),
        other => Err(PyValueError::new_err(format!("sign must be '+' or '-', not {other:?}"))),
    }
}

/// A presented shuffle: components of index domains and value maps.
#[pyclass(frozen, name = "Shuffle", module = "shuffles")]
struct PyShuffle {
    inner: shuffle::Shuffle,
}

fn wrap(inner: shuffle::Shuffle) -> PyShuffle {
    PyShuffle { inner }
}

#[pymethods]
impl PyShuffle {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        shuffle::Shuffle::from_json(text).map(wrap).map_err(fail)
    }

    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::fixture(name)
            .ok_or_else(|| PyValueError::new_err(format!("no fixture named {name:?}")))?
            .map(wrap)
            .map_err(fail)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(fail)
    }

    #[getter]
    fn label(&self) -> &str {
        self.inner.label()
    }

    fn degree(&self) -> String {
        self.inner.degree().to_string()
    }

    fn sign(&self) -> String {
        self.inner.sign().to_string()
    }

    fn order_type(&self) -> PyResult<String> {
        self.inner.order_type().map(|o| o.to_string()).map_err(fail)
    }

    #[pyo3(signature = (x, budget = DEFAULT_BUDGET))]
    fn address(&self, x: u64, budget: u64) -> PyResult<(u64, Vec<i64>)> {
        let a = address::address_of(&self.inner, x, budget).map_err(fail)?;
        Ok((a.component, a.indices))
    }

    fn value(&self, component: u64, indices: Vec<i64>) -> PyResult<u64> {
        address::value_at(&self.inner, &Address::new(component, indices)).map_err(fail)
    }

    /// -1, 0 or 1 as `x` precedes, equals or follows `y`.
    #[pyo3(signature = (x, y, budget = DEFAULT_BUDGET))]
    fn compare(&self, x: u64, y: u64, budget: u64) -> PyResult<i8> {
        Ok(match address::compare(&self.inner, x, y, budget).map_err(fail)? {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        })
    }

    #[pyo3(signature = (x, y, budget = DEFAULT_BUDGET))]
    fn precedes(&self, x: u64, y: u64, budget: u64) -> PyResult<bool> {
        address::precedes(&self.inner, x, y, budget).map_err(fail)
    }

    #[pyo3(signature = (xs, budget = DEFAULT_BUDGET))]
    fn sort(&self, xs: Vec<u64>, budget: u64) -> PyResult<Vec<u64>> {
        address::sort_prefix(&self.inner, &xs, budget).map_err(fail)
    }

    #[pyo3(signature = (x, budget = DEFAULT_BUDGET))]
    fn successor(&self, x: u64, budget: u64) -> PyResult<Option<u64>> {
        address::segment_successor(&self.inner, x, budget).map_err(fail)
    }

    /// `(missing, duplicated values)` among `0..=n`.
    #[pyo3(signature = (n, budget = DEFAULT_BUDGET))]
    fn verify(&self, n: u64, budget: u64) -> (Vec<u64>, Vec<u64>) {
        let r = enumerate::verify(&self.inner, n, budget);
        (r.missing, r.duplicates.into_iter().map(|d| d.0).collect())
    }

    fn involution(&self) -> PyResult<Self> {
        algebra::involution(&self.inner).map(wrap).map_err(fail)
    }

    fn compose(&self, other: &PyShuffle) -> PyResult<Self> {
        algebra::compose(&self.inner, &other.inner).map(wrap).map_err(fail)
    }

    fn order_equivalent(&self, other: &PyShuffle) -> PyResult<bool> {
        address::order_equivalent(&self.inner, &other.inner).map_err(fail)
    }

    /// `(canonical part sequence, unique)`.
    fn canonical(&self) -> (String, bool) {
        let (ps, unique) = canonical::canonicalize(&canonical::part_type_sequence(&self.inner));
        (ps.to_string(), unique)
    }

    #[pyo3(signature = (dot = false))]
    fn diagram(&self, dot: bool) -> String {
        if dot { canonical::diagram_dot(&self.inner) } else { canonical::diagram(&self.inner) }
    }

    fn __repr__(&self) -> String {
        format!("Shuffle({:?}, degree={})", self.inner.label(), self.inner.degree())
    }
}

#[pyfunction]
fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(name, _)| name.trim_end_matches(".json")).collect()
}

#[pyfunction]
#[pyo3(signature = (sign = "+"))]
fn identity(sign: &str) -> PyResult<PyShuffle> {
    Ok(wrap(algebra::identity_element(orientation(sign)?).into_shuffle()))
}

#[pyfunction]
#[pyo3(signature = (perm, sign = "+"))]
fn permutation(perm: Vec<u64>, sign: &str) -> PyResult<PyShuffle> {
    let e = algebra::from_finite_permutation(&perm, orientation(sign)?).map_err(fail)?;
    Ok(wrap(e.into_shuffle()))
}

#[pyfunction]
#[pyo3(signature = (s, n, budget = DEFAULT_BUDGET))]
fn invert(s: &PyShuffle, n: u64, budget: u64) -> PyResult<PyShuffle> {
    let e = I1Element::new(s.inner.clone()).map_err(fail)?;
    Ok(wrap(algebra::invert_i1(&e, n, budget).map_err(fail)?.into_shuffle()))
}

/// Violated group laws on positions `0..=n`; empty when all hold.
#[pyfunction]
#[pyo3(signature = (elements, n, budget = DEFAULT_BUDGET))]
fn group_check(elements: Vec<PyRef<'_, PyShuffle>>, n: u64, budget: u64) -> PyResult<Vec<String>> {
    let elements =
        elements.iter().map(|s| I1Element::new(s.inner.clone())).collect::<Result<Vec<_>, _>>().map_err(fail)?;
    let r = algebra::group_check(&elements, n, budget);
    let mut out = Vec::new();
    for (law, found) in [
        ("elements", r.elements),
        ("closure", r.closure),
        ("associativity", r.associativity),
        ("identity", r.identity),
        ("inverse", r.inverse),
    ] {
        out.extend(found.into_iter().map(|w| format!("{law}: {w}")));
    }
    Ok(out)
}

/// Normal form of an order type such as "w + 3 + w*".
#[pyfunction]
fn normalize_order_type(text: &str) -> PyResult<String> {
    text.parse::<OrderType>().map(|o| o.to_string()).map_err(fail)
}

#[pymodule]
fn shuffles(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyShuffle>()?;
    m.add("ShuffleError", m.py().get_type::<ShuffleError>())?;
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    m.add_function(wrap_pyfunction!(identity, m)?)?;
    m.add_function(wrap_pyfunction!(permutation, m)?)?;
    m.add_function(wrap_pyfunction!(invert, m)?)?;
    m.add_function(wrap_pyfunction!(group_check, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_order_type, m)?)?;
    Ok(())
}
