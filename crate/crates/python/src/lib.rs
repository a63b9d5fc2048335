//! Python bindings for `polyglue`. Reports cross the boundary as JSON text.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use polyglue::ffield::Field;
use polyglue::invariants::{
    dickson_generators, orbit_chern_generators, search_generators, sparsity_invariants_with, GeneratorSet,
};
use polyglue::matgroup::{group_closure, parse_generator_file, GroupClosure, DEFAULT_CAP};
use polyglue::poly::MultiPoly;
use polyglue::sparsity::{analyze, enumerate_sparsity_group, parse_pattern, SparsityPattern, StructureReport};
use polyglue::verify::{polynomiality_certificate, CertificateReport, CertifyOptions, Verdict};

create_exception!(pypolyglue, PolyglueError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    PolyglueError::new_err(e.to_string())
}

/// A finite field `GF(p^K)`.
#[pyclass(name = "Field", frozen)]
struct PyField(Field);

#[pymethods]
impl PyField {
    /// Parses `GF(p)` or `GF(p^K) mod <poly in z>`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Field::parse(spec).map(PyField).map_err(err)
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    #[getter]
    fn size(&self) -> u32 {
        self.0.size()
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.0)
    }
}

/// Invariant generators with degrees and provenance.
#[pyclass(name = "GeneratorSet", frozen)]
struct PyGeneratorSet(GeneratorSet);

#[pymethods]
impl PyGeneratorSet {
    #[getter]
    fn degrees(&self) -> Vec<u64> {
        self.0.degrees()
    }

    #[getter]
    fn polynomials(&self) -> Vec<String> {
        self.0.polynomials().iter().map(|p| p.to_string()).collect()
    }

    #[getter]
    fn provenance(&self) -> Vec<String> {
        self.0.generators().iter().map(|g| format!("{:?}", g.provenance)).collect()
    }

    #[getter]
    fn complete(&self) -> bool {
        self.0.is_complete()
    }

    fn degree_product(&self) -> Option<u128> {
        self.0.degree_product()
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("GeneratorSet(degrees={:?})", self.0.degrees())
    }
}

/// Output of `Group.certify`.
#[pyclass(name = "Certificate", frozen)]
struct PyCertificate(CertificateReport);

#[pymethods]
impl PyCertificate {
    /// `"Polynomial"`, `"Inconclusive"` or `"Refuted"`.
    #[getter]
    fn verdict(&self) -> &'static str {
        match self.0.verdict {
            Verdict::Polynomial => "Polynomial",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::Refuted => "Refuted",
        }
    }

    #[getter]
    fn degrees(&self) -> Vec<u64> {
        self.0.degrees.clone()
    }

    fn hilbert_agrees(&self) -> bool {
        self.0.hilbert_agrees()
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Certificate(verdict='{}')", self.verdict())
    }
}

/// An enumerated finite matrix group.
#[pyclass(name = "Group", frozen)]
struct PyGroup(GroupClosure);

#[pymethods]
impl PyGroup {
    /// Reads a matrix-group file: a `field` line, then one matrix per line
    /// with rows separated by `;` and entries by `,`.
    #[staticmethod]
    #[pyo3(signature = (text, cap = DEFAULT_CAP))]
    fn from_generators(text: &str, cap: usize) -> PyResult<Self> {
        let (field, gens) = parse_generator_file(text).map_err(|(line, e)| err(format!("line {line}: {e}")))?;
        let n = gens.first().map(|g| g.dim()).ok_or_else(|| err("no matrices"))?;
        group_closure(&field, n, &gens, cap).map(PyGroup).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    /// Orbit Chern classes when their hypotheses hold, otherwise a
    /// degree-by-degree search up to `max_degree` (default `|G| + 1`).
    #[pyo3(signature = (max_degree = None))]
    fn invariants(&self, max_degree: Option<u64>) -> PyResult<PyGeneratorSet> {
        let order: Vec<usize> = (0..self.0.dim()).collect();
        match orbit_chern_generators(&self.0, &order) {
            Ok(g) => Ok(PyGeneratorSet(g)),
            Err(_) => search_generators(&self.0, max_degree.unwrap_or(self.0.order() as u64 + 1))
                .map(PyGeneratorSet)
                .map_err(err),
        }
    }

    /// Certifies polynomials given as text in `x1, ..., xn`.
    #[pyo3(signature = (polys, depth = None, max_power = None))]
    fn certify(&self, polys: Vec<String>, depth: Option<u64>, max_power: Option<u64>) -> PyResult<PyCertificate> {
        let field = self.0.field();
        let n = self.0.dim();
        let parsed = polys
            .iter()
            .map(|p| MultiPoly::parse(field, n, p).map(|f| (f, polyglue::invariants::Provenance::Searched)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let set = GeneratorSet::new(field, n, parsed);
        let opts = CertifyOptions {
            depth,
            max_power,
            ..CertifyOptions::default()
        };
        polynomiality_certificate(&self.0, &set, opts).map(PyCertificate).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Group(dim={}, order={}, field='{}')", self.0.dim(), self.0.order(), self.0.field())
    }
}

/// Structure report of a sparsity group.
#[pyclass(name = "StructureReport", frozen)]
struct PyReport(StructureReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn order(&self) -> usize {
        self.0.order
    }

    #[getter]
    fn t(&self) -> usize {
        self.0.t()
    }

    #[getter]
    fn sizes(&self) -> Vec<usize> {
        self.0.sizes()
    }

    /// The first failing assertion or check, or `None`.
    fn first_failure(&self) -> Option<String> {
        self.0.first_failure()
    }

    /// Generators pulled back to the original basis of the pattern.
    #[pyo3(signature = (max_degree = None))]
    fn invariants(&self, max_degree: Option<u64>) -> PyResult<PyGeneratorSet> {
        let inv = sparsity_invariants_with(&self.0, max_degree).map_err(err)?;
        inv.pullback().map(PyGeneratorSet).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("StructureReport(order={}, sizes={:?})", self.0.order, self.0.sizes())
    }
}

/// A sparsity pattern parsed from the pattern file format.
#[pyclass(name = "Pattern", frozen)]
struct PyPattern(SparsityPattern);

#[pymethods]
impl PyPattern {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_pattern(text).map(PyPattern).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[pyo3(signature = (cap = DEFAULT_CAP))]
    fn group(&self, cap: usize) -> PyResult<PyGroup> {
        enumerate_sparsity_group(&self.0, cap).map(PyGroup).map_err(err)
    }

    #[pyo3(signature = (cap = DEFAULT_CAP))]
    fn analyze(&self, cap: usize) -> PyResult<PyReport> {
        analyze(&self.0, cap).map(PyReport).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Dickson invariants of `GL(n, F_q)` in `x1, ..., xn`.
#[pyfunction]
fn dickson(field: &PyField, n: usize, q: u64) -> PyResult<PyGeneratorSet> {
    let vars: Vec<usize> = (0..n).collect();
    dickson_generators(&field.0, n, q, &vars).map(PyGeneratorSet).map_err(err)
}

#[pymodule]
pub fn pypolyglue(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PolyglueError", m.py().get_type::<PolyglueError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyPattern>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyGeneratorSet>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(dickson, m)?)?;
    Ok(())
}
