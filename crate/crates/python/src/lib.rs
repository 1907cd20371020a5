//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! formulas, constraint systems and programs are passed as source text.

use problogic::bridge::{embed, kripke_model};
use problogic::constraint::{parse_constraints, parse_weight_term, BoundOutcome, Reasoner, Sense, WeightConstraint};
use problogic::document::{parse_interpretation, parse_structure, render_structure};
use problogic::intensional::{self as int, Assignment, DomainElement, KripkeModel as CoreModel, Particular};
use problogic::plp::{find_model, parse_program, translate_rule, GroundProgram};
use problogic::rational::{format_exact, parse_rational};
use problogic::{parse_formula, Alphabet, Formula as CoreFormula, NilssonStructure, Rational};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString, PyTuple};

create_exception!(problogic_py, ProblogicError, PyValueError);

fn fail(e: problogic::Error) -> PyErr {
    ProblogicError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_exact(q),))
}

/// Accepts `int`, `Fraction`, or a string such as `"3/4"` or `"0.75"`.
fn rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = if v.is_instance_of::<PyString>() {
        v.extract::<String>()?
    } else {
        v.str()?.to_string()
    };
    parse_rational(&text).map_err(fail)
}

fn formula(text: &str) -> PyResult<CoreFormula> {
    parse_formula(text).map_err(fail)
}

#[pyclass(name = "Formula", module = "problogic_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFormula {
    inner: CoreFormula,
}

#[pymethods]
impl PyFormula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyFormula { inner: formula(text)? })
    }

    fn props(&self) -> Vec<String> {
        self.inner.props().into_iter().map(str::to_string).collect()
    }

    /// The same formula over `true`, `~` and `&` only.
    fn desugar(&self) -> PyFormula {
        PyFormula {
            inner: self.inner.desugar(),
        }
    }

    fn equivalent(&self, other: &PyFormula) -> PyResult<bool> {
        let a = Alphabet::covering([&self.inner, &other.inner]).map_err(fail)?;
        problogic::equivalent(&self.inner, &other.inner, &a).map_err(fail)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &PyFormula) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "Structure", module = "problogic_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStructure {
    inner: NilssonStructure,
}

#[pymethods]
impl PyStructure {
    /// `masses` maps world keys such as `"01"` to probabilities.
    #[new]
    fn new(props: Vec<String>, masses: &Bound<'_, PyDict>) -> PyResult<Self> {
        let alphabet = Alphabet::new(props).map_err(fail)?;
        let mut pairs = Vec::new();
        for (k, v) in masses.iter() {
            let w = problogic::World::from_key(&k.extract::<String>()?, alphabet.len()).map_err(fail)?;
            pairs.push((w, rational(&v)?));
        }
        Ok(PyStructure {
            inner: NilssonStructure::new(alphabet, pairs).map_err(fail)?,
        })
    }

    #[staticmethod]
    fn uniform(props: Vec<String>) -> PyResult<Self> {
        let alphabet = Alphabet::new(props).map_err(fail)?;
        Ok(PyStructure {
            inner: NilssonStructure::uniform(alphabet).map_err(fail)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyStructure {
            inner: parse_structure(text).map_err(fail)?,
        })
    }

    fn to_json(&self) -> String {
        render_structure(&self.inner)
    }

    #[getter]
    fn props(&self) -> Vec<String> {
        self.inner.alphabet().props().to_vec()
    }

    fn masses<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        let width = self.inner.alphabet().len();
        for w in self.inner.alphabet().worlds() {
            d.set_item(w.key(width), fraction(py, self.inner.mass(w))?)?;
        }
        Ok(d)
    }

    fn weight<'py>(&self, py: Python<'py>, f: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.weight(&formula(f)?).map_err(fail)?)
    }

    /// `(worlds, probability, designated)` of the many-valued value.
    fn mv_eval<'py>(&self, py: Python<'py>, f: &str) -> PyResult<Bound<'py, PyTuple>> {
        let v = self.inner.mv_eval(&formula(f)?).map_err(fail)?;
        let width = self.inner.alphabet().len();
        let worlds: Vec<String> = v.indicator.iter().map(|w| w.key(width)).collect();
        let designated = self.inner.is_designated(&v);
        (worlds, fraction(py, &v.prob)?, designated).into_pyobject(py)
    }

    fn __repr__(&self) -> String {
        format!("Structure.from_json({:?})", render_structure(&self.inner))
    }
}

fn constraints_and_alphabet(
    constraints: &str,
    extra: &[&CoreFormula],
    alphabet: Option<Vec<String>>,
) -> PyResult<(Vec<WeightConstraint>, Alphabet)> {
    let cs = parse_constraints(constraints).map_err(fail)?;
    let a = match alphabet {
        Some(props) => Alphabet::new(props),
        None => Alphabet::covering(cs.iter().flat_map(|c| c.formulas()).chain(extra.iter().copied())),
    }
    .map_err(fail)?;
    Ok((cs, a))
}

/// A witness structure, or `None` when the constraints are unsatisfiable.
#[pyfunction]
#[pyo3(signature = (constraints, alphabet=None))]
fn psat(constraints: &str, alphabet: Option<Vec<String>>) -> PyResult<Option<PyStructure>> {
    let (cs, a) = constraints_and_alphabet(constraints, &[], alphabet)?;
    let r = Reasoner::default().satisfiable(&a, &cs).map_err(fail)?;
    Ok(r.witness.map(|inner| PyStructure { inner }))
}

/// Exact optimum of `objective`, or `None` when the constraints are
/// unsatisfiable.
#[pyfunction]
#[pyo3(signature = (constraints, objective, sense="min", alphabet=None))]
fn bound<'py>(
    py: Python<'py>,
    constraints: &str,
    objective: &str,
    sense: &str,
    alphabet: Option<Vec<String>>,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    let obj = parse_weight_term(objective).map_err(fail)?;
    let fs: Vec<&CoreFormula> = obj.formulas().collect();
    let (cs, a) = constraints_and_alphabet(constraints, &fs, alphabet)?;
    let sense = match sense {
        "min" => Sense::Min,
        "max" => Sense::Max,
        other => {
            return Err(ProblogicError::new_err(format!(
                "sense must be `min` or `max`, not `{other}`"
            )))
        }
    };
    match Reasoner::default().bound(&a, &cs, &obj, sense).map_err(fail)? {
        BoundOutcome::Optimal { value, .. } => Ok(Some(fraction(py, &value)?)),
        BoundOutcome::Unsat | BoundOutcome::Unbounded => Ok(None),
    }
}

#[pyclass(name = "Program", module = "problogic_py", frozen)]
struct PyProgram {
    inner: GroundProgram,
}

#[pymethods]
impl PyProgram {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyProgram {
            inner: parse_program(text).map_err(fail)?,
        })
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet.props().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.rules.len()
    }

    /// The intensional form of each rule.
    fn translate(&self) -> Vec<String> {
        self.inner.rules.iter().map(|r| translate_rule(r).to_string()).collect()
    }

    fn find_model(&self) -> PyResult<Option<PyStructure>> {
        Ok(find_model(&self.inner, &Reasoner::default())
            .map_err(fail)?
            .map(|inner| PyStructure { inner }))
    }

    fn holds(&self, n: &PyStructure) -> PyResult<bool> {
        self.inner.holds(&n.inner).map_err(fail)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

fn element(v: &Bound<'_, PyAny>) -> PyResult<DomainElement> {
    if v.is_instance_of::<PyString>() {
        Ok(DomainElement::symbol(v.extract::<String>()?))
    } else {
        Ok(DomainElement::number(rational(v)?))
    }
}

fn py_element<'py>(py: Python<'py>, e: &DomainElement) -> PyResult<Bound<'py, PyAny>> {
    match e {
        DomainElement::Particular(Particular::Number(q)) => fraction(py, q),
        DomainElement::Particular(Particular::Symbol(s)) => Ok(PyString::new(py, s).into_any()),
        other => Ok(PyString::new(py, &other.to_string()).into_any()),
    }
}

#[pyclass(name = "Relation", module = "problogic_py", frozen)]
struct PyRelation {
    inner: int::Relation,
}

#[pymethods]
impl PyRelation {
    /// Elements are numbers (`int`, `Fraction`) or symbols (`str`).
    #[new]
    fn new(arity: usize, tuples: &Bound<'_, PyList>) -> PyResult<Self> {
        let mut rows = Vec::new();
        for t in tuples.iter() {
            rows.push(t.try_iter()?.map(|e| element(&e?)).collect::<PyResult<Vec<_>>>()?);
        }
        Ok(PyRelation {
            inner: int::Relation::new(arity, rows).map_err(fail)?,
        })
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn tuples<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyTuple>>> {
        self.inner
            .tuples()
            .iter()
            .map(|t| PyTuple::new(py, t.iter().map(|e| py_element(py, e)).collect::<PyResult<Vec<_>>>()?))
            .collect()
    }

    /// Natural join on 1-based column pairs `(i, j)`.
    fn join(&self, other: &PyRelation, pairs: Vec<(usize, usize)>) -> PyResult<PyRelation> {
        Ok(PyRelation {
            inner: int::natural_join(&self.inner, &other.inner, &pairs).map_err(fail)?,
        })
    }

    fn complement(&self, domain: &Bound<'_, PyList>) -> PyResult<PyRelation> {
        let d = domain.iter().map(|e| element(&e)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyRelation {
            inner: int::complement(&self.inner, &d).map_err(fail)?,
        })
    }

    /// Drops column `m` (1-based).
    fn project_out(&self, m: usize) -> PyRelation {
        PyRelation {
            inner: int::project_out(&self.inner, m),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyclass(name = "KripkeModel", module = "problogic_py", frozen)]
struct PyKripkeModel {
    inner: CoreModel,
}

#[pymethods]
impl PyKripkeModel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyKripkeModel {
            inner: parse_interpretation(text).map_err(fail)?,
        })
    }

    /// The model whose worlds are the truth assignments of `n`.
    #[staticmethod]
    fn of_structure(n: &PyStructure) -> PyResult<Self> {
        Ok(PyKripkeModel {
            inner: kripke_model(&n.inner).map_err(fail)?,
        })
    }

    #[getter]
    fn worlds(&self) -> usize {
        self.inner.worlds().len()
    }

    /// Truth of a propositional sentence at world `w`.
    fn satisfies(&self, w: usize, f: &str) -> PyResult<bool> {
        self.inner
            .satisfies(w, &Assignment::new(), &embed(&formula(f)?))
            .map_err(fail)
    }

    /// Extension at world `w` of the predicate `pred` applied to fresh
    /// variables.
    fn extension(&self, w: usize, pred: &str) -> PyResult<PyRelation> {
        let arity = self.inner.interpretation().arity_of(pred).map_err(fail)?;
        let args = (0..arity).map(|k| int::Term::var(format!("x{k}"))).collect();
        Ok(PyRelation {
            inner: self
                .inner
                .extension(w, &int::IFormula::atom(pred, args))
                .map_err(fail)?,
        })
    }
}

#[pymodule]
fn problogic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ProblogicError", m.py().get_type::<ProblogicError>())?;
    m.add_class::<PyFormula>()?;
    m.add_class::<PyStructure>()?;
    m.add_class::<PyProgram>()?;
    m.add_class::<PyRelation>()?;
    m.add_class::<PyKripkeModel>()?;
    m.add_function(wrap_pyfunction!(psat, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    Ok(())
}
