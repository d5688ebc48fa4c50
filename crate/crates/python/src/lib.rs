//! Python bindings: rules, simulation, language computations, the
//! constructions, the firing squad and the history recognizer.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use clandestine_ca::constructions;
use clandestine_ca::firing_squad::{self as fs, fs_alphabet};
use clandestine_ca::subshift::{self, Budget};
use clandestine_ca::{verify, xs, Error, PresentedConfig, Sym};

create_exception!(clandestine_ca_py, BudgetExceeded, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn budget() -> PyResult<Budget> {
    Budget::from_env().map_err(py_err)
}

/// A cellular automaton given by its local rule.
#[pyclass(name = "Rule", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRule {
    inner: clandestine_ca::Rule,
}

impl PyRule {
    fn word(&self, text: &str) -> PyResult<Vec<Sym>> {
        self.inner.alphabet().parse_word(text).map_err(py_err)
    }

    fn show(&self, w: &[Sym]) -> String {
        self.inner.alphabet().format_word(w)
    }
}

#[pymethods]
impl PyRule {
    /// `shift`, `identity`, `min`, `elementary:<n>` or `fs`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<PyRule> {
        Ok(PyRule {
            inner: clandestine_ca::Rule::builtin(name).map_err(py_err)?,
        })
    }

    /// Parses the text rule format.
    #[staticmethod]
    fn parse(name: &str, text: &str) -> PyResult<PyRule> {
        Ok(PyRule {
            inner: clandestine_ca::Rule::parse_rule_file(name, text).map_err(py_err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn radius(&self) -> usize {
        self.inner.radius()
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().names().to_vec()
    }

    fn to_rule_file(&self) -> String {
        self.inner.to_rule_file()
    }

    /// Image of a finite word; it shrinks by the radius on each side.
    fn block_map(&self, word: &str) -> PyResult<String> {
        let w = self.word(word)?;
        Ok(self.show(&self.inner.block_map(&w).map_err(py_err)?))
    }

    /// Rows of the orbit of the periodic configuration with this period.
    fn simulate_periodic(&self, period: &str, steps: usize) -> PyResult<Vec<String>> {
        let mut p = self.word(period)?;
        if p.is_empty() {
            return Err(py_err(Error::EmptyPeriod));
        }
        let mut rows = vec![self.show(&p)];
        for _ in 0..steps {
            p = clandestine_ca::config::apply_periodic_raw(&self.inner, &p);
            rows.push(self.show(&p));
        }
        Ok(rows)
    }

    fn spreading_states(&self) -> Vec<String> {
        let a = self.inner.alphabet();
        self.inner.spreading_states().into_iter().map(|s| a.name(s).to_string()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Rule({}, radius={}, symbols={})", self.inner.name(), self.inner.radius(), self.inner.alphabet().len())
    }
}

/// Words of length `n` in the image of the full shift after `t` steps.
#[pyfunction]
fn image_language(rule: &PyRule, n: usize, t: usize) -> PyResult<Vec<String>> {
    let s = subshift::image_language(&rule.inner, n, t, &budget()?).map_err(py_err)?;
    Ok(s.words.iter().map(|w| rule.show(w)).collect())
}

/// Realizable columns of width `k` and depth `depth`, rows joined by `/`.
#[pyfunction]
fn trace_prefixes(rule: &PyRule, k: usize, depth: usize) -> PyResult<Vec<String>> {
    let cols = subshift::trace_prefixes(&rule.inner, k, depth, &budget()?).map_err(py_err)?;
    Ok(cols.iter().map(|c| c.render(rule.inner.alphabet())).collect())
}

/// Whether the depth-`depth` paths of the 2-approximation are exactly the
/// columns.
#[pyfunction]
fn check_sft_order2(rule: &PyRule, k: usize, depth: usize) -> PyResult<bool> {
    Ok(subshift::check_sft_order2(&rule.inner, k, depth, &budget()?).map_err(py_err)?.holds)
}

#[pyfunction]
fn build_tilde(base: &PyRule) -> PyResult<PyRule> {
    Ok(PyRule {
        inner: constructions::build_tilde(&base.inner).map_err(py_err)?,
    })
}

/// The rule with a spreading symbol `⊥` added.
#[pyfunction]
fn add_spreading(base: &PyRule) -> PyResult<PyRule> {
    Ok(PyRule {
        inner: constructions::add_spreading(&base.inner).map_err(py_err)?.0,
    })
}

/// Squad-frozen extension of `base` (which needs a spreading state) by the
/// firing squad.
#[pyfunction]
fn build_delta(base: &PyRule) -> PyResult<PyRule> {
    let zero = *base
        .inner
        .spreading_states()
        .first()
        .ok_or_else(|| PyValueError::new_err("base rule has no spreading state"))?;
    let (d, _) = constructions::build_delta(&base.inner, zero, fs::fs_rule(), fs::KILLER, fs::FIRING).map_err(py_err)?;
    Ok(PyRule { inner: d })
}

fn fs_word(text: &str) -> PyResult<Vec<Sym>> {
    fs_alphabet().parse_word(text).map_err(py_err)
}

/// Whether a firing squad word has a backward history of depth `depth`
/// avoiding `κ` and `γ`.
#[pyfunction]
fn backward_reach(word: &str, depth: usize) -> PyResult<bool> {
    fs::backward_reach_with(&fs_word(word)?, depth, budget()?.max_states).map_err(py_err)
}

/// `(first_firing, first_killer, synchronous)` for `ω(# B^n)ω`.
#[pyfunction]
fn firing_outcome(n: usize, steps: usize) -> PyResult<(Option<usize>, Option<usize>, bool)> {
    let o = fs::firing_outcome(n, steps).map_err(py_err)?;
    Ok((o.first_firing, o.first_killer, o.synchronous))
}

/// Schema of `ω(# B^n)ω` after `t` steps, e.g. `#' R1+r2a B^1 L1+l2a`.
#[pyfunction]
fn orbit_period_schema(n: usize, t: usize) -> PyResult<String> {
    Ok(xs::orbit_period_schemas(n, t).map_err(py_err)?.to_string())
}

/// Case label of an accepted word, `None` when rejected.
#[pyfunction]
fn recognize_word(word: &str) -> PyResult<Option<&'static str>> {
    let label = xs::recognize_word_with(&fs_word(word)?, &budget()?).map_err(py_err)?;
    Ok(label.map(|l| l.name()))
}

/// Case label of the configuration `ω(left) center (right)ω`.
#[pyfunction]
fn classify_config(left: &str, center: &str, right: &str) -> PyResult<Option<&'static str>> {
    let a = fs_alphabet();
    let c = PresentedConfig::new(a, fs_word(left)?, fs_word(center)?, fs_word(right)?, 0).map_err(py_err)?;
    Ok(xs::classify_config_with(&c, &budget()?).map_err(py_err)?.map(|l| l.name()))
}

/// Runs a verification suite with its default parameters and returns
/// `(passed, report)`.
#[pyfunction]
fn run_suite(name: &str) -> PyResult<(bool, String)> {
    let r = verify::run_default(name, &budget()?).map_err(py_err)?;
    Ok((r.passed(), r.to_text()))
}

#[pymodule]
fn clandestine_ca_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRule>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(image_language, m)?)?;
    m.add_function(wrap_pyfunction!(trace_prefixes, m)?)?;
    m.add_function(wrap_pyfunction!(check_sft_order2, m)?)?;
    m.add_function(wrap_pyfunction!(build_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(add_spreading, m)?)?;
    m.add_function(wrap_pyfunction!(build_delta, m)?)?;
    m.add_function(wrap_pyfunction!(backward_reach, m)?)?;
    m.add_function(wrap_pyfunction!(firing_outcome, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_period_schema, m)?)?;
    m.add_function(wrap_pyfunction!(recognize_word, m)?)?;
    m.add_function(wrap_pyfunction!(classify_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyDict;

    #[test]
    fn module_runs_from_python() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "clandestine_ca_py").unwrap();
            clandestine_ca_py(&m).unwrap();
            let globals = PyDict::new(py);
            globals.set_item("ca", m).unwrap();
            let code = c"
m = ca.Rule.builtin('min')
assert m.radius == 1 and m.alphabet == ['0', '1']
assert len(ca.image_language(m, 3, 1)) == 7
assert len(ca.trace_prefixes(m, 1, 2)) == 3
assert ca.firing_outcome(3, 20) == (7, None, True)
assert ca.classify_config('B', '', 'B') == 'NO_SHARPS'
try:
    ca.Rule.builtin('nope')
    raise AssertionError('no error')
except ValueError:
    pass
";
            py.run(code, Some(&globals), None).unwrap();
        });
    }
}
