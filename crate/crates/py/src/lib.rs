//! Python bindings: load instances, encode them, and query the oracle.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use posqbf::game::{write_ghex, Player};
use posqbf::hex::{board_to_ghex, write_hex};
use posqbf::httt::{catalog, find_shape};
use posqbf::oracle::Oracle;
use posqbf::preprocess::{reduce_board, reduce_ghex};
use posqbf::runner::{self, EncodeOptions, Encoding, Format};
use posqbf::selfcheck::{evaluate_formula, run_builtin, CheckOptions};

fn to_py(e: posqbf::Error) -> PyErr {
    match e {
        posqbf::Error::Io(msg) => PyOSError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn oracle() -> Oracle {
    Oracle::with_limit(40)
}

/// A Hex position, a Generalized Hex graph, or a polyomino board.
#[pyclass(frozen, module = "posqbf_py")]
struct Instance {
    inner: runner::Instance,
}

#[pymethods]
impl Instance {
    /// `emptyN`, `httt:<shape>:<size>`, or a path to a `.hex` / `.ghex` file.
    #[staticmethod]
    fn load(spec: &str) -> PyResult<Self> {
        runner::Instance::load(spec).map(|inner| Instance { inner }).map_err(to_py)
    }

    /// Parses instance text; `kind` is "hex" or "ghex" (sniffed when omitted).
    #[staticmethod]
    #[pyo3(signature = (text, kind=None))]
    fn parse(text: &str, kind: Option<&str>) -> PyResult<Self> {
        runner::Instance::parse(text, kind).map(|inner| Instance { inner }).map_err(to_py)
    }

    /// Empty `size`×`size` board with a catalog polyomino as the goal.
    #[staticmethod]
    fn polyomino(shape: &str, size: usize) -> PyResult<Self> {
        let shapes = catalog();
        let shape = find_shape(&shapes, shape)
            .ok_or_else(|| PyValueError::new_err(format!("unknown shape `{shape}`")))?
            .clone();
        Ok(Instance {
            inner: runner::Instance::Httt { shape, size },
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner {
            runner::Instance::Hex(_) => "hex",
            runner::Instance::Ghex(_) => "ghex",
            runner::Instance::Httt { .. } => "httt",
        }
    }

    /// Number of board cells or graph nodes.
    #[getter]
    fn num_positions(&self) -> usize {
        match &self.inner {
            runner::Instance::Hex(b) => b.num_cells(),
            runner::Instance::Ghex(g) => g.num_nodes(),
            runner::Instance::Httt { size, .. } => size * size,
        }
    }

    /// The instance in its text format.
    fn text(&self) -> String {
        match &self.inner {
            runner::Instance::Hex(b) => write_hex(b),
            runner::Instance::Ghex(g) => write_ghex(g),
            runner::Instance::Httt { shape, size } => format!("httt:{}:{size}\n", shape.name()),
        }
    }

    fn __repr__(&self) -> String {
        format!("Instance(kind={:?}, positions={})", self.kind(), self.num_positions())
    }
}

/// An encoded formula.
#[pyclass(frozen, module = "posqbf_py")]
struct Encoded {
    inner: runner::Encoded,
}

#[pymethods]
impl Encoded {
    /// Serializes as "qdimacs" or "qcir".
    #[pyo3(signature = (format="qdimacs"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let format: Format = format.parse().map_err(to_py)?;
        Ok(self.inner.render(format))
    }

    /// Size statistics as a dict.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = self.inner.stats();
        let d = PyDict::new(py);
        d.set_item("alternation_depth", s.alternation_depth)?;
        d.set_item("vars_per_block", s.vars_per_block.clone())?;
        d.set_item("num_vars", s.num_vars)?;
        d.set_item("num_clauses", s.num_clauses)?;
        d.set_item("num_gates", s.num_gates)?;
        d.set_item("clause_count_by_width", s.clause_count_by_width.clone())?;
        d.set_item("gate_count_by_kind", s.gate_count_by_kind.clone())?;
        Ok(d)
    }

    /// Truth value by exhaustive search; refuses formulas over `var_limit`
    /// prefix variables.
    #[pyo3(signature = (var_limit=posqbf::selfcheck::CHECK_VAR_LIMIT))]
    fn evaluate(&self, py: Python<'_>, var_limit: usize) -> PyResult<bool> {
        let opts = CheckOptions {
            via_cnf: true,
            var_limit,
        };
        py.detach(|| evaluate_formula(&self.inner.formula, opts)).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.inner.stats().to_string()
    }
}

/// Names of the available encodings.
#[pyfunction]
fn encodings() -> Vec<&'static str> {
    Encoding::ALL.iter().map(|e| e.name()).collect()
}

/// Encodes "Black wins within `depth` plies" with the named encoding.
#[pyfunction]
#[pyo3(signature = (instance, encoding, depth, symmetry_reduce=false))]
fn encode(py: Python<'_>, instance: &Instance, encoding: &str, depth: usize, symmetry_reduce: bool) -> PyResult<Encoded> {
    let enc: Encoding = encoding.parse().map_err(to_py)?;
    let inner = py
        .detach(|| runner::encode_instance(&instance.inner, enc, depth, EncodeOptions { symmetry_reduce }))
        .map_err(to_py)?;
    Ok(Encoded { inner })
}

/// Whether Black (the first player) wins within `depth` plies.
#[pyfunction]
fn black_wins(py: Python<'_>, instance: &Instance, depth: usize) -> PyResult<bool> {
    py.detach(|| posqbf::selfcheck::oracle_verdict(&instance.inner, depth)).map_err(to_py)
}

/// Labels of Black's winning first moves within `depth` plies.
#[pyfunction]
fn winning_first_moves(py: Python<'_>, instance: &Instance, depth: usize) -> PyResult<Vec<String>> {
    py.detach(|| match &instance.inner {
        runner::Instance::Hex(board) => {
            let (g, claims) = board_to_ghex(board, Player::Black);
            let moves = oracle().winning_first_moves_claimed_ghex(&g, &claims, depth)?;
            Ok(moves.into_iter().map(|v| g.label(v).to_string()).collect())
        }
        runner::Instance::Ghex(g) => {
            let game = posqbf::game::game_from_ghex(g, g.num_nodes());
            let moves = oracle().winning_first_moves(&game, depth)?;
            Ok(moves.into_iter().map(|v| g.label(v).to_string()).collect())
        }
        runner::Instance::Httt { .. } => {
            let game = runner::instance_game(&instance.inner, depth)?;
            let moves = oracle().winning_first_moves(&game, depth)?;
            Ok(moves.into_iter().map(|v| game.label(v).to_string()).collect())
        }
    })
    .map_err(to_py)
}

/// The preprocessed Generalized Hex instance for `depth`.
#[pyfunction]
fn reduce(instance: &Instance, depth: usize) -> PyResult<Instance> {
    let g = match &instance.inner {
        runner::Instance::Hex(board) => reduce_board(board, depth).map(|r| r.instance),
        runner::Instance::Ghex(g) => reduce_ghex(g, depth).map(|(h, _)| h),
        runner::Instance::Httt { .. } => {
            return Err(PyValueError::new_err("polyomino boards have no graph reduction"))
        }
    }
    .map_err(to_py)?;
    Ok(Instance {
        inner: runner::Instance::Ghex(g),
    })
}

/// Runs the built-in cross-check suite; returns (checks, disagreements).
#[pyfunction]
fn selfcheck(py: Python<'_>) -> PyResult<(usize, Vec<String>)> {
    let checks = py.detach(|| run_builtin(CheckOptions::default())).map_err(to_py)?;
    let bad = checks.iter().filter(|c| !c.agrees()).map(|c| c.to_string()).collect();
    Ok((checks.len(), bad))
}

#[pymodule]
fn posqbf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<Encoded>()?;
    m.add_function(wrap_pyfunction!(encodings, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(black_wins, m)?)?;
    m.add_function(wrap_pyfunction!(winning_first_moves, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(selfcheck, m)?)?;
    Ok(())
}
