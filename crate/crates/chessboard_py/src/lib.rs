use pyo3::prelude::*;

#[pymodule]
mod cubic_chessboard {
    use chessboard::cubic::{self, Law};
    use chessboard::dirac::{self, Grid};
    use chessboard::enveloping::{self, SearchConfig};
    use chessboard::graded;
    use chessboard::verify::{self, Suite};
    use chessboard::{ChessError, ExactScalar};
    use num_complex::Complex64;
    use pyo3::exceptions::{PyRuntimeError, PyValueError};
    use pyo3::prelude::*;

    #[pymodule_export]
    const DEFAULT_SEED: u64 = verify::DEFAULT_SEED;

    fn err(e: ChessError) -> PyErr {
        match e {
            ChessError::Parse(_) | ChessError::DimensionMismatch(_) | ChessError::IndexOutOfRange(_) | ChessError::Unsupported(_) => {
                PyValueError::new_err(e.to_string())
            }
            other => PyRuntimeError::new_err(other.to_string()),
        }
    }

    fn parse_law(law: &str) -> PyResult<Law> {
        match law {
            "star" => Ok(Law::Star),
            "oslash" => Ok(Law::Oslash),
            "j_bracket" | "j-bracket" => Ok(Law::JBracket),
            other => Err(PyValueError::new_err(format!("unknown law {other:?}"))),
        }
    }

    fn parse_suite(name: &str) -> PyResult<Suite> {
        std::iter::once(Suite::All)
            .chain(Suite::MODULES)
            .find(|s| s.name() == name)
            .ok_or_else(|| PyValueError::new_err(format!("unknown suite {name:?}")))
    }

    /// The primitive cube root of unity as (re, im).
    #[pyfunction]
    fn j() -> (f64, f64) {
        let z = ExactScalar::j().to_complex();
        (z.re, z.im)
    }

    /// Multiplication table of basis units as CSV or JSON text.
    #[pyfunction]
    #[pyo3(signature = (n, law = "star", format = "json"))]
    fn mult_table(n: usize, law: &str, format: &str) -> PyResult<String> {
        let table = cubic::mult_table(n, parse_law(law)?).map_err(err)?;
        match format {
            "json" => Ok(table.to_json()),
            "csv" => table.to_csv().map_err(err),
            other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
        }
    }

    /// JSON verification report; `passed` is at the top level.
    #[pyfunction]
    #[pyo3(signature = (suite = "all", seed = verify::DEFAULT_SEED))]
    fn verify_json(py: Python<'_>, suite: &str, seed: u64) -> PyResult<String> {
        let suite = parse_suite(suite)?;
        let report = py.detach(|| verify::run(suite, seed));
        serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// The nine symmetric flat connections as display strings.
    #[pyfunction]
    fn flat_solutions() -> Vec<(String, String, String)> {
        graded::enumerate_symmetric_flat().into_iter().map(|[a, b, c]| (a.to_string(), b.to_string(), c.to_string())).collect()
    }

    /// Null-space dimension of the double-bracket identity system.
    #[pyfunction]
    #[pyo3(signature = (n = 2, seed = verify::DEFAULT_SEED, binary = false))]
    fn bracket_search_nullity(py: Python<'_>, n: usize, seed: u64, binary: bool) -> PyResult<usize> {
        let cfg = if binary { SearchConfig::binary(n, seed) } else { SearchConfig::ternary(n, seed) };
        py.detach(|| enveloping::double_bracket_identity_search(&cfg)).map(|c| c.nullity).map_err(err)
    }

    /// The three roots ω of the cubic dispersion relation, as complex numbers.
    #[pyfunction]
    fn solve_omega(k: [f64; 3], m: f64) -> Vec<Complex64> {
        dirac::solve_omega(k, m).to_vec()
    }

    type DispersionTuple = (f64, f64, f64, f64, f64);

    /// Rows (k_x, k_y, k_z, m, ω) over the inclusive grid `lo:hi:step` per axis.
    #[pyfunction]
    fn dispersion(m: f64, grid: &str) -> PyResult<Vec<DispersionTuple>> {
        let g = Grid::parse(grid).map_err(err)?;
        Ok(dirac::dispersion_samples(m, &g).into_iter().map(|r| (r.k_x, r.k_y, r.k_z, r.m, r.omega_real)).collect())
    }
}
