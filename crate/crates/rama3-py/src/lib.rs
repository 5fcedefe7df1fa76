use pyo3::prelude::*;

#[pymodule]
fn rama3_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
