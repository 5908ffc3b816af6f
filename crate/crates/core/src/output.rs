//! CSV writers. Floats are written with 17 significant digits.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::eigen::{SpectrumReport, WavefunctionOnGrid};
use crate::error::{PdmError, Result};
use crate::problem::PotentialComponents;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// A CSV writer over a file or any other sink, with errors tagged by path.
pub struct CsvSink<W: Write> {
    inner: csv::Writer<W>,
    path: std::path::PathBuf,
}

impl CsvSink<File> {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|source| PdmError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_writer(file, path))
    }
}

impl<W: Write> CsvSink<W> {
    pub fn from_writer(w: W, path: &Path) -> Self {
        Self {
            inner: csv::Writer::from_writer(w),
            path: path.to_path_buf(),
        }
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner
            .write_record(fields)
            .map_err(|source| PdmError::Csv {
                path: self.path.clone(),
                source,
            })
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(|source| PdmError::Io {
            path: self.path.clone(),
            source,
        })
    }
}

/// `x, m, xbar, V1`
pub fn write_tabulation<W: Write>(
    sink: &mut CsvSink<W>,
    rows: &[(f64, f64, f64, f64)],
) -> Result<()> {
    sink.row(["x", "m", "xbar", "V1"])?;
    for &(x, m, xbar, v1) in rows {
        sink.row([fmt_f64(x), fmt_f64(m), fmt_f64(xbar), fmt_f64(v1)])?;
    }
    Ok(())
}

/// `x, V, V1, xbar, V2_of_xbar`
pub fn write_potential<W: Write>(
    sink: &mut CsvSink<W>,
    rows: &[PotentialComponents],
) -> Result<()> {
    sink.row(["x", "V", "V1", "xbar", "V2_of_xbar"])?;
    for c in rows {
        sink.row([
            fmt_f64(c.x),
            fmt_f64(c.v),
            fmt_f64(c.v1),
            fmt_f64(c.xbar),
            fmt_f64(c.v2),
        ])?;
    }
    Ok(())
}

/// `n, E_numeric, E_extrapolated, E_exact, abs_error`
pub fn write_spectrum<W: Write>(sink: &mut CsvSink<W>, report: &SpectrumReport) -> Result<()> {
    sink.row(["n", "E_numeric", "E_extrapolated", "E_exact", "abs_error"])?;
    for l in &report.levels {
        sink.row([
            l.n.to_string(),
            fmt_f64(l.numeric),
            fmt_f64(l.extrapolated),
            fmt_opt(l.exact),
            fmt_opt(l.abs_error),
        ])?;
    }
    Ok(())
}

/// `x, psi`
pub fn write_wavefunction<W: Write>(sink: &mut CsvSink<W>, wf: &WavefunctionOnGrid) -> Result<()> {
    sink.row(["x", "psi"])?;
    for (x, psi) in wf.grid.nodes().into_iter().zip(&wf.values) {
        sink.row([fmt_f64(x), fmt_f64(*psi)])?;
    }
    Ok(())
}
