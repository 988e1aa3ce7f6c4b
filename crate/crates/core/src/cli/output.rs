//! CSV and JSON emission.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::redfield::ObservableRow;

pub const SWEEP_HEADER: &str =
    "lambda,delta,T,tau1,tau2,tau1_lowT,tau2_lowT,tau1_highT,tau2_highT,p2,q2,E0,Eminus,Eplus";
pub const TRAJECTORY_HEADER: &str = "t,rho11,rho22,rho33,re_rho32,im_rho32,trace_err,min_eig";
pub const STEADY_HEADER: &str = "lambda,method,rho11,rho22,rho33,re_rho32,im_rho32,residual";

/// Shortest round-trip form in scientific notation; `inf`, `-inf`, `nan`
/// otherwise.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn join(values: &[f64]) -> String {
    values.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

pub fn trajectory_fields(r: &ObservableRow) -> String {
    join(&[r.t, r.rho11, r.rho22, r.rho33, r.re_rho32, r.im_rho32, r.trace_err, r.min_eig])
}

pub fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_error(dir))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_error(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

/// Line-oriented CSV file, flushed after every row so an aborted run leaves
/// the rows written so far.
pub struct CsvWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &str) -> Result<Self> {
        let file = File::create(path).map_err(io_error(path))?;
        let mut w = CsvWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        };
        w.row(header)?;
        Ok(w)
    }

    pub fn row(&mut self, line: &str) -> Result<()> {
        let path = self.path.clone();
        writeln!(self.out, "{line}")
            .and_then(|_| self.out.flush())
            .map_err(io_error(&path))
    }
}

/// Reproducibility record written next to every run's outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub params: ModelParams,
    pub options: serde_json::Value,
    pub output_dir: String,
    pub outputs: Vec<String>,
    pub version: &'static str,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join(MANIFEST_FILE), self)
    }
}
