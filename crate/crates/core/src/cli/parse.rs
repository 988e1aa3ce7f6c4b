//! Parsers for command-line values. These are the fuzzed entry points.

use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::redfield::{check_density, ground_state, uniform_state};

/// Largest number of points accepted in `--range`.
pub const MAX_RANGE_POINTS: usize = 100_000;

/// `a:b:n`, inclusive of both ends, `n` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        crate::linalg::lin_space(self.start, self.end, self.count)
    }
}

pub fn parse_range(text: &str) -> Result<RangeSpec> {
    let bad = |detail: String| Error::Parse {
        what: "range",
        detail,
    };
    let parts: Vec<&str> = text.trim().split(':').collect();
    if parts.len() != 3 {
        return Err(bad(format!("`{text}` is not of the form a:b:n")));
    }
    let num = |s: &str| -> Result<f64> {
        let x = f64::from_str(s.trim()).map_err(|e| bad(format!("`{s}`: {e}")))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(bad(format!("`{s}` is not finite")))
        }
    };
    let start = num(parts[0])?;
    let end = num(parts[1])?;
    let count = usize::from_str(parts[2].trim()).map_err(|e| bad(format!("`{}`: {e}", parts[2])))?;
    if count == 0 || count > MAX_RANGE_POINTS {
        return Err(bad(format!("point count {count} must be in 1..={MAX_RANGE_POINTS}")));
    }
    if count == 1 && start != end {
        return Err(bad("a single-point range needs a == b".into()));
    }
    Ok(RangeSpec { start, end, count })
}

/// Initial condition given by `--init`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    Uniform,
    Ground,
    File(String),
}

impl InitSpec {
    pub fn label(&self) -> String {
        match self {
            InitSpec::Uniform => "uniform".into(),
            InitSpec::Ground => "ground".into(),
            InitSpec::File(p) => format!("file:{p}"),
        }
    }

    /// The site-basis density matrix, reading the file if needed.
    pub fn density(&self) -> Result<Array2<C64>> {
        match self {
            InitSpec::Uniform => Ok(uniform_state()),
            InitSpec::Ground => Ok(ground_state()),
            InitSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_density(&text)
            }
        }
    }
}

pub fn parse_init(text: &str) -> Result<InitSpec> {
    match text {
        "uniform" => Ok(InitSpec::Uniform),
        "ground" => Ok(InitSpec::Ground),
        _ => match text.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(InitSpec::File(path.to_string())),
            _ => Err(Error::Parse {
                what: "initial state",
                detail: format!("`{text}` is not uniform, ground or file:<path>"),
            }),
        },
    }
}

/// Reads a 3x3 site-basis density matrix.
///
/// One row per line, entries separated by commas or whitespace. An entry is a
/// real number or a complex number such as `0.1+0.2i`. Blank lines and text
/// after `#` are ignored. The result must be Hermitian, have unit trace and be
/// positive semidefinite. A trace within 1e-3 of one is renormalized, so
/// rounded decimals such as `0.3333` are accepted.
pub fn parse_density(text: &str) -> Result<Array2<C64>> {
    let bad = |detail: String| Error::Parse {
        what: "density matrix",
        detail,
    };
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if rows.len() == 3 {
            return Err(bad(format!("line {}: more than 3 rows", lineno + 1)));
        }
        let mut row = Vec::new();
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let z = C64::from_str(tok).map_err(|_| bad(format!("line {}: `{tok}` is not a number", lineno + 1)))?;
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(bad(format!("line {}: `{tok}` is not finite", lineno + 1)));
            }
            row.push(z);
        }
        if row.len() != 3 {
            return Err(bad(format!("line {}: expected 3 entries, found {}", lineno + 1, row.len())));
        }
        rows.push(row);
    }
    if rows.len() != 3 {
        return Err(bad(format!("expected 3 rows, found {}", rows.len())));
    }
    let mut rho = Array2::from_shape_fn((3, 3), |(i, j)| rows[i][j]);
    let tr = crate::linalg::trace(&rho.view());
    if (tr - C64::new(1.0, 0.0)).norm() < 1e-3 {
        rho.mapv_inplace(|z| z / tr.re);
    }
    check_density(&rho, 3)?;
    Ok(rho)
}

/// Parameter source for `--params`: a preset name or a JSON file path.
pub fn load_params(source: &str) -> Result<ModelParams> {
    if let Some(p) = super::figures::preset(source) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Error::Io {
        path: source.to_string(),
        source: e,
    })?;
    ModelParams::from_json_str(&text, ModelParams::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = parse_range("0.5:10:20").unwrap();
        assert_eq!((r.start, r.end, r.count), (0.5, 10.0, 20));
        let v = r.values();
        assert_eq!(v.len(), 20);
        assert_eq!(v[0], 0.5);
        assert_eq!(v[19], 10.0);
        assert_eq!(parse_range("2:2:1").unwrap().values(), vec![2.0]);
        for bad in ["", "1:2", "1:2:3:4", "a:2:3", "1:2:0", "1:2:-1", "1:inf:3", "1:2:1", "nan:1:2", "1:2:1000001"] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn init_specs() {
        assert_eq!(parse_init("uniform").unwrap(), InitSpec::Uniform);
        assert_eq!(parse_init("ground").unwrap(), InitSpec::Ground);
        assert_eq!(parse_init("file:x.txt").unwrap(), InitSpec::File("x.txt".into()));
        assert!(parse_init("file:").is_err());
        assert!(parse_init("thermal").is_err());
    }

    #[test]
    fn density_files() {
        let rho = parse_density("# mixed state\n0.5, 0, 0\n0 0.25 0.1+0.05i\n0, 0.1-0.05i, 0.25\n").unwrap();
        assert_eq!(rho[(1, 2)], C64::new(0.1, 0.05));
        let rounded = parse_density("0.3333 0 0\n0 0.3333 0\n0 0 0.3333\n").unwrap();
        assert!((rounded[(0, 0)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!(parse_density("1 0 0\n0 0 0\n").is_err());
        assert!(parse_density("1 0 0\n0 0 0\n0 0 0\n0 0 0\n").is_err());
        assert!(parse_density("1 0\n0 0 0\n0 0 0\n").is_err());
        assert!(parse_density("0.5 0 0\n0 0.5 0\n0 0 0.5\n").is_err(), "trace 1.5");
        assert!(parse_density("0.5 0.1i 0\n0.1i 0.5 0\n0 0 0\n").is_err(), "not Hermitian");
        assert!(parse_density("1.5 0 0\n0 -0.5 0\n0 0 0\n").is_err(), "negative");
        assert!(parse_density("1 0 0\n0 0 0\n0 0 NaN\n").is_err());
    }
}
