//! Kernel matrix container shared by every kernel construction in the crate.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ndarray::Array2;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which construction produced a kernel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// Parameterized quantum fidelity kernel.
    Pqk,
    /// Classical radial basis function kernel.
    Rbf,
    /// Gaussian map of Victor-Purpura spike distances.
    Vp,
    /// Gaussian map of van Rossum spike distances.
    Vr,
}

impl KernelKind {
    /// Kinds whose construction guarantees a unit diagonal by definition.
    /// Distance-derived kernels share the property in practice but it is
    /// only enforced for the similarity kernels.
    pub fn requires_unit_diagonal(self) -> bool {
        matches!(self, KernelKind::Pqk | KernelKind::Rbf)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Pqk => "pqk",
            KernelKind::Rbf => "rbf",
            KernelKind::Vp => "vp",
            KernelKind::Vr => "vr",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pqk" => Ok(KernelKind::Pqk),
            "rbf" => Ok(KernelKind::Rbf),
            "vp" => Ok(KernelKind::Vp),
            "vr" => Ok(KernelKind::Vr),
            other => Err(Error::Config(format!("unknown kernel kind '{other}'"))),
        }
    }
}

/// Symmetric n×n similarity matrix with a provenance tag.
#[derive(Debug, Clone)]
pub struct KernelMatrix<T> {
    kind: KernelKind,
    values: Array2<T>,
}

/// Serialized form: `{kind, n, values}` with row-major values.
#[derive(Serialize, Deserialize)]
struct KernelJson<T> {
    kind: KernelKind,
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> KernelMatrix<T> {
    /// Wraps a square matrix. Shape is checked here; numeric invariants
    /// are checked separately by [`KernelMatrix::validate`].
    pub fn new(kind: KernelKind, values: Array2<T>) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::Argument(format!(
                "kernel matrix must be square, got {}×{}",
                values.nrows(),
                values.ncols()
            )));
        }
        Ok(Self { kind, values })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<T> {
        &self.values
    }

    pub fn into_values(self) -> Array2<T> {
        self.values
    }

    /// Checks symmetry, the [0,1] entry range, and (for similarity kinds)
    /// the unit diagonal, all within `tol`.
    pub fn validate(&self, tol: T) -> Result<()> {
        let n = self.n();
        let v = &self.values;
        let one = T::one();
        for i in 0..n {
            for j in i..n {
                let x = v[[i, j]];
                if !x.is_finite() {
                    return Err(Error::Numeric(format!("kernel entry ({i},{j}) not finite")));
                }
                if x < -tol || x > one + tol {
                    return Err(Error::Numeric(format!(
                        "kernel entry ({i},{j}) = {x} outside [0,1]"
                    )));
                }
                if (x - v[[j, i]]).abs() > tol {
                    return Err(Error::Numeric(format!(
                        "kernel asymmetric at ({i},{j}): {x} vs {}",
                        v[[j, i]]
                    )));
                }
            }
            if self.kind.requires_unit_diagonal() && (v[[i, i]] - one).abs() > tol {
                return Err(Error::Numeric(format!(
                    "kernel diagonal entry {i} = {} not 1",
                    v[[i, i]]
                )));
            }
        }
        Ok(())
    }

    /// Default validation tolerance for double-precision pipelines.
    pub fn validate_strict(&self) -> Result<()> {
        self.validate(T::of(1e-10))
    }

    /// Writes the matrix as n rows × n comma-separated columns, no header.
    /// Values print in shortest round-trip form, so a read-back is exact.
    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(path)?;
        for row in self.values.rows() {
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a headerless n×n CSV written by [`KernelMatrix::write_csv`]
    /// (or any other producer of the same layout).
    pub fn read_csv<P: AsRef<Path>>(path: P, kind: KernelKind) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_path(path)?;
        let mut data: Vec<T> = Vec::new();
        let mut n_cols = None;
        let mut n_rows = 0usize;
        for (i, record) in r.records().enumerate() {
            let record = record?;
            match n_cols {
                None => n_cols = Some(record.len()),
                Some(c) if c != record.len() => {
                    return Err(Error::Parse {
                        row: i + 1,
                        column: format!("col{}", record.len()),
                        message: format!("expected {c} columns, got {}", record.len()),
                    });
                }
                _ => {}
            }
            for (j, field) in record.iter().enumerate() {
                let x: f64 = field.parse().map_err(|e| Error::Parse {
                    row: i + 1,
                    column: format!("col{j}"),
                    message: format!("{e}"),
                })?;
                data.push(T::of(x));
            }
            n_rows += 1;
        }
        let n_cols = n_cols.unwrap_or(0);
        if n_rows != n_cols {
            return Err(Error::Argument(format!(
                "kernel CSV must be square, got {n_rows}×{n_cols}"
            )));
        }
        let values = Array2::from_shape_vec((n_rows, n_cols), data)
            .map_err(|e| Error::Argument(format!("bad kernel shape: {e}")))?;
        Self::new(kind, values)
    }
}

impl<T: Scalar + Serialize> KernelMatrix<T> {
    pub fn write_json<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let repr = KernelJson {
            kind: self.kind,
            n: self.n(),
            values: self.values.iter().copied().collect(),
        };
        let file = std::fs::File::create(path)?;
        serde_json::to_writer(std::io::BufWriter::new(file), &repr)?;
        Ok(())
    }
}

impl<T: Scalar + DeserializeOwned> KernelMatrix<T> {
    pub fn read_json<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let repr: KernelJson<T> = serde_json::from_reader(std::io::BufReader::new(file))?;
        if repr.values.len() != repr.n * repr.n {
            return Err(Error::Argument(format!(
                "kernel JSON declares n={} but holds {} values",
                repr.n,
                repr.values.len()
            )));
        }
        let values = Array2::from_shape_vec((repr.n, repr.n), repr.values)
            .map_err(|e| Error::Argument(format!("bad kernel shape: {e}")))?;
        Self::new(repr.kind, values)
    }
}
