//! Convolution-quadrature weight tables and their plain-text serialization.
//!
//! A [`WeightTable`] holds the quadrature weights `w_0..w_N` of a discretised
//! convolution operator: complex `rows x cols` matrices produced either by a
//! multistep generator (one matrix per step) or by a Runge-Kutta generator
//! (one stage-block per step).  Tables are immutable after construction and
//! record the contour parameters (`radius`, `eps`) used to produce them so a
//! run can be reproduced exactly.
//!
//! The on-disk format is CSV: two metadata lines (field names, then values),
//! one column-header line, then one row per weight index with the matrix
//! flattened row-major into `re`/`im` column pairs.  Floating-point values
//! are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces the table bit for bit.

use num_complex::Complex64;
use thiserror::Error;

use crate::symbol::CMatrix;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("weight table line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

/// Weights `w_0..w_N` of a discrete convolution, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    /// Generator label, e.g. `be`, `bdf2`, `tr`, `radau3`, `lobatto4`.
    pub kind: String,
    /// Time step used to generate the table.
    pub kappa: f64,
    /// Contour radius `R` used by the scaled-transform algorithm.
    pub radius: f64,
    /// Target accuracy parameter that determined `R`.
    pub eps: f64,
    /// The weights `w_0..w_N`; all matrices share one shape.
    pub weights: Vec<CMatrix>,
}

impl WeightTable {
    /// Largest convolution index covered by the table (`N`).
    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    /// Shape `(rows, cols)` of each stored weight matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.weights[0].nrows(), self.weights[0].ncols())
    }

    /// Serialise to the CSV format described in the module docs.
    pub fn to_csv(&self) -> String {
        let (rows, cols) = self.shape();
        let mut out = String::new();
        out.push_str("kind,kappa,steps,radius,eps,rows,cols\n");
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            self.kind,
            self.kappa,
            self.n_max(),
            self.radius,
            self.eps,
            rows,
            cols
        ));
        out.push('n');
        for r in 0..rows {
            for c in 0..cols {
                out.push_str(&format!(",re_{r}_{c},im_{r}_{c}"));
            }
        }
        out.push('\n');
        for (n, w) in self.weights.iter().enumerate() {
            out.push_str(&n.to_string());
            for r in 0..rows {
                for c in 0..cols {
                    let v = w[(r, c)];
                    out.push_str(&format!(",{},{}", v.re, v.im));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parse a table previously produced by [`WeightTable::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let mut lines = text.lines().enumerate();

        let (_, header) = lines.next().ok_or(TableError::Parse {
            line: 1,
            detail: "empty input".into(),
        })?;
        if header.trim() != "kind,kappa,steps,radius,eps,rows,cols" {
            return Err(TableError::Parse {
                line: 1,
                detail: format!("unexpected header {header:?}"),
            });
        }

        let (_, meta) = lines.next().ok_or(TableError::Parse {
            line: 2,
            detail: "missing metadata row".into(),
        })?;
        let fields: Vec<&str> = meta.trim().split(',').collect();
        if fields.len() != 7 {
            return Err(TableError::Parse {
                line: 2,
                detail: format!("expected 7 metadata fields, got {}", fields.len()),
            });
        }
        let parse_f = |ix: usize| -> Result<f64, TableError> {
            fields[ix].parse().map_err(|_| TableError::Parse {
                line: 2,
                detail: format!("bad float {:?}", fields[ix]),
            })
        };
        let parse_u = |ix: usize| -> Result<usize, TableError> {
            fields[ix].parse().map_err(|_| TableError::Parse {
                line: 2,
                detail: format!("bad count {:?}", fields[ix]),
            })
        };
        let kind = fields[0].to_string();
        let kappa = parse_f(1)?;
        let steps = parse_u(2)?;
        let radius = parse_f(3)?;
        let eps = parse_f(4)?;
        let rows = parse_u(5)?;
        let cols = parse_u(6)?;
        if rows == 0 || cols == 0 {
            return Err(TableError::Parse {
                line: 2,
                detail: "zero matrix dimension".into(),
            });
        }

        // Skip the column-header line.
        lines.next().ok_or(TableError::Parse {
            line: 3,
            detail: "missing column header".into(),
        })?;

        let mut weights = Vec::with_capacity(steps + 1);
        for (ix, row) in lines {
            let line = ix + 1;
            if row.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = row.trim().split(',').collect();
            if cells.len() != 1 + 2 * rows * cols {
                return Err(TableError::Parse {
                    line,
                    detail: format!(
                        "expected {} columns, got {}",
                        1 + 2 * rows * cols,
                        cells.len()
                    ),
                });
            }
            let n: usize = cells[0].parse().map_err(|_| TableError::Parse {
                line,
                detail: format!("bad index {:?}", cells[0]),
            })?;
            if n != weights.len() {
                return Err(TableError::Parse {
                    line,
                    detail: format!("out-of-order index {n}, expected {}", weights.len()),
                });
            }
            let mut m = CMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    let base = 1 + 2 * (r * cols + c);
                    let re: f64 = cells[base].parse().map_err(|_| TableError::Parse {
                        line,
                        detail: format!("bad float {:?}", cells[base]),
                    })?;
                    let im: f64 = cells[base + 1].parse().map_err(|_| TableError::Parse {
                        line,
                        detail: format!("bad float {:?}", cells[base + 1]),
                    })?;
                    m[(r, c)] = Complex64::new(re, im);
                }
            }
            weights.push(m);
        }
        if weights.len() != steps + 1 {
            return Err(TableError::Parse {
                line: 0,
                detail: format!("expected {} weight rows, found {}", steps + 1, weights.len()),
            });
        }
        Ok(WeightTable {
            kind,
            kappa,
            radius,
            eps,
            weights,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn sample_table(rows: usize, cols: usize, n: usize) -> WeightTable {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let weights = (0..=n)
            .map(|_| {
                CMatrix::from_fn(rows, cols, |_, _| {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                })
            })
            .collect();
        WeightTable {
            kind: "bdf2".into(),
            kappa: 0.05,
            radius: 0.744_605,
            eps: f64::EPSILON,
            weights,
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        for (rows, cols, n) in [(1, 1, 7), (2, 3, 4), (4, 4, 0)] {
            let table = sample_table(rows, cols, n);
            let text = table.to_csv();
            let back = WeightTable::from_csv(&text).unwrap();
            assert_eq!(table, back);
            // A second cycle must produce the identical byte stream.
            assert_eq!(text, back.to_csv());
        }
    }

    #[test]
    fn csv_rejects_malformed_input() {
        let table = sample_table(1, 1, 3);
        let text = table.to_csv();

        assert!(WeightTable::from_csv("").is_err());
        assert!(WeightTable::from_csv("bogus header\n").is_err());

        // Drop one data row: count mismatch.
        let truncated: Vec<&str> = text.lines().take(5).collect();
        assert!(WeightTable::from_csv(&truncated.join("\n")).is_err());

        // Corrupt a float.
        let corrupted = text.replacen("0.05", "zero point", 1);
        assert!(WeightTable::from_csv(&corrupted).is_err());
    }

    #[test]
    fn header_records_generator_and_contour() {
        let table = sample_table(1, 1, 2);
        let text = table.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "kind,kappa,steps,radius,eps,rows,cols");
        let meta = lines.next().unwrap();
        assert!(meta.starts_with("bdf2,0.05,2,"));
        assert!(meta.contains("0.744605"));
    }
}
