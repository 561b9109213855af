//! Artifact writers: CSV (comma-separated, `.` decimal point, one header
//! row, LF line endings) and 8-bit binary graymaps with a min/max sidecar.
//!
//! Floats are written with Rust's shortest round-trip formatting, which is
//! deterministic and lossless — identical runs produce identical bytes.

use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

/// Shortest round-trip decimal form of a float (always `.` decimal point).
pub fn format_f64(x: f64) -> String {
    format!("{x}")
}

/// Writes a CSV file: one header row, then the data rows, LF endings.
pub fn write_csv<P: AsRef<Path>>(
    path: P,
    header: &[String],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)
}

/// History CSV: rows are time nodes, first column the time, remaining
/// columns the per-index values under `prefix_0, prefix_1, ...`.
pub fn write_history_csv<P: AsRef<Path>>(
    path: P,
    times: &[f64],
    history: &[DVector<f64>],
    prefix: &str,
) -> std::io::Result<()> {
    let width = history.first().map_or(0, |v| v.len());
    let mut header = vec!["t".to_string()];
    header.extend((0..width).map(|i| format!("{prefix}_{i}")));
    write_csv(
        path,
        &header,
        times.iter().zip(history).map(|(t, v)| {
            let mut row = Vec::with_capacity(width + 1);
            row.push(format_f64(*t));
            row.extend(v.iter().map(|x| format_f64(*x)));
            row
        }),
    )
}

/// Scalar-history CSV with columns `t,value`.
pub fn write_series_csv<P: AsRef<Path>>(
    path: P,
    times: &[f64],
    values: &[f64],
) -> std::io::Result<()> {
    write_csv(
        path,
        &["t".to_string(), "value".to_string()],
        times
            .iter()
            .zip(values)
            .map(|(t, v)| vec![format_f64(*t), format_f64(*v)]),
    )
}

/// Matrix CSV (one snapshot): header `c_0..c_{nx-1}`, one row per grid row
/// (top row first, matching the grid's image convention).
pub fn write_matrix_csv<P: AsRef<Path>>(
    path: P,
    values: &DMatrix<f64>,
) -> std::io::Result<()> {
    let header: Vec<String> = (0..values.ncols()).map(|c| format!("c_{c}")).collect();
    write_csv(
        path,
        &header,
        (0..values.nrows())
            .map(|r| (0..values.ncols()).map(|c| format_f64(values[(r, c)])).collect()),
    )
}

/// 8-bit binary graymap (`P5`) with linear value mapping, plus a sidecar
/// `<path>.minmax` recording the mapped range.  A constant field maps to
/// mid-gray.
pub fn write_pgm<P: AsRef<Path>>(path: P, values: &DMatrix<f64>) -> std::io::Result<()> {
    let path = path.as_ref();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.iter() {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    let span = hi - lo;
    let mut bytes = Vec::with_capacity(values.len());
    for r in 0..values.nrows() {
        for c in 0..values.ncols() {
            let level = if span > 0.0 {
                ((values[(r, c)] - lo) / span * 255.0).round() as u8
            } else {
                128
            };
            bytes.push(level);
        }
    }

    let mut file = std::fs::File::create(path)?;
    write!(file, "P5\n{} {}\n255\n", values.ncols(), values.nrows())?;
    file.write_all(&bytes)?;

    let sidecar = format!(
        "min={}\nmax={}\n",
        format_f64(lo),
        format_f64(hi)
    );
    std::fs::write(path.with_extension("pgm.minmax"), sidecar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.1, 1.0 / 3.0, -2.5e-17, 123456.789, f64::EPSILON] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(!s.contains(','));
        }
    }

    #[test]
    fn history_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        let times = [0.0, 0.5];
        let history = vec![
            DVector::from_vec(vec![1.0, 2.0]),
            DVector::from_vec(vec![3.0, 4.5]),
        ];
        write_history_csv(&path, &times, &history, "eta").unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "t,eta_0,eta_1\n0,1,2\n0.5,3,4.5\n");
    }

    #[test]
    fn pgm_maps_linearly_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.pgm");
        let m = DMatrix::from_row_slice(2, 3, &[0.0, 0.5, 1.0, 1.0, 0.25, 0.75]);
        write_pgm(&path, &m).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let header = b"P5\n3 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(&bytes[header.len()..], &[0, 128, 255, 255, 64, 191]);
        let sidecar = std::fs::read_to_string(dir.path().join("snap.pgm.minmax")).unwrap();
        assert_eq!(sidecar, "min=0\nmax=1\n");

        // Constant field: mid-gray, not a division by zero.
        let flat = DMatrix::from_element(1, 2, 3.25);
        write_pgm(dir.path().join("flat.pgm"), &flat).unwrap();
        let bytes = std::fs::read(dir.path().join("flat.pgm")).unwrap();
        assert_eq!(&bytes[bytes.len() - 2..], &[128, 128]);
    }
}
