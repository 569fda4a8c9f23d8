//! CSV reading with located parse errors, and output helpers.

use crate::error::{input, CliResult};
use nalgebra::{DMatrix, DVector};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: usize,
    pub cols: usize,
    /// Row-major values.
    pub values: Vec<f64>,
}

impl Table {
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.values)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.values[i * self.cols + j]).collect()
    }
}

fn located(path: &Path, row: usize, column: usize, message: impl std::fmt::Display) -> crate::error::CliError {
    let e = shrinkage::Error::Parse {
        row,
        column,
        message: message.to_string(),
    };
    input(format!("{}: {e}", path.display()))
}

/// Read a numeric CSV. The first line is taken as a header when none of its
/// fields parses as a number. Rows and columns in errors are 1-based and
/// count the header line.
pub fn read_table(path: &Path) -> CliResult<Table> {
    let file = File::open(path).map_err(|e| input(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut header = None;
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, rec) in reader.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| located(path, line, 0, e))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if i == 0 && rec.iter().all(|f| f.parse::<f64>().is_err()) {
            header = Some(rec.iter().map(str::to_string).collect());
            cols = Some(rec.len());
            continue;
        }
        let want = *cols.get_or_insert(rec.len());
        if rec.len() != want {
            return Err(located(path, line, rec.len().min(want) + 1, format!("expected {want} fields, found {}", rec.len())));
        }
        for (j, f) in rec.iter().enumerate() {
            let v: f64 = f
                .parse()
                .map_err(|_| located(path, line, j + 1, format!("`{f}` is not a number")))?;
            if !v.is_finite() {
                return Err(located(path, line, j + 1, format!("`{f}` is not finite")));
            }
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(input(format!("{} holds no data rows", path.display())));
    }
    Ok(Table {
        header,
        rows,
        cols: cols.unwrap_or(0),
        values,
    })
}

pub fn read_design(path: &Path) -> CliResult<DMatrix<f64>> {
    Ok(read_table(path)?.matrix())
}

pub fn read_response(path: &Path) -> CliResult<DVector<f64>> {
    let t = read_table(path)?;
    if t.cols != 1 {
        return Err(input(format!("{} must have one column, found {}", path.display(), t.cols)));
    }
    Ok(DVector::from_vec(t.values))
}

pub fn read_xy(x: &Path, y: &Path) -> CliResult<(DMatrix<f64>, DVector<f64>)> {
    let x_m = read_design(x)?;
    let y_v = read_response(y)?;
    if x_m.nrows() != y_v.len() {
        return Err(input(format!(
            "{} has {} rows but {} has {}",
            x.display(),
            x_m.nrows(),
            y.display(),
            y_v.len()
        )));
    }
    Ok((x_m, y_v))
}

pub fn out_dir(dir: &Path) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| input(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir.to_path_buf())
}

/// Create `dir/name`, hand a buffered writer to `f`, and flush.
pub fn write_file<F>(dir: &Path, name: &str, f: F) -> CliResult<PathBuf>
where
    F: FnOnce(&mut BufWriter<File>) -> CliResult<()>,
{
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| input(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush()?;
    Ok(path)
}
