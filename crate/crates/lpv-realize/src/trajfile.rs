//! Delimited trajectory files: one time step per row, columns are signal
//! components, and a header row names the columns.

use crate::error::{Error, Result};
use crate::model::SchedulingTrajectory;
use crate::simulate::SignalTrajectory;
use std::path::Path;

/// Reads a trajectory file into rows of equal width.
pub fn read_rows(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Trajectory(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Trajectory(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Trajectory(format!("{}: {e}", path.display())))?;
        let mut row = Vec::with_capacity(record.len());
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| {
                Error::Trajectory(format!(
                    "{} row {}: `{field}` is not a number",
                    path.display(),
                    i + 2
                ))
            })?;
            row.push(v);
        }
        if row.len() != header.len() {
            return Err(Error::Trajectory(format!(
                "{} row {}: {} fields, header names {}",
                path.display(),
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Trajectory(format!(
            "{} contains no samples",
            path.display()
        )));
    }
    Ok((header, rows))
}

pub fn read_signal(path: &Path) -> Result<SignalTrajectory> {
    let (_, rows) = read_rows(path)?;
    SignalTrajectory::from_rows(&rows)
}

pub fn read_scheduling(path: &Path) -> Result<SchedulingTrajectory> {
    let (_, rows) = read_rows(path)?;
    SchedulingTrajectory::new(rows)
}

/// Writes a trajectory with columns named `<prefix>1..<prefix>n`.
pub fn write_signal(path: &Path, prefix: &str, signal: &SignalTrajectory) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::Trajectory(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = (1..=signal.dim()).map(|i| format!("{prefix}{i}")).collect();
    writer
        .write_record(&header)
        .map_err(|e| Error::Trajectory(e.to_string()))?;
    for k in 0..signal.len() {
        let row: Vec<String> = signal.sample(k).iter().map(|v| format!("{v}")).collect();
        writer
            .write_record(&row)
            .map_err(|e| Error::Trajectory(e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::Trajectory(e.to_string()))?;
    Ok(())
}
