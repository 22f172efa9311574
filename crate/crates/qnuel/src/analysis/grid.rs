//! Sweep grids and their CSV/JSON serialisation.
//!
//! A grid is a set of named axes plus one value per cell, stored row-major
//! with the first axis slowest. CSV output carries one header row naming the
//! axes and the value column; floats are printed with 17 significant digits
//! so a reparse reproduces them bit-exactly. JSON output serialises the same
//! structure with serde.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }

    /// `n` evenly spaced points from `lo` inclusive to `hi` exclusive.
    pub fn half_open(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        let step = (hi - lo) / n as f64;
        Self::new(name, (0..n).map(|i| lo + step * i as f64).collect())
    }

    /// `n` evenly spaced points covering `[lo, hi]` inclusive.
    pub fn closed(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        let step = (hi - lo) / (n - 1) as f64;
        Self::new(name, (0..n).map(|i| lo + step * i as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridValues {
    Scalars(Vec<f64>),
    Labels(Vec<String>),
}

impl GridValues {
    pub fn len(&self) -> usize {
        match self {
            GridValues::Scalars(v) => v.len(),
            GridValues::Labels(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A fully populated raster over the cartesian product of its axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axes: Vec<Axis>,
    pub value_name: String,
    pub values: GridValues,
}

impl SweepGrid {
    pub fn new(axes: Vec<Axis>, value_name: &str, values: GridValues) -> Result<Self> {
        let cells: usize = axes.iter().map(|a| a.values.len()).product();
        if values.len() != cells {
            return Err(Error::ConfigError(format!(
                "{} values for {cells} cells",
                values.len()
            )));
        }
        Ok(Self {
            axes,
            value_name: value_name.into(),
            values,
        })
    }

    /// Row-major cell index, first axis slowest.
    pub fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.axes)
            .fold(0, |acc, (c, axis)| acc * axis.values.len() + c)
    }

    pub fn scalar_at(&self, coords: &[usize]) -> Option<f64> {
        match &self.values {
            GridValues::Scalars(v) => Some(v[self.index(coords)]),
            GridValues::Labels(_) => None,
        }
    }

    pub fn label_at(&self, coords: &[usize]) -> Option<&str> {
        match &self.values {
            GridValues::Labels(v) => Some(&v[self.index(coords)]),
            GridValues::Scalars(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    Csv,
    Json,
}

/// Print a float with 17 significant digits (round-trip exact for f64).
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write the grid to `path`. CSV is comma-separated with a header row, LF
/// line endings and UTF-8; JSON follows the serde layout of [`SweepGrid`].
pub fn emit_grid(grid: &SweepGrid, format: GridFormat, path: &Path) -> Result<()> {
    let mut out: Vec<u8> = Vec::new();
    match format {
        GridFormat::Csv => {
            let header: Vec<&str> = grid
                .axes
                .iter()
                .map(|a| a.name.as_str())
                .chain([grid.value_name.as_str()])
                .collect();
            out.extend(header.join(",").as_bytes());
            out.push(b'\n');
            let dims: Vec<usize> = grid.axes.iter().map(|a| a.values.len()).collect();
            let mut coords = vec![0usize; dims.len()];
            for flat in 0..grid.values.len() {
                let mut rem = flat;
                for (i, d) in dims.iter().enumerate().rev() {
                    coords[i] = rem % d;
                    rem /= d;
                }
                let mut row: Vec<String> = coords
                    .iter()
                    .zip(&grid.axes)
                    .map(|(&c, a)| format_float(a.values[c]))
                    .collect();
                row.push(match &grid.values {
                    GridValues::Scalars(v) => format_float(v[flat]),
                    GridValues::Labels(v) => v[flat].clone(),
                });
                out.extend(row.join(",").as_bytes());
                out.push(b'\n');
            }
        }
        GridFormat::Json => {
            out = serde_json::to_vec_pretty(grid)
                .map_err(|e| Error::ConfigError(format!("json: {e}")))?;
            out.push(b'\n');
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_grid() -> SweepGrid {
        SweepGrid::new(
            vec![
                Axis::new("a", vec![0.0, 0.5]),
                Axis::new("b", vec![0.25, 0.75]),
            ],
            "payoff",
            GridValues::Scalars(vec![0.1, 0.2, 1.0 / 3.0, 0.4]),
        )
        .unwrap()
    }

    #[test]
    fn csv_has_header_and_row_major_cells() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        emit_grid(&sample_grid(), GridFormat::Csv, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "a,b,payoff");
        assert!(lines[1].starts_with(&format_float(0.0)));
        // Row-major: second row still a=0, b=0.75.
        assert!(lines[2].contains(&format_float(0.75)));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let grid = sample_grid();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        emit_grid(&grid, GridFormat::Csv, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        for (row, flat) in text.lines().skip(1).zip(0..) {
            let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
            let expect = match &grid.values {
                GridValues::Scalars(v) => v[flat],
                _ => unreachable!(),
            };
            assert_eq!(cols[2].to_bits(), expect.to_bits());
        }
    }

    #[test]
    fn json_round_trips_through_serde() {
        let grid = sample_grid();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        emit_grid(&grid, GridFormat::Json, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let back: SweepGrid = serde_json::from_str(&text).unwrap();
        assert_eq!(back, grid);
    }

    #[test]
    fn label_grids_serialise_too() {
        let grid = SweepGrid::new(
            vec![Axis::new("b", vec![0.0, 1.0])],
            "best",
            GridValues::Labels(vec!["air".into(), "charles".into()]),
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        emit_grid(&grid, GridFormat::Csv, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.ends_with("air\n1.0000000000000000e0,charles\n"));
    }

    #[test]
    fn value_count_must_match_cells() {
        assert!(SweepGrid::new(
            vec![Axis::new("x", vec![0.0, 1.0])],
            "v",
            GridValues::Scalars(vec![1.0]),
        )
        .is_err());
    }
}
