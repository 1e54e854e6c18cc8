//! Column-ordered result tables and their CSV form.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! every value round-trips exactly; rows end in a bare LF.

use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Float(x) if x.is_nan() => "NaN".to_string(),
            Cell::Float(x) if x.is_infinite() => if x > 0.0 { "inf" } else { "-inf" }.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[j] {
                    Cell::Float(x) => x,
                    Cell::Int(i) => i as f64,
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let wrap = |source| CliError::Csv {
            context: "serializing table".into(),
            source,
        };
        w.write_record(&self.columns).map_err(wrap)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render())).map_err(wrap)?;
        }
        w.into_inner().map_err(|e| CliError::io("serializing table", e.into_error()))
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_csv()?).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }
}

/// A CSV read back as a header and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCsv {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericCsv {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let context = || format!("reading {}", path.display());
        let mut r = csv::Reader::from_path(path).map_err(|source| CliError::Csv {
            context: context(),
            source,
        })?;
        let columns: Vec<String> = r
            .headers()
            .map_err(|source| CliError::Csv {
                context: context(),
                source,
            })?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, record) in r.records().enumerate() {
            let record = record.map_err(|source| CliError::Csv {
                context: context(),
                source,
            })?;
            let row = record
                .iter()
                .enumerate()
                .map(|(j, field)| {
                    field.parse::<f64>().map_err(|_| {
                        CliError::Schema(format!("{}: row {} column `{}` is not numeric: `{field}`", path.display(), i + 1, columns[j]))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(NumericCsv { columns, rows })
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}
