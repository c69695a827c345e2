//! Tabular data sources loaded from CSV. The header row carries attribute
//! names; every column keeps its cell values as strings.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub attribute: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceTable {
    pub name: String,
    pub columns: Vec<Column>,
}

impl SourceTable {
    pub fn new(name: &str, columns: Vec<Column>) -> Result<SourceTable> {
        let table = SourceTable {
            name: name.to_string(),
            columns,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn load_csv(path: &Path) -> Result<SourceTable> {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("source")
            .to_string();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_path(path)?;
        let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_string()).collect();
        let mut columns: Vec<Column> = headers
            .into_iter()
            .map(|attribute| Column {
                attribute,
                values: Vec::new(),
            })
            .collect();
        for record in reader.records() {
            let record = record?;
            for (i, cell) in record.iter().enumerate() {
                columns[i].values.push(cell.to_string());
            }
        }
        SourceTable::new(&name, columns)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        writer.write_record(self.columns.iter().map(|c| c.attribute.as_str()))?;
        for row in 0..self.row_count() {
            writer.write_record(self.columns.iter().map(|c| c.values[row].as_str()))?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.columns.is_empty() {
            return Err(Error::Source(format!("table '{}' has no columns", self.name)));
        }
        let mut seen = BTreeSet::new();
        for c in &self.columns {
            if !seen.insert(c.attribute.as_str()) {
                return Err(Error::Source(format!(
                    "table '{}' has duplicate attribute '{}'",
                    self.name, c.attribute
                )));
            }
        }
        let rows = self.columns[0].values.len();
        for c in &self.columns {
            if c.values.len() != rows {
                return Err(Error::Source(format!(
                    "table '{}': column '{}' has {} rows, expected {}",
                    self.name,
                    c.attribute,
                    c.values.len(),
                    rows
                )));
            }
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.columns.first().map(|c| c.values.len()).unwrap_or(0)
    }

    pub fn column(&self, attribute: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.attribute == attribute)
    }

    pub fn attribute_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.attribute.as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "a,b\n1,x\n2,y\n").unwrap();
        let table = SourceTable::load_csv(&path).unwrap();
        assert_eq!(table.name, "t");
        assert_eq!(table.row_count(), 2);
        assert_eq!(table.column("b").unwrap().values, vec!["x", "y"]);

        let out = dir.path().join("u.csv");
        table.save_csv(&out).unwrap();
        let mut again = SourceTable::load_csv(&out).unwrap();
        again.name = "t".to_string();
        assert_eq!(table, again);
    }

    #[test]
    fn duplicate_attribute_rejected() {
        let cols = vec![
            Column { attribute: "a".into(), values: vec!["1".into()] },
            Column { attribute: "a".into(), values: vec!["2".into()] },
        ];
        assert!(SourceTable::new("t", cols).is_err());
    }

    #[test]
    fn empty_table_rejected() {
        assert!(SourceTable::new("t", vec![]).is_err());
    }
}
