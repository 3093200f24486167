//! Reading and writing frequency tables.
//!
//! Wide CSV: the first header cell is literally `category`, the remaining
//! header cells name populations, and each row holds one category label
//! followed by one value per population.
//!
//! JSON: `{"categories": [...], "populations": [{"id": ..., "values": [...]}],
//! "mode": "counts" | "shares"}`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::structures::{CategoryLabel, FrequencyTable, InputMode, SHARES_INPUT_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    CsvWide,
    Json,
}

/// Parses a table, requiring the given input mode.
pub fn parse_table(source: &[u8], format: TableFormat, mode: InputMode) -> Result<FrequencyTable> {
    match format {
        TableFormat::CsvWide => parse_csv(source, mode),
        TableFormat::Json => parse_json(source, Some(mode)),
    }
}

pub fn parse_csv(source: &[u8], mode: InputMode) -> Result<FrequencyTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        Some(record) => record.map_err(|e| csv_error(1, e))?,
        None => return Err(Error::Malformed("empty CSV input".into())),
    };
    match header.get(0) {
        Some(first) if first.trim_start_matches('\u{feff}') == "category" => {}
        _ => {
            return Err(Error::Parse {
                row: 1,
                column: 1,
                message: "first header cell must be `category`".into(),
            })
        }
    }
    let populations: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if populations.is_empty() {
        return Err(Error::Parse {
            row: 1,
            column: 2,
            message: "no population columns".into(),
        });
    }
    for (i, p) in populations.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::Parse {
                row: 1,
                column: i + 2,
                message: "empty population identifier".into(),
            });
        }
        if populations[..i].contains(p) {
            return Err(Error::DuplicatePopulation(p.clone()));
        }
    }

    let mut categories: Vec<CategoryLabel> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); populations.len()];
    for (offset, record) in records.enumerate() {
        let row = offset + 2;
        let record = record.map_err(|e| csv_error(row, e))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != populations.len() + 1 {
            return Err(Error::Parse {
                row,
                column: record.len().min(populations.len() + 1) + 1,
                message: format!(
                    "expected {} fields, found {}",
                    populations.len() + 1,
                    record.len()
                ),
            });
        }
        let label = CategoryLabel::new(&record[0]).map_err(|_| Error::Parse {
            row,
            column: 1,
            message: "empty category label".into(),
        })?;
        if categories.contains(&label) {
            return Err(Error::DuplicateCategory(label.to_string()));
        }
        categories.push(label);
        for (i, cell) in record.iter().skip(1).enumerate() {
            columns[i].push(parse_value(cell, row, i + 2)?);
        }
    }
    if categories.is_empty() {
        return Err(Error::Malformed("CSV input has no category rows".into()));
    }
    build(categories, populations, columns, mode)
}

fn csv_error(row: usize, e: csv::Error) -> Error {
    Error::Parse {
        row,
        column: 1,
        message: e.to_string(),
    }
}

fn parse_value(cell: &str, row: usize, column: usize) -> Result<f64> {
    let value: f64 = cell.parse().map_err(|_| Error::Parse {
        row,
        column,
        message: format!("`{cell}` is not a decimal number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            row,
            column,
            message: format!("`{cell}` is not finite"),
        });
    }
    if value < 0.0 {
        return Err(Error::Parse {
            row,
            column,
            message: format!("negative value {value}"),
        });
    }
    Ok(value)
}

fn build(
    categories: Vec<CategoryLabel>,
    populations: Vec<String>,
    columns: Vec<Vec<f64>>,
    mode: InputMode,
) -> Result<FrequencyTable> {
    if mode == InputMode::Shares {
        for (i, (population, column)) in populations.iter().zip(&columns).enumerate() {
            let sum: f64 = column.iter().sum();
            if (sum - 1.0).abs() > SHARES_INPUT_TOLERANCE {
                return Err(Error::SharesSum {
                    population: population.clone(),
                    column: i + 2,
                    sum,
                });
            }
        }
    }
    FrequencyTable::new(categories, populations, columns, mode)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTable {
    categories: Vec<String>,
    populations: Vec<JsonPopulation>,
    mode: InputMode,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonPopulation {
    id: String,
    values: Vec<f64>,
}

/// Parses the JSON table format. When `expected` is given, the document's
/// declared mode must match it.
pub fn parse_json(source: &[u8], expected: Option<InputMode>) -> Result<FrequencyTable> {
    let doc: JsonTable = serde_json::from_slice(source)?;
    if let Some(requested) = expected {
        if requested != doc.mode {
            return Err(Error::ModeMismatch {
                requested: requested.as_str(),
                declared: doc.mode.as_str(),
            });
        }
    }
    let mut categories = Vec::with_capacity(doc.categories.len());
    for (i, label) in doc.categories.into_iter().enumerate() {
        let label = CategoryLabel::new(label).map_err(|_| Error::Parse {
            row: i + 1,
            column: 1,
            message: "empty category label".into(),
        })?;
        if categories.contains(&label) {
            return Err(Error::DuplicateCategory(label.to_string()));
        }
        categories.push(label);
    }
    let mut populations = Vec::with_capacity(doc.populations.len());
    let mut columns = Vec::with_capacity(doc.populations.len());
    for (p, population) in doc.populations.into_iter().enumerate() {
        if population.values.len() != categories.len() {
            return Err(Error::Parse {
                row: categories.len().min(population.values.len()) + 1,
                column: p + 2,
                message: format!(
                    "population `{}` has {} values for {} categories",
                    population.id,
                    population.values.len(),
                    categories.len()
                ),
            });
        }
        for (i, &value) in population.values.iter().enumerate() {
            if value < 0.0 {
                return Err(Error::Parse {
                    row: i + 1,
                    column: p + 2,
                    message: format!("negative value {value}"),
                });
            }
        }
        if populations.contains(&population.id) {
            return Err(Error::DuplicatePopulation(population.id));
        }
        populations.push(population.id);
        columns.push(population.values);
    }
    build(categories, populations, columns, doc.mode)
}

/// Wide-CSV rendering; values use the shortest representation that parses
/// back to the same `f64`.
pub fn render_table_csv(table: &FrequencyTable) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["category".to_string()];
    header.extend(table.populations().iter().cloned());
    writer.write_record(&header).expect("writing to memory");
    for (i, category) in table.categories().iter().enumerate() {
        let mut row = vec![category.to_string()];
        row.extend(
            table
                .populations()
                .iter()
                .map(|p| table.values(p).expect("own population")[i].to_string()),
        );
        writer.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
}

pub fn render_table_json(table: &FrequencyTable) -> String {
    let doc = JsonTable {
        categories: table.categories().iter().map(|c| c.to_string()).collect(),
        populations: table
            .populations()
            .iter()
            .map(|p| JsonPopulation {
                id: p.clone(),
                values: table.values(p).expect("own population").to_vec(),
            })
            .collect(),
        mode: table.mode(),
    };
    serde_json::to_string_pretty(&doc).expect("table serializes")
}

/// SHA-256 over the mode and the canonical wide-CSV rendering of `table`.
pub fn table_digest(table: &FrequencyTable) -> String {
    let mut hasher = Sha256::new();
    hasher.update(table.mode().as_str().as_bytes());
    hasher.update(b"\n");
    hasher.update(render_table_csv(table).as_bytes());
    hex::encode(hasher.finalize())
}
