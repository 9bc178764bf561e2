use std::collections::HashSet;

use serde::Serialize;

use super::{MarkupError, OntologyDoc};
use crate::scales::Datum;
use crate::scaling::DescriptionFunction;

/// Objects in file order and one description function per data column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub objects: Vec<String>,
    pub functions: Vec<DescriptionFunction>,
}

impl Dataset {
    pub fn function(&self, name: &str) -> Option<&DescriptionFunction> {
        self.functions.iter().find(|f| f.name() == name)
    }
}

fn is_null(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

/// Reads a CSV table: the first column names objects, every other column
/// is a description function declared in the ontology. Empty cells and
/// `?` are missing values.
pub fn load_dataset(text: &str, onto: &OntologyDoc) -> Result<Dataset, MarkupError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| MarkupError::Csv(e.to_string()))?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(MarkupError::Csv("missing header row".into()));
    }
    let mut schemas = Vec::with_capacity(headers.len() - 1);
    for name in headers.iter().skip(1) {
        if schemas.iter().any(|s: &&super::FunctionSchema| s.name == name) {
            return Err(MarkupError::Duplicate { what: "column", name: name.to_string() });
        }
        schemas.push(onto.function(name)?);
    }

    let mut objects: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut columns: Vec<Vec<Option<Datum>>> = vec![Vec::new(); schemas.len()];
    for record in reader.records() {
        let record = record.map_err(|e| MarkupError::Csv(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let id = &record[0];
        if id.is_empty() {
            return Err(MarkupError::Cell { line, column: headers[0].to_string(), message: "empty object id".into() });
        }
        if !seen.insert(id.to_string()) {
            return Err(MarkupError::Cell {
                line,
                column: headers[0].to_string(),
                message: format!("duplicate object `{id}`"),
            });
        }
        objects.push(id.to_string());
        for (k, schema) in schemas.iter().enumerate() {
            let cell = &record[k + 1];
            let value = if is_null(cell) {
                None
            } else {
                let d = schema.image_type.parse_datum(cell).map_err(|e| MarkupError::Cell {
                    line,
                    column: schema.name.clone(),
                    message: e.to_string(),
                })?;
                if !schema.values.is_empty() && !schema.values.iter().any(|v| v == cell) {
                    return Err(MarkupError::Cell {
                        line,
                        column: schema.name.clone(),
                        message: format!("`{cell}` is not a declared value"),
                    });
                }
                Some(d)
            };
            columns[k].push(value);
        }
    }
    let functions = schemas
        .iter()
        .zip(columns)
        .map(|(schema, values)| {
            DescriptionFunction::new(
                schema.name.clone(),
                schema.arg_type.clone(),
                schema.image_type,
                objects.clone(),
                values,
            )
            .map_err(|e| MarkupError::Csv(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dataset { objects, functions })
}
