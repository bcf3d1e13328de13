use std::path::Path;

use dfol::foliation::{hamiltonian_foliation, FoliationPresentation};
use dfol::{Poly, Vars};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The input schema: variables, vector fields, or a Poisson bivector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub fields: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("{location}: {source}")]
    Expression { location: String, source: dfol::Error },
}

impl InputError {
    pub fn exit_code(&self) -> i32 {
        match self {
            InputError::Io { .. } => 1,
            _ => 2,
        }
    }
}

fn expr_err(location: String) -> impl FnOnce(dfol::Error) -> InputError {
    move |source| InputError::Expression { location, source }
}

/// Builds the presentation described by a parsed input file.
pub fn parse_input(input: &InputFile) -> Result<(Vars, FoliationPresentation), InputError> {
    let vars = dfol::vars(&input.variables).map_err(|e| InputError::Schema(e.to_string()))?;
    let f = match &input.poisson {
        Some(rows) => {
            if !input.fields.is_empty() {
                return Err(InputError::Schema("give either `fields` or `poisson`, not both".into()));
            }
            let mut matrix = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let parsed = row
                    .iter()
                    .enumerate()
                    .map(|(j, s)| Poly::parse(s, &vars).map_err(expr_err(format!("poisson[{i}][{j}]"))))
                    .collect::<Result<Vec<_>, _>>()?;
                matrix.push(parsed);
            }
            hamiltonian_foliation(&vars, &matrix).map_err(expr_err("poisson".into()))?
        }
        None => {
            let gens = input
                .fields
                .iter()
                .enumerate()
                .map(|(j, s)| dfol::foliation::VectorField::parse(s, &vars).map_err(expr_err(format!("fields[{j}]"))))
                .collect::<Result<Vec<_>, _>>()?;
            FoliationPresentation::new(&vars, gens).map_err(expr_err("fields".into()))?
        }
    };
    Ok((vars, f))
}

/// Reads and parses an input file.
pub fn parse_field_file(path: &Path) -> Result<(InputFile, FoliationPresentation), InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    let input: InputFile = serde_json::from_str(&text).map_err(|e| InputError::Schema(e.to_string()))?;
    let (_, f) = parse_input(&input)?;
    Ok((input, f))
}
