use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CoverageInstance;
use crate::error::Error;

/// On-disk schema, version 1. Unknown fields are rejected so that typos in
/// hand-written files fail loudly.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    version: u32,
    n_items: usize,
    n_elements: usize,
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<bool>>,
    covers: Vec<Vec<usize>>,
}

impl CoverageInstance {
    /// Writes the instance as pretty-printed JSON. Output depends only on
    /// the instance contents.
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let file = InstanceFile {
            version: 1,
            n_items: self.n_items,
            n_elements: self.n_elements,
            values: self.values.clone(),
            labels: self.labels.clone(),
            covers: self.covers.clone(),
        };
        let mut text = serde_json::to_string_pretty(&file)
            .expect("instance serialization cannot fail");
        text.push('\n');
        fs::write(path, text).map_err(|source| Error::Io { path: path.to_owned(), source })
    }

    /// Reads and validates an instance file. Parse errors carry the line
    /// and column; structural problems name the offending item or element.
    pub fn load(path: &Path) -> Result<CoverageInstance, Error> {
        let text = fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let file: InstanceFile = serde_json::from_str(&text)
            .map_err(|source| Error::Parse { path: path.to_owned(), source })?;
        if file.version != 1 {
            return Err(Error::InvalidInstance(format!(
                "unsupported instance version {}, expected 1",
                file.version
            )));
        }
        CoverageInstance::new(
            file.n_items,
            file.n_elements,
            file.covers,
            file.values,
            file.labels,
        )
    }
}
