use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use symtomo::positivity::CertifyConfig;
use symtomo::quadrature::DiskGrid;
use symtomo::tomogram::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<CertifyConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &str, format: Format) -> Self {
        Self {
            command: command.into(),
            source: None,
            dim: None,
            grid: None,
            certification: None,
            disk: None,
            reference: None,
            tolerance: None,
            out: None,
            format,
        }
    }
}
