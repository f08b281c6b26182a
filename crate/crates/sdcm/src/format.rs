//! JSON files for models and homomorphism descriptors.
//!
//! Series are stored as expressions in the text syntax of
//! [`sdcm_core::parse`]. Order pairs are `[small, large]`; the loader closes
//! them, and the writer emits only covering pairs.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use sdcm_core::{
    parse_series, render, Error as CoreError, HomomorphismDescriptor, LaurentSeries, SdcModel,
    Settings,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    pub id: String,
    pub poincare: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bass: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_bass: Option<String>,
    pub classes: Vec<ClassFile>,
    #[serde(default)]
    pub order: Vec<[String; 2]>,
    pub top: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dualizing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiFile {
    pub name: String,
    pub bass_phi: String,
    pub source: String,
    pub target_name: String,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{field}: {source}")]
    Series { field: String, source: CoreError },
    #[error(transparent)]
    Model(#[from] CoreError),
}

fn series(field: impl FnOnce() -> String, text: &str) -> Result<LaurentSeries, FormatError> {
    parse_series(text).map_err(|source| FormatError::Series {
        field: field(),
        source,
    })
}

impl ModelFile {
    pub fn into_model(self, settings: Settings) -> Result<SdcModel, FormatError> {
        let mut b = SdcModel::builder(self.name, self.top).settings(settings);
        for c in self.classes {
            let p = series(|| format!("class {} poincare", c.id), &c.poincare)?;
            let bass = c
                .bass
                .as_deref()
                .map(|t| series(|| format!("class {} bass", c.id), t))
                .transpose()?;
            b = b.class_with_bass(c.id, p, bass);
        }
        for [small, large] in self.order {
            b = b.order(small, large);
        }
        if let Some(rb) = self.ring_bass {
            b = b.ring_bass(series(|| "ring_bass".into(), &rb)?);
        }
        if let Some(d) = self.dualizing {
            b = b.dualizing(d);
        }
        Ok(b.build()?)
    }

    pub fn from_model(model: &SdcModel) -> Self {
        ModelFile {
            name: model.name().to_string(),
            ring_bass: model.ring_bass().map(render),
            classes: model
                .classes()
                .iter()
                .map(|c| ClassFile {
                    id: c.id.clone(),
                    poincare: render(&c.poincare),
                    bass: c.bass.as_ref().map(render),
                })
                .collect(),
            order: model
                .covers()
                .into_iter()
                .map(|(i, j)| [model.id(i).to_string(), model.id(j).to_string()])
                .collect(),
            top: model.top_id().to_string(),
            dualizing: model.dualizing_id().map(str::to_string),
        }
    }
}

impl PhiFile {
    pub fn into_descriptor(self) -> Result<HomomorphismDescriptor, FormatError> {
        let bass = series(|| "bass_phi".into(), &self.bass_phi)?;
        Ok(HomomorphismDescriptor::new(
            self.name,
            bass,
            self.source,
            self.target_name,
        ))
    }

    pub fn from_descriptor(phi: &HomomorphismDescriptor) -> Self {
        PhiFile {
            name: phi.name.clone(),
            bass_phi: render(&phi.bass_phi),
            source: phi.source.clone(),
            target_name: phi.target_name.clone(),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: shown.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: shown,
        source,
    })
}

pub fn load_model(path: &Path, settings: Settings) -> Result<SdcModel, FormatError> {
    read_json::<ModelFile>(path)?.into_model(settings)
}

pub fn load_phi(path: &Path) -> Result<HomomorphismDescriptor, FormatError> {
    read_json::<PhiFile>(path)?.into_descriptor()
}

/// Pretty JSON with a trailing newline.
pub fn model_json(model: &SdcModel) -> String {
    let mut s = serde_json::to_string_pretty(&ModelFile::from_model(model)).expect("serializable");
    s.push('\n');
    s
}

pub fn phi_json(phi: &HomomorphismDescriptor) -> String {
    let mut s = serde_json::to_string_pretty(&PhiFile::from_descriptor(phi)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_model(text: &str, settings: Settings) -> Result<SdcModel, FormatError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|source| FormatError::Json {
        path: "<input>".into(),
        source,
    })?;
    file.into_model(settings)
}
