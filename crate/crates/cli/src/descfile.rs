//! Splitting description files.
//!
//! A description is a TOML document selecting either explicit parts (matrix
//! files in Matrix Market format) or a built-in recipe. Paths are resolved
//! relative to the description file. See the README for the full schema.
//!
//! ```toml
//! kind = "multisplit"            # or "pss"
//!
//! # recipe form (multisplit only):
//! # recipe = "hadjidimos"
//! # rho = [1.0, 1.0]
//! # weights = [0.5, 0.5]        # optional, uniform when omitted
//!
//! [[part]]                      # explicit multisplit part
//! m_path = "m1.mtx"
//! n_path = "n1.mtx"
//! weight = 0.5                  # scalar weight, or:
//! # weight_diag = [0.6, 0.4]    # diagonal entries of E_k
//!
//! # [[part]]                    # pss part
//! # split = "ts-upper"          # ts-upper | ts-lower | bts | n-file
//! # block_sizes = [2, 2]        # bts only
//! # n_path = "n.mtx"            # n-file only
//! # alpha = 2.0
//! # weight = 1.0
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use multisplit_core::linalg::market::read_cmatrix;
use multisplit_core::splittings::{
    bts_split, hadjidimos_multisplitting, make_multisplitting, ps_split, ts_split, TrianglePart,
};
use multisplit_core::{CMatrix, Multisplitting, PssSplitting};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescFile {
    pub kind: String,
    pub recipe: Option<String>,
    pub rho: Option<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub part: Vec<DescPart>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescPart {
    pub m_path: Option<String>,
    pub n_path: Option<String>,
    pub weight: Option<f64>,
    pub weight_diag: Option<Vec<f64>>,
    pub split: Option<String>,
    pub block_sizes: Option<Vec<usize>>,
    pub alpha: Option<f64>,
}

/// A loaded splitting recipe, ready to drive an engine.
pub enum LoadedSplitting {
    Multi(Multisplitting),
    Pss {
        parts: Vec<PssSplitting>,
        weights: Vec<f64>,
    },
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn load_splitting(desc_path: &Path, a: &CMatrix) -> Result<LoadedSplitting, CliError> {
    let text = std::fs::read_to_string(desc_path)
        .map_err(|e| CliError::Io(desc_path.display().to_string(), e.to_string()))?;
    let desc: DescFile = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", desc_path.display())))?;
    let base = desc_path.parent().unwrap_or(Path::new("."));

    match desc.kind.as_str() {
        "multisplit" => load_multisplit(&desc, base, a).map(LoadedSplitting::Multi),
        "pss" => load_pss(&desc, base, a),
        other => Err(CliError::Config(format!(
            "unknown splitting kind `{other}` (expected `multisplit` or `pss`)"
        ))),
    }
}

fn load_multisplit(
    desc: &DescFile,
    base: &Path,
    a: &CMatrix,
) -> Result<Multisplitting, CliError> {
    if let Some(recipe) = &desc.recipe {
        return match recipe.as_str() {
            "hadjidimos" => {
                let rho = desc.rho.as_deref().ok_or_else(|| {
                    CliError::Config("hadjidimos recipe needs a `rho` list".into())
                })?;
                let (ms, _) = hadjidimos_multisplitting(a, rho, desc.weights.as_deref())?;
                Ok(ms)
            }
            other => Err(CliError::Config(format!("unknown recipe `{other}`"))),
        };
    }
    if desc.part.is_empty() {
        return Err(CliError::Config(
            "multisplit description needs a recipe or at least one [[part]]".into(),
        ));
    }
    let n = a.dim();
    let mut parts = Vec::with_capacity(desc.part.len());
    let mut weights = Vec::with_capacity(desc.part.len());
    for (k, p) in desc.part.iter().enumerate() {
        let m_path = p
            .m_path
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("part {k}: missing m_path")))?;
        let n_path = p
            .n_path
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("part {k}: missing n_path")))?;
        let mk = read_cmatrix(resolve(base, m_path))?;
        let nk = read_cmatrix(resolve(base, n_path))?;
        parts.push((mk, nk));
        weights.push(match (&p.weight, &p.weight_diag) {
            (Some(w), None) => vec![*w; n],
            (None, Some(d)) => d.clone(),
            _ => {
                return Err(CliError::Config(format!(
                    "part {k}: give exactly one of weight / weight_diag"
                )))
            }
        });
    }
    Ok(make_multisplitting(a.clone(), parts, weights)?)
}

fn load_pss(desc: &DescFile, base: &Path, a: &CMatrix) -> Result<LoadedSplitting, CliError> {
    if desc.part.is_empty() {
        return Err(CliError::Config(
            "pss description needs at least one [[part]]".into(),
        ));
    }
    let mut parts = Vec::with_capacity(desc.part.len());
    let mut weights = Vec::with_capacity(desc.part.len());
    for (k, p) in desc.part.iter().enumerate() {
        let alpha = p
            .alpha
            .ok_or_else(|| CliError::Config(format!("part {k}: missing alpha")))?;
        let split = p.split.as_deref().unwrap_or("ts-upper");
        let pss = match split {
            "ts-upper" => ts_split(a, TrianglePart::StrictUpper, alpha)?,
            "ts-lower" => ts_split(a, TrianglePart::StrictLower, alpha)?,
            "bts" => {
                let sizes = p.block_sizes.as_deref().ok_or_else(|| {
                    CliError::Config(format!("part {k}: bts split needs block_sizes"))
                })?;
                bts_split(a, sizes, alpha)?
            }
            "n-file" => {
                let n_path = p.n_path.as_ref().ok_or_else(|| {
                    CliError::Config(format!("part {k}: n-file split needs n_path"))
                })?;
                let nk = read_cmatrix(resolve(base, n_path))?;
                ps_split(a, &nk, alpha)?
            }
            other => {
                return Err(CliError::Config(format!(
                    "part {k}: unknown split `{other}`"
                )))
            }
        };
        parts.push(pss);
        weights.push(
            p.weight
                .ok_or_else(|| CliError::Config(format!("part {k}: missing weight")))?,
        );
    }
    Ok(LoadedSplitting::Pss { parts, weights })
}
