//! JSON file formats: group catalogs, cover descriptions, and the two job
//! descriptions the command line accepts. Schemas for each document live
//! under `schemas/` at the repository root.
//!
//! All formats carry a `version` field; only version 1 exists.

use crate::catalog;
use crate::covers::{BranchPoint, RamifiedCover};
use crate::groups::{build_group, subgroup_generated, FiniteGroup, GroupError, GroupSpec};
use crate::homology::{GModule, HomologyError, ModuleSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid JSON in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("unsupported format version {got} in {path} (expected {FORMAT_VERSION})")]
    Version { path: String, got: u32 },
    #[error("unknown catalog group `{0}`")]
    UnknownGroup(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Reference to a group: by built-in catalog name or as an inline spec.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupRef {
    Catalog(String),
    Inline(GroupSpec),
}

pub fn resolve_group(r: &GroupRef, max_order: usize) -> Result<Arc<FiniteGroup>, IoError> {
    match r {
        GroupRef::Catalog(name) => {
            let g = catalog::builtin()
                .get(name)
                .ok_or_else(|| IoError::UnknownGroup(name.clone()))?;
            if g.order() > max_order {
                return Err(GroupError::SizeCapExceeded { order: g.order(), cap: max_order }.into());
            }
            Ok(Arc::clone(g))
        }
        GroupRef::Inline(spec) => Ok(Arc::new(build_group(spec, max_order)?)),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedGroupSpec {
    pub name: String,
    pub spec: GroupSpec,
}

/// `data/groups/catalog.json`: named groups by constructor spec or
/// explicit table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupCatalogFile {
    pub version: u32,
    pub groups: Vec<NamedGroupSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchPointDto {
    /// e_0 >= e_1 >= ..., each >= 2
    pub filtration: Vec<u64>,
    /// generator indices of the decomposition subgroup
    pub decomposition_generators: Vec<usize>,
}

/// A cover description file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverFile {
    pub version: u32,
    pub characteristic: u64,
    pub group: GroupRef,
    pub quotient_genus: u64,
    pub branch_points: Vec<BranchPointDto>,
}

impl CoverFile {
    pub fn to_cover(&self, max_order: usize) -> Result<RamifiedCover, IoError> {
        let group = resolve_group(&self.group, max_order)?;
        let branch_points = self
            .branch_points
            .iter()
            .map(|b| {
                Ok(BranchPoint {
                    filtration: b.filtration.clone(),
                    decomposition: subgroup_generated(&group, &b.decomposition_generators)?,
                })
            })
            .collect::<Result<_, GroupError>>()?;
        Ok(RamifiedCover {
            p: self.characteristic,
            group,
            quotient_genus: self.quotient_genus,
            branch_points,
        })
    }
}

/// Module description used in homology job files. `Kernel` modules only
/// arise internally, so the file format covers the constructive variants.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpecDto {
    Trivial,
    Regular,
    Permutation { generators: Vec<usize> },
    DirectSum { summands: Vec<ModuleSpecDto> },
}

impl ModuleSpecDto {
    pub fn build(&self, group: &Arc<FiniteGroup>, p: u64) -> Result<GModule, IoError> {
        Ok(GModule::build(group, p, &self.to_spec(group)?)?)
    }

    fn to_spec(&self, group: &Arc<FiniteGroup>) -> Result<ModuleSpec, IoError> {
        Ok(match self {
            ModuleSpecDto::Trivial => ModuleSpec::Trivial,
            ModuleSpecDto::Regular => {
                ModuleSpec::Permutation(subgroup_generated(group, &[])?)
            }
            ModuleSpecDto::Permutation { generators } => {
                ModuleSpec::Permutation(subgroup_generated(group, generators)?)
            }
            ModuleSpecDto::DirectSum { summands } => ModuleSpec::DirectSum(
                summands.iter().map(|s| s.to_spec(group)).collect::<Result<_, _>>()?,
            ),
        })
    }
}

/// Input for the `homology` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomologyJobFile {
    pub version: u32,
    pub p: u64,
    pub group: GroupRef,
    pub module: ModuleSpecDto,
}

/// Input for the `psi-report` command: one generator list per summand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiJobFile {
    pub version: u32,
    pub p: u64,
    pub group: GroupRef,
    pub subgroups: Vec<Vec<usize>>,
}

/// Raw bytes plus their digest, for report provenance.
pub struct LoadedFile {
    pub bytes: Vec<u8>,
    pub digest: String,
}

pub fn read_file(path: &Path) -> Result<LoadedFile, IoError> {
    let bytes = std::fs::read(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    Ok(LoadedFile { bytes, digest })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, IoError> {
    serde_json::from_slice(bytes)
        .map_err(|e| IoError::Parse { path: path.display().to_string(), message: e.to_string() })
}

fn check_version(path: &Path, got: u32) -> Result<(), IoError> {
    if got != FORMAT_VERSION {
        return Err(IoError::Version { path: path.display().to_string(), got });
    }
    Ok(())
}

pub fn load_cover_file(path: &Path) -> Result<(CoverFile, String), IoError> {
    let loaded = read_file(path)?;
    let file: CoverFile = parse_json(path, &loaded.bytes)?;
    check_version(path, file.version)?;
    Ok((file, loaded.digest))
}

pub fn load_catalog_file(path: &Path) -> Result<(GroupCatalogFile, String), IoError> {
    let loaded = read_file(path)?;
    let file: GroupCatalogFile = parse_json(path, &loaded.bytes)?;
    check_version(path, file.version)?;
    Ok((file, loaded.digest))
}

pub fn load_homology_job(path: &Path) -> Result<(HomologyJobFile, String), IoError> {
    let loaded = read_file(path)?;
    let file: HomologyJobFile = parse_json(path, &loaded.bytes)?;
    check_version(path, file.version)?;
    Ok((file, loaded.digest))
}

pub fn load_psi_job(path: &Path) -> Result<(PsiJobFile, String), IoError> {
    let loaded = read_file(path)?;
    let file: PsiJobFile = parse_json(path, &loaded.bytes)?;
    check_version(path, file.version)?;
    Ok((file, loaded.digest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_roundtrip_through_json() {
        let text = r#"{
            "version": 1,
            "characteristic": 2,
            "group": { "catalog": "C2" },
            "quotient_genus": 2,
            "branch_points": [
                { "filtration": [2, 2], "decomposition_generators": [1] }
            ]
        }"#;
        let file: CoverFile = serde_json::from_str(text).unwrap();
        let cover = file.to_cover(64).unwrap();
        assert_eq!(cover.group.order(), 2);
        assert!(cover.validate().is_empty());
    }

    #[test]
    fn inline_group_spec_parses() {
        let text = r#"{
            "version": 1,
            "characteristic": 3,
            "group": { "inline": { "kind": "cyclic", "n": 3 } },
            "quotient_genus": 2,
            "branch_points": []
        }"#;
        let file: CoverFile = serde_json::from_str(text).unwrap();
        assert_eq!(file.to_cover(64).unwrap().group.order(), 3);
    }

    #[test]
    fn unknown_catalog_name_is_an_error() {
        let r = GroupRef::Catalog("no-such-group".into());
        assert!(matches!(resolve_group(&r, 64), Err(IoError::UnknownGroup(_))));
    }

    #[test]
    fn missing_field_is_named_in_the_error() {
        let text = r#"{ "version": 1, "group": { "catalog": "C2" } }"#;
        let err = serde_json::from_str::<CoverFile>(text).unwrap_err();
        assert!(err.to_string().contains("characteristic"));
    }

    #[test]
    fn module_spec_builds() {
        let g = resolve_group(&GroupRef::Catalog("V4".into()), 64).unwrap();
        let dto = ModuleSpecDto::DirectSum {
            summands: vec![
                ModuleSpecDto::Trivial,
                ModuleSpecDto::Permutation { generators: vec![1] },
                ModuleSpecDto::Regular,
            ],
        };
        let m = dto.build(&g, 2).unwrap();
        assert_eq!(m.dim(), 1 + 2 + 4);
    }
}
