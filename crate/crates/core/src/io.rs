//! File formats read by the command line.
//!
//! A category file is either an explicit presentation
//! (`{"objects": .., "morphisms": .., "composition": ..}`) or a poset
//! (`{"poset": {"elements": .., "leq": [[a, b], ..]}}`). Functor, displayed
//! category and comprehension category files refer to categories either by
//! path (relative to the referring file) or inline.
//!
//! A path that does not exist but whose stem names a built-in fixture
//! (`div6`, `div6.json`, ...) resolves to that fixture.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::compcat::{CompCat, CompCatBundle};
use crate::displayed::{DispCat, DispPresentation};
use crate::fincat::{validate_category, CategoryError, FinCat, FinFunctor, Presentation};
use crate::fixtures;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read `{path}`: {message}")]
    Read { path: String, message: String },
    #[error("`{path}`: malformed input: {message}")]
    Parse { path: String, message: String },
    #[error("`{path}`: {message}")]
    Invalid { path: String, message: String },
}

impl InputError {
    fn invalid(path: &str, e: impl ToString) -> Self {
        InputError::Invalid { path: path.into(), message: e.to_string() }
    }
}

#[derive(Deserialize)]
struct PosetDecl {
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CategoryFile {
    Poset { poset: PosetDecl },
    Explicit(Presentation),
}

impl CategoryFile {
    fn into_presentation(self) -> Presentation {
        match self {
            CategoryFile::Poset { poset } => Presentation::poset(&poset.elements, &poset.leq),
            CategoryFile::Explicit(p) => p,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CategoryRef {
    Path(String),
    Inline(CategoryFile),
}

#[derive(Deserialize)]
struct FunctorFile {
    source: CategoryRef,
    target: CategoryRef,
    object_map: HashMap<String, String>,
    #[serde(default)]
    morphism_map: HashMap<String, String>,
}

#[derive(Deserialize)]
struct DispFile {
    base: CategoryRef,
    #[serde(flatten)]
    types: DispPresentation,
}

fn fixture_for(path: &Path) -> Option<Presentation> {
    let stem = path.file_stem()?.to_str()?;
    fixtures::named(stem)
}

/// Reads a JSON file, or the built-in fixture it names.
fn read_json(path: &Path) -> Result<Result<Value, Presentation>, InputError> {
    let shown = path.display().to_string();
    match std::fs::read_to_string(path) {
        Ok(text) => serde_json::from_str(&text)
            .map(Ok)
            .map_err(|e| InputError::Parse { path: shown, message: e.to_string() }),
        Err(e) => fixture_for(path).map(Err).ok_or(InputError::Read { path: shown, message: e.to_string() }),
    }
}

fn parse<T: serde::de::DeserializeOwned>(path: &str, v: Value) -> Result<T, InputError> {
    serde_json::from_value(v).map_err(|e| InputError::Parse { path: path.into(), message: e.to_string() })
}

/// Parses a category file without validating the laws.
pub fn read_presentation(path: &Path) -> Result<Presentation, InputError> {
    match read_json(path)? {
        Ok(v) => Ok(parse::<CategoryFile>(&path.display().to_string(), v)?.into_presentation()),
        Err(p) => Ok(p),
    }
}

/// Parses a category from an in-memory JSON string.
pub fn presentation_from_str(text: &str) -> Result<Presentation, InputError> {
    let v: Value = serde_json::from_str(text).map_err(|e| InputError::Parse { path: "<input>".into(), message: e.to_string() })?;
    Ok(parse::<CategoryFile>("<input>", v)?.into_presentation())
}

/// Reads and validates a category file.
pub fn load_category(path: &Path) -> Result<Arc<FinCat>, InputError> {
    let p = read_presentation(path)?;
    validate(&path.display().to_string(), &p)
}

fn validate(path: &str, p: &Presentation) -> Result<Arc<FinCat>, InputError> {
    validate_category(p).map(Arc::new).map_err(|e: CategoryError| InputError::invalid(path, e))
}

fn relative(to: &Path, name: &str) -> PathBuf {
    let p = Path::new(name);
    match to.parent() {
        Some(dir) if p.is_relative() && dir.join(p).exists() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

fn resolve(from: &Path, r: CategoryRef) -> Result<Arc<FinCat>, InputError> {
    match r {
        CategoryRef::Path(name) => load_category(&relative(from, &name)),
        CategoryRef::Inline(c) => validate(&from.display().to_string(), &c.into_presentation()),
    }
}

/// Reads a functor file: source, target, and name maps. Identities, and
/// morphisms into singleton hom-sets, may be left out of `morphism_map`.
pub fn load_functor(path: &Path) -> Result<FinFunctor, InputError> {
    let shown = path.display().to_string();
    let v = read_json(path)?.map_err(|_| InputError::invalid(&shown, "a category is not a functor file"))?;
    let f: FunctorFile = parse(&shown, v)?;
    let source = resolve(path, f.source)?;
    let target = resolve(path, f.target)?;
    FinFunctor::from_names(source, target, &f.object_map, &f.morphism_map).map_err(|e| InputError::invalid(&shown, e))
}

/// Reads a displayed category: a `base` plus `dobjects`, `dmorphisms`,
/// `dcomposition`.
pub fn load_displayed(path: &Path) -> Result<Arc<DispCat>, InputError> {
    let shown = path.display().to_string();
    let v = read_json(path)?.map_err(|_| InputError::invalid(&shown, "a category is not a displayed category file"))?;
    let d: DispFile = parse(&shown, v)?;
    let base = resolve(path, d.base)?;
    DispCat::from_presentation(base, &d.types).map(Arc::new).map_err(|e| InputError::invalid(&shown, e))
}

/// What a model file turned out to contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSource {
    /// A comprehension category bundle.
    Bundle,
    /// A plain category, read as its self-indexing.
    SelfIndexing,
}

/// Reads either a comprehension category bundle or a category; a category
/// is turned into its self-indexing.
pub fn load_compcat(path: &Path) -> Result<(Arc<CompCat>, ModelSource), InputError> {
    let shown = path.display().to_string();
    let v = read_json(path)?;
    if let Ok(v) = &v {
        if v.get("comprehension").is_some() {
            let b: CompCatBundle = parse(&shown, v.clone())?;
            let k = CompCat::from_bundle(&b).map_err(|e| InputError::invalid(&shown, e))?;
            return Ok((Arc::new(k), ModelSource::Bundle));
        }
    }
    let p = match v {
        Ok(v) => parse::<CategoryFile>(&shown, v)?.into_presentation(),
        Err(p) => p,
    };
    let c = validate(&shown, &p)?;
    let k = CompCat::self_indexing(&c).map_err(|e| InputError::invalid(&shown, e))?;
    Ok((Arc::new(k), ModelSource::SelfIndexing))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_and_explicit_forms_agree() {
        let a = presentation_from_str(r#"{"poset": {"elements": ["0", "1"], "leq": [["0", "1"]]}}"#).unwrap();
        let b = presentation_from_str(
            r#"{"objects": ["0", "1"], "morphisms": [{"name": "le_0_1", "src": "0", "dst": "1"}]}"#,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixture_names_resolve() {
        let c = load_category(Path::new("no/such/dir/div6.json")).unwrap();
        assert_eq!(c.num_objects(), 4);
        assert!(matches!(load_category(Path::new("no/such/file.json")), Err(InputError::Read { .. })));
    }

    #[test]
    fn functor_with_inline_categories() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        std::fs::write(
            &path,
            r#"{"source": {"poset": {"elements": ["a"]}}, "target": "two.json", "object_map": {"a": "1"}}"#,
        )
        .unwrap();
        let f = load_functor(&path).unwrap();
        assert_eq!(f.target().num_objects(), 2);
    }
}
