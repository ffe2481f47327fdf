//! JSON interchange for braces and the on-disk catalog.
//!
//! Documents are written in a canonical layout (sorted keys, one table row
//! per line, integers only), so the SHA-256 of a file identifies its
//! content across runs and machines.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::brace::{BraceError, BraceReport, SkewBrace};
use crate::enumeration::BraceCorpus;

pub const FORMAT_VERSION: &str = "1";
pub const INDEX_FILE: &str = "index.json";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("unsupported document: {0}")]
    Format(String),
    #[error("tables do not form a skew brace: {0}")]
    Invalid(#[from] BraceError),
    #[error("metadata field `{key}` says {recorded} but recomputation gives {computed}")]
    MetadataMismatch {
        key: String,
        recorded: Value,
        computed: Value,
    },
    #[error("{path}: content hash {actual} does not match the index ({expected})")]
    HashMismatch {
        path: String,
        expected: String,
        actual: String,
    },
}

impl CatalogError {
    /// True for failures of the mathematics rather than of the file.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            CatalogError::Invalid(_) | CatalogError::MetadataMismatch { .. }
        )
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CatalogError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// A brace as two row-major Cayley tables plus free-form metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraceDocument {
    pub add_table: Vec<Vec<usize>>,
    pub format_version: String,
    #[serde(default)]
    pub metadata: BTreeMap<String, Value>,
    pub mul_table: Vec<Vec<usize>>,
    pub order: usize,
}

/// Metadata keys checked against recomputation when present.
const CHECKED_KEYS: &[&str] = &[
    "order",
    "two_sided",
    "classical",
    "trivial",
    "add_solv_class",
    "mul_solv_class",
    "add_nilp_class",
    "mul_nilp_class",
    "star_series_lengths",
    "ideal_count",
    "is_simple",
];

impl BraceDocument {
    pub fn from_brace(brace: &SkewBrace) -> Self {
        BraceDocument {
            add_table: brace.add_rows(),
            format_version: FORMAT_VERSION.to_string(),
            metadata: BTreeMap::new(),
            mul_table: brace.mul_rows(),
            order: brace.order(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// Records the structural flags `two_sided`, `classical` and `trivial`.
    pub fn with_flags(self, brace: &SkewBrace) -> Self {
        self.with_meta("two_sided", brace.is_two_sided())
            .with_meta("classical", brace.is_classical())
            .with_meta("trivial", brace.is_trivial())
    }

    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        serde_json::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CatalogError> {
        let text = fs::read_to_string(path).map_err(|e| CatalogError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CatalogError> {
        let text = self.to_canonical()?;
        fs::write(path, text).map_err(|e| CatalogError::io(path, e))
    }

    /// Rebuilds the brace from the tables, then checks every recognised
    /// metadata flag against the recomputed value.
    pub fn validate(&self) -> Result<SkewBrace, CatalogError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CatalogError::Format(format!(
                "format_version {:?}, expected {FORMAT_VERSION:?}",
                self.format_version
            )));
        }
        if self.add_table.len() != self.order || self.mul_table.len() != self.order {
            return Err(CatalogError::Format(format!(
                "order {} but tables have {} and {} rows",
                self.order,
                self.add_table.len(),
                self.mul_table.len()
            )));
        }
        let brace = SkewBrace::from_tables(&self.add_table, &self.mul_table)?;
        self.check_metadata(&brace)?;
        Ok(brace)
    }

    fn check_metadata(&self, brace: &SkewBrace) -> Result<(), CatalogError> {
        let present: Vec<&str> = CHECKED_KEYS
            .iter()
            .copied()
            .filter(|k| self.metadata.contains_key(*k))
            .collect();
        if present.is_empty() {
            return Ok(());
        }
        let report = brace.report();
        for key in present {
            let computed = report_field(&report, key);
            let recorded = &self.metadata[key];
            if recorded != &computed {
                return Err(CatalogError::MetadataMismatch {
                    key: key.to_string(),
                    recorded: recorded.clone(),
                    computed,
                });
            }
        }
        Ok(())
    }

    /// Canonical text: sorted keys, two-space indent, one table row per
    /// line, trailing newline. Floats are rejected.
    pub fn to_canonical(&self) -> Result<String, CatalogError> {
        if let Some(path) = float_path(&Value::Object(
            self.metadata.clone().into_iter().collect(),
        )) {
            return Err(CatalogError::Format(format!("float in metadata at {path}")));
        }
        let table = |rows: &[Vec<usize>]| {
            if rows.is_empty() {
                return "[]".to_string();
            }
            let lines: Vec<String> = rows
                .iter()
                .map(|r| format!("    {}", serde_json::to_string(r).expect("integers serialize")))
                .collect();
            format!("[\n{}\n  ]", lines.join(",\n"))
        };
        let metadata = if self.metadata.is_empty() {
            "{}".to_string()
        } else {
            let pretty = serde_json::to_string_pretty(&self.metadata).expect("json values serialize");
            pretty.replace('\n', "\n  ")
        };
        Ok(format!(
            "{{\n  \"add_table\": {},\n  \"format_version\": {},\n  \"metadata\": {},\n  \"mul_table\": {},\n  \"order\": {}\n}}\n",
            table(&self.add_table),
            serde_json::to_string(&self.format_version).expect("strings serialize"),
            metadata,
            table(&self.mul_table),
            self.order
        ))
    }
}

fn report_field(report: &BraceReport, key: &str) -> Value {
    let opt = |v: Option<usize>| v.map_or(Value::Null, Value::from);
    match key {
        "order" => report.order.into(),
        "two_sided" => report.is_two_sided.into(),
        "classical" => report.is_classical.into(),
        "trivial" => report.is_trivial.into(),
        "add_solv_class" => opt(report.add_solv_class),
        "mul_solv_class" => opt(report.mul_solv_class),
        "add_nilp_class" => opt(report.add_nilp_class),
        "mul_nilp_class" => opt(report.mul_nilp_class),
        "star_series_lengths" => report.star_series_lengths.clone().into(),
        "ideal_count" => opt(report.ideal_count),
        "is_simple" => report.is_simple.map_or(Value::Null, Value::from),
        _ => Value::Null,
    }
}

fn float_path(v: &Value) -> Option<String> {
    match v {
        Value::Number(n) if n.is_f64() => Some(String::new()),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, x)| float_path(x).map(|p| format!("[{i}]{p}"))),
        Value::Object(map) => map
            .iter()
            .find_map(|(k, x)| float_path(x).map(|p| format!(".{k}{p}"))),
        _ => None,
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub hash: String,
    pub id: String,
    pub order: usize,
    /// Relative to the catalog directory.
    pub path: String,
    pub source: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogIndex {
    /// Number of entries per order.
    pub counts: BTreeMap<usize, usize>,
    pub entries: Vec<IndexEntry>,
    pub format_version: String,
}

impl CatalogIndex {
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("index serializes");
        s.push('\n');
        s
    }
}

/// Writes one document per corpus member under `order-N/` and the index.
pub fn write_corpus(dir: &Path, corpora: &[BraceCorpus]) -> Result<CatalogIndex, CatalogError> {
    let mut index = CatalogIndex {
        format_version: FORMAT_VERSION.to_string(),
        ..CatalogIndex::default()
    };
    for corpus in corpora {
        let sub = format!("order-{}", corpus.order);
        let sub_dir = dir.join(&sub);
        fs::create_dir_all(&sub_dir).map_err(|e| CatalogError::io(&sub_dir, e))?;
        let source = serde_json::to_value(corpus.provenance)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        for entry in &corpus.entries {
            let id = entry.id();
            let doc = BraceDocument::from_brace(&entry.brace)
                .with_meta("additive_group", entry.group_name.clone())
                .with_meta("source", source.clone())
                .with_flags(&entry.brace);
            let text = doc.to_canonical()?;
            let rel = format!("{sub}/{id}.json");
            let path = dir.join(&rel);
            fs::write(&path, &text).map_err(|e| CatalogError::io(&path, e))?;
            index.entries.push(IndexEntry {
                hash: sha256_hex(text.as_bytes()),
                id,
                order: corpus.order,
                path: rel,
                source: source.clone(),
            });
        }
        index.counts.insert(corpus.order, corpus.entries.len());
    }
    let path = dir.join(INDEX_FILE);
    fs::write(&path, index.to_canonical()).map_err(|e| CatalogError::io(&path, e))?;
    Ok(index)
}

/// A catalog read back from disk.
#[derive(Debug, Default)]
pub struct LoadedCatalog {
    pub braces: Vec<(IndexEntry, SkewBrace)>,
    /// Entries that failed hashing, parsing or validation.
    pub rejected: Vec<(IndexEntry, CatalogError)>,
}

/// Reads `index.json` and every document it lists. A directory without an
/// index is an empty catalog.
pub fn load_catalog(dir: &Path) -> Result<LoadedCatalog, CatalogError> {
    if !dir.is_dir() {
        return Err(CatalogError::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "catalog directory not found"),
        ));
    }
    let index_path = dir.join(INDEX_FILE);
    if !index_path.exists() {
        return Ok(LoadedCatalog::default());
    }
    let text = fs::read_to_string(&index_path).map_err(|e| CatalogError::io(&index_path, e))?;
    let index: CatalogIndex =
        serde_json::from_str(&text).map_err(|e| CatalogError::Parse(format!("{INDEX_FILE}: {e}")))?;
    let mut out = LoadedCatalog::default();
    for entry in index.entries {
        match load_entry(dir, &entry) {
            Ok(b) => out.braces.push((entry, b)),
            Err(e) => out.rejected.push((entry, e)),
        }
    }
    Ok(out)
}

fn load_entry(dir: &Path, entry: &IndexEntry) -> Result<SkewBrace, CatalogError> {
    let path = dir.join(&entry.path);
    let bytes = fs::read(&path).map_err(|e| CatalogError::io(&path, e))?;
    let actual = sha256_hex(&bytes);
    if actual != entry.hash {
        return Err(CatalogError::HashMismatch {
            path: entry.path.clone(),
            expected: entry.hash.clone(),
            actual,
        });
    }
    let text = String::from_utf8(bytes).map_err(|e| CatalogError::Parse(e.to_string()))?;
    BraceDocument::parse(&text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::example2;

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let b = example2(3, 2).unwrap();
        let doc = BraceDocument::from_brace(&b)
            .with_meta("construction", "example2")
            .with_meta("parameters", serde_json::json!({"n": 3, "mod": 2}))
            .with_flags(&b);
        let text = doc.to_canonical().unwrap();
        let again = BraceDocument::parse(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_canonical().unwrap(), text);
        assert_eq!(again.validate().unwrap(), b);
        assert!(text.contains("\n    [0,1,2,3,4,5,6,7],\n"));
    }

    #[test]
    fn metadata_is_rechecked() {
        let b = example2(3, 2).unwrap();
        let doc = BraceDocument::from_brace(&b).with_meta("classical", false);
        match doc.validate() {
            Err(CatalogError::MetadataMismatch { key, .. }) => assert_eq!(key, "classical"),
            other => panic!("{other:?}"),
        }
        let doc = BraceDocument::from_brace(&b).with_meta("note", "anything");
        assert!(doc.validate().is_ok());
    }

    #[test]
    fn floats_and_bad_versions_are_rejected() {
        let b = example2(2, 2).unwrap();
        let doc = BraceDocument::from_brace(&b).with_meta("x", 0.5);
        assert!(matches!(doc.to_canonical(), Err(CatalogError::Format(_))));
        let mut doc = BraceDocument::from_brace(&b);
        doc.format_version = "2".into();
        assert!(matches!(doc.validate(), Err(CatalogError::Format(_))));
        assert!(matches!(
            BraceDocument::parse("{\"order\": 1"),
            Err(CatalogError::Parse(_))
        ));
    }

    #[test]
    fn hash_is_hex_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
