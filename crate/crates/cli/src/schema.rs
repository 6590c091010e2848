//! Versioned JSON input documents and their conversion into library types.

use std::collections::BTreeMap;
use std::path::Path;

use ample::coarse::{CoarseWindowFamily, FiniteCoarseSpace, RawCoarseSpace};
use ample::dr::{Edge, KGraph, RawKGraph};
use ample::gpd::FiniteGroupoid;
use ample::grp::{ChainLevel, Element, FiniteGroup, GroupHandle, GroupKind, QuotientChain};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKindDoc {
    Free,
    FreeAbelian,
    Finite,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub schema_version: u32,
    pub kind: GroupKindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Cayley table of a finite group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    /// Generating elements of a finite group; all non-identity elements when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDoc {
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    pub gen_images: Vec<usize>,
    #[serde(default)]
    pub factor_map: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub schema_version: u32,
    pub base: GroupDoc,
    #[serde(default)]
    pub assumed_faithful: bool,
    pub levels: Vec<LevelDoc>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    #[allow(dead_code)] // checked on the raw value before deserializing
    pub schema_version: u32,
    /// Arrow ids of the units.
    pub units: Vec<usize>,
    /// Number of arrows.
    pub arrows: usize,
    pub s: Vec<usize>,
    pub r: Vec<usize>,
    pub inv: Vec<usize>,
    /// `[g, h, gh]` for every composable pair.
    pub comp: Vec<[usize; 3]>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SupportDoc {
    pub gamma: String,
    pub domain: Vec<usize>,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PactionDoc {
    pub schema_version: u32,
    pub group: GroupDoc,
    pub points: usize,
    pub support: Vec<SupportDoc>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[allow(dead_code)] // checked on the raw value before deserializing
    pub schema_version: u32,
    pub vertices: usize,
    #[serde(default)]
    pub rank: Option<usize>,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub squares: Vec<[usize; 4]>,
    #[serde(default)]
    pub edge_labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowsDoc {
    pub spaces: Vec<RawCoarseSpace>,
    /// `inclusions[i][x]` is the image of point `x` of window `i` in window `i + 1`.
    pub inclusions: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoarseDoc {
    #[allow(dead_code)] // checked on the raw value before deserializing
    pub schema_version: u32,
    pub points: usize,
    pub generators: Vec<Vec<[usize; 2]>>,
    #[serde(default)]
    pub windows: Option<WindowsDoc>,
}

/// A map `X → Γ` listed point by point as words.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    #[allow(dead_code)] // checked on the raw value before deserializing
    pub schema_version: u32,
    pub group: GroupDoc,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BudgetDoc {
    pub depth: Option<usize>,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub search: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[allow(dead_code)] // checked on the raw value before deserializing
    pub schema_version: u32,
    #[serde(default)]
    pub budgets: BudgetDoc,
}

fn input_error(path: &str, pointer: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input {
        file: path.to_string(),
        pointer: pointer.to_string(),
        message: msg.to_string(),
    }
}

/// One loaded input, kept canonical for digests and replay.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InputRecord {
    pub path: String,
    pub digest: String,
    pub document: Value,
}

/// Compact JSON with sorted keys.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Reads input documents from disk or, when replaying, from the copies
/// embedded in a report.
pub struct Loader {
    embedded: Option<BTreeMap<String, Value>>,
    pub records: Vec<InputRecord>,
}

impl Loader {
    pub fn disk() -> Self {
        Loader {
            embedded: None,
            records: Vec::new(),
        }
    }

    pub fn embedded(inputs: &[InputRecord]) -> Self {
        Loader {
            embedded: Some(
                inputs
                    .iter()
                    .map(|r| (r.path.clone(), r.document.clone()))
                    .collect(),
            ),
            records: Vec::new(),
        }
    }

    pub fn raw(&mut self, path: &str) -> Result<Value, CliError> {
        let value = match &self.embedded {
            Some(docs) => docs
                .get(path)
                .cloned()
                .ok_or_else(|| input_error(path, "", "not embedded in the report"))?,
            None => {
                let text = std::fs::read_to_string(Path::new(path))
                    .map_err(|e| input_error(path, "", e))?;
                serde_json::from_str(&text).map_err(|e| input_error(path, "", e))?
            }
        };
        self.records.push(InputRecord {
            path: path.to_string(),
            digest: sha256_hex(canonical(&value).as_bytes()),
            document: value.clone(),
        });
        Ok(value)
    }

    pub fn load<T: DeserializeOwned>(&mut self, path: &str) -> Result<T, CliError> {
        let value = self.raw(path)?;
        check_version(path, &value)?;
        from_value(path, value)
    }

    /// Digest over the canonical forms of all inputs, in load order.
    pub fn digest(&self) -> String {
        let joined: Vec<String> = self
            .records
            .iter()
            .map(|r| canonical(&r.document))
            .collect();
        sha256_hex(joined.join("\n").as_bytes())
    }
}

fn check_version(path: &str, value: &Value) -> Result<(), CliError> {
    match value.get("schema_version").and_then(Value::as_u64) {
        Some(v) if v == u64::from(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(input_error(
            path,
            "/schema_version",
            format!("unsupported schema version {v}, expected {SCHEMA_VERSION}"),
        )),
        None => Err(input_error(
            path,
            "/schema_version",
            "missing or not an integer",
        )),
    }
}

/// Deserializes with a JSON pointer to the offending node on failure.
pub fn from_value<T: DeserializeOwned>(path: &str, value: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{key}")),
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        input_error(path, &pointer, e.inner())
    })
}

pub fn read_config(path: &str) -> Result<ConfigDoc, CliError> {
    let mut loader = Loader::disk();
    loader.load(path)
}

impl GroupDoc {
    pub fn build(&self, file: &str, at: &str) -> Result<GroupHandle, CliError> {
        let err = |field: &str, msg: &dyn std::fmt::Display| {
            input_error(file, &format!("{at}/{field}"), msg)
        };
        if self.schema_version != SCHEMA_VERSION {
            return Err(err(
                "schema_version",
                &format!("unsupported schema version {}", self.schema_version),
            ));
        }
        let kind = match self.kind {
            GroupKindDoc::Free | GroupKindDoc::FreeAbelian => {
                if self.table.is_some() || self.generators.is_some() {
                    return Err(err("table", &"only finite groups carry a table"));
                }
                let rank = self
                    .rank
                    .ok_or_else(|| err("rank", &"required for free groups"))?;
                if matches!(self.kind, GroupKindDoc::Free) {
                    GroupKind::Free { rank }
                } else {
                    GroupKind::FreeAbelian { rank }
                }
            }
            GroupKindDoc::Finite => {
                let table = self
                    .table
                    .clone()
                    .ok_or_else(|| err("table", &"required for finite groups"))?;
                let g = FiniteGroup::from_table(table, self.generators.clone())
                    .map_err(|e| err("table", &e))?;
                if let Some(r) = self.rank {
                    if r != g.generators().len() {
                        return Err(err(
                            "rank",
                            &format!("{} generators, rank says {r}", g.generators().len()),
                        ));
                    }
                }
                GroupKind::Finite(g)
            }
        };
        GroupHandle::new(kind, self.labels.clone()).map_err(|e| err("labels", &e))
    }

    pub fn from_finite(g: &FiniteGroup, labels: Option<Vec<String>>) -> Self {
        GroupDoc {
            schema_version: SCHEMA_VERSION,
            kind: GroupKindDoc::Finite,
            rank: None,
            table: Some(g.table().to_vec()),
            generators: Some(g.generators().to_vec()),
            labels,
        }
    }

    pub fn from_handle(g: &GroupHandle) -> Self {
        let labels = Some(g.labels().to_vec());
        match g.kind() {
            GroupKind::Free { rank } | GroupKind::FreeAbelian { rank } => GroupDoc {
                schema_version: SCHEMA_VERSION,
                kind: if matches!(g.kind(), GroupKind::Free { .. }) {
                    GroupKindDoc::Free
                } else {
                    GroupKindDoc::FreeAbelian
                },
                rank: Some(*rank),
                table: None,
                generators: None,
                labels,
            },
            GroupKind::Finite(f) => GroupDoc::from_finite(f, labels),
            GroupKind::Chain(_) => unreachable!("chains are exported level by level"),
        }
    }
}

/// Parses point-indexed words into elements.
pub fn elements(
    group: &GroupHandle,
    words: &[String],
    file: &str,
    at: &str,
) -> Result<Vec<Element>, CliError> {
    words
        .iter()
        .enumerate()
        .map(|(i, s)| {
            group
                .parse_word(s)
                .and_then(|w| group.canonical(&w))
                .map_err(|e| input_error(file, &format!("{at}/{i}"), e))
        })
        .collect()
}

impl ChainDoc {
    /// Shapes are input errors; failed homomorphism or coherence checks are
    /// returned separately so they can be reported as a failed validation.
    pub fn build(&self, file: &str) -> Result<Result<QuotientChain, String>, CliError> {
        let base = self.base.build(file, "/base")?;
        let mut levels = Vec::new();
        for (k, l) in self.levels.iter().enumerate() {
            let group = match FiniteGroup::from_table(l.table.clone(), l.generators.clone()) {
                Ok(g) => g,
                Err(e) => return Ok(Err(format!("level {k}: {e}"))),
            };
            levels.push(ChainLevel {
                group,
                gen_images: l.gen_images.clone(),
                factor_map: l.factor_map.clone(),
            });
        }
        let chain = QuotientChain::from_parts_unchecked(base, levels, self.assumed_faithful)
            .map_err(|e| input_error(file, "/levels", e))?;
        Ok(QuotientChain::new(
            chain.base().clone(),
            chain.levels().to_vec(),
            self.assumed_faithful,
        )
        .map_err(|e| e.to_string()))
    }

    pub fn from_chain(chain: &QuotientChain) -> Self {
        ChainDoc {
            schema_version: SCHEMA_VERSION,
            base: GroupDoc::from_handle(chain.base()),
            assumed_faithful: chain.assumed_faithful,
            levels: chain
                .levels()
                .iter()
                .map(|l| LevelDoc {
                    table: l.group.table().to_vec(),
                    generators: Some(l.group.generators().to_vec()),
                    gen_images: l.gen_images.clone(),
                    factor_map: l.factor_map.clone(),
                })
                .collect(),
        }
    }
}

impl GroupoidDoc {
    pub fn build(&self) -> Result<FiniteGroupoid, ample::gpd::GroupoidError> {
        let comp: Vec<_> = self.comp.iter().map(|c| (c[0], c[1], c[2])).collect();
        let g = FiniteGroupoid::from_tables(
            self.arrows,
            self.units.clone(),
            self.s.clone(),
            self.r.clone(),
            self.inv.clone(),
            &comp,
        )?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }
}

impl PactionDoc {
    pub fn raw(
        &self,
        file: &str,
    ) -> Result<(GroupHandle, Vec<(ample::grp::Word, ample::pact::RawMap)>), CliError> {
        let group = self.group.build(file, "/group")?;
        let mut raw = Vec::new();
        for (i, e) in self.support.iter().enumerate() {
            let w = group
                .parse_word(&e.gamma)
                .map_err(|err| input_error(file, &format!("/support/{i}/gamma"), err))?;
            if e.domain.len() != e.map.len() {
                return Err(input_error(
                    file,
                    &format!("/support/{i}/map"),
                    format!("{} images for a domain of {}", e.map.len(), e.domain.len()),
                ));
            }
            raw.push((
                w,
                e.domain
                    .iter()
                    .copied()
                    .zip(e.map.iter().copied())
                    .collect(),
            ));
        }
        Ok((group, raw))
    }

    pub fn from_spec(spec: &ample::pact::PartialActionSpec) -> Self {
        PactionDoc {
            schema_version: SCHEMA_VERSION,
            group: GroupDoc::from_handle(spec.group()),
            points: spec.points(),
            support: spec
                .entries()
                .iter()
                .map(|e| SupportDoc {
                    gamma: spec.group().format_word(&e.word),
                    domain: e.map.keys().copied().collect(),
                    map: e.map.values().copied().collect(),
                })
                .collect(),
        }
    }
}

impl GraphDoc {
    pub fn build(&self) -> Result<KGraph, ample::dr::DrError> {
        KGraph::validate(RawKGraph {
            vertices: self.vertices,
            rank: self.rank.unwrap_or(1),
            edges: self.edges.clone(),
            squares: self.squares.clone(),
            edge_labels: self.edge_labels.clone(),
        })
    }
}

impl CoarseDoc {
    pub fn space(&self) -> Result<FiniteCoarseSpace, ample::coarse::CoarseError> {
        FiniteCoarseSpace::from_raw(&RawCoarseSpace {
            points: self.points,
            generators: self.generators.clone(),
        })
    }

    pub fn family(&self) -> Option<Result<CoarseWindowFamily, ample::coarse::CoarseError>> {
        self.windows.as_ref().map(|w| {
            let spaces = w
                .spaces
                .iter()
                .map(FiniteCoarseSpace::from_raw)
                .collect::<Result<Vec<_>, _>>()?;
            CoarseWindowFamily::new(spaces, w.inclusions.clone())
        })
    }
}
