//! Run configuration and the feasibility plan.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::construct::DEFAULT_DOMAIN_BUDGET;
use crate::error::{Error, Result};
use crate::grp::DEFAULT_SEED;
use crate::verify::{row_support, RowParams, RowSupport, RowVariant, Verdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

/// One (row, parameters) selection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryConfig {
    pub row: usize,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<RowVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub import_h: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub import_k: Option<PathBuf>,
    /// Overrides the expected verdict of every certificate in the entry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Verdict>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub force: bool,
}

impl EntryConfig {
    pub fn new(row: usize, q: u32, m: Option<usize>) -> Self {
        EntryConfig {
            row,
            q,
            m,
            a: None,
            b: None,
            variants: Vec::new(),
            import_h: None,
            import_k: None,
            expect: None,
            force: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_budget")]
    pub budget_domain: u64,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub force: bool,
    #[serde(default, rename = "entry")]
    pub entries: Vec<EntryConfig>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_budget() -> u64 {
    DEFAULT_DOMAIN_BUDGET as u64
}

impl Default for RunConfig {
    /// Rows 1, 2, 4, 7 and 8 at q = 2, m = 2..3, keeping only valid combinations.
    fn default() -> Self {
        RunConfig::cross(&[1, 2, 4, 7, 8], &[2], &[2, 3])
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::Parse {
                line,
                msg: e.message().to_string(),
            }
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        RunConfig::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// All valid combinations of rows, q and m. Rows with fixed dimension ignore m.
    pub fn cross(rows: &[usize], qs: &[u32], ms: &[usize]) -> Self {
        let mut entries = Vec::new();
        for &row in rows {
            for &q in qs {
                let fixed = matches!(row, 8..=18);
                let ms: Vec<Option<usize>> = if fixed {
                    vec![None]
                } else {
                    ms.iter().map(|&m| Some(m)).collect()
                };
                for m in ms {
                    let e = EntryConfig::new(row, q, m);
                    if !matches!(
                        row_support(row, &RunConfig::empty().row_params(&e)),
                        RowSupport::Invalid { .. }
                    ) {
                        entries.push(e);
                    }
                }
            }
        }
        RunConfig {
            entries,
            ..RunConfig::empty()
        }
    }

    fn empty() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            format: Format::Json,
            budget_domain: default_budget(),
            cache_dir: None,
            force: false,
            entries: Vec::new(),
        }
    }

    pub fn row_params(&self, e: &EntryConfig) -> RowParams {
        RowParams {
            m: e.m,
            q: e.q,
            a: e.a,
            b: e.b,
            variants: e.variants.clone(),
            import_h: e.import_h.clone(),
            import_k: e.import_k.clone(),
            budget_domain: self.budget_domain as u128,
            seed: self.seed,
            force: self.force || e.force,
        }
    }

    pub fn plan(&self) -> Vec<FeasibilityEntry> {
        self.entries
            .iter()
            .map(|e| FeasibilityEntry::new(e, &self.row_params(e)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Supported {
    Yes,
    ImportRequired,
    TooLarge,
    Invalid,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityEntry {
    pub entry: EntryConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<u128>,
    /// Rough size of the first transversal level with explicit representatives.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimated_memory_bytes: Option<u128>,
    pub supported: Supported,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl FeasibilityEntry {
    fn new(entry: &EntryConfig, params: &RowParams) -> Self {
        let mem = |d: u128| Some(d.saturating_mul(d).saturating_mul(4));
        let (n, domain, supported, reason) = match row_support(entry.row, params) {
            RowSupport::Supported { n, domain, .. } => {
                (Some(n), Some(domain), Supported::Yes, None)
            }
            RowSupport::ImportRequired { n, domain, .. } => (
                Some(n),
                Some(domain),
                Supported::ImportRequired,
                Some("generator files for H and K not given".to_string()),
            ),
            RowSupport::TooLarge {
                n, domain, budget, ..
            } => (
                Some(n),
                Some(domain),
                Supported::TooLarge,
                Some(format!("domain {domain} exceeds budget {budget}")),
            ),
            RowSupport::Invalid { reason } => (None, None, Supported::Invalid, Some(reason)),
        };
        FeasibilityEntry {
            entry: entry.clone(),
            n,
            domain,
            estimated_memory_bytes: domain.and_then(mem),
            supported,
            reason,
        }
    }

    /// Whether `run` executes this entry.
    pub fn scheduled(&self) -> bool {
        matches!(self.supported, Supported::Yes | Supported::ImportRequired)
    }
}
