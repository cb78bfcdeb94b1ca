//! Batch runs over table rows: configuration, planning, caching and reports.

mod cache;
mod config;

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

pub use cache::{Cache, Lookup, CACHE_DIR_ENV};
pub use config::{EntryConfig, FeasibilityEntry, Format, RunConfig, Supported};

use crate::verify::{run_table_row, FactorizationCertificate, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub entry: EntryConfig,
    pub supported: Supported,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub certificates: Vec<FactorizationCertificate>,
    #[serde(rename = "asExpected")]
    pub as_expected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    #[serde(rename = "budgetDomain")]
    pub budget_domain: u64,
    pub entries: Vec<EntryReport>,
}

impl Report {
    /// Every entry ran and every verdict is the expected one.
    pub fn all_as_expected(&self) -> bool {
        self.entries.iter().all(|e| e.as_expected)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Markdown => self.to_markdown(),
        }
    }

    fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# unifact report\n");
        let _ = writeln!(
            s,
            "version {}, seed {}, domain budget {}\n",
            self.version, self.seed, self.budget_domain
        );
        let _ = writeln!(
            s,
            "| row | factor pair | \\|G\\| | \\|H\\| | \\|K\\| | \\|H∩K\\| | verdict | expected |"
        );
        let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
        let show = |x: &Option<num_bigint::BigUint>| {
            x.as_ref()
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into())
        };
        for e in &self.entries {
            if let Some(err) = &e.error {
                let _ = writeln!(
                    s,
                    "| {} | {} | - | - | - | - | not run | certified |",
                    e.entry.row, err
                );
            }
            for c in &e.certificates {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} | {} |",
                    e.entry.row,
                    c.label,
                    show(&c.order_g),
                    show(&c.order_h),
                    show(&c.order_k),
                    show(&c.order_h_cap_k),
                    c.verdict,
                    c.expected.unwrap_or(Verdict::Certified),
                );
            }
        }
        let notes: Vec<_> = self
            .entries
            .iter()
            .flat_map(|e| &e.certificates)
            .filter(|c| !c.notes.is_empty())
            .collect();
        if !notes.is_empty() {
            let _ = writeln!(s, "\n## Notes\n");
            for c in notes {
                let _ = writeln!(s, "- {}: {}", c.label, c.notes.join("; "));
            }
        }
        let _ = writeln!(
            s,
            "\nAll verdicts as expected: {}",
            if self.all_as_expected() { "yes" } else { "no" }
        );
        s
    }
}

fn run_entry(
    config: &RunConfig,
    plan: &FeasibilityEntry,
    cache: Option<&Cache>,
    warnings: &Mutex<Vec<String>>,
) -> EntryReport {
    let e = &plan.entry;
    let mut report = EntryReport {
        entry: e.clone(),
        supported: plan.supported,
        error: None,
        certificates: Vec::new(),
        as_expected: false,
    };
    if !plan.scheduled() {
        report.error = plan.reason.clone().or_else(|| Some("not scheduled".into()));
        return report;
    }
    let params = config.row_params(e);
    let key = cache.map(|_| cache::Cache::key(e.row, &params));
    let cached = match (cache, &key) {
        (Some(c), Some(Ok(k))) => match c.load(k) {
            Lookup::Hit(certs) => Some(certs),
            Lookup::Miss => None,
            Lookup::Corrupt(why) => {
                warnings
                    .lock()
                    .unwrap()
                    .push(format!("cache entry unreadable, rebuilding: {why}"));
                None
            }
        },
        _ => None,
    };
    let certs = match cached {
        Some(c) => Ok(c),
        None => run_table_row(e.row, &params).inspect(|certs| {
            if let (Some(c), Some(Ok(k))) = (cache, &key) {
                if let Err(err) = c.store(k, certs) {
                    warnings
                        .lock()
                        .unwrap()
                        .push(format!("could not write cache: {err}"));
                }
            }
        }),
    };
    match certs {
        Ok(mut certs) => {
            if let Some(v) = e.expect {
                certs.iter_mut().for_each(|c| c.expected = Some(v));
            }
            report.as_expected = !certs.is_empty() && certs.iter().all(|c| c.as_expected());
            if certs.is_empty() {
                report.error = Some("no factor pair at these parameters".into());
            }
            report.certificates = certs;
        }
        Err(err) => report.error = Some(err.to_string()),
    }
    report
}

/// Runs every scheduled entry on `threads` workers; the report keeps config order.
/// Returns the report and any cache warnings.
pub fn run(config: &RunConfig, cache: Option<&Cache>, threads: usize) -> (Report, Vec<String>) {
    let plan = config.plan();
    let slots: Vec<Mutex<Option<EntryReport>>> = plan.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let warnings = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, plan.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(p) = plan.get(i) else { break };
                *slots[i].lock().unwrap() = Some(run_entry(config, p, cache, &warnings));
            });
        }
    });
    let entries = slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("every slot filled"))
        .collect();
    let report = Report {
        tool: "unifact",
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        budget_domain: config.budget_domain,
        entries,
    };
    (report, warnings.into_inner().unwrap())
}

/// Renders the feasibility plan.
pub fn render_plan(plan: &[FeasibilityEntry], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(plan).expect("plan serializes") + "\n",
        Format::Markdown => {
            let mut s = String::from("| row | q | m | n | domain | est. memory | supported | reason |\n|---|---|---|---|---|---|---|---|\n");
            let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            for f in plan {
                let supported = serde_json::to_value(f.supported).expect("enum serializes");
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} | {} |",
                    f.entry.row,
                    f.entry.q,
                    opt(f.entry.m.map(|m| m.to_string())),
                    opt(f.n.map(|n| n.to_string())),
                    opt(f.domain.map(|d| d.to_string())),
                    opt(f.estimated_memory_bytes.map(|b| b.to_string())),
                    supported.as_str().unwrap_or("?"),
                    opt(f.reason.clone()),
                );
            }
            s
        }
    }
}
