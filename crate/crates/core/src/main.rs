use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use unifact::cli::{render_plan, run, Cache, Format, RunConfig};
use unifact::construct::{import_parsed, Builder, GeneratorFile};

/// Construct unitary groups and certify the factor pairs of their factorizations.
#[derive(Parser)]
#[command(name = "unifact", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show which entries are feasible, without running anything.
    Plan(Selection),
    /// Build and certify every feasible entry, then write a report.
    Run {
        #[command(flatten)]
        selection: Selection,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Ignore and do not update the certificate cache.
        #[arg(long)]
        no_cache: bool,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse a generator file and check it against SU(n, q).
    ImportCheck {
        file: PathBuf,
        #[arg(long, default_value_t = unifact::construct::DEFAULT_DOMAIN_BUDGET as u64)]
        budget_domain: u64,
    },
    /// Manage the certificate cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Delete every cached certificate.
    Purge {
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Selection {
    /// TOML run configuration; flags below override its globals.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Table rows, e.g. 1,2,7.
    #[arg(long, value_delimiter = ',')]
    rows: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long)]
    budget_domain: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Run entries whose domain exceeds the budget.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl Selection {
    fn config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => {
                RunConfig::load(path).with_context(|| format!("reading {}", path.display()))?
            }
            None if self.rows.is_empty() => RunConfig::default(),
            None => {
                let qs = if self.q.is_empty() {
                    vec![2]
                } else {
                    self.q.clone()
                };
                let ms = if self.m.is_empty() {
                    vec![2, 3]
                } else {
                    self.m.clone()
                };
                RunConfig::cross(&self.rows, &qs, &ms)
            }
        };
        if self.config.is_some() && !self.rows.is_empty() {
            bail!("--rows cannot be combined with --config");
        }
        if let Some(b) = self.budget_domain {
            config.budget_domain = b;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(f) = self.format {
            config.format = f;
        }
        if self.cache_dir.is_some() {
            config.cache_dir = self.cache_dir.clone();
        }
        config.force |= self.force;
        Ok(config)
    }
}

fn import_check(file: &PathBuf, budget: u64) -> Result<bool> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let parsed = GeneratorFile::parse(&text)?;
    if parsed.degree % 2 != 0 {
        bail!(
            "field degree {} is odd; a unitary group needs GF(q^2)",
            parsed.degree
        );
    }
    let q = parsed.p.pow(parsed.degree / 2);
    let builder = Builder::with_budget(parsed.n, q, budget as u128)?;
    let group = import_parsed(&builder, &parsed, &file.display().to_string())?;
    let su = builder.build_su()?;
    let inside = group.is_subgroup_of(&su);
    println!(
        "n = {}, q = {}, generators = {}",
        parsed.n,
        q,
        parsed.generators.len()
    );
    println!("order = {}", group.order());
    if let Some(e) = &parsed.expect_order {
        println!("expected order = {e} (matches)");
    }
    println!(
        "inside SU({}, {}): {}",
        parsed.n,
        q,
        if inside { "yes" } else { "no" }
    );
    Ok(inside || parsed.frob_allowed)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    match Cli::parse().command {
        Command::Plan(sel) => {
            let config = sel.config()?;
            print!("{}", render_plan(&config.plan(), config.format));
            Ok(true)
        }
        Command::Run {
            selection,
            out,
            no_cache,
            threads,
        } => {
            let config = selection.config()?;
            let cache = (!no_cache).then(|| Cache::new(config.cache_dir.as_deref()));
            let threads = threads
                .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
                .unwrap_or(1);
            let (report, warnings) = run(&config, cache.as_ref(), threads);
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let text = report.render(config.format);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            for e in report.entries.iter().filter(|e| !e.as_expected) {
                eprintln!(
                    "unexpected: row {} (q = {}, m = {:?}): {}",
                    e.entry.row,
                    e.entry.q,
                    e.entry.m,
                    e.error
                        .clone()
                        .unwrap_or_else(|| "verdict differs from expected".into())
                );
            }
            Ok(report.all_as_expected())
        }
        Command::ImportCheck {
            file,
            budget_domain,
        } => import_check(&file, budget_domain),
        Command::Cache {
            action: CacheAction::Purge { cache_dir },
        } => {
            let cache = Cache::new(cache_dir.as_deref());
            let n = cache.purge()?;
            println!("removed {n} cached entries from {}", cache.dir().display());
            Ok(true)
        }
    }
}
