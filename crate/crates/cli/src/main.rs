use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use smash_core::bicomplex::{Filtration, Pages};
use smash_core::catalog::{self, CaseSpec, PresentationFile};

#[derive(Parser)]
#[command(name = "smash", version, about = "Exact Hochschild homology of smash biproducts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dimension table of a case.
    Compute(CaseArgs),
    /// Compare a case against its closed form and cross-check strategies.
    Verify(CaseArgs),
    /// Print the E¹ and E² pages of the bisimplicial complex.
    Pages(CaseArgs),
    /// Check a presentation file for confluence.
    Confluence(ConfluenceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Accepted for compatibility; every computation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CaseArgs {
    /// Case-spec file; flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    nu: Option<usize>,
    /// Λ entries q_{i,j} for i < j, comma separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<String>>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    nmax: Option<usize>,
    /// `all`, `total:T`, `d1,d2,…` or `lo1..hi1,lo2..hi2`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, default_value = "columns")]
    filtration: Filtration,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConfluenceArgs {
    /// Presentation file.
    file: PathBuf,
    #[arg(long, default_value_t = 4)]
    bound: usize,
    #[command(flatten)]
    common: Common,
}

impl CaseArgs {
    fn case_spec(&self) -> Result<CaseSpec> {
        let mut spec = match &self.spec {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                CaseSpec::from_json(&text)?
            }
            None => match &self.case {
                Some(name) => CaseSpec::new(name),
                None => bail!("either --case or --spec is required"),
            },
        };
        if let Some(name) = &self.case {
            spec.name = name.clone();
        }
        let p = &mut spec.params;
        p.a = self.a.or(p.a);
        p.b = self.b.or(p.b);
        p.nu = self.nu.or(p.nu);
        p.order = self.order.or(p.order);
        if self.q.is_some() {
            p.q = self.q.clone();
        }
        if self.t.is_some() {
            p.t = self.t.clone();
        }
        if self.lambda.is_some() {
            p.lambda = self.lambda.clone();
        }
        spec.bounds.n_max = self.nmax.or(spec.bounds.n_max);
        if self.window.is_some() {
            spec.bounds.window = self.window.clone();
        }
        Ok(spec)
    }
}

fn init_pool(common: &Common) -> Result<()> {
    if let Some(n) = common.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn pages_json(p: &Pages) -> serde_json::Value {
    let page = |pg: &smash_core::bicomplex::SpectralPage| -> Vec<serde_json::Value> {
        pg.entries
            .iter()
            .map(|((p, q, d), v)| serde_json::json!({"p": p, "q": q, "degree": d.to_string(), "dim": v}))
            .collect()
    };
    serde_json::json!({
        "filtration": format!("{:?}", p.filtration).to_lowercase(),
        "n_max": p.n_max,
        "e1": page(&p.e1),
        "e2": page(&p.e2),
        "e2_positions": p.e2.totals().iter().map(|((pp, q), v)| serde_json::json!({"p": pp, "q": q, "dim": v})).collect::<Vec<_>>(),
        "e2_totals": (0..=p.n_max)
            .map(|n| p.e2.diagonal_sums(p.n_max).iter().filter(|((k, _), _)| *k == n).map(|(_, v)| v).sum::<usize>())
            .collect::<Vec<_>>(),
    })
}

fn pages_csv(p: &Pages) -> String {
    let mut s = String::from("page,p,q,degree,dim\n");
    for (name, pg) in [("E1", &p.e1), ("E2", &p.e2)] {
        for ((pp, q, d), v) in &pg.entries {
            s.push_str(&format!("{name},{pp},{q},\"{d}\",{v}\n"));
        }
    }
    s
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Compute(args) => {
            init_pool(&args.common)?;
            let table = catalog::compute(&args.case_spec()?)?;
            match args.common.format {
                Format::Json => println!("{}", table.to_json()),
                Format::Csv => print!("{}", table.to_csv()),
            }
            Ok(true)
        }
        Command::Verify(args) => {
            init_pool(&args.common)?;
            let report = catalog::verify_case(&args.case_spec()?)?;
            match args.common.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => print!("{}", report.to_csv()),
            }
            Ok(report.passed())
        }
        Command::Pages(args) => {
            init_pool(&args.common)?;
            let pages = catalog::case_pages(&args.case_spec()?, args.filtration)?;
            match args.common.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&pages_json(&pages))?),
                Format::Csv => print!("{}", pages_csv(&pages)),
            }
            Ok(true)
        }
        Command::Confluence(args) => {
            init_pool(&args.common)?;
            let text = fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
            let p = PresentationFile::from_json(&text)?.build()?;
            let report = p.check_confluence(args.bound);
            match args.common.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Format::Csv => {
                    println!("word,normal_forms");
                    for f in &report.failures {
                        println!("\"{}\",\"{}\"", f.word, f.normal_forms.join(" | "));
                    }
                }
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
