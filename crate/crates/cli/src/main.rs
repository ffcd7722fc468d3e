use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tgraded::constructions::{self, Mode};
use tgraded::corpus::AlgebraId;
use tgraded::laws::{check_param, Law, LAW_IDS};
use tgraded::paper::{self, Options};
use tgraded::scalar::{Assignment, Field, WEIGHT};
use tgraded::search::DEFAULT_BUDGET;
use tgraded::structures::ParamBundle;
use tgraded::{coalgebra, format, Error, Result};

/// Exact checking of semigroup-graded Rota-Baxter structures.
///
/// Exit status: 0 when everything passes, 1 when a law or comparison fails,
/// 2 on usage or data errors.
#[derive(Parser)]
#[command(name = "tgraded", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Scalars {
    /// Reinterpret the bundle over `rational` or `fp:<p>`.
    #[arg(long)]
    field: Option<String>,
    /// Fix the weight parameter.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Fix another parameter, as NAME=VALUE.
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    params: Vec<String>,
}

#[derive(Args, Clone, Copy)]
struct Sampling {
    /// Seed for every random specialization.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random specializations per parametric check.
    #[arg(long = "specializations", value_name = "K", default_value_t = 5)]
    k: usize,
}

impl From<Sampling> for Options {
    fn from(s: Sampling) -> Options {
        Options { seed: s.seed, specializations: s.k }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check laws on a bundle file.
    Check {
        /// Law id, repeatable.
        #[arg(long, required = true, value_parser = clap::builder::PossibleValuesParser::new(LAW_IDS))]
        law: Vec<String>,
        file: PathBuf,
        #[command(flatten)]
        scalars: Scalars,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Apply a construction and write the resulting bundle.
    Derive {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(constructions::CONSTRUCTIONS))]
        construction: String,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        scalars: Scalars,
    },
    /// Write the dual coalgebra-side bundle.
    Dualize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        scalars: Scalars,
    },
    /// Enumerate every Rota-Baxter operator over a prime field.
    Search {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        /// Also enumerate ordered Rota-Baxter pairs.
        #[arg(long)]
        pairs: bool,
        #[arg(long, default_value = "two-dim", value_parser = ["two-dim", "three-dim", "taft"])]
        algebra: String,
        /// Largest number of candidate matrices to scan.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Reference corpus of listed examples.
    Paper {
        #[command(subcommand)]
        cmd: PaperCmd,
    },
}

#[derive(Subcommand)]
enum PaperCmd {
    /// Check listed examples. Without --example, exits 0 when every
    /// verdict matches its annotation.
    Verify {
        #[arg(long)]
        example: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compare printed tables with the derived ones.
    Diff {
        #[arg(long)]
        example: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Write a listed operator or pair as a bundle file.
    Export {
        id: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failed law or comparison, as opposed to an error.
struct Failed;

type Outcome = std::result::Result<(), Failed>;

fn verdict(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failed)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(Error::Hypothesis(r)) => {
            eprintln!("hypothesis violated:\n{r}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, s: &Scalars) -> Result<ParamBundle> {
    let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    let mut b = format::load(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Usage(format!("{}:{line}: {msg}", path.display())),
        e => e,
    })?;
    if let Some(f) = &s.field {
        b = b.with_field(Field::parse(f)?);
    }
    let mut a = Assignment::new();
    if let Some(w) = &s.weight {
        a.insert(WEIGHT.to_string(), b.field.parse_element(w)?);
    }
    for p in &s.params {
        let (name, value) = p.split_once('=').ok_or_else(|| Error::Usage(format!("expected NAME=VALUE, got `{p}`")))?;
        if !b.params.iter().any(|x| x == name) {
            return Err(Error::Usage(format!("bundle has no parameter `{name}`")));
        }
        a.insert(name.to_string(), b.field.parse_element(value)?);
    }
    if a.contains_key(WEIGHT) && !b.params.iter().any(|x| x == WEIGHT) {
        return Err(Error::Usage("bundle has no weight parameter".into()));
    }
    if a.is_empty() {
        Ok(b)
    } else {
        b.partially_specialize(&a)
    }
}

fn write(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Check { law, file, scalars, sampling } => {
            let b = load(&file, &scalars)?;
            let mut ok = true;
            for id in &law {
                let r = check_param(Law::parse(id)?, &b, sampling.k, sampling.seed)?;
                println!("{r}");
                ok &= r.passed();
            }
            Ok(verdict(ok))
        }
        Cmd::Derive { construction, file, output, scalars } => {
            let b = load(&file, &scalars)?.concrete()?;
            let out = constructions::derive(&construction, &b, Mode::Checked)?;
            write(&format::save(&out.to_param()), output.as_deref())?;
            Ok(Ok(()))
        }
        Cmd::Dualize { file, output, scalars } => {
            let b = load(&file, &scalars)?.concrete()?;
            write(&format::save(&coalgebra::dualize(&b)?.to_param()), output.as_deref())?;
            Ok(Ok(()))
        }
        Cmd::Search { field, weight, pairs, algebra, budget } => {
            let field = Field::parse(&field)?;
            if field.modulus().is_none() {
                return Err(Error::Usage("search needs --field fp:<p>".into()));
            }
            let w = field.parse_element(&weight)?;
            let r = paper::search_report(AlgebraId::parse(&algebra)?, &w, pairs, budget)?;
            println!("{r}");
            Ok(verdict(r.consistent()))
        }
        Cmd::Paper { cmd } => run_paper(cmd),
    }
}

fn run_paper(cmd: PaperCmd) -> Result<Outcome> {
    match cmd {
        PaperCmd::Verify { example, sampling } => {
            let opts = Options::from(sampling);
            if let Some(id) = example.as_deref() {
                require_known(id)?;
            }
            let filter = example.as_deref();
            let outcomes = paper::verify_all(filter, opts)?;
            for o in &outcomes {
                println!("{o}");
            }
            let tables = paper::table_reports(filter, opts)?;
            for t in &tables {
                println!("{t}");
            }
            let audits_wanted = filter.is_none_or(|f| tgraded::corpus::normalize_id(f).starts_with("15.11"));
            if audits_wanted {
                for a in AlgebraId::ALL {
                    println!("{}", paper::semi_hopf_audit(a, opts)?);
                }
            }
            let tables_sound = tables.iter().all(|t| t.derived_pass() && t.all_confirmed());
            let tables_annotated = tables.iter().all(|t| t.as_expected());
            if filter.is_some() {
                let ok = outcomes.iter().all(|o| o.passed) && tables.iter().all(|t| t.diffs.is_empty()) && tables_sound;
                return Ok(verdict(ok));
            }
            let expected = outcomes.iter().filter(|o| o.as_expected()).count();
            let known = outcomes.iter().filter(|o| !o.expected.holds()).count();
            let diffs: usize = tables.iter().map(|t| t.diffs.len()).sum();
            println!(
                "summary: {} entries, {expected} as annotated ({known} known discrepancies); {} tables, {diffs} diff lines",
                outcomes.len(),
                tables.len()
            );
            Ok(verdict(expected == outcomes.len() && tables_annotated))
        }
        PaperCmd::Diff { example, sampling } => {
            if let Some(id) = example.as_deref() {
                require_known(id)?;
            }
            let tables = paper::table_reports(example.as_deref(), sampling.into())?;
            if tables.is_empty() {
                return Err(Error::Usage("no printed table matches that id".into()));
            }
            for t in &tables {
                println!("{t}");
            }
            Ok(verdict(tables.iter().all(|t| t.diffs.is_empty() && t.derived_pass())))
        }
        PaperCmd::Export { id, output } => {
            write(&format::save(&paper::export(&id)?), output.as_deref())?;
            Ok(Ok(()))
        }
    }
}

fn require_known(id: &str) -> Result<()> {
    if paper::all_ids().iter().any(|x| paper::matches_id(x, id)) {
        Ok(())
    } else {
        Err(Error::Usage(format!("unknown example `{id}`")))
    }
}
