mod render;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eqrobin::experiment::Benchmark;
use eqrobin::formats::{CoverageJson, FamilyJson, SelectionJson, SuiteJson};
use eqrobin::variants::DEFAULT_MAX_VARIANTS;
use eqrobin::*;
use serde::Serialize;

const WORKED_EXAMPLE: &str = include_str!("../../../benchmarks/worked_example.json");

#[derive(Parser)]
#[command(
    name = "eqrobin",
    version,
    about = "Families of minimal unique-cause MC/DC suites"
)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an expression, list its conditions.
    Parse {
        #[command(flatten)]
        src: ExprSource,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// List the structural variants of an expression, one per line.
    Variants {
        #[command(flatten)]
        src: ExprSource,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Build the N+1 suite of an expression, its baseline form, or its family.
    Generate {
        #[command(flatten)]
        src: ExprSource,
        #[command(flatten)]
        gen: GenArgs,
        /// One suite per distinct variant suite.
        #[arg(long, conflicts_with = "baseline")]
        family: bool,
        /// Normalize the expression before building the suite.
        #[arg(long)]
        baseline: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check unique-cause coverage of a suite file.
    Check {
        /// Suite JSON (`expression`, `tests`).
        #[arg(long)]
        input: PathBuf,
        /// Expression to check against; defaults to the one in the file.
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Generate the family, drop suites with forbidden inputs, pick the cheapest.
    Pipeline {
        #[command(flatten)]
        src: ExprSource,
        #[command(flatten)]
        gen: GenArgs,
        /// Constraint JSON: `{"forbidden": [{"var": bool, ...}]}`.
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Cost model JSON.
        #[arg(long)]
        costs: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a benchmark study.
    Experiment {
        #[arg(value_enum)]
        study: Study,
        /// Benchmark JSON: `[{"name", "expr"}]`. Defaults to the bundled worked example.
        #[arg(long)]
        benchmark: Option<PathBuf>,
        #[arg(long, default_value_t = eqrobin::experiment::DEFAULT_TRIALS)]
        trials: usize,
        /// Master seed for trial sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "EQROBIN_MAX_VARIANTS", default_value_t = DEFAULT_MAX_VARIANTS)]
        max_variants: usize,
        #[arg(long)]
        assoc: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ExprSource {
    /// Expression text.
    #[arg(long)]
    expr: Option<String>,
    /// File holding the expression text.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Cap on the number of variants.
    #[arg(long, env = "EQROBIN_MAX_VARIANTS", default_value_t = DEFAULT_MAX_VARIANTS)]
    max_variants: usize,
    /// Also regroup associative chains.
    #[arg(long)]
    assoc: bool,
    /// Sample the variant space with this seed when it exceeds the cap.
    #[arg(long)]
    seed: Option<u64>,
}

impl GenArgs {
    fn options(&self) -> VariantOptions {
        VariantOptions {
            include_associativity: self.assoc,
            max_variants: self.max_variants,
            sample_seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Study {
    Rq1,
    Rq2,
}

/// Exit status when selection finds no suite free of forbidden inputs.
const EXIT_NONE_VALID: u8 = 4;

#[derive(Debug)]
struct OutputError(PathBuf, std::io::Error);

impl std::fmt::Display for OutputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot write {}: {}", self.0.display(), self.1)
    }
}

impl std::error::Error for OutputError {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.is::<OutputError>() {
        return 5;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::EmptyInput | Error::Syntax { .. }) => 2,
        Some(Error::SbeViolation { .. }) => 3,
        Some(Error::Io { .. } | Error::Json(_)) => 5,
        _ => 1,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(Error::from)
        .with_context(|| format!("reading {}", path.display()))
}

impl ExprSource {
    fn load(&self) -> Result<Expr> {
        let text = match (&self.expr, &self.input) {
            (Some(t), _) => t.clone(),
            (None, Some(p)) => read(p)?,
            (None, None) => unreachable!("clap requires one source"),
        };
        let e = parse(&text)?;
        validate_sbe(&e)?;
        Ok(e)
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct ParseJson {
    expression: String,
    canonical: String,
    n: usize,
    columns: Vec<String>,
}

#[derive(Serialize)]
struct VariantsJson {
    expression: String,
    count: usize,
    space_size: u128,
    truncated: bool,
    variants: Vec<String>,
}

fn suite_out(s: &TestSuite, format: Format) -> Result<String> {
    match format {
        Format::Json => json(&SuiteJson::from_suite(s)),
        Format::Csv => render::suite_csv(s),
        Format::Table => Ok(render::suite_table(s)),
    }
}

/// Rendered output and a nonzero exit status to report alongside it, if any.
struct Outcome(String, Option<u8>);

impl From<String> for Outcome {
    fn from(s: String) -> Self {
        Outcome(s, None)
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    let text = match cmd {
        Command::Parse { src, format } => {
            let e = src.load()?;
            let table = validate_sbe(&e)?;
            match format {
                Format::Json => json(&ParseJson {
                    expression: e.to_string(),
                    canonical: e.serialize(),
                    n: table.len(),
                    columns: table.labels(),
                }),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = table
                        .conditions()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            vec![
                                (i + 1).to_string(),
                                c.label(),
                                c.name.clone(),
                                c.negated.to_string(),
                            ]
                        })
                        .collect();
                    render::csv_of(
                        &["index", "label", "variable", "negated"].map(String::from),
                        &rows,
                    )
                }
                Format::Table => Ok(format!(
                    "{}\n{}\nN = {}: {}\n",
                    e,
                    e.serialize(),
                    table.len(),
                    table.labels().join(", ")
                )),
            }
        }
        Command::Variants { src, gen, format } => {
            let e = src.load()?;
            let fam = generate_variants(&e, &gen.options())?;
            eprintln!(
                "{} variants of {} possible{}",
                fam.variants.len(),
                fam.space_size,
                if fam.truncated { " (truncated)" } else { "" }
            );
            let lines: Vec<String> = fam.variants.iter().map(Expr::serialize).collect();
            match format {
                Format::Json => json(&VariantsJson {
                    expression: e.to_string(),
                    count: lines.len(),
                    space_size: fam.space_size,
                    truncated: fam.truncated,
                    variants: lines,
                }),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = lines
                        .into_iter()
                        .enumerate()
                        .map(|(i, l)| vec![i.to_string(), l])
                        .collect();
                    render::csv_of(&["variant".into(), "expression".into()], &rows)
                }
                Format::Table => Ok(lines.iter().map(|l| format!("{l}\n")).collect()),
            }
        }
        Command::Generate {
            src,
            gen,
            family,
            baseline,
            format,
        } => {
            let e = src.load()?;
            if !family {
                let target = if baseline { baseline_normalize(&e)? } else { e };
                return suite_out(&generate_suite(&target)?, format).map(Outcome::from);
            }
            let f = generate_family(&e, &gen.options())?;
            match format {
                Format::Json => json(&FamilyJson::from(&f)),
                Format::Csv | Format::Table => {
                    let mut out = String::new();
                    for m in &f.members {
                        if format == Format::Table {
                            out.push_str(&format!("variant {}: ", m.variant_index));
                            out.push_str(&render::suite_table(&m.suite));
                        } else {
                            out.push_str(&format!(
                                "# variant {}: {}\n",
                                m.variant_index, m.suite.expression
                            ));
                            out.push_str(&render::suite_csv(&m.suite)?);
                        }
                        out.push('\n');
                    }
                    Ok(out)
                }
            }
        }
        Command::Check {
            input,
            expr,
            format,
        } => {
            let doc: SuiteJson = read_json(&input)?;
            let text = expr
                .or_else(|| doc.expression.clone())
                .ok_or_else(|| anyhow!("{} has no `expression`; pass --expr", input.display()))?;
            let e = parse(&text)?;
            validate_sbe(&e)?;
            let vs = doc.vectors(&e)?;
            let r = check_unique_cause(&e, &vs)?;
            match format {
                Format::Json => json(&CoverageJson::from(&r)),
                Format::Csv => render::coverage_csv(&r),
                Format::Table => Ok(render::coverage_table(&r)),
            }
        }
        Command::Pipeline {
            src,
            gen,
            constraints,
            costs,
            format,
        } => {
            let e = src.load()?;
            let cs: ConstraintSet = constraints
                .as_deref()
                .map(read_json)
                .transpose()?
                .unwrap_or_default();
            let cm: Option<CostModel> = costs.as_deref().map(read_json).transpose()?;
            let f = generate_family(&e, &gen.options())?;
            let r = select(&f, &cs, cm.as_ref())?;
            let doc = SelectionJson::new(&f, &r);
            let out = match format {
                Format::Json => json(&doc)?,
                Format::Csv => render::selection_csv(&doc)?,
                Format::Table => render::selection_table(&doc),
            };
            if r.rationale == Rationale::NoneValid {
                eprintln!("no suite in the family is free of forbidden test cases");
                return Ok(Outcome(out, Some(EXIT_NONE_VALID)));
            }
            Ok(out)
        }
        Command::Experiment {
            study,
            benchmark,
            trials,
            seed,
            max_variants,
            assoc,
            format,
        } => {
            let bench = match &benchmark {
                Some(p) => load_benchmark(p)?,
                None => Benchmark::from_json(WORKED_EXAMPLE)?,
            };
            for r in &bench.rejected {
                eprintln!(
                    "skipping benchmark entry {} ({}): {}",
                    r.index, r.name, r.error
                );
            }
            let opts = VariantOptions {
                include_associativity: assoc,
                max_variants,
                sample_seed: None,
            };
            match study {
                Study::Rq1 => {
                    let r = run_rq1(&bench, &opts)?;
                    let (h, rows) = render::rq1_rows(&r);
                    match format {
                        Format::Json => json(&r),
                        Format::Csv => render::csv_of(&h, &rows),
                        Format::Table => Ok(render::table(&h, &rows)),
                    }
                }
                Study::Rq2 => {
                    let r = run_rq2(&bench, trials, seed, &opts)?;
                    match format {
                        Format::Json => json(&r),
                        Format::Csv => render::rq2_csv(&r),
                        Format::Table => {
                            let (h, rows) = render::rq2_summary_rows(&r);
                            Ok(render::table(&h, &rows))
                        }
                    }
                }
            }
        }
    }?;
    Ok(text.into())
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| OutputError(p.to_path_buf(), e).into()),
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth reporting
            let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output;
    let result = par::with_jobs(cli.jobs, || run(cli.command));
    let result =
        result.and_then(|Outcome(text, code)| emit(&text, output.as_deref()).map(|_| code));
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(code)) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
