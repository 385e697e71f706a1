use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fszlab_core::constructions::import_permutation_group;
use fszlab_core::fsz::{
    fsz_plus_test, fsz_test, indicator_set_triple, x_set, FszOptions, MPolicy, StrategyRegistry,
    DEFAULT_STRATEGY,
};
use fszlab_core::group::enumeration_budget;
use fszlab_core::wreath_analyzer::{
    abelian_bijection_certificate, wreath_condition_test, CheckOptions, CriterionOutcome,
};
use fszlab_core::{FszError, GroupHandle};
use serde_json::{json, Value};

use crate::dsl::{element, parse_group_expr, parse_word, DslError, Evaluator, GroupExpr};
use crate::report::{Config, Report, Status, VERSION};
use crate::suites::{run_suite, suite_names, SuiteOptions, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "fszlab", version = VERSION, about = "FSZ indicator sets, central products and wreath products")]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the parallel engines.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Holds,
    Fails,
}

impl Expect {
    fn status(self, holds: bool) -> Status {
        Status::from_bool(holds == (self == Expect::Holds))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order, exponent, center size and class count.
    Info { expr: String },
    /// Tests FSZ_m over a range of m.
    Fsz {
        expr: String,
        /// Explicit values of m, comma separated.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u64>,
        /// Use plain enumeration of indicator sets.
        #[arg(long)]
        naive: bool,
        /// Every m from 1 to the exponent.
        #[arg(long)]
        all_m: bool,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, value_enum, default_value = "holds")]
        expect: Expect,
    },
    /// Tests FSZ on every centralizer.
    Fszplus {
        expr: String,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, value_enum, default_value = "holds")]
        expect: Expect,
    },
    /// Prints G_m(u,g), the triple set G_m(u,g,z), or X_m(u,g,n) when --n is given.
    Sets {
        expr: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        u: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Tests the wreath condition for D wr Z_p at m = p^t.
    WreathCheck {
        expr: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum, default_value = "holds")]
        expect: Expect,
    },
    /// Runs a replication suite.
    Verify {
        suite: String,
        /// Check every admissible tuple instead of one per rotation class.
        #[arg(long)]
        full_tuples: bool,
    },
    /// Imports a permutation group and tests it.
    Import {
        file: PathBuf,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, value_enum, default_value = "holds")]
        expect: Expect,
    },
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Outcome::usage("error: --threads must be positive\n".into());
        }
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli) {
        Ok(report) => {
            let text = report.render();
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    return Outcome::usage(format!("error: cannot write {}: {e}\n", path.display()));
                }
            }
            Outcome {
                code: report.status.exit_code(),
                stdout: text,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}

#[derive(Debug, thiserror::Error)]
enum CommandError {
    #[error("{message}\n  {source_text}\n  {caret}")]
    Expr {
        message: String,
        source_text: String,
        caret: String,
    },
    #[error(transparent)]
    Group(#[from] FszError),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

fn positioned(text: &str, e: DslError) -> CommandError {
    match e.offset() {
        Some(off) => CommandError::Expr {
            message: e.to_string(),
            source_text: text.to_string(),
            caret: format!("{}^", " ".repeat(text[..off.min(text.len())].chars().count())),
        },
        None => CommandError::Other(e.into()),
    }
}

fn build(text: &str) -> Result<(GroupExpr, GroupHandle), CommandError> {
    let expr = parse_group_expr(text).map_err(|e| positioned(text, e))?;
    let g = Evaluator::default().group(&expr).map_err(|e| positioned(text, e))?;
    Ok((expr, g))
}

fn word(g: &GroupHandle, flag: &str, text: &str) -> Result<fszlab_core::ElementKey, CommandError> {
    let w = parse_word(text).map_err(|e| positioned(text, e))?;
    element(g, &w).map_err(|e| match positioned(text, e) {
        CommandError::Expr {
            message,
            source_text,
            caret,
        } => CommandError::Expr {
            message: format!("--{flag}: {message}"),
            source_text,
            caret,
        },
        other => other,
    })
}

fn options(strategy: Option<&str>, policy: MPolicy) -> Result<FszOptions, CommandError> {
    let name = strategy.unwrap_or(DEFAULT_STRATEGY);
    Ok(FszOptions {
        policy,
        strategy: StrategyRegistry::standard().get(name)?,
    })
}

fn config(cli: &Cli, fsz: &FszOptions, check: Option<&CheckOptions>) -> Config {
    let defaults = CheckOptions::default();
    let check = check.unwrap_or(&defaults);
    Config {
        budget: enumeration_budget(),
        threads: rayon::current_num_threads(),
        strategy: fsz.strategy.name().into(),
        m_policy: fsz.policy.label().into(),
        seed: cli.seed,
        full_tuples: check.full_tuples,
        direct_limit: check.direct_limit,
    }
}

/// Facts about a group; the parts that exceed the budget are left out.
fn info(g: &GroupHandle) -> Value {
    let mut skipped = Vec::new();
    let mut keep = |r: Result<Value, FszError>, what: &str| match r {
        Ok(v) => v,
        Err(e) => {
            skipped.push(format!("{what}: {e}"));
            Value::Null
        }
    };
    let exponent = keep(g.exponent().map(|e| json!(e)), "exponent");
    let center = keep(g.center().map(|c| json!(c.len())), "center");
    let classes = keep(g.conjugacy_data().map(|c| json!(c.class_count())), "classes");
    json!({
        "group": g.descriptor(),
        "kind": g.kind(),
        "order": g.order(),
        "exponent": exponent,
        "center_size": center,
        "class_count": classes,
        "generators": g.generator_names(),
        "extrapolated": g.extrapolated(),
        "skipped": skipped,
    })
}

fn execute(cli: &Cli) -> Result<Report, CommandError> {
    let default_fsz = FszOptions::default();
    Ok(match &cli.command {
        Command::Info { expr } => {
            let (e, g) = build(expr)?;
            Report::new("info", Some(e.to_string()), config(cli, &default_fsz, None), info(&g), Status::AsExpected)
        }
        Command::Fsz {
            expr,
            m,
            naive,
            all_m,
            strategy,
            expect,
        } => {
            let policy = if !m.is_empty() {
                MPolicy::Explicit(m.clone())
            } else if *all_m {
                MPolicy::AllUpToExponent
            } else {
                MPolicy::DivisorsOfExponent
            };
            let strategy = if *naive { Some("naive") } else { strategy.as_deref() };
            let opts = options(strategy, policy)?;
            let (e, g) = build(expr)?;
            let report = fsz_test(&g, &opts)?;
            let status = expect.status(report.holds);
            Report::new("fsz", Some(e.to_string()), config(cli, &opts, None), json!(report), status)
        }
        Command::Fszplus { expr, strategy, expect } => {
            let opts = options(strategy.as_deref(), MPolicy::DivisorsOfExponent)?;
            let (e, g) = build(expr)?;
            let report = fsz_plus_test(&g, &opts)?;
            let status = expect.status(report.holds);
            Report::new("fszplus", Some(e.to_string()), config(cli, &opts, None), json!(report), status)
        }
        Command::Sets { expr, m, u, g, z, n } => {
            let (e, grp) = build(expr)?;
            let uk = word(&grp, "u", u)?;
            let gk = word(&grp, "g", g)?;
            let result = match (z, n) {
                (Some(z), Some(n)) => {
                    let zk = word(&grp, "z", z)?;
                    let xs = x_set(&grp, &zk, *m, &uk, &gk, *n)?;
                    json!({"kind": "x-set", "size": xs.set.len(), "x": xs})
                }
                (None, Some(_)) => {
                    return Err(CommandError::Other(anyhow::anyhow!("--n needs --z")));
                }
                (z, None) => {
                    let zk = match z {
                        Some(z) => word(&grp, "z", z)?,
                        None => grp.identity(),
                    };
                    let set = indicator_set_triple(&grp, *m, &uk, &gk, &zk)?;
                    let kind = if z.is_some() { "triple-set" } else { "indicator-set" };
                    json!({"kind": kind, "size": set.len(), "set": set})
                }
            };
            Report::new("sets", Some(e.to_string()), config(cli, &default_fsz, None), result, Status::AsExpected)
        }
        Command::WreathCheck { expr, p, t, expect } => {
            let (e, base) = build(expr)?;
            let criterion = wreath_condition_test(&base, *p, *t, &default_fsz)?;
            let abelian = if base.is_abelian()? {
                Some(abelian_bijection_certificate(&base, *p, *t)?)
            } else {
                None
            };
            let holds = criterion.outcome == CriterionOutcome::Holds;
            let status = expect.status(holds);
            Report::new(
                "wreath-check",
                Some(e.to_string()),
                config(cli, &default_fsz, None),
                json!({"criterion": criterion, "abelian_certificate": abelian}),
                status,
            )
        }
        Command::Verify { suite, full_tuples } => {
            if !suite_names().contains(&suite.as_str()) {
                return Err(CommandError::Other(anyhow::anyhow!(
                    "unknown suite '{suite}' (known: {})",
                    suite_names().join(", ")
                )));
            }
            let opts = SuiteOptions {
                seed: cli.seed,
                check: CheckOptions {
                    full_tuples: *full_tuples,
                    ..CheckOptions::default()
                },
            };
            let report = run_suite(suite, &opts)?;
            let status = Status::from_bool(report.as_expected);
            Report::new(
                "verify",
                None,
                config(cli, &opts.check.fsz, Some(&opts.check)),
                json!(report),
                status,
            )
        }
        Command::Import { file, strategy, expect } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", file.display()))?;
            let g = import_permutation_group(&text)?;
            let opts = options(strategy.as_deref(), MPolicy::DivisorsOfExponent)?;
            let report = fsz_test(&g, &opts)?;
            let status = expect.status(report.holds);
            Report::new(
                "import",
                Some(file.display().to_string()),
                config(cli, &opts, None),
                json!({"info": info(&g), "fsz": report}),
                status,
            )
        }
    })
}
