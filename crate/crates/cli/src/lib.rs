//! `dpw`: seed, import, score, run bots, and report from the command line.
//!
//! Results go to stdout as JSON (or CSV where asked), diagnostics to
//! stderr. Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dpw_core::bots::{approve_run, execute_bot, reject_run};
use dpw_core::domain::UserId;
use dpw_core::workspace::{co2_report, latest_order_year, rfq_score, supplier_score};
use dpw_core::{Config, DpwError, Result, Workspace};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dpw", version, about = "Digital procurement workspace administration")]
struct Cli {
    /// Workspace configuration file.
    #[arg(long, global = true, env = "DPW_CONFIG")]
    config: Option<PathBuf>,
    /// Pin the clock (RFC 3339) for reproducible output.
    #[arg(long, global = true)]
    now: Option<DateTime<Utc>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load master data (users, groups, materials, processes) from a fixture directory.
    Seed {
        #[arg(long)]
        fixtures: PathBuf,
    },
    /// Run import jobs; prints one ImportReport per line.
    Import(ImportArgs),
    /// Sustainability score of a supplier or an RfQ.
    Score(ScoreArgs),
    /// Run, approve or reject bot runs.
    #[command(subcommand)]
    Bot(BotCommand),
    #[command(subcommand)]
    Report(ReportCommand),
    /// Serve the HTTP API.
    Serve {
        /// Overrides `server.bind`.
        #[arg(long)]
        bind: Option<String>,
    },
}

#[derive(Debug, Args)]
struct ImportArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    source: Option<String>,
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long, conflicts_with = "rfq", required_unless_present = "rfq")]
    supplier: Option<String>,
    #[arg(long)]
    rfq: Option<String>,
    /// Aggregate sub-supplier scores.
    #[arg(long, conflicts_with = "rfq")]
    chain: bool,
    /// Calendar year; defaults to the latest year with orders.
    #[arg(long, conflicts_with = "rfq")]
    period: Option<i32>,
}

#[derive(Debug, Subcommand)]
enum BotCommand {
    Run {
        bot_id: String,
        /// Print the proposals without storing the run.
        #[arg(long)]
        dry_run: bool,
        /// Bot parameters as a JSON object.
        #[arg(long)]
        params: Option<String>,
        #[arg(long = "user")]
        user: String,
    },
    Approve {
        run_id: String,
        #[arg(long = "user")]
        user: String,
    },
    Reject {
        run_id: String,
        #[arg(long = "user")]
        user: String,
    },
}

#[derive(Debug, Subcommand)]
enum ReportCommand {
    /// Per-supplier tCO2e for one year.
    Co2 {
        #[arg(long)]
        period: i32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error [{}]: {e}", e.code());
            for d in e.details() {
                let _ = writeln!(err, "  {d}");
            }
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &DpwError) -> i32 {
    match e {
        DpwError::Io(_) => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

fn io(e: std::io::Error) -> DpwError {
    DpwError::Io(e.to_string())
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| DpwError::Parse(e.to_string()))?;
    writeln!(out, "{text}").map_err(io)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = Config::load(&Config::resolve_path(cli.config.as_deref()))?;
    let fixed = cli.now;
    let now = move || fixed.unwrap_or_else(Utc::now);
    let ws = Workspace::open(config)?;

    match cli.command {
        Command::Seed { fixtures } => {
            let report = ws.seed(&fixtures)?;
            print_json(out, &report)
        }
        Command::Import(args) => {
            let sources: Vec<_> = match (&args.source, args.all) {
                (Some(id), _) => vec![ws
                    .config
                    .source(id)
                    .cloned()
                    .ok_or_else(|| DpwError::not_found("source", id.as_str()))?],
                (None, _) => ws.import_order().into_iter().cloned().collect(),
            };
            for source in &sources {
                let report = ws.import_source(source, now)?;
                let line = serde_json::to_string(&report).map_err(|e| DpwError::Parse(e.to_string()))?;
                writeln!(out, "{line}").map_err(io)?;
                for skip in &report.skipped_reasons {
                    writeln!(err, "{}: skipped {}: {}", report.source_id, skip.record_locator, skip.reason)
                        .map_err(io)?;
                }
            }
            Ok(())
        }
        Command::Score(args) => {
            let snap = ws.store.snapshot();
            let report = match (args.supplier, args.rfq) {
                (Some(s), _) => {
                    let year = args.period.or_else(|| latest_order_year(&snap.data));
                    supplier_score(&snap.data, &s.as_str().into(), year, args.chain, now())?
                }
                (None, Some(r)) => rfq_score(&snap.data, &r.as_str().into(), now())?,
                (None, None) => unreachable!("clap requires one of --supplier/--rfq"),
            };
            print_json(out, &report)
        }
        Command::Bot(cmd) => bot(&ws, cmd, now(), out),
        Command::Report(ReportCommand::Co2 { period, format }) => {
            let report = co2_report(&ws.store.snapshot().data, period, now());
            match format {
                Format::Json => print_json(out, &report),
                Format::Csv => out.write_all(&report.to_csv()?).map_err(io),
            }
        }
        Command::Serve { bind } => {
            let addr = bind.unwrap_or_else(|| ws.config.server.bind.clone());
            let clock: dpw_api::Clock = match fixed {
                Some(t) => Arc::new(move || t),
                None => dpw_api::system_clock(),
            };
            let state = dpw_api::AppState::new(ws, clock)?;
            let rt = tokio::runtime::Runtime::new().map_err(io)?;
            rt.block_on(dpw_api::serve(state, &addr)).map_err(io)
        }
    }
}

fn bot(ws: &Workspace, cmd: BotCommand, now: DateTime<Utc>, out: &mut dyn Write) -> Result<()> {
    let run = match cmd {
        BotCommand::Run { bot_id, dry_run, params, user } => {
            let params: serde_json::Value = match params {
                Some(p) => serde_json::from_str(&p)
                    .map_err(|e| DpwError::validation(format!("--params is not valid JSON: {e}")))?,
                None => serde_json::Value::Null,
            };
            let user = UserId::from(user.as_str());
            let policies = &ws.config.bot_policies;
            if dry_run {
                execute_bot(&ws.store.snapshot().data, &bot_id, &params, policies, &user, now)?
            } else {
                ws.store.write(|d| {
                    let run = execute_bot(d, &bot_id, &params, policies, &user, now)?;
                    d.bot_runs.insert(run.run_id.clone(), run.clone());
                    Ok(run)
                })?
            }
        }
        BotCommand::Approve { run_id, user } => ws
            .store
            .write(|d| approve_run(d, &run_id.as_str().into(), &user.as_str().into(), now))?,
        BotCommand::Reject { run_id, user } => ws
            .store
            .write(|d| reject_run(d, &run_id.as_str().into(), &user.as_str().into(), now))?,
    };
    print_json(out, &run)
}
