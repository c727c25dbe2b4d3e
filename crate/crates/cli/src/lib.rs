//! `ldskit`: JSON front end for the lds-core engines.

pub mod commands;
pub mod envelope;
pub mod instance;
pub mod verify_cmd;

use std::ffi::OsString;
use std::time::Instant;

use clap::{Parser, Subcommand};
use lds_core::Budget;
use serde_json::json;

use commands::{CmdResult, Outcome};
use envelope::{CommandEcho, Failure, ResultEnvelope, Status};
use instance::{read_source, InstanceFile};
use verify_cmd::Replay;

/// Format tag carried by instance and result documents.
pub const FORMAT: &str = "lds-toolkit/1";

/// Environment variable holding default budget overrides (`key=value,...`).
pub const BUDGET_ENV: &str = "LDS_TOOLKIT_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "ldskit", version, about = "Decision procedures for linear recurrences and linear dynamical systems")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Search bound, or step count for `reduce` and `pseudo`.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Budget overrides, e.g. `max_prime=500,lp_pivots=100`.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Print the result envelope as compact JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Print the result envelope as indented JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zero set of the `lrs` section.
    Zeros { instance: String },
    /// Whether the orbit of `lds` reaches `target`.
    Reach { instance: String },
    /// Indices where the orbit of `lds` meets `hyperplane`.
    Hyperplane { instance: String },
    /// Model-check `formula` over `predicates` along the orbit of `lds`.
    Mc { instance: String },
    /// Whether every reachable state of `automaton` accepts the same language.
    PrefixIndependent { instance: String },
    /// Whether `automaton` and `compare` accept the same language.
    Equivalent { instance: String },
    /// Check an invariant polyhedron, and prove `target` unreachable if given.
    Invariant { instance: String },
    /// Build a reduction instance and check its defining identity.
    Reduce { instance: String },
    /// Construct an epsilon-pseudo-orbit.
    Pseudo { instance: String },
    /// Replay the certificates in a result envelope against its instance.
    Verify { certificate: String, instance: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Zeros { .. } => "zeros",
            Command::Reach { .. } => "reach",
            Command::Hyperplane { .. } => "hyperplane",
            Command::Mc { .. } => "mc",
            Command::PrefixIndependent { .. } => "prefix-independent",
            Command::Equivalent { .. } => "equivalent",
            Command::Invariant { .. } => "invariant",
            Command::Reduce { .. } => "reduce",
            Command::Pseudo { .. } => "pseudo",
            Command::Verify { .. } => "verify",
        }
    }

    fn inputs(&self) -> Vec<String> {
        match self {
            Command::Verify {
                certificate,
                instance,
            } => vec![certificate.clone(), instance.clone()],
            Command::Zeros { instance }
            | Command::Reach { instance }
            | Command::Hyperplane { instance }
            | Command::Mc { instance }
            | Command::PrefixIndependent { instance }
            | Command::Equivalent { instance }
            | Command::Invariant { instance }
            | Command::Reduce { instance }
            | Command::Pseudo { instance } => vec![instance.clone()],
        }
    }
}

/// Text to print, where to print it, and the process exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub code: i32,
    pub stderr: bool,
}

fn budget_for(cli: &Cli) -> Result<Budget, Failure> {
    let mut budget = Budget::default();
    let bad = |e: lds_core::Error| Failure::new("budget", e.code(), e.to_string());
    if let Ok(spec) = std::env::var(BUDGET_ENV) {
        budget = budget.with_overrides(&spec).map_err(bad)?;
    }
    if let Some(spec) = &cli.budget {
        budget = budget.with_overrides(spec).map_err(bad)?;
    }
    if let Some(b) = cli.bound {
        budget.search_bound = b;
    }
    Ok(budget)
}

fn schema(module: &str) -> impl Fn(String) -> Failure + '_ {
    move |m| Failure::new(module, "schema", m)
}

fn dispatch(cmd: &Command, bound: Option<u64>, budget: &Budget) -> CmdResult {
    let load = |path: &str| InstanceFile::load(path).map_err(schema("instance"));
    match cmd {
        Command::Zeros { instance } => commands::zeros(&load(instance)?, budget),
        Command::Reach { instance } => commands::reach(&load(instance)?, budget),
        Command::Hyperplane { instance } => commands::hyperplane(&load(instance)?, budget),
        Command::Mc { instance } => commands::mc(&load(instance)?, budget),
        Command::PrefixIndependent { instance } => {
            commands::prefix_independence(&load(instance)?, budget)
        }
        Command::Equivalent { instance } => commands::equivalent(&load(instance)?, budget),
        Command::Invariant { instance } => commands::invariant(&load(instance)?, budget),
        Command::Reduce { instance } => commands::reduce(&load(instance)?, bound),
        Command::Pseudo { instance } => commands::pseudo(&load(instance)?, bound),
        Command::Verify {
            certificate,
            instance,
        } => verify(certificate, &load(instance)?),
    }
}

fn verify(certificate: &str, inst: &InstanceFile) -> CmdResult {
    let text = read_source(certificate).map_err(schema("verify"))?;
    let env: ResultEnvelope =
        serde_json::from_str(&text).map_err(|e| Failure::new("verify", "schema", format!("certificate: {e}")))?;
    if env.format != FORMAT {
        return Err(Failure::new("verify", "schema", format!("certificate: unsupported format {:?}", env.format)));
    }
    let checked = env.command.name.clone();
    let (status, verified, reason) = match verify_cmd::replay(&env, inst) {
        Replay::Accepted => (Status::Decided, true, None),
        Replay::NothingToCheck(r) => (Status::Inconclusive, false, Some(r)),
        Replay::Rejected(r) => return Err(Failure::new("verify", "rejected", format!("{checked}: {r}"))),
    };
    Ok(Outcome {
        status,
        payload: json!({ "checked": checked, "verified": verified, "reason": reason }),
        certificates: Vec::new(),
        metadata: serde_json::Value::Null,
    })
}

fn render(env: &ResultEnvelope, cli: &Cli) -> String {
    if cli.pretty {
        serde_json::to_string_pretty(env).expect("envelope serializes")
    } else if cli.json {
        serde_json::to_string(env).expect("envelope serializes")
    } else {
        let status = serde_json::to_value(env.status).expect("status serializes");
        let status = status.as_str().unwrap_or_default().to_string();
        match &env.error {
            Some(f) => format!("{} {}: [{}/{}] {}", env.command.name, status, f.module, f.code, f.message),
            None => format!("{} {}: {}", env.command.name, status, env.payload),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let stderr = e.use_stderr();
            return Output {
                text: e.render().to_string(),
                code: if stderr { 1 } else { 0 },
                stderr,
            };
        }
    };
    let clock = Instant::now();
    let echo = CommandEcho {
        name: cli.command.name().into(),
        inputs: cli.command.inputs(),
        bound: cli.bound,
    };
    let (budget, result) = match budget_for(&cli) {
        Ok(b) => {
            let r = dispatch(&cli.command, cli.bound, &b);
            (b, r)
        }
        Err(f) => (Budget::default(), Err(f)),
    };
    let mut env = ResultEnvelope::new(echo, budget);
    match result {
        Ok(o) => {
            env.status = o.status;
            env.payload = o.payload;
            env.certificates = o.certificates;
            env.metadata = o.metadata;
        }
        Err(f) => {
            env.status = Status::Error;
            env.error = Some(f);
        }
    }
    env.timing.elapsed_ms = clock.elapsed().as_secs_f64() * 1000.0;
    Output {
        text: render(&env, &cli),
        code: env.exit_code(),
        stderr: false,
    }
}
