//! The `cyclofusion` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 singular substitution, 4 size limit exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cyclo::format_rational;
use crate::error::{Error, Result};
use crate::fusion::{consecutive_evaluation, inductive_evaluation, FusionInput};
use crate::group::{GroupContext, DEFAULT_SIZE_LIMIT};
use crate::oracle::jm_idempotent;
use crate::tableaux::{
    enumerate_multipartitions, enumerate_standard_tableaux, f_constant, MultiPartition,
    StandardMultiTableau,
};
use crate::verify::{run_verify, VerifyOptions};

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_SIZE_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "cyclofusion",
    version,
    about = "Primitive idempotents of G(m,1,N) by the fusion procedure"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List m-partitions of N with their tableau counts and f constants.
    Enumerate(RunConfig),
    /// Compute E_T for one standard m-tableau.
    Compute(RunConfig),
    /// Run the invariant suite for G(m,1,N).
    Verify(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Consecutive,
    Inductive,
    JmOracle,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Consecutive => "consecutive",
            Method::Inductive => "inductive",
            Method::JmOracle => "jm-oracle",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Order of the roots of unity.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Number of strands; for `compute` it defaults to the tableau size.
    #[arg(long)]
    pub n: Option<usize>,
    /// An m-partition as nested JSON arrays, e.g. '[[2],[1]]'.
    #[arg(long)]
    pub shape: Option<String>,
    /// A tableau as a JSON list of {"pos","row","col"} in label order.
    #[arg(long)]
    pub tableau: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Inductive)]
    pub method: Method,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest accepted group order m^N·N!.
    #[arg(long, env = "FUSION_SIZE_LIMIT", default_value_t = DEFAULT_SIZE_LIMIT)]
    pub limit: u64,
    /// Worker threads for per-tableau work.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, hide = true)]
    pub inject_corruption: bool,
}

/// Maps a library error to the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::SingularSubstitution { .. }
        | Error::SingularSpectralParameters
        | Error::DivisionByZero => EXIT_SINGULAR,
        Error::SizeLimitExceeded { .. } => EXIT_SIZE_LIMIT,
        _ => EXIT_INVALID_INPUT,
    }
}

fn parse_shape(m: u32, s: &str) -> Result<MultiPartition> {
    let shape: MultiPartition =
        serde_json::from_str(s).map_err(|e| Error::InvalidShape(e.to_string()))?;
    if shape.m() != m as usize {
        return Err(Error::InvalidShape(format!(
            "{} components given, m = {m}",
            shape.m()
        )));
    }
    Ok(shape)
}

fn parse_tableau(m: u32, s: &str) -> Result<StandardMultiTableau> {
    StandardMultiTableau::from_json(m as usize, s).map_err(|e| match e {
        Error::Parse(msg) => Error::InvalidTableau(msg),
        other => other,
    })
}

pub fn cmd_enumerate(cfg: &RunConfig) -> Result<serde_json::Value> {
    GroupContext::new(cfg.m, cfg.n.unwrap_or(0))?;
    let n = cfg
        .n
        .ok_or_else(|| Error::InvalidParameter("--n is required".into()))?;
    let mut shapes = Vec::new();
    let mut sum_sq: u128 = 0;
    for shape in enumerate_multipartitions(cfg.m as usize, n) {
        let d = enumerate_standard_tableaux(&shape).len() as u128;
        sum_sq += d * d;
        shapes.push(json!({
            "shape": shape,
            "d": d,
            "f": format_rational(&f_constant(&shape)),
        }));
    }
    let order = GroupContext::new(cfg.m, n)?.order();
    let mut out = json!({
        "m": cfg.m,
        "n": n,
        "shapes": shapes,
        "sum_d_squared": sum_sq.to_string(),
        "group_order": order.map(|o| o.to_string()),
        "identity_holds": order == Some(sum_sq),
    });
    if let Some(s) = &cfg.shape {
        let shape = parse_shape(cfg.m, s)?;
        let tabs: Vec<serde_json::Value> = enumerate_standard_tableaux(&shape)
            .iter()
            .map(|t| t.to_json())
            .collect();
        out["tableaux"] = json!(tabs);
    }
    Ok(out)
}

pub fn cmd_compute(cfg: &RunConfig) -> Result<serde_json::Value> {
    let raw = cfg
        .tableau
        .as_deref()
        .ok_or_else(|| Error::InvalidTableau("--tableau is required".into()))?;
    let t = parse_tableau(cfg.m, raw)?;
    if let Some(s) = &cfg.shape {
        if &parse_shape(cfg.m, s)? != t.shape() {
            return Err(Error::InvalidTableau(
                "tableau does not have the given shape".into(),
            ));
        }
    }
    let ctx = GroupContext::new(cfg.m, cfg.n.unwrap_or(t.size()))?;
    let input = FusionInput::in_context(ctx, &t, cfg.limit)?;
    let e = match cfg.method {
        Method::Consecutive => consecutive_evaluation(&input)?,
        Method::Inductive => inductive_evaluation(&input)?,
        Method::JmOracle => jm_idempotent(ctx, &t)?,
    };
    Ok(json!({
        "element": e,
        "provenance": {
            "method": cfg.method.name(),
            "shape": t.shape(),
            "tableau": t.to_json(),
            "f": format_rational(&f_constant(t.shape())),
        }
    }))
}

/// Returns the report and whether every check passed.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(serde_json::Value, bool)> {
    let n = cfg
        .n
        .ok_or_else(|| Error::InvalidParameter("--n is required".into()))?;
    let report = run_verify(&VerifyOptions {
        m: cfg.m,
        n,
        limit: cfg.limit,
        jobs: cfg.jobs,
        inject_corruption: cfg.inject_corruption,
    })?;
    let pass = report.all_pass();
    Ok((
        serde_json::to_value(&report).expect("report serializes"),
        pass,
    ))
}

fn emit(cfg: &RunConfig, value: &serde_json::Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json value");
    text.push('\n');
    match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let (cfg, result) = match &cli.command {
        Command::Enumerate(cfg) => (cfg, cmd_enumerate(cfg).map(|v| (v, true))),
        Command::Compute(cfg) => (cfg, cmd_compute(cfg).map(|v| (v, true))),
        Command::Verify(cfg) => (cfg, cmd_verify(cfg)),
    };
    match result {
        Ok((value, pass)) => {
            if let Err(e) = emit(cfg, &value) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_INVALID_INPUT;
            }
            if pass {
                0
            } else {
                if let Some(failures) = value.as_array() {
                    for f in failures.iter().filter(|f| f["pass"] == false) {
                        eprintln!(
                            "FAIL {} {}: {}",
                            f["check"].as_str().unwrap_or(""),
                            f["subject"].as_str().unwrap_or(""),
                            f["detail"].as_str().unwrap_or("")
                        );
                    }
                }
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
