//! Command-line driver for the `qarch` tool.
//!
//! Every command is first resolved into a self-contained [`Invocation`],
//! executed, and then recorded in a [`RunManifest`] written next to its
//! outputs. `qarch replay <manifest>` feeds the recorded invocation back
//! through [`execute`].

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;

use chrono::{SecondsFormat, Utc};

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
pub use manifest::{Invocation, RunManifest};

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Runs an invocation and writes its manifest.
pub fn execute(invocation: Invocation, argv: Vec<String>) -> CliResult<RunManifest> {
    let started_at = now();
    let outputs = match &invocation {
        Invocation::GenGraphs(s) => commands::gen_graphs(s)?,
        Invocation::Search(s) => commands::search(s)?,
        Invocation::Evaluate(s) => commands::evaluate(s)?,
        Invocation::Bench(s) => commands::bench(s)?,
    };
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        argv,
        outputs,
        started_at,
        finished_at: now(),
        invocation,
    };
    commands::write_json(&manifest.invocation.manifest_path(), &manifest)?;
    Ok(manifest)
}

pub fn run(cli: &Cli, argv: Vec<String>) -> CliResult<RunManifest> {
    let invocation = match &cli.command {
        Command::Replay(r) => {
            let recorded: RunManifest = commands::read_json(&r.manifest)?;
            let mut inv = recorded.invocation;
            if let Some(out) = &r.out {
                let out = std::path::absolute(out).map_err(|source| CliError::Io {
                    path: out.clone(),
                    source,
                })?;
                inv.set_out(out);
            }
            inv
        }
        cmd => manifest::resolve(cmd)?,
    };
    execute(invocation, argv)
}
