//! `ties` command-line tool: corpus feature extraction plus small utilities
//! for inspecting distance matrices, persistence diagrams, and the
//! train/eval harness.
//!
//! Exit codes: 0 success, 1 configuration or I/O failure, 2 run completed
//! but skipped one or more documents.

pub mod args;
pub mod commands;
pub mod config;
pub mod formats;

use anyhow::Result;

use crate::args::{Cli, Command};
use crate::commands::ExtractOutcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SKIPPED: i32 = 2;

/// Run one parsed invocation; the returned code is the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Extract(args) => {
            let cfg = config::resolve_extract(&args)?;
            match commands::cmd_extract(&cfg)? {
                ExtractOutcome::Clean => Ok(EXIT_OK),
                ExtractOutcome::SkippedSome => Ok(EXIT_SKIPPED),
            }
        }
        Command::Ph(args) => commands::cmd_ph(&args).map(|()| EXIT_OK),
        Command::Dist(args) => commands::cmd_dist(&args).map(|()| EXIT_OK),
        Command::Train(args) => commands::cmd_train(&args).map(|()| EXIT_OK),
        Command::Eval(args) => commands::cmd_eval(&args).map(|()| EXIT_OK),
    }
}
