use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mediafp::kb::{Os, RecordFilter};
use mediafp::report::{self, ReportFormat, ScanOptions};
use mediafp::MediaKind;

/// Infer which messenger a photo or video passed through.
#[derive(Parser)]
#[command(name = "mediafp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan files and directories and report a verdict per file.
    Scan {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Knowledge-base file or directory (defaults to the built-in one).
        #[arg(long, env = "MEDIAFP_KB")]
        kb: Option<PathBuf>,
        /// Also match two-hop forwarding chains.
        #[arg(long)]
        chains: bool,
        /// Include file modification times in the report.
        #[arg(long)]
        timestamps: bool,
    },
    /// Inspect the knowledge base.
    Kb {
        #[command(subcommand)]
        command: KbCommand,
    },
    /// Synthesize a file for every record and check that it is recognised.
    Selftest {
        #[arg(long, env = "MEDIAFP_KB")]
        kb: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum KbCommand {
    /// Check internal consistency and manifest counts.
    Validate {
        #[arg(long, env = "MEDIAFP_KB")]
        kb: Option<PathBuf>,
    },
    /// Print records matching a filter.
    List {
        #[arg(long)]
        app: Option<String>,
        #[arg(long)]
        os: Option<Os>,
        #[arg(long)]
        kind: Option<MediaKind>,
        #[arg(long, env = "MEDIAFP_KB")]
        kb: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match cli.command {
        Command::Scan {
            paths,
            format,
            kb,
            chains,
            timestamps,
        } => {
            let format = match format {
                Format::Text => ReportFormat::Text,
                Format::Json => ReportFormat::Json,
            };
            let opts = ScanOptions { chains, timestamps };
            report::scan_command(&paths, format, kb.as_deref(), opts, &mut out, &mut err)
        }
        Command::Kb {
            command: KbCommand::Validate { kb },
        } => report::kb_validate_command(kb.as_deref(), &mut out, &mut err),
        Command::Kb {
            command: KbCommand::List { app, os, kind, kb },
        } => {
            let filter = RecordFilter {
                app,
                os,
                media_kind: kind,
            };
            report::kb_list_command(kb.as_deref(), &filter, &mut out, &mut err)
        }
        Command::Selftest { kb } => report::selftest_command(kb.as_deref(), &mut out, &mut err),
    };
    code.into()
}
