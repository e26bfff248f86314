//! `chirosat`: decide polyhedral embeddability of triangulated surfaces.

mod batch;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Flags, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "chirosat",
    version,
    about = "Oriented-matroid obstructions to polyhedral surfaces"
)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a facet list is a closed orientable surface (exit 0) or not (exit 1).
    Validate { path: PathBuf },
    /// Write the DIMACS encoding, variable map and statistics.
    Encode {
        path: PathBuf,
        /// Add `c var` / `c clause` comment lines naming every variable and clause.
        #[arg(long)]
        annotate: bool,
    },
    /// Solve and verify. Exit 0 = SAT, 10 = UNSAT, 20 = UNKNOWN.
    Decide { path: PathBuf },
    /// Enumerate all admissible chirotopes into an archive.
    Enumerate {
        path: PathBuf,
        /// Keep one chirotope of each pair {X, -X} (first basis sign +).
        #[arg(long)]
        up_to_negation: bool,
    },
    /// Check a chirotope against a complex. Exit 0 iff admissible.
    Certify {
        complex: PathBuf,
        /// Chirotope text (`n r signs`), an enumeration archive, or a decide report.
        chirotope: PathBuf,
    },
    /// Remove a facet or glue two surfaces.
    #[command(subcommand)]
    Surgery(SurgeryCommand),
    /// Decide every instance listed in a TOML manifest.
    Batch { manifest: PathBuf },
}

#[derive(Debug, Subcommand)]
enum SurgeryCommand {
    /// Delete one facet.
    RemoveFacet {
        path: PathBuf,
        /// The facet, e.g. 1,2,3.
        #[arg(long, value_parser = commands::parse_triple)]
        facet: [u32; 3],
        /// Name of the output file (without extension).
        #[arg(long)]
        name: Option<String>,
    },
    /// Connected sum along a facet of each input.
    ConnectedSum {
        first: PathBuf,
        second: PathBuf,
        /// Facet of the first surface.
        #[arg(long, value_parser = commands::parse_triple)]
        facet: [u32; 3],
        /// Facet of the second surface.
        #[arg(long, value_parser = commands::parse_triple)]
        other_facet: [u32; 3],
        /// Images in `--facet` of the vertices of `--other-facet`, in order
        /// (default: the sorted facets are matched in order).
        #[arg(long, value_parser = commands::parse_triple)]
        ident: Option<[u32; 3]>,
        #[arg(long)]
        name: Option<String>,
    },
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    match cli.command {
        Command::Validate { path } => commands::validate(&path, &cfg),
        Command::Encode { path, annotate } => commands::encode(&path, &cfg, annotate),
        Command::Decide { path } => commands::decide(&path, &cfg),
        Command::Enumerate { path, up_to_negation } => commands::enumerate(&path, &cfg, up_to_negation),
        Command::Certify { complex, chirotope } => commands::certify(&complex, &chirotope, &cfg),
        Command::Surgery(SurgeryCommand::RemoveFacet { path, facet, name }) => {
            commands::remove_facet(&path, facet, name, &cfg)
        }
        Command::Surgery(SurgeryCommand::ConnectedSum {
            first,
            second,
            facet,
            other_facet,
            ident,
            name,
        }) => commands::connected_sum(&first, &second, facet, other_facet, ident, name, &cfg),
        Command::Batch { manifest } => batch::run(&manifest, &cfg),
    }
}

fn main() -> ExitCode {
    // behave like other filters when piped into `head`
    #[cfg(unix)]
    // SAFETY: called before any other thread exists
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_ERROR)
        }
    }
}
