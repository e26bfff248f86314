//! Run configuration: an optional TOML file whose keys mirror the command
//! line flags, overridden by any flag given explicitly.

use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use chirosat::complex::Mode;
use chirosat::solve::{Backend, ExternalSolver, DEFAULT_TIMEOUT};
use clap::{Args, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with defaults for the flags below.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// embedding or immersion.
    #[arg(long, global = true)]
    pub mode: Option<Mode>,
    /// Rank of the oriented matroid (dimension + 1).
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// embedded, cadical, or external.
    #[arg(long, global = true)]
    pub backend: Option<String>,
    /// Command template for the external backend, e.g. "kissat -q {input}".
    #[arg(long, global = true, value_name = "TEMPLATE")]
    pub solver_cmd: Option<String>,
    /// Backend that must confirm every UNSAT verdict.
    #[arg(long, global = true, value_name = "BACKEND")]
    pub cross_check: Option<String>,
    /// Keep the external solver's proof trace here (substituted for {proof}).
    #[arg(long, global = true, value_name = "FILE")]
    pub proof: Option<PathBuf>,
    /// Per-instance time limit in seconds.
    #[arg(long, global = true, value_name = "SECS")]
    pub timeout: Option<f64>,
    /// Stop enumerating after this many models.
    #[arg(long, global = true)]
    pub limit: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Concurrent instances in batch mode.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Fix the sign of the first basis. Sound, since admissible chirotopes
    /// come in pairs {χ, −χ}; roughly halves the search on UNSAT instances.
    #[arg(long, global = true)]
    pub break_negation: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    mode: Option<Mode>,
    rank: Option<usize>,
    backend: Option<String>,
    solver_cmd: Option<String>,
    cross_check: Option<String>,
    proof: Option<PathBuf>,
    timeout: Option<f64>,
    limit: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    jobs: Option<usize>,
    break_negation: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub rank: usize,
    pub backend: Backend,
    pub cross_check: Option<Backend>,
    pub timeout: Duration,
    pub limit: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub break_negation: bool,
}

fn parse_backend(name: &str, solver_cmd: Option<&str>, proof: Option<&Path>) -> Result<Backend> {
    let backend = match (name, solver_cmd) {
        ("external", Some(cmd)) => Backend::External(ExternalSolver::new(cmd)),
        ("external", None) => bail!("--backend external needs --solver-cmd"),
        (other, _) => other.parse::<Backend>().map_err(anyhow::Error::msg)?,
    };
    Ok(match backend {
        Backend::External(mut ext) => {
            ext.proof = proof.map(Path::to_path_buf);
            Backend::External(ext)
        }
        b => b,
    })
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str::<FileConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let solver_cmd = flags.solver_cmd.clone().or(file.solver_cmd);
        let proof = flags.proof.clone().or(file.proof);
        let backend_name = flags
            .backend
            .clone()
            .or(file.backend)
            .unwrap_or_else(|| if solver_cmd.is_some() { "external" } else { "embedded" }.into());
        let backend = parse_backend(&backend_name, solver_cmd.as_deref(), proof.as_deref())?;
        if !backend.is_available() {
            bail!("backend '{}' is not compiled into this build", backend.name());
        }
        let cross_check = match flags.cross_check.clone().or(file.cross_check) {
            Some(name) => Some(parse_backend(&name, solver_cmd.as_deref(), proof.as_deref())?),
            None => None,
        };
        let rank = flags.rank.or(file.rank).unwrap_or(4);
        if rank < 3 {
            bail!("rank must be at least 3");
        }
        let timeout = match flags.timeout.or(file.timeout) {
            Some(s) if s > 0.0 && s.is_finite() => Duration::from_secs_f64(s),
            Some(s) => bail!("timeout must be positive, got {s}"),
            None => DEFAULT_TIMEOUT,
        };
        let jobs = flags
            .jobs
            .or(file.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        Ok(RunConfig {
            mode: flags.mode.or(file.mode).unwrap_or_default(),
            rank,
            backend,
            cross_check,
            timeout,
            limit: flags.limit.or(file.limit),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or_default(),
            jobs,
            break_negation: flags.break_negation || file.break_negation.unwrap_or(false),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "mode = \"immersion\"\nrank = 5\ntimeout = 30\nformat = \"text\"\n",
        )
        .unwrap();
        let flags = Flags {
            config: Some(path),
            rank: Some(4),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.mode, Mode::Immersion);
        assert_eq!(cfg.rank, 4);
        assert_eq!(cfg.timeout, Duration::from_secs(30));
        assert_eq!(cfg.format, Format::Text);
        assert_eq!(cfg.backend, Backend::Embedded);
    }

    #[test]
    fn rejects_bad_values() {
        let bad_rank = Flags {
            rank: Some(2),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&bad_rank).is_err());
        let bad_timeout = Flags {
            timeout: Some(0.0),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&bad_timeout).is_err());
        let no_cmd = Flags {
            backend: Some("external".into()),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&no_cmd).is_err());
    }

    #[test]
    fn solver_cmd_implies_external() {
        let flags = Flags {
            solver_cmd: Some("kissat -q".into()),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.backend.name(), "external:kissat -q");
    }

    #[test]
    fn unknown_keys_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "colour = \"blue\"\n").unwrap();
        let flags = Flags {
            config: Some(path),
            ..Flags::default()
        };
        assert!(RunConfig::resolve(&flags).is_err());
    }
}
