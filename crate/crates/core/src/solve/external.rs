//! Running a DIMACS solver as a subprocess.
//!
//! The command template is split on whitespace (no shell). Placeholders:
//! `{input}` is the DIMACS path (appended if absent), `{output}` a result
//! file in the MiniSat style, `{proof}` the proof trace path when one was
//! requested. Results are read from SAT-competition `s`/`v` lines, then
//! from the output file, then from the exit status (10 = SAT, 20 = UNSAT).

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use super::{RawOutcome, SatStatus, Session};
use crate::error::SolveError;

static RUN_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub command: String,
    /// Where to keep the solver's proof trace (not checked).
    pub proof: Option<PathBuf>,
    /// Directory for the temporary DIMACS file; the system temp dir if unset.
    pub work_dir: Option<PathBuf>,
}

impl ExternalSolver {
    pub fn new(command: &str) -> Self {
        ExternalSolver {
            command: command.trim().to_string(),
            proof: None,
            work_dir: None,
        }
    }

    pub(crate) fn session(&self, num_vars: usize) -> ExternalSession {
        ExternalSession {
            solver: self.clone(),
            num_vars,
            clauses: Vec::new(),
        }
    }

    fn argv(&self, input: &Path, output: &Path) -> Vec<String> {
        let mut has_input = false;
        let mut argv: Vec<String> = self
            .command
            .split_whitespace()
            .map(|tok| {
                if tok.contains("{input}") {
                    has_input = true;
                }
                let mut t = tok.replace("{input}", &input.display().to_string());
                t = t.replace("{output}", &output.display().to_string());
                if let Some(p) = &self.proof {
                    t = t.replace("{proof}", &p.display().to_string());
                }
                t
            })
            .collect();
        if !has_input {
            argv.push(input.display().to_string());
        }
        argv
    }

    /// Writes `dimacs` to a temporary file, runs the solver until it exits or
    /// `deadline` passes, and interprets its output.
    pub fn run(&self, dimacs: &str, num_vars: usize, deadline: Instant) -> Result<ExternalOutcome, SolveError> {
        let dir = self.work_dir.clone().unwrap_or_else(std::env::temp_dir);
        std::fs::create_dir_all(&dir)?;
        let tag = format!(
            "chirosat-{}-{}",
            std::process::id(),
            RUN_COUNTER.fetch_add(1, Ordering::Relaxed)
        );
        let input = dir.join(format!("{tag}.cnf"));
        let output = dir.join(format!("{tag}.out"));
        std::fs::write(&input, dimacs)?;
        let result = self.run_files(&input, &output, num_vars, deadline);
        let _ = std::fs::remove_file(&input);
        let _ = std::fs::remove_file(&output);
        result
    }

    fn run_files(
        &self,
        input: &Path,
        output: &Path,
        num_vars: usize,
        deadline: Instant,
    ) -> Result<ExternalOutcome, SolveError> {
        let argv = self.argv(input, output);
        let mut command = Command::new(&argv[0]);
        #[cfg(unix)]
        {
            // own process group, so wrapper scripts die with their children
            use std::os::unix::process::CommandExt;
            command.process_group(0);
        }
        let mut child = match command
            .args(&argv[1..])
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
        {
            Ok(c) => c,
            Err(e) => {
                return Ok(ExternalOutcome::unknown(format!("failed to start '{}': {e}", argv[0])));
            }
        };
        let mut stdout = child.stdout.take().expect("piped");
        let mut stderr = child.stderr.take().expect("piped");
        let out_reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });
        let err_reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });
        let exit = loop {
            if let Some(status) = child.try_wait()? {
                break Some(status);
            }
            if Instant::now() >= deadline {
                #[cfg(unix)]
                // SAFETY: plain syscall; the group id is the child's pid
                unsafe {
                    libc::kill(-(child.id() as libc::pid_t), libc::SIGKILL);
                }
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            std::thread::sleep(Duration::from_millis(5));
        };
        let stdout = out_reader.join().unwrap_or_default();
        let stderr = err_reader.join().unwrap_or_default();
        let Some(exit) = exit else {
            return Ok(ExternalOutcome::unknown("time limit reached; solver killed".into()));
        };
        let file = std::fs::read_to_string(output).ok();
        let mut parsed = parse_solver_output(&stdout, file.as_deref(), exit.code(), num_vars);
        if parsed.status == SatStatus::Unknown && parsed.diagnostics.is_none() {
            let tail: String = stderr.lines().rev().take(5).collect::<Vec<_>>().join(" | ");
            parsed.diagnostics = Some(format!("exit status {exit}; stderr: {tail}"));
        }
        Ok(parsed)
    }
}

/// What an external solver reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalOutcome {
    pub status: SatStatus,
    pub model: Option<Vec<bool>>,
    pub diagnostics: Option<String>,
}

impl ExternalOutcome {
    fn unknown(why: String) -> Self {
        ExternalOutcome {
            status: SatStatus::Unknown,
            model: None,
            diagnostics: Some(why),
        }
    }
}

fn parse_values<'a>(tokens: impl Iterator<Item = &'a str>, num_vars: usize) -> Result<Option<Vec<bool>>, String> {
    let mut model = vec![None; num_vars];
    let mut any = false;
    for tok in tokens {
        let x: i64 = tok.parse().map_err(|_| format!("bad value token '{tok}'"))?;
        if x == 0 {
            continue;
        }
        let v = x.unsigned_abs() as usize;
        if v > num_vars {
            // solvers may report auxiliary variables; ignore them
            continue;
        }
        model[v - 1] = Some(x > 0);
        any = true;
    }
    if !any && num_vars > 0 {
        return Ok(None);
    }
    Ok(Some(model.into_iter().map(|v| v.unwrap_or(false)).collect()))
}

/// Interprets solver output.
///
/// `stdout` is scanned for `s SATISFIABLE` / `s UNSATISFIABLE` / `s UNKNOWN`
/// and `v` lines. A MiniSat-style result file (`SAT`/`UNSAT`/`INDET`
/// followed by values) is used if there is no status line. Failing both,
/// exit codes 10 and 20 decide the status. A SAT answer without values is
/// reported as unknown.
pub fn parse_solver_output(
    stdout: &str,
    result_file: Option<&str>,
    exit_code: Option<i32>,
    num_vars: usize,
) -> ExternalOutcome {
    let mut status = None;
    let mut values: Vec<&str> = Vec::new();
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => Some(SatStatus::Sat),
                "UNSATISFIABLE" => Some(SatStatus::Unsat),
                _ => Some(SatStatus::Unknown),
            };
        } else if let Some(rest) = line.strip_prefix("v ") {
            values.extend(rest.split_whitespace());
        } else if line == "v" {
            continue;
        }
    }
    if status.is_none() {
        if let Some(file) = result_file {
            let mut lines = file.lines();
            match lines.next().map(str::trim) {
                Some("SAT") => {
                    status = Some(SatStatus::Sat);
                    values = lines.flat_map(str::split_whitespace).collect();
                }
                Some("UNSAT") => status = Some(SatStatus::Unsat),
                Some(_) => status = Some(SatStatus::Unknown),
                None => {}
            }
        }
    }
    if status.is_none() {
        status = match exit_code {
            Some(10) => Some(SatStatus::Sat),
            Some(20) => Some(SatStatus::Unsat),
            _ => None,
        };
    }
    match status {
        None => ExternalOutcome::unknown(format!("no status line; exit code {exit_code:?}")),
        Some(SatStatus::Sat) => match parse_values(values.into_iter(), num_vars) {
            Ok(Some(model)) => ExternalOutcome {
                status: SatStatus::Sat,
                model: Some(model),
                diagnostics: None,
            },
            Ok(None) => ExternalOutcome::unknown("solver reported SAT without a model".into()),
            Err(e) => ExternalOutcome::unknown(e),
        },
        Some(s) => ExternalOutcome {
            status: s,
            model: None,
            diagnostics: None,
        },
    }
}

/// Re-runs the solver from scratch on the accumulated clause set.
pub(crate) struct ExternalSession {
    solver: ExternalSolver,
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl Session for ExternalSession {
    fn add_clause(&mut self, clause: &[i32]) {
        self.clauses.push(clause.to_vec());
    }

    fn solve(&mut self, deadline: Instant) -> Result<RawOutcome, SolveError> {
        let mut text = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for x in c {
                text.push_str(&x.to_string());
                text.push(' ');
            }
            text.push_str("0\n");
        }
        let out = self.solver.run(&text, self.num_vars, deadline)?;
        Ok(RawOutcome {
            status: out.status,
            model: out.model,
            diagnostics: out.diagnostics,
        })
    }
}
