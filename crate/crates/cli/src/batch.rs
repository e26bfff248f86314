//! Deciding many instances from a manifest:
//!
//! ```toml
//! [[instance]]
//! name = "genus6"          # optional, defaults to the file stem
//! path = "genus6_no1.txt"  # relative to the manifest
//! mode = "immersion"       # optional override
//! ```

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};
use chirosat::complex::Mode;
use serde::{Deserialize, Serialize};

use crate::commands::{self, EXIT_ERROR, EXIT_OK};
use crate::config::{Format, RunConfig};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    instance: Vec<Entry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    name: Option<String>,
    path: PathBuf,
    mode: Option<Mode>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub name: String,
    pub mode: Mode,
    pub genus: Option<i64>,
    /// SAT, UNSAT, UNKNOWN or ERROR.
    pub status: String,
    pub time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn run_one(entry: &Entry, base: &Path, cfg: &RunConfig, dir: &Path) -> Row {
    let path = base.join(&entry.path);
    let mode = entry.mode.unwrap_or(cfg.mode);
    let name = entry.name.clone().unwrap_or_else(|| commands::stem(&path));
    let start = Instant::now();
    let mut row = Row {
        name: name.clone(),
        mode,
        genus: None,
        status: "ERROR".into(),
        time_s: 0.0,
        error: None,
    };
    let result = commands::load(&path).and_then(|mut input| {
        input.name = name;
        row.genus = input.complex.validate_surface().genus;
        let cfg = RunConfig { mode, ..cfg.clone() };
        commands::decide_and_write(&input, &cfg, dir)
    });
    match result {
        Ok(report) => match &report.cross_check {
            Some(cc) if !cc.agrees => {
                row.error = Some(format!("cross-check {} reported {:?}", cc.solver, cc.status));
            }
            _ => row.status = commands::status_word(report.status).into(),
        },
        Err(e) => row.error = Some(format!("{e:#}")),
    }
    row.time_s = start.elapsed().as_secs_f64();
    row
}

/// Summary rows in manifest order, whatever order the workers finish in.
pub fn run(manifest: &Path, cfg: &RunConfig) -> Result<u8> {
    let text = std::fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let parsed: Manifest = toml::from_str(&text).with_context(|| format!("parsing {}", manifest.display()))?;
    let base = manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let entries = parsed.instance;
    let rows: Mutex<Vec<Option<Row>>> = Mutex::new(vec![None; entries.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.min(entries.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(entry) = entries.get(i) else { break };
                let row = run_one(entry, &base, cfg, &dir);
                rows.lock().expect("no worker panics while holding the lock")[i] = Some(row);
            });
        }
    });
    let rows: Vec<Row> = rows
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .flatten()
        .collect();

    let mut summary = String::from("name\tmode\tgenus\tstatus\n");
    for r in &rows {
        let genus = r.genus.map_or("-".into(), |g| g.to_string());
        summary.push_str(&format!("{}\t{}\t{}\t{}\n", r.name, r.mode, genus, r.status));
    }
    std::fs::write(dir.join("summary.tsv"), &summary).context("writing summary")?;

    match cfg.format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
        Format::Text => {
            println!(
                "{:<24} {:<10} {:>5} {:<8} {:>10}",
                "name", "mode", "genus", "status", "time_s"
            );
            for r in &rows {
                let genus = r.genus.map_or("-".into(), |g| g.to_string());
                println!(
                    "{:<24} {:<10} {:>5} {:<8} {:>10.2}",
                    r.name, r.mode, genus, r.status, r.time_s
                );
                if let Some(e) = &r.error {
                    println!("    {e}");
                }
            }
        }
    }
    Ok(if rows.iter().any(|r| r.error.is_some()) {
        EXIT_ERROR
    } else {
        EXIT_OK
    })
}
