use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chirosat::chirotope::Chirotope;
use chirosat::complex::{SurfaceReport, Triangulation};
use chirosat::encode::{encode_instance, EncodeOptions};
use chirosat::solve::{self, DecideOptions, DecisionReport, SatStatus, SolveOptions};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_UNSAT: u8 = 10;
pub const EXIT_UNKNOWN: u8 = 20;

pub fn decide_exit_code(status: SatStatus) -> u8 {
    match status {
        SatStatus::Sat => EXIT_OK,
        SatStatus::Unsat => EXIT_UNSAT,
        SatStatus::Unknown => EXIT_UNKNOWN,
    }
}

pub fn status_word(status: SatStatus) -> &'static str {
    match status {
        SatStatus::Sat => "SAT",
        SatStatus::Unsat => "UNSAT",
        SatStatus::Unknown => "UNKNOWN",
    }
}

pub fn parse_triple(s: &str) -> Result<[u32; 3], String> {
    let v: Vec<u32> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad vertex '{t}'")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| format!("expected three vertices, got '{s}'"))
}

/// A facet file together with its name and SHA-256.
pub struct Input {
    pub name: String,
    pub checksum: String,
    pub complex: Triangulation,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into())
}

pub fn load(path: &Path) -> Result<Input> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let complex = Triangulation::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Input {
        name: stem(path),
        checksum: sha256_hex(&bytes),
        complex,
    })
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn emit_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn surface_text(r: &SurfaceReport) -> String {
    let genus = r.genus.map_or("-".to_string(), |g| g.to_string());
    format!(
        "closed: {}\norientable: {}\nV E F: {} {} {}\neuler: {}\ngenus: {}",
        r.closed, r.orientable, r.vertices, r.edges, r.facets, r.euler, genus
    )
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    instance: &'a str,
    checksum: &'a str,
    #[serde(flatten)]
    complex: &'a Triangulation,
    #[serde(flatten)]
    report: &'a SurfaceReport,
}

pub fn validate(path: &Path, cfg: &RunConfig) -> Result<u8> {
    let input = load(path)?;
    let report = input.complex.validate_surface();
    match cfg.format {
        Format::Json => emit_json(&ValidateOutput {
            instance: &input.name,
            checksum: &input.checksum,
            complex: &input.complex,
            report: &report,
        })?,
        Format::Text => println!("{}\n{}", input.name, surface_text(&report)),
    }
    Ok(if report.closed && report.orientable {
        EXIT_OK
    } else {
        EXIT_NO
    })
}

pub fn encode(path: &Path, cfg: &RunConfig, annotate: bool) -> Result<u8> {
    let input = load(path)?;
    let enc = encode_instance(&input.complex, cfg.rank, cfg.mode, encode_options(cfg))?;
    let dir = out_dir(cfg)?;
    let cnf = dir.join(format!("{}.cnf", input.name));
    let varmap = dir.join(format!("{}.varmap.json", input.name));
    let stats = dir.join(format!("{}.stats.json", input.name));
    let mut buf = Vec::new();
    writeln!(buf, "c instance {} {}", input.name, input.checksum)?;
    writeln!(buf, "c mode {} rank {}", cfg.mode, cfg.rank)?;
    enc.formula.write_dimacs(&mut buf, Some(&enc.varmap), annotate)?;
    write_file(&cnf, &buf)?;
    write_file(&varmap, format!("{:#}\n", enc.varmap.to_json()).as_bytes())?;
    write_file(
        &stats,
        format!("{}\n", serde_json::to_string_pretty(&enc.stats)?).as_bytes(),
    )?;
    let header = format!("p cnf {} {}", enc.formula.num_vars(), enc.formula.len());
    match cfg.format {
        Format::Json => emit_json(&serde_json::json!({
            "instance": input.name,
            "checksum": input.checksum,
            "mode": cfg.mode,
            "rank": cfg.rank,
            "header": header,
            "stats": enc.stats,
            "files": [cnf, varmap, stats],
        }))?,
        Format::Text => {
            let s = &enc.stats;
            println!("{header}");
            println!(
                "variables {} gp {} acyclic {} pairs {} admissibility {} total {}",
                s.variables, s.gp_clauses, s.acyclic_clauses, s.pairs, s.admissibility_clauses, s.total_clauses
            );
            println!("wrote {}", cnf.display());
        }
    }
    Ok(EXIT_OK)
}

fn encode_options(cfg: &RunConfig) -> EncodeOptions {
    EncodeOptions {
        break_negation: cfg.break_negation,
    }
}

pub fn decide_options(cfg: &RunConfig) -> DecideOptions {
    DecideOptions {
        rank: cfg.rank,
        backend: cfg.backend.clone(),
        solve: SolveOptions { timeout: cfg.timeout },
        encode: encode_options(cfg),
        cross_check: cfg.cross_check.clone(),
    }
}

/// Report JSON with wall-clock fields removed, so reruns compare equal.
pub fn persistent_report(report: &DecisionReport) -> Result<String> {
    let mut value = serde_json::to_value(report)?;
    if let Some(obj) = value.as_object_mut() {
        obj.remove("times");
        if let Some(cc) = obj.get_mut("cross_check").and_then(|v| v.as_object_mut()) {
            cc.remove("wall_time_s");
        }
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
}

/// Runs the decision pipeline and writes `<name>.report.json` (plus
/// `<name>.chirotope` on SAT) into `dir`.
pub fn decide_and_write(input: &Input, cfg: &RunConfig, dir: &Path) -> Result<DecisionReport> {
    let mut report = solve::decide(&input.complex, cfg.mode, &decide_options(cfg))?;
    report.instance = Some(input.name.clone());
    report.checksum = Some(input.checksum.clone());
    write_file(
        &dir.join(format!("{}.report.json", input.name)),
        persistent_report(&report)?.as_bytes(),
    )?;
    if let Some(model) = &report.model {
        write_file(
            &dir.join(format!("{}.chirotope", input.name)),
            format!("{model}\n").as_bytes(),
        )?;
    }
    Ok(report)
}

pub fn decide(path: &Path, cfg: &RunConfig) -> Result<u8> {
    let input = load(path)?;
    let dir = out_dir(cfg)?;
    let report = decide_and_write(&input, cfg, &dir)?;
    if let Some(cc) = &report.cross_check {
        if !cc.agrees {
            bail!(
                "{} reported UNSAT but cross-check {} reported {:?}",
                report.solver,
                cc.solver,
                cc.status
            );
        }
    }
    match cfg.format {
        Format::Json => emit_json(&report)?,
        Format::Text => {
            println!("{}: {} ({})", input.name, status_word(report.status), report.solver);
            println!("{}", report.conclusion);
            if let Some(cc) = &report.cross_check {
                println!("confirmed by {}: {}", cc.solver, status_word(cc.status));
            }
            println!(
                "encode {:.2}s solve {:.2}s verify {:.2}s",
                report.times.encode_s, report.times.solve_s, report.times.verify_s
            );
        }
    }
    Ok(decide_exit_code(report.status))
}

/// Counts and archives every admissible chirotope. Each model and its
/// negation describe one oriented matroid, so both totals are reported.
pub fn enumerate(path: &Path, cfg: &RunConfig, up_to_negation: bool) -> Result<u8> {
    let input = load(path)?;
    let up_to_negation = up_to_negation || cfg.break_negation;
    let options = EncodeOptions {
        break_negation: up_to_negation,
    };
    let enc = encode_instance(&input.complex, cfg.rank, cfg.mode, options)?;
    let dir = out_dir(cfg)?;
    let archive = dir.join(format!("{}.chirotopes", input.name));
    let mut buf = Vec::new();
    writeln!(buf, "# instance {} {}", input.name, input.checksum)?;
    writeln!(
        buf,
        "# mode {} rank {} up-to-negation {}",
        cfg.mode, cfg.rank, up_to_negation
    )?;
    let mut classes = BTreeSet::new();
    let summary = solve::enumerate_models(
        &enc.formula,
        &enc.varmap,
        &cfg.backend,
        cfg.limit,
        &SolveOptions { timeout: cfg.timeout },
        |chi| {
            buf.extend_from_slice(chi.to_string().as_bytes());
            buf.push(b'\n');
            classes.insert(chi.negation_representative().signs().to_vec());
        },
    )?;
    let oriented_matroids = classes.len() as u64;
    writeln!(
        buf,
        "# count {} oriented-matroids {} exhaustive {}",
        summary.count, oriented_matroids, summary.exhaustive
    )?;
    write_file(&archive, &buf)?;
    match cfg.format {
        Format::Json => emit_json(&serde_json::json!({
            "instance": input.name,
            "checksum": input.checksum,
            "mode": cfg.mode,
            "rank": cfg.rank,
            "up_to_negation": up_to_negation,
            "count": summary.count,
            "oriented_matroids": oriented_matroids,
            "exhaustive": summary.exhaustive,
            "final_status": summary.final_status,
            "archive": archive,
        }))?,
        Format::Text => {
            let qualifier = if summary.exhaustive { "exactly" } else { "at least" };
            println!(
                "{}: {qualifier} {} chirotopes ({} up to negation)",
                input.name, summary.count, oriented_matroids
            );
            println!("wrote {}", archive.display());
        }
    }
    Ok(if summary.final_status == SatStatus::Unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    })
}

/// Reads a chirotope from plain text, the first entry of an enumeration
/// archive, or the `model` field of a decide report.
pub fn read_chirotope(path: &Path) -> Result<Chirotope> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let report: serde_json::Value = serde_json::from_str(&text).context("parsing decide report")?;
        let model = report["model"].as_str().context("report carries no chirotope")?;
        return Ok(model.parse::<Chirotope>()?);
    }
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .context("no chirotope found")?;
    Ok(line.parse::<Chirotope>()?)
}

pub fn certify(complex: &Path, chirotope: &Path, cfg: &RunConfig) -> Result<u8> {
    let input = load(complex)?;
    let chi = read_chirotope(chirotope)?;
    let cert = solve::verify_certificate(&chi, &input.complex, cfg.mode)?;
    match cfg.format {
        Format::Json => emit_json(&serde_json::json!({
            "instance": input.name,
            "checksum": input.checksum,
            "mode": cfg.mode,
            "ok": cert.ok(),
            "certificate": cert,
        }))?,
        Format::Text => {
            println!(
                "{}: gp {} acyclic {} admissible {}",
                input.name, cert.gp_ok, cert.acyclic_ok, cert.admissible_ok
            );
            for w in cert.gp_violations.iter().take(5) {
                println!("  gp violation at sigma {:?} quadruple {:?}", w.sigma, w.quadruple);
            }
            if let Some(c) = &cert.positive_circuit {
                println!("  positive circuit on {:?}", c.support);
            }
            for p in &cert.admissibility_violations {
                println!("  triangle {:?} meets edge {:?}", p.triangle, p.edge);
            }
        }
    }
    Ok(if cert.ok() { EXIT_OK } else { EXIT_NO })
}

fn write_surgery(result: &Triangulation, name: &str, note: &str, cfg: &RunConfig) -> Result<u8> {
    let dir = out_dir(cfg)?;
    let path = dir.join(format!("{name}.txt"));
    write_file(&path, format!("# {note}\n{}", result.to_facet_text()).as_bytes())?;
    let checksum = sha256_hex(&fs::read(&path)?);
    let report = result.validate_surface();
    match cfg.format {
        Format::Json => emit_json(&serde_json::json!({
            "instance": name,
            "checksum": checksum,
            "path": path,
            "n": result.n(),
            "report": report,
        }))?,
        Format::Text => println!("wrote {}\n{}", path.display(), surface_text(&report)),
    }
    Ok(EXIT_OK)
}

pub fn remove_facet(path: &Path, facet: [u32; 3], name: Option<String>, cfg: &RunConfig) -> Result<u8> {
    let input = load(path)?;
    let result = input.complex.remove_facet(facet)?;
    let [a, b, c] = facet;
    let name = name.unwrap_or_else(|| format!("{}-minus-{a}-{b}-{c}", input.name));
    let note = format!("{} ({}) without facet {a} {b} {c}", input.name, input.checksum);
    write_surgery(&result, &name, &note, cfg)
}

pub fn connected_sum(
    first: &Path,
    second: &Path,
    facet: [u32; 3],
    other_facet: [u32; 3],
    ident: Option<[u32; 3]>,
    name: Option<String>,
    cfg: &RunConfig,
) -> Result<u8> {
    let s = load(first)?;
    let t = load(second)?;
    let mut sorted = facet;
    sorted.sort_unstable();
    let (other_facet_ordered, ident) = match ident {
        Some(ident) => (other_facet, ident),
        None => {
            let mut o = other_facet;
            o.sort_unstable();
            (o, sorted)
        }
    };
    let result = s.complex.connected_sum(&t.complex, facet, other_facet_ordered, ident)?;
    let name = name.unwrap_or_else(|| format!("{}-sum-{}", s.name, t.name));
    let note = format!(
        "connected sum of {} ({}) and {} ({}) along {:?} / {:?}",
        s.name, s.checksum, t.name, t.checksum, facet, other_facet
    );
    write_surgery(&result, &name, &note, cfg)
}
