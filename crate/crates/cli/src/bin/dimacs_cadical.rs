//! Minimal DIMACS front end to the linked CaDiCaL: prints `s` and `v` lines
//! and exits with 10 (SAT) or 20 (UNSAT), like a competition solver.

use std::process::ExitCode;
use std::time::Duration;

use chirosat::encode::{read_dimacs, CnfFormula};
use chirosat::solve::{solve, Backend, SatStatus, SolveOptions};

fn main() -> ExitCode {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: dimacs-cadical <file.cnf>");
        return ExitCode::from(1);
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("c cannot read {path}: {e}");
            return ExitCode::from(1);
        }
    };
    let (num_vars, clauses) = match read_dimacs(&text) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("c {e}");
            return ExitCode::from(1);
        }
    };
    let formula = CnfFormula::from_dimacs_clauses(num_vars, &clauses);
    let options = SolveOptions {
        timeout: Duration::from_secs(24 * 3600),
    };
    let verdict = match solve(&formula, &Backend::Cadical, &options) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("c {e}");
            return ExitCode::from(1);
        }
    };
    match verdict.status {
        SatStatus::Sat => {
            println!("s SATISFIABLE");
            let model = verdict.model.unwrap_or_default();
            let mut line = String::from("v");
            for (i, &b) in model.iter().enumerate() {
                let lit = if b { (i + 1) as i64 } else { -((i + 1) as i64) };
                line.push_str(&format!(" {lit}"));
            }
            println!("{line} 0");
            ExitCode::from(10)
        }
        SatStatus::Unsat => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        SatStatus::Unknown => {
            println!("s UNKNOWN");
            ExitCode::from(0)
        }
    }
}
