//! Deciding encoded instances: solver backends, model decoding, model
//! enumeration with blocking clauses, and certificate verification through
//! the chirotope checks (which share no code with the encoder).

pub mod cdcl;
pub mod external;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::chirotope::{AdmissibilityReport, CheckScope, Chirotope, GpWitness, SignedCircuit};
use crate::complex::{Mode, SimplexPair, Triangulation};
use crate::encode::{blocking_clause, encode_instance, CnfFormula, EncodeOptions, EncodingStats, Provenance, VarMap};
use crate::error::{ChirotopeError, EncodeError, SolveError};

pub use external::ExternalSolver;

/// Default per-instance time limit.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(2 * 60 * 60);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown,
}

/// Which SAT solver to run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    /// The built-in CDCL solver ([`cdcl::Solver`]).
    Embedded,
    /// CaDiCaL linked in-process.
    Cadical,
    /// Any DIMACS solver run as a subprocess.
    External(ExternalSolver),
}

impl Backend {
    pub fn name(&self) -> String {
        match self {
            Backend::Embedded => "embedded".into(),
            Backend::Cadical => "cadical".into(),
            Backend::External(e) => format!("external:{}", e.command),
        }
    }

    pub fn is_available(&self) -> bool {
        !matches!(self, Backend::Cadical) || cfg!(feature = "cadical")
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    /// `embedded`, `cadical`, or `external:<command template>`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "embedded" => Ok(Backend::Embedded),
            "cadical" => Ok(Backend::Cadical),
            _ => match s.strip_prefix("external:") {
                Some(cmd) if !cmd.trim().is_empty() => Ok(Backend::External(ExternalSolver::new(cmd))),
                _ => Err(format!(
                    "unknown backend '{s}' (expected embedded|cadical|external:<cmd>)"
                )),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub timeout: Duration,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

/// Result of one solver run. A `Sat` verdict always carries a total model
/// that has been checked against every clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverVerdict {
    pub status: SatStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Vec<bool>>,
    pub solver: String,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
}

pub(crate) struct RawOutcome {
    pub status: SatStatus,
    pub model: Option<Vec<bool>>,
    pub diagnostics: Option<String>,
}

/// A solver holding a clause set that can grow between calls.
pub(crate) trait Session {
    fn add_clause(&mut self, clause: &[i32]);
    fn solve(&mut self, deadline: Instant) -> Result<RawOutcome, SolveError>;
}

struct EmbeddedSession(cdcl::Solver);

impl Session for EmbeddedSession {
    fn add_clause(&mut self, clause: &[i32]) {
        self.0.add_clause(clause);
    }

    fn solve(&mut self, deadline: Instant) -> Result<RawOutcome, SolveError> {
        let status = self.0.solve(cdcl::Limits {
            deadline: Some(deadline),
            max_conflicts: None,
        });
        Ok(match status {
            cdcl::Status::Sat => RawOutcome {
                status: SatStatus::Sat,
                model: Some(self.0.model().to_vec()),
                diagnostics: None,
            },
            cdcl::Status::Unsat => RawOutcome {
                status: SatStatus::Unsat,
                model: None,
                diagnostics: None,
            },
            cdcl::Status::Unknown => RawOutcome {
                status: SatStatus::Unknown,
                model: None,
                diagnostics: Some("time limit reached".into()),
            },
        })
    }
}

#[cfg(feature = "cadical")]
struct CadicalSession {
    solver: cadical::Solver<cadical::Timeout>,
    num_vars: usize,
}

#[cfg(feature = "cadical")]
impl Session for CadicalSession {
    fn add_clause(&mut self, clause: &[i32]) {
        self.solver.add_clause(clause.iter().copied());
    }

    fn solve(&mut self, deadline: Instant) -> Result<RawOutcome, SolveError> {
        let left = deadline.saturating_duration_since(Instant::now());
        self.solver
            .set_callbacks(Some(cadical::Timeout::new(left.as_secs_f32())));
        Ok(match self.solver.solve() {
            Some(true) => RawOutcome {
                status: SatStatus::Sat,
                model: Some(
                    (1..=self.num_vars as i32)
                        .map(|v| self.solver.value(v).unwrap_or(false))
                        .collect(),
                ),
                diagnostics: None,
            },
            Some(false) => RawOutcome {
                status: SatStatus::Unsat,
                model: None,
                diagnostics: None,
            },
            None => RawOutcome {
                status: SatStatus::Unknown,
                model: None,
                diagnostics: Some("time limit reached".into()),
            },
        })
    }
}

fn open_session(backend: &Backend, formula: &CnfFormula) -> Result<Box<dyn Session>, SolveError> {
    let mut session: Box<dyn Session> = match backend {
        Backend::Embedded => {
            let mut s = cdcl::Solver::default();
            s.reserve_vars(formula.num_vars());
            Box::new(EmbeddedSession(s))
        }
        #[cfg(feature = "cadical")]
        Backend::Cadical => {
            let mut solver: cadical::Solver<cadical::Timeout> = cadical::Solver::new();
            solver.reserve(formula.num_vars() as i32);
            Box::new(CadicalSession {
                solver,
                num_vars: formula.num_vars(),
            })
        }
        #[cfg(not(feature = "cadical"))]
        Backend::Cadical => return Err(SolveError::Unavailable("cadical".into())),
        Backend::External(ext) => Box::new(ext.session(formula.num_vars())),
    };
    let mut buf = Vec::new();
    for c in formula.clauses() {
        buf.clear();
        buf.extend(c.iter().map(|l| l.dimacs()));
        session.add_clause(&buf);
    }
    Ok(session)
}

fn checked(formula: &CnfFormula, extra: &[Vec<i32>], solver: &str, outcome: &RawOutcome) -> Result<(), SolveError> {
    if let Some(model) = &outcome.model {
        if model.len() != formula.num_vars() {
            return Err(SolveError::BadModel {
                solver: solver.into(),
                clause: 0,
            });
        }
        if let Some(i) = formula.first_violated(model) {
            return Err(SolveError::BadModel {
                solver: solver.into(),
                clause: i + 1,
            });
        }
        let sat = |c: &Vec<i32>| c.iter().any(|&x| model[x.unsigned_abs() as usize - 1] == (x > 0));
        if let Some(i) = extra.iter().position(|c| !sat(c)) {
            return Err(SolveError::BadModel {
                solver: solver.into(),
                clause: formula.len() + i + 1,
            });
        }
    }
    Ok(())
}

/// Decides `formula`. Any model is checked against every clause before it
/// is returned; a model that fails is an error, never a verdict.
pub fn solve(formula: &CnfFormula, backend: &Backend, options: &SolveOptions) -> Result<SolverVerdict, SolveError> {
    let start = Instant::now();
    let mut session = open_session(backend, formula)?;
    let outcome = session.solve(start + options.timeout)?;
    checked(formula, &[], &backend.name(), &outcome)?;
    Ok(SolverVerdict {
        status: outcome.status,
        model: outcome.model,
        solver: backend.name(),
        wall_time_s: start.elapsed().as_secs_f64(),
        diagnostics: outcome.diagnostics,
    })
}

/// `chi(B) = +1` iff the variable of `B` is true.
pub fn decode_model(model: &[bool], vm: &VarMap) -> Result<Chirotope, SolveError> {
    if model.len() != vm.num_vars() {
        return Err(EncodeError::PartialModel {
            expected: vm.num_vars(),
            got: model.len(),
        }
        .into());
    }
    let signs = model.iter().map(|&b| if b { 1 } else { -1 }).collect();
    Ok(Chirotope::from_signs(vm.n(), vm.r(), signs)?)
}

/// The model a chirotope induces on `vm`'s variables.
pub fn encode_chirotope(chi: &Chirotope) -> Vec<bool> {
    chi.signs().iter().map(|&s| s > 0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub count: u64,
    /// True iff the search ended in UNSAT, so `count` is the exact number of models.
    pub exhaustive: bool,
    pub final_status: SatStatus,
}

/// Enumerates models by repeatedly solving and blocking the previous model.
/// `on_model` sees each decoded chirotope in discovery order.
pub fn enumerate_models(
    formula: &CnfFormula,
    vm: &VarMap,
    backend: &Backend,
    limit: Option<u64>,
    options: &SolveOptions,
    mut on_model: impl FnMut(&Chirotope),
) -> Result<EnumerationSummary, SolveError> {
    let deadline = Instant::now() + options.timeout;
    let mut session = open_session(backend, formula)?;
    let mut blocked: Vec<Vec<i32>> = Vec::new();
    let mut count = 0u64;
    loop {
        if limit.is_some_and(|l| count >= l) {
            return Ok(EnumerationSummary {
                count,
                exhaustive: false,
                final_status: SatStatus::Sat,
            });
        }
        let outcome = session.solve(deadline)?;
        checked(formula, &blocked, &backend.name(), &outcome)?;
        match outcome.status {
            SatStatus::Sat => {
                let model = outcome.model.expect("checked above");
                let chi = decode_model(&model, vm)?;
                on_model(&chi);
                count += 1;
                let block: Vec<i32> = blocking_clause(&model, vm)?.iter().map(|l| l.dimacs()).collect();
                session.add_clause(&block);
                blocked.push(block);
            }
            status => {
                return Ok(EnumerationSummary {
                    count,
                    exhaustive: status == SatStatus::Unsat,
                    final_status: status,
                })
            }
        }
    }
}

/// Independent verdicts on a chirotope for a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub gp_ok: bool,
    pub acyclic_ok: bool,
    pub admissible_ok: bool,
    pub gp_violations: Vec<GpWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_circuit: Option<SignedCircuit>,
    pub admissibility_violations: Vec<SimplexPair>,
}

impl CertificateReport {
    pub fn ok(&self) -> bool {
        self.gp_ok && self.acyclic_ok && self.admissible_ok
    }
}

/// Checks that `chi` is an acyclic uniform chirotope admissible for
/// `complex` in `mode`.
pub fn verify_certificate(
    chi: &Chirotope,
    complex: &Triangulation,
    mode: Mode,
) -> Result<CertificateReport, SolveError> {
    if chi.n() != complex.n() {
        return Err(ChirotopeError::GroundSetMismatch {
            chirotope: chi.n(),
            complex: complex.n(),
        }
        .into());
    }
    let gp = chi.verify_gp(CheckScope::Exhaustive);
    let positive_circuit = chi.positive_circuit();
    let AdmissibilityReport { ok, violations } = chi.is_admissible(&complex.forbidden_pairs(mode))?;
    Ok(CertificateReport {
        gp_ok: gp.ok,
        acyclic_ok: positive_circuit.is_none(),
        admissible_ok: ok,
        gp_violations: gp.violations,
        positive_circuit,
        admissibility_violations: violations,
    })
}

#[derive(Debug, Clone)]
pub struct DecideOptions {
    pub rank: usize,
    pub backend: Backend,
    pub solve: SolveOptions,
    pub encode: EncodeOptions,
    /// Second backend that must agree on any UNSAT verdict.
    pub cross_check: Option<Backend>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            rank: 4,
            backend: Backend::Embedded,
            solve: SolveOptions::default(),
            encode: EncodeOptions::default(),
            cross_check: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub encode_s: f64,
    pub solve_s: f64,
    pub verify_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub solver: String,
    pub status: SatStatus,
    pub wall_time_s: f64,
    pub agrees: bool,
}

/// Outcome of the full encode / solve / verify pipeline for one complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checksum: Option<String>,
    pub mode: Mode,
    pub rank: usize,
    pub status: SatStatus,
    pub stats: EncodingStats,
    /// The certifying chirotope, serialized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    pub times: Timings,
    pub solver: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
    pub conclusion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
}

impl DecisionReport {
    pub fn chirotope(&self) -> Option<Chirotope> {
        self.model.as_deref().and_then(|s| s.parse().ok())
    }
}

fn conclusion(status: SatStatus, mode: Mode, r: usize) -> String {
    let d = r - 1;
    let what = match mode {
        Mode::Embedding => "polyhedrally embeddable",
        Mode::Immersion => "polyhedrally immersable",
    };
    match status {
        SatStatus::Sat => format!(
            "admits a verified acyclic uniform rank-{r} oriented matroid; no obstruction to being {what} in R^{d}"
        ),
        SatStatus::Unsat => {
            format!("no admissible acyclic uniform rank-{r} oriented matroid exists; not {what} in R^{d}")
        }
        SatStatus::Unknown => "inconclusive".into(),
    }
}

/// Encodes, solves, and on SAT verifies the decoded chirotope. A SAT model
/// that fails verification is an error.
pub fn decide(complex: &Triangulation, mode: Mode, options: &DecideOptions) -> Result<DecisionReport, SolveError> {
    let t0 = Instant::now();
    let enc = encode_instance(complex, options.rank, mode, options.encode)?;
    let encode_s = t0.elapsed().as_secs_f64();

    let verdict = solve(&enc.formula, &options.backend, &options.solve)?;
    let mut report = DecisionReport {
        instance: None,
        checksum: None,
        mode,
        rank: options.rank,
        status: verdict.status,
        stats: enc.stats,
        model: None,
        certificate: None,
        times: Timings {
            encode_s,
            solve_s: verdict.wall_time_s,
            verify_s: 0.0,
        },
        solver: verdict.solver.clone(),
        cross_check: None,
        conclusion: conclusion(verdict.status, mode, options.rank),
        diagnostics: verdict.diagnostics.clone(),
    };

    match verdict.status {
        SatStatus::Sat => {
            let t1 = Instant::now();
            let chi = decode_model(verdict.model.as_deref().expect("SAT carries a model"), &enc.varmap)?;
            let cert = verify_certificate(&chi, complex, mode)?;
            report.times.verify_s = t1.elapsed().as_secs_f64();
            if !cert.ok() {
                return Err(SolveError::CertificateRejected(format!(
                    "gp_ok={} acyclic_ok={} admissible_ok={}",
                    cert.gp_ok, cert.acyclic_ok, cert.admissible_ok
                )));
            }
            report.model = Some(chi.to_string());
            report.certificate = Some(cert);
        }
        SatStatus::Unsat => {
            if let Some(second) = &options.cross_check {
                let other = solve(&enc.formula, second, &options.solve)?;
                report.cross_check = Some(CrossCheck {
                    solver: other.solver,
                    status: other.status,
                    wall_time_s: other.wall_time_s,
                    agrees: other.status == SatStatus::Unsat,
                });
            }
        }
        SatStatus::Unknown => {}
    }
    Ok(report)
}

/// Provenance tags of clauses violated by `model`; handy for explaining why
/// a given chirotope is rejected by the encoding.
pub fn violated_provenance(formula: &CnfFormula, model: &[bool]) -> Vec<Provenance> {
    formula
        .clauses()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.iter().any(|l| l.eval(model)))
        .flat_map(|(i, _)| formula.provenance(i).to_vec())
        .collect()
}
