//! CNF encoding of "there is an acyclic uniform chirotope of rank `r`
//! admissible for this complex".
//!
//! One variable per sorted `r`-subset `B` (true means `chi(B) = +1`).
//! Signs of unsorted tuples are folded into literal polarity, so the
//! alternating axiom needs no clauses of its own.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::chirotope::SignedCircuit;
use crate::combinatorics::{binomial, sort_with_sign, subsets, Combinations, SubsetRanker};
use crate::complex::{Edge, Mode, SimplexPair, Triangle, Triangulation};
use crate::error::{ChirotopeError, EncodeError};

/// A DIMACS literal: variable id with sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lit(i32);

impl Lit {
    /// `var` is 1-based.
    pub fn new(var: u32, positive: bool) -> Self {
        debug_assert!(var >= 1);
        Lit(if positive { var as i32 } else { -(var as i32) })
    }

    pub fn from_dimacs(x: i32) -> Self {
        debug_assert!(x != 0);
        Lit(x)
    }

    pub fn dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Truth value of this literal under a total model (`model[v - 1]`).
    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var() as usize - 1] == self.is_positive()
    }
}

impl std::ops::Neg for Lit {
    type Output = Lit;
    fn neg(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Clause = Vec<Lit>;

/// Bijection between sorted `r`-subsets of `1..=n` and variables `1..=C(n, r)`.
#[derive(Debug, Clone)]
pub struct VarMap {
    ranker: SubsetRanker,
}

impl VarMap {
    pub fn new(n: usize, r: usize) -> Result<Self, ChirotopeError> {
        if r == 0 || r > n {
            return Err(ChirotopeError::BadRank { n, r });
        }
        Ok(VarMap {
            ranker: SubsetRanker::new(n, r),
        })
    }

    pub fn n(&self) -> usize {
        self.ranker.n()
    }

    pub fn r(&self) -> usize {
        self.ranker.k()
    }

    pub fn num_vars(&self) -> usize {
        self.ranker.count() as usize
    }

    /// Variable of a sorted basis. The caller guarantees validity.
    pub fn var(&self, basis: &[u32]) -> u32 {
        self.ranker.rank(basis) as u32
    }

    pub fn basis(&self, var: u32) -> Vec<u32> {
        self.ranker.unrank(var as u64)
    }

    /// Literal asserting `chi(tuple) = polarity`, with the sign of the
    /// sorting permutation absorbed into the literal's polarity.
    pub fn canonical_literal(&self, tuple: &[u32], polarity: i8) -> Result<Lit, ChirotopeError> {
        let invalid = || ChirotopeError::InvalidTuple {
            tuple: tuple.to_vec(),
            n: self.n(),
            r: self.r(),
        };
        if tuple.len() != self.r() || tuple.iter().any(|&e| e == 0 || e as usize > self.n()) {
            return Err(invalid());
        }
        let mut sorted = tuple.to_vec();
        let perm = sort_with_sign(&mut sorted);
        if perm == 0 {
            return Err(invalid());
        }
        Ok(Lit::new(self.var(&sorted), perm * polarity > 0))
    }

    /// `{"n":..,"r":..,"variables":[{"id":1,"basis":[..]},..]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let vars: Vec<serde_json::Value> = subsets(self.n(), self.r())
            .enumerate()
            .map(|(i, b)| serde_json::json!({ "id": i + 1, "basis": b }))
            .collect();
        serde_json::json!({ "n": self.n(), "r": self.r(), "variables": vars })
    }
}

/// Where a clause came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Gp {
        sigma: Vec<u32>,
        quadruple: [u32; 4],
    },
    Acyclic {
        support: Vec<u32>,
    },
    Pair {
        triangle: Triangle,
        edge: Edge,
    },
    /// Unit clause fixing the sign of the first basis.
    Symmetry,
    Blocking,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        match self {
            Provenance::Gp { sigma, quadruple } => {
                write!(f, "gp {} : {}", join(sigma), join(quadruple))
            }
            Provenance::Acyclic { support } => write!(f, "acyclic {}", join(support)),
            Provenance::Pair { triangle, edge } => {
                write!(f, "pair {} : {}", join(triangle), join(edge))
            }
            Provenance::Symmetry => f.write_str("symmetry"),
            Provenance::Blocking => f.write_str("blocking"),
        }
    }
}

/// A clause list with per-clause provenance. Identical clauses are stored
/// once, with every provenance tag that produced them.
#[derive(Debug, Clone, Default)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
    provenance: Vec<Vec<Provenance>>,
    index: HashMap<Vec<Lit>, usize>,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> Self {
        CnfFormula {
            num_vars,
            ..Default::default()
        }
    }

    /// Builds a formula from raw DIMACS integers (no provenance).
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[Vec<i32>]) -> Self {
        let mut f = CnfFormula::new(num_vars);
        for c in clauses {
            f.push(c.iter().map(|&x| Lit::from_dimacs(x)).collect(), Provenance::Blocking);
        }
        f
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn provenance(&self, clause: usize) -> &[Provenance] {
        &self.provenance[clause]
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Appends a clause; returns `false` if an identical clause was already
    /// present (its provenance is recorded on the existing clause).
    pub fn push(&mut self, clause: Clause, tag: Provenance) -> bool {
        debug_assert!(!clause.is_empty());
        debug_assert!(clause.iter().all(|l| l.var() as usize <= self.num_vars));
        debug_assert!(!clause.iter().any(|&l| clause.contains(&-l)));
        let mut key = clause.clone();
        key.sort_unstable();
        match self.index.get(&key) {
            Some(&i) => {
                self.provenance[i].push(tag);
                false
            }
            None => {
                self.index.insert(key, self.clauses.len());
                self.clauses.push(clause);
                self.provenance.push(vec![tag]);
                true
            }
        }
    }

    /// Index of the first clause the total model falsifies.
    pub fn first_violated(&self, model: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| !c.iter().any(|l| l.eval(model)))
    }

    /// Writes DIMACS CNF. With `comments`, the variable map and clause
    /// provenance precede the header as `c` lines.
    pub fn write_dimacs<W: Write>(&self, sink: &mut W, varmap: Option<&VarMap>, comments: bool) -> io::Result<()> {
        let mut w = io::BufWriter::new(sink);
        if comments {
            if let Some(vm) = varmap {
                writeln!(w, "c chirotope encoding n={} r={}", vm.n(), vm.r())?;
                for (i, b) in subsets(vm.n(), vm.r()).enumerate() {
                    let b: Vec<String> = b.iter().map(u32::to_string).collect();
                    writeln!(w, "c var {} {}", i + 1, b.join(" "))?;
                }
            }
            for (i, tags) in self.provenance.iter().enumerate() {
                for t in tags {
                    writeln!(w, "c clause {} {}", i + 1, t)?;
                }
            }
        }
        writeln!(w, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        let mut line = String::new();
        for c in &self.clauses {
            line.clear();
            for l in c {
                line.push_str(&l.0.to_string());
                line.push(' ');
            }
            line.push('0');
            writeln!(w, "{line}")?;
        }
        w.flush()
    }

    pub fn to_dimacs_string(&self, varmap: Option<&VarMap>, comments: bool) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf, varmap, comments)
            .expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Parses DIMACS CNF into `(num_vars, clauses)`.
pub fn read_dimacs(text: &str) -> Result<(usize, Vec<Vec<i32>>), EncodeError> {
    let mut header = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(EncodeError::Dimacs(format!("bad header '{line}'")));
            }
            let v = parts[1]
                .parse()
                .map_err(|_| EncodeError::Dimacs("bad variable count".into()))?;
            let c: usize = parts[2]
                .parse()
                .map_err(|_| EncodeError::Dimacs("bad clause count".into()))?;
            header = Some((v, c));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| EncodeError::Dimacs("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let x: i32 = tok
                .parse()
                .map_err(|_| EncodeError::Dimacs(format!("bad literal '{tok}'")))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if x.unsigned_abs() as usize > nv {
                    return Err(EncodeError::Dimacs(format!("literal {x} exceeds {nv} variables")));
                }
                current.push(x);
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| EncodeError::Dimacs("missing header".into()))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != nc {
        return Err(EncodeError::Dimacs(format!(
            "header promises {nc} clauses, found {}",
            clauses.len()
        )));
    }
    Ok((nv, clauses))
}

/// Rows of the clause table for one three-term Grassmann–Plücker relation
/// over the literals `[α], [β], [γ], [δ], [ε], [ζ]`: `true` is a positive
/// literal. Each row blocks one of the 16 sign patterns in which the
/// products `αβ`, `-γδ`, `εζ` are all equal.
pub const GP_TABLE: [[bool; 6]; 16] = {
    const T: bool = true;
    const F: bool = false;
    [
        [F, F, F, T, F, F],
        [F, F, F, T, T, T],
        [F, F, T, F, F, F],
        [F, F, T, F, T, T],
        [F, T, F, F, F, T],
        [F, T, F, F, T, F],
        [F, T, T, T, F, T],
        [F, T, T, T, T, F],
        [T, F, F, F, F, T],
        [T, F, F, F, T, F],
        [T, F, T, T, F, T],
        [T, F, T, T, T, F],
        [T, T, F, T, F, F],
        [T, T, F, T, T, T],
        [T, T, T, F, F, F],
        [T, T, T, F, T, T],
    ]
};

/// The 16 six-literal clauses for the relation on `sigma` and `x1 < x2 < x3 < x4`.
pub fn gp_clauses(sigma: &[u32], quad: [u32; 4], vm: &VarMap) -> Result<Vec<Clause>, EncodeError> {
    if quad.iter().any(|x| sigma.contains(x)) || !quad.windows(2).all(|w| w[0] < w[1]) {
        return Err(EncodeError::Overlap {
            sigma: sigma.to_vec(),
            quad: quad.to_vec(),
        });
    }
    let tuple = |a: u32, b: u32| {
        let mut t = sigma.to_vec();
        t.push(a);
        t.push(b);
        t
    };
    let [x1, x2, x3, x4] = quad;
    let terms = [
        tuple(x1, x2), // α
        tuple(x3, x4), // β
        tuple(x1, x3), // γ
        tuple(x2, x4), // δ
        tuple(x1, x4), // ε
        tuple(x2, x3), // ζ
    ];
    let pos = terms
        .iter()
        .map(|t| vm.canonical_literal(t, 1))
        .collect::<Result<Vec<Lit>, _>>()?;
    Ok(GP_TABLE
        .iter()
        .map(|row| row.iter().zip(&pos).map(|(&p, &l)| if p { l } else { -l }).collect())
        .collect())
}

/// Two clauses of `r + 1` literals that hold iff the chirotope's circuit
/// signature on `circuit.support` is neither `C` nor `-C`.
pub fn forbid_circuit_clauses(circuit: &SignedCircuit, vm: &VarMap) -> Result<[Clause; 2], EncodeError> {
    let support = &circuit.support;
    if support.len() != vm.r() + 1 {
        return Err(ChirotopeError::SupportSize {
            support: support.clone(),
            expected: vm.r() + 1,
        }
        .into());
    }
    // ℓ_i asserts chi(support \ c_i) = (-1)^i s_i, i.e. signature agrees with C at i
    let mut agree = Vec::with_capacity(support.len());
    for (idx, &s) in circuit.signs.iter().enumerate() {
        let i = idx + 1;
        let target = if i % 2 == 0 { s } else { -s };
        let rest: Vec<u32> = support
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, &e)| e)
            .collect();
        agree.push(vm.canonical_literal(&rest, target)?);
    }
    let not_c: Clause = agree.iter().map(|&l| -l).collect();
    let not_minus_c: Clause = agree;
    Ok([not_c, not_minus_c])
}

/// Forbids an all-positive circuit on every `(r+1)`-subset.
pub fn acyclicity_clauses(vm: &VarMap) -> Result<Vec<(Clause, Provenance)>, EncodeError> {
    let mut out = Vec::new();
    for s in subsets(vm.n(), vm.r() + 1) {
        let c = SignedCircuit::new(s.clone(), vec![1; s.len()]);
        let tag = Provenance::Acyclic { support: s };
        for clause in forbid_circuit_clauses(&c, vm)? {
            out.push((clause, tag.clone()));
        }
    }
    Ok(out)
}

/// For each pair, forbids the circuit with positive part the triangle and
/// negative part the edge.
pub fn admissibility_clauses(pairs: &[SimplexPair], vm: &VarMap) -> Result<Vec<(Clause, Provenance)>, EncodeError> {
    let mut out = Vec::with_capacity(2 * pairs.len());
    for p in pairs {
        let c = SignedCircuit::from_parts(&p.triangle, &p.edge);
        let tag = Provenance::Pair {
            triangle: p.triangle,
            edge: p.edge,
        };
        for clause in forbid_circuit_clauses(&c, vm)? {
            out.push((clause, tag.clone()));
        }
    }
    Ok(out)
}

/// The clause excluding exactly `model`.
pub fn blocking_clause(model: &[bool], vm: &VarMap) -> Result<Clause, EncodeError> {
    if model.len() != vm.num_vars() {
        return Err(EncodeError::PartialModel {
            expected: vm.num_vars(),
            got: model.len(),
        });
    }
    Ok(model
        .iter()
        .enumerate()
        .map(|(i, &v)| Lit::new(i as u32 + 1, !v))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EncodingStats {
    pub variables: usize,
    pub gp_clauses: usize,
    pub acyclic_clauses: usize,
    pub admissibility_clauses: usize,
    pub symmetry_clauses: usize,
    pub pairs: usize,
    /// Clauses in the formula after removing exact duplicates.
    pub total_clauses: usize,
}

impl EncodingStats {
    /// Closed-form clause counts for rank `r` on `n` elements.
    pub fn expected_gp(n: usize, r: usize) -> u64 {
        if r < 2 {
            return 0;
        }
        16 * binomial(n, r - 2) * binomial(n - (r - 2), 4)
    }

    pub fn expected_acyclic(n: usize, r: usize) -> u64 {
        2 * binomial(n, r + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EncodeOptions {
    /// Add a unit clause fixing the first basis to `+1`. Sound for deciding
    /// (the model set is closed under global negation) but halves model counts.
    pub break_negation: bool,
}

/// A complete encoded instance.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub formula: CnfFormula,
    pub varmap: VarMap,
    pub stats: EncodingStats,
    pub pairs: Vec<SimplexPair>,
    pub mode: Mode,
}

/// Clauses for every GP relation, in `(sigma, quadruple)` lexicographic order.
pub fn all_gp_clauses(vm: &VarMap) -> Result<Vec<(Clause, Provenance)>, EncodeError> {
    let (n, r) = (vm.n(), vm.r());
    let mut out = Vec::new();
    if r < 2 {
        return Ok(out);
    }
    for sigma in subsets(n, r - 2) {
        let rest: Vec<u32> = (1..=n as u32).filter(|e| !sigma.contains(e)).collect();
        for x in Combinations::new(rest, 4) {
            let quad = [x[0], x[1], x[2], x[3]];
            let tag = Provenance::Gp {
                sigma: sigma.clone(),
                quadruple: quad,
            };
            for c in gp_clauses(&sigma, quad, vm)? {
                out.push((c, tag.clone()));
            }
        }
    }
    Ok(out)
}

/// GP + acyclicity + admissibility clauses for `complex` at rank `r`.
pub fn encode_instance(
    complex: &Triangulation,
    r: usize,
    mode: Mode,
    options: EncodeOptions,
) -> Result<Encoding, EncodeError> {
    let pairs = complex.forbidden_pairs(mode);
    encode_pairs(complex.n(), r, pairs, mode, options)
}

/// Same as [`encode_instance`] for an explicit pair list.
pub fn encode_pairs(
    n: usize,
    r: usize,
    pairs: Vec<SimplexPair>,
    mode: Mode,
    options: EncodeOptions,
) -> Result<Encoding, EncodeError> {
    let vm = VarMap::new(n, r)?;
    let mut formula = CnfFormula::new(vm.num_vars());
    let mut stats = EncodingStats {
        variables: vm.num_vars(),
        pairs: pairs.len(),
        ..Default::default()
    };
    for (c, tag) in all_gp_clauses(&vm)? {
        formula.push(c, tag);
        stats.gp_clauses += 1;
    }
    for (c, tag) in acyclicity_clauses(&vm)? {
        formula.push(c, tag);
        stats.acyclic_clauses += 1;
    }
    for (c, tag) in admissibility_clauses(&pairs, &vm)? {
        formula.push(c, tag);
        stats.admissibility_clauses += 1;
    }
    if options.break_negation {
        formula.push(vec![Lit::new(1, true)], Provenance::Symmetry);
        stats.symmetry_clauses = 1;
    }
    stats.total_clauses = formula.len();
    Ok(Encoding {
        formula,
        varmap: vm,
        stats,
        pairs,
        mode,
    })
}
