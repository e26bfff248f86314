//! Uniform chirotopes: storage, alternating evaluation, construction from
//! integer point sets, circuit signatures, and the checks that certify a
//! sign map as an acyclic oriented matroid admissible for a complex.
//!
//! Nothing in here depends on the CNF encoder, so these checks can serve as
//! an independent verifier of solver output.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{sort_with_sign, subsets, Combinations, SubsetRanker};
use crate::complex::SimplexPair;
use crate::error::ChirotopeError;

/// A strictly increasing `r`-tuple over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Basis(Vec<u32>);

impl Basis {
    pub fn new(elements: Vec<u32>, n: usize, r: usize) -> Result<Self, ChirotopeError> {
        let ok = elements.len() == r
            && elements.windows(2).all(|w| w[0] < w[1])
            && elements.iter().all(|&e| e >= 1 && e as usize <= n);
        if ok {
            Ok(Basis(elements))
        } else {
            Err(ChirotopeError::InvalidTuple { tuple: elements, n, r })
        }
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

/// 1-based position of `basis` among all sorted `r`-subsets of `1..=n` in
/// lexicographic order.
pub fn basis_index(basis: &[u32], n: usize, r: usize) -> Result<u64, ChirotopeError> {
    let b = Basis::new(basis.to_vec(), n, r)?;
    Ok(SubsetRanker::new(n, r).rank(b.elements()))
}

/// A uniform chirotope of rank `r` on `1..=n`, stored as one sign per sorted
/// basis in lexicographic order.
#[derive(Clone)]
pub struct Chirotope {
    n: usize,
    r: usize,
    signs: Vec<i8>,
    ranker: SubsetRanker,
}

impl PartialEq for Chirotope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.signs == other.signs
    }
}

impl Eq for Chirotope {}

impl std::hash::Hash for Chirotope {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.r.hash(state);
        self.signs.hash(state);
    }
}

impl fmt::Debug for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chirotope({self})")
    }
}

impl Chirotope {
    fn check_rank(n: usize, r: usize) -> Result<(), ChirotopeError> {
        if r == 0 || r > n {
            Err(ChirotopeError::BadRank { n, r })
        } else {
            Ok(())
        }
    }

    /// `signs[i]` is the sign of the basis with rank `i + 1`; every entry must be ±1.
    pub fn from_signs(n: usize, r: usize, signs: Vec<i8>) -> Result<Self, ChirotopeError> {
        Self::check_rank(n, r)?;
        let ranker = SubsetRanker::new(n, r);
        let expected = ranker.count() as usize;
        if signs.len() != expected {
            return Err(ChirotopeError::WrongLength {
                expected,
                got: signs.len(),
            });
        }
        if let Some(&s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(ChirotopeError::BadSign(if s == 0 { '0' } else { '?' }));
        }
        Ok(Chirotope { n, r, signs, ranker })
    }

    /// Builds a chirotope by evaluating `sign` on every sorted basis.
    pub fn from_fn(n: usize, r: usize, mut sign: impl FnMut(&[u32]) -> i8) -> Result<Self, ChirotopeError> {
        Self::check_rank(n, r)?;
        let signs = subsets(n, r).map(|b| sign(&b)).collect();
        Self::from_signs(n, r, signs)
    }

    /// The chirotope that is `+1` on every sorted basis.
    pub fn alternating(n: usize, r: usize) -> Result<Self, ChirotopeError> {
        Self::from_fn(n, r, |_| 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Signs in basis-index order.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Sign of a sorted basis given by its 1-based index.
    pub fn sign_at(&self, index: u64) -> i8 {
        self.signs[index as usize - 1]
    }

    /// Sign of a sorted basis. The caller guarantees `basis` is valid.
    #[inline]
    fn sorted_sign(&self, basis: &[u32]) -> i8 {
        self.signs[self.ranker.rank(basis) as usize - 1]
    }

    /// Value on an arbitrary `r`-tuple: `0` if an entry repeats, otherwise
    /// the sign of the sorting permutation times the sign of the sorted tuple.
    pub fn eval(&self, tuple: &[u32]) -> Result<i8, ChirotopeError> {
        if tuple.len() != self.r || tuple.iter().any(|&e| e == 0 || e as usize > self.n) {
            return Err(ChirotopeError::InvalidTuple {
                tuple: tuple.to_vec(),
                n: self.n,
                r: self.r,
            });
        }
        let mut sorted = tuple.to_vec();
        let perm = sort_with_sign(&mut sorted);
        if perm == 0 {
            return Ok(0);
        }
        Ok(perm * self.sorted_sign(&sorted))
    }

    fn eval_unchecked(&self, tuple: &mut [u32]) -> i8 {
        let perm = sort_with_sign(tuple);
        if perm == 0 {
            0
        } else {
            perm * self.sorted_sign(tuple)
        }
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.signs {
            *s = -*s;
        }
        out
    }

    /// The member of `{self, -self}` whose first nonzero sign is `+1`; both
    /// describe the same oriented matroid.
    pub fn negation_representative(&self) -> Self {
        match self.signs.iter().find(|&&s| s != 0) {
            Some(&s) if s < 0 => self.negate(),
            _ => self.clone(),
        }
    }

    /// Reorientation on `elements`: flips every basis containing an odd
    /// number of them.
    pub fn reorient(&self, elements: &[u32]) -> Self {
        let mut out = self.clone();
        for (s, b) in out.signs.iter_mut().zip(subsets(self.n, self.r)) {
            let hits = b.iter().filter(|e| elements.contains(e)).count();
            if hits % 2 == 1 {
                *s = -*s;
            }
        }
        out
    }

    /// Signs of the exact `r x r` determinants of the homogenized points
    /// (a leading `1` prepended to each coordinate vector).
    pub fn from_points(points: &PointConfiguration) -> Result<Self, ChirotopeError> {
        let r = points.dim() + 1;
        let n = points.len();
        Self::check_rank(n, r)?;
        let mut signs = Vec::new();
        for b in subsets(n, r) {
            let rows: Vec<Vec<i128>> = b
                .iter()
                .map(|&e| {
                    std::iter::once(1i128)
                        .chain(points.point(e).iter().map(|&c| c as i128))
                        .collect()
                })
                .collect();
            match exact_det_sign(rows)? {
                0 => return Err(ChirotopeError::Degenerate(b)),
                s => signs.push(s),
            }
        }
        Self::from_signs(n, r, signs)
    }

    /// Checks every three-term Grassmann–Plücker relation by brute force.
    pub fn verify_gp(&self, scope: CheckScope) -> GpReport {
        let mut violations = Vec::new();
        if self.r < 2 {
            return GpReport { ok: true, violations };
        }
        let mut checked = 0u64;
        let mut buf = vec![0u32; self.r];
        for sigma in subsets(self.n, self.r - 2) {
            let rest: Vec<u32> = (1..=self.n as u32).filter(|e| !sigma.contains(e)).collect();
            buf[..self.r - 2].copy_from_slice(&sigma);
            for x in Combinations::new(rest, 4) {
                checked += 1;
                let mut chi = |a: u32, b: u32| {
                    buf[self.r - 2] = a;
                    buf[self.r - 1] = b;
                    let mut t = buf.clone();
                    self.eval_unchecked(&mut t)
                };
                let p1 = chi(x[0], x[1]) * chi(x[2], x[3]);
                let p2 = -chi(x[0], x[2]) * chi(x[1], x[3]);
                let p3 = chi(x[0], x[3]) * chi(x[1], x[2]);
                let has_pos = p1 > 0 || p2 > 0 || p3 > 0;
                let has_neg = p1 < 0 || p2 < 0 || p3 < 0;
                if !(has_pos && has_neg) {
                    violations.push(GpWitness {
                        sigma: sigma.clone(),
                        quadruple: [x[0], x[1], x[2], x[3]],
                        products: [p1, p2, p3],
                    });
                    if scope == CheckScope::FirstViolation {
                        return GpReport { ok: false, violations };
                    }
                }
            }
        }
        debug_assert!(checked > 0 || self.n < self.r + 2);
        GpReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// Circuit signature on `support` (an increasing `(r+1)`-tuple), using
    /// `C_i = (-1)^i chi(support without c_i)` with `i` 1-based, normalized so
    /// the first sign is `+1`.
    pub fn circuit(&self, support: &[u32]) -> Result<SignedCircuit, ChirotopeError> {
        if support.len() != self.r + 1
            || !support.windows(2).all(|w| w[0] < w[1])
            || support.iter().any(|&e| e == 0 || e as usize > self.n)
        {
            return Err(ChirotopeError::SupportSize {
                support: support.to_vec(),
                expected: self.r + 1,
            });
        }
        let mut signs = Vec::with_capacity(support.len());
        let mut rest = Vec::with_capacity(self.r);
        for i in 0..support.len() {
            rest.clear();
            rest.extend(support.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e));
            // position i here is 0-based, so (-1)^(i+1)
            let parity = if i % 2 == 0 { -1 } else { 1 };
            signs.push(parity * self.sorted_sign(&rest));
        }
        Ok(SignedCircuit::new(support.to_vec(), signs).canonical())
    }

    /// One canonical circuit per `(r+1)`-subset, in lexicographic order of supports.
    pub fn circuits(&self) -> Vec<SignedCircuit> {
        subsets(self.n, self.r + 1)
            .map(|s| self.circuit(&s).expect("valid support"))
            .collect()
    }

    /// A circuit all of whose signs agree, if one exists.
    pub fn positive_circuit(&self) -> Option<SignedCircuit> {
        subsets(self.n, self.r + 1)
            .map(|s| self.circuit(&s).expect("valid support"))
            .find(|c| c.signs.iter().all(|&s| s == 1))
    }

    pub fn is_acyclic(&self) -> bool {
        self.positive_circuit().is_none()
    }

    /// Checks that no circuit has positive part exactly `triangle` and
    /// negative part exactly `edge` (or the reverse, for the negated
    /// circuit) on any of `pairs`.
    pub fn is_admissible(&self, pairs: &[SimplexPair]) -> Result<AdmissibilityReport, ChirotopeError> {
        let mut violations = Vec::new();
        for pair in pairs {
            let support = pair.support();
            if support.len() != self.r + 1 {
                return Err(ChirotopeError::SupportSize {
                    support,
                    expected: self.r + 1,
                });
            }
            let c = self.circuit(&support)?;
            let (pos, neg) = (c.positive(), c.negative());
            let f = pair.triangle.to_vec();
            let g = pair.edge.to_vec();
            if (pos == f && neg == g) || (pos == g && neg == f) {
                violations.push(*pair);
            }
        }
        Ok(AdmissibilityReport {
            ok: violations.is_empty(),
            violations,
        })
    }
}

impl fmt::Display for Chirotope {
    /// `n r <signs>` with one `+`/`-` per basis in basis-index order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.n, self.r)?;
        for &s in &self.signs {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for Chirotope {
    type Err = ChirotopeError;

    /// Accepts ASCII `-` and the Unicode minus sign.
    fn from_str(s: &str) -> Result<Self, ChirotopeError> {
        let mut parts = s.split_whitespace();
        let mut num = |what: &str| -> Result<usize, ChirotopeError> {
            parts
                .next()
                .ok_or_else(|| ChirotopeError::BadHeader(format!("missing {what}")))?
                .parse()
                .map_err(|_| ChirotopeError::BadHeader(format!("bad {what}")))
        };
        let n = num("n")?;
        let r = num("r")?;
        let body: String = parts.collect();
        let signs = body
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '\u{2212}' => Ok(-1),
                other => Err(ChirotopeError::BadSign(other)),
            })
            .collect::<Result<Vec<i8>, _>>()?;
        Chirotope::from_signs(n, r, signs)
    }
}

/// How far a check runs after the first violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckScope {
    FirstViolation,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpWitness {
    pub sigma: Vec<u32>,
    pub quadruple: [u32; 4],
    /// The three products of the relation; a violation has them all equal.
    pub products: [i8; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpReport {
    pub ok: bool,
    pub violations: Vec<GpWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub violations: Vec<SimplexPair>,
}

/// A signed circuit of a uniform oriented matroid: an increasing support
/// with one sign per element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedCircuit {
    pub support: Vec<u32>,
    pub signs: Vec<i8>,
}

impl SignedCircuit {
    pub fn new(support: Vec<u32>, signs: Vec<i8>) -> Self {
        debug_assert_eq!(support.len(), signs.len());
        SignedCircuit { support, signs }
    }

    /// Circuit with `positive` signed `+` and `negative` signed `-`.
    pub fn from_parts(positive: &[u32], negative: &[u32]) -> Self {
        let mut elems: Vec<(u32, i8)> = positive
            .iter()
            .map(|&e| (e, 1))
            .chain(negative.iter().map(|&e| (e, -1)))
            .collect();
        elems.sort_unstable();
        SignedCircuit {
            support: elems.iter().map(|e| e.0).collect(),
            signs: elems.iter().map(|e| e.1).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        SignedCircuit {
            support: self.support.clone(),
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// The member of `{C, -C}` whose first sign is `+1`.
    pub fn canonical(self) -> Self {
        if self.signs.first() == Some(&-1) {
            self.negated()
        } else {
            self
        }
    }

    pub fn positive(&self) -> Vec<u32> {
        self.part(1)
    }

    pub fn negative(&self) -> Vec<u32> {
        self.part(-1)
    }

    fn part(&self, sign: i8) -> Vec<u32> {
        self.support
            .iter()
            .zip(&self.signs)
            .filter(|&(_, &s)| s == sign)
            .map(|(&e, _)| e)
            .collect()
    }
}

/// Affine integer points of a common dimension; element `i` is `points[i - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfiguration {
    points: Vec<Vec<i64>>,
}

impl PointConfiguration {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self, ChirotopeError> {
        let d = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != d) {
            return Err(ChirotopeError::DimensionMismatch);
        }
        Ok(PointConfiguration { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Coordinates of element `e` (1-based).
    pub fn point(&self, e: u32) -> &[i64] {
        &self.points[e as usize - 1]
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }
}

/// Sign of a square integer determinant by fraction-free (Bareiss) elimination.
pub fn exact_det_sign(mut m: Vec<Vec<i128>>) -> Result<i8, ChirotopeError> {
    let size = m.len();
    let mut sign = 1i8;
    let mut prev = 1i128;
    for k in 0..size {
        if m[k][k] == 0 {
            match (k + 1..size).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let a = m[i][j].checked_mul(m[k][k]).ok_or(ChirotopeError::Overflow)?;
                let b = m[i][k].checked_mul(m[k][j]).ok_or(ChirotopeError::Overflow)?;
                m[i][j] = a.checked_sub(b).ok_or(ChirotopeError::Overflow)? / prev;
            }
        }
        prev = m[k][k];
    }
    let last = m[size - 1][size - 1];
    Ok(sign * last.signum() as i8)
}
