//! Triangulated surfaces: parsing, validation, vertex stars, the simplex pairs
//! whose intersection must be excluded, and the surgery used to build larger
//! surfaces from smaller ones.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ComplexError;

pub type Vertex = u32;
pub type Triangle = [Vertex; 3];
pub type Edge = [Vertex; 2];

fn sorted3(mut t: Triangle) -> Triangle {
    t.sort_unstable();
    t
}

fn sorted2(e: Edge) -> Edge {
    if e[0] <= e[1] {
        e
    } else {
        [e[1], e[0]]
    }
}

fn edges_of(t: &Triangle) -> [Edge; 3] {
    [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]
}

/// A pure 2-dimensional simplicial complex on the vertices `1..=n`.
///
/// Facets are stored sorted within each triangle and the facet list is kept
/// in lexicographic order, so two triangulations with the same facet set
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    n: usize,
    facets: Vec<Triangle>,
}

impl Triangulation {
    /// Builds a triangulation, checking that every facet has three distinct
    /// vertices in `1..=n`, that no facet repeats, and that every vertex is used.
    pub fn new(n: usize, facets: impl IntoIterator<Item = Triangle>) -> Result<Self, ComplexError> {
        let mut seen = BTreeSet::new();
        for raw in facets {
            if raw.iter().any(|&v| v == 0 || v as usize > n) {
                return Err(ComplexError::VertexOutOfRange { facet: raw, n });
            }
            let t = sorted3(raw);
            if t[0] == t[1] || t[1] == t[2] {
                return Err(ComplexError::RepeatedVertex(raw));
            }
            if !seen.insert(t) {
                return Err(ComplexError::DuplicateFacet(t));
            }
        }
        let mut used = vec![false; n + 1];
        for t in &seen {
            for &v in t {
                used[v as usize] = true;
            }
        }
        if let Some(v) = (1..=n).find(|&v| !used[v]) {
            return Err(ComplexError::UnusedVertex(v as Vertex));
        }
        Ok(Triangulation {
            n,
            facets: seen.into_iter().collect(),
        })
    }

    /// Builds a triangulation whose vertex count is the largest label used.
    pub fn from_facets(facets: impl IntoIterator<Item = Triangle>) -> Result<Self, ComplexError> {
        let facets: Vec<Triangle> = facets.into_iter().collect();
        let n = facets.iter().flatten().copied().max().unwrap_or(0) as usize;
        if facets.is_empty() {
            return Err(ComplexError::Empty);
        }
        Self::new(n, facets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[Triangle] {
        &self.facets
    }

    pub fn contains_facet(&self, facet: &Triangle) -> bool {
        self.facets.binary_search(&sorted3(*facet)).is_ok()
    }

    /// Sorted list of all edges of the complex.
    pub fn edges(&self) -> Vec<Edge> {
        let set: BTreeSet<Edge> = self.facets.iter().flat_map(edges_of).collect();
        set.into_iter().collect()
    }

    /// Number of facets containing each edge.
    pub fn edge_degrees(&self) -> BTreeMap<Edge, usize> {
        let mut deg = BTreeMap::new();
        for e in self.facets.iter().flat_map(edges_of) {
            *deg.entry(e).or_insert(0) += 1;
        }
        deg
    }

    /// Facets containing vertex `v`.
    pub fn facets_at(&self, v: Vertex) -> impl Iterator<Item = &Triangle> + '_ {
        self.facets.iter().filter(move |t| t.contains(&v))
    }

    /// Facet list as a flat text of triples, one facet per line.
    pub fn to_facet_text(&self) -> String {
        let mut s = String::new();
        for t in &self.facets {
            s.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
        }
        s
    }

    /// Parses a facet list.
    ///
    /// Accepts either a JSON array of triples or a flat sequence of positive
    /// integers separated by whitespace, commas, semicolons, `&` or `\\`
    /// (so rows of a LaTeX tabular paste in unchanged). Lines starting with
    /// `#` or `%` are comments. Consecutive integers are grouped into facets.
    pub fn parse(text: &str) -> Result<Self, ComplexError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('[') {
            let triples: Vec<Vec<i64>> =
                serde_json::from_str(trimmed).map_err(|e| ComplexError::Json(e.to_string()))?;
            let mut flat = Vec::new();
            for t in triples {
                if t.len() != 3 {
                    return Err(ComplexError::NotTriple(t.len()));
                }
                flat.extend(t);
            }
            return Self::from_flat(&flat);
        }
        let mut flat = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.starts_with('#') || line.starts_with('%') {
                continue;
            }
            for tok in line
                .split(|c: char| c.is_whitespace() || matches!(c, ',' | ';' | '&' | '\\'))
                .filter(|t| !t.is_empty())
            {
                let v: i64 = tok.parse().map_err(|_| ComplexError::BadToken(tok.to_string()))?;
                flat.push(v);
            }
        }
        Self::from_flat(&flat)
    }

    fn from_flat(flat: &[i64]) -> Result<Self, ComplexError> {
        if flat.is_empty() {
            return Err(ComplexError::Empty);
        }
        if !flat.len().is_multiple_of(3) {
            return Err(ComplexError::CountNotMultipleOfThree(flat.len()));
        }
        let mut facets = Vec::with_capacity(flat.len() / 3);
        let mut seen = BTreeSet::new();
        for chunk in flat.chunks(3) {
            if let Some(&bad) = chunk.iter().find(|&&v| v < 1 || v > u32::MAX as i64) {
                return Err(ComplexError::BadToken(bad.to_string()));
            }
            let t = [chunk[0] as u32, chunk[1] as u32, chunk[2] as u32];
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(ComplexError::RepeatedVertex(t));
            }
            if !seen.insert(sorted3(t)) {
                return Err(ComplexError::DuplicateFacet(sorted3(t)));
            }
            facets.push(t);
        }
        Self::from_facets(facets)
    }

    /// Combinatorial surface data: closedness, orientability, f-vector, genus.
    pub fn validate_surface(&self) -> SurfaceReport {
        let degrees = self.edge_degrees();
        let v = self.n;
        let e = degrees.len();
        let f = self.facets.len();
        let euler = v as i64 - e as i64 + f as i64;

        let pseudo = degrees.values().all(|&d| d == 2);
        let links_ok = pseudo && (1..=self.n as Vertex).all(|v| self.link_is_cycle(v));
        let connected = self.is_connected();
        let closed = pseudo && links_ok && connected;
        let orientable = self.is_orientable(&degrees);

        let genus = if closed && orientable {
            debug_assert_eq!(2 * e, 3 * f);
            Some((2 - euler) / 2)
        } else {
            None
        };
        SurfaceReport {
            closed,
            orientable,
            vertices: v,
            edges: e,
            facets: f,
            euler,
            genus,
        }
    }

    /// The link of `v` as a graph on its neighbours; true iff it is one cycle.
    fn link_is_cycle(&self, v: Vertex) -> bool {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        let mut link_edges = 0;
        for t in self.facets_at(v) {
            let others: Vec<Vertex> = t.iter().copied().filter(|&w| w != v).collect();
            adj.entry(others[0]).or_default().push(others[1]);
            adj.entry(others[1]).or_default().push(others[0]);
            link_edges += 1;
        }
        if adj.len() < 3 || adj.values().any(|nb| nb.len() != 2) {
            return false;
        }
        // walk the cycle from the smallest neighbour
        let start = *adj.keys().next().unwrap();
        let mut prev = start;
        let mut cur = adj[&start][0];
        let mut steps = 1;
        while cur != start {
            let nb = &adj[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
            steps += 1;
            if steps > link_edges {
                return false;
            }
        }
        steps == link_edges
    }

    fn facet_adjacency(&self) -> HashMap<Edge, Vec<usize>> {
        let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
        for (i, t) in self.facets.iter().enumerate() {
            for e in edges_of(t) {
                by_edge.entry(e).or_default().push(i);
            }
        }
        by_edge
    }

    fn is_connected(&self) -> bool {
        if self.facets.is_empty() {
            return false;
        }
        let by_edge = self.facet_adjacency();
        let mut seen = vec![false; self.facets.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for e in edges_of(&self.facets[i]) {
                for &j in &by_edge[&e] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Propagates a facet orientation across shared edges. Two facets sharing
    /// an edge are coherent when they traverse that edge in opposite directions.
    fn is_orientable(&self, degrees: &BTreeMap<Edge, usize>) -> bool {
        if degrees.values().any(|&d| d > 2) {
            return false;
        }
        let by_edge = self.facet_adjacency();
        // orientation[i] = Some(true) keeps the sorted vertex order, Some(false) flips it
        let mut orientation: Vec<Option<bool>> = vec![None; self.facets.len()];
        for root in 0..self.facets.len() {
            if orientation[root].is_some() {
                continue;
            }
            orientation[root] = Some(true);
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                let oi = orientation[i].unwrap();
                for e in edges_of(&self.facets[i]) {
                    let dir_i = edge_direction(&self.facets[i], &e) == oi;
                    for &j in &by_edge[&e] {
                        if j == i {
                            continue;
                        }
                        let dir_j_sorted = edge_direction(&self.facets[j], &e);
                        // facet j must traverse e opposite to facet i
                        let want = dir_j_sorted != dir_i;
                        match orientation[j] {
                            None => {
                                orientation[j] = Some(want);
                                stack.push(j);
                            }
                            Some(o) if o != want => return false,
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        true
    }

    /// Closed star of `v`: the facets containing `v` and all their faces.
    pub fn star(&self, v: Vertex) -> Result<Star, ComplexError> {
        if v == 0 || v as usize > self.n {
            return Err(ComplexError::VertexNotInComplex(v));
        }
        let triangles: Vec<Triangle> = self.facets_at(v).copied().collect();
        let edges: BTreeSet<Edge> = triangles.iter().flat_map(edges_of).collect();
        let vertices: BTreeSet<Vertex> = triangles.iter().flatten().copied().collect();
        Ok(Star {
            center: v,
            triangles,
            edges: edges.into_iter().collect(),
            vertices: vertices.into_iter().collect(),
        })
    }

    /// Triangle/edge pairs with disjoint vertex sets whose images must not
    /// meet. Sorted by `(triangle, edge)` and free of duplicates.
    pub fn forbidden_pairs(&self, mode: Mode) -> Vec<SimplexPair> {
        match mode {
            Mode::Embedding => {
                let edges = self.edges();
                let mut out = Vec::new();
                for t in &self.facets {
                    for e in &edges {
                        if !e.iter().any(|v| t.contains(v)) {
                            out.push(SimplexPair {
                                triangle: *t,
                                edge: *e,
                                origin: PairOrigin::Embedding,
                            });
                        }
                    }
                }
                out
            }
            Mode::Immersion => {
                let mut found: BTreeMap<(Triangle, Edge), Vertex> = BTreeMap::new();
                for v in 1..=self.n as Vertex {
                    let star = self.star(v).expect("vertex in range");
                    for t in &star.triangles {
                        for e in &star.edges {
                            if e.contains(&v) || e.iter().any(|w| t.contains(w)) {
                                continue;
                            }
                            // first (smallest) star centre wins the tag
                            found.entry((*t, *e)).or_insert(v);
                        }
                    }
                }
                found
                    .into_iter()
                    .map(|((triangle, edge), v)| SimplexPair {
                        triangle,
                        edge,
                        origin: PairOrigin::Star(v),
                    })
                    .collect()
            }
        }
    }

    /// The complex without `facet`. The vertex set is kept, so a vertex whose
    /// only facet was removed makes this an error.
    pub fn remove_facet(&self, facet: Triangle) -> Result<Self, ComplexError> {
        let f = sorted3(facet);
        if !self.contains_facet(&f) {
            return Err(ComplexError::NotAFacet(f));
        }
        Self::new(self.n, self.facets.iter().copied().filter(|t| *t != f))
    }

    /// Applies the vertex permutation `perm`, where `perm[i - 1]` is the image of `i`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self, ComplexError> {
        if perm.len() != self.n {
            return Err(ComplexError::NotAPermutation);
        }
        let mut hit = vec![false; self.n + 1];
        for &p in perm {
            if p == 0 || p as usize > self.n || hit[p as usize] {
                return Err(ComplexError::NotAPermutation);
            }
            hit[p as usize] = true;
        }
        Self::new(
            self.n,
            self.facets.iter().map(|t| {
                [
                    perm[t[0] as usize - 1],
                    perm[t[1] as usize - 1],
                    perm[t[2] as usize - 1],
                ]
            }),
        )
    }

    /// Connected sum of `self` and `other` along `facet` of `self` and
    /// `other_facet` of `other`.
    ///
    /// `ident[i]` is the vertex of `facet` that `other_facet[i]` is glued to.
    /// The remaining vertices of `other` are renumbered `n + 1, n + 2, ...`
    /// in increasing order, both gluing facets are dropped, and the facet
    /// sets are merged.
    pub fn connected_sum(
        &self,
        other: &Triangulation,
        facet: Triangle,
        other_facet: Triangle,
        ident: [Vertex; 3],
    ) -> Result<Self, ComplexError> {
        let fs = sorted3(facet);
        let ft = other_facet;
        if !self.contains_facet(&fs) {
            return Err(ComplexError::NotAFacet(fs));
        }
        if !other.contains_facet(&ft) {
            return Err(ComplexError::NotAFacet(sorted3(ft)));
        }
        if sorted3(ident) != fs || ft[0] == ft[1] || ft[0] == ft[2] || ft[1] == ft[2] {
            return Err(ComplexError::BadIdentification);
        }

        let mut map = vec![0 as Vertex; other.n + 1];
        for i in 0..3 {
            map[ft[i] as usize] = ident[i];
        }
        let mut next = self.n as Vertex;
        for (v, slot) in map.iter_mut().enumerate().skip(1) {
            if !ft.contains(&(v as Vertex)) {
                next += 1;
                *slot = next;
            }
        }
        let ft_sorted = sorted3(ft);
        let mut facets: Vec<Triangle> = self.facets.iter().copied().filter(|t| *t != fs).collect();
        facets.extend(
            other
                .facets
                .iter()
                .filter(|t| **t != ft_sorted)
                .map(|t| [map[t[0] as usize], map[t[1] as usize], map[t[2] as usize]]),
        );
        let n = self.n + other.n - 3;
        let sum = Self::new(n, facets).map_err(|e| match e {
            ComplexError::DuplicateFacet(t) => ComplexError::GluingCreatesDuplicate(t),
            other => other,
        })?;
        if let Some((e, _)) = sum.edge_degrees().into_iter().find(|&(_, d)| d > 2) {
            return Err(ComplexError::GluingNotPseudomanifold(e));
        }
        Ok(sum)
    }
}

/// Whether `t` (in sorted order) traverses `e` as `e[0] -> e[1]`.
fn edge_direction(t: &Triangle, e: &Edge) -> bool {
    let pos = |v: Vertex| t.iter().position(|&w| w == v).unwrap();
    let (a, b) = (pos(e[0]), pos(e[1]));
    (b + 3 - a) % 3 == 1
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_facet_text())
    }
}

#[derive(Serialize, Deserialize)]
struct TriangulationJson {
    n: usize,
    facets: Vec<Triangle>,
}

impl Serialize for Triangulation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TriangulationJson {
            n: self.n,
            facets: self.facets.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Triangulation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = TriangulationJson::deserialize(d)?;
        Triangulation::new(raw.n, raw.facets).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub closed: bool,
    pub orientable: bool,
    #[serde(rename = "V")]
    pub vertices: usize,
    #[serde(rename = "E")]
    pub edges: usize,
    #[serde(rename = "F")]
    pub facets: usize,
    pub euler: i64,
    pub genus: Option<i64>,
}

impl SurfaceReport {
    pub fn is_closed_orientable(&self) -> bool {
        self.closed && self.orientable
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: Vertex,
    pub triangles: Vec<Triangle>,
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
}

/// Which intersections are forbidden.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every pair of disjoint simplices.
    #[default]
    Embedding,
    /// Only pairs of disjoint simplices inside a common vertex star.
    Immersion,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Embedding => "embedding",
            Mode::Immersion => "immersion",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "embedding" => Ok(Mode::Embedding),
            "immersion" => Ok(Mode::Immersion),
            other => Err(format!("unknown mode '{other}' (expected embedding|immersion)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairOrigin {
    Embedding,
    /// Found in the star of this vertex.
    Star(Vertex),
}

/// A facet and an edge with disjoint vertex sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexPair {
    pub triangle: Triangle,
    pub edge: Edge,
    pub origin: PairOrigin,
}

impl SimplexPair {
    pub fn new(triangle: Triangle, edge: Edge) -> Self {
        SimplexPair {
            triangle: sorted3(triangle),
            edge: sorted2(edge),
            origin: PairOrigin::Embedding,
        }
    }

    pub fn key(&self) -> (Triangle, Edge) {
        (self.triangle, self.edge)
    }

    /// `triangle ∪ edge`, sorted.
    pub fn support(&self) -> Vec<Vertex> {
        let mut s: Vec<Vertex> = self.triangle.iter().chain(self.edge.iter()).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}
