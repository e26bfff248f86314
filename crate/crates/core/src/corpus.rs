//! Named triangulations used by the tests and as CLI examples.

use crate::complex::Triangulation;

pub const TETRAHEDRON: &str = include_str!("../../../data/tetrahedron.txt");
pub const OCTAHEDRON: &str = include_str!("../../../data/octahedron.txt");
pub const MOBIUS_TORUS: &str = include_str!("../../../data/mobius_torus.txt");
pub const PROJECTIVE_PLANE: &str = include_str!("../../../data/projective_plane.txt");
/// Genus 5, 12 vertices.
pub const LUTZ_2_12_1_1: &str = include_str!("../../../data/lutz_2_12_1_1.txt");
pub const LUTZ_2_12_1_2: &str = include_str!("../../../data/lutz_2_12_1_2.txt");
pub const LUTZ_2_12_1_6: &str = include_str!("../../../data/lutz_2_12_1_6.txt");
/// Genus 6, 12 vertices, no. 1 in the Altshuler–Bokowski–Schuchert list.
pub const GENUS6_NO1: &str = include_str!("../../../data/genus6_no1.txt");

/// `(name, facet text)` for every bundled triangulation.
pub const ALL: [(&str, &str); 8] = [
    ("tetrahedron", TETRAHEDRON),
    ("octahedron", OCTAHEDRON),
    ("mobius_torus", MOBIUS_TORUS),
    ("projective_plane", PROJECTIVE_PLANE),
    ("lutz_2_12_1_1", LUTZ_2_12_1_1),
    ("lutz_2_12_1_2", LUTZ_2_12_1_2),
    ("lutz_2_12_1_6", LUTZ_2_12_1_6),
    ("genus6_no1", GENUS6_NO1),
];

pub fn load(text: &str) -> Triangulation {
    Triangulation::parse(text).expect("bundled triangulation parses")
}

pub fn by_name(name: &str) -> Option<Triangulation> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| load(t))
}

/// Stacked sphere on `n >= 4` vertices: start from the tetrahedron and
/// repeatedly place a new vertex on the facet that was created last.
pub fn stacked_sphere(n: usize) -> Triangulation {
    assert!(n >= 4);
    let mut facets = vec![[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];
    for v in 5..=n as u32 {
        let [a, b, c] = facets.pop().expect("nonempty");
        facets.extend([[a, b, v], [a, c, v], [b, c, v]]);
    }
    Triangulation::new(n, facets).expect("stacked spheres are valid")
}

/// Bipyramid over an `m`-gon (`m >= 3`): equator `1..=m`, apexes `m+1`, `m+2`.
pub fn bipyramid(m: usize) -> Triangulation {
    assert!(m >= 3);
    let m32 = m as u32;
    let mut facets = Vec::new();
    for i in 1..=m32 {
        let j = i % m32 + 1;
        facets.push([i, j, m32 + 1]);
        facets.push([i, j, m32 + 2]);
    }
    Triangulation::new(m + 2, facets).expect("bipyramids are valid")
}
