mod common;

use std::collections::{BTreeMap, BTreeSet};

use chirosat::complex::{Mode, SimplexPair, Triangle, Triangulation};
use chirosat::corpus;
use chirosat::error::ComplexError;
use proptest::prelude::*;

fn tetra() -> Triangulation {
    corpus::load(corpus::TETRAHEDRON)
}

fn torus() -> Triangulation {
    corpus::load(corpus::MOBIUS_TORUS)
}

fn report(t: &Triangulation) -> (usize, usize, usize, i64, Option<i64>) {
    let r = t.validate_surface();
    (r.vertices, r.edges, r.facets, r.euler, r.genus)
}

/// Independent closedness check: edge degrees and vertex links by counting.
fn closed_by_counting(t: &Triangulation) -> bool {
    let mut deg: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for f in t.facets() {
        for (a, b) in [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])] {
            *deg.entry((a, b)).or_default() += 1;
        }
    }
    if deg.values().any(|&d| d != 2) {
        return false;
    }
    // each link must be one cycle: walk it
    (1..=t.n() as u32).all(|v| {
        let link: Vec<(u32, u32)> = t
            .facets()
            .iter()
            .filter(|f| f.contains(&v))
            .map(|f| {
                let o: Vec<u32> = f.iter().copied().filter(|&x| x != v).collect();
                (o[0], o[1])
            })
            .collect();
        let start = link[0].0;
        let (mut prev, mut cur) = (link[0].0, link[0].1);
        let mut steps = 1;
        while cur != start {
            let next = link
                .iter()
                .filter(|&&(a, b)| (a == cur || b == cur) && a != prev && b != prev)
                .map(|&(a, b)| if a == cur { b } else { a })
                .next();
            let Some(next) = next else { return false };
            prev = cur;
            cur = next;
            steps += 1;
            if steps > link.len() {
                return false;
            }
        }
        steps == link.len()
    })
}

/// Independent orientability check: try every orientation of every facet.
fn orientable_by_brute_force(t: &Triangulation) -> bool {
    let f = t.facets();
    assert!(f.len() <= 20);
    (0u32..1 << f.len()).any(|mask| {
        let mut seen = BTreeSet::new();
        f.iter().enumerate().all(|(i, tri)| {
            let [a, b, c] = *tri;
            let cyc = if mask >> i & 1 == 0 { [a, b, c] } else { [a, c, b] };
            (0..3).all(|k| seen.insert((cyc[k], cyc[(k + 1) % 3])))
        })
    })
}

fn brute_force_pairs(t: &Triangulation) -> Vec<(Triangle, [u32; 2])> {
    let edges: BTreeSet<[u32; 2]> = t
        .facets()
        .iter()
        .flat_map(|f| [[f[0], f[1]], [f[0], f[2]], [f[1], f[2]]])
        .collect();
    let mut out = Vec::new();
    for f in t.facets() {
        for e in &edges {
            if !f.contains(&e[0]) && !f.contains(&e[1]) {
                out.push((*f, *e));
            }
        }
    }
    out
}

fn keys(p: &[SimplexPair]) -> BTreeSet<(Triangle, [u32; 2])> {
    p.iter().map(SimplexPair::key).collect()
}

#[test]
fn parse_examples() {
    let g6 = corpus::load(corpus::GENUS6_NO1);
    assert_eq!((g6.n(), g6.facets().len()), (12, 44));
    let t = Triangulation::parse("1 2 3  1 2 4  1 3 4  2 3 4").unwrap();
    assert_eq!((t.n(), t.facets().len()), (4, 4));
    assert!(matches!(
        Triangulation::parse("1 2 2"),
        Err(ComplexError::RepeatedVertex(_))
    ));
    assert!(Triangulation::parse("1 2 3 1 3 2").is_err(), "duplicate facet");
    assert!(Triangulation::parse("1 2 x").is_err());
    assert!(Triangulation::parse("1 2 3 4").is_err());
    assert!(
        Triangulation::parse("1 2 4  1 2 5  1 4 5  2 4 5").is_err(),
        "vertex 3 unused"
    );
}

#[test]
fn genus_five_and_six_tables() {
    for text in [corpus::LUTZ_2_12_1_1, corpus::LUTZ_2_12_1_2, corpus::LUTZ_2_12_1_6] {
        let t = corpus::load(text);
        assert!(t.validate_surface().closed && t.validate_surface().orientable);
        assert_eq!(report(&t), (12, 60, 40, -8, Some(5)));
        assert!(closed_by_counting(&t));
    }
    let g6 = corpus::load(corpus::GENUS6_NO1);
    assert_eq!(report(&g6), (12, 66, 44, -10, Some(6)));
    assert!(closed_by_counting(&g6));
    // all 66 edges of K12 are present
    assert_eq!(g6.edges().len(), 66);
}

#[test]
fn projective_plane() {
    let rp2 = corpus::load(corpus::PROJECTIVE_PLANE);
    let r = rp2.validate_surface();
    assert!(r.closed && !r.orientable);
    assert_eq!((r.euler, r.genus), (1, None));
    assert!(closed_by_counting(&rp2));
    assert!(!orientable_by_brute_force(&rp2));
    // the list 124,125,134,135,236,245,256,346,356,456 leaves edge 23 with one facet
    let listed = Triangulation::parse("1 2 4 1 2 5 1 3 4 1 3 5 2 3 6 2 4 5 2 5 6 3 4 6 3 5 6 4 5 6").unwrap();
    assert!(!listed.validate_surface().closed);
    assert!(!closed_by_counting(&listed));
}

#[test]
fn small_surfaces_orientability_matches_brute_force() {
    for t in [
        tetra(),
        torus(),
        corpus::load(corpus::OCTAHEDRON),
        corpus::bipyramid(5),
        corpus::stacked_sphere(8),
    ] {
        let r = t.validate_surface();
        assert_eq!(r.orientable, orientable_by_brute_force(&t));
        assert_eq!(r.closed, closed_by_counting(&t));
        assert_eq!(r.euler, r.vertices as i64 - r.edges as i64 + r.facets as i64);
    }
    assert_eq!(report(&torus()), (7, 21, 14, 0, Some(1)));
}

#[test]
fn stars() {
    let s = tetra().star(1).unwrap();
    assert_eq!(s.triangles, vec![[1, 2, 3], [1, 2, 4], [1, 3, 4]]);
    assert_eq!((s.edges.len(), s.vertices.len()), (6, 4));
    let s = torus().star(1).unwrap();
    assert_eq!(s.triangles.len(), 6);
    // the link (edges opposite the center) is a single 6-cycle
    let link: Vec<[u32; 2]> = s.edges.iter().copied().filter(|e| !e.contains(&1)).collect();
    assert_eq!(link.len(), 6);
    let mut deg: BTreeMap<u32, usize> = BTreeMap::new();
    for e in &link {
        *deg.entry(e[0]).or_default() += 1;
        *deg.entry(e[1]).or_default() += 1;
    }
    assert_eq!(deg.len(), 6);
    assert!(deg.values().all(|&d| d == 2));
    assert!(tetra().star(99).is_err());
}

#[test]
fn torus_pairs() {
    let t = torus();
    let pairs = t.forbidden_pairs(Mode::Embedding);
    assert_eq!(pairs.len(), 84);
    let brute: BTreeSet<_> = brute_force_pairs(&t).into_iter().collect();
    assert_eq!(keys(&pairs), brute);
    // emitted in lexicographic order
    assert!(pairs.windows(2).all(|w| w[0].key() < w[1].key()));
    let imm = keys(&t.forbidden_pairs(Mode::Immersion));
    assert!(imm.is_subset(&brute));
    assert!(tetra().forbidden_pairs(Mode::Embedding).is_empty());
}

#[test]
fn immersion_pairs_lie_in_stars() {
    let t = corpus::load(corpus::GENUS6_NO1);
    for p in t.forbidden_pairs(Mode::Immersion) {
        let v = match p.origin {
            chirosat::complex::PairOrigin::Star(v) => v,
            other => panic!("unexpected origin {other:?}"),
        };
        let star = t.star(v).unwrap();
        assert!(p.triangle.contains(&v) && !p.edge.contains(&v));
        assert!(star.triangles.contains(&p.triangle));
        assert!(star.edges.contains(&p.edge));
    }
}

#[test]
fn remove_facet_examples() {
    let m = corpus::load(corpus::LUTZ_2_12_1_1).remove_facet([1, 2, 3]).unwrap();
    assert_eq!((m.n(), m.facets().len()), (12, 39));
    let n = corpus::load(corpus::GENUS6_NO1).remove_facet([1, 2, 11]).unwrap();
    assert_eq!(n.facets().len(), 43);
    let t = tetra().remove_facet([1, 2, 3]).unwrap();
    assert_eq!(t.facets().len(), 3);
    assert!(!t.validate_surface().closed);
    assert!(matches!(
        tetra().remove_facet([1, 2, 5]),
        Err(ComplexError::NotAFacet(_))
    ));
}

#[test]
fn connected_sum_examples() {
    let s = corpus::load(corpus::LUTZ_2_12_1_1);
    let x = s.connected_sum(&tetra(), [1, 2, 3], [1, 2, 3], [1, 2, 3]).unwrap();
    let r = x.validate_surface();
    assert_eq!((r.vertices, r.genus), (13, Some(5)));
    assert_eq!(r.euler, -8 + 2 - 2);
    let bip = tetra()
        .connected_sum(&tetra(), [1, 2, 3], [1, 2, 3], [1, 2, 3])
        .unwrap();
    assert_eq!(report(&bip), (5, 9, 6, 2, Some(0)));
    assert!(tetra()
        .connected_sum(&tetra(), [1, 2, 3], [1, 2, 3], [1, 1, 3])
        .is_err());
}

#[test]
fn relabel_examples() {
    let g6 = corpus::load(corpus::GENUS6_NO1);
    let id: Vec<u32> = (1..=12).collect();
    assert_eq!(g6.relabel(&id).unwrap(), g6);
    assert_eq!(tetra().relabel(&[2, 1, 3, 4]).unwrap(), tetra());
    assert!(tetra().relabel(&[1, 1, 3, 4]).is_err());
    assert!(tetra().relabel(&[1, 2, 3]).is_err());
}

fn closed_pool() -> Vec<Triangulation> {
    vec![
        tetra(),
        corpus::load(corpus::OCTAHEDRON),
        torus(),
        corpus::load(corpus::LUTZ_2_12_1_1),
        corpus::load(corpus::LUTZ_2_12_1_6),
        corpus::load(corpus::GENUS6_NO1),
        corpus::stacked_sphere(7),
        corpus::bipyramid(6),
    ]
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle()
}

fn pool_member() -> impl Strategy<Value = Triangulation> {
    (0..closed_pool().len()).prop_map(|i| closed_pool().swap_remove(i))
}

fn relabeled_surface() -> impl Strategy<Value = Triangulation> {
    pool_member().prop_flat_map(|t| permutation(t.n()).prop_map(move |p| t.relabel(&p).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_surfaces_satisfy_2e_eq_3f(t in relabeled_surface()) {
        let r = t.validate_surface();
        prop_assert!(r.closed);
        prop_assert_eq!(2 * r.edges, 3 * r.facets);
        prop_assert!(t.edge_degrees().values().all(|&d| d == 2));
        prop_assert_eq!(r.genus, Some((2 - r.euler) / 2));
    }

    #[test]
    fn immersion_pairs_are_embedding_pairs(t in relabeled_surface()) {
        let emb = keys(&t.forbidden_pairs(Mode::Embedding));
        let imm = keys(&t.forbidden_pairs(Mode::Immersion));
        prop_assert!(imm.is_subset(&emb));
    }

    #[test]
    fn removing_a_facet_only_removes_pairs(t in relabeled_surface(), k in any::<prop::sample::Index>()) {
        let f = t.facets()[k.index(t.facets().len())];
        let sub = t.remove_facet(f).unwrap();
        for mode in [Mode::Embedding, Mode::Immersion] {
            prop_assert!(keys(&sub.forbidden_pairs(mode)).is_subset(&keys(&t.forbidden_pairs(mode))));
        }
    }

    #[test]
    fn relabel_is_equivariant(t in pool_member(), p in permutation(12)) {
        let p: Vec<u32> = if t.n() == 12 { p } else {
            // restrict to a permutation of 1..n by dropping larger labels
            p.into_iter().filter(|&x| x as usize <= t.n()).collect()
        };
        let u = t.relabel(&p).unwrap();
        prop_assert_eq!(t.validate_surface(), u.validate_surface());
        let img = |v: u32| p[v as usize - 1];
        for mode in [Mode::Embedding, Mode::Immersion] {
            let mapped: BTreeSet<_> = t.forbidden_pairs(mode).iter().map(|q| {
                let mut f = q.triangle.map(img);
                f.sort_unstable();
                let mut e = q.edge.map(img);
                e.sort_unstable();
                (f, e)
            }).collect();
            prop_assert_eq!(mapped, keys(&u.forbidden_pairs(mode)));
        }
    }

    #[test]
    fn connected_sum_arithmetic(
        s in relabeled_surface(),
        t in relabeled_surface(),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        sigma in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let fs = s.facets()[i.index(s.facets().len())];
        let ft = t.facets()[j.index(t.facets().len())];
        let ident = [fs[sigma[0]], fs[sigma[1]], fs[sigma[2]]];
        let x = s.connected_sum(&t, fs, ft, ident).unwrap();
        let (a, b, c) = (s.validate_surface(), t.validate_surface(), x.validate_surface());
        prop_assert_eq!(c.vertices, a.vertices + b.vertices - 3);
        prop_assert_eq!(c.edges, a.edges + b.edges - 3);
        prop_assert_eq!(c.facets, a.facets + b.facets - 2);
        prop_assert_eq!(c.euler, a.euler + b.euler - 2);
        prop_assert!(c.closed && c.orientable);
        prop_assert_eq!(c.genus.unwrap(), a.genus.unwrap() + b.genus.unwrap());
    }
}
