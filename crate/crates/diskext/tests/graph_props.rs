mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{random_graph, random_relabel};
use diskext::catalog;
use diskext::connectivity::{enumerate_separations, is_degenerate, is_prism, is_weakly_4_connected};
use diskext::disk_system::{
    add_chord, add_tedge_chord, classify_cover, peripheral_cycles, Classification, CycleDoubleCover,
};
use diskext::enlarge::{Expansion, SplitSpec};
use diskext::graph_core::segments;
use diskext::iso::are_isomorphic;
use diskext::{Cycle, Graph, Label};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn cube() -> Graph {
    let edges = (0u32..8).flat_map(|i| (0..3).map(move |b| (i, i ^ (1 << b)))).filter(|(a, b)| a < b);
    Graph::from_edges(edges.map(|(a, b)| (a + 1, b + 1))).unwrap()
}

fn named_covers() -> Vec<(&'static str, CycleDoubleCover)> {
    vec![
        ("D", catalog::cover_d()),
        ("D'", catalog::cover_d_prime()),
        ("D1", catalog::cover_d1()),
        ("D3", catalog::cover_d3()),
    ]
}

/// Random expansion by up to `k` splits of vertices of degree at least four.
fn random_expansion(r: &mut StdRng, base: &Graph, k: usize) -> Expansion {
    let mut x = Expansion::new(base);
    for _ in 0..k {
        let g = x.result().clone();
        let big: Vec<Label> = g.vertices().filter(|&v| g.degree(v) >= 4).collect();
        let Some(&v) = big.choose(r) else { break };
        let specs = SplitSpec::all(&g, v);
        let spec = specs.choose(r).unwrap();
        x = x.split(spec).unwrap();
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn contract_and_delete_counts(seed in any::<u64>(), n in 2u32..=10) {
        let mut r = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut r, n, 0.5);
        for e in g.edges() {
            prop_assert_eq!(g.contract_edge(e).unwrap().order(), g.order() - 1);
            prop_assert_eq!(g.delete_edge(e).unwrap().size(), g.size() - 1);
        }
    }

    #[test]
    fn segments_follow_relabelling(seed in any::<u64>(), n in 2u32..=10, p in 0.1f64..0.5) {
        let mut r = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut r, n, p);
        let mut targets: Vec<Label> = (1..=3 * n).collect();
        targets.shuffle(&mut r);
        let map: BTreeMap<Label, Label> = g.vertices().zip(targets).collect();
        let h = g.relabel(&map).unwrap();
        let norm = |segs: Vec<Vec<Label>>, closed: Vec<bool>| -> BTreeSet<(bool, Vec<Label>)> {
            segs.into_iter()
                .zip(closed)
                .map(|(mut p, c)| {
                    if c {
                        p.sort();
                    } else {
                        let rev: Vec<Label> = p.iter().rev().copied().collect();
                        p = p.min(rev);
                    }
                    (c, p)
                })
                .collect()
        };
        let sg = segments(&g);
        let sh = segments(&h);
        let mapped = norm(
            sg.iter().map(|s| s.path.iter().map(|v| map[v]).collect()).collect(),
            sg.iter().map(|s| s.closed).collect(),
        );
        let direct = norm(sh.iter().map(|s| s.path.clone()).collect(), sh.iter().map(|s| s.closed).collect());
        prop_assert_eq!(mapped, direct);
    }

    #[test]
    fn subdivide_then_contract_round_trip(seed in any::<u64>(), n in 2u32..=10) {
        let mut r = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut r, n, 0.5);
        for e in g.edges() {
            let (s, z) = g.subdivide_edge(e).unwrap();
            for end in [e.0, e.1] {
                let back = s.contract_edge((end.min(z), end.max(z))).unwrap();
                prop_assert!(are_isomorphic(&back, &g).unwrap());
            }
        }
    }

    #[test]
    fn weak_four_connectivity_is_relabelling_invariant(seed in any::<u64>(), n in 5u32..=9, p in 0.4f64..0.95) {
        let mut r = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut r, n, p);
        let h = random_relabel(&mut r, &g);
        prop_assert_eq!(is_weakly_4_connected(&g), is_weakly_4_connected(&h));
    }

    #[test]
    fn expansions_have_one_degenerate_orientation(seed in any::<u64>(), which in 0usize..3, k in 1usize..=3) {
        let mut r = StdRng::seed_from_u64(seed);
        let base = [catalog::q1(), catalog::q2(), catalog::q3()][which].clone();
        let x = random_expansion(&mut r, &base, k);
        let g = x.result();
        prop_assume!(!is_prism(g));
        for sep in enumerate_separations(g, 3).into_iter().filter(|s| s.order() == 3 && s.a < s.b) {
            let flipped = diskext::connectivity::Separation { a: sep.b.clone(), b: sep.a.clone() };
            let one = is_degenerate(g, &sep).unwrap().is_some();
            let two = is_degenerate(g, &flipped).unwrap().is_some();
            prop_assert!(one != two, "{:?} in {:?}", sep, g.edges());
        }
    }

    #[test]
    fn expansion_branch_sets_are_trees_joined_once(seed in any::<u64>(), which in 0usize..3, k in 1usize..=4) {
        let mut r = StdRng::seed_from_u64(seed);
        let base = [catalog::q1(), catalog::q2(), catalog::q3()][which].clone();
        let x = random_expansion(&mut r, &base, k);
        let g = x.result();
        let sets = x.branch_sets();
        let all: BTreeSet<Label> = sets.values().flatten().copied().collect();
        prop_assert_eq!(all, g.vertex_set());
        for s in sets.values() {
            prop_assert!(g.is_connected_set(s));
            prop_assert_eq!(g.edges_within(s), s.len() - 1);
        }
        for (&a, sa) in sets {
            for (&b, sb) in sets.range(a + 1..) {
                let between = g.edges().iter().filter(|&&(x, y)| (sa.contains(&x) && sb.contains(&y)) || (sa.contains(&y) && sb.contains(&x))).count();
                prop_assert_eq!(between, usize::from(base.has_edge(a, b)));
            }
        }
    }
}

#[test]
fn disk_lengths_count_each_edge_twice() {
    for (name, c) in named_covers() {
        assert!(c.classification() >= Classification::Cdc, "{name}");
        let total: usize = c.disks().iter().map(Cycle::len).sum();
        assert_eq!(total, 2 * c.carrier().size(), "{name}");
    }
}

#[test]
fn chords_keep_the_euler_characteristic() {
    for (name, c) in named_covers() {
        let g = c.carrier();
        let chi = c.euler_characteristic();
        let mut chords = 0;
        let mut tedges = 0;
        for d in c.disks() {
            let vs = d.vertices();
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    if !g.has_edge(u, v) {
                        let (_, after) = add_chord(&c, d, u, v).unwrap();
                        assert_eq!(after.euler_characteristic(), chi, "{name} chord {u}-{v}");
                        chords += 1;
                    }
                }
                for (x, y) in d.edges() {
                    if u != x && u != y {
                        let (_, after) = add_tedge_chord(&c, d, u, (x, y)).unwrap();
                        assert_eq!(after.euler_characteristic(), chi, "{name} tedge {u}-({x},{y})");
                        tedges += 1;
                    }
                }
            }
        }
        assert!(chords > 0 && tedges > 0, "{name}");
    }
}

#[test]
fn peripheral_cycles_of_polyhedra_are_spheres() {
    for (name, g) in [("prism", catalog::prism()), ("k4", catalog::complete(4)), ("cube", cube())] {
        let c = classify_cover(&g, peripheral_cycles(&g)).unwrap();
        assert_eq!(c.classification(), Classification::DiskSystem, "{name}");
        assert_eq!(c.euler_characteristic(), 2, "{name}");
    }
}

fn k4_cycles() -> Vec<Cycle> {
    let tri = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];
    let quad = [[1, 2, 3, 4], [1, 2, 4, 3], [1, 3, 2, 4]];
    tri.iter().map(|t| Cycle::new(t.to_vec()).unwrap()).chain(quad.iter().map(|q| Cycle::new(q.to_vec()).unwrap())).collect()
}

fn check_rotations(c: &CycleDoubleCover) {
    let ok = c.carrier().vertices().all(|v| match c.rotation_at(v) {
        Ok(rot) => {
            let n = rot.order.len();
            (0..n).all(|i| {
                let (a, b) = (rot.order[i], rot.order[(i + 1) % n]);
                c.disks_through(v).filter(|d| {
                    let (p, q) = d.around(v).unwrap();
                    (p, q) == (a, b) || (q, p) == (a, b)
                }).count() == 1
            })
        }
        Err(_) => false,
    });
    assert_eq!(ok, c.classification() == Classification::DiskSystem, "{:?}", c.disks());
}

#[test]
fn rotations_exist_exactly_for_disk_systems() {
    let k4 = catalog::complete(4);
    let cycles = k4_cycles();
    let mut seen = BTreeMap::new();
    for mask in 1u32..1 << cycles.len() {
        let pick: Vec<Cycle> = (0..cycles.len()).filter(|i| mask >> i & 1 == 1).map(|i| cycles[i].clone()).collect();
        let c = classify_cover(&k4, pick).unwrap();
        *seen.entry(c.classification()).or_insert(0) += 1;
        if c.classification() >= Classification::Cdc {
            check_rotations(&c);
        }
    }
    assert!(seen.contains_key(&Classification::DiskSystem));
    assert!(seen.len() >= 3, "{seen:?}");
    for (_, c) in named_covers() {
        check_rotations(&c);
    }
    let mut r = StdRng::seed_from_u64(11);
    for _ in 0..30 {
        let c = catalog::cover_d1();
        let d = &c.disks()[r.gen_range(0..c.disks().len())];
        let vs = d.vertices();
        let (u, v) = (vs[0], vs[vs.len() / 2]);
        if !c.carrier().has_edge(u, v) {
            let (_, after) = add_chord(&c, d, u, v).unwrap();
            check_rotations(&after);
        }
    }
}

#[test]
fn catalog_graphs_load_validated() {
    for (name, c) in named_covers() {
        assert_eq!(c.classification(), Classification::DiskSystem, "{name}");
        assert_eq!(c.euler_characteristic(), 1, "{name}");
    }
    for g in [catalog::petersen(), catalog::prism(), catalog::q1(), catalog::q2(), catalog::q3()] {
        assert!(is_weakly_4_connected(&g));
    }
}
