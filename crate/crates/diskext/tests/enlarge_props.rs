use std::collections::BTreeSet;
use std::str::FromStr;

use diskext::catalog;
use diskext::disk_system::{classify_cover, peripheral_cycles, CycleDoubleCover};
use diskext::enlarge::{classify_split, induce_on_split, parse_expression, validate, Op, Params, SplitSpec};
use diskext::enumerate::{enumerate_op, EnlargementFamily};
use diskext::iso::are_isomorphic;
use diskext::minor::find_minor;
use diskext::{Graph, Label};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

const SPLIT_OPS: [Op; 7] = [Op::Jump, Op::Cross, Op::NcSplit, Op::SplitJump, Op::DsplitJump, Op::SplitCross, Op::DsplitCross];

fn covers() -> Vec<(&'static str, CycleDoubleCover)> {
    vec![
        ("D", catalog::cover_d()),
        ("D'", catalog::cover_d_prime()),
        ("D1", catalog::cover_d1()),
        ("D3", catalog::cover_d3()),
    ]
}

fn families(cover: &CycleDoubleCover) -> Vec<EnlargementFamily> {
    SPLIT_OPS
        .iter()
        .chain(&[Op::Triad, Op::Tedge])
        .map(|&op| enumerate_op(cover, op).unwrap())
        .collect()
}

fn assert_swap_invariant(cover: &CycleDoubleCover, name: &str) -> usize {
    let g = cover.carrier();
    let mut checked = 0;
    for v in g.vertices() {
        for spec in SplitSpec::all(g, v) {
            let a = classify_split(cover, &spec).unwrap();
            let b = classify_split(cover, &spec.swapped()).unwrap();
            assert_eq!(a, b, "{name} {spec}");
            checked += 1;
        }
    }
    checked
}

#[test]
fn split_classification_ignores_side_order() {
    let mut checked = 0;
    for (name, c) in covers() {
        checked += assert_swap_invariant(&c, name);
        let g = c.carrier().clone();
        for v in g.vertices() {
            for spec in SplitSpec::all(&g, v) {
                if classify_split(&c, &spec).unwrap().is_conforming() {
                    checked += assert_swap_invariant(&induce_on_split(&c, &spec).unwrap(), name);
                }
            }
        }
    }
    assert!(checked >= 24, "{checked}");
}

#[test]
fn every_representative_undoes_to_its_source() {
    let prism = catalog::prism();
    let prism_cover = classify_cover(&prism, peripheral_cycles(&prism)).unwrap();
    let mut fams: Vec<EnlargementFamily> = covers().iter().flat_map(|(_, c)| families(c)).collect();
    fams.push(enumerate_op(&prism_cover, Op::Prism).unwrap());
    let mut n = 0;
    for fam in &fams {
        for class in &fam.classes {
            let e = &class.representative;
            assert_eq!(e.undo().unwrap(), fam.source, "{}", e.expression());
            n += 1;
        }
    }
    assert!(n > 50, "{n}");
}

#[test]
fn enumeration_is_deterministic_and_sound() {
    for (name, c) in [("D1", catalog::cover_d1()), ("D3", catalog::cover_d3())] {
        let first = families(&c);
        assert_eq!(first, families(&c), "{name}");
        for fam in &first {
            for (i, class) in fam.classes.iter().enumerate() {
                let e = &class.representative;
                let again = validate(&c, &e.steps(), fam.op).unwrap();
                assert_eq!(again.result, e.result, "{name} {}", e.expression());
                for other in &fam.classes[i + 1..] {
                    assert!(!are_isomorphic(&e.result, other.graph()).unwrap());
                }
            }
        }
    }
}

/// Triads from the definition, using only vertex sets of disks.
fn brute_triads(cover: &CycleDoubleCover) -> BTreeSet<[Label; 3]> {
    let g = cover.carrier();
    let sets: Vec<BTreeSet<Label>> = cover.disks().iter().map(|d| d.vertex_set()).collect();
    let share = |xs: &[Label]| sets.iter().any(|s| xs.iter().all(|x| s.contains(x)));
    let vs: Vec<Label> = g.vertices().collect();
    let mut out = BTreeSet::new();
    for (i, &a) in vs.iter().enumerate() {
        for (j, &b) in vs.iter().enumerate().skip(i + 1) {
            for &c in &vs[j + 1..] {
                let t = [a, b, c];
                let pairwise = share(&[a, b]) && share(&[a, c]) && share(&[b, c]);
                let independent = !g.has_edge(a, b) && !g.has_edge(a, c) && !g.has_edge(b, c);
                // connectivity of the rest by flood fill
                let rest: Vec<Label> = vs.iter().copied().filter(|v| !t.contains(v)).collect();
                let mut seen = BTreeSet::from([rest[0]]);
                let mut stack = vec![rest[0]];
                while let Some(x) = stack.pop() {
                    for &y in g.neighbors(x) {
                        if !t.contains(&y) && seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                if pairwise && !share(&t) && independent && seen.len() == rest.len() {
                    out.insert(t);
                }
            }
        }
    }
    out
}

#[test]
fn petersen_triads_match_brute_force() {
    let c = catalog::cover_d();
    let fam = enumerate_op(&c, Op::Triad).unwrap();
    let members: BTreeSet<[Label; 3]> = fam
        .classes
        .iter()
        .flat_map(|k| &k.members)
        .map(|p| match p {
            Params::Triad { x } => *x,
            other => panic!("{other:?}"),
        })
        .collect();
    assert_eq!(fam.instance_count(), members.len());
    assert_eq!(members, brute_triads(&c));
    assert!(!members.is_empty());
}

#[test]
fn table_rows_parse_and_validate() {
    let mut failed = Vec::new();
    for row in catalog::table_rows() {
        let x = parse_expression(&row.expr).unwrap();
        let (_, cover) = x.base_graph().unwrap();
        let op = Op::from_str(&row.op).unwrap();
        if let Err(e) = validate(&cover.unwrap(), &x.steps, op) {
            failed.push((row.expr.clone(), e.to_string()));
        }
    }
    let q1_rows = catalog::table_rows().iter().filter(|r| r.table() == "q1").count();
    assert_eq!((q1_rows, catalog::table_rows().len()), (35, 76));
    let exprs: Vec<&str> = failed.iter().map(|(e, _)| e.as_str()).collect();
    assert_eq!(exprs, ["Q1*8(3,6)+(1,11)+(8,10)"], "{failed:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn non_conforming_expansions_contain_an_ncsplit(seed in any::<u64>(), which in 0usize..2, k in 1usize..=3) {
        let mut r = StdRng::seed_from_u64(seed);
        let base = [catalog::cover_d1(), catalog::cover_d3()][which].clone();
        let targets: Vec<Graph> = enumerate_op(&base, Op::NcSplit).unwrap().classes.iter().map(|c| c.graph().clone()).collect();
        let mut cover = base.clone();
        let mut found = None;
        for _ in 0..k {
            let g = cover.carrier().clone();
            let big: Vec<Label> = g.vertices().filter(|&v| g.degree(v) >= 4).collect();
            let Some(&v) = big.choose(&mut r) else { break };
            let specs = SplitSpec::all(&g, v);
            let spec = specs.choose(&mut r).unwrap();
            if classify_split(&cover, spec).unwrap().is_conforming() {
                cover = induce_on_split(&cover, spec).unwrap();
            } else {
                found = Some(diskext::enlarge::split_vertex(&g, spec).unwrap());
                break;
            }
        }
        prop_assume!(found.is_some());
        let host = found.unwrap();
        let hit = targets.iter().any(|t| find_minor(&host, t).unwrap().is_some());
        prop_assert!(hit, "{:?}", host.edges());
    }
}
