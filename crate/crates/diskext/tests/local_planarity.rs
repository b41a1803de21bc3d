use diskext::catalog;
use diskext::disk_system::{classify_cover, peripheral_cycles, CycleDoubleCover};
use diskext::local_planarity::{classify_outcome, is_locally_planar, Outcome, SubdivisionMap};
use diskext::Graph;

fn over_petersen(host: &Graph) -> SubdivisionMap {
    let p = catalog::petersen();
    if host.has_edge(3, 4) {
        SubdivisionMap::new(host, &p, &p).unwrap()
    } else {
        let (s, _) = p.subdivide_edge((3, 4)).unwrap();
        SubdivisionMap::new(host, &s, &p).unwrap()
    }
}

#[test]
fn one_outcome_holds_for_each_small_host() {
    let hosts = [("Q1", catalog::q1()), ("Q2", catalog::q2()), ("Q3", catalog::q3())];
    for (hname, host) in &hosts {
        let sub = over_petersen(host);
        for (cname, cover) in [("D", catalog::cover_d()), ("D'", catalog::cover_d_prime())] {
            let out = classify_outcome(&sub, &cover).unwrap();
            assert!(!matches!(out, Outcome::Neither { .. }), "{hname} over {cname}: {out:?}");
        }
    }
}

#[test]
fn embeddings_are_told_apart() {
    for host in [catalog::q1(), catalog::q3()] {
        let sub = over_petersen(&host);
        assert!(!is_locally_planar(&sub, &catalog::cover_d()).unwrap().holds());
        assert!(is_locally_planar(&sub, &catalog::cover_d_prime()).unwrap().holds());
    }
}

#[test]
fn every_disk_system_is_locally_planar_over_itself() {
    let mut fixtures: Vec<CycleDoubleCover> =
        vec![catalog::cover_d(), catalog::cover_d_prime(), catalog::cover_d1(), catalog::cover_d3()];
    for g in [catalog::prism(), catalog::complete(4)] {
        fixtures.push(classify_cover(&g, peripheral_cycles(&g)).unwrap());
    }
    for c in fixtures {
        let g = c.carrier();
        let sub = SubdivisionMap::new(g, g, g).unwrap();
        assert!(is_locally_planar(&sub, &c).unwrap().holds(), "{:?}", g.edges());
    }
}
