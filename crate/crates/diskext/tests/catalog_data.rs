use diskext::catalog::{self, TARGETS};
use diskext::enlarge::parse_expression;
use diskext::iso::are_isomorphic;
use diskext::minor::{check_witness, quotient};
use diskext::{Graph, Label};

#[test]
fn every_row_witness_certifies_its_obstruction() {
    let mut bad = Vec::new();
    let mut inexact = Vec::new();
    for row in catalog::table_rows() {
        let g = parse_expression(&row.expr).unwrap().apply().unwrap();
        let target = catalog::obstruction(&row.target).unwrap();
        let check = check_witness(&g, &target, &row.witness).unwrap();
        if !(check.sets_valid && check.up_to_iso) {
            bad.push(row.expr.clone());
        }
        if !check.exact {
            inexact.push(row.expr.clone());
        }
    }
    assert!(bad.is_empty(), "{bad:?}");
    // the shipped labelings also match every row vertex by vertex
    assert!(inexact.is_empty(), "{inexact:?}");
}

#[test]
fn e18_is_k44_minus_an_edge() {
    let e18 = catalog::obstruction("e18").unwrap();
    let k44 = catalog::complete_bipartite(4, 4);
    let minus = k44.delete_edge((1, 5)).unwrap();
    assert!(are_isomorphic(&e18, &minus).unwrap());
    let sets: Vec<_> = [vec![1, 5], vec![3, 8], vec![7, 9], vec![2], vec![4], vec![6], vec![10], vec![11]]
        .into_iter()
        .map(|s: Vec<Label>| s.into_iter().collect())
        .collect();
    let q: Graph = quotient(&catalog::q2(), &sets).unwrap();
    assert!(are_isomorphic(&q, &minus).unwrap());
}

#[test]
fn targets_are_distinct_and_present() {
    let graphs: Vec<Graph> = TARGETS.iter().map(|n| catalog::obstruction(n).unwrap()).collect();
    for (i, a) in graphs.iter().enumerate() {
        for b in &graphs[i + 1..] {
            assert!(!are_isomorphic(a, b).unwrap());
        }
    }
    for row in catalog::table_rows() {
        assert!(TARGETS.contains(&row.target.as_str()), "{}", row.target);
    }
}
