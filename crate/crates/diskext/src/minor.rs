//! Minor models: verification, quotients and an exhaustive search.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{input, Error, Result};
use crate::graph_core::{BitGraph, Edge, Graph, Label};
use crate::iso::canon_adj;

pub const MAX_HOST: usize = 14;
pub const MAX_PATTERN: usize = 12;

/// Branch sets of `pattern` inside `host`. Host vertices outside every
/// branch set count as deleted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub pattern: Graph,
    pub host: Graph,
    pub branch_sets: BTreeMap<Label, BTreeSet<Label>>,
    /// Host path for each pattern edge, from its first to its second branch set.
    pub edge_paths: Option<BTreeMap<Edge, Vec<Label>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelCheck {
    Valid,
    Invalid(String),
}

impl ModelCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, ModelCheck::Valid)
    }
}

impl MinorModel {
    /// Branch sets listed in pattern-vertex order.
    pub fn witness(&self) -> Vec<Vec<Label>> {
        self.branch_sets.values().map(|s| s.iter().copied().collect()).collect()
    }
}

pub fn verify_model(model: &MinorModel) -> Result<ModelCheck> {
    let (h, p) = (&model.host, &model.pattern);
    for (&pv, set) in &model.branch_sets {
        if !p.has_vertex(pv) {
            return input(format!("{pv} is not a pattern vertex"));
        }
        if let Some(x) = set.iter().find(|&&x| !h.has_vertex(x)) {
            return input(format!("{x} is not a host vertex"));
        }
    }
    let bad = |s: String| Ok(ModelCheck::Invalid(s));
    if let Some(pv) = p.vertices().find(|v| !model.branch_sets.contains_key(v)) {
        return bad(format!("pattern vertex {pv} has no branch set"));
    }
    let mut owner: BTreeMap<Label, Label> = BTreeMap::new();
    for (&pv, set) in &model.branch_sets {
        if set.is_empty() {
            return bad(format!("branch set of {pv} is empty"));
        }
        for &x in set {
            if let Some(q) = owner.insert(x, pv) {
                return bad(format!("host vertex {x} is in the branch sets of {q} and {pv}"));
            }
        }
        if !h.is_connected_set(set) {
            return bad(format!("branch set of {pv} is not connected"));
        }
    }
    for (a, b) in p.edges() {
        let (sa, sb) = (&model.branch_sets[&a], &model.branch_sets[&b]);
        if !sa.iter().any(|&x| h.neighbors(x).iter().any(|y| sb.contains(y))) {
            return bad(format!("no host edge joins the branch sets of {a} and {b}"));
        }
    }
    if let Some(paths) = &model.edge_paths {
        for (a, b) in p.edges() {
            let Some(path) = paths.get(&(a, b)) else {
                return bad(format!("no path for pattern edge ({a},{b})"));
            };
            let ends_ok = path.len() >= 2
                && model.branch_sets[&a].contains(&path[0])
                && model.branch_sets[&b].contains(path.last().unwrap());
            if !ends_ok || path.windows(2).any(|w| !h.has_edge(w[0], w[1])) {
                return bad(format!("path for ({a},{b}) does not join its branch sets"));
            }
        }
    }
    Ok(ModelCheck::Valid)
}

/// Contracts each set to one vertex (labeled `1..=k` in the given order)
/// and deletes everything else.
pub fn quotient(host: &Graph, sets: &[BTreeSet<Label>]) -> Result<Graph> {
    let mut owner: BTreeMap<Label, Label> = BTreeMap::new();
    for (i, set) in sets.iter().enumerate() {
        if let Some(x) = set.iter().find(|&&x| !host.has_vertex(x)) {
            return input(format!("{x} is not a host vertex"));
        }
        if !host.is_connected_set(set) {
            return input(format!("set {} is empty or disconnected", i + 1));
        }
        for &x in set {
            if owner.insert(x, i as Label + 1).is_some() {
                return input(format!("host vertex {x} is in two sets"));
            }
        }
    }
    let mut q = Graph::new(1..=sets.len() as Label, [])?;
    for (a, b) in host.edges() {
        if let (Some(&x), Some(&y)) = (owner.get(&a), owner.get(&b)) {
            if x != y && !q.has_edge(x, y) {
                q.add_edge(x, y)?;
            }
        }
    }
    Ok(q)
}

struct Pattern {
    n: usize,
    m: usize,
    adj: Vec<u64>,
    degs: Vec<u32>,
    order: Vec<usize>,
}

impl Pattern {
    fn new(adj: Vec<u64>) -> Pattern {
        let n = adj.len();
        let m = adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2;
        let mut degs: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
        // most-constrained-first: many already placed neighbours, then degree
        let mut order: Vec<usize> = Vec::new();
        let mut placed = 0u64;
        while order.len() < n {
            let v = (0..n)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| ((adj[v] & placed).count_ones(), adj[v].count_ones(), usize::MAX - v))
                .unwrap();
            order.push(v);
            placed |= 1 << v;
        }
        degs.sort_unstable_by(|a, b| b.cmp(a));
        Pattern { n, m, adj, degs, order }
    }
}

/// Injective `pattern -> target` map preserving adjacency.
fn monomorphism(p: &Pattern, target: &[u64]) -> Option<Vec<usize>> {
    fn go(p: &Pattern, t: &[u64], depth: usize, map: &mut [usize], used: u64) -> bool {
        if depth == p.n {
            return true;
        }
        let v = p.order[depth];
        let need = p.adj[v].count_ones();
        let mut cand = if t.len() == 64 { u64::MAX } else { (1u64 << t.len()) - 1 } & !used;
        for &w in &p.order[..depth] {
            if p.adj[v] >> w & 1 == 1 {
                cand &= t[map[w]];
            }
        }
        while cand != 0 {
            let x = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if t[x].count_ones() < need {
                continue;
            }
            map[v] = x;
            if go(p, t, depth + 1, map, used | 1 << x) {
                return true;
            }
        }
        false
    }
    let mut map = vec![0; p.n];
    go(p, target, 0, &mut map, 0).then_some(map)
}

fn remove_bit(m: u64, j: usize) -> u64 {
    (m & ((1u64 << j) - 1)) | ((m >> (j + 1)) << j)
}

/// Merges index `j` into `i` (i < j) and drops `j`.
fn contract(adj: &[u64], sets: &[u64], i: usize, j: usize) -> (Vec<u64>, Vec<u64>) {
    let mut a = adj.to_vec();
    a[i] = (a[i] | a[j]) & !(1 << i) & !(1 << j);
    for (k, row) in a.iter_mut().enumerate() {
        if k != i && *row >> j & 1 == 1 {
            *row |= 1 << i;
        }
    }
    a.remove(j);
    let a = a.into_iter().map(|r| remove_bit(r, j)).collect();
    let mut s = sets.to_vec();
    s[i] |= s[j];
    s.remove(j);
    (a, s)
}

/// Searches contractions of a connected host down to `p.n` vertices,
/// skipping states isomorphic to ones already explored.
fn search_connected(
    adj: Vec<u64>,
    sets: Vec<u64>,
    p: &Pattern,
    seen: &mut HashSet<(usize, Vec<(u8, u8)>)>,
) -> Option<Vec<u64>> {
    let k = adj.len();
    let m = adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2;
    if k < p.n || m < p.m + (k - p.n) {
        return None;
    }
    if !seen.insert((k, canon_adj(&adj).0)) {
        return None;
    }
    if k == p.n {
        let mut degs: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        if degs.iter().zip(&p.degs).any(|(h, q)| h < q) {
            return None;
        }
        let map = monomorphism(p, &adj)?;
        return Some(map.iter().map(|&x| sets[x]).collect());
    }
    for i in 0..k {
        let mut nb = adj[i] & !((1u64 << (i + 1)) - 1);
        while nb != 0 {
            let j = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            let (a, s) = contract(&adj, &sets, i, j);
            if let Some(found) = search_connected(a, s, p, seen) {
                return Some(found);
            }
        }
    }
    None
}

fn compact(g: &Graph, keep: &BTreeSet<Label>) -> (Vec<Label>, Vec<u64>) {
    let bg = BitGraph::from_graph(&g.induced(keep));
    (bg.labels, bg.adj)
}

/// Branch sets (as host labels) for a pattern inside a connected host.
fn connected_minor(host: &Graph, comp: &BTreeSet<Label>, pattern: &Graph) -> Option<Vec<BTreeSet<Label>>> {
    let (labels, adj) = compact(host, comp);
    let p = Pattern::new(BitGraph::from_graph(pattern).adj);
    if p.n == 0 {
        return Some(Vec::new());
    }
    let sets: Vec<u64> = (0..adj.len()).map(|i| 1u64 << i).collect();
    let found = search_connected(adj, sets, &p, &mut HashSet::new())?;
    Some(
        found
            .into_iter()
            .map(|m| (0..labels.len()).filter(|&i| m >> i & 1 == 1).map(|i| labels[i]).collect())
            .collect(),
    )
}

/// Exhaustive minor test; the returned model always verifies.
pub fn find_minor(host: &Graph, pattern: &Graph) -> Result<Option<MinorModel>> {
    for (what, g, limit) in [("host", host, MAX_HOST), ("pattern", pattern, MAX_PATTERN)] {
        if g.order() > limit {
            return Err(Error::SizeBound {
                what,
                got: g.order(),
                limit,
            });
        }
    }
    if pattern.order() > host.order() || pattern.size() > host.size() {
        return Ok(None);
    }
    let hcomps = host.components();
    let pcomps = pattern.components();
    let plabels: Vec<Label> = pattern.vertices().collect();
    // assign pattern components to host components, odometer style
    let mut assign = vec![0usize; pcomps.len()];
    let mut cache: BTreeMap<(usize, Vec<usize>), Option<Vec<BTreeSet<Label>>>> = BTreeMap::new();
    loop {
        let mut sets: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        let mut ok = true;
        for (hi, hc) in hcomps.iter().enumerate() {
            let mine: Vec<usize> = (0..pcomps.len()).filter(|&c| assign[c] == hi).collect();
            if mine.is_empty() {
                continue;
            }
            let part: BTreeSet<Label> = mine.iter().flat_map(|&c| pcomps[c].iter().copied()).collect();
            let sub = pattern.induced(&part);
            let got = cache
                .entry((hi, mine.clone()))
                .or_insert_with(|| connected_minor(host, hc, &sub))
                .clone();
            match got {
                Some(found) => {
                    for (pv, s) in part.iter().zip(found) {
                        sets.insert(*pv, s);
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && sets.len() == plabels.len() {
            let model = with_paths(host, pattern, sets);
            assert!(
                verify_model(&model)?.is_valid(),
                "minor search produced an invalid model"
            );
            return Ok(Some(model));
        }
        let mut i = 0;
        loop {
            if i == assign.len() {
                return Ok(None);
            }
            assign[i] += 1;
            if assign[i] < hcomps.len() {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

fn with_paths(host: &Graph, pattern: &Graph, sets: BTreeMap<Label, BTreeSet<Label>>) -> MinorModel {
    let mut paths = BTreeMap::new();
    for (a, b) in pattern.edges() {
        let hit = sets[&a]
            .iter()
            .find_map(|&x| host.neighbors(x).iter().find(|y| sets[&b].contains(y)).map(|&y| vec![x, y]));
        if let Some(p) = hit {
            paths.insert((a, b), p);
        }
    }
    MinorModel {
        pattern: pattern.clone(),
        host: host.clone(),
        branch_sets: sets,
        edge_paths: Some(paths),
    }
}

/// How a listed witness relates to a target graph.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct WitnessCheck {
    /// The sets are disjoint, non-empty and connected in the host.
    pub sets_valid: bool,
    /// The i-th set realises the i-th pattern vertex (labels ascending).
    pub exact: bool,
    /// The quotient contains a spanning copy of the pattern.
    pub up_to_iso: bool,
}

pub fn check_witness(host: &Graph, pattern: &Graph, witness: &[Vec<Label>]) -> Result<WitnessCheck> {
    let sets: Vec<BTreeSet<Label>> = witness.iter().map(|w| w.iter().copied().collect()).collect();
    let q = match quotient(host, &sets) {
        Ok(q) => q,
        Err(Error::Input(_)) => {
            return Ok(WitnessCheck {
                sets_valid: false,
                exact: false,
                up_to_iso: false,
            })
        }
        Err(e) => return Err(e),
    };
    let plabels: Vec<Label> = pattern.vertices().collect();
    let exact = plabels.len() == sets.len() && {
        let pos: BTreeMap<Label, Label> = plabels.iter().enumerate().map(|(i, &v)| (v, i as Label + 1)).collect();
        pattern.edges().iter().all(|&(a, b)| q.has_edge(pos[&a], pos[&b]))
    };
    let up_to_iso = exact
        || (q.order() == pattern.order()
            && monomorphism(&Pattern::new(BitGraph::from_graph(pattern).adj), &BitGraph::from_graph(&q).adj).is_some());
    Ok(WitnessCheck {
        sets_valid: true,
        exact,
        up_to_iso,
    })
}

/// Does `small` embed in `big` as a subgraph (not necessarily induced)?
pub fn is_subgraph_up_to_iso(small: &Graph, big: &Graph) -> bool {
    small.order() <= big.order()
        && small.size() <= big.size()
        && monomorphism(&Pattern::new(BitGraph::from_graph(small).adj), &BitGraph::from_graph(big).adj).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sets(lists: &[&[Label]]) -> Vec<BTreeSet<Label>> {
        lists.iter().map(|l| l.iter().copied().collect()).collect()
    }

    fn model(host: Graph, pattern: Graph, lists: &[&[Label]]) -> MinorModel {
        let branch_sets = pattern.vertices().zip(sets(lists)).collect();
        MinorModel {
            pattern,
            host,
            branch_sets,
            edge_paths: None,
        }
    }

    #[test]
    fn verify_examples() {
        let e18 = catalog::obstruction("e18").unwrap();
        let m = model(catalog::q2(), e18, &[&[1, 5], &[3, 8], &[7, 9], &[2], &[4], &[6], &[10], &[11]]);
        assert_eq!(verify_model(&m).unwrap(), ModelCheck::Valid);
        let k5 = catalog::complete(5);
        let spokes: &[&[Label]] = &[&[1, 6], &[2, 7], &[3, 8], &[4, 9], &[5, 10]];
        assert!(verify_model(&model(catalog::petersen(), k5.clone(), spokes)).unwrap().is_valid());
        let bad = model(catalog::petersen(), k5, &[&[1], &[2], &[3], &[4], &[5]]);
        assert!(!verify_model(&bad).unwrap().is_valid());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(&catalog::petersen(), &sets(&[&[1, 6], &[2, 7], &[3, 8], &[4, 9], &[5, 10]])).unwrap();
        assert_eq!(q, catalog::complete(5));
        let p = catalog::petersen();
        let singles: Vec<BTreeSet<Label>> = p.vertices().map(|v| [v].into()).collect();
        assert_eq!(quotient(&p, &singles).unwrap(), p);
        assert!(quotient(&p, &sets(&[&[1, 3]])).is_err());
    }

    #[test]
    fn search_examples() {
        let k5 = catalog::complete(5);
        assert!(find_minor(&catalog::petersen(), &k5).unwrap().is_some());
        assert!(find_minor(&catalog::k33(), &k5).unwrap().is_none());
        assert!(find_minor(&catalog::petersen(), &catalog::complete(6)).unwrap().is_none());
        let big = Graph::new(1..=15, []).unwrap();
        assert!(matches!(find_minor(&big, &k5), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn disconnected_host() {
        let two_triangles = Graph::from_edges([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        let k3k3 = two_triangles.clone();
        assert!(find_minor(&two_triangles, &k3k3).unwrap().is_some());
        assert!(find_minor(&two_triangles, &catalog::complete(4)).unwrap().is_none());
        let p2 = Graph::from_edges([(1, 2)]).unwrap();
        assert!(find_minor(&two_triangles, &p2).unwrap().is_some());
    }
}
