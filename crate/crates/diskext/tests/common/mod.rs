//! Brute-force oracles and random graph helpers shared by the test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use diskext::{Graph, Label};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_graph<R: Rng>(rng: &mut R, n: Label, p: f64) -> Graph {
    let mut g = Graph::new(1..=n, []).unwrap();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

/// A copy of `g` under a random bijection onto labels drawn from `1..=3n`.
pub fn random_relabel<R: Rng>(rng: &mut R, g: &Graph) -> Graph {
    let vs: Vec<Label> = g.vertices().collect();
    let mut pool: Vec<Label> = (1..=3 * vs.len().max(1) as Label).collect();
    pool.shuffle(rng);
    let map: BTreeMap<Label, Label> = vs.iter().copied().zip(pool).collect();
    g.relabel(&map).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Tries every bijection.
pub fn brute_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    if g1.order() != g2.order() || g1.size() != g2.size() {
        return false;
    }
    let a: Vec<Label> = g1.vertices().collect();
    let b: Vec<Label> = g2.vertices().collect();
    permutations(a.len())
        .iter()
        .any(|p| g1.edges().iter().all(|&(x, y)| {
            let i = a.iter().position(|&v| v == x).unwrap();
            let j = a.iter().position(|&v| v == y).unwrap();
            g2.has_edge(b[p[i]], b[p[j]])
        }))
}

fn masks(g: &Graph) -> (Vec<Label>, Vec<u32>) {
    let vs: Vec<Label> = g.vertices().collect();
    let idx: HashMap<Label, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![0u32; vs.len()];
    for (a, b) in g.edges() {
        adj[idx[&a]] |= 1 << idx[&b];
        adj[idx[&b]] |= 1 << idx[&a];
    }
    (vs, adj)
}

fn connected(adj: &[u32], set: u32) -> bool {
    if set == 0 {
        return false;
    }
    let mut seen = 1u32 << set.trailing_zeros();
    loop {
        let mut next = seen;
        for i in 0..adj.len() {
            if seen >> i & 1 == 1 {
                next |= adj[i] & set;
            }
        }
        if next == seen {
            return seen == set;
        }
        seen = next;
    }
}

/// Every map from host vertices to pattern vertices or "deleted".
pub fn brute_minor(host: &Graph, pattern: &Graph) -> bool {
    let (_, hadj) = masks(host);
    let (_, padj) = masks(pattern);
    let (n, t) = (hadj.len(), padj.len());
    if t == 0 {
        return true;
    }
    let mut assign = vec![0usize; n];
    loop {
        let mut sets = vec![0u32; t];
        for (v, &a) in assign.iter().enumerate() {
            if a > 0 {
                sets[a - 1] |= 1 << v;
            }
        }
        let ok = sets.iter().all(|&s| connected(&hadj, s))
            && (0..t).all(|i| {
                (0..t).filter(|&j| padj[i] >> j & 1 == 1).all(|j| {
                    (0..n).any(|v| sets[i] >> v & 1 == 1 && hadj[v] & sets[j] != 0)
                })
            });
        if ok {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            assign[k] += 1;
            if assign[k] <= t {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
    }
}

type EdgeSet = BTreeSet<(Label, Label)>;

fn norm(a: Label, b: Label) -> (Label, Label) {
    (a.min(b), a.max(b))
}

/// Drops vertices of degree below two and smooths degree-two vertices.
fn reduce(mut es: EdgeSet) -> EdgeSet {
    loop {
        let mut deg: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
        for &(a, b) in &es {
            deg.entry(a).or_default().push(b);
            deg.entry(b).or_default().push(a);
        }
        let Some((&v, nb)) = deg.iter().find(|(_, nb)| nb.len() <= 2) else {
            return es;
        };
        for &x in nb {
            es.remove(&norm(v, x));
        }
        if let [a, b] = nb[..] {
            es.insert(norm(a, b));
        }
    }
}

fn is_kuratowski(es: &EdgeSet) -> bool {
    let mut nb: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
    for &(a, b) in es {
        nb.entry(a).or_default().insert(b);
        nb.entry(b).or_default().insert(a);
    }
    let n = nb.len();
    if n == 5 && es.len() == 10 {
        return true;
    }
    if n == 6 && es.len() == 9 && nb.values().all(|s| s.len() == 3) {
        // bipartite with both sides of size three
        let first = *nb.keys().next().unwrap();
        let side: BTreeSet<Label> = nb.keys().copied().filter(|v| *v == first || !nb[&first].contains(v)).collect();
        return side.len() == 3 && es.iter().all(|(a, b)| side.contains(a) != side.contains(b));
    }
    false
}

fn has_kuratowski(es: EdgeSet, memo: &mut HashMap<EdgeSet, bool>) -> bool {
    let es = reduce(es);
    let n = es.iter().flat_map(|&(a, b)| [a, b]).collect::<BTreeSet<_>>().len();
    if es.len() < n + 3 {
        return false;
    }
    if is_kuratowski(&es) {
        return true;
    }
    if let Some(&r) = memo.get(&es) {
        return r;
    }
    let r = es.iter().any(|e| {
        let mut less = es.clone();
        less.remove(e);
        has_kuratowski(less, memo)
    });
    memo.insert(es, r);
    r
}

/// Planar iff no subgraph is a subdivision of K5 or K3,3.
pub fn kuratowski_planar(g: &Graph) -> bool {
    let (n, m) = (g.order(), g.size());
    if n >= 3 && m > 3 * n - 6 {
        return false;
    }
    !has_kuratowski(g.edges().into_iter().collect(), &mut HashMap::new())
}
