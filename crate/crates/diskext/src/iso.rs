//! Canonical forms by partition refinement with individualisation, plus
//! isomorphism tests and deduplication.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_core::{BitGraph, Graph, Label};

/// Largest graph accepted by the public entry points.
pub const MAX_ORDER: usize = 16;

/// Vertex count plus the least edge list (on `0..n`) reachable from the
/// refinement search tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(u8, u8)>,
}

type Cells = Vec<Vec<usize>>;

fn mask(cell: &[usize]) -> u64 {
    cell.iter().fold(0, |m, &v| m | 1 << v)
}

/// Equitable refinement; sub-cells are ordered by neighbour count.
fn refine(adj: &[u64], mut cells: Cells) -> Cells {
    'again: loop {
        for s in 0..cells.len() {
            let sm = mask(&cells[s]);
            for x in 0..cells.len() {
                if cells[x].len() == 1 {
                    continue;
                }
                let counts: Vec<u32> = cells[x].iter().map(|&v| (adj[v] & sm).count_ones()).collect();
                if counts.iter().all(|&c| c == counts[0]) {
                    continue;
                }
                let mut keys = counts.clone();
                keys.sort_unstable();
                keys.dedup();
                let parts: Cells = keys
                    .iter()
                    .map(|k| {
                        cells[x]
                            .iter()
                            .zip(&counts)
                            .filter(|(_, c)| *c == k)
                            .map(|(&v, _)| v)
                            .collect()
                    })
                    .collect();
                cells.splice(x..x + 1, parts);
                continue 'again;
            }
        }
        return cells;
    }
}

struct Search<'a> {
    adj: &'a [u64],
    best: Option<(Vec<(u8, u8)>, Vec<usize>)>,
    first: Option<(Vec<(u8, u8)>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn leaf(&mut self, cells: &Cells) {
        let n = self.adj.len();
        let mut pos = vec![0; n];
        for (i, c) in cells.iter().enumerate() {
            pos[c[0]] = i;
        }
        let mut cert: Vec<(u8, u8)> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.adj[a] >> b & 1 == 1 {
                    let (x, y) = (pos[a] as u8, pos[b] as u8);
                    cert.push((x.min(y), x.max(y)));
                }
            }
        }
        cert.sort_unstable();
        for known in [&self.first, &self.best].into_iter().flatten() {
            if known.0 == cert {
                // vertex v and the vertex at the same position in `known`
                let mut inv = vec![0; n];
                for (v, &p) in known.1.iter().enumerate() {
                    inv[p] = v;
                }
                let auto: Vec<usize> = (0..n).map(|v| inv[pos[v]]).collect();
                if auto.iter().enumerate().any(|(i, &j)| i != j) && !self.autos.contains(&auto) {
                    self.autos.push(auto);
                }
                return;
            }
        }
        if self.first.is_none() {
            self.first = Some((cert.clone(), pos.clone()));
        }
        if self.best.as_ref().is_none_or(|b| cert < b.0) {
            self.best = Some((cert, pos));
        }
    }

    fn orbit_rep(&self, prefix: &[usize], v: usize) -> usize {
        let n = self.adj.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for a in self.autos.iter().filter(|a| prefix.iter().all(|&p| a[p] == p)) {
            for (i, &j) in a.iter().enumerate() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        find(&mut parent, v)
    }

    fn run(&mut self, cells: Cells, prefix: &mut Vec<usize>) {
        if cells.iter().all(|c| c.len() == 1) {
            self.leaf(&cells);
            return;
        }
        let t = (0..cells.len())
            .filter(|&i| cells[i].len() > 1)
            .min_by_key(|&i| cells[i].len())
            .unwrap();
        let mut cand = cells[t].clone();
        cand.sort_unstable();
        let mut done: Vec<usize> = Vec::new();
        for &v in &cand {
            let rep = self.orbit_rep(prefix, v);
            if done.iter().any(|&u| self.orbit_rep(prefix, u) == rep) {
                continue;
            }
            let mut next = cells.clone();
            let rest: Vec<usize> = cells[t].iter().copied().filter(|&u| u != v).collect();
            next.splice(t..t + 1, [vec![v], rest]);
            let next = refine(self.adj, next);
            prefix.push(v);
            self.run(next, prefix);
            prefix.pop();
            done.push(v);
        }
    }
}

/// Least certificate over the search tree and the position of each index.
/// Works on compact adjacency over `0..n`, `n <= 64`.
pub(crate) fn canon_adj(adj: &[u64]) -> (Vec<(u8, u8)>, Vec<usize>) {
    if adj.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let cells = refine(adj, vec![(0..adj.len()).collect()]);
    let mut s = Search {
        adj,
        best: None,
        first: None,
        autos: Vec::new(),
    };
    s.run(cells, &mut Vec::new());
    s.best.expect("search reaches a leaf")
}

pub(crate) fn canon(g: &Graph) -> (CanonicalForm, BTreeMap<Label, usize>) {
    let bg = BitGraph::from_graph(g);
    let (edges, pos) = canon_adj(&bg.adj);
    let labeling = bg.labels.iter().zip(pos).map(|(&l, p)| (l, p)).collect();
    (CanonicalForm { n: bg.n(), edges }, labeling)
}

fn bound(g: &Graph) -> Result<()> {
    if g.order() > MAX_ORDER {
        return Err(Error::SizeBound {
            what: "graph",
            got: g.order(),
            limit: MAX_ORDER,
        });
    }
    Ok(())
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    bound(g)?;
    Ok(canon(g).0)
}

/// Canonical form and the canonical position of every vertex.
pub fn canonical_labeling(g: &Graph) -> Result<(CanonicalForm, BTreeMap<Label, usize>)> {
    bound(g)?;
    Ok(canon(g))
}

pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    Ok(isomorphism(g1, g2)?.is_some())
}

/// A vertex bijection `g1 -> g2` preserving adjacency, if one exists.
pub fn isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<BTreeMap<Label, Label>>> {
    bound(g1)?;
    bound(g2)?;
    if g1.order() != g2.order() || g1.size() != g2.size() || g1.degree_sequence() != g2.degree_sequence() {
        return Ok(None);
    }
    let (c1, l1) = canon(g1);
    let (c2, l2) = canon(g2);
    if c1 != c2 {
        return Ok(None);
    }
    let at: BTreeMap<usize, Label> = l2.into_iter().map(|(v, p)| (p, v)).collect();
    Ok(Some(l1.into_iter().map(|(v, p)| (v, at[&p])).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoClass {
    /// Index of the first member in the input.
    pub representative: usize,
    pub members: Vec<usize>,
}

impl IsoClass {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// Groups `graphs` by isomorphism; classes appear in order of first member.
pub fn dedupe(graphs: &[Graph]) -> Result<Vec<IsoClass>> {
    let mut index: HashMap<CanonicalForm, usize> = HashMap::new();
    let mut out: Vec<IsoClass> = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let f = canonical_form(g)?;
        match index.get(&f) {
            Some(&k) => out[k].members.push(i),
            None => {
                index.insert(f, out.len());
                out.push(IsoClass {
                    representative: i,
                    members: vec![i],
                });
            }
        }
    }
    Ok(out)
}
