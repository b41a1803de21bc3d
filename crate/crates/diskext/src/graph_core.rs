//! Labeled simple graphs, vertex cycles, elementary edits and segments.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

pub type Label = u32;
pub type Edge = (Label, Label);

/// Normalised unordered pair.
pub fn edge(a: Label, b: Label) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BTreeMap<Label, BTreeSet<Label>>,
}

impl Graph {
    pub fn new(
        vertices: impl IntoIterator<Item = Label>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Graph> {
        let mut g = Graph::default();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for (a, b) in edges {
            if !g.has_vertex(a) || !g.has_vertex(b) {
                return input(format!("edge ({a},{b}) has an unknown endpoint"));
            }
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Graph whose vertex set is the set of endpoints.
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Result<Graph> {
        let mut g = Graph::default();
        for (a, b) in edges {
            if !g.has_vertex(a) {
                g.add_vertex(a)?;
            }
            if !g.has_vertex(b) {
                g.add_vertex(b)?;
            }
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: Label) -> Result<()> {
        if v == 0 {
            return input("vertex labels must be positive");
        }
        if self.adj.insert(v, BTreeSet::new()).is_some() {
            return input(format!("duplicate vertex {v}"));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, a: Label, b: Label) -> Result<()> {
        if a == b {
            return input(format!("loop at {a}"));
        }
        if !self.has_vertex(a) || !self.has_vertex(b) {
            return input(format!("edge ({a},{b}) has an unknown endpoint"));
        }
        if !self.adj.get_mut(&a).unwrap().insert(b) {
            return input(format!("duplicate edge ({a},{b})"));
        }
        self.adj.get_mut(&b).unwrap().insert(a);
        Ok(())
    }

    pub fn with_edge(&self, a: Label, b: Label) -> Result<Graph> {
        let mut g = self.clone();
        g.add_edge(a, b)?;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = Label> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<Label> {
        self.adj.keys().copied().collect()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.size());
        for (&a, nb) in &self.adj {
            for &b in nb.range(a + 1..) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn has_vertex(&self, v: Label) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn degree(&self, v: Label) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn min_degree(&self) -> usize {
        self.adj.values().map(|s| s.len()).min().unwrap_or(0)
    }

    /// Neighbours of `v`; empty for an unknown vertex.
    pub fn neighbors(&self, v: Label) -> &BTreeSet<Label> {
        static EMPTY: BTreeSet<Label> = BTreeSet::new();
        self.adj.get(&v).unwrap_or(&EMPTY)
    }

    pub fn max_label(&self) -> Label {
        self.adj.keys().next_back().copied().unwrap_or(0)
    }

    fn require_edge(&self, (a, b): Edge) -> Result<()> {
        if self.has_edge(a, b) {
            Ok(())
        } else {
            input(format!("({a},{b}) is not an edge"))
        }
    }

    pub fn delete_edge(&self, e: Edge) -> Result<Graph> {
        self.require_edge(e)?;
        let mut g = self.clone();
        g.adj.get_mut(&e.0).unwrap().remove(&e.1);
        g.adj.get_mut(&e.1).unwrap().remove(&e.0);
        Ok(g)
    }

    /// Merges the endpoints into the smaller label; parallel edges collapse.
    pub fn contract_edge(&self, e: Edge) -> Result<Graph> {
        self.require_edge(e)?;
        let (keep, gone) = edge(e.0, e.1);
        Ok(self.merge(keep, gone))
    }

    /// Identifies `gone` with `keep` whether or not they are adjacent.
    pub(crate) fn merge(&self, keep: Label, gone: Label) -> Graph {
        let mut g = self.clone();
        let nb = g.adj.remove(&gone).unwrap_or_default();
        for w in nb {
            g.adj.get_mut(&w).unwrap().remove(&gone);
            if w != keep {
                g.adj.get_mut(&w).unwrap().insert(keep);
                g.adj.get_mut(&keep).unwrap().insert(w);
            }
        }
        g
    }

    /// Replaces `e` by a path through a new vertex labeled max + 1.
    pub fn subdivide_edge(&self, e: Edge) -> Result<(Graph, Label)> {
        let mut g = self.delete_edge(e)?;
        let z = self.max_label() + 1;
        g.add_vertex(z)?;
        g.add_edge(e.0, z)?;
        g.add_edge(z, e.1)?;
        Ok((g, z))
    }

    pub fn remove_vertices(&self, gone: &BTreeSet<Label>) -> Graph {
        let mut g = Graph::default();
        for (&v, nb) in &self.adj {
            if !gone.contains(&v) {
                g.adj.insert(v, nb.difference(gone).copied().collect());
            }
        }
        g
    }

    pub fn induced(&self, keep: &BTreeSet<Label>) -> Graph {
        let mut g = Graph::default();
        for (&v, nb) in &self.adj {
            if keep.contains(&v) {
                g.adj.insert(v, nb.intersection(keep).copied().collect());
            }
        }
        g
    }

    pub fn edges_within(&self, set: &BTreeSet<Label>) -> usize {
        set.iter()
            .map(|v| self.neighbors(*v).intersection(set).count())
            .sum::<usize>()
            / 2
    }

    pub fn components(&self) -> Vec<BTreeSet<Label>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([v]);
            seen.insert(v);
            while let Some(x) = queue.pop_front() {
                comp.insert(x);
                for &y in self.neighbors(x) {
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Is `set` non-empty and connected in the induced subgraph?
    pub fn is_connected_set(&self, set: &BTreeSet<Label>) -> bool {
        !set.is_empty() && self.induced(set).is_connected()
    }

    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<Graph> {
        let vs: Vec<Label> = self.vertices().map(|v| map.get(&v).copied().unwrap_or(v)).collect();
        let es = self.edges().into_iter().map(|(a, b)| {
            (
                map.get(&a).copied().unwrap_or(a),
                map.get(&b).copied().unwrap_or(b),
            )
        });
        Graph::new(vs, es)
    }

    pub fn complement(&self) -> Graph {
        let vs: Vec<Label> = self.vertices().collect();
        let mut g = Graph::new(vs.iter().copied(), []).expect("labels already valid");
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                if !self.has_edge(a, b) {
                    g.add_edge(a, b).expect("fresh edge");
                }
            }
        }
        g
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertices().all(|v| other.has_vertex(v))
            && self.edges().iter().all(|&(a, b)| other.has_edge(a, b))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.values().map(|s| s.len()).collect();
        d.sort_unstable();
        d
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let es: Vec<String> = self.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "V={} E={} [{}]", self.order(), self.size(), es.join(" "))
    }
}

/// Dense adjacency over indices `0..n`, `n <= 64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitGraph {
    pub labels: Vec<Label>,
    pub adj: Vec<u64>,
}

impl BitGraph {
    pub fn from_graph(g: &Graph) -> BitGraph {
        assert!(g.order() <= 64, "BitGraph supports at most 64 vertices");
        let labels: Vec<Label> = g.vertices().collect();
        let index: BTreeMap<Label, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = labels
            .iter()
            .map(|v| g.neighbors(*v).iter().fold(0u64, |m, w| m | 1 << index[w]))
            .collect();
        BitGraph { labels, adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }
}

/// A cycle read cyclically, stored rotated to its least label with the
/// smaller neighbour second, so derived equality is rotation/reflection
/// invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Cycle(Vec<Label>);

impl Cycle {
    pub fn new(seq: Vec<Label>) -> Result<Cycle> {
        if seq.len() < 3 {
            return input(format!("cycle {seq:?} has fewer than three vertices"));
        }
        let distinct: BTreeSet<_> = seq.iter().collect();
        if distinct.len() != seq.len() {
            return input(format!("cycle {seq:?} repeats a vertex"));
        }
        Ok(Cycle(normalize(seq)))
    }

    pub fn vertices(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Label) -> bool {
        self.0.contains(&v)
    }

    pub fn position(&self, v: Label) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    pub fn vertex_set(&self) -> BTreeSet<Label> {
        self.0.iter().copied().collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.0.len();
        (0..n).map(|i| edge(self.0[i], self.0[(i + 1) % n])).collect()
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => {
                let n = self.0.len();
                (i + 1) % n == j || (j + 1) % n == i
            }
            _ => false,
        }
    }

    /// The two cycle-neighbours of `v`.
    pub fn around(&self, v: Label) -> Option<(Label, Label)> {
        let i = self.position(v)?;
        let n = self.0.len();
        Some((self.0[(i + n - 1) % n], self.0[(i + 1) % n]))
    }

    /// Do the listed distinct vertices appear in this cyclic order, in one
    /// of the two directions?
    pub fn in_cyclic_order(&self, seq: &[Label]) -> bool {
        let Some(pos) = seq.iter().map(|&v| self.position(v)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        let n = self.0.len();
        let fwd = |p: &[usize]| {
            let rel: Vec<usize> = p.iter().map(|&x| (x + n - p[0]) % n).collect();
            rel.windows(2).all(|w| w[0] < w[1])
        };
        let rev: Vec<usize> = pos.iter().map(|&x| (n - x) % n).collect();
        fwd(&pos) || fwd(&rev)
    }

    /// Vertices from `a` to `b` inclusive, walking forward.
    pub fn arc(&self, a: Label, b: Label) -> Option<Vec<Label>> {
        let (i, j) = (self.position(a)?, self.position(b)?);
        let n = self.0.len();
        let len = (j + n - i) % n + 1;
        Some((0..len).map(|k| self.0[(i + k) % n]).collect())
    }

    pub fn is_cycle_of(&self, g: &Graph) -> bool {
        self.edges().iter().all(|&(a, b)| g.has_edge(a, b))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", s.join("-"))
    }
}

impl<'de> Deserialize<'de> for Cycle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let seq = Vec::<Label>::deserialize(d)?;
        Cycle::new(seq).map_err(serde::de::Error::custom)
    }
}

fn normalize(mut seq: Vec<Label>) -> Vec<Label> {
    let n = seq.len();
    let i = (0..n).min_by_key(|&i| seq[i]).unwrap();
    seq.rotate_left(i);
    if seq[n - 1] < seq[1] {
        seq[1..].reverse();
    }
    seq
}

/// A maximal path whose internal vertices have degree two.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub path: Vec<Label>,
    /// Set for a component that is a bare cycle; `path` then lists the cycle.
    pub closed: bool,
}

impl Segment {
    pub fn ends(&self) -> (Label, Label) {
        (self.path[0], *self.path.last().unwrap())
    }

    pub fn contains(&self, v: Label) -> bool {
        self.path.contains(&v)
    }
}

pub fn segments(g: &Graph) -> Vec<Segment> {
    let branch = |v: Label| g.degree(v) != 2;
    let mut out = BTreeSet::new();
    for b in g.vertices().filter(|&v| branch(v)) {
        for &first in g.neighbors(b) {
            let mut path = vec![b, first];
            while !branch(*path.last().unwrap()) {
                let (prev, cur) = (path[path.len() - 2], path[path.len() - 1]);
                let next = *g.neighbors(cur).iter().find(|&&w| w != prev).unwrap();
                path.push(next);
            }
            let mut rev = path.clone();
            rev.reverse();
            out.insert(Segment {
                path: path.min(rev),
                closed: false,
            });
        }
    }
    for comp in g.components() {
        if comp.iter().all(|&v| g.degree(v) == 2) {
            let start = *comp.iter().next().unwrap();
            let mut path = vec![start];
            let mut prev = start;
            let mut cur = *g.neighbors(start).iter().next().unwrap();
            while cur != start {
                path.push(cur);
                let next = *g.neighbors(cur).iter().find(|&&w| w != prev).unwrap();
                prev = cur;
                cur = next;
            }
            out.insert(Segment {
                path: normalize(path),
                closed: true,
            });
        }
    }
    out.into_iter().collect()
}

/// JSON wire format for a graph with an optional cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<Label>,
    pub edges: Vec<[Label; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disks: Option<Vec<Vec<Label>>>,
}

impl GraphDoc {
    /// Canonical serialization: sorted vertices and edges, normalised disks.
    pub fn new(name: &str, g: &Graph, disks: Option<&[Cycle]>) -> GraphDoc {
        GraphDoc {
            name: name.to_string(),
            vertices: g.vertices().collect(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            disks: disks.map(|ds| {
                let mut v: Vec<Vec<Label>> = ds.iter().map(|c| c.vertices().to_vec()).collect();
                v.sort();
                v
            }),
        }
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::new(self.vertices.iter().copied(), self.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn cycles(&self) -> Result<Option<Vec<Cycle>>> {
        self.disks
            .as_ref()
            .map(|ds| ds.iter().map(|d| Cycle::new(d.clone())).collect())
            .transpose()
    }

    pub fn from_json(text: &str) -> Result<GraphDoc> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("graph JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        Graph::from_edges([
            (1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
            (6, 8), (8, 10), (7, 10), (7, 9), (6, 9),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Graph::new([1, 2], [(3, 3)]).is_err());
        assert!(Graph::new([1, 2], [(1, 3)]).is_err());
        assert!(Graph::new([1, 2], [(1, 2), (2, 1)]).is_err());
        assert!(Graph::new([0], []).is_err());
        let g = Graph::new(1..=5, []).unwrap();
        assert_eq!((g.order(), g.size()), (5, 0));
    }

    #[test]
    fn contract_merges_into_lower_label() {
        let g = petersen().contract_edge((1, 6)).unwrap();
        assert_eq!(g.order(), 9);
        assert_eq!(g.degree(1), 4);
        assert!(!g.has_vertex(6));
    }

    #[test]
    fn delete_then_add_restores() {
        let p = petersen();
        let mut g = p.delete_edge((7, 9)).unwrap();
        assert_eq!(g.size(), 14);
        g.add_edge(9, 7).unwrap();
        assert_eq!(g, p);
    }

    #[test]
    fn subdivide_uses_next_label() {
        let (g, z) = petersen().subdivide_edge((3, 4)).unwrap();
        assert_eq!(z, 11);
        assert!(g.has_edge(3, 11) && g.has_edge(4, 11) && !g.has_edge(3, 4));
        assert_eq!((g.order(), g.size()), (11, 16));
        let (g2, z2) = g.subdivide_edge((3, 11)).unwrap();
        assert_eq!(z2, 12);
        let segs = segments(&g2);
        assert!(segs.iter().any(|s| s.path == vec![3, 12, 11, 4]));
    }

    #[test]
    fn segments_of_petersen_are_edges() {
        let segs = segments(&petersen());
        assert_eq!(segs.len(), 15);
        assert!(segs.iter().all(|s| s.path.len() == 2 && !s.closed));
        let (g, _) = petersen().subdivide_edge((3, 4)).unwrap();
        let segs = segments(&g);
        assert_eq!(segs.len(), 15);
        assert!(segs.iter().any(|s| s.path == vec![3, 11, 4]));
    }

    #[test]
    fn bare_cycle_is_one_closed_segment() {
        let c5 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        let segs = segments(&c5);
        assert_eq!(segs.len(), 1);
        assert!(segs[0].closed);
        assert_eq!(segs[0].path, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn cycle_equality_is_dihedral() {
        let a = Cycle::new(vec![5, 1, 12, 11, 4]).unwrap();
        let b = Cycle::new(vec![1, 5, 4, 11, 12]).unwrap();
        let c = Cycle::new(vec![12, 1, 5, 4, 11]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.vertices(), &[1, 5, 4, 11, 12]);
        assert!(a.in_cyclic_order(&[1, 4, 11]));
        assert!(a.in_cyclic_order(&[11, 4, 1]));
        assert!(!a.in_cyclic_order(&[1, 11, 5, 4]));
        assert!(Cycle::new(vec![1, 2]).is_err());
        assert!(Cycle::new(vec![1, 2, 1]).is_err());
    }

    #[test]
    fn doc_round_trip_is_canonical() {
        let g = petersen();
        let d = Cycle::new(vec![6, 9, 7, 10, 8]).unwrap();
        let doc = GraphDoc::new("p", &g, Some(&[d.clone()]));
        assert_eq!(doc.disks.as_ref().unwrap()[0], vec![6, 8, 10, 7, 9]);
        let back = GraphDoc::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.graph().unwrap(), g);
        assert_eq!(back.cycles().unwrap().unwrap(), vec![d]);
    }
}
