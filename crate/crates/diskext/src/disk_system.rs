//! Cycle double covers, the three disk axioms, confluence, rotations,
//! peripheral cycles and induced covers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::graph_core::{edge, segments, Cycle, Edge, Graph, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Invalid,
    Cdc,
    WeakDiskSystem,
    DiskSystem,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Invalid => "invalid",
            Classification::Cdc => "cdc",
            Classification::WeakDiskSystem => "weak_disk_system",
            Classification::DiskSystem => "disk_system",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDoubleCover {
    carrier: Graph,
    disks: Vec<Cycle>,
    class: Classification,
    failure: Option<String>,
}

/// A vertex or an edge, for confluence queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elem {
    V(Label),
    E(Label, Label),
}

impl CycleDoubleCover {
    pub fn carrier(&self) -> &Graph {
        &self.carrier
    }

    pub fn disks(&self) -> &[Cycle] {
        &self.disks
    }

    pub fn classification(&self) -> Classification {
        self.class
    }

    /// First axiom that failed, with location.
    pub fn failure(&self) -> Option<&str> {
        self.failure.as_deref()
    }

    pub fn disks_through(&self, v: Label) -> impl Iterator<Item = &Cycle> + '_ {
        self.disks.iter().filter(move |d| d.contains(v))
    }

    pub fn disks_on_edge(&self, a: Label, b: Label) -> impl Iterator<Item = &Cycle> + '_ {
        self.disks.iter().filter(move |d| d.has_edge(a, b))
    }

    pub fn index_of(&self, disk: &Cycle) -> Option<usize> {
        self.disks.iter().position(|d| d == disk)
    }

    fn holds(d: &Cycle, x: Elem) -> bool {
        match x {
            Elem::V(v) => d.contains(v),
            Elem::E(a, b) => d.has_edge(a, b),
        }
    }

    pub fn confluent(&self, a: Elem, b: Elem) -> Result<bool> {
        for x in [a, b] {
            let known = match x {
                Elem::V(v) => self.carrier.has_vertex(v),
                Elem::E(p, q) => self.carrier.has_edge(p, q),
            };
            if !known {
                return input(format!("{x:?} is not in the carrier"));
            }
        }
        if a == b {
            return Ok(true);
        }
        Ok(self.disks.iter().any(|d| Self::holds(d, a) && Self::holds(d, b)))
    }

    /// Vertex confluence without the membership check.
    pub fn vertices_confluent(&self, a: Label, b: Label) -> bool {
        a == b || self.disks.iter().any(|d| d.contains(a) && d.contains(b))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.carrier.order() as i64 - self.carrier.size() as i64 + self.disks.len() as i64
    }

    /// Cyclic order of the neighbours of `v`, normalised like a cycle.
    pub fn rotation_at(&self, v: Label) -> Result<Rotation> {
        if self.class != Classification::DiskSystem {
            return input(format!("rotation needs a disk system, cover is {}", self.class));
        }
        if self.carrier.degree(v) < 3 {
            return input(format!("vertex {v} has degree below three"));
        }
        link_cycle(self, v)
            .map(|order| Rotation { vertex: v, order })
            .ok_or_else(|| Error::Axiom(format!("no rotation at {v}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub vertex: Label,
    /// Neighbours in cyclic order; consecutive pairs share exactly one disk.
    pub order: Vec<Label>,
}

/// The link of `v`: each disk through `v` joins its two neighbours of `v`.
/// Returns the neighbour cycle when the link is a single simple cycle.
fn link_cycle(cover: &CycleDoubleCover, v: Label) -> Option<Vec<Label>> {
    let mut link: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
    let mut pairs = BTreeSet::new();
    for d in cover.disks_through(v) {
        let (a, b) = d.around(v).unwrap();
        if !pairs.insert(edge(a, b)) {
            return None;
        }
        link.entry(a).or_default().push(b);
        link.entry(b).or_default().push(a);
    }
    let nb = cover.carrier.neighbors(v);
    if link.len() != nb.len() || link.values().any(|x| x.len() != 2) {
        return None;
    }
    let start = *nb.iter().next()?;
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = link[&start][0].min(link[&start][1]);
    while cur != start {
        order.push(cur);
        let next = if link[&cur][0] == prev { link[&cur][1] } else { link[&cur][0] };
        prev = cur;
        cur = next;
        if order.len() > nb.len() {
            return None;
        }
    }
    (order.len() == nb.len()).then_some(order)
}

pub fn classify_cover(g: &Graph, disks: Vec<Cycle>) -> Result<CycleDoubleCover> {
    let mut seen = BTreeSet::new();
    for d in &disks {
        if !d.is_cycle_of(g) {
            return input(format!("disk {d} is not a cycle of the graph"));
        }
        if !seen.insert(d.clone()) {
            return input(format!("disk {d} listed twice"));
        }
    }
    let mut cover = CycleDoubleCover {
        carrier: g.clone(),
        disks,
        class: Classification::Invalid,
        failure: None,
    };
    if let Some(f) = check_d1(&cover) {
        cover.failure = Some(f);
        return Ok(cover);
    }
    cover.class = Classification::Cdc;
    if let Some(f) = check_d3(&cover) {
        cover.failure = Some(f);
        return Ok(cover);
    }
    cover.class = Classification::WeakDiskSystem;
    if let Some(f) = check_d2(&cover) {
        cover.failure = Some(f);
        return Ok(cover);
    }
    cover.class = Classification::DiskSystem;
    Ok(cover)
}

fn check_d1(c: &CycleDoubleCover) -> Option<String> {
    let mut count: BTreeMap<Edge, usize> = c.carrier.edges().into_iter().map(|e| (e, 0)).collect();
    for d in &c.disks {
        for e in d.edges() {
            *count.get_mut(&e).unwrap() += 1;
        }
    }
    count
        .iter()
        .find(|(_, &k)| k != 2)
        .map(|((a, b), k)| format!("D1: edge ({a},{b}) lies on {k} disks"))
}

fn check_d3(c: &CycleDoubleCover) -> Option<String> {
    let segs: BTreeSet<Vec<Label>> = segments(&c.carrier).into_iter().map(|s| s.path).collect();
    for (i, p) in c.disks.iter().enumerate() {
        for q in &c.disks[i + 1..] {
            let common: BTreeSet<Label> = p.vertex_set().intersection(&q.vertex_set()).copied().collect();
            if common.len() <= 1 {
                continue;
            }
            let shared: Vec<Edge> = p.edges().into_iter().filter(|&(a, b)| q.has_edge(a, b)).collect();
            let inter = Graph::new(common.iter().copied(), shared.iter().copied()).expect("shared edges lie on common vertices");
            let is_path = inter.is_connected()
                && inter.size() + 1 == inter.order()
                && inter.vertices().all(|v| inter.degree(v) <= 2);
            let as_segment = is_path && {
                let end = inter.vertices().find(|&v| inter.degree(v) == 1).unwrap();
                let mut path = vec![end];
                let mut prev = end;
                while let Some(&next) = inter.neighbors(*path.last().unwrap()).iter().find(|&&w| w != prev && !path.contains(&w)) {
                    prev = *path.last().unwrap();
                    path.push(next);
                }
                let mut rev = path.clone();
                rev.reverse();
                segs.contains(&path) || segs.contains(&rev)
            };
            if !as_segment {
                return Some(format!("D3: disks {p} and {q} meet in more than a vertex or a segment"));
            }
        }
    }
    None
}

fn check_d2(c: &CycleDoubleCover) -> Option<String> {
    for v in c.carrier.vertices() {
        match c.carrier.degree(v) {
            0 | 1 => {}
            2 => {
                let nb: Vec<Label> = c.carrier.neighbors(v).iter().copied().collect();
                let first: BTreeSet<&Cycle> = c.disks_on_edge(v, nb[0]).collect();
                let second: BTreeSet<&Cycle> = c.disks_on_edge(v, nb[1]).collect();
                if first != second {
                    return Some(format!("D2: the two edges at degree-2 vertex {v} lie on different disks"));
                }
            }
            _ => {
                if link_cycle(c, v).is_none() {
                    return Some(format!("D2: no cyclic order of the edges at {v}"));
                }
            }
        }
    }
    None
}

/// Induced cycles whose vertex deletion leaves a connected graph.
pub fn peripheral_cycles(g: &Graph) -> Vec<Cycle> {
    let mut out = Vec::new();
    for c in induced_cycles(g) {
        if g.remove_vertices(&c.vertex_set()).is_connected() {
            out.push(c);
        }
    }
    out.sort();
    out
}

/// All chordless cycles, each once.
pub fn induced_cycles(g: &Graph) -> Vec<Cycle> {
    fn extend(g: &Graph, path: &mut Vec<Label>, out: &mut Vec<Cycle>) {
        let s = path[0];
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if w <= s || path.contains(&w) {
                continue;
            }
            if path.len() > 2 && path[1..path.len() - 1].iter().any(|&p| g.has_edge(p, w)) {
                continue;
            }
            if path.len() >= 2 && g.has_edge(s, w) {
                if path[1] < w {
                    let mut c = path.clone();
                    c.push(w);
                    out.push(Cycle::new(c).expect("distinct vertices"));
                }
                continue;
            }
            path.push(w);
            extend(g, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for s in g.vertices() {
        extend(g, &mut vec![s], &mut out);
    }
    out.sort();
    out
}

/// Replaces each edge of each disk by its path in the subdivision `s`.
pub fn induce_on_subdivision(
    cover: &CycleDoubleCover,
    s: &Graph,
    seg_map: &BTreeMap<Edge, Vec<Label>>,
) -> Result<CycleDoubleCover> {
    let g = &cover.carrier;
    let mut used = BTreeSet::new();
    let mut interior = BTreeSet::new();
    for e in g.edges() {
        let path = seg_map
            .get(&e)
            .ok_or_else(|| Error::Input(format!("no segment for edge ({},{})", e.0, e.1)))?;
        let ends = (path[0], *path.last().unwrap());
        if ends != e && ends != (e.1, e.0) {
            return input(format!("segment for ({},{}) has ends {ends:?}", e.0, e.1));
        }
        for w in path.windows(2) {
            if !s.has_edge(w[0], w[1]) || !used.insert(edge(w[0], w[1])) {
                return input(format!("segment for ({},{}) is not a fresh path of S", e.0, e.1));
            }
        }
        for &x in &path[1..path.len() - 1] {
            if g.has_vertex(x) || !interior.insert(x) {
                return input(format!("segment for ({},{}) reuses vertex {x}", e.0, e.1));
            }
        }
    }
    if used.len() != s.size() {
        return input("segments do not cover the subdivision");
    }
    let mut disks = Vec::new();
    for d in &cover.disks {
        let vs = d.vertices();
        let mut seq = Vec::new();
        for i in 0..vs.len() {
            let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
            let mut path = seg_map[&edge(a, b)].clone();
            if path[0] != a {
                path.reverse();
            }
            seq.extend_from_slice(&path[..path.len() - 1]);
        }
        disks.push(Cycle::new(seq)?);
    }
    classify_cover(s, disks)
}

/// Adds the chord `uv` inside `disk`, replacing it by its two halves.
pub fn add_chord(cover: &CycleDoubleCover, disk: &Cycle, u: Label, v: Label) -> Result<(Graph, CycleDoubleCover)> {
    let i = cover
        .index_of(disk)
        .ok_or_else(|| Error::Input(format!("{disk} is not a disk of the cover")))?;
    if !disk.contains(u) || !disk.contains(v) {
        return input(format!("chord ({u},{v}) leaves disk {disk}"));
    }
    if u == v || cover.carrier.has_edge(u, v) {
        return input(format!("({u},{v}) is already adjacent"));
    }
    let g = cover.carrier.with_edge(u, v)?;
    let first = Cycle::new(disk.arc(u, v).unwrap())?;
    let second = Cycle::new(disk.arc(v, u).unwrap())?;
    let mut disks = cover.disks.clone();
    disks.splice(i..=i, [first, second]);
    Ok((g.clone(), classify_cover(&g, disks)?))
}

/// Subdivides `e` and joins `u` to the new vertex inside `disk`.
pub fn add_tedge_chord(cover: &CycleDoubleCover, disk: &Cycle, u: Label, e: Edge) -> Result<(Graph, CycleDoubleCover)> {
    if cover.index_of(disk).is_none() {
        return input(format!("{disk} is not a disk of the cover"));
    }
    if !disk.contains(u) {
        return input(format!("vertex {u} is not on disk {disk}"));
    }
    let (x, y) = e;
    if !disk.has_edge(x, y) {
        return input(format!("edge ({x},{y}) is not on disk {disk}"));
    }
    if u == x || u == y {
        return input(format!("vertex {u} is an end of ({x},{y})"));
    }
    let (s, z) = cover.carrier.subdivide_edge(edge(x, y))?;
    let mut disks = Vec::new();
    let mut target = None;
    for d in &cover.disks {
        let nd = if d.has_edge(x, y) {
            let (i, j) = (d.position(x).unwrap(), d.position(y).unwrap());
            let n = d.len();
            let mut seq = d.vertices().to_vec();
            let at = if (i + 1) % n == j { i + 1 } else { j + 1 };
            seq.insert(at, z);
            Cycle::new(seq)?
        } else {
            d.clone()
        };
        if d == disk {
            target = Some(nd.clone());
        }
        disks.push(nd);
    }
    let mid = classify_cover(&s, disks)?;
    add_chord(&mid, &target.unwrap(), u, z)
}
