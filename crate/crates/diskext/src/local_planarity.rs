//! Subdivisions inside a host, their bridges, the witness finders for
//! non-confluent paths, free crosses and triads, and local planarity.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::disk_system::{induce_on_subdivision, Classification, CycleDoubleCover};
use crate::error::{input, Error, Result};
use crate::graph_core::{edge, Cycle, Edge, Graph, Label};
use crate::planarity::planar;
use crate::util::combinations;

pub const MAX_PLANAR: usize = 32;

pub fn is_planar(g: &Graph) -> Result<bool> {
    if g.order() > MAX_PLANAR {
        return Err(Error::SizeBound {
            what: "graph",
            got: g.order(),
            limit: MAX_PLANAR,
        });
    }
    Ok(planar(g))
}

/// `s` is a subgraph of `host` and a subdivision of `base`; base vertices
/// keep their labels as branch vertices of `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionMap {
    host: Graph,
    s: Graph,
    base: Graph,
    segments: BTreeMap<Edge, Vec<Label>>,
}

impl SubdivisionMap {
    pub fn new(host: &Graph, s: &Graph, base: &Graph) -> Result<SubdivisionMap> {
        if !s.is_subgraph_of(host) {
            return input("S is not a subgraph of the host");
        }
        if let Some(v) = base.vertices().find(|&v| !s.has_vertex(v)) {
            return input(format!("base vertex {v} is not in S"));
        }
        if let Some(v) = s.vertices().find(|&v| !base.has_vertex(v) && s.degree(v) != 2) {
            return input(format!("vertex {v} of S is neither a branch vertex nor of degree two"));
        }
        let mut segments: BTreeMap<Edge, Vec<Label>> = BTreeMap::new();
        for a in base.vertices() {
            for &first in s.neighbors(a) {
                let mut path = vec![a, first];
                while !base.has_vertex(*path.last().unwrap()) {
                    let (prev, cur) = (path[path.len() - 2], path[path.len() - 1]);
                    let next = *s.neighbors(cur).iter().find(|&&w| w != prev).unwrap();
                    path.push(next);
                }
                let b = *path.last().unwrap();
                if a < b {
                    if !base.has_edge(a, b) || segments.insert((a, b), path).is_some() {
                        return input(format!("S has a path between {a} and {b} that matches no unique base edge"));
                    }
                } else if a == b {
                    return input(format!("S has a closed path at {a}"));
                }
            }
        }
        if segments.len() != base.size() {
            return input("some base edge has no path in S");
        }
        let covered: BTreeSet<Label> = segments.values().flatten().copied().collect();
        if covered.len() != s.order() {
            return input("S has a component without branch vertices");
        }
        Ok(SubdivisionMap {
            host: host.clone(),
            s: s.clone(),
            base: base.clone(),
            segments,
        })
    }

    /// `s` as a subdivision of its own smoothing, keeping the labels of
    /// every vertex of degree other than two.
    pub fn from_subgraph(host: &Graph, s: &Graph) -> Result<SubdivisionMap> {
        let branch: BTreeSet<Label> = s.vertices().filter(|&v| s.degree(v) != 2).collect();
        let mut base = Graph::new(branch.iter().copied(), [])?;
        for seg in crate::graph_core::segments(s) {
            if seg.closed {
                return input("S has a component that is a bare cycle");
            }
            let (a, b) = seg.ends();
            if a == b || base.has_edge(a, b) {
                return input(format!("smoothing S gives a loop or parallel edge at ({a},{b})"));
            }
            base.add_edge(a, b)?;
        }
        SubdivisionMap::new(host, s, &base)
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn s(&self) -> &Graph {
        &self.s
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    /// Base edge to its path in `s`.
    pub fn segments(&self) -> &BTreeMap<Edge, Vec<Label>> {
        &self.segments
    }

    pub fn is_branch_vertex(&self, v: Label) -> bool {
        self.base.has_vertex(v)
    }

    /// A cover over `s`, inducing it from the base when needed.
    pub fn cover_on_s(&self, cover: &CycleDoubleCover) -> Result<CycleDoubleCover> {
        if cover.carrier() == &self.s {
            Ok(cover.clone())
        } else if cover.carrier() == &self.base {
            induce_on_subdivision(cover, &self.s, &self.segments)
        } else {
            input("the cover is neither over S nor over its base")
        }
    }

    fn segments_containing(&self, v: Label) -> impl Iterator<Item = &Vec<Label>> + '_ {
        self.segments.values().filter(move |p| p.contains(&v))
    }

    fn same_segment(&self, a: Label, b: Label) -> bool {
        self.segments.values().any(|p| p.contains(&a) && p.contains(&b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SBridge {
    /// Vertices of the bridge outside S (empty for a chord).
    pub interior: BTreeSet<Label>,
    pub edges: Vec<Edge>,
    pub attachments: BTreeSet<Label>,
}

impl SBridge {
    pub fn is_chord(&self) -> bool {
        self.interior.is_empty()
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.edges.iter().copied()).expect("bridge edges are simple")
    }

    /// Every S-path in this bridge from `a` to `b`.
    fn paths(&self, host: &Graph, a: Label, b: Label, avoid: &BTreeSet<Label>) -> Vec<Vec<Label>> {
        let mut out = Vec::new();
        if self.is_chord() {
            if self.attachments == BTreeSet::from([a, b]) {
                out.push(vec![a, b]);
            }
            return out;
        }
        fn go(
            host: &Graph,
            inside: &BTreeSet<Label>,
            avoid: &BTreeSet<Label>,
            b: Label,
            path: &mut Vec<Label>,
            out: &mut Vec<Vec<Label>>,
        ) {
            let last = *path.last().unwrap();
            if path.len() > 1 && host.has_edge(last, b) {
                let mut p = path.clone();
                p.push(b);
                out.push(p);
            }
            for &y in host.neighbors(last) {
                if inside.contains(&y) && !avoid.contains(&y) && !path.contains(&y) {
                    path.push(y);
                    go(host, inside, avoid, b, path, out);
                    path.pop();
                }
            }
        }
        if a != b {
            go(host, &self.interior, avoid, b, &mut vec![a], &mut out);
        }
        out
    }
}

pub fn find_bridges(sub: &SubdivisionMap) -> Vec<SBridge> {
    let (h, s) = (&sub.host, &sub.s);
    let mut out = Vec::new();
    for (a, b) in h.edges() {
        if s.has_vertex(a) && s.has_vertex(b) && !s.has_edge(a, b) {
            out.push(SBridge {
                interior: BTreeSet::new(),
                edges: vec![(a, b)],
                attachments: [a, b].into(),
            });
        }
    }
    for comp in h.remove_vertices(&s.vertex_set()).components() {
        let mut edges = BTreeSet::new();
        let mut attachments = BTreeSet::new();
        for &x in &comp {
            for &y in h.neighbors(x) {
                edges.insert(edge(x, y));
                if !comp.contains(&y) {
                    attachments.insert(y);
                }
            }
        }
        out.push(SBridge {
            interior: comp,
            edges: edges.into_iter().collect(),
            attachments,
        });
    }
    out
}

fn require_cover(sub: &SubdivisionMap, cover: &CycleDoubleCover) -> Result<CycleDoubleCover> {
    let c = sub.cover_on_s(cover)?;
    if c.classification() < Classification::Cdc {
        return input(format!("the cover is not a cycle double cover: {}", c.failure().unwrap_or("")));
    }
    Ok(c)
}

/// An S-path whose ends lie on no common disk.
pub fn find_nonconfluent_spath(sub: &SubdivisionMap, cover: &CycleDoubleCover) -> Result<Option<Vec<Label>>> {
    let c = require_cover(sub, cover)?;
    for b in find_bridges(sub) {
        let att: Vec<Label> = b.attachments.iter().copied().collect();
        for pair in combinations(&att, 2) {
            if !c.vertices_confluent(pair[0], pair[1]) {
                let p = b.paths(&sub.host, pair[0], pair[1], &BTreeSet::new());
                return Ok(p.into_iter().min_by_key(|p| p.len()));
            }
        }
    }
    Ok(None)
}

/// Two disjoint S-paths whose ends interleave on `disk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SCross {
    pub disk: Cycle,
    pub legs: [Vec<Label>; 2],
}

impl SCross {
    /// `[u1, v1, u2, v2]`; around the disk they read u1, u2, v1, v2.
    pub fn feet(&self) -> [Label; 4] {
        let [p, q] = &self.legs;
        [p[0], *p.last().unwrap(), q[0], *q.last().unwrap()]
    }
}

/// Both freeness conditions: no leg has both ends on one segment, and no
/// two segments meeting at a vertex hold all four feet.
pub fn is_free(cross: &SCross, sub: &SubdivisionMap) -> bool {
    let [u1, v1, u2, v2] = cross.feet();
    if sub.same_segment(u1, v1) || sub.same_segment(u2, v2) {
        return false;
    }
    let segs: Vec<&Vec<Label>> = sub.segments.values().collect();
    for (i, p) in segs.iter().enumerate() {
        for q in &segs[i..] {
            let meet = p.iter().any(|x| q.contains(x));
            if meet && [u1, v1, u2, v2].iter().all(|f| p.contains(f) || q.contains(f)) {
                return false;
            }
        }
    }
    true
}

fn is_cross_shape(disk: &Cycle, legs: &[Vec<Label>; 2]) -> bool {
    let [p, q] = legs;
    let feet = [p[0], q[0], *p.last().unwrap(), *q.last().unwrap()];
    let distinct: BTreeSet<Label> = feet.iter().copied().collect();
    distinct.len() == 4
        && feet.iter().all(|&f| disk.contains(f))
        && disk.in_cyclic_order(&feet)
        && p.iter().all(|x| !q.contains(x))
}

pub fn find_free_cross(sub: &SubdivisionMap, cover: &CycleDoubleCover) -> Result<Option<SCross>> {
    let c = require_cover(sub, cover)?;
    let bridges = find_bridges(sub);
    let h = &sub.host;
    for disk in c.disks() {
        let on: Vec<Vec<Label>> = bridges
            .iter()
            .map(|b| b.attachments.iter().copied().filter(|&x| disk.contains(x)).collect())
            .collect();
        for (i, b1) in bridges.iter().enumerate() {
            for (j, b2) in bridges.iter().enumerate().skip(i) {
                for e1 in combinations(&on[i], 2) {
                    for e2 in combinations(&on[j], 2) {
                        let (u1, v1, u2, v2) = (e1[0], e1[1], e2[0], e2[1]);
                        if !disk.in_cyclic_order(&[u1, u2, v1, v2]) {
                            continue;
                        }
                        let probe = SCross {
                            disk: disk.clone(),
                            legs: [vec![u1, v1], vec![u2, v2]],
                        };
                        if !is_free(&probe, sub) {
                            continue;
                        }
                        for p1 in b1.paths(h, u1, v1, &BTreeSet::new()) {
                            let used: BTreeSet<Label> = p1.iter().copied().collect();
                            if let Some(p2) = b2.paths(h, u2, v2, &used).into_iter().next() {
                                let legs = [p1, p2];
                                if is_cross_shape(disk, &legs) {
                                    return Ok(Some(SCross {
                                        disk: disk.clone(),
                                        legs,
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Three paths from a vertex outside S to pairwise confluent feet that
/// share no disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct STriad {
    pub center: Label,
    /// Each leg runs from the center to its foot.
    pub legs: [Vec<Label>; 3],
}

impl STriad {
    pub fn feet(&self) -> [Label; 3] {
        [0, 1, 2].map(|i| *self.legs[i].last().unwrap())
    }
}

fn legs_from(h: &Graph, inside: &BTreeSet<Label>, x: Label, feet: &[Label]) -> Option<Vec<Vec<Label>>> {
    fn paths(h: &Graph, inside: &BTreeSet<Label>, used: &BTreeSet<Label>, x: Label, f: Label) -> Vec<Vec<Label>> {
        let mut out = Vec::new();
        let mut stack = vec![vec![x]];
        while let Some(p) = stack.pop() {
            let last = *p.last().unwrap();
            if h.has_edge(last, f) {
                let mut q = p.clone();
                q.push(f);
                out.push(q);
            }
            for &y in h.neighbors(last) {
                if inside.contains(&y) && !used.contains(&y) && !p.contains(&y) {
                    let mut q = p.clone();
                    q.push(y);
                    stack.push(q);
                }
            }
        }
        out.sort_by_key(|p| p.len());
        out
    }
    fn go(
        h: &Graph,
        inside: &BTreeSet<Label>,
        x: Label,
        feet: &[Label],
        used: &mut BTreeSet<Label>,
        legs: &mut Vec<Vec<Label>>,
    ) -> bool {
        let Some(&f) = feet.get(legs.len()) else {
            return true;
        };
        for p in paths(h, inside, used, x, f) {
            let interior = &p[1..p.len() - 1];
            used.extend(interior.iter().copied());
            legs.push(p.clone());
            if go(h, inside, x, feet, used, legs) {
                return true;
            }
            legs.pop();
            for v in interior {
                used.remove(v);
            }
        }
        false
    }
    let mut used = BTreeSet::from([x]);
    let mut legs = Vec::new();
    go(h, inside, x, feet, &mut used, &mut legs).then_some(legs)
}

pub fn find_triad(sub: &SubdivisionMap, cover: &CycleDoubleCover) -> Result<Option<STriad>> {
    let c = require_cover(sub, cover)?;
    for b in find_bridges(sub).iter().filter(|b| !b.is_chord()) {
        let att: Vec<Label> = b.attachments.iter().copied().collect();
        for feet in combinations(&att, 3) {
            let pairwise = combinations(&feet, 2).iter().all(|p| c.vertices_confluent(p[0], p[1]));
            let common = c.disks().iter().any(|d| feet.iter().all(|&f| d.contains(f)));
            if !pairwise || common {
                continue;
            }
            for &x in &b.interior {
                if let Some(legs) = legs_from(&sub.host, &b.interior, x, &feet) {
                    return Ok(Some(STriad {
                        center: x,
                        legs: [legs[0].clone(), legs[1].clone(), legs[2].clone()],
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LocalPlanarity {
    /// The chosen disk for each bridge, in `find_bridges` order.
    Holds { assignment: Vec<Cycle> },
    /// The bridge's attachments lie on no single disk.
    NoDisk { bridge: usize },
    /// Every assignment fails; `disk` with `bridges` is the last failure seen.
    NotPlanar { disk: Cycle, bridges: Vec<usize> },
}

impl LocalPlanarity {
    pub fn holds(&self) -> bool {
        matches!(self, LocalPlanarity::Holds { .. })
    }
}

/// The disk plus the given bridges and an apex joined to the whole disk.
fn apexed(disk: &Cycle, bridges: &[&SBridge]) -> Graph {
    let mut es: BTreeSet<Edge> = disk.edges().into_iter().collect();
    for b in bridges {
        es.extend(b.edges.iter().copied());
    }
    let mut g = Graph::from_edges(es).expect("simple");
    let apex = g.max_label() + 1;
    g.add_vertex(apex).unwrap();
    for &v in disk.vertices() {
        g.add_edge(apex, v).unwrap();
    }
    g
}

pub fn is_locally_planar(sub: &SubdivisionMap, cover: &CycleDoubleCover) -> Result<LocalPlanarity> {
    let c = require_cover(sub, cover)?;
    let bridges = find_bridges(sub);
    let disks = c.disks();
    let mut cands: Vec<Vec<usize>> = Vec::new();
    for (i, b) in bridges.iter().enumerate() {
        let ok: Vec<usize> = (0..disks.len())
            .filter(|&d| b.attachments.iter().all(|&a| disks[d].contains(a)))
            .collect();
        if ok.is_empty() {
            return Ok(LocalPlanarity::NoDisk { bridge: i });
        }
        cands.push(ok);
    }
    let mut order: Vec<usize> = (0..bridges.len()).collect();
    order.sort_by_key(|&i| cands[i].len());

    struct St<'a> {
        bridges: &'a [SBridge],
        disks: &'a [Cycle],
        cands: &'a [Vec<usize>],
        order: &'a [usize],
        chosen: Vec<Option<usize>>,
        last_fail: Option<(usize, Vec<usize>)>,
    }
    fn go(s: &mut St, k: usize) -> bool {
        let Some(&b) = s.order.get(k) else {
            return true;
        };
        for &d in &s.cands[b] {
            s.chosen[b] = Some(d);
            let on: Vec<usize> = (0..s.bridges.len()).filter(|&i| s.chosen[i] == Some(d)).collect();
            let refs: Vec<&SBridge> = on.iter().map(|&i| &s.bridges[i]).collect();
            if planar(&apexed(&s.disks[d], &refs)) {
                if go(s, k + 1) {
                    return true;
                }
            } else {
                s.last_fail = Some((d, on));
            }
            s.chosen[b] = None;
        }
        false
    }
    let mut st = St {
        bridges: &bridges,
        disks,
        cands: &cands,
        order: &order,
        chosen: vec![None; bridges.len()],
        last_fail: None,
    };
    if go(&mut st, 0) {
        let assignment = st.chosen.iter().map(|d| disks[d.unwrap()].clone()).collect();
        return Ok(LocalPlanarity::Holds { assignment });
    }
    let (d, on) = st.last_fail.expect("a failed search records a failure");
    Ok(LocalPlanarity::NotPlanar {
        disk: disks[d].clone(),
        bridges: on,
    })
}

/// The first outcome found, tried in the order listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    NonConfluentPath { path: Vec<Label> },
    FreeCross { cross: SCross },
    Triad { triad: STriad },
    LocallyPlanar { assignment: Vec<Cycle> },
    Neither { detail: LocalPlanarity },
}

pub fn classify_outcome(sub: &SubdivisionMap, cover: &CycleDoubleCover) -> Result<Outcome> {
    if let Some(path) = find_nonconfluent_spath(sub, cover)? {
        return Ok(Outcome::NonConfluentPath { path });
    }
    if let Some(cross) = find_free_cross(sub, cover)? {
        return Ok(Outcome::FreeCross { cross });
    }
    if let Some(triad) = find_triad(sub, cover)? {
        return Ok(Outcome::Triad { triad });
    }
    Ok(match is_locally_planar(sub, cover)? {
        LocalPlanarity::Holds { assignment } => Outcome::LocallyPlanar { assignment },
        other => Outcome::Neither { detail: other },
    })
}

/// Segments of `sub` holding `v`, for diagnostics.
pub fn segments_at(sub: &SubdivisionMap, v: Label) -> Vec<Vec<Label>> {
    sub.segments_containing(v).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cyc(v: &[Label]) -> Cycle {
        Cycle::new(v.to_vec()).unwrap()
    }

    fn over_p10(host: &Graph) -> SubdivisionMap {
        let p = catalog::petersen();
        SubdivisionMap::new(host, &p, &p).unwrap()
    }

    #[test]
    fn bridges_examples() {
        let b = find_bridges(&over_p10(&catalog::q1()));
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].attachments, [7, 8].into());
        assert_eq!(b[1].attachments, [9, 10].into());
        assert!(find_bridges(&over_p10(&catalog::petersen())).is_empty());
        let b = find_bridges(&over_p10(&catalog::q2()));
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].interior, [11].into());
        assert_eq!(b[0].attachments, [2, 4, 6].into());
    }

    #[test]
    fn local_planarity_examples() {
        let sub = over_p10(&catalog::q1());
        match is_locally_planar(&sub, &catalog::cover_d()).unwrap() {
            LocalPlanarity::NotPlanar { disk, .. } => assert_eq!(disk, cyc(&[6, 9, 7, 10, 8])),
            other => panic!("{other:?}"),
        }
        let lp = is_locally_planar(&sub, &catalog::cover_d_prime()).unwrap();
        assert_eq!(
            lp,
            LocalPlanarity::Holds {
                assignment: vec![cyc(&[10, 8, 3, 2, 7]), cyc(&[7, 10, 5, 4, 9])]
            }
        );
        let trivial = over_p10(&catalog::petersen());
        assert!(is_locally_planar(&trivial, &catalog::cover_d()).unwrap().holds());
    }

    #[test]
    fn cross_examples() {
        let sub = over_p10(&catalog::q1());
        let cross = find_free_cross(&sub, &catalog::cover_d()).unwrap().unwrap();
        assert_eq!(cross.disk, cyc(&[6, 9, 7, 10, 8]));
        assert!(is_free(&cross, &sub));
        assert!(find_free_cross(&over_p10(&catalog::petersen()), &catalog::cover_d()).unwrap().is_none());
        let same_segment = SCross {
            disk: cyc(&[6, 9, 7, 10, 8]),
            legs: [vec![6, 9], vec![7, 10]],
        };
        assert!(!is_free(&same_segment, &sub));
    }

    #[test]
    fn path_and_triad_examples() {
        let q1 = catalog::q1();
        let host = q1.with_edge(2, 10).unwrap();
        let sub = SubdivisionMap::new(&host, &q1, &q1).unwrap();
        assert_eq!(find_nonconfluent_spath(&sub, &catalog::cover_d1()).unwrap(), Some(vec![2, 10]));
        assert_eq!(find_nonconfluent_spath(&over_p10(&q1), &catalog::cover_d()).unwrap(), None);
        let t = find_triad(&over_p10(&catalog::q2()), &catalog::cover_d()).unwrap().unwrap();
        assert_eq!(t.center, 11);
        assert_eq!(t.feet(), [2, 4, 6]);
        assert!(find_triad(&over_p10(&q1), &catalog::cover_d()).unwrap().is_none());
    }

    #[test]
    fn subdivision_map_from_q3() {
        let q3 = catalog::q3();
        let (s, _) = catalog::petersen().subdivide_edge((3, 4)).unwrap();
        let sub = SubdivisionMap::new(&q3, &s, &catalog::petersen()).unwrap();
        assert_eq!(sub.segments()[&(3, 4)], vec![3, 11, 4]);
        let induced = sub.cover_on_s(&catalog::cover_d_prime()).unwrap();
        assert_eq!(induced.classification(), Classification::DiskSystem);
        let b = find_bridges(&sub);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].attachments, [1, 11].into());
        let smooth = SubdivisionMap::from_subgraph(&q3, &s).unwrap();
        assert_eq!(smooth.base(), &catalog::petersen());
    }
}
