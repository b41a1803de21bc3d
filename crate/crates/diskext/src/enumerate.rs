//! All valid enlargements of one type over a covered graph, grouped up to
//! isomorphism, and two-sided comparison against expected graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::disk_system::{Classification, CycleDoubleCover};
use crate::enlarge::{
    classify_split, op10_prism, op1_jump, op2_cross, op3_ncsplit, op4_split_jump_to, op5_dsplit_jump, op6_split_cross,
    op7_dsplit_cross, op8_triad, op9_tedge, route_disk, split_vertex, weak_tedge, weak_triad, Enlargement, Op,
    Params, SplitSpec,
};
use crate::error::{input, Error, Result};
use crate::graph_core::{Cycle, Edge, Graph, Label};
use crate::iso::{canonical_form, CanonicalForm};
use crate::util::combinations;

/// Largest source graph accepted by [`enumerate_op`].
pub const MAX_SOURCE_ORDER: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyClass {
    pub canonical: CanonicalForm,
    pub representative: Enlargement,
    pub members: Vec<Params>,
}

impl FamilyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn graph(&self) -> &Graph {
        &self.representative.result
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnlargementFamily {
    pub op: Op,
    #[serde(skip)]
    pub source: Graph,
    pub disks: Vec<Cycle>,
    /// Sorted by canonical form.
    pub classes: Vec<FamilyClass>,
}

impl EnlargementFamily {
    pub fn instance_count(&self) -> usize {
        self.classes.iter().map(FamilyClass::size).sum()
    }
}

#[derive(Default)]
struct Collector {
    index: HashMap<CanonicalForm, usize>,
    classes: Vec<FamilyClass>,
}

impl Collector {
    fn offer(&mut self, r: Result<Enlargement>) -> Result<()> {
        let e = match r {
            Ok(e) => e,
            Err(Error::Precondition { .. }) => return Ok(()),
            Err(other) => return Err(other),
        };
        let canonical = canonical_form(&e.result)?;
        match self.index.get(&canonical) {
            Some(&i) => self.classes[i].members.push(e.params),
            None => {
                self.index.insert(canonical.clone(), self.classes.len());
                self.classes.push(FamilyClass {
                    canonical,
                    members: vec![e.params.clone()],
                    representative: e,
                });
            }
        }
        Ok(())
    }
}

fn conforming_along(cover: &CycleDoubleCover, spec: &SplitSpec, disk: &Cycle) -> bool {
    classify_split(cover, spec).is_ok_and(|c| c.along(disk))
}

pub fn enumerate_op(cover: &CycleDoubleCover, op: Op) -> Result<EnlargementFamily> {
    let g = cover.carrier();
    if g.order() > MAX_SOURCE_ORDER {
        return Err(Error::SizeBound {
            what: "source graph",
            got: g.order(),
            limit: MAX_SOURCE_ORDER,
        });
    }
    if op != Op::Prism && cover.classification() < Classification::WeakDiskSystem {
        return input(format!("enumeration needs a weak disk system, cover is {}", cover.classification()));
    }
    let vs: Vec<Label> = g.vertices().collect();
    let disks = cover.disks();
    let mut out = Collector::default();
    match op {
        Op::Jump => {
            for p in combinations(&vs, 2) {
                if !cover.vertices_confluent(p[0], p[1]) {
                    out.offer(op1_jump(cover, p[0], p[1]))?;
                }
            }
        }
        Op::Cross => {
            for d in disks {
                for q in combinations(d.vertices(), 4) {
                    if !g.has_edge(q[0], q[2]) && !g.has_edge(q[1], q[3]) {
                        out.offer(op2_cross(cover, d, q[0], q[1], q[2], q[3]))?;
                    }
                }
            }
        }
        Op::NcSplit => {
            for &v in &vs {
                for spec in SplitSpec::all(g, v) {
                    out.offer(op3_ncsplit(cover, &spec))?;
                }
            }
        }
        Op::SplitJump => {
            for &v in &vs {
                for spec in SplitSpec::all(g, v) {
                    if !classify_split(cover, &spec)?.is_conforming() {
                        continue;
                    }
                    for &u in &vs {
                        if u == v || g.has_edge(u, v) {
                            continue;
                        }
                        let Some(d) = disks.iter().find(|d| d.contains(u) && d.contains(v)) else {
                            continue;
                        };
                        for h in [spec.v, spec.v2] {
                            out.offer(op4_split_jump_to(cover, d, u, v, &spec, h))?;
                        }
                    }
                }
            }
        }
        Op::DsplitJump => {
            for (a, b) in g.edges() {
                for (u, v) in [(a, b), (b, a)] {
                    for su in SplitSpec::all(g, u) {
                        if !classify_split(cover, &su)?.is_conforming() {
                            continue;
                        }
                        let h = split_vertex(g, &su)?;
                        for sv in SplitSpec::all(&h, v) {
                            out.offer(op5_dsplit_jump(cover, u, v, &su, &sv))?;
                        }
                    }
                }
            }
        }
        Op::SplitCross => {
            for d in disks {
                for &u in d.vertices() {
                    for spec in SplitSpec::all(g, u) {
                        if !conforming_along(cover, &spec, d) {
                            continue;
                        }
                        let dd = route_disk(d, &spec);
                        let far: Vec<Label> = dd
                            .vertices()
                            .iter()
                            .copied()
                            .filter(|&x| x != u && x != spec.v2 && !g.has_edge(u, x))
                            .collect();
                        for p in combinations(&far, 2) {
                            out.offer(op6_split_cross(cover, d, u, p[0], p[1], &spec))?;
                        }
                    }
                }
            }
        }
        Op::DsplitCross => {
            for d in disks {
                for &u in d.vertices() {
                    for &v in d.vertices() {
                        if u == v || g.has_edge(u, v) {
                            continue;
                        }
                        for su in SplitSpec::all(g, u) {
                            if !conforming_along(cover, &su, d) {
                                continue;
                            }
                            let h = split_vertex(g, &su)?;
                            for sv in SplitSpec::all(&h, v) {
                                out.offer(op7_dsplit_cross(cover, d, u, v, &su, &sv))?;
                            }
                        }
                    }
                }
            }
        }
        Op::Triad | Op::WeakTriad => {
            for t in combinations(&vs, 3) {
                let x = [t[0], t[1], t[2]];
                out.offer(if op == Op::Triad { op8_triad(cover, x) } else { weak_triad(cover, x) })?;
            }
        }
        Op::Tedge | Op::WeakTedge => {
            for &u in &vs {
                for (x, y) in g.edges() {
                    if u == x || u == y {
                        continue;
                    }
                    out.offer(if op == Op::Tedge { op9_tedge(cover, u, (x, y)) } else { weak_tedge(cover, u, (x, y)) })?;
                }
            }
        }
        Op::Prism => {
            let tri: Vec<Edge> = g
                .edges()
                .into_iter()
                .filter(|&(a, b)| g.neighbors(a).intersection(g.neighbors(b)).next().is_some())
                .collect();
            for p in combinations(&tri, 2) {
                out.offer(op10_prism(g, p[0], p[1]))?;
            }
        }
    }
    let mut classes = out.classes;
    classes.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    Ok(EnlargementFamily {
        op,
        source: g.clone(),
        disks: disks.to_vec(),
        classes,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    /// For each class, the expected graphs isomorphic to it.
    pub matches: Vec<Vec<usize>>,
    pub unmatched_classes: Vec<usize>,
    pub unmatched_expected: Vec<usize>,
    /// Pairs of expected graphs that are isomorphic to each other.
    pub expected_duplicates: Vec<(usize, usize)>,
}

impl ComparisonReport {
    pub fn two_sided(&self) -> bool {
        self.unmatched_classes.is_empty() && self.unmatched_expected.is_empty()
    }
}

pub fn compare_with_expected(family: &EnlargementFamily, expected: &[Graph]) -> Result<ComparisonReport> {
    let forms = expected.iter().map(canonical_form).collect::<Result<Vec<_>>>()?;
    let mut by_form: BTreeMap<&CanonicalForm, Vec<usize>> = BTreeMap::new();
    for (i, f) in forms.iter().enumerate() {
        by_form.entry(f).or_default().push(i);
    }
    let mut report = ComparisonReport::default();
    let mut hit: BTreeSet<usize> = BTreeSet::new();
    for (k, c) in family.classes.iter().enumerate() {
        let m = by_form.get(&c.canonical).cloned().unwrap_or_default();
        if m.is_empty() {
            report.unmatched_classes.push(k);
        }
        hit.extend(m.iter().copied());
        report.matches.push(m);
    }
    report.unmatched_expected = (0..expected.len()).filter(|i| !hit.contains(i)).collect();
    for group in by_form.values() {
        for (i, &a) in group.iter().enumerate() {
            report.expected_duplicates.extend(group[i + 1..].iter().map(|&b| (a, b)));
        }
    }
    report.expected_duplicates.sort();
    Ok(report)
}
