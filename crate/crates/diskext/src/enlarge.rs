//! Vertex splits, conformity, induced covers, expansions, the enlargement
//! operations and the expression language that composes them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog;
use crate::connectivity::is_prism;
use crate::disk_system::{classify_cover, peripheral_cycles, Classification, CycleDoubleCover};
use crate::error::{input, pre, Error, Result};
use crate::graph_core::{edge, Cycle, Edge, Graph, Label};

/// Operation types; the first ten are numbered 1..=10.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Jump,
    Cross,
    NcSplit,
    SplitJump,
    DsplitJump,
    SplitCross,
    DsplitCross,
    Triad,
    Tedge,
    Prism,
    WeakTriad,
    WeakTedge,
}

impl Op {
    pub const ALL: [Op; 12] = [
        Op::Jump,
        Op::Cross,
        Op::NcSplit,
        Op::SplitJump,
        Op::DsplitJump,
        Op::SplitCross,
        Op::DsplitCross,
        Op::Triad,
        Op::Tedge,
        Op::Prism,
        Op::WeakTriad,
        Op::WeakTedge,
    ];

    pub fn number(self) -> Option<u8> {
        let i = Op::ALL.iter().position(|&o| o == self).unwrap() as u8 + 1;
        (i <= 10).then_some(i)
    }

    pub fn from_number(n: u8) -> Option<Op> {
        (1..=10).contains(&n).then(|| Op::ALL[n as usize - 1])
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Jump => "jump",
            Op::Cross => "cross",
            Op::NcSplit => "ncsplit",
            Op::SplitJump => "splitjump",
            Op::DsplitJump => "dsplitjump",
            Op::SplitCross => "splitcross",
            Op::DsplitCross => "dsplitcross",
            Op::Triad => "triad",
            Op::Tedge => "tedge",
            Op::Prism => "prism",
            Op::WeakTriad => "weak_triad",
            Op::WeakTedge => "weak_tedge",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = Error;

    fn from_str(s: &str) -> Result<Op> {
        if let Ok(n) = s.parse::<u8>() {
            return Op::from_number(n).ok_or_else(|| Error::Input(format!("no operation number {n}")));
        }
        let key = s.to_ascii_lowercase().replace('-', "_");
        Op::ALL
            .iter()
            .copied()
            .find(|o| o.name() == key)
            .ok_or_else(|| Error::Input(format!("unknown operation `{s}`")))
    }
}

/// Split of `v`: `v` keeps `n1`, the new vertex `v2` takes `n2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SplitSpec {
    pub v: Label,
    pub n1: BTreeSet<Label>,
    pub n2: BTreeSet<Label>,
    pub v2: Label,
}

impl SplitSpec {
    pub fn new(g: &Graph, v: Label, n1: impl IntoIterator<Item = Label>) -> Result<SplitSpec> {
        if !g.has_vertex(v) {
            return input(format!("vertex {v} is not in the graph"));
        }
        let nb = g.neighbors(v);
        let n1: BTreeSet<Label> = n1.into_iter().collect();
        if let Some(x) = n1.iter().find(|x| !nb.contains(x)) {
            return pre("split", format!("{x} is not a neighbour of {v}"));
        }
        if nb.len() < 4 {
            return pre("split", format!("vertex {v} has degree {} < 4", nb.len()));
        }
        let n2: BTreeSet<Label> = nb.difference(&n1).copied().collect();
        if n1.len() < 2 || n2.len() < 2 {
            return pre("split", format!("each side needs two neighbours of {v}"));
        }
        Ok(SplitSpec {
            v,
            n1,
            n2,
            v2: g.max_label() + 1,
        })
    }

    /// The same partition with the sides exchanged.
    pub fn swapped(&self) -> SplitSpec {
        SplitSpec {
            v: self.v,
            n1: self.n2.clone(),
            n2: self.n1.clone(),
            v2: self.v2,
        }
    }

    /// Every unordered bipartition, `n1` holding the least neighbour.
    pub fn all(g: &Graph, v: Label) -> Vec<SplitSpec> {
        let nb: Vec<Label> = g.neighbors(v).iter().copied().collect();
        if nb.len() < 4 {
            return Vec::new();
        }
        let rest = &nb[1..];
        let mut out = Vec::new();
        for mask in 0u32..(1 << rest.len()) {
            let n1 = std::iter::once(nb[0]).chain((0..rest.len()).filter(|i| mask >> i & 1 == 1).map(|i| rest[i]));
            if let Ok(s) = SplitSpec::new(g, v, n1) {
                out.push(s);
            }
        }
        out
    }

    /// The half of `v` adjacent to `x` after the split.
    pub fn half_towards(&self, x: Label) -> Label {
        if self.n1.contains(&x) {
            self.v
        } else {
            self.v2
        }
    }

    fn other_half(&self, h: Label) -> Label {
        if h == self.v {
            self.v2
        } else {
            self.v
        }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        let fresh = SplitSpec::new(g, self.v, self.n1.iter().copied())?;
        if &fresh != self {
            return input(format!("split of {} does not match the graph", self.v));
        }
        Ok(())
    }
}

impl fmt::Display for SplitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n1: Vec<String> = self.n1.iter().map(|x| x.to_string()).collect();
        write!(f, "*{}({})", self.v, n1.join(","))
    }
}

pub fn split_vertex(g: &Graph, spec: &SplitSpec) -> Result<Graph> {
    spec.check(g)?;
    let mut h = g.remove_vertices(&[spec.v].into());
    h.add_vertex(spec.v)?;
    h.add_vertex(spec.v2)?;
    h.add_edge(spec.v, spec.v2)?;
    for &x in &spec.n1 {
        h.add_edge(spec.v, x)?;
    }
    for &x in &spec.n2 {
        h.add_edge(spec.v2, x)?;
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitAxiom {
    S1,
    S2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Conformity {
    Conforming { crossing: [Cycle; 2] },
    NonConforming { violated: SplitAxiom, crossing: Vec<Cycle> },
}

impl Conformity {
    pub fn is_conforming(&self) -> bool {
        matches!(self, Conformity::Conforming { .. })
    }

    /// Is the split along `disk`?
    pub fn along(&self, disk: &Cycle) -> bool {
        matches!(self, Conformity::Conforming { crossing } if crossing.contains(disk))
    }
}

pub fn classify_split(cover: &CycleDoubleCover, spec: &SplitSpec) -> Result<Conformity> {
    if cover.classification() < Classification::WeakDiskSystem {
        return input(format!("split conformity needs a weak disk system, cover is {}", cover.classification()));
    }
    spec.check(cover.carrier())?;
    let crossing: Vec<Cycle> = cover
        .disks_through(spec.v)
        .filter(|d| {
            let (a, b) = d.around(spec.v).unwrap();
            spec.n1.contains(&a) != spec.n1.contains(&b)
        })
        .cloned()
        .collect();
    if crossing.len() != 2 {
        return Ok(Conformity::NonConforming {
            violated: SplitAxiom::S1,
            crossing,
        });
    }
    let common: BTreeSet<Label> = crossing[0].vertex_set().intersection(&crossing[1].vertex_set()).copied().collect();
    if common != BTreeSet::from([spec.v]) {
        return Ok(Conformity::NonConforming {
            violated: SplitAxiom::S2,
            crossing,
        });
    }
    Ok(Conformity::Conforming {
        crossing: [crossing[0].clone(), crossing[1].clone()],
    })
}

/// The image of one disk in the split graph.
pub fn route_disk(d: &Cycle, spec: &SplitSpec) -> Cycle {
    let Some((a, b)) = d.around(spec.v) else {
        return d.clone();
    };
    let rest = d.arc(b, a).unwrap();
    let (ha, hb) = (spec.half_towards(a), spec.half_towards(b));
    let mut seq = vec![hb];
    seq.extend(rest);
    if ha != hb {
        seq.push(ha);
    }
    Cycle::new(seq).expect("routing keeps a cycle")
}

pub fn induce_on_split(cover: &CycleDoubleCover, spec: &SplitSpec) -> Result<CycleDoubleCover> {
    if !classify_split(cover, spec)?.is_conforming() {
        return pre("split", format!("split of {} is not conforming", spec.v));
    }
    let g = split_vertex(cover.carrier(), spec)?;
    classify_cover(&g, cover.disks().iter().map(|d| route_disk(d, spec)).collect())
}

/// A graph obtained by repeated splits, with its branch sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    base: Graph,
    splits: Vec<SplitSpec>,
    result: Graph,
    new_edges: Vec<Edge>,
    branch_sets: BTreeMap<Label, BTreeSet<Label>>,
}

impl Expansion {
    pub fn new(base: &Graph) -> Expansion {
        Expansion {
            base: base.clone(),
            splits: Vec::new(),
            result: base.clone(),
            new_edges: Vec::new(),
            branch_sets: base.vertices().map(|v| (v, [v].into())).collect(),
        }
    }

    pub fn split(&self, spec: &SplitSpec) -> Result<Expansion> {
        let result = split_vertex(&self.result, spec)?;
        let mut next = self.clone();
        next.result = result;
        next.splits.push(spec.clone());
        next.new_edges.push(edge(spec.v, spec.v2));
        let owner = *next
            .branch_sets
            .iter()
            .find(|(_, s)| s.contains(&spec.v))
            .map(|(b, _)| b)
            .expect("every vertex has a branch set");
        next.branch_sets.get_mut(&owner).unwrap().insert(spec.v2);
        Ok(next)
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn splits(&self) -> &[SplitSpec] {
        &self.splits
    }

    pub fn result(&self) -> &Graph {
        &self.result
    }

    pub fn new_edges(&self) -> &[Edge] {
        &self.new_edges
    }

    pub fn branch_sets(&self) -> &BTreeMap<Label, BTreeSet<Label>> {
        &self.branch_sets
    }
}

/// Operation parameters, named as in the operation definitions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Params {
    Jump { u: Label, v: Label },
    Cross { disk: Cycle, a: Label, b: Label, c: Label, d: Label },
    NcSplit { split: SplitSpec },
    SplitJump { disk: Cycle, u: Label, v: Label, split: SplitSpec, v2: Label },
    DsplitJump { u: Label, v: Label, c1: Cycle, c2: Cycle, split_u: SplitSpec, split_v: SplitSpec },
    SplitCross { disk: Cycle, u: Label, v: Label, w: Label, split: SplitSpec, u1: Label, u2: Label },
    DsplitCross { disk: Cycle, u: Label, v: Label, split_u: SplitSpec, split_v: SplitSpec, u1: Label, u2: Label, v1: Label, v2: Label },
    Triad { x: [Label; 3] },
    Tedge { u: Label, x: Label, y: Label },
    Prism { e1: Edge, e2: Edge },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enlargement {
    pub op: Op,
    pub params: Params,
    #[serde(skip)]
    pub source: Graph,
    #[serde(skip)]
    pub result: Graph,
    /// Edges added on top of splits and subdivisions.
    pub added_edges: Vec<Edge>,
    /// The new edge of each split, in order.
    pub split_edges: Vec<Edge>,
    pub new_vertices: Vec<Label>,
}

impl Enlargement {
    /// The enlargement written as expression steps over the source.
    pub fn steps(&self) -> Vec<Step> {
        let split = |s: &SplitSpec| Step::Split {
            v: s.v,
            n1: s.n1.iter().copied().collect(),
        };
        let mut out = match &self.params {
            Params::Triad { x } => return vec![Step::Triad { x: *x }],
            Params::Tedge { u, x, y } => return vec![Step::Tedge { u: *u, x: *x, y: *y }],
            Params::Prism { e1, e2 } => return vec![Step::Prism { e1: *e1, e2: *e2 }],
            Params::NcSplit { split: s } | Params::SplitJump { split: s, .. } | Params::SplitCross { split: s, .. } => {
                vec![split(s)]
            }
            Params::DsplitJump { split_u, split_v, .. } | Params::DsplitCross { split_u, split_v, .. } => {
                vec![split(split_u), split(split_v)]
            }
            Params::Jump { .. } | Params::Cross { .. } => Vec::new(),
        };
        out.extend(self.added_edges.iter().map(|&(u, v)| Step::Edge { u, v }));
        out
    }

    pub fn expression(&self) -> String {
        self.steps().iter().map(|s| s.to_string()).collect()
    }

    /// Deletes the added edges and vertices, contracts split edges and
    /// smooths subdivision vertices; gives back the source exactly.
    pub fn undo(&self) -> Result<Graph> {
        let mut g = self.result.clone();
        for &e in &self.added_edges {
            g = g.delete_edge(e)?;
        }
        for &e in self.split_edges.iter().rev() {
            g = g.contract_edge(e)?;
        }
        for &z in self.new_vertices.iter().rev() {
            if !g.has_vertex(z) {
                continue;
            }
            let nb: Vec<Label> = g.neighbors(z).iter().copied().collect();
            g = g.remove_vertices(&[z].into());
            if let [x, y] = nb[..] {
                g.add_edge(x, y)?;
            }
        }
        Ok(g)
    }
}

fn need(ok: bool, op: Op, clause: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition {
            op: op.name(),
            clause: clause(),
        })
    }
}

fn require_cdc(cover: &CycleDoubleCover) -> Result<()> {
    if cover.classification() < Classification::Cdc {
        return input(format!("cover is not a cycle double cover: {}", cover.failure().unwrap_or("")));
    }
    Ok(())
}

fn require_vertices(g: &Graph, vs: &[Label]) -> Result<()> {
    if let Some(v) = vs.iter().find(|&&v| !g.has_vertex(v)) {
        return input(format!("vertex {v} is not in the graph"));
    }
    let distinct: BTreeSet<&Label> = vs.iter().collect();
    if distinct.len() != vs.len() {
        return input(format!("vertices {vs:?} are not distinct"));
    }
    Ok(())
}

fn require_disk(cover: &CycleDoubleCover, disk: &Cycle) -> Result<()> {
    if cover.index_of(disk).is_none() {
        return input(format!("{disk} is not a disk of the cover"));
    }
    Ok(())
}

fn finish(op: Op, params: Params, source: &Graph, mut g: Graph, added: Vec<Edge>, split_edges: Vec<Edge>, new_vertices: Vec<Label>) -> Result<Enlargement> {
    for &(a, b) in &added {
        if g.has_edge(a, b) {
            return pre(op.name(), format!("edge ({a},{b}) is already present"));
        }
        g.add_edge(a, b)?;
    }
    Ok(Enlargement {
        op,
        params,
        source: source.clone(),
        result: g,
        added_edges: added.into_iter().map(|(a, b)| edge(a, b)).collect(),
        split_edges,
        new_vertices,
    })
}

pub fn op1_jump(cover: &CycleDoubleCover, u: Label, v: Label) -> Result<Enlargement> {
    require_cdc(cover)?;
    let g = cover.carrier();
    require_vertices(g, &[u, v])?;
    need(!cover.vertices_confluent(u, v), Op::Jump, || format!("{u} and {v} are confluent"))?;
    finish(Op::Jump, Params::Jump { u, v }, g, g.clone(), vec![(u, v)], vec![], vec![])
}

pub fn op2_cross(cover: &CycleDoubleCover, disk: &Cycle, a: Label, b: Label, c: Label, d: Label) -> Result<Enlargement> {
    require_cdc(cover)?;
    require_disk(cover, disk)?;
    let g = cover.carrier();
    require_vertices(g, &[a, b, c, d])?;
    need([a, b, c, d].iter().all(|&x| disk.contains(x)), Op::Cross, || format!("not all of {a},{b},{c},{d} lie on {disk}"))?;
    need(disk.in_cyclic_order(&[a, b, c, d]), Op::Cross, || format!("{a},{b},{c},{d} are not in cyclic order on {disk}"))?;
    let params = Params::Cross { disk: disk.clone(), a, b, c, d };
    finish(Op::Cross, params, g, g.clone(), vec![(a, c), (b, d)], vec![], vec![])
}

pub fn op3_ncsplit(cover: &CycleDoubleCover, spec: &SplitSpec) -> Result<Enlargement> {
    require_cdc(cover)?;
    let g = cover.carrier();
    need(!classify_split(cover, spec)?.is_conforming(), Op::NcSplit, || format!("split {spec} is conforming"))?;
    let h = split_vertex(g, spec)?;
    let params = Params::NcSplit { split: spec.clone() };
    finish(Op::NcSplit, params, g, h, vec![], vec![(spec.v, spec.v2)], vec![spec.v2])
}

fn conforming_or(cover: &CycleDoubleCover, spec: &SplitSpec, op: Op) -> Result<Conformity> {
    let c = classify_split(cover, spec)?;
    if let Conformity::NonConforming { violated, .. } = &c {
        return pre(op.name(), format!("split {spec} is not conforming ({violated:?} fails)"));
    }
    Ok(c)
}

/// Split of `v` plus an edge from `u` to the half `h` of `v`.
pub fn op4_split_jump_to(cover: &CycleDoubleCover, disk: &Cycle, u: Label, v: Label, spec: &SplitSpec, h: Label) -> Result<Enlargement> {
    let op = Op::SplitJump;
    require_cdc(cover)?;
    require_disk(cover, disk)?;
    let g = cover.carrier();
    require_vertices(g, &[u, v])?;
    need(spec.v == v, op, || format!("the split is of {} rather than {v}", spec.v))?;
    need(disk.contains(u) && disk.contains(v), op, || format!("{u} and {v} are not both on {disk}"))?;
    need(!g.has_edge(u, v), op, || format!("{u} and {v} are adjacent"))?;
    conforming_or(cover, spec, op)?;
    need(h == spec.v || h == spec.v2, op, || format!("{h} is not a half of {v}"))?;
    let nd = induce_on_split(cover, spec)?;
    need(!nd.vertices_confluent(u, h), op, || format!("{u} and {h} are confluent after the split"))?;
    let params = Params::SplitJump {
        disk: disk.clone(),
        u,
        v,
        split: spec.clone(),
        v2: h,
    };
    finish(op, params, g, nd.carrier().clone(), vec![(u, h)], vec![(spec.v, spec.v2)], vec![spec.v2])
}

/// Joins `u` to the new vertex `spec.v2`.
pub fn op4_split_jump(cover: &CycleDoubleCover, disk: &Cycle, u: Label, v: Label, spec: &SplitSpec) -> Result<Enlargement> {
    op4_split_jump_to(cover, disk, u, v, spec, spec.v2)
}

/// `spec_v` is a split of `v` in the graph after `spec_u`.
pub fn op5_dsplit_jump(
    cover: &CycleDoubleCover,
    u: Label,
    v: Label,
    spec_u: &SplitSpec,
    spec_v: &SplitSpec,
) -> Result<Enlargement> {
    let op = Op::DsplitJump;
    require_cdc(cover)?;
    let g = cover.carrier();
    require_vertices(g, &[u, v])?;
    need(g.has_edge(u, v), op, || format!("{u} and {v} are not adjacent"))?;
    need(spec_u.v == u && spec_v.v == v, op, || format!("the splits are not of {u} and {v}"))?;
    let through: Vec<Cycle> = cover.disks_on_edge(u, v).cloned().collect();
    need(through.len() == 2, op, || format!("edge ({u},{v}) is not on exactly two disks"))?;
    let cu = conforming_or(cover, spec_u, op)?;
    let nd = induce_on_split(cover, spec_u)?;
    let mut last = String::new();
    for (c1, c2) in [(&through[0], &through[1]), (&through[1], &through[0])] {
        if !cu.along(c1) {
            last = format!("split {spec_u} is not along {c1}");
            continue;
        }
        let c2i = route_disk(c2, spec_u);
        let cv = match classify_split(&nd, spec_v) {
            Ok(c) => c,
            Err(e) => return Err(e),
        };
        if !cv.along(&c2i) {
            last = format!("split {spec_v} is not conforming along {c2i}");
            continue;
        }
        let u1 = spec_u.half_towards(v);
        let u2 = spec_u.other_half(u1);
        let v1 = spec_v.half_towards(u1);
        let v2 = spec_v.other_half(v1);
        let k = split_vertex(nd.carrier(), spec_v)?;
        let params = Params::DsplitJump {
            u,
            v,
            c1: c1.clone(),
            c2: c2.clone(),
            split_u: spec_u.clone(),
            split_v: spec_v.clone(),
        };
        let splits = vec![(spec_u.v, spec_u.v2), (spec_v.v, spec_v.v2)];
        return finish(op, params, g, k, vec![(u2, v2)], splits, vec![spec_u.v2, spec_v.v2]);
    }
    pre(op.name(), last)
}

pub fn op6_split_cross(
    cover: &CycleDoubleCover,
    disk: &Cycle,
    u: Label,
    v: Label,
    w: Label,
    spec: &SplitSpec,
) -> Result<Enlargement> {
    let op = Op::SplitCross;
    require_cdc(cover)?;
    require_disk(cover, disk)?;
    let g = cover.carrier();
    require_vertices(g, &[u, v, w])?;
    need([u, v, w].iter().all(|&x| disk.contains(x)), op, || format!("{u},{v},{w} are not all on {disk}"))?;
    need(!g.has_edge(u, v) && !g.has_edge(u, w), op, || format!("{u} is adjacent to {v} or {w}"))?;
    need(spec.v == u, op, || format!("the split is of {} rather than {u}", spec.v))?;
    let c = conforming_or(cover, spec, op)?;
    need(c.along(disk), op, || format!("split {spec} is not along {disk}"))?;
    let dd = route_disk(disk, spec);
    let (u1, u2) = if dd.in_cyclic_order(&[u, spec.v2, v, w]) {
        (u, spec.v2)
    } else {
        (spec.v2, u)
    };
    need(dd.in_cyclic_order(&[u1, u2, v, w]), op, || format!("no labelling puts the halves before {v},{w} on {dd}"))?;
    let h = split_vertex(g, spec)?;
    let params = Params::SplitCross {
        disk: disk.clone(),
        u,
        v,
        w,
        split: spec.clone(),
        u1,
        u2,
    };
    finish(op, params, g, h, vec![(u1, v), (u2, w)], vec![(u, spec.v2)], vec![spec.v2])
}

/// `spec_v` is a split of `v` in the graph after `spec_u`.
pub fn op7_dsplit_cross(
    cover: &CycleDoubleCover,
    disk: &Cycle,
    u: Label,
    v: Label,
    spec_u: &SplitSpec,
    spec_v: &SplitSpec,
) -> Result<Enlargement> {
    let op = Op::DsplitCross;
    require_cdc(cover)?;
    require_disk(cover, disk)?;
    let g = cover.carrier();
    require_vertices(g, &[u, v])?;
    need(disk.contains(u) && disk.contains(v), op, || format!("{u} and {v} are not both on {disk}"))?;
    need(!g.has_edge(u, v), op, || format!("{u} and {v} are adjacent"))?;
    need(spec_u.v == u && spec_v.v == v, op, || format!("the splits are not of {u} and {v}"))?;
    let cu = conforming_or(cover, spec_u, op)?;
    need(cu.along(disk), op, || format!("split {spec_u} is not along {disk}"))?;
    let nd = induce_on_split(cover, spec_u)?;
    let dd = route_disk(disk, spec_u);
    let cv = conforming_or(&nd, spec_v, op)?;
    need(cv.along(&dd), op, || format!("split {spec_v} is not along {dd}"))?;
    let d3 = route_disk(&dd, spec_v);
    let (nu, nv) = (spec_u.v2, spec_v.v2);
    let mut roles = None;
    'found: for (u1, u2) in [(u, nu), (nu, u)] {
        for (v1, v2) in [(v, nv), (nv, v)] {
            if d3.in_cyclic_order(&[u1, u2, v1, v2]) {
                roles = Some((u1, u2, v1, v2));
                break 'found;
            }
        }
    }
    let Some((u1, u2, v1, v2)) = roles else {
        return pre(op.name(), format!("the halves do not alternate on {d3}"));
    };
    let k = split_vertex(nd.carrier(), spec_v)?;
    let params = Params::DsplitCross {
        disk: disk.clone(),
        u,
        v,
        split_u: spec_u.clone(),
        split_v: spec_v.clone(),
        u1,
        u2,
        v1,
        v2,
    };
    let splits = vec![(u, nu), (v, nv)];
    finish(op, params, g, k, vec![(u1, v1), (u2, v2)], splits, vec![nu, nv])
}

fn attach_vertex(g: &Graph) -> (Graph, Label) {
    let mut h = g.clone();
    let z = g.max_label() + 1;
    h.add_vertex(z).unwrap();
    (h, z)
}

fn triad(cover: &CycleDoubleCover, x: [Label; 3], op: Op) -> Result<Enlargement> {
    require_cdc(cover)?;
    let g = cover.carrier();
    require_vertices(g, &x)?;
    let [a, b, c] = x;
    need(!cover.disks().iter().any(|d| x.iter().all(|&v| d.contains(v))), op, || format!("a disk contains {a},{b},{c}"))?;
    if op == Op::Triad {
        let pairwise = [(a, b), (a, c), (b, c)].iter().all(|&(p, q)| cover.vertices_confluent(p, q));
        need(pairwise, op, || format!("{a},{b},{c} are not pairwise confluent"))?;
        let independent = !(g.has_edge(a, b) || g.has_edge(a, c) || g.has_edge(b, c));
        need(independent, op, || format!("{a},{b},{c} are not independent"))?;
        need(g.remove_vertices(&x.into()).is_connected(), op, || format!("{{{a},{b},{c}}} separates the graph"))?;
    }
    let (h, z) = attach_vertex(g);
    let params = Params::Triad { x };
    finish(op, params, g, h, vec![(z, a), (z, b), (z, c)], vec![], vec![z])
}

pub fn op8_triad(cover: &CycleDoubleCover, x: [Label; 3]) -> Result<Enlargement> {
    triad(cover, x, Op::Triad)
}

pub fn weak_triad(cover: &CycleDoubleCover, x: [Label; 3]) -> Result<Enlargement> {
    triad(cover, x, Op::WeakTriad)
}

fn tedge(cover: &CycleDoubleCover, u: Label, (x, y): Edge, op: Op) -> Result<Enlargement> {
    require_cdc(cover)?;
    let g = cover.carrier();
    require_vertices(g, &[u, x, y])?;
    if !g.has_edge(x, y) {
        return input(format!("({x},{y}) is not an edge"));
    }
    let on_edge = cover.disks_on_edge(x, y).any(|d| d.contains(u));
    need(!on_edge, op, || format!("{u} is confluent with the edge ({x},{y})"))?;
    if op == Op::Tedge {
        need(cover.vertices_confluent(u, x) && cover.vertices_confluent(u, y), op, || {
            format!("{u} is not confluent with both {x} and {y}")
        })?;
        need(!g.has_edge(u, x) && !g.has_edge(u, y), op, || format!("{u} is adjacent to {x} or {y}"))?;
        need(g.remove_vertices(&[u, x, y].into()).is_connected(), op, || format!("{{{u},{x},{y}}} separates the graph"))?;
    }
    let (h, z) = g.subdivide_edge(edge(x, y))?;
    let params = Params::Tedge { u, x, y };
    finish(op, params, g, h, vec![(u, z)], vec![], vec![z])
}

pub fn op9_tedge(cover: &CycleDoubleCover, u: Label, xy: Edge) -> Result<Enlargement> {
    tedge(cover, u, xy, Op::Tedge)
}

pub fn weak_tedge(cover: &CycleDoubleCover, u: Label, xy: Edge) -> Result<Enlargement> {
    tedge(cover, u, xy, Op::WeakTedge)
}

/// Uses the prism's own peripheral cycles.
pub fn op10_prism(g: &Graph, e1: Edge, e2: Edge) -> Result<Enlargement> {
    let op = Op::Prism;
    need(is_prism(g), op, || "the graph is not a prism".into())?;
    let (e1, e2) = (edge(e1.0, e1.1), edge(e2.0, e2.1));
    for e in [e1, e2] {
        if !g.has_edge(e.0, e.1) {
            return input(format!("({},{}) is not an edge", e.0, e.1));
        }
        let in_triangle = g.neighbors(e.0).intersection(g.neighbors(e.1)).next().is_some();
        need(in_triangle, op, || format!("({},{}) is on no triangle", e.0, e.1))?;
    }
    need(e1 != e2, op, || "the two edges coincide".into())?;
    let shared = peripheral_cycles(g).into_iter().find(|c| c.has_edge(e1.0, e1.1) && c.has_edge(e2.0, e2.1));
    if let Some(c) = shared {
        return pre(op.name(), format!("both edges lie on the peripheral cycle {c}"));
    }
    let (h, z1) = g.subdivide_edge(e1)?;
    let (h, z2) = h.subdivide_edge(e2)?;
    finish(op, Params::Prism { e1, e2 }, g, h, vec![(z1, z2)], vec![], vec![z1, z2])
}

/// One step of an expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Edge { u: Label, v: Label },
    Split { v: Label, n1: Vec<Label> },
    Triad { x: [Label; 3] },
    Tedge { u: Label, x: Label, y: Label },
    Prism { e1: Edge, e2: Edge },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Edge { u, v } => write!(f, "+({u},{v})"),
            Step::Split { v, n1 } => {
                let s: Vec<String> = n1.iter().map(|x| x.to_string()).collect();
                write!(f, "*{v}({})", s.join(","))
            }
            Step::Triad { x: [a, b, c] } => write!(f, "+({a},{b},{c})"),
            Step::Tedge { u, x, y } => write!(f, "+({u},{x}-{y})"),
            Step::Prism { e1, e2 } => write!(f, "+({}-{},{}-{})", e1.0, e1.1, e2.0, e2.1),
        }
    }
}

pub fn apply_step(g: &Graph, step: &Step) -> Result<Graph> {
    match step {
        Step::Edge { u, v } => {
            require_vertices(g, &[*u, *v])?;
            if g.has_edge(*u, *v) {
                return input(format!("edge ({u},{v}) is already present"));
            }
            g.with_edge(*u, *v)
        }
        Step::Split { v, n1 } => split_vertex(g, &SplitSpec::new(g, *v, n1.iter().copied())?),
        Step::Triad { x } => {
            require_vertices(g, x)?;
            let (mut h, z) = attach_vertex(g);
            for &a in x {
                h.add_edge(z, a)?;
            }
            Ok(h)
        }
        Step::Tedge { u, x, y } => {
            require_vertices(g, &[*u, *x, *y])?;
            let (mut h, z) = g.subdivide_edge(edge(*x, *y))?;
            h.add_edge(*u, z)?;
            Ok(h)
        }
        Step::Prism { e1, e2 } => {
            let (h, z1) = g.subdivide_edge(edge(e1.0, e1.1))?;
            let (mut h, z2) = h.subdivide_edge(edge(e2.0, e2.1))?;
            h.add_edge(z1, z2)?;
            Ok(h)
        }
    }
}

pub fn apply_steps(g: &Graph, steps: &[Step]) -> Result<Graph> {
    steps.iter().try_fold(g.clone(), |h, s| apply_step(&h, s))
}

/// A base name followed by steps, e.g. `Q1*7(2,10)+(1,11)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expression {
    pub base: String,
    pub steps: Vec<Step>,
}

impl Expression {
    /// The base graph from the catalog together with its first cover.
    pub fn base_graph(&self) -> Result<(Graph, Option<CycleDoubleCover>)> {
        catalog::base(&self.base)
    }

    pub fn apply(&self) -> Result<Graph> {
        apply_steps(&self.base_graph()?.0, &self.steps)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        self.steps.iter().try_for_each(|s| write!(f, "{s}"))
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected `{want}`, found `{c}`")),
            None => self.err(format!("expected `{want}`, found end of input")),
        }
    }

    fn number(&mut self) -> Result<Label> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a vertex label");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<Label>() {
            Ok(0) | Err(_) => {
                self.pos = start;
                self.err(format!("`{text}` is not a positive label"))
            }
            Ok(n) => Ok(n),
        }
    }

    /// A label or a dashed pair `x-y`.
    fn item(&mut self) -> Result<(Label, Option<Label>)> {
        let a = self.number()?;
        if matches!(self.peek(), Some('-') | Some('\u{2212}')) {
            self.pos += 1;
            return Ok((a, Some(self.number()?)));
        }
        Ok((a, None))
    }

    fn step(&mut self) -> Result<Step> {
        let at = self.pos;
        match self.peek() {
            Some('*') => {
                self.pos += 1;
                let v = self.number()?;
                self.eat('(')?;
                let mut n1 = vec![self.number()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    n1.push(self.number()?);
                }
                self.eat(')')?;
                Ok(Step::Split { v, n1 })
            }
            Some('+') => {
                self.pos += 1;
                self.eat('(')?;
                let mut items = vec![self.item()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    items.push(self.item()?);
                }
                self.eat(')')?;
                match items[..] {
                    [(u, None), (v, None)] => Ok(Step::Edge { u, v }),
                    [(a, None), (b, None), (c, None)] => Ok(Step::Triad { x: [a, b, c] }),
                    [(u, None), (x, Some(y))] => Ok(Step::Tedge { u, x, y }),
                    [(a, Some(b)), (c, Some(d))] => Ok(Step::Prism { e1: (a, b), e2: (c, d) }),
                    _ => {
                        self.pos = at;
                        self.err("`+( )` takes (u,v), (x1,x2,x3), (u,x-y) or (a-b,c-d)")
                    }
                }
            }
            Some(c) => self.err(format!("expected `+` or `*`, found `{c}`")),
            None => self.err("expected a step"),
        }
    }

    fn steps(&mut self) -> Result<Vec<Step>> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.step()?);
        }
        Ok(out)
    }
}

fn parser(text: &str) -> Parser<'_> {
    Parser {
        chars: text.chars().collect(),
        pos: 0,
        _src: text,
    }
}

/// Steps without a base, e.g. `+(2,4,6)` or `*1(5,6)+(10,12)`.
pub fn parse_steps(text: &str) -> Result<Vec<Step>> {
    parser(text).steps()
}

pub fn parse_expression(text: &str) -> Result<Expression> {
    let mut p = parser(text);
    p.skip_ws();
    let start = p.pos;
    while p.chars.get(p.pos).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
        p.pos += 1;
    }
    if start == p.pos {
        return p.err("expected a base graph name");
    }
    let base: String = p.chars[start..p.pos].iter().collect();
    let steps = p.steps()?;
    Ok(Expression { base, steps })
}

/// Certifies that `steps`, applied to the carrier of `cover`, form one
/// enlargement of type `op`. Every assignment of roles to the labels in
/// the steps is tried; the result graph equals `apply_steps`.
pub fn validate(cover: &CycleDoubleCover, steps: &[Step], op: Op) -> Result<Enlargement> {
    let g = cover.carrier();
    let expected = apply_steps(g, steps)?;
    let shape = || pre::<Enlargement>(op.name(), format!("steps do not have the shape of a {op} enlargement"));
    let mut tries: Vec<Result<Enlargement>> = Vec::new();
    match (op, steps) {
        (Op::Jump, [Step::Edge { u, v }]) => tries.push(op1_jump(cover, *u, *v)),
        (Op::Cross, [Step::Edge { u: p, v: q }, Step::Edge { u: r, v: s }]) => {
            let on: Vec<&Cycle> = cover.disks().iter().filter(|d| [p, q, r, s].iter().all(|x| d.contains(**x))).collect();
            if on.is_empty() {
                tries.push(pre(op.name(), format!("no disk contains {p},{q},{r},{s}")));
            }
            for d in on {
                tries.push(op2_cross(cover, d, *p, *r, *q, *s));
            }
        }
        (Op::NcSplit, [Step::Split { v, n1 }]) => {
            tries.push(SplitSpec::new(g, *v, n1.iter().copied()).and_then(|s| op3_ncsplit(cover, &s)));
        }
        (Op::SplitJump, [Step::Split { v, n1 }, Step::Edge { u: a, v: b }]) => {
            let spec = SplitSpec::new(g, *v, n1.iter().copied())?;
            for (h, u) in [(*a, *b), (*b, *a)] {
                if h != spec.v && h != spec.v2 {
                    continue;
                }
                let common: Vec<&Cycle> = cover.disks().iter().filter(|d| d.contains(u) && d.contains(*v)).collect();
                if common.is_empty() {
                    tries.push(pre(op.name(), format!("{u} and {v} share no disk")));
                }
                for d in common {
                    tries.push(op4_split_jump_to(cover, d, u, *v, &spec, h));
                }
            }
        }
        (Op::DsplitJump, [Step::Split { v: u, n1: nu }, Step::Split { v, n1: nv }, Step::Edge { .. }]) => {
            let su = SplitSpec::new(g, *u, nu.iter().copied())?;
            let h = split_vertex(g, &su)?;
            let sv = SplitSpec::new(&h, *v, nv.iter().copied())?;
            tries.push(op5_dsplit_jump(cover, *u, *v, &su, &sv));
        }
        (Op::SplitCross, [Step::Split { v: u, n1 }, Step::Edge { u: a, v: b }, Step::Edge { u: c, v: d }]) => {
            let spec = SplitSpec::new(g, *u, n1.iter().copied())?;
            let half = |x: Label| x == spec.v || x == spec.v2;
            let far = |p: Label, q: Label| if half(p) { Some(q) } else if half(q) { Some(p) } else { None };
            if let (Some(x1), Some(x2)) = (far(*a, *b), far(*c, *d)) {
                for disk in cover.disks().iter().filter(|dk| dk.contains(*u)) {
                    for (v, w) in [(x1, x2), (x2, x1)] {
                        tries.push(op6_split_cross(cover, disk, *u, v, w, &spec));
                    }
                }
            }
        }
        (Op::DsplitCross, [Step::Split { v: u, n1: nu }, Step::Split { v, n1: nv }, Step::Edge { .. }, Step::Edge { .. }]) => {
            let su = SplitSpec::new(g, *u, nu.iter().copied())?;
            let h = split_vertex(g, &su)?;
            let sv = SplitSpec::new(&h, *v, nv.iter().copied())?;
            for disk in cover.disks().iter().filter(|dk| dk.contains(*u) && dk.contains(*v)) {
                tries.push(op7_dsplit_cross(cover, disk, *u, *v, &su, &sv));
            }
        }
        (Op::Triad, [Step::Triad { x }]) => tries.push(op8_triad(cover, *x)),
        (Op::WeakTriad, [Step::Triad { x }]) => tries.push(weak_triad(cover, *x)),
        (Op::Tedge, [Step::Tedge { u, x, y }]) => tries.push(op9_tedge(cover, *u, (*x, *y))),
        (Op::WeakTedge, [Step::Tedge { u, x, y }]) => tries.push(weak_tedge(cover, *u, (*x, *y))),
        (Op::Prism, [Step::Prism { e1, e2 }]) => tries.push(op10_prism(g, *e1, *e2)),
        _ => return shape(),
    }
    let mut first_err = None;
    for t in tries {
        match t {
            Ok(e) if e.result == expected => return Ok(e),
            Ok(_) => {
                first_err.get_or_insert_with(|| Error::Precondition {
                    op: op.name(),
                    clause: "the certified roles build a different graph".into(),
                });
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or_else(|| Error::Precondition {
        op: op.name(),
        clause: "no assignment of roles fits the steps".into(),
    }))
}
