//! Built-in graphs, covers, obstruction targets and the table fixture.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::disk_system::{add_chord, add_tedge_chord, classify_cover, CycleDoubleCover};
use crate::error::{Error, Result};
use crate::graph_core::{Cycle, Graph, Label};

const OBSTRUCTIONS: &str = include_str!("../data/obstructions.json");
const TABLES: &str = include_str!("../data/tables.json");

/// The eight target names, in display order.
pub const TARGETS: [&str; 8] = ["fsplit", "ffour", "dsplit", "e22", "etwenty", "cthree", "etwo", "e18"];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub graph: Graph,
    pub covers: Vec<(String, CycleDoubleCover)>,
    pub provenance: String,
}

impl CatalogEntry {
    pub fn cover(&self, name: &str) -> Option<&CycleDoubleCover> {
        self.covers.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

#[derive(Clone, Debug, Deserialize)]
struct ObstructionRecord {
    name: String,
    display: String,
    vertices: Vec<Label>,
    edges: Vec<[Label; 2]>,
    provenance: String,
}

fn obstruction_records() -> &'static [ObstructionRecord] {
    static CELL: OnceLock<Vec<ObstructionRecord>> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(OBSTRUCTIONS).expect("embedded obstruction data parses"))
}

/// One row of the enlargement tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub expr: String,
    pub op: String,
    pub target: String,
    pub witness: Vec<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_witness: Option<Vec<Vec<Label>>>,
}

impl TableRow {
    /// `"q1"` or `"q3"`, from the base named in the expression.
    pub fn table(&self) -> String {
        self.expr.chars().take(2).collect::<String>().to_lowercase()
    }
}

pub fn table_rows() -> &'static [TableRow] {
    static CELL: OnceLock<Vec<TableRow>> = OnceLock::new();
    CELL.get_or_init(|| parse_rows(TABLES).expect("embedded table fixture parses"))
}

pub fn parse_rows(text: &str) -> Result<Vec<TableRow>> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("table fixture: {e}")))
}

fn graph(edges: &[(Label, Label)]) -> Graph {
    Graph::from_edges(edges.iter().copied()).expect("static edge list is simple")
}

fn cycles(lists: &[&[Label]]) -> Vec<Cycle> {
    lists.iter().map(|l| Cycle::new(l.to_vec()).expect("static cycle")).collect()
}

pub fn disks_d() -> Vec<Cycle> {
    cycles(&[
        &[6, 9, 7, 10, 8],
        &[1, 5, 10, 7, 2],
        &[4, 3, 8, 10, 5],
        &[2, 1, 6, 8, 3],
        &[5, 4, 9, 6, 1],
        &[3, 2, 7, 9, 4],
    ])
}

pub fn disks_d_prime() -> Vec<Cycle> {
    cycles(&[
        &[1, 2, 3, 4, 5],
        &[6, 9, 4, 3, 8],
        &[7, 10, 5, 4, 9],
        &[8, 6, 1, 5, 10],
        &[9, 7, 2, 1, 6],
        &[10, 8, 3, 2, 7],
    ])
}

/// The Petersen graph as the union of the disks of `D`.
pub fn petersen() -> Graph {
    let mut g = Graph::new(1..=10, []).unwrap();
    for d in disks_d() {
        for (a, b) in d.edges() {
            if !g.has_edge(a, b) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

pub fn cover_d() -> CycleDoubleCover {
    classify_cover(&petersen(), disks_d()).unwrap()
}

pub fn cover_d_prime() -> CycleDoubleCover {
    classify_cover(&petersen(), disks_d_prime()).unwrap()
}

pub fn q1() -> Graph {
    petersen().with_edge(7, 8).unwrap().with_edge(9, 10).unwrap()
}

pub fn q2() -> Graph {
    let mut g = petersen();
    g.add_vertex(11).unwrap();
    for x in [2, 4, 6] {
        g.add_edge(11, x).unwrap();
    }
    g
}

pub fn q3() -> Graph {
    let (mut g, z) = petersen().subdivide_edge((3, 4)).unwrap();
    g.add_edge(1, z).unwrap();
    g
}

/// `D'` extended by the chords (7,8) and (9,10).
pub fn cover_d1() -> CycleDoubleCover {
    let c = cover_d_prime();
    let first = Cycle::new(vec![10, 8, 3, 2, 7]).unwrap();
    let (_, c) = add_chord(&c, &first, 7, 8).unwrap();
    let second = Cycle::new(vec![7, 10, 5, 4, 9]).unwrap();
    add_chord(&c, &second, 9, 10).unwrap().1
}

/// `D'` extended by the T-edge from 1 to the subdivided edge (3,4).
pub fn cover_d3() -> CycleDoubleCover {
    let c = cover_d_prime();
    let disk = Cycle::new(vec![1, 2, 3, 4, 5]).unwrap();
    add_tedge_chord(&c, &disk, 1, (3, 4)).unwrap().1
}

/// Triangles 1-2-3 and 4-5-6 joined by 1-4, 2-5, 3-6.
pub fn prism() -> Graph {
    graph(&[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)])
}

/// The 8-cycle plus its four main diagonals.
pub fn v8() -> Graph {
    let mut es: Vec<(Label, Label)> = (1..=8).map(|i| (i, i % 8 + 1)).collect();
    es.extend((1..=4).map(|i| (i, i + 4)));
    graph(&es)
}

pub fn k33() -> Graph {
    complete_bipartite(3, 3)
}

/// Sides `1..=a` and `a+1..=a+b`.
pub fn complete_bipartite(a: Label, b: Label) -> Graph {
    let es: Vec<(Label, Label)> = (1..=a).flat_map(|x| (a + 1..=a + b).map(move |y| (x, y))).collect();
    graph(&es)
}

pub fn complete(n: Label) -> Graph {
    let mut es = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            es.push((a, b));
        }
    }
    let mut g = Graph::new(1..=n, []).unwrap();
    for (a, b) in es {
        g.add_edge(a, b).unwrap();
    }
    g
}

pub fn obstruction(name: &str) -> Result<Graph> {
    let r = obstruction_records()
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    Graph::new(r.vertices.iter().copied(), r.edges.iter().map(|e| (e[0], e[1])))
}

/// Human-readable name of a target, e.g. `"E18 (K4,4 minus an edge)"`.
pub fn display_name(name: &str) -> Option<&'static str> {
    obstruction_records().iter().find(|r| r.name == name).map(|r| r.display.as_str())
}

pub fn names() -> Vec<&'static str> {
    let mut v = vec!["petersen", "prism", "v8", "k4", "k5", "k33", "q1", "q2", "q3"];
    v.extend(TARGETS);
    v
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    let entry = |graph: Graph, covers: Vec<(&str, CycleDoubleCover)>, provenance: &str| CatalogEntry {
        name: name.to_string(),
        graph,
        covers: covers.into_iter().map(|(n, c)| (n.to_string(), c)).collect(),
        provenance: provenance.to_string(),
    };
    Ok(match name.to_ascii_lowercase().as_str() {
        "petersen" | "p10" => entry(
            petersen(),
            vec![("D", cover_d()), ("D'", cover_d_prime())],
            "union of the six 5-cycles of D; covers D and D' as listed",
        ),
        "prism" => {
            let g = prism();
            let pc = crate::disk_system::peripheral_cycles(&g);
            let c = classify_cover(&g, pc)?;
            entry(g, vec![("peripheral", c)], "triangle times an edge")
        }
        "v8" => entry(v8(), vec![], "8-cycle plus four main diagonals"),
        "k4" => entry(complete(4), vec![], "complete graph"),
        "k5" => entry(complete(5), vec![], "complete graph"),
        "k33" => entry(k33(), vec![], "complete bipartite graph"),
        "q1" => entry(q1(), vec![("D1", cover_d1())], "P10+(7,8)+(9,10); D1 extends D' by two chords"),
        "q2" => entry(q2(), vec![], "P10+(2,4,6)"),
        "q3" => entry(q3(), vec![("D3", cover_d3())], "P10+(1,3-4); D3 extends D' by a T-edge chord"),
        other => {
            let r = obstruction_records()
                .iter()
                .find(|r| r.name == other)
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            entry(obstruction(other)?, vec![], &r.provenance)
        }
    })
}

/// Base graph and cover for an expression base name (`P10`, `Q1`, `Q3`...).
/// `P10` carries `D`; `Q1` and `Q3` carry their extended covers.
pub fn base(name: &str) -> Result<(Graph, Option<CycleDoubleCover>)> {
    let e = get(name)?;
    let cover = e.covers.first().map(|(_, c)| c.clone());
    Ok((e.graph, cover))
}
