use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use diskext::catalog;
use diskext::connectivity::is_weakly_4_connected;
use diskext::disk_system::{classify_cover, peripheral_cycles, CycleDoubleCover};
use diskext::enlarge::{apply_steps, parse_steps, validate, Op};
use diskext::enumerate::{compare_with_expected, enumerate_op};
use diskext::graph_core::GraphDoc;
use diskext::iso::isomorphism;
use diskext::local_planarity::{find_bridges, is_locally_planar, LocalPlanarity, SubdivisionMap};
use diskext::minor::{check_witness, find_minor};
use diskext::replay::{replay, ReplayConfig, Table};
use diskext::{Cycle, Error, Graph, Label, Result};

/// Like `println!`, but a closed stdout (e.g. piped into `head`) is not an error.
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

/// Disk systems, enlargements, minors and isomorphism on small graphs.
///
/// A GRAPH argument is a catalog name (see `diskext catalog`) or a path to
/// a graph JSON file. Exit codes: 0 affirmative, 1 negative, 2 bad input.
#[derive(Parser)]
#[command(name = "diskext", version)]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a cover and report chi and weak 4-connectivity
    Check {
        graph: String,
        /// Named catalog cover (default: the entry's first)
        #[arg(long)]
        cover: Option<String>,
    },
    /// Apply expression steps such as "+(2,4,6)" or "*1(5,6)+(10,12)"
    Apply {
        graph: String,
        steps: String,
        /// Certify the steps as one enlargement of this operation
        #[arg(long)]
        validate_as: Option<String>,
        #[arg(long)]
        cover: Option<String>,
    },
    /// Enumerate all enlargements of one operation up to isomorphism
    Enumerate {
        graph: String,
        /// Operation name or number 1..10
        #[arg(long)]
        op: String,
        /// Expected graphs: a table fixture or a JSON array of graphs
        #[arg(long)]
        expect: Option<PathBuf>,
        #[arg(long)]
        cover: Option<String>,
    },
    /// Test for a minor; with --witness, verify the given branch sets
    Minor {
        host: String,
        pattern: String,
        /// Branch sets, e.g. "1,5|3,8|7,9|2|4|6|10|11"
        #[arg(long)]
        witness: Option<String>,
    },
    /// Test two graphs for isomorphism
    Iso { g1: String, g2: String },
    /// List peripheral cycles and classify them as a cover
    Peripheral { graph: String },
    /// List the bridges of a subgraph
    Bridges { host: String, sub: String },
    /// Check local planarity of host over a subgraph and its cover
    LocalPlanar {
        host: String,
        sub: String,
        #[arg(long)]
        cover: Option<String>,
    },
    /// Replay the enlargement tables end to end
    VerifyTables {
        /// Restrict to one table: q1 or q3
        #[arg(long)]
        only: Option<String>,
        /// Skip the obstruction search on failing graphs
        #[arg(long)]
        no_analysis: bool,
    },
    /// List catalog names, or export one entry as graph JSON
    Catalog { name: Option<String> },
}

struct Loaded {
    name: String,
    graph: Graph,
    disks: Option<Vec<Cycle>>,
}

impl Loaded {
    fn cover(&self) -> Result<CycleDoubleCover> {
        match &self.disks {
            Some(d) => classify_cover(&self.graph, d.clone()),
            None => Err(Error::Input(format!("{} carries no cover", self.name))),
        }
    }
}

fn load(arg: &str, cover: Option<&str>) -> Result<Loaded> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{arg}: {e}")))?;
        let doc = GraphDoc::from_json(&text)?;
        if cover.is_some() {
            return Err(Error::Input("--cover applies to catalog entries only".into()));
        }
        return Ok(Loaded {
            name: doc.name.clone(),
            graph: doc.graph()?,
            disks: doc.cycles()?,
        });
    }
    let entry = catalog::get(arg)?;
    let disks = match cover {
        Some(c) => Some(
            entry
                .cover(c)
                .ok_or_else(|| Error::Input(format!("{arg} has no cover named {c}")))?
                .disks()
                .to_vec(),
        ),
        None => entry.covers.first().map(|(_, c)| c.disks().to_vec()),
    };
    Ok(Loaded {
        name: entry.name,
        graph: entry.graph,
        disks,
    })
}

fn parse_witness(text: &str) -> Result<Vec<Vec<Label>>> {
    text.split('|')
        .map(|set| {
            set.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<Label>()
                        .map_err(|_| Error::Input(format!("bad label `{x}` in witness")))
                })
                .collect()
        })
        .collect()
}

fn expected_graphs(path: &Path, base: &Graph, op: Op) -> Result<Vec<Graph>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    if let Ok(rows) = catalog::parse_rows(&text) {
        let mut out = Vec::new();
        for r in rows.iter().filter(|r| r.op.parse::<Op>().ok() == Some(op)) {
            let e = diskext::enlarge::parse_expression(&r.expr)?;
            if catalog::base(&e.base)?.0 == *base {
                out.push(apply_steps(base, &e.steps)?);
            }
        }
        return Ok(out);
    }
    let docs: Vec<GraphDoc> =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    docs.iter().map(GraphDoc::graph).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn print_json(v: serde_json::Value) {
    out!("{}", serde_json::to_string_pretty(&v).expect("json value"));
}

fn run(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.cmd {
        Cmd::Check { graph, cover } => {
            let l = load(&graph, cover.as_deref())?;
            let c = l.cover()?;
            let w4 = is_weakly_4_connected(&l.graph);
            let class = c.classification();
            let ok = class == diskext::disk_system::Classification::DiskSystem;
            if json {
                print_json(json!({
                    "classification": class,
                    "failure": c.failure(),
                    "chi": c.euler_characteristic(),
                    "weakly_4_connected": w4,
                }));
            } else {
                let axiom = c.failure().map(|f| format!(" ({})", f.split(':').next().unwrap_or(f))).unwrap_or_default();
                out!("{class}{axiom}, chi={}, weakly-4-connected: {}", c.euler_characteristic(), yes(w4));
                if let Some(f) = c.failure() {
                    out!("{f}");
                }
            }
            Ok(code(ok))
        }
        Cmd::Apply {
            graph,
            steps,
            validate_as,
            cover,
        } => {
            let l = load(&graph, cover.as_deref())?;
            let steps = parse_steps(&steps)?;
            let result = apply_steps(&l.graph, &steps)?;
            let mut ok = true;
            if let Some(op) = validate_as {
                let op: Op = op.parse()?;
                let c = if op == Op::Prism {
                    classify_cover(&l.graph, peripheral_cycles(&l.graph))?
                } else {
                    l.cover()?
                };
                match validate(&c, &steps, op) {
                    Ok(_) => eprintln!("valid {op}"),
                    Err(e @ Error::Precondition { .. }) => {
                        eprintln!("not a valid {op}: {e}");
                        ok = false;
                    }
                    Err(e) => return Err(e),
                }
            }
            let name: String = format!("{}{}", l.name, steps.iter().map(|s| s.to_string()).collect::<String>());
            out!("{}", GraphDoc::new(&name, &result, None).to_json());
            Ok(code(ok))
        }
        Cmd::Enumerate {
            graph,
            op,
            expect,
            cover,
        } => {
            let l = load(&graph, cover.as_deref())?;
            let op: Op = op.parse()?;
            let c = match (&l.disks, op) {
                (None, Op::Prism) => classify_cover(&l.graph, peripheral_cycles(&l.graph))?,
                _ => l.cover()?,
            };
            let fam = enumerate_op(&c, op)?;
            let report = match &expect {
                Some(p) => Some(compare_with_expected(&fam, &expected_graphs(p, &l.graph, op)?)?),
                None => None,
            };
            if json {
                let classes: Vec<_> = fam
                    .classes
                    .iter()
                    .map(|k| {
                        json!({
                            "expression": k.representative.expression(),
                            "canonical_edges": k.canonical.edges,
                            "size": k.size(),
                            "members": k.members,
                        })
                    })
                    .collect();
                print_json(json!({ "op": op, "classes": classes, "comparison": report }));
            } else {
                out!("{} classes ({} instances)", fam.classes.len(), fam.instance_count());
                for k in &fam.classes {
                    out!("  {}{}  x{}", l.name, k.representative.expression(), k.size());
                }
                if let Some(r) = &report {
                    out!("two-sided match: {}", yes(r.two_sided()));
                    for &i in &r.unmatched_classes {
                        out!("  unmatched class {}{}", l.name, fam.classes[i].representative.expression());
                    }
                    for &i in &r.unmatched_expected {
                        out!("  unmatched expected #{i}");
                    }
                    for (a, b) in &r.expected_duplicates {
                        out!("  expected #{a} and #{b} are isomorphic");
                    }
                }
            }
            Ok(code(report.is_none_or(|r| r.two_sided())))
        }
        Cmd::Minor { host, pattern, witness } => {
            let h = load(&host, None)?.graph;
            let p = load(&pattern, None)?.graph;
            match witness {
                Some(w) => {
                    let sets = parse_witness(&w)?;
                    let chk = check_witness(&h, &p, &sets)?;
                    if json {
                        print_json(json!(chk));
                    } else {
                        out!(
                            "branch sets valid: {}, exact: {}, up to isomorphism: {}",
                            yes(chk.sets_valid),
                            yes(chk.exact),
                            yes(chk.up_to_iso)
                        );
                    }
                    Ok(code(chk.up_to_iso))
                }
                None => {
                    let m = find_minor(&h, &p)?;
                    if json {
                        print_json(json!({ "minor": m.is_some(), "witness": m.as_ref().map(|m| m.witness()) }));
                    } else {
                        match &m {
                            Some(m) => {
                                let sets: Vec<String> = m
                                    .witness()
                                    .iter()
                                    .map(|s| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                                    .collect();
                                out!("minor found: {}", sets.join("|"));
                            }
                            None => out!("no minor"),
                        }
                    }
                    Ok(code(m.is_some()))
                }
            }
        }
        Cmd::Iso { g1, g2 } => {
            let a = load(&g1, None)?.graph;
            let b = load(&g2, None)?.graph;
            let m = isomorphism(&a, &b)?;
            if json {
                print_json(json!({ "isomorphic": m.is_some(), "map": m }));
            } else {
                match &m {
                    Some(m) => {
                        let pairs: Vec<String> = m.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                        out!("isomorphic: {}", pairs.join(" "));
                    }
                    None => out!("not isomorphic"),
                }
            }
            Ok(code(m.is_some()))
        }
        Cmd::Peripheral { graph } => {
            let g = load(&graph, None)?.graph;
            let pc = peripheral_cycles(&g);
            let c = classify_cover(&g, pc.clone())?;
            if json {
                print_json(json!({
                    "cycles": pc,
                    "classification": c.classification(),
                    "chi": c.euler_characteristic(),
                }));
            } else {
                out!("{} peripheral cycles", pc.len());
                for p in &pc {
                    out!("  {p}");
                }
                out!("as a cover: {}, chi={}", c.classification(), c.euler_characteristic());
            }
            Ok(0)
        }
        Cmd::Bridges { host, sub } => {
            let h = load(&host, None)?.graph;
            let s = load(&sub, None)?.graph;
            let map = SubdivisionMap::from_subgraph(&h, &s)?;
            let bridges = find_bridges(&map);
            if json {
                print_json(json!(bridges));
            } else {
                out!("{} bridges", bridges.len());
                for b in &bridges {
                    let att: Vec<String> = b.attachments.iter().map(|x| x.to_string()).collect();
                    let int: Vec<String> = b.interior.iter().map(|x| x.to_string()).collect();
                    out!("  attachments {{{}}} interior {{{}}}", att.join(","), int.join(","));
                }
            }
            Ok(0)
        }
        Cmd::LocalPlanar { host, sub, cover } => {
            let h = load(&host, None)?.graph;
            let s = load(&sub, cover.as_deref())?;
            let map = SubdivisionMap::from_subgraph(&h, &s.graph)?;
            let lp = is_locally_planar(&map, &s.cover()?)?;
            if json {
                print_json(json!(lp));
            } else {
                out!("locally planar: {}", yes(lp.holds()));
                match &lp {
                    LocalPlanarity::Holds { assignment } => {
                        for (i, d) in assignment.iter().enumerate() {
                            out!("  bridge {i} in disk {d}");
                        }
                    }
                    LocalPlanarity::NoDisk { bridge } => out!("  bridge {bridge} lies in no disk"),
                    LocalPlanarity::NotPlanar { disk, bridges } => {
                        out!("  disk {disk} with bridges {bridges:?} is not planar")
                    }
                }
            }
            Ok(code(lp.holds()))
        }
        Cmd::VerifyTables { only, no_analysis } => {
            let cfg = ReplayConfig {
                only: only.map(|t| t.parse::<Table>()).transpose()?,
                analyse: !no_analysis,
                ..ReplayConfig::default()
            };
            let r = replay(&cfg)?;
            if json {
                print_json(json!(r));
            } else {
                print!("{r}");
            }
            Ok(code(r.passed()))
        }
        Cmd::Catalog { name } => {
            match name {
                None => {
                    for n in catalog::names() {
                        let e = catalog::get(n)?;
                        out!("{n:10} {}", e.provenance);
                    }
                }
                Some(n) => {
                    let e = catalog::get(&n)?;
                    let disks = e.covers.first().map(|(_, c)| c.disks());
                    out!("{}", GraphDoc::new(&e.name, &e.graph, disks).to_json());
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
