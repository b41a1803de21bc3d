//! End-to-end replay of the enlargement tables: base constructions, the
//! E18 witness, two-sided enumeration, per-row witnesses and the
//! exception rules.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::catalog::{self, TableRow};
use crate::connectivity::is_weakly_4_connected;
use crate::disk_system::{Classification, CycleDoubleCover};
use crate::enlarge::{apply_steps, parse_expression, validate, Op};
use crate::enumerate::{compare_with_expected, enumerate_op};
use crate::error::Result;
use crate::graph_core::Graph;
use crate::iso::{are_isomorphic, canonical_form};
use crate::minor::{check_witness, find_minor, is_subgraph_up_to_iso};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Q1,
    Q3,
}

impl Table {
    pub fn name(self) -> &'static str {
        match self {
            Table::Q1 => "q1",
            Table::Q3 => "q3",
        }
    }

    pub fn cover(self) -> CycleDoubleCover {
        match self {
            Table::Q1 => catalog::cover_d1(),
            Table::Q3 => catalog::cover_d3(),
        }
    }

    /// Operations whose enumeration is compared two-sided with the rows.
    pub fn compared_ops(self) -> Vec<Op> {
        let mut ops: Vec<Op> = (1..=7).filter_map(Op::from_number).collect();
        if self == Table::Q3 {
            ops.push(Op::Tedge);
        }
        ops
    }
}

impl std::str::FromStr for Table {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Table> {
        match s.to_ascii_lowercase().as_str() {
            "q1" => Ok(Table::Q1),
            "q3" => Ok(Table::Q3),
            _ => Err(crate::Error::Input(format!("unknown table `{s}`, expected q1 or q3"))),
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inputs of a replay; the default takes everything from the catalog.
#[derive(Clone, Debug)]
pub struct ReplayConfig {
    pub only: Option<Table>,
    pub targets: BTreeMap<String, Graph>,
    pub rows: Vec<TableRow>,
    /// Look for an obstruction minor in every graph that breaks a rule.
    pub analyse: bool,
}

impl Default for ReplayConfig {
    fn default() -> Self {
        ReplayConfig {
            only: None,
            targets: catalog::TARGETS
                .iter()
                .map(|&n| (n.to_string(), catalog::obstruction(n).expect("catalog target")))
                .collect(),
            rows: catalog::table_rows().to_vec(),
            analyse: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub id: char,
    pub table: Option<Table>,
    pub title: String,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FindingKind {
    RowInvalid { clause: String },
    WitnessFails,
    UnlistedClass { op: Op },
    UnmatchedRow { op: Op },
    RuleCounterexample { rule: String },
}

/// A graph that breaks one of the checks, with the targets it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub table: Table,
    #[serde(flatten)]
    pub kind: FindingKind,
    /// Expression over the table's base graph.
    pub expr: String,
    /// Obstruction targets found as minors; `None` when not analysed.
    pub contains: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub steps: Vec<StepReport>,
    pub findings: Vec<Finding>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    pub fn step(&self, id: char, table: Option<Table>) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.id == id && s.table == table)
    }
}

impl fmt::Display for ReplayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let scope = s.table.map(|t| format!(" [{t}]")).unwrap_or_default();
            let mark = if s.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} ({}){scope} {}", s.id, s.title)?;
            for d in &s.details {
                writeln!(f, "    {d}")?;
            }
        }
        if !self.findings.is_empty() {
            writeln!(f, "findings:")?;
        }
        for x in &self.findings {
            let contains = match &x.contains {
                Some(c) if c.is_empty() => " contains no target".to_string(),
                Some(c) => format!(" contains {}", c.join(", ")),
                None => String::new(),
            };
            writeln!(f, "    [{}] {:?}: {}{contains}", x.table, x.kind, x.expr)?;
        }
        Ok(())
    }
}

struct Run<'a> {
    cfg: &'a ReplayConfig,
    steps: Vec<StepReport>,
    findings: Vec<Finding>,
}

impl Run<'_> {
    fn push(&mut self, id: char, table: Option<Table>, title: &str, details: Vec<String>, passed: bool) {
        self.steps.push(StepReport {
            id,
            table,
            title: title.to_string(),
            passed,
            details,
        });
    }

    fn contains(&self, g: &Graph) -> Result<Option<Vec<String>>> {
        if !self.cfg.analyse {
            return Ok(None);
        }
        let mut out = Vec::new();
        for (name, t) in &self.cfg.targets {
            if find_minor(g, t)?.is_some() {
                out.push(name.clone());
            }
        }
        Ok(Some(out))
    }

    fn finding(&mut self, table: Table, kind: FindingKind, expr: String, g: &Graph) -> Result<()> {
        let contains = self.contains(g)?;
        self.findings.push(Finding {
            table,
            kind,
            expr,
            contains,
        });
        Ok(())
    }
}

fn disk_system_chi1(c: &CycleDoubleCover) -> bool {
    c.classification() == Classification::DiskSystem && c.euler_characteristic() == 1
}

pub fn replay(cfg: &ReplayConfig) -> Result<ReplayReport> {
    let mut run = Run {
        cfg,
        steps: Vec::new(),
        findings: Vec::new(),
    };
    let d = catalog::cover_d();

    // (a)
    let dp = catalog::cover_d_prime();
    let ok = disk_system_chi1(&d) && disk_system_chi1(&dp);
    let details = vec![format!(
        "D: {} chi={}, D': {} chi={}",
        d.classification(),
        d.euler_characteristic(),
        dp.classification(),
        dp.euler_characteristic()
    )];
    run.push('a', None, "Petersen covers are disk systems with chi 1", details, ok);

    // (b)
    let mut details = Vec::new();
    let mut ok = true;
    for (name, text, op, want) in [
        ("Q1", "P10+(7,8)+(9,10)", Op::Cross, catalog::q1()),
        ("Q2", "P10+(2,4,6)", Op::Triad, catalog::q2()),
        ("Q3", "P10+(1,3-4)", Op::Tedge, catalog::q3()),
    ] {
        let e = parse_expression(text)?;
        let got = match validate(&d, &e.steps, op) {
            Ok(en) => en.result,
            Err(err) => {
                details.push(format!("{name}: {err}"));
                ok = false;
                continue;
            }
        };
        let w4 = is_weakly_4_connected(&got);
        ok &= got == want && w4;
        details.push(format!("{name} = {text} as {op}: matches catalog {}, weakly 4-connected {w4}", got == want));
    }
    for (name, c) in [("D1", catalog::cover_d1()), ("D3", catalog::cover_d3())] {
        ok &= disk_system_chi1(&c);
        details.push(format!("{name}: {} chi={}", c.classification(), c.euler_characteristic()));
    }
    run.push('b', None, "construct Q1, Q2, Q3 and covers D1, D3", details, ok);

    // (c)
    let witness = vec![vec![1, 5], vec![3, 8], vec![7, 9], vec![2], vec![4], vec![6], vec![10], vec![11]];
    let (ok, details) = match cfg.targets.get("e18") {
        Some(e18) => {
            let w = check_witness(&catalog::q2(), e18, &witness)?;
            (w.up_to_iso, vec![format!("branch sets valid {}, quotient contains E18 {}", w.sets_valid, w.up_to_iso)])
        }
        None => (false, vec!["no e18 target".to_string()]),
    };
    run.push('c', None, "Q2 has an E18 minor via the printed branch sets", details, ok);

    let tables: Vec<Table> = match cfg.only {
        Some(t) => vec![t],
        None => vec![Table::Q1, Table::Q3],
    };
    for &t in &tables {
        replay_table(&mut run, t)?;
    }
    Ok(ReplayReport {
        steps: run.steps,
        findings: run.findings,
    })
}

fn replay_table(run: &mut Run, t: Table) -> Result<()> {
    let cover = t.cover();
    let base = cover.carrier().clone();
    let rows: Vec<TableRow> = run.cfg.rows.iter().filter(|r| r.table() == t.name()).cloned().collect();

    // (e) first: parse and validate rows, keeping their graphs for (d)
    let mut graphs: Vec<(Op, String, Graph)> = Vec::new();
    let mut details = Vec::new();
    let mut ok = !rows.is_empty();
    let mut invalid = Vec::new();
    let mut bad_witness = Vec::new();
    for r in &rows {
        let e = match parse_expression(&r.expr) {
            Ok(e) => e,
            Err(err) => {
                ok = false;
                details.push(format!("{}: {err}", r.expr));
                continue;
            }
        };
        let op: Op = r.op.parse()?;
        let g = apply_steps(&base, &e.steps)?;
        if let Err(err) = validate(&cover, &e.steps, op) {
            ok = false;
            details.push(format!("{} does not validate as {op}: {err}", r.expr));
            invalid.push((r.expr.clone(), err.to_string(), g.clone()));
        }
        let w = match run.cfg.targets.get(&r.target) {
            Some(target) => check_witness(&g, target, &r.witness)?.up_to_iso,
            None => false,
        };
        if !w {
            ok = false;
            details.push(format!("{}: witness does not certify {}", r.expr, r.target));
            bad_witness.push((r.expr.clone(), g.clone()));
        }
        graphs.push((op, r.expr.clone(), g));
    }
    details.insert(0, format!("{} rows parsed", graphs.len()));
    for (expr, clause, g) in invalid {
        run.finding(t, FindingKind::RowInvalid { clause }, expr, &g)?;
    }
    for (expr, g) in bad_witness {
        run.finding(t, FindingKind::WitnessFails, expr, &g)?;
    }
    let e_step = StepReport {
        id: 'e',
        table: Some(t),
        title: "every row validates as its operation and its witness certifies the named target".into(),
        passed: ok,
        details,
    };

    // (d)
    let mut details = Vec::new();
    let mut ok = true;
    for op in t.compared_ops() {
        let fam = enumerate_op(&cover, op)?;
        let expected: Vec<&(Op, String, Graph)> = graphs.iter().filter(|(o, _, _)| *o == op).collect();
        let exp_graphs: Vec<Graph> = expected.iter().map(|x| x.2.clone()).collect();
        let rep = compare_with_expected(&fam, &exp_graphs)?;
        let pass = rep.two_sided();
        ok &= pass;
        let mut line = format!(
            "{op}: {} classes ({} instances), {} rows, {}",
            fam.classes.len(),
            fam.instance_count(),
            exp_graphs.len(),
            if pass { "matched" } else { "MISMATCH" }
        );
        for (a, b) in &rep.expected_duplicates {
            line.push_str(&format!("; rows {} and {} are isomorphic", expected[*a].1, expected[*b].1));
        }
        details.push(line);
        for &k in &rep.unmatched_classes {
            let rep_e = &fam.classes[k].representative;
            let expr = format!("{}{}", base_name(t), rep_e.expression());
            details.push(format!("  unlisted class {expr} ({} instances)", fam.classes[k].size()));
            run.finding(t, FindingKind::UnlistedClass { op }, expr, &rep_e.result)?;
        }
        for &i in &rep.unmatched_expected {
            details.push(format!("  row {} matches no class", expected[i].1));
            run.finding(t, FindingKind::UnmatchedRow { op }, expected[i].1.clone(), &expected[i].2)?;
        }
    }
    run.push('d', Some(t), "enumeration matches the rows two-sided up to isomorphism", details, ok);
    run.steps.push(e_step);

    // (f)
    let mut details = Vec::new();
    let mut ok = true;
    let q2 = catalog::q2();
    let triads = enumerate_op(&cover, Op::Triad)?;
    match t {
        Table::Q1 => {
            let mut bad = 0;
            for c in &triads.classes {
                if !is_subgraph_up_to_iso(&q2, c.graph()) {
                    bad += 1;
                    let expr = format!("Q1{}", c.representative.expression());
                    run.finding(t, rule("triad: Q2 subgraph"), expr, c.graph())?;
                }
            }
            ok &= bad == 0;
            details.push(format!("triad rule: {} classes, {bad} without a Q2 subgraph", triads.classes.len()));
            let tedges = enumerate_op(&cover, Op::Tedge)?;
            let listed: Vec<&Graph> = graphs.iter().filter(|x| x.0 == Op::Tedge).map(|x| &x.2).collect();
            let crosses = enumerate_op(&Table::Q3.cover(), Op::Cross)?;
            let mut bad = 0;
            for c in &tedges.classes {
                let hit_row = listed.iter().try_fold(false, |acc, g| Ok::<_, crate::Error>(acc || are_isomorphic(g, c.graph())?))?;
                let hit_cross = crosses.classes.iter().any(|x| x.canonical == c.canonical);
                if !hit_row && !hit_cross {
                    bad += 1;
                    let expr = format!("Q1{}", c.representative.expression());
                    run.finding(t, rule("tedge: listed row or cross of Q3"), expr, c.graph())?;
                }
            }
            ok &= bad == 0;
            details.push(format!(
                "tedge rule: {} classes, {bad} neither the listed row nor a cross of Q3",
                tedges.classes.len()
            ));
        }
        Table::Q3 => {
            let listed = graphs.iter().filter(|x| x.0 == Op::Triad).map(|x| canonical_form(&x.2)).collect::<Result<Vec<_>>>()?;
            let mut bad = 0;
            for c in &triads.classes {
                if listed.contains(&c.canonical) || find_minor(c.graph(), &q2)?.is_some() {
                    continue;
                }
                bad += 1;
                let expr = format!("Q3{}", c.representative.expression());
                run.finding(t, rule("triad: Q2 minor or listed row"), expr, c.graph())?;
            }
            ok &= bad == 0;
            details.push(format!(
                "triad rule: {} classes, {bad} with no Q2 minor and not the listed row",
                triads.classes.len()
            ));
        }
    }
    run.push('f', Some(t), "exception rules", details, ok);
    Ok(())
}

fn rule(s: &str) -> FindingKind {
    FindingKind::RuleCounterexample { rule: s.to_string() }
}

fn base_name(t: Table) -> &'static str {
    match t {
        Table::Q1 => "Q1",
        Table::Q3 => "Q3",
    }
}
