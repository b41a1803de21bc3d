//! Planarity by face-by-face path embedding on each 2-connected block.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph_core::{edge, Edge, Graph, Label};

/// Edge sets of the 2-connected blocks (bridges included as single edges).
pub(crate) fn blocks(g: &Graph) -> Vec<Vec<Edge>> {
    struct St<'a> {
        g: &'a Graph,
        disc: BTreeMap<Label, usize>,
        low: BTreeMap<Label, usize>,
        time: usize,
        stack: Vec<Edge>,
        out: Vec<Vec<Edge>>,
    }
    fn dfs(s: &mut St, u: Label, parent: Option<Label>) {
        s.time += 1;
        s.disc.insert(u, s.time);
        s.low.insert(u, s.time);
        for &v in s.g.neighbors(u).clone().iter() {
            match s.disc.get(&v).copied() {
                None => {
                    s.stack.push((u, v));
                    dfs(s, v, Some(u));
                    let lv = s.low[&v];
                    if lv < s.low[&u] {
                        s.low.insert(u, lv);
                    }
                    if lv >= s.disc[&u] {
                        let mut block = Vec::new();
                        while let Some(e) = s.stack.pop() {
                            block.push(edge(e.0, e.1));
                            if e == (u, v) {
                                break;
                            }
                        }
                        s.out.push(block);
                    }
                }
                Some(dv) if Some(v) != parent && dv < s.disc[&u] => {
                    s.stack.push((u, v));
                    if dv < s.low[&u] {
                        s.low.insert(u, dv);
                    }
                }
                _ => {}
            }
        }
    }
    let mut s = St {
        g,
        disc: BTreeMap::new(),
        low: BTreeMap::new(),
        time: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in g.vertices() {
        if !s.disc.contains_key(&v) {
            dfs(&mut s, v, None);
        }
    }
    s.out
}

pub(crate) fn planar(g: &Graph) -> bool {
    let (n, m) = (g.order(), g.size());
    if n >= 3 && m > 3 * n - 6 {
        return false;
    }
    blocks(g).iter().all(|b| {
        let bg = Graph::from_edges(b.iter().copied()).expect("block edges are simple");
        block_planar(&bg)
    })
}

/// Some cycle through the edge `(u, v)` of a 2-connected graph.
fn initial_cycle(g: &Graph) -> Vec<Label> {
    let (u, v) = g.edges()[0];
    let mut prev: BTreeMap<Label, Label> = BTreeMap::new();
    let mut queue = VecDeque::from([v]);
    prev.insert(v, v);
    while let Some(x) = queue.pop_front() {
        if x == u {
            break;
        }
        for &y in g.neighbors(x) {
            if (x, y) == (v, u) || prev.contains_key(&y) {
                continue;
            }
            prev.insert(y, x);
            queue.push_back(y);
        }
    }
    let mut path = vec![u];
    while *path.last().unwrap() != v {
        path.push(prev[path.last().unwrap()]);
    }
    path
}

struct Fragment {
    attachments: BTreeSet<Label>,
    /// A path between two distinct attachments through the fragment.
    path: Vec<Label>,
}

fn fragments(g: &Graph, vs: &BTreeSet<Label>, es: &BTreeSet<Edge>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (a, b) in g.edges() {
        if vs.contains(&a) && vs.contains(&b) && !es.contains(&(a, b)) {
            out.push(Fragment {
                attachments: [a, b].into(),
                path: vec![a, b],
            });
        }
    }
    let rest = g.remove_vertices(vs);
    for comp in rest.components() {
        let attachments: BTreeSet<Label> = comp
            .iter()
            .flat_map(|&x| g.neighbors(x).iter().copied())
            .filter(|y| vs.contains(y))
            .collect();
        let a = *attachments.iter().next().expect("2-connected fragments attach");
        // BFS from a through the component to a different attachment
        let mut prev: BTreeMap<Label, Label> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &x in g.neighbors(a).iter().filter(|x| comp.contains(x)) {
            prev.insert(x, a);
            queue.push_back(x);
        }
        let mut end = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if y != a && attachments.contains(&y) {
                    end = Some((x, y));
                    break 'bfs;
                }
                if comp.contains(&y) && !prev.contains_key(&y) {
                    prev.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        let (last, b) = end.expect("2-connected fragments have two attachments");
        let mut path = vec![b, last];
        while *path.last().unwrap() != a {
            path.push(prev[path.last().unwrap()]);
        }
        path.reverse();
        out.push(Fragment { attachments, path });
    }
    out
}

fn block_planar(g: &Graph) -> bool {
    if g.size() <= g.order() {
        return true;
    }
    let cycle = initial_cycle(g);
    let mut vs: BTreeSet<Label> = cycle.iter().copied().collect();
    let mut es: BTreeSet<Edge> = (0..cycle.len())
        .map(|i| edge(cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect();
    let mut faces: Vec<Vec<Label>> = vec![cycle.clone(), cycle];
    loop {
        let frags = fragments(g, &vs, &es);
        if frags.is_empty() {
            return true;
        }
        let mut pick: Option<(usize, usize)> = None;
        for (i, f) in frags.iter().enumerate() {
            let ok: Vec<usize> = (0..faces.len())
                .filter(|&k| f.attachments.iter().all(|a| faces[k].contains(a)))
                .collect();
            match ok.len() {
                0 => return false,
                1 => {
                    pick = Some((i, ok[0]));
                    break;
                }
                _ => {
                    if pick.is_none() {
                        pick = Some((i, ok[0]));
                    }
                }
            }
        }
        let (fi, k) = pick.unwrap();
        let path = &frags[fi].path;
        let face = faces.swap_remove(k);
        let (a, b) = (path[0], *path.last().unwrap());
        let (i, j) = (
            face.iter().position(|&x| x == a).unwrap(),
            face.iter().position(|&x| x == b).unwrap(),
        );
        let arc = |from: usize, to: usize| -> Vec<Label> {
            let mut out = vec![face[from]];
            let mut t = from;
            while t != to {
                t = (t + 1) % face.len();
                out.push(face[t]);
            }
            out
        };
        let inner = &path[1..path.len() - 1];
        let mut f1 = arc(i, j);
        f1.extend(inner.iter().rev());
        let mut f2 = arc(j, i);
        f2.extend(inner.iter());
        faces.push(f1);
        faces.push(f2);
        vs.extend(path.iter().copied());
        es.extend(path.windows(2).map(|w| edge(w[0], w[1])));
    }
}
