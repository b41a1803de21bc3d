//! Separations, k-connectivity, weak 4-connectivity, degenerate separations
//! and prism recognition.

use std::collections::BTreeSet;

use crate::error::{input, Result};
use crate::graph_core::{BitGraph, Graph, Label};
use crate::util::{combinations, permutations};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Separation {
    pub a: BTreeSet<Label>,
    pub b: BTreeSet<Label>,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.a.intersection(&self.b).count()
    }

    pub fn cut(&self) -> BTreeSet<Label> {
        self.a.intersection(&self.b).copied().collect()
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        let union: BTreeSet<Label> = self.a.union(&self.b).copied().collect();
        if union != g.vertex_set() {
            return false;
        }
        let a_only: BTreeSet<Label> = self.a.difference(&self.b).copied().collect();
        let b_only: BTreeSet<Label> = self.b.difference(&self.a).copied().collect();
        a_only
            .iter()
            .all(|&v| g.neighbors(v).is_disjoint(&b_only))
    }

    /// Both sides proper subsets of the vertex set.
    pub fn is_nontrivial(&self, g: &Graph) -> bool {
        self.a.len() < g.order() && self.b.len() < g.order()
    }

    pub fn swapped(&self) -> Separation {
        Separation {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

/// Connected components of `alive`, as bitmasks.
fn components_mask(bg: &BitGraph, alive: u64) -> Vec<u64> {
    let mut rest = alive;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = bg.adj[i] & alive & !comp;
            comp |= new;
            frontier |= new;
        }
        rest &= !comp;
        out.push(comp);
    }
    out
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// True iff |V| > k and deleting fewer than k vertices never disconnects.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    if g.order() <= k {
        return false;
    }
    let bg = BitGraph::from_graph(g);
    let idx: Vec<usize> = (0..bg.n()).collect();
    let all = full_mask(bg.n());
    (0..k).all(|r| {
        combinations(&idx, r)
            .iter()
            .all(|x| components_mask(&bg, all & !mask_of(x)).len() <= 1)
    })
}

/// All non-trivial separations of order at most `max_order`, both
/// orientations, sorted.
pub fn enumerate_separations(g: &Graph, max_order: usize) -> Vec<Separation> {
    let bg = BitGraph::from_graph(g);
    let idx: Vec<usize> = (0..bg.n()).collect();
    let all = full_mask(bg.n());
    let to_set = |m: u64| -> BTreeSet<Label> {
        (0..bg.n()).filter(|&i| m >> i & 1 == 1).map(|i| bg.labels[i]).collect()
    };
    let mut out = Vec::new();
    for r in 0..=max_order.min(bg.n()) {
        for x in combinations(&idx, r) {
            let xm = mask_of(&x);
            let comps = components_mask(&bg, all & !xm);
            if comps.len() < 2 {
                continue;
            }
            for pick in 1..(1u64 << comps.len()) - 1 {
                let side: u64 = (0..comps.len())
                    .filter(|&c| pick >> c & 1 == 1)
                    .fold(0, |m, c| m | comps[c]);
                let other = all & !xm & !side;
                out.push(Separation {
                    a: to_set(side | xm),
                    b: to_set(other | xm),
                });
            }
        }
    }
    out.sort_by(|p, q| (p.order(), &p.a, &p.b).cmp(&(q.order(), &q.a, &q.b)));
    out
}

fn edges_in(bg: &BitGraph, m: u64) -> u32 {
    (0..bg.n())
        .filter(|&i| m >> i & 1 == 1)
        .map(|i| (bg.adj[i] & m).count_ones())
        .sum::<u32>()
        / 2
}

/// 3-connected, at least five vertices, and every separation of order at
/// most three has a side inducing at most four edges.
pub fn is_weakly_4_connected(g: &Graph) -> bool {
    if g.order() < 5 || !is_k_connected(g, 3) {
        return false;
    }
    let bg = BitGraph::from_graph(g);
    let idx: Vec<usize> = (0..bg.n()).collect();
    let all = full_mask(bg.n());
    for x in combinations(&idx, 3) {
        let xm = mask_of(&x);
        let comps = components_mask(&bg, all & !xm);
        if comps.len() < 2 {
            continue;
        }
        for pick in 1..(1u64 << comps.len()) - 1 {
            let side: u64 = (0..comps.len())
                .filter(|&c| pick >> c & 1 == 1)
                .fold(0, |m, c| m | comps[c]);
            let other = all & !xm & !side;
            if edges_in(&bg, side | xm).min(edges_in(&bg, other | xm)) > 4 {
                return false;
            }
        }
    }
    true
}

/// Witness numbering for a degenerate separation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// `|A - B| = 1` and the cut is independent.
    Single { v: [Label; 3] },
    /// A triangle `u` with `u[i]` equal or adjacent to `v[i]`.
    Triangle { v: [Label; 3], u: [Label; 3] },
}

/// Literal degenerate-separation test for `(A, B)` as ordered.
pub fn is_degenerate(g: &Graph, sep: &Separation) -> Result<Option<Degeneracy>> {
    if !sep.is_valid(g) {
        return input("not a separation of the graph");
    }
    if sep.order() != 3 {
        return input(format!("degeneracy needs order 3, got {}", sep.order()));
    }
    let cut: Vec<Label> = sep.cut().into_iter().collect();
    let a_only = sep.a.len() - 3;
    let independent = !(g.has_edge(cut[0], cut[1]) || g.has_edge(cut[0], cut[2]) || g.has_edge(cut[1], cut[2]));
    if a_only == 1 && independent {
        return Ok(Some(Degeneracy::Single {
            v: [cut[0], cut[1], cut[2]],
        }));
    }
    let a: Vec<Label> = sep.a.iter().copied().collect();
    let ga = g.induced(&sep.a);
    let ga_edges = ga.edges();
    for tri in combinations(&a, 3) {
        if !(ga.has_edge(tri[0], tri[1]) && ga.has_edge(tri[0], tri[2]) && ga.has_edge(tri[1], tri[2])) {
            continue;
        }
        for v in permutations(&cut) {
            let near = (0..3).all(|i| tri[i] == v[i] || g.has_edge(tri[i], v[i]));
            if !near {
                continue;
            }
            let span: BTreeSet<Label> = tri.iter().chain(v.iter()).copied().collect();
            if !sep.a.is_subset(&span) {
                continue;
            }
            let ok = ga_edges.iter().all(|&(x, y)| {
                (0..3).any(|i| (x, y) == (tri[i], v[i]) || (y, x) == (tri[i], v[i]))
                    || (tri.contains(&x) && tri.contains(&y))
            });
            if ok {
                return Ok(Some(Degeneracy::Triangle {
                    v: [v[0], v[1], v[2]],
                    u: [tri[0], tri[1], tri[2]],
                }));
            }
        }
    }
    Ok(None)
}

/// Six vertices whose complement is a 6-cycle.
pub fn is_prism(g: &Graph) -> bool {
    if g.order() != 6 {
        return false;
    }
    let c = g.complement();
    c.vertices().all(|v| c.degree(v) == 2) && c.is_connected()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn k(n: Label) -> Graph {
        let mut es = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                es.push((a, b));
            }
        }
        Graph::from_edges(es).unwrap()
    }

    #[test]
    fn k_connectivity_examples() {
        let p = catalog::petersen();
        assert!(is_k_connected(&p, 3));
        assert!(!is_k_connected(&p, 4));
        assert!(!is_k_connected(&k(4), 4));
        assert!(is_k_connected(&k(4), 3));
        assert!(is_k_connected(&catalog::prism(), 3));
    }

    #[test]
    fn separation_examples() {
        assert!(enumerate_separations(&k(5), 3).is_empty());
        let p = catalog::petersen();
        let seps = enumerate_separations(&p, 3);
        for v in p.vertices() {
            let mut b = p.vertex_set();
            b.remove(&v);
            let mut a: BTreeSet<Label> = p.neighbors(v).clone();
            a.insert(v);
            let s = Separation { a, b };
            assert!(seps.contains(&s));
            assert!(seps.contains(&s.swapped()));
            assert!(matches!(is_degenerate(&p, &s).unwrap(), Some(Degeneracy::Single { .. })));
        }
        assert!(seps.iter().all(|s| s.is_valid(&p) && s.is_nontrivial(&p) && s.order() == 3));
    }

    #[test]
    fn weak_four_connectivity_examples() {
        assert!(is_weakly_4_connected(&catalog::petersen()));
        assert!(is_weakly_4_connected(&catalog::prism()));
        assert!(!is_weakly_4_connected(&k(4)));
        assert!(is_weakly_4_connected(&k(5)));
    }

    #[test]
    fn prism_triangle_split_is_not_degenerate() {
        let g = catalog::prism();
        let tri: BTreeSet<Label> = [1, 2, 3].into();
        let s = Separation {
            a: g.vertex_set(),
            b: tri,
        };
        assert!(s.is_valid(&g));
        assert_eq!(is_degenerate(&g, &s).unwrap(), None);
        let c4 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let two = Separation {
            a: [1, 2, 3].into(),
            b: [1, 3, 4].into(),
        };
        assert!(two.is_valid(&c4));
        assert!(is_degenerate(&c4, &two).is_err());
    }

    #[test]
    fn prism_recognition() {
        assert!(is_prism(&catalog::prism()));
        assert!(!is_prism(&catalog::k33()));
        let c6 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)]).unwrap();
        assert!(!is_prism(&c6));
    }
}
