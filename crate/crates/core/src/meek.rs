//! Background-knowledge machinery: closure under the orientation rules R1-R4,
//! maximally oriented PDAGs, implied-orientation tests and consistent DAG
//! extension enumeration.
//!
//! The rules act on an undirected edge `i --- j` and orient it `i -> j`:
//!
//! * R1: `k -> i`, `i --- j`, `k` and `j` non-adjacent
//! * R2: `i -> k`, `k -> j`, `i --- j`
//! * R3: `i --- k`, `i --- l`, `k -> j`, `l -> j`, `i --- j`, `k` and `l` non-adjacent
//! * R4: `i --- k`, `k -> l`, `l -> j`, `i --- l`, `i --- j`, `k` and `j` non-adjacent

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId, Pdag};
use std::collections::BTreeSet;

/// A set of edge orientations imposed on a pattern.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BackgroundKnowledge {
    oriented: BTreeSet<(NodeId, NodeId)>,
}

impl BackgroundKnowledge {
    pub fn new<I: IntoIterator<Item = (NodeId, NodeId)>>(pairs: I) -> Result<Self> {
        let mut oriented = BTreeSet::new();
        for (i, j) in pairs {
            if oriented.contains(&(j, i)) {
                return Err(Error::InconsistentKnowledge(format!(
                    "both orientations of {{{i}, {j}}} requested"
                )));
            }
            oriented.insert((i, j));
        }
        Ok(BackgroundKnowledge { oriented })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn oriented(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.oriented
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
}

pub const DEFAULT_RULE_ORDER: [Rule; 4] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4];

/// Whether `rule` orients `i -> j`, treating the `{i, j}` edge itself as
/// undirected. All other orientations are read from `g` as-is.
pub(crate) fn rule_orients(g: &Pdag, rule: Rule, i: NodeId, j: NodeId) -> bool {
    match rule {
        Rule::R1 => g.parents(i).iter().any(|&k| !g.adjacent(k, j)),
        Rule::R2 => g
            .children(i)
            .iter()
            .any(|&k| k != j && g.has_directed(k, j)),
        Rule::R3 => {
            let cands: Vec<NodeId> = g
                .neighbors(i)
                .iter()
                .copied()
                .filter(|&k| k != j && g.has_directed(k, j))
                .collect();
            for a in 0..cands.len() {
                for b in (a + 1)..cands.len() {
                    if !g.adjacent(cands[a], cands[b]) {
                        return true;
                    }
                }
            }
            false
        }
        Rule::R4 => {
            for &l in g.neighbors(i) {
                if l == j || !g.has_directed(l, j) {
                    continue;
                }
                for &k in g.neighbors(i) {
                    if k != j && k != l && g.has_directed(k, l) && !g.adjacent(k, j) {
                        return true;
                    }
                }
            }
            false
        }
    }
}

/// Closes the orientations of `g` under R1-R4 with a caller-chosen rule order.
/// The fixpoint is independent of the order; the order only matters for
/// reproducing intermediate states.
pub fn meek_closure_with_order(g: &Pdag, order: &[Rule]) -> Result<Pdag> {
    let mut g = g.clone();
    loop {
        let mut changed = false;
        for &rule in order {
            for (u, v) in g.undirected_edges() {
                if !g.has_undirected(u, v) {
                    continue;
                }
                if rule_orients(&g, rule, u, v) {
                    g.orient_edge(u, v);
                    changed = true;
                } else if rule_orients(&g, rule, v, u) {
                    g.orient_edge(v, u);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // rebuilding revalidates the directed part
    match Pdag::new(g.p(), &g.directed_edges(), &g.undirected_edges()) {
        Ok(out) => Ok(out),
        Err(_) => {
            let (i, j) = g.directed_edges()[0];
            Err(Error::InconsistentOrientation(i, j))
        }
    }
}

/// Closure under R1-R4 in the default scan order.
pub fn meek_closure(g: &Pdag) -> Result<Pdag> {
    meek_closure_with_order(g, &DEFAULT_RULE_ORDER)
}

/// Imposes the background knowledge on a pattern and closes under R1-R4.
/// With empty knowledge this yields the CPDAG.
pub fn maximally_oriented(pattern: &Pdag, k: &BackgroundKnowledge) -> Result<Pdag> {
    let mut g = pattern.clone();
    for &(i, j) in k.oriented() {
        if !g.adjacent(i, j) {
            return Err(Error::UnknownAdjacency(i, j));
        }
        if g.has_directed(j, i) {
            return Err(Error::InconsistentKnowledge(format!(
                "{i} -> {j} conflicts with the pattern orientation {j} -> {i}"
            )));
        }
        if g.has_undirected(i, j) {
            g.orient_edge(i, j);
        }
    }
    meek_closure(&g)
}

/// Whether the orientation of `i -> j` is implied: with `i --- j` undirected,
/// closing under R1-R4 re-orients the edge as `i -> j`.
pub fn orientation_implied(g: &Pdag, i: NodeId, j: NodeId) -> Result<bool> {
    if !g.has_directed(i, j) {
        return Err(Error::NoSuchEdge { from: i, to: j });
    }
    let mut relaxed = g.clone();
    relaxed.undirect_edge(i, j);
    let closed = meek_closure(&relaxed)?;
    Ok(closed.has_directed(i, j))
}

/// Single-pass variant of [`orientation_implied`]: checks the four rule
/// patterns on the `(i, j)` edge only. Exact whenever `g` is already closed
/// under R1-R4 (then a re-closure can act on no other edge), which holds for
/// every maximally oriented graph this crate produces.
pub(crate) fn orientation_implied_local(g: &Pdag, i: NodeId, j: NodeId) -> bool {
    let implied = DEFAULT_RULE_ORDER
        .iter()
        .any(|&rule| rule_orients(g, rule, i, j));
    #[cfg(debug_assertions)]
    if g.p() <= 64 {
        debug_assert_eq!(
            implied,
            orientation_implied(g, i, j).expect("edge exists"),
            "local rule check disagrees with re-closure for {i} -> {j}"
        );
    }
    implied
}

/// The candidate cover `pa(j) \ {i}` for a removable orientation `i -> j`.
pub fn cover_for_edge(g: &Pdag, i: NodeId, j: NodeId) -> Result<Vec<NodeId>> {
    if !g.has_directed(i, j) {
        return Err(Error::NoSuchEdge { from: i, to: j });
    }
    if orientation_implied(g, i, j)? {
        return Err(Error::NotRemovable(i, j));
    }
    Ok(g.parents(j).iter().copied().filter(|&s| s != i).collect())
}

/// All DAGs with the skeleton of `g`, the orientations of its directed
/// subgraph, and no additional v-structures. Returns an empty list when no
/// extension exists; errors once more than `cap` extensions are found.
pub fn consistent_extensions(g: &Pdag, cap: usize) -> Result<Vec<Dag>> {
    let allowed = g.v_structures();
    let mut out = Vec::new();
    extend_rec(g.clone(), &allowed, cap, &mut out)?;
    out.sort_by_key(|d| d.edges());
    Ok(out)
}

fn extend_rec(
    g: Pdag,
    allowed: &BTreeSet<(NodeId, NodeId, NodeId)>,
    cap: usize,
    out: &mut Vec<Dag>,
) -> Result<()> {
    let undirected = g.undirected_edges();
    let Some(&(u, v)) = undirected.first() else {
        let d = g.to_dag()?;
        if d.v_structures().is_subset(allowed) {
            if out.len() + 1 > cap {
                return Err(Error::CapExceeded(cap));
            }
            out.push(d);
        }
        return Ok(());
    };
    for (a, b) in [(u, v), (v, u)] {
        let mut branch = g.clone();
        branch.orient_edge(a, b);
        if creates_new_v_structure(&branch, a, b, allowed) || creates_cycle(&branch, a, b) {
            continue;
        }
        match meek_closure(&branch) {
            Ok(closed) => {
                if closed.v_structures().is_subset(allowed) {
                    extend_rec(closed, allowed, cap, out)?;
                }
            }
            Err(Error::InconsistentOrientation(..)) | Err(Error::CyclicGraph) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn creates_new_v_structure(
    g: &Pdag,
    a: NodeId,
    b: NodeId,
    allowed: &BTreeSet<(NodeId, NodeId, NodeId)>,
) -> bool {
    g.parents(b).iter().any(|&k| {
        k != a && !g.adjacent(k, a) && {
            let (x, y) = (k.min(a), k.max(a));
            !allowed.contains(&(x, y, b))
        }
    })
}

/// Whether orienting `a -> b` closed a directed cycle, i.e. `b` reaches `a`.
fn creates_cycle(g: &Pdag, a: NodeId, b: NodeId) -> bool {
    let mut seen = vec![false; g.p() as usize];
    let mut stack = vec![b];
    while let Some(x) = stack.pop() {
        if x == a {
            return true;
        }
        let xi = (x - 1) as usize;
        if seen[xi] {
            continue;
        }
        seen[xi] = true;
        stack.extend_from_slice(g.children(x));
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_r1_and_r2() {
        // 1 -> 2, 2 --- 3, 1 and 3 non-adjacent: R1 orients 2 -> 3
        let g = Pdag::new(3, &[(1, 2)], &[(2, 3)]).unwrap();
        let c = meek_closure(&g).unwrap();
        assert_eq!(c.directed_edges(), vec![(1, 2), (2, 3)]);

        // 1 -> 2 -> 3, 1 --- 3: R2 orients 1 -> 3
        let g = Pdag::new(3, &[(1, 2), (2, 3)], &[(1, 3)]).unwrap();
        let c = meek_closure(&g).unwrap();
        assert_eq!(c.directed_edges(), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn closure_r3_and_r4() {
        // R3: 1 --- 2, 1 --- 3, 1 --- 4, 3 -> 2, 4 -> 2, 3 and 4 non-adjacent
        let g = Pdag::new(4, &[(3, 2), (4, 2)], &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let c = meek_closure(&g).unwrap();
        assert!(c.has_directed(1, 2));

        // R4: 1 --- 3, 3 -> 4, 4 -> 2, 1 --- 4, 1 --- 2, 3 and 2 non-adjacent
        let g = Pdag::new(4, &[(3, 4), (4, 2)], &[(1, 3), (1, 4), (1, 2)]).unwrap();
        let c = meek_closure(&g).unwrap();
        assert!(c.has_directed(1, 2));
    }

    #[test]
    fn closure_fixpoint_on_dag() {
        let d = Dag::new(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let g = Pdag::from_dag(&d);
        assert_eq!(meek_closure(&g).unwrap(), g);
    }

    #[test]
    fn maximal_orientation_triangle() {
        // complete undirected triangle plus knowledge 1 -> 2: 1 --- 3 stays
        let pattern = Pdag::new(3, &[], &[(1, 2), (1, 3), (2, 3)]).unwrap();
        let k = BackgroundKnowledge::new([(1, 2)]).unwrap();
        let g = maximally_oriented(&pattern, &k).unwrap();
        assert_eq!(g.directed_edges(), vec![(1, 2)]);
        assert_eq!(g.undirected_edges(), vec![(1, 3), (2, 3)]);
    }

    #[test]
    fn maximal_orientation_recovers_dag_from_its_pattern() {
        let d0 = Dag::new(
            7,
            &[(1, 2), (2, 3), (4, 2), (4, 5), (6, 4), (6, 5), (5, 7)],
        )
        .unwrap();
        let pattern = d0.pattern();
        let kinit: Vec<_> = d0
            .edges()
            .into_iter()
            .filter(|&(i, j)| pattern.has_undirected(i, j))
            .collect();
        assert_eq!(kinit, vec![(2, 3), (4, 5), (5, 7), (6, 4), (6, 5)]);
        let g = maximally_oriented(&pattern, &BackgroundKnowledge::new(kinit).unwrap()).unwrap();
        assert_eq!(g, Pdag::from_dag(&d0));
    }

    #[test]
    fn maximal_orientation_errors() {
        let pattern = Pdag::new(3, &[], &[(1, 2), (2, 3)]).unwrap();
        assert!(matches!(
            maximally_oriented(&pattern, &BackgroundKnowledge::new([(1, 3)]).unwrap()),
            Err(Error::UnknownAdjacency(1, 3))
        ));
        assert!(BackgroundKnowledge::new([(1, 2), (2, 1)]).is_err());

        let vpat = Dag::new(3, &[(1, 3), (2, 3)]).unwrap().pattern();
        assert!(matches!(
            maximally_oriented(&vpat, &BackgroundKnowledge::new([(3, 1)]).unwrap()),
            Err(Error::InconsistentKnowledge(_))
        ));
    }

    #[test]
    fn implied_orientation_examples() {
        // final state of the seven-node walkthrough: 2 -> 3 is re-implied by R1
        let g = Pdag::new(
            7,
            &[(1, 2), (2, 3), (4, 2), (4, 5), (5, 7)],
            &[(4, 6), (5, 6)],
        )
        .unwrap();
        assert!(orientation_implied(&g, 2, 3).unwrap());
        assert!(orientation_implied(&g, 5, 7).unwrap());

        // full seven-node start: 6 -> 4 is not implied
        let d0 = Dag::new(
            7,
            &[(1, 2), (2, 3), (4, 2), (4, 5), (6, 4), (6, 5), (5, 7)],
        )
        .unwrap();
        let g0 = Pdag::from_dag(&d0);
        assert!(!orientation_implied(&g0, 6, 4).unwrap());
        assert!(orientation_implied(&g0, 2, 3).unwrap());

        let single = Pdag::new(2, &[(1, 2)], &[]).unwrap();
        assert!(!orientation_implied(&single, 1, 2).unwrap());
    }

    #[test]
    fn cover_examples() {
        let d0 = Dag::new(
            7,
            &[(1, 2), (2, 3), (4, 2), (4, 5), (6, 4), (6, 5), (5, 7)],
        )
        .unwrap();
        let g0 = Pdag::from_dag(&d0);
        assert_eq!(cover_for_edge(&g0, 6, 4).unwrap(), Vec::<NodeId>::new());
        assert!(matches!(
            cover_for_edge(&g0, 2, 3),
            Err(Error::NotRemovable(2, 3))
        ));

        // after undirecting 6 --- 4 and keeping 4 -> 5: cover of 6 -> 5 is {4}
        let g = Pdag::new(
            7,
            &[(1, 2), (2, 3), (4, 2), (4, 5), (6, 5), (5, 7)],
            &[(4, 6)],
        )
        .unwrap();
        assert_eq!(cover_for_edge(&g, 6, 5).unwrap(), vec![4]);

        let single = Pdag::new(2, &[(1, 2)], &[]).unwrap();
        assert_eq!(cover_for_edge(&single, 1, 2).unwrap(), Vec::<NodeId>::new());
    }

    #[test]
    fn extensions_of_four_node_class() {
        // 1 -> 2, 2 -> 4 directed; 1 --- 3, 2 --- 3
        let g = Pdag::new(4, &[(1, 2), (2, 4)], &[(1, 3), (2, 3)]).unwrap();
        let exts = consistent_extensions(&g, 100).unwrap();
        let edge_sets: Vec<_> = exts.iter().map(|d| d.edges()).collect();
        assert_eq!(
            edge_sets,
            vec![
                vec![(1, 2), (1, 3), (2, 3), (2, 4)],
                vec![(1, 2), (1, 3), (2, 4), (3, 2)],
                vec![(1, 2), (2, 4), (3, 1), (3, 2)],
            ]
        );
    }

    #[test]
    fn extensions_trivial_cases() {
        let d = Dag::new(3, &[(1, 2), (2, 3)]).unwrap();
        let exts = consistent_extensions(&Pdag::from_dag(&d), 10).unwrap();
        assert_eq!(exts, vec![d]);

        let single = Pdag::new(2, &[], &[(1, 2)]).unwrap();
        let exts = consistent_extensions(&single, 10).unwrap();
        assert_eq!(exts.len(), 2);

        assert!(matches!(
            consistent_extensions(&single, 1),
            Err(Error::CapExceeded(1))
        ));
    }

    #[test]
    fn chordless_square_has_no_extension() {
        // any acyclic orientation of an undirected 4-cycle creates a collider
        // with non-adjacent parents
        let square = Pdag::new(4, &[], &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert_eq!(consistent_extensions(&square, 100).unwrap(), vec![]);
    }

    #[test]
    fn extensions_exclude_cyclic_candidate() {
        let g = Pdag::new(4, &[(1, 2), (2, 4)], &[(1, 3), (2, 3)]).unwrap();
        for d in consistent_extensions(&g, 100).unwrap() {
            // 2 -> 3 -> 1 together with 1 -> 2 would be a cycle
            assert!(!(d.has_edge(2, 3) && d.has_edge(3, 1)));
        }
    }
}
