//! DAGs and PDAGs over nodes `1..=p`: acyclicity, orderings, skeletons,
//! v-structures, patterns, covered edges, descendants, Markov equivalence.
//!
//! Node indices are 1-based throughout, matching the usual convention for
//! causal graphs. Graph values are immutable after construction; all
//! operations are pure and return new values.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// 1-based node index.
pub type NodeId = u32;

#[inline]
fn idx(i: NodeId) -> usize {
    (i - 1) as usize
}

fn check_node(i: NodeId, p: u32) -> Result<()> {
    if i == 0 || i > p {
        Err(Error::NodeOutOfRange { node: i, p })
    } else {
        Ok(())
    }
}

/// Sorted insertion keeping adjacency lists deterministic.
fn insert_sorted(v: &mut Vec<NodeId>, x: NodeId) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn remove_sorted(v: &mut Vec<NodeId>, x: NodeId) {
    if let Ok(pos) = v.binary_search(&x) {
        v.remove(pos);
    }
}

#[inline]
fn contains_sorted(v: &[NodeId], x: NodeId) -> bool {
    v.binary_search(&x).is_ok()
}

/// Directed acyclic graph. Acyclicity is validated eagerly on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    p: u32,
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

impl Dag {
    /// Builds a DAG over nodes `1..=p` from directed edges `(i, j)` meaning `i -> j`.
    pub fn new(p: u32, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut parents = vec![Vec::new(); p as usize];
        let mut children = vec![Vec::new(); p as usize];
        for &(i, j) in edges {
            check_node(i, p)?;
            check_node(j, p)?;
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if contains_sorted(&children[idx(i)], j) || contains_sorted(&children[idx(j)], i) {
                return Err(Error::DuplicateEdge(i, j));
            }
            insert_sorted(&mut children[idx(i)], j);
            insert_sorted(&mut parents[idx(j)], i);
        }
        let dag = Dag {
            p,
            parents,
            children,
        };
        if dag.kahn_order().is_none() {
            return Err(Error::CyclicGraph);
        }
        Ok(dag)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        1..=self.p
    }

    pub fn parents(&self, j: NodeId) -> &[NodeId] {
        &self.parents[idx(j)]
    }

    pub fn children(&self, i: NodeId) -> &[NodeId] {
        &self.children[idx(i)]
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        contains_sorted(&self.children[idx(i)], j)
    }

    pub fn adjacent(&self, i: NodeId, j: NodeId) -> bool {
        self.has_edge(i, j) || self.has_edge(j, i)
    }

    /// Directed edges sorted by `(from, to)`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for i in self.nodes() {
            for &j in self.children(i) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(|c| c.len()).sum()
    }

    /// Unordered adjacencies `{i, j}` as pairs with `i < j`.
    pub fn skeleton(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.edges()
            .into_iter()
            .map(|(i, j)| (i.min(j), i.max(j)))
            .collect()
    }

    fn kahn_order(&self) -> Option<Vec<NodeId>> {
        let mut indeg: Vec<usize> = (1..=self.p).map(|j| self.parents(j).len()).collect();
        // smallest-index-first among available sources
        let mut ready: BTreeSet<NodeId> = (1..=self.p).filter(|&j| indeg[idx(j)] == 0).collect();
        let mut order = Vec::with_capacity(self.p as usize);
        while let Some(&i) = ready.iter().next() {
            ready.remove(&i);
            order.push(i);
            for &c in self.children(i) {
                indeg[idx(c)] -= 1;
                if indeg[idx(c)] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() == self.p as usize {
            Some(order)
        } else {
            None
        }
    }

    /// Causal ordering: a permutation sigma with sigma(i) < sigma(j) for every
    /// edge i -> j. Ties are broken by smallest index first, so the result is
    /// deterministic.
    pub fn topological_order(&self) -> Vec<NodeId> {
        self.kahn_order().expect("Dag invariant: acyclic")
    }

    /// Triples `(i, j, k)` with `i < j`, both parents of `k`, and `i`, `j`
    /// non-adjacent.
    pub fn v_structures(&self) -> BTreeSet<(NodeId, NodeId, NodeId)> {
        let mut out = BTreeSet::new();
        for k in self.nodes() {
            let pa = self.parents(k);
            for a in 0..pa.len() {
                for b in (a + 1)..pa.len() {
                    let (i, j) = (pa[a], pa[b]);
                    if !self.adjacent(i, j) {
                        out.insert((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Pattern: same skeleton, an edge directed iff it takes part in a
    /// v-structure, all other edges undirected.
    pub fn pattern(&self) -> Pdag {
        let mut directed = BTreeSet::new();
        for (i, j, k) in self.v_structures() {
            directed.insert((i, k));
            directed.insert((j, k));
        }
        let mut undirected = Vec::new();
        for (i, j) in self.edges() {
            if !directed.contains(&(i, j)) {
                undirected.push((i, j));
            }
        }
        let directed: Vec<_> = directed.into_iter().collect();
        Pdag::new(self.p, &directed, &undirected).expect("pattern of a valid Dag is a valid Pdag")
    }

    /// True iff `pa(i) = pa(j) \ {i}` for the edge `i -> j`.
    pub fn is_covered(&self, i: NodeId, j: NodeId) -> Result<bool> {
        if !self.has_edge(i, j) {
            return Err(Error::NoSuchEdge { from: i, to: j });
        }
        let pa_i = self.parents(i);
        let pa_j = self.parents(j);
        if pa_j.len() != pa_i.len() + 1 {
            return Ok(false);
        }
        Ok(pa_j
            .iter()
            .filter(|&&s| s != i)
            .eq(pa_i.iter()))
    }

    /// Returns the graph with `i -> j` replaced by `j -> i`.
    pub fn reverse_edge(&self, i: NodeId, j: NodeId) -> Result<Dag> {
        if !self.has_edge(i, j) {
            return Err(Error::NoSuchEdge { from: i, to: j });
        }
        let mut g = self.clone();
        remove_sorted(&mut g.children[idx(i)], j);
        remove_sorted(&mut g.parents[idx(j)], i);
        insert_sorted(&mut g.children[idx(j)], i);
        insert_sorted(&mut g.parents[idx(i)], j);
        if g.kahn_order().is_none() {
            return Err(Error::CyclicGraph);
        }
        Ok(g)
    }

    /// Reflexive-transitive closure of the child relation, sorted.
    pub fn descendants(&self, i: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.p as usize];
        let mut stack = vec![i];
        seen[idx(i)] = true;
        while let Some(u) = stack.pop() {
            for &c in self.children(u) {
                if !seen[idx(c)] {
                    seen[idx(c)] = true;
                    stack.push(c);
                }
            }
        }
        (1..=self.p).filter(|&k| seen[idx(k)]).collect()
    }

    /// Same skeleton and same v-structures.
    pub fn markov_equivalent(&self, other: &Dag) -> Result<bool> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch(format!(
                "p = {} vs p = {}",
                self.p, other.p
            )));
        }
        Ok(self.skeleton() == other.skeleton() && self.v_structures() == other.v_structures())
    }
}

/// Partially directed graph: a set of directed edges whose subgraph is acyclic
/// plus a set of undirected edges, disjoint as adjacencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdag {
    p: u32,
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
    neighbors: Vec<Vec<NodeId>>,
}

impl Pdag {
    pub fn new(
        p: u32,
        directed: &[(NodeId, NodeId)],
        undirected: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        let mut g = Pdag {
            p,
            parents: vec![Vec::new(); p as usize],
            children: vec![Vec::new(); p as usize],
            neighbors: vec![Vec::new(); p as usize],
        };
        for &(i, j) in directed {
            check_node(i, p)?;
            check_node(j, p)?;
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if g.adjacent(i, j) {
                return Err(Error::DuplicateEdge(i, j));
            }
            insert_sorted(&mut g.children[idx(i)], j);
            insert_sorted(&mut g.parents[idx(j)], i);
        }
        for &(i, j) in undirected {
            check_node(i, p)?;
            check_node(j, p)?;
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if g.adjacent(i, j) {
                return Err(Error::DuplicateEdge(i, j));
            }
            insert_sorted(&mut g.neighbors[idx(i)], j);
            insert_sorted(&mut g.neighbors[idx(j)], i);
        }
        if !g.directed_part_acyclic() {
            return Err(Error::CyclicGraph);
        }
        Ok(g)
    }

    pub fn from_dag(d: &Dag) -> Pdag {
        Pdag {
            p: d.p,
            parents: d.parents.clone(),
            children: d.children.clone(),
            neighbors: vec![Vec::new(); d.p as usize],
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        1..=self.p
    }

    pub fn parents(&self, j: NodeId) -> &[NodeId] {
        &self.parents[idx(j)]
    }

    pub fn children(&self, i: NodeId) -> &[NodeId] {
        &self.children[idx(i)]
    }

    /// Undirected neighbors of `i`.
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.neighbors[idx(i)]
    }

    pub fn has_directed(&self, i: NodeId, j: NodeId) -> bool {
        contains_sorted(&self.children[idx(i)], j)
    }

    pub fn has_undirected(&self, i: NodeId, j: NodeId) -> bool {
        contains_sorted(&self.neighbors[idx(i)], j)
    }

    pub fn adjacent(&self, i: NodeId, j: NodeId) -> bool {
        self.has_directed(i, j) || self.has_directed(j, i) || self.has_undirected(i, j)
    }

    /// Directed edges sorted by `(from, to)`.
    pub fn directed_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for i in self.nodes() {
            for &j in self.children(i) {
                out.push((i, j));
            }
        }
        out
    }

    /// Undirected edges as pairs with `i < j`, sorted.
    pub fn undirected_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for i in self.nodes() {
            for &j in self.neighbors(i) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn skeleton(&self) -> BTreeSet<(NodeId, NodeId)> {
        let mut out: BTreeSet<(NodeId, NodeId)> = self
            .directed_edges()
            .into_iter()
            .map(|(i, j)| (i.min(j), i.max(j)))
            .collect();
        out.extend(self.undirected_edges());
        out
    }

    fn directed_part_acyclic(&self) -> bool {
        let mut indeg: Vec<usize> = (1..=self.p).map(|j| self.parents(j).len()).collect();
        let mut ready: Vec<NodeId> = (1..=self.p).filter(|&j| indeg[idx(j)] == 0).collect();
        let mut seen = 0usize;
        while let Some(i) = ready.pop() {
            seen += 1;
            for &c in self.children(i) {
                indeg[idx(c)] -= 1;
                if indeg[idx(c)] == 0 {
                    ready.push(c);
                }
            }
        }
        seen == self.p as usize
    }

    /// Replaces the undirected edge `i --- j` by `i -> j`.
    pub(crate) fn orient_edge(&mut self, i: NodeId, j: NodeId) {
        remove_sorted(&mut self.neighbors[idx(i)], j);
        remove_sorted(&mut self.neighbors[idx(j)], i);
        insert_sorted(&mut self.children[idx(i)], j);
        insert_sorted(&mut self.parents[idx(j)], i);
    }

    /// Replaces the directed edge `i -> j` by `i --- j`.
    pub(crate) fn undirect_edge(&mut self, i: NodeId, j: NodeId) {
        remove_sorted(&mut self.children[idx(i)], j);
        remove_sorted(&mut self.parents[idx(j)], i);
        insert_sorted(&mut self.neighbors[idx(i)], j);
        insert_sorted(&mut self.neighbors[idx(j)], i);
    }

    /// Converts to a DAG; fails if any undirected edge remains.
    pub fn to_dag(&self) -> Result<Dag> {
        if let Some(&(i, j)) = self.undirected_edges().first() {
            return Err(Error::NotFullyDirected(i, j));
        }
        Dag::new(self.p, &self.directed_edges())
    }

    /// Colliders of the directed part with non-adjacent parents, `(i, j, k)`
    /// with `i < j` parents of `k`.
    pub fn v_structures(&self) -> BTreeSet<(NodeId, NodeId, NodeId)> {
        let mut out = BTreeSet::new();
        for k in self.nodes() {
            let pa = self.parents(k);
            for a in 0..pa.len() {
                for b in (a + 1)..pa.len() {
                    let (i, j) = (pa[a], pa[b]);
                    if !self.adjacent(i, j) {
                        out.insert((i, j, k));
                    }
                }
            }
        }
        out
    }
}
