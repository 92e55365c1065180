//! Population-exact computation of the distribution equivalence class of a
//! known model: fixed causal-ordering pairs from nonlinear children, the
//! maximally oriented class representative, and full enumeration by
//! breadth-first search over covered linear edge reversals.
//!
//! The fixed-pair construction assumes the model is faithful and that the
//! nonlinear edge functions out of any common parent are linearly independent
//! (which holds almost surely for randomly drawn wave functions). Models with
//! exactly cancelling nonlinear effects fall outside that assumption and are
//! handled only by the reversal calculus itself.

use crate::error::{Error, Result};
use crate::estimators::{self, Verdict};
use crate::graph::{Dag, NodeId, Pdag};
use crate::model::Plsem;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Ordered pairs `(i, k)` that appear in the same order in every admissible
/// causal ordering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixedPairSet {
    pairs: BTreeSet<(NodeId, NodeId)>,
}

impl FixedPairSet {
    pub fn contains(&self, i: NodeId, k: NodeId) -> bool {
        self.pairs.contains(&(i, k))
    }

    pub fn pairs(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.pairs
    }
}

/// Children of `i` whose edge function from `i` is nonlinear.
pub fn nonlinear_children(m: &Plsem, i: NodeId) -> Vec<NodeId> {
    m.dag()
        .children(i)
        .iter()
        .copied()
        .filter(|&j| !m.is_edge_linear(i, j).expect("edge exists"))
        .collect()
}

/// The set of order-fixed pairs: `(i, k)` for every `k` that descends from a
/// nonlinear child of `i`.
pub fn fixed_pairs(m: &Plsem) -> FixedPairSet {
    let mut pairs = BTreeSet::new();
    for i in 1..=m.p() {
        for j in nonlinear_children(m, i) {
            for k in m.dag().descendants(j) {
                pairs.insert((i, k));
            }
        }
    }
    FixedPairSet { pairs }
}

/// The maximally oriented representative of the model's equivalence class,
/// computed with exact orientation decisions: a tested orientation `i -> j`
/// is kept iff `(i, j)` is order-fixed.
pub fn oracle_gdpx(m: &Plsem) -> Pdag {
    let fixed = fixed_pairs(m);
    let decide = |_: &Pdag, i: NodeId, j: NodeId, _: &[NodeId]| {
        Ok(if fixed.contains(i, j) {
            (Verdict::Keep, f64::INFINITY)
        } else {
            (Verdict::Undirect, 0.0)
        })
    };
    estimators::compute_gdpx_with(m.dag(), decide)
        .expect("exact decisions cannot fail")
        .0
}

/// All DAGs reachable from the model by sequences of covered linear edge
/// reversals, each visited once, carrying the transformed model so that edge
/// linearity is always judged in the current DAG. Result is sorted by edge
/// list.
pub fn oracle_enumerate(m: &Plsem, cap: usize) -> Result<Vec<Dag>> {
    Ok(enumerate_models(m, cap)?
        .into_values()
        .map(|model| model.dag().clone())
        .collect())
}

/// Breadth-first search over covered linear edge reversals, returning the
/// visited models keyed by their sorted edge lists.
pub(crate) fn enumerate_models(
    m: &Plsem,
    cap: usize,
) -> Result<BTreeMap<Vec<(NodeId, NodeId)>, Plsem>> {
    let mut seen: BTreeMap<Vec<(NodeId, NodeId)>, Plsem> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(m.dag().edges(), m.clone());
    queue.push_back(m.clone());
    while let Some(cur) = queue.pop_front() {
        for (i, j) in cur.dag().edges() {
            if !cur.dag().is_covered(i, j)? || !cur.is_edge_linear(i, j)? {
                continue;
            }
            let next = cur.reverse_covered_linear_edge(i, j)?;
            let key = next.dag().edges();
            if !seen.contains_key(&key) {
                if seen.len() + 1 > cap {
                    return Err(Error::CapExceeded(cap));
                }
                seen.insert(key, next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}
