//! Model fixtures shared across unit tests.

use crate::func::{EdgeFunction, FunctionAtom};
use crate::graph::Dag;
use crate::model::Plsem;
use std::collections::BTreeMap;

/// Three-node chain with cancelling quadratic effects:
/// X1 = e1, X2 = X1^2 + X1 + e2, X3 = X2 - X1^2 + e3, unit variances.
pub(crate) fn cancel_chain3() -> Plsem {
    let dag = Dag::new(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
    let mut f = BTreeMap::new();
    f.insert(
        (1, 2),
        EdgeFunction::new([(1.0, FunctionAtom::Power(2)), (1.0, FunctionAtom::Identity)]).unwrap(),
    );
    f.insert(
        (1, 3),
        EdgeFunction::new([(-1.0, FunctionAtom::Power(2))]).unwrap(),
    );
    f.insert((2, 3), EdgeFunction::linear(1.0));
    Plsem::new(dag, vec![0.0; 3], vec![1.0; 3], f).unwrap()
}

/// Four-node graph with a cancelling path pair:
/// X1 = e1, X2 = X1^2 + e2, X3 = X2 + e3, X4 = X3 - X2 + e4.
pub(crate) fn cancel_diamond4() -> Plsem {
    let dag = Dag::new(4, &[(1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
    let mut f = BTreeMap::new();
    f.insert(
        (1, 2),
        EdgeFunction::new([(1.0, FunctionAtom::Power(2))]).unwrap(),
    );
    f.insert((2, 3), EdgeFunction::linear(1.0));
    f.insert((2, 4), EdgeFunction::linear(-1.0));
    f.insert((3, 4), EdgeFunction::linear(1.0));
    Plsem::new(dag, vec![0.0; 4], vec![1.0; 4], f).unwrap()
}

/// Faithful three-node triangle whose equivalence class has exactly two
/// members: X1 = e1, X2 = X1^2 + X1 + e2, X3 = X1 + X2 + e3.
pub(crate) fn triangle_mixed() -> Plsem {
    let dag = Dag::new(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
    let mut f = BTreeMap::new();
    f.insert(
        (1, 2),
        EdgeFunction::new([(1.0, FunctionAtom::Power(2)), (1.0, FunctionAtom::Identity)]).unwrap(),
    );
    f.insert((1, 3), EdgeFunction::linear(1.0));
    f.insert((2, 3), EdgeFunction::linear(1.0));
    Plsem::new(dag, vec![0.0; 3], vec![1.0; 3], f).unwrap()
}

/// Faithful four-node model whose class has three members:
/// X3 = e3, X1 = 0.8 X3 + e1, X2 = X1^2 + 0.7 X3 + e2, X4 = 0.9 X2 + e4.
pub(crate) fn four_node_class3() -> Plsem {
    let dag = Dag::new(4, &[(3, 1), (3, 2), (1, 2), (2, 4)]).unwrap();
    let mut f = BTreeMap::new();
    f.insert((3, 1), EdgeFunction::linear(0.8));
    f.insert((3, 2), EdgeFunction::linear(0.7));
    f.insert(
        (1, 2),
        EdgeFunction::new([(1.0, FunctionAtom::Power(2))]).unwrap(),
    );
    f.insert((2, 4), EdgeFunction::linear(0.9));
    Plsem::new(
        dag,
        vec![0.0; 4],
        vec![0.5, 0.4, 1.0, 0.45],
        f,
    )
    .unwrap()
}

/// Seven-node walkthrough model: nonlinear 2 -> 3 and 4 -> 5, all other
/// edges linear.
pub(crate) fn seven_node_demo() -> Plsem {
    let dag = Dag::new(
        7,
        &[(1, 2), (2, 3), (4, 2), (4, 5), (6, 4), (6, 5), (5, 7)],
    )
    .unwrap();
    let mut f = BTreeMap::new();
    f.insert((1, 2), EdgeFunction::linear(1.1));
    f.insert(
        (2, 3),
        EdgeFunction::new([(1.5, FunctionAtom::TanhWave { c1: 1.5, c2: 0.1 })]).unwrap(),
    );
    f.insert((4, 2), EdgeFunction::linear(-0.8));
    f.insert(
        (4, 5),
        EdgeFunction::new([(1.5, FunctionAtom::CosWave { c1: 1.3, c2: 0.2 })]).unwrap(),
    );
    f.insert((6, 4), EdgeFunction::linear(0.9));
    f.insert((6, 5), EdgeFunction::linear(0.7));
    f.insert((5, 7), EdgeFunction::linear(1.2));
    Plsem::new(
        dag,
        vec![0.0; 7],
        vec![1.5, 0.3, 0.4, 0.35, 0.45, 1.2, 0.25],
        f,
    )
    .unwrap()
}
