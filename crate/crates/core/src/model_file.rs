//! JSON model files.
//!
//! ```json
//! {
//!   "p": 3,
//!   "mu": [0.0, 0.0, 0.0],
//!   "sigma2": [1.0, 1.0, 1.0],
//!   "edges": [
//!     { "from": 1, "to": 2,
//!       "terms": [ { "kind": "power", "k": 2, "weight": 1.0 },
//!                  { "kind": "identity", "weight": 1.0 } ] }
//!   ]
//! }
//! ```
//!
//! Term kinds: `identity`, `power` (field `k`), `cos` and `tanh`
//! (fields `c1`, `c2`).

use crate::error::{Error, Result};
use crate::func::{EdgeFunction, FunctionAtom};
use crate::graph::{Dag, NodeId};
use crate::model::Plsem;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Serialize, Deserialize)]
struct ModelSpec {
    p: u32,
    mu: Vec<f64>,
    sigma2: Vec<f64>,
    edges: Vec<EdgeSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeSpec {
    from: NodeId,
    to: NodeId,
    terms: Vec<TermSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermSpec {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c2: Option<f64>,
    weight: f64,
}

fn atom_from_spec(t: &TermSpec) -> Result<FunctionAtom> {
    let missing = |what: &str| Error::Parse(format!("term kind {:?} requires field {what}", t.kind));
    let atom = match t.kind.as_str() {
        "identity" => FunctionAtom::Identity,
        "power" => FunctionAtom::Power(t.k.ok_or_else(|| missing("k"))?),
        "cos" => FunctionAtom::CosWave {
            c1: t.c1.ok_or_else(|| missing("c1"))?,
            c2: t.c2.ok_or_else(|| missing("c2"))?,
        },
        "tanh" => FunctionAtom::TanhWave {
            c1: t.c1.ok_or_else(|| missing("c1"))?,
            c2: t.c2.ok_or_else(|| missing("c2"))?,
        },
        other => return Err(Error::Parse(format!("unknown term kind {other:?}"))),
    };
    atom.validate()?;
    Ok(atom)
}

fn spec_from_atom(weight: f64, atom: &FunctionAtom) -> TermSpec {
    let (kind, k, c1, c2) = match *atom {
        FunctionAtom::Identity => ("identity", None, None, None),
        FunctionAtom::Power(k) => ("power", Some(k), None, None),
        FunctionAtom::CosWave { c1, c2 } => ("cos", None, Some(c1), Some(c2)),
        FunctionAtom::TanhWave { c1, c2 } => ("tanh", None, Some(c1), Some(c2)),
    };
    TermSpec {
        kind: kind.to_string(),
        k,
        c1,
        c2,
        weight,
    }
}

pub fn to_json(model: &Plsem) -> String {
    let edges = model
        .dag()
        .edges()
        .into_iter()
        .map(|(i, j)| EdgeSpec {
            from: i,
            to: j,
            terms: model
                .edge_function(i, j)
                .expect("edge exists")
                .terms()
                .iter()
                .map(|(w, a)| spec_from_atom(*w, a))
                .collect(),
        })
        .collect();
    let spec = ModelSpec {
        p: model.p(),
        mu: (1..=model.p()).map(|j| model.mu(j)).collect(),
        sigma2: (1..=model.p()).map(|j| model.sigma2(j)).collect(),
        edges,
    };
    serde_json::to_string_pretty(&spec).expect("model spec serializes")
}

pub fn from_json(text: &str) -> Result<Plsem> {
    let spec: ModelSpec = serde_json::from_str(text)?;
    let mut edges = Vec::with_capacity(spec.edges.len());
    let mut f = BTreeMap::new();
    for e in &spec.edges {
        edges.push((e.from, e.to));
        let terms = e
            .terms
            .iter()
            .map(|t| Ok((t.weight, atom_from_spec(t)?)))
            .collect::<Result<Vec<_>>>()?;
        f.insert((e.from, e.to), EdgeFunction::new(terms)?);
    }
    let dag = Dag::new(spec.p, &edges)?;
    Plsem::new(dag, spec.mu, spec.sigma2, f)
}

pub fn read(path: &std::path::Path) -> Result<Plsem> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write(path: &std::path::Path, model: &Plsem) -> Result<()> {
    Ok(std::fs::write(path, to_json(model))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{seven_node_demo, triangle_mixed};

    #[test]
    fn json_round_trip() {
        for m in [triangle_mixed(), seven_node_demo()] {
            let back = from_json(&to_json(&m)).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn shipped_fixtures_match_test_models() {
        use crate::testutil;
        let load = |name: &str| {
            let path: std::path::PathBuf =
                [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
                    .iter()
                    .collect();
            read(&path).unwrap()
        };
        assert_eq!(load("triangle_mixed.json"), testutil::triangle_mixed());
        assert_eq!(load("chain3_cancel.json"), testutil::cancel_chain3());
        assert_eq!(load("diamond4_cancel.json"), testutil::cancel_diamond4());
        assert_eq!(load("four_node_class3.json"), testutil::four_node_class3());
        assert_eq!(load("seven_node_demo.json"), testutil::seven_node_demo());
    }

    #[test]
    fn json_rejects_bad_terms() {
        let text = r#"{"p":2,"mu":[0,0],"sigma2":[1,1],
            "edges":[{"from":1,"to":2,"terms":[{"kind":"power","weight":1.0}]}]}"#;
        assert!(from_json(text).is_err());
        let text = r#"{"p":2,"mu":[0,0],"sigma2":[1,1],
            "edges":[{"from":1,"to":2,"terms":[{"kind":"spline","weight":1.0}]}]}"#;
        assert!(from_json(text).is_err());
    }
}
