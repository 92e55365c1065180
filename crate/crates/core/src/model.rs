//! Partially linear additive structural equation models with Gaussian noise.
//!
//! A model assigns each node an intercept `mu_j`, a noise variance
//! `sigma2_j > 0`, and each edge `i -> j` a non-zero [`EdgeFunction`]
//! `f_{j,i}`, so that `X_j = mu_j + sum_{i in pa(j)} f_{j,i}(X_i) + eps_j`
//! with `eps_j ~ N(0, sigma2_j)`.
//!
//! Edge functions are not required to be mean-centered; the split between a
//! function's constant level and the intercept is immaterial to the joint
//! distribution, which is the contract every operation here works against.

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::func::EdgeFunction;
use crate::graph::{Dag, NodeId};
use crate::rng::Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Plsem {
    dag: Dag,
    mu: Vec<f64>,
    sigma2: Vec<f64>,
    f: BTreeMap<(NodeId, NodeId), EdgeFunction>,
}

impl Plsem {
    pub fn new(
        dag: Dag,
        mu: Vec<f64>,
        sigma2: Vec<f64>,
        f: BTreeMap<(NodeId, NodeId), EdgeFunction>,
    ) -> Result<Self> {
        let p = dag.p() as usize;
        if p == 0 {
            return Err(Error::InvalidModel("model needs at least one node".into()));
        }
        if mu.len() != p || sigma2.len() != p {
            return Err(Error::DimensionMismatch(format!(
                "mu/sigma2 length must be p = {p}"
            )));
        }
        if let Some((j, &s)) = sigma2.iter().enumerate().find(|(_, &s)| s.is_nan() || s <= 0.0) {
            return Err(Error::InvalidModel(format!(
                "sigma2[{}] = {s} must be > 0",
                j + 1
            )));
        }
        let edges: Vec<_> = dag.edges();
        if f.len() != edges.len() || edges.iter().any(|e| !f.contains_key(e)) {
            return Err(Error::InvalidModel(
                "edge functions must be defined exactly on the DAG's edges".into(),
            ));
        }
        for ((i, j), func) in &f {
            if func.is_zero() {
                return Err(Error::InvalidModel(format!(
                    "edge function on {i} -> {j} is identically zero"
                )));
            }
        }
        Ok(Plsem { dag, mu, sigma2, f })
    }

    pub fn p(&self) -> u32 {
        self.dag.p()
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn mu(&self, j: NodeId) -> f64 {
        self.mu[(j - 1) as usize]
    }

    pub fn sigma2(&self, j: NodeId) -> f64 {
        self.sigma2[(j - 1) as usize]
    }

    pub fn edge_function(&self, i: NodeId, j: NodeId) -> Result<&EdgeFunction> {
        self.f
            .get(&(i, j))
            .ok_or(Error::NoSuchEdge { from: i, to: j })
    }

    /// The conditional mean of node `j` given parent values taken from `x`.
    fn node_mean(&self, j: NodeId, x: &[f64]) -> f64 {
        let mut m = self.mu(j);
        for &i in self.dag.parents(j) {
            m += self.f[&(i, j)].eval(x[(i - 1) as usize]);
        }
        m
    }

    /// The structural map sending an observation to its scaled residuals:
    /// component `j` is `(x_j - mu_j - sum f_{j,i}(x_i)) / sigma_j`.
    pub fn evaluate_f_at(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.p() as usize, "point has wrong dimension");
        (1..=self.p())
            .map(|j| (x[(j - 1) as usize] - self.node_mean(j, x)) / self.sigma2(j).sqrt())
            .collect()
    }

    /// Ancestral sampling in topological order; deterministic per seed.
    pub fn sample(&self, n: usize, seed: u64) -> DataMatrix {
        assert!(n >= 1, "need at least one sample");
        let order = self.dag.topological_order();
        let mut rng = Rng::new(seed);
        let p = self.p() as usize;
        let mut cols = vec![Vec::with_capacity(n); p];
        let mut row = vec![0.0; p];
        for _ in 0..n {
            for &j in &order {
                let sd = self.sigma2(j).sqrt();
                let v = self.node_mean(j, &row) + sd * rng.normal();
                row[(j - 1) as usize] = v;
                cols[(j - 1) as usize].push(v);
            }
        }
        DataMatrix::from_columns(cols).expect("columns are rectangular")
    }

    /// Joint Gaussian log density
    /// `sum_j [ -log(2 pi sigma2_j)/2 - (x_j - mu_j - sum f)^2 / (2 sigma2_j) ]`.
    pub fn log_density(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.p() as usize, "point has wrong dimension");
        let mut ld = 0.0;
        for j in 1..=self.p() {
            let s2 = self.sigma2(j);
            let r = x[(j - 1) as usize] - self.node_mean(j, x);
            ld += -0.5 * (2.0 * std::f64::consts::PI * s2).ln() - r * r / (2.0 * s2);
        }
        ld
    }

    /// Whether `f_{j,i}` is linear after combining like atoms.
    pub fn is_edge_linear(&self, i: NodeId, j: NodeId) -> Result<bool> {
        Ok(self.edge_function(i, j)?.is_linear())
    }

    /// Reverses a covered linear edge `i -> j`, rewriting the two incident
    /// node equations so that the joint distribution is unchanged.
    ///
    /// With linear coefficient `a`, cover `S = pa(i) = pa(j) \ {i}` and
    /// `tau2 = a^2 s_i^2 + s_j^2`, `beta = a s_i^2 / tau2`:
    ///
    /// * node `j`: `mu'_j = mu_j + a mu_i`, `f'_{j,s} = a f_{i,s} + f_{j,s}`,
    ///   `sigma'_j^2 = tau2`;
    /// * node `i`: `mu'_i = mu_i - beta mu'_j`, `f'_{i,j} = beta x`,
    ///   `f'_{i,s} = (1 - beta a) f_{i,s} - beta f_{j,s}`,
    ///   `sigma'_i^2 = s_i^2 s_j^2 / tau2`;
    /// * all other node equations carry over unchanged.
    ///
    /// Edge functions whose weights cancel exactly are dropped together with
    /// their edges.
    pub fn reverse_covered_linear_edge(&self, i: NodeId, j: NodeId) -> Result<Plsem> {
        if !self.dag.is_covered(i, j)? {
            return Err(Error::NotCovered(i, j));
        }
        let f_ji = self.edge_function(i, j)?;
        if !f_ji.is_linear() {
            return Err(Error::NotLinear(i, j));
        }
        let a = f_ji.linear_coefficient();
        if a == 0.0 {
            return Err(Error::ZeroCoefficient(i, j));
        }
        let cover: Vec<NodeId> = self.dag.parents(i).to_vec();

        let s_i2 = self.sigma2(i);
        let s_j2 = self.sigma2(j);
        let tau2 = a * a * s_i2 + s_j2;
        let beta = a * s_i2 / tau2;
        let nu2 = s_i2 * s_j2 / tau2;

        let mut mu = self.mu.clone();
        let mut sigma2 = self.sigma2.clone();
        let mu_j_new = self.mu(j) + a * self.mu(i);
        mu[(j - 1) as usize] = mu_j_new;
        mu[(i - 1) as usize] = self.mu(i) - beta * mu_j_new;
        sigma2[(j - 1) as usize] = tau2;
        sigma2[(i - 1) as usize] = nu2;

        let mut f = self.f.clone();
        f.remove(&(i, j));
        f.insert((j, i), EdgeFunction::linear(beta));
        for &s in &cover {
            let f_is = &self.f[&(s, i)];
            let f_js = &self.f[&(s, j)];
            let new_js = f_is.scaled(a).plus(f_js);
            let new_is = f_is.scaled(1.0 - beta * a).plus(&f_js.scaled(-beta));
            f.insert((s, j), new_js);
            f.insert((s, i), new_is);
        }
        // drop cancelled functions and rebuild the DAG from what is left
        f.retain(|_, func| !func.is_zero());
        let edges: Vec<(NodeId, NodeId)> = f.keys().copied().collect();
        let dag = Dag::new(self.p(), &edges)?;
        Plsem::new(dag, mu, sigma2, f)
    }

    /// Pointwise log-density comparison over a scaled standard-normal cloud
    /// (`x = 3 z`, `z ~ N(0, Id)`): true iff the maximum absolute difference
    /// over `npoints` points is at most `tol`.
    pub fn densities_equal(
        &self,
        other: &Plsem,
        npoints: usize,
        seed: u64,
        tol: f64,
    ) -> Result<bool> {
        if self.p() != other.p() {
            return Err(Error::DimensionMismatch(format!(
                "p = {} vs p = {}",
                self.p(),
                other.p()
            )));
        }
        let mut rng = Rng::new(seed);
        let p = self.p() as usize;
        let mut x = vec![0.0; p];
        for _ in 0..npoints {
            for slot in &mut x {
                *slot = 3.0 * rng.normal();
            }
            if (self.log_density(&x) - other.log_density(&x)).abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Structural view of a model as the map from observations to scaled
/// residuals. The model is recoverable from the view, so conversion is a
/// round-trip.
#[derive(Debug, Clone, PartialEq)]
pub struct PlsemFunction {
    model: Plsem,
}

impl PlsemFunction {
    pub fn new(model: Plsem) -> Self {
        PlsemFunction { model }
    }

    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.model.evaluate_f_at(x)
    }

    /// `sigma_j`, the reciprocal of the `j`-th diagonal slope of the map.
    pub fn sigma(&self, j: NodeId) -> f64 {
        self.model.sigma2(j).sqrt()
    }

    pub fn model(&self) -> &Plsem {
        &self.model
    }

    pub fn into_model(self) -> Plsem {
        self.model
    }
}
