//! Node scores from additive spline regression.
//!
//! Each smooth term uses a natural cubic spline basis with knots at
//! equispaced empirical quantiles (inverse ECDF, endpoints included), so the
//! fitted functions are linear beyond the boundary knots. Fits are plain
//! least squares; rank deficiency falls back to the minimum-norm solution via
//! an eigendecomposition of the Gram matrix. The residual scale uses the
//! maximum-likelihood divisor `n`, and a node's score is `log(sigma_hat)`.

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotRule {
    /// Interior knots at equispaced empirical quantiles.
    Quantile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisConfig {
    /// Basis functions per smooth term; must be at least 3.
    pub dim: usize,
    pub knot_rule: KnotRule,
}

impl BasisConfig {
    pub fn with_dim(dim: usize) -> Self {
        BasisConfig {
            dim,
            knot_rule: KnotRule::Quantile,
        }
    }
}

impl Default for BasisConfig {
    fn default() -> Self {
        BasisConfig::with_dim(6)
    }
}

#[derive(Debug, Clone)]
pub struct NodeFit {
    /// MLE residual standard deviation, `sqrt(RSS / n)`.
    pub sigma_hat: f64,
    /// `log(sigma_hat)`.
    pub score: f64,
    pub coefficients: Vec<f64>,
}

/// Inverse-ECDF quantile `x_(ceil(n q))` of already sorted data, `q in (0, 1)`.
/// This estimator is invariant under duplicating every observation.
fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let k = (n as f64 * q).ceil() as usize;
    sorted[k.clamp(1, n) - 1]
}

/// Natural cubic spline basis: `dim` columns (excluding the intercept),
/// centered to mean zero and scaled to unit RMS. Interior knots sit at the
/// `l/dim` quantiles, boundary knots at the data range endpoints; the span is
/// linear outside the boundary.
pub fn spline_basis(x: &[f64], cfg: &BasisConfig) -> Result<DMatrix<f64>> {
    let n = x.len();
    let dim = cfg.dim;
    if dim < 3 {
        return Err(Error::DegenerateInput(format!(
            "basis dim must be >= 3, got {dim}"
        )));
    }
    if n < dim + 2 {
        return Err(Error::DegenerateInput(format!(
            "need at least dim + 2 = {} observations, got {n}",
            dim + 2
        )));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let lo = sorted[0];
    let hi = sorted[n - 1];
    if lo == hi {
        return Err(Error::DegenerateInput("column is constant".into()));
    }

    // knots: lo, dim - 1 interior quantiles, hi
    let nknots = dim + 1;
    let mut knots = Vec::with_capacity(nknots);
    knots.push(lo);
    for l in 1..dim {
        knots.push(sorted_quantile(&sorted, l as f64 / dim as f64));
    }
    knots.push(hi);

    let cube_plus = |v: f64| if v > 0.0 { v * v * v } else { 0.0 };
    // d_k(t) = [(t - knot_k)_+^3 - (t - hi)_+^3] / (hi - knot_k); zero when
    // ties push knot_k onto the upper boundary (the column then drops to the
    // minimum-norm solve as an exact duplicate).
    let d = |k: usize, t: f64| -> f64 {
        let denom = hi - knots[k];
        if denom == 0.0 {
            return 0.0;
        }
        (cube_plus(t - knots[k]) - cube_plus(t - hi)) / denom
    };

    // columns: x itself, then d_m - d_{dim-1} for the interior knots
    let mut basis = DMatrix::zeros(n, dim);
    for (r, &t) in x.iter().enumerate() {
        basis[(r, 0)] = t;
        for m in 1..dim {
            basis[(r, m)] = d(m - 1, t) - d(dim - 1, t);
        }
    }

    for c in 0..dim {
        let mut col = basis.column_mut(c);
        let mean = col.iter().sum::<f64>() / n as f64;
        col.iter_mut().for_each(|v| *v -= mean);
        let rms = (col.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        if rms > 0.0 {
            col.iter_mut().for_each(|v| *v /= rms);
        }
    }
    Ok(basis)
}

/// Minimum-norm least squares through the Gram matrix: eigenpairs of `X^T X`
/// below a relative threshold are discarded, which equals applying the
/// pseudo-inverse of `X`.
fn lstsq(design: &DMatrix<f64>, y: &DVector<f64>) -> Vec<f64> {
    let gram = design.transpose() * design;
    let xty = design.transpose() * y;
    let eig = gram.symmetric_eigen();
    let max_eig = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let thresh = max_eig * 1e-12;
    let mut beta = DVector::zeros(design.ncols());
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > thresh {
            let v = eig.eigenvectors.column(k);
            beta += v * (v.dot(&xty) / lambda);
        }
    }
    beta.iter().copied().collect()
}

/// Least squares of `y` on an intercept plus one spline block per parent.
/// With no parents this reduces to the standard deviation of `y` about its
/// mean (divisor `n`).
pub fn fit_additive_node(y: &[f64], parents: &[&[f64]], cfg: &BasisConfig) -> Result<NodeFit> {
    let n = y.len();
    if parents.iter().any(|c| c.len() != n) {
        return Err(Error::DimensionMismatch(
            "parent columns must match the response length".into(),
        ));
    }
    let ncoef = 1 + parents.len() * cfg.dim;
    if n <= ncoef {
        return Err(Error::DegenerateInput(format!(
            "need more than {ncoef} observations, got {n}"
        )));
    }

    let mut design = DMatrix::zeros(n, ncoef);
    design.column_mut(0).fill(1.0);
    for (b, col) in parents.iter().enumerate() {
        let block = spline_basis(col, cfg)?;
        design
            .view_mut((0, 1 + b * cfg.dim), (n, cfg.dim))
            .copy_from(&block);
    }

    let yv = DVector::from_column_slice(y);
    let coefficients = lstsq(&design, &yv);
    let fitted = design * DVector::from_column_slice(&coefficients);
    let rss: f64 = yv
        .iter()
        .zip(fitted.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    // floor keeps the score finite on interpolating fits
    let sigma_hat = (rss / n as f64).max(f64::MIN_POSITIVE).sqrt();
    Ok(NodeFit {
        sigma_hat,
        score: sigma_hat.ln(),
        coefficients,
    })
}

/// Score difference of the two orientations of a covered edge `i -> j` with
/// cover `S`: four additive regressions,
/// `[log s_i(S + j) + log s_j(S)] - [log s_i(S) + log s_j(S + i)]`,
/// i.e. the score of the reversed orientation minus the score of the current
/// one. Positive values favour keeping `i -> j`.
pub fn covered_reversal_delta(
    data: &DataMatrix,
    i: NodeId,
    j: NodeId,
    cover: &[NodeId],
    cfg: &BasisConfig,
) -> Result<f64> {
    if i == j || cover.contains(&i) || cover.contains(&j) {
        return Err(Error::DegenerateInput(
            "cover must exclude both endpoints".into(),
        ));
    }
    let cols = |extra: Option<NodeId>| -> Vec<&[f64]> {
        let mut ids: Vec<NodeId> = cover.to_vec();
        if let Some(e) = extra {
            ids.push(e);
        }
        ids.sort_unstable();
        ids.iter().map(|&s| data.col(s)).collect()
    };
    let s_i_cover = fit_additive_node(data.col(i), &cols(None), cfg)?.score;
    let s_j_cover_i = fit_additive_node(data.col(j), &cols(Some(i)), cfg)?.score;
    let s_i_cover_j = fit_additive_node(data.col(i), &cols(Some(j)), cfg)?.score;
    let s_j_cover = fit_additive_node(data.col(j), &cols(None), cfg)?.score;
    Ok((s_i_cover_j + s_j_cover) - (s_i_cover + s_j_cover_i))
}
