//! Edge functions as weighted sums of atomic terms.
//!
//! The atom set (identity, integer powers, cosine and tanh waves) is closed
//! under the scalar combinations produced by covered linear edge reversals, so
//! those transforms stay exact instead of numerical.

use crate::error::{Error, Result};

/// Weights at or below this threshold count as zero when classifying an edge
/// function as linear or identically zero.
pub const LINEAR_TOL: f64 = 1e-10;

/// Combined weights at or below this threshold are rounding residue of an
/// exact cancellation and are pruned outright.
const ZERO_WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionAtom {
    Identity,
    /// `x^k` with `k >= 2`.
    Power(u32),
    /// `cos(c1 * (x - c2))` with `c1 > 0`.
    CosWave { c1: f64, c2: f64 },
    /// `tanh(c1 * (x - c2))` with `c1 > 0`.
    TanhWave { c1: f64, c2: f64 },
}

impl FunctionAtom {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FunctionAtom::Identity => Ok(()),
            FunctionAtom::Power(k) if k >= 2 => Ok(()),
            FunctionAtom::Power(k) => Err(Error::InvalidAtom(format!(
                "power exponent must be >= 2, got {k}"
            ))),
            FunctionAtom::CosWave { c1, .. } | FunctionAtom::TanhWave { c1, .. } if c1 > 0.0 => {
                Ok(())
            }
            _ => Err(Error::InvalidAtom("wave frequency c1 must be > 0".into())),
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            FunctionAtom::Identity => x,
            FunctionAtom::Power(k) => x.powi(k as i32),
            FunctionAtom::CosWave { c1, c2 } => (c1 * (x - c2)).cos(),
            FunctionAtom::TanhWave { c1, c2 } => (c1 * (x - c2)).tanh(),
        }
    }

    /// Canonical sort key: kind rank, then parameters (floats by bit
    /// pattern; only determinism matters here).
    fn sort_key(&self) -> (u8, u64, u64) {
        match *self {
            FunctionAtom::Identity => (0, 0, 0),
            FunctionAtom::Power(k) => (1, k as u64, 0),
            FunctionAtom::CosWave { c1, c2 } => (2, c1.to_bits(), c2.to_bits()),
            FunctionAtom::TanhWave { c1, c2 } => (3, c1.to_bits(), c2.to_bits()),
        }
    }

    /// Atoms combine only when structurally identical (same kind, same
    /// parameters). Wave atoms with different parameters never cancel.
    fn same_shape(&self, other: &FunctionAtom) -> bool {
        match (*self, *other) {
            (FunctionAtom::Identity, FunctionAtom::Identity) => true,
            (FunctionAtom::Power(a), FunctionAtom::Power(b)) => a == b,
            (FunctionAtom::CosWave { c1: a1, c2: a2 }, FunctionAtom::CosWave { c1: b1, c2: b2 }) => {
                a1 == b1 && a2 == b2
            }
            (
                FunctionAtom::TanhWave { c1: a1, c2: a2 },
                FunctionAtom::TanhWave { c1: b1, c2: b2 },
            ) => a1 == b1 && a2 == b2,
            _ => false,
        }
    }
}

/// `f(x) = sum_m w_m * atom_m(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction {
    terms: Vec<(f64, FunctionAtom)>,
}

impl EdgeFunction {
    pub fn new<I: IntoIterator<Item = (f64, FunctionAtom)>>(terms: I) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        for (_, atom) in &terms {
            atom.validate()?;
        }
        Ok(EdgeFunction { terms }.combined())
    }

    /// `a * x`.
    pub fn linear(a: f64) -> Self {
        EdgeFunction {
            terms: vec![(a, FunctionAtom::Identity)],
        }
    }

    pub fn terms(&self) -> &[(f64, FunctionAtom)] {
        &self.terms
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|(w, a)| w * a.eval(x)).sum()
    }

    /// Like atoms merged, cancelled terms pruned, canonical term order.
    pub fn combined(&self) -> EdgeFunction {
        let mut acc: Vec<(f64, FunctionAtom)> = Vec::with_capacity(self.terms.len());
        for &(w, atom) in &self.terms {
            match acc.iter_mut().find(|(_, a)| a.same_shape(&atom)) {
                Some(slot) => slot.0 += w,
                None => acc.push((w, atom)),
            }
        }
        acc.retain(|&(w, _)| w.abs() > ZERO_WEIGHT_TOL);
        acc.sort_by_key(|&(_, a)| a.sort_key());
        EdgeFunction { terms: acc }
    }

    /// `a * f`.
    pub fn scaled(&self, a: f64) -> EdgeFunction {
        EdgeFunction {
            terms: self.terms.iter().map(|&(w, at)| (a * w, at)).collect(),
        }
        .combined()
    }

    /// `f + g`.
    pub fn plus(&self, other: &EdgeFunction) -> EdgeFunction {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        EdgeFunction { terms }.combined()
    }

    /// Total weight on the identity atom after combination.
    pub fn linear_coefficient(&self) -> f64 {
        self.combined()
            .terms
            .iter()
            .find(|(_, a)| matches!(a, FunctionAtom::Identity))
            .map_or(0.0, |&(w, _)| w)
    }

    /// True iff every non-identity atom has combined weight within
    /// [`LINEAR_TOL`] of zero.
    pub fn is_linear(&self) -> bool {
        self.combined()
            .terms
            .iter()
            .all(|(w, a)| matches!(a, FunctionAtom::Identity) || w.abs() <= LINEAR_TOL)
    }

    /// True iff all combined weights are within [`LINEAR_TOL`] of zero.
    pub fn is_zero(&self) -> bool {
        self.combined().terms.iter().all(|(w, _)| w.abs() <= LINEAR_TOL)
    }
}
