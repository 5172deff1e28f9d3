//! Tsallis-q entropy and its q → 1 limit, the von Neumann entropy.
//!
//! For a density matrix ρ with spectrum {λ}, the Tsallis-q entropy is
//! `T_q(ρ) = (1 − Σ λ^q)/(q − 1)` for q > 0, q ≠ 1, and
//! `S(ρ) = −Σ λ ln λ` at q = 1 (natural logarithm throughout). Indices
//! within [`Q_LIMIT_WINDOW`] of 1 are evaluated with the q = 1 formula,
//! since the generic expression loses all precision there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::matrix::herm_eigs;
use crate::qmath::state::DensityMatrix;

/// Half-width of the window around q = 1 treated as the von Neumann limit.
pub const Q_LIMIT_WINDOW: f64 = 1e-6;

/// A validated entropic index q > 0.
///
/// Carrying the index as a type means the q > 0 domain check happens once;
/// every formula downstream can branch on [`is_limit`](Self::is_limit)
/// instead of re-validating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntropicIndex(f64);

impl EntropicIndex {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::QOutOfRange { q, allowed: "(0, ∞)".into() });
        }
        Ok(Self(q))
    }

    pub fn q(self) -> f64 {
        self.0
    }

    /// True when |q − 1| < [`Q_LIMIT_WINDOW`]; such indices use the q = 1
    /// closed forms.
    pub fn is_limit(self) -> bool {
        (self.0 - 1.0).abs() < Q_LIMIT_WINDOW
    }
}

impl TryFrom<f64> for EntropicIndex {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

/// `T_q(ρ)`; reduces to [`von_neumann`] inside the q = 1 window.
pub fn tsallis_entropy(rho: &DensityMatrix, q: EntropicIndex) -> f64 {
    let (eigs, _) = herm_eigs(rho.matrix()).expect("density matrix is Hermitian");
    tsallis_from_spectrum(&eigs, q)
}

/// `S(ρ) = −tr ρ ln ρ`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    let (eigs, _) = herm_eigs(rho.matrix()).expect("density matrix is Hermitian");
    von_neumann_from_spectrum(&eigs)
}

/// Entropy from a spectrum whose tiny negative entries are numerical noise.
pub(crate) fn tsallis_from_spectrum(eigs: &[f64], q: EntropicIndex) -> f64 {
    if q.is_limit() {
        return von_neumann_from_spectrum(eigs);
    }
    let qv = q.q();
    let sum: f64 = eigs.iter().map(|&l| l.max(0.0).powf(qv)).sum();
    ((1.0 - sum) / (qv - 1.0)).max(0.0)
}

pub(crate) fn von_neumann_from_spectrum(eigs: &[f64]) -> f64 {
    let s: f64 = eigs
        .iter()
        .map(|&l| {
            let l = l.max(0.0);
            if l > 0.0 { -l * l.ln() } else { 0.0 }
        })
        .sum();
    s.max(0.0)
}
