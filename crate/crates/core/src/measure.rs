//! Tsallis-q entanglement measures.
//!
//! - Pure states: `T_q` of the reduced state across the cut ([`tq_pure`]);
//!   on 2 ⊗ d cuts this provably equals `g_q(C)`, and both routes are
//!   evaluated and compared on every call.
//! - Two-qubit mixed states: the closed form `g_q(C(ρ))` ([`tq_2q`]),
//!   proven for q ∈ [1, 4]; the numerically tame extension to
//!   q ∈ [0.7, 4.2] sits behind the separate [`tq_2q_extended`] entry
//!   point so the validated range is never widened silently.
//! - Assistance: the closed-form lower bound `g_q(Cₐ(ρ))`
//!   ([`teoa_2q_lower`]) and optimizer bounds from the convex roof
//!   ([`tq_mixed_bound`], [`teoa_mixed_bound`]).

use serde::{Deserialize, Serialize};

use crate::concurrence::{coa_2q, concurrence_2q, concurrence_pure};
use crate::entropy::{tsallis_from_spectrum, EntropicIndex};
use crate::error::{Error, Result};
use crate::gq::{eof_of_concurrence, g_q};
use crate::qmath::matrix::herm_eigs;
use crate::qmath::state::{DensityMatrix, PureState, QubitCut};
use crate::roof::{roof_extremize, Direction, RoofBudget, RoofMeasure, RoofResult};

/// q range on which the two-qubit closed form is proven.
pub const Q_PROVEN: (f64, f64) = (1.0, 4.0);

/// Wider q range available behind [`tq_2q_extended`].
pub const Q_EXTENDED: (f64, f64) = (0.7, 4.2);

/// Agreement required between the entropy route and the `g_q(C)` route in
/// [`tq_pure`] on 2 ⊗ d cuts.
pub const DUAL_ROUTE_TOL: f64 = 1e-9;

/// How a [`MeasureValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact evaluation on a pure state.
    PureExact,
    /// Exact two-qubit closed form.
    TwoQubitClosedForm,
    /// Closed form that bounds (but need not equal) the true value.
    ClosedFormBound,
    /// One-sided bound from the convex-roof optimizer.
    RoofBound,
}

/// A measure evaluation: the number plus how it was computed and at which q.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
    pub q: f64,
}

/// Tsallis-q entanglement of a pure state across `cut`: `T_q` of the
/// side-A marginal. On 2 ⊗ d cuts the closed form `g_q(C)` is computed as
/// well and the two routes must agree to [`DUAL_ROUTE_TOL`].
pub fn tq_pure(psi: &PureState, cut: &QubitCut, q: EntropicIndex) -> Result<MeasureValue> {
    if cut.n_qubits() != psi.n_qubits() {
        return Err(Error::InvalidCut(format!(
            "cut is for {} qubits but the state has {}",
            cut.n_qubits(),
            psi.n_qubits()
        )));
    }
    let marginal = psi.reduced(cut.side_a())?;
    let (eigs, _) = herm_eigs(marginal.matrix()).expect("marginal is Hermitian");
    let value = tsallis_from_spectrum(&eigs, q);

    if cut.is_two_by_d() {
        let c = concurrence_pure(psi, cut)?;
        let via_curve = g_q(c.min(1.0), q)?;
        assert!(
            (value - via_curve).abs() <= DUAL_ROUTE_TOL,
            "entropy route {value} and g_q(C) route {via_curve} disagree beyond {DUAL_ROUTE_TOL}"
        );
    }
    Ok(MeasureValue { value, method: Method::PureExact, q: q.q() })
}

/// Two-qubit closed form `g_q(C(ρ))` on the proven range q ∈ [1, 4].
pub fn tq_2q(rho: &DensityMatrix, q: EntropicIndex) -> Result<MeasureValue> {
    check_range(q, Q_PROVEN, "tq_2q (use tq_2q_extended for [0.7, 4.2])")?;
    closed_form(rho, q)
}

/// The same closed form on the wider range q ∈ [0.7, 4.2]. Callers opt in
/// explicitly; outside the proven range the formula is an extrapolation.
pub fn tq_2q_extended(rho: &DensityMatrix, q: EntropicIndex) -> Result<MeasureValue> {
    check_range(q, Q_EXTENDED, "tq_2q_extended")?;
    closed_form(rho, q)
}

/// Entanglement of formation `ℰ(C(ρ))`, the q → 1 limit of [`tq_2q`].
pub fn eof_2q(rho: &DensityMatrix) -> Result<MeasureValue> {
    let c = concurrence_2q(rho)?;
    Ok(MeasureValue {
        value: eof_of_concurrence(c)?,
        method: Method::TwoQubitClosedForm,
        q: 1.0,
    })
}

/// Closed-form lower bound `g_q(Cₐ(ρ))` on the Tsallis-q entanglement of
/// assistance of a two-qubit state, q ∈ [1, 4].
pub fn teoa_2q_lower(rho: &DensityMatrix, q: EntropicIndex) -> Result<MeasureValue> {
    check_range(q, Q_PROVEN, "teoa_2q_lower")?;
    let ca = coa_2q(rho)?;
    Ok(MeasureValue { value: g_q(ca, q)?, method: Method::ClosedFormBound, q: q.q() })
}

/// Optimizer upper bound on the convex-roof `T_q` of a mixed state across
/// `cut`: the best decomposition found can only over-estimate the true
/// minimum.
pub fn tq_mixed_bound(
    rho: &DensityMatrix,
    cut: &QubitCut,
    q: EntropicIndex,
    budget: &RoofBudget,
    seed: u64,
) -> Result<MeasureValue> {
    let res = roof_extremize(rho, cut, RoofMeasure::TsallisQ(q), Direction::Min, budget, seed)?;
    Ok(bound_value(res, q))
}

/// Optimizer lower bound on the Tsallis-q entanglement of assistance (the
/// roof maximum) of a mixed state across `cut`.
pub fn teoa_mixed_bound(
    rho: &DensityMatrix,
    cut: &QubitCut,
    q: EntropicIndex,
    budget: &RoofBudget,
    seed: u64,
) -> Result<MeasureValue> {
    let res = roof_extremize(rho, cut, RoofMeasure::TsallisQ(q), Direction::Max, budget, seed)?;
    Ok(bound_value(res, q))
}

fn bound_value(res: RoofResult, q: EntropicIndex) -> MeasureValue {
    MeasureValue { value: res.value, method: Method::RoofBound, q: q.q() }
}

fn closed_form(rho: &DensityMatrix, q: EntropicIndex) -> Result<MeasureValue> {
    let c = concurrence_2q(rho)?;
    Ok(MeasureValue { value: g_q(c, q)?, method: Method::TwoQubitClosedForm, q: q.q() })
}

fn check_range(q: EntropicIndex, range: (f64, f64), what: &str) -> Result<()> {
    let qv = q.q();
    if qv < range.0 || qv > range.1 {
        return Err(Error::QOutOfRange {
            q: qv,
            allowed: format!("[{}, {}] for {what}", range.0, range.1),
        });
    }
    Ok(())
}
