//! Concurrence: the pure-state formula for arbitrary cuts and the two-qubit
//! closed forms for concurrence and concurrence of assistance.
//!
//! For a pure state across a cut A|B, `C = √(2(1 − tr ρ_A²))`. For a
//! two-qubit mixed state the spin-flipped operator
//! `ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy)` yields the spectrum
//! `λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄` of `√(√ρ ρ̃ √ρ)`, from which
//! `C = max(0, λ₁ − λ₂ − λ₃ − λ₄)` and the concurrence of assistance is
//! `Cₐ = λ₁ + λ₂ + λ₃ + λ₄`.

use crate::error::{Error, Result};
use crate::qmath::matrix::{dagger, herm_eigs, kron, pauli_y, psd_sqrt, CMat};
use crate::qmath::state::{PureState, QubitCut};

/// Spin-flip spectrum values in `(-SPECTRUM_CLAMP, 0)` are clamped to zero;
/// anything more negative is a hard error.
pub const SPECTRUM_CLAMP: f64 = 1e-9;

/// A two-qubit density matrix together with its spin-flipped partner and
/// the descending Wootters spectrum.
#[derive(Debug, Clone)]
pub struct SpinFlipPair {
    rho_tilde: CMat,
    lambdas: [f64; 4],
}

impl SpinFlipPair {
    /// `ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy)`.
    pub fn rho_tilde(&self) -> &CMat {
        &self.rho_tilde
    }

    /// Eigenvalues of `√(√ρ ρ̃ √ρ)` in descending order.
    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }

    pub fn concurrence(&self) -> f64 {
        let [l1, l2, l3, l4] = self.lambdas;
        (l1 - l2 - l3 - l4).clamp(0.0, 1.0)
    }

    pub fn assistance(&self) -> f64 {
        let [l1, l2, l3, l4] = self.lambdas;
        (l1 + l2 + l3 + l4).clamp(0.0, 1.0)
    }
}

/// Pure-state concurrence across `cut`: `√(2(1 − tr ρ_A²))`. For a 2 ⊗ d
/// cut this lies in `[0, 1]`; for larger cuts it can exceed 1.
pub fn concurrence_pure(psi: &PureState, cut: &QubitCut) -> Result<f64> {
    if cut.n_qubits() != psi.n_qubits() {
        return Err(Error::InvalidCut(format!(
            "cut is for {} qubits but the state has {}",
            cut.n_qubits(),
            psi.n_qubits()
        )));
    }
    let marginal = psi.reduced(cut.side_a())?;
    Ok((2.0 * (1.0 - marginal.purity())).max(0.0).sqrt())
}

/// Spin-flip construction for a two-qubit density matrix given as a raw
/// matrix reference; shared by [`concurrence_2q`] and [`coa_2q`].
pub fn spin_flip(rho: &crate::qmath::state::DensityMatrix) -> Result<SpinFlipPair> {
    if rho.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "spin flip is defined for 2 qubits, got {}",
            rho.n_qubits()
        )));
    }
    let yy = kron(&pauli_y(), &pauli_y());
    let conj = rho.matrix().mapv(|z| z.conj());
    let rho_tilde = yy.dot(&conj).dot(&yy);

    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let m = sqrt_rho.dot(&rho_tilde).dot(&sqrt_rho);
    // Matmul roundoff can leave m slightly non-Hermitian; symmetrize before
    // the eigensolver's strict check.
    let m = (&m + &dagger(&m)).mapv(|z| 0.5 * z);
    let (eigs, _) = herm_eigs(&m)?;

    // Taking √μ amplifies eigenvalue roundoff from O(ε) to O(√ε): a
    // numerically-zero μ ~ 1e−16 becomes a spurious λ ~ 1e−8 that is then
    // subtracted from λ₁. Zero out μ below a relative cut first.
    let zero_cut = 128.0 * f64::EPSILON * eigs[0].max(0.0);
    let mut lambdas = [0.0f64; 4];
    for (slot, &e) in lambdas.iter_mut().zip(eigs.iter()) {
        if e < -SPECTRUM_CLAMP {
            return Err(Error::NegativeEigenvalue(e));
        }
        *slot = if e < zero_cut { 0.0 } else { e.sqrt() };
    }
    Ok(SpinFlipPair { rho_tilde, lambdas })
}

/// Wootters closed form for the two-qubit concurrence,
/// `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
pub fn concurrence_2q(rho: &crate::qmath::state::DensityMatrix) -> Result<f64> {
    Ok(spin_flip(rho)?.concurrence())
}

/// Closed form for the two-qubit concurrence of assistance,
/// `λ₁ + λ₂ + λ₃ + λ₄`: the roof maximum of concurrence over
/// decompositions.
pub fn coa_2q(rho: &crate::qmath::state::DensityMatrix) -> Result<f64> {
    Ok(spin_flip(rho)?.assistance())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::state::DensityMatrix;

    #[test]
    fn bell_is_maximally_entangled() {
        let bell = PureState::bell();
        let cut = QubitCut::single(2, 0).unwrap();
        assert!((concurrence_pure(&bell, &cut).unwrap() - 1.0).abs() < 1e-12);

        let pair = spin_flip(&bell.density()).unwrap();
        assert!((pair.lambdas()[0] - 1.0).abs() < 1e-9);
        assert!(pair.lambdas()[1].abs() < 1e-9);
        assert!((pair.concurrence() - 1.0).abs() < 1e-9);
        assert!((pair.assistance() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_state_has_zero_concurrence() {
        let psi = PureState::basis(2, 0).unwrap();
        let cut = QubitCut::single(2, 0).unwrap();
        assert!(concurrence_pure(&psi, &cut).unwrap().abs() < 1e-12);
        assert!(concurrence_2q(&psi.density()).unwrap().abs() < 1e-12);
        assert!(coa_2q(&psi.density()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pure_concurrence_matches_closed_form_on_two_qubits() {
        // cos θ |00⟩ + sin θ |11⟩ has C = sin 2θ = 2 cos θ sin θ
        for &theta in &[0.2f64, 0.5, 0.9, 1.2] {
            let amps = crate::qmath::matrix::CVec::from_vec(vec![
                num_complex::Complex64::new(theta.cos(), 0.0),
                num_complex::Complex64::new(0.0, 0.0),
                num_complex::Complex64::new(0.0, 0.0),
                num_complex::Complex64::new(theta.sin(), 0.0),
            ]);
            let psi = PureState::new(2, amps).unwrap();
            let cut = QubitCut::single(2, 0).unwrap();
            let c_pure = concurrence_pure(&psi, &cut).unwrap();
            let c_closed = concurrence_2q(&psi.density()).unwrap();
            let expect = (2.0 * theta).sin().abs();
            assert!((c_pure - expect).abs() < 1e-12);
            assert!((c_closed - expect).abs() < 1e-9);
            // Schmidt form: C = 2√(λ₀λ₁)
            let schmidt = 2.0 * (theta.cos().powi(2) * theta.sin().powi(2)).sqrt();
            assert!((c_pure - schmidt).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_threshold() {
        // C(p) = max(0, (3p − 1)/2) for the singlet Werner family
        for &(p, expect) in &[(0.0, 0.0), (0.2, 0.0), (1.0 / 3.0, 0.0), (0.5, 0.25), (1.0, 1.0)] {
            let rho = DensityMatrix::werner(p).unwrap();
            let c = concurrence_2q(&rho).unwrap();
            assert!((c - expect).abs() < 1e-9, "p = {p}: C = {c}");
        }
    }

    #[test]
    fn ghz_marginal_separable_but_assistable() {
        let ghz = PureState::ghz(3).unwrap();
        let marginal = ghz.reduced(&[0, 1]).unwrap();
        assert!(concurrence_2q(&marginal).unwrap().abs() < 1e-9);
        assert!((coa_2q(&marginal).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn w_marginal_concurrence_is_two_thirds() {
        let w = PureState::w(3).unwrap();
        let marginal = w.reduced(&[0, 1]).unwrap();
        assert!((concurrence_2q(&marginal).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn maximally_mixed_assistance_is_one() {
        // I/4 is an even mixture of the four Bell states, each with C = 1
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(concurrence_2q(&rho).unwrap().abs() < 1e-9);
        assert!((coa_2q(&rho).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn assistance_dominates_concurrence() {
        for seed in 0..50 {
            let rho = crate::qmath::random::random_mixed(2, 4, seed).unwrap();
            let pair = spin_flip(&rho).unwrap();
            assert!(pair.assistance() >= pair.concurrence() - 1e-12);
            let l = pair.lambdas();
            assert!(l[0] >= l[1] && l[1] >= l[2] && l[2] >= l[3]);
        }
    }

    #[test]
    fn larger_cuts_can_exceed_one() {
        let ghz = PureState::ghz(4).unwrap();
        let cut = QubitCut::new(4, &[0, 1]).unwrap();
        let c = concurrence_pure(&ghz, &cut).unwrap();
        assert!((c - 1.0).abs() < 1e-12, "GHZ across 2|2 still has C = 1, got {c}");

        let mixed_cut_state = crate::qmath::random::haar_random_pure(4, 7).unwrap();
        let c = concurrence_pure(&mixed_cut_state, &cut).unwrap();
        assert!(c > 0.0);

        let wrong_cut = QubitCut::single(3, 0).unwrap();
        assert!(concurrence_pure(&ghz, &wrong_cut).is_err());
    }

    #[test]
    fn spin_flip_rejects_wrong_size() {
        let rho = DensityMatrix::maximally_mixed(1);
        assert!(spin_flip(&rho).is_err());
        let rho = PureState::ghz(3).unwrap().density();
        assert!(concurrence_2q(&rho).is_err());
    }
}
