//! Seeded sampling of Haar-random states and unitaries.
//!
//! All sampling is driven by `ChaCha8Rng`, a portable counter-based stream
//! cipher RNG, so a given seed reproduces the same states on every platform.
//! Ensemble drivers derive one seed per sample with [`derive_seed`] so
//! samples can be regenerated individually.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qmath::matrix::{CMat, CVec};
use crate::qmath::state::{DensityMatrix, PureState};

use num_complex::Complex64;

/// Largest register the samplers accept.
pub const MAX_SAMPLED_QUBITS: usize = 6;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample seed for sample `index` of an ensemble seeded with `seed`:
/// `splitmix64(seed ^ splitmix64(index))`. The inner mix decorrelates
/// consecutive indices; the outer one decorrelates nearby seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub(crate) fn haar_amps(dim: usize, rng: &mut impl Rng) -> CVec {
    CVec::from_shape_fn(dim, |_| complex_normal(rng))
}

/// Haar-random pure state on `1..=MAX_SAMPLED_QUBITS` qubits; deterministic
/// per seed.
pub fn haar_random_pure(n_qubits: usize, seed: u64) -> Result<PureState> {
    if n_qubits == 0 || n_qubits > MAX_SAMPLED_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "haar_random_pure supports 1..={MAX_SAMPLED_QUBITS} qubits, got {n_qubits}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let amps = haar_amps(1usize << n_qubits, &mut rng);
    Ok(PureState::from_unnormalized(n_qubits, amps))
}

/// Random mixed state of numerical rank ≤ `rank`: the marginal of a Haar
/// pure state on the system ⊗ a rank-dimensional ancilla. `rank = 1` yields
/// a Haar pure state's projector.
pub fn random_mixed(n_qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if n_qubits == 0 || n_qubits > MAX_SAMPLED_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "random_mixed supports 1..={MAX_SAMPLED_QUBITS} qubits, got {n_qubits}"
        )));
    }
    let dim = 1usize << n_qubits;
    if rank == 0 || rank > dim {
        return Err(Error::InvalidArgument(format!(
            "rank must be in 1..={dim} for {n_qubits} qubits, got {rank}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let amps = haar_amps(dim * rank, &mut rng);
    let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();

    // View the normalized vector as a dim×rank matrix M; the ancilla
    // marginal is M M†.
    let mut mat = CMat::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rank {
                acc += amps[i * rank + r] * amps[j * rank + r].conj();
            }
            mat[[i, j]] = acc / norm_sq;
        }
    }
    Ok(DensityMatrix::new_unchecked(n_qubits, mat))
}

/// Haar-random unitary: QR of a complex Ginibre matrix. Modified
/// Gram-Schmidt produces the unique factor with a positive real R diagonal,
/// which is exactly the Haar-distributed Q.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> CMat {
    assert!(dim > 0, "dimension must be positive");
    let mut q = CMat::from_shape_fn((dim, dim), |_| complex_normal(rng));
    for k in 0..dim {
        for j in 0..k {
            let mut proj = Complex64::new(0.0, 0.0);
            for r in 0..dim {
                proj += q[[r, j]].conj() * q[[r, k]];
            }
            for r in 0..dim {
                let s = q[[r, j]];
                q[[r, k]] -= proj * s;
            }
        }
        let norm: f64 = (0..dim).map(|r| q[[r, k]].norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "Ginibre column collapsed");
        for r in 0..dim {
            q[[r, k]] /= norm;
        }
    }
    q
}
