//! Multi-qubit pure states, density matrices, and bipartite cuts.
//!
//! Qubit 0 is the most significant bit of the computational-basis index:
//! for a 3-qubit state, `|011⟩` is amplitude index 3 and qubit 0 is the
//! leading `0`. Marginals keep their qubits in ascending original order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::matrix::{self, CMat, CVec};

/// Max allowed deviation of a pure-state norm from 1.
pub const NORM_TOL: f64 = 1e-10;

/// Max allowed deviation of a density-matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as absent when purifying or counting rank.
pub const RANK_TOL: f64 = 1e-12;

/// A normalized pure state on `n_qubits` qubits.
#[derive(Debug, Clone)]
pub struct PureState {
    n_qubits: usize,
    amps: CVec,
}

impl PureState {
    /// Validates dimension (`2^n_qubits`), finiteness, and unit norm
    /// (within [`NORM_TOL`]).
    pub fn new(n_qubits: usize, amps: CVec) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidState("state must have at least one qubit".into()));
        }
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::InvalidState(format!(
                "expected {dim} amplitudes for {n_qubits} qubits, got {}",
                amps.len()
            )));
        }
        if !amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state norm² = {norm_sq:.12} is not 1 within tolerance"
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalizes and wraps; for internal samplers where the direction is
    /// meaningful but the raw norm is not.
    pub(crate) fn from_unnormalized(n_qubits: usize, amps: CVec) -> Self {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        Self { n_qubits, amps: amps.mapv(|z| z / norm) }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    /// The rank-one projector `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        let d = self.dim();
        let mat = CMat::from_shape_fn((d, d), |(i, j)| self.amps[i] * self.amps[j].conj());
        DensityMatrix { n_qubits: self.n_qubits, mat }
    }

    /// Reduced density matrix on `keep` (any order, no duplicates); the
    /// marginal's qubits are relabeled in ascending original order.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = normalize_keep(keep, self.n_qubits)?;
        let mat = reduced_from_amps(&self.amps, self.n_qubits, &keep);
        Ok(DensityMatrix { n_qubits: keep.len(), mat })
    }

    /// Computational-basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidState("state must have at least one qubit".into()));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = CVec::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// The Bell state `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        Self::ghz(2).expect("2-qubit GHZ is the Bell state")
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on `n_qubits ≥ 2` qubits.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidArgument("ghz requires at least 2 qubits".into()));
        }
        let dim = 1usize << n_qubits;
        let mut amps = CVec::zeros(dim);
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = a;
        amps[dim - 1] = a;
        Ok(Self { n_qubits, amps })
    }

    /// Equal superposition of the single-excitation basis states,
    /// `(|10…0⟩ + |01…0⟩ + … + |0…01⟩)/√n`, on `n_qubits ≥ 2` qubits.
    pub fn w(n_qubits: usize) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidArgument("w requires at least 2 qubits".into()));
        }
        let dim = 1usize << n_qubits;
        let mut amps = CVec::zeros(dim);
        let a = Complex64::new(1.0 / (n_qubits as f64).sqrt(), 0.0);
        for k in 0..n_qubits {
            amps[1usize << (n_qubits - 1 - k)] = a;
        }
        Ok(Self { n_qubits, amps })
    }

    /// Relabels qubits: qubit `i` of `self` becomes qubit `perm[i]` of the
    /// result. `perm` must be a permutation of `0..n_qubits`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_qubits;
        if perm.len() != n {
            return Err(Error::InvalidArgument(format!(
                "permutation length {} does not match {n} qubits",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[p] = true;
        }
        let dim = self.dim();
        let mut amps = CVec::zeros(dim);
        for idx in 0..dim {
            let mut new_idx = 0usize;
            for (i, &p) in perm.iter().enumerate() {
                let bit = (idx >> (n - 1 - i)) & 1;
                new_idx |= bit << (n - 1 - p);
            }
            amps[new_idx] = self.amps[idx];
        }
        Ok(Self { n_qubits: n, amps })
    }
}

/// A trace-one positive semidefinite operator on `n_qubits` qubits.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates dimension, finiteness, Hermitian symmetry, unit trace, and
    /// positive semidefiniteness (eigenvalues ≥ −1e-10).
    pub fn new(n_qubits: usize, mat: CMat) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidState("state must have at least one qubit".into()));
        }
        let dim = 1usize << n_qubits;
        let n = matrix::square_dim(&mat)?;
        if n != dim {
            return Err(Error::InvalidState(format!(
                "expected a {dim}x{dim} matrix for {n_qubits} qubits, got {n}x{n}"
            )));
        }
        let trace: Complex64 = (0..n).map(|i| mat[[i, i]]).sum();
        let (eigs, _) = matrix::herm_eigs(&mat)?;
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace = {trace} is not 1 within tolerance")));
        }
        if let Some(&min) = eigs.last() {
            if min < -matrix::EIG_CLAMP_TOL {
                return Err(Error::NegativeEigenvalue(min));
            }
        }
        Ok(Self { n_qubits, mat })
    }

    /// For internal constructions that are PSD and trace-one by algebra.
    pub(crate) fn new_unchecked(n_qubits: usize, mat: CMat) -> Self {
        Self { n_qubits, mat }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in descending order, clamped to `[0, 1]`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (eigs, _) = matrix::herm_eigs(&self.mat).expect("density matrix is Hermitian");
        eigs.into_iter().map(|l| l.clamp(0.0, 1.0)).collect()
    }

    /// Number of eigenvalues above [`RANK_TOL`].
    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > RANK_TOL).count()
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mat = matrix::identity(dim).mapv(|z| z / dim as f64);
        Self { n_qubits, mat }
    }

    /// Werner state `p |Ψ⁻⟩⟨Ψ⁻| + (1−p) I/4` with the singlet
    /// `|Ψ⁻⟩ = (|01⟩ − |10⟩)/√2`; requires `p ∈ [0, 1]`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("werner parameter p = {p} outside [0, 1]")));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = PureState::new(
            2,
            CVec::from_vec(vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(0.0, 0.0),
            ]),
        )?;
        let proj = singlet.density();
        let mat = CMat::from_shape_fn((4, 4), |(i, j)| {
            let id = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            proj.mat[[i, j]] * p + id * ((1.0 - p) / 4.0)
        });
        Ok(Self { n_qubits: 2, mat })
    }
}

/// A bipartition of `n_qubits` qubits into a nonempty proper subset `side_a`
/// and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitCut {
    n_qubits: usize,
    side_a: Vec<usize>,
}

impl QubitCut {
    pub fn new(n_qubits: usize, side_a: &[usize]) -> Result<Self> {
        if side_a.is_empty() {
            return Err(Error::InvalidCut("side A is empty".into()));
        }
        let mut sorted = side_a.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != side_a.len() {
            return Err(Error::InvalidCut("duplicate qubit index".into()));
        }
        if *sorted.last().expect("nonempty") >= n_qubits {
            return Err(Error::InvalidCut(format!(
                "qubit index {} out of range for {n_qubits} qubits",
                sorted.last().expect("nonempty")
            )));
        }
        if sorted.len() == n_qubits {
            return Err(Error::InvalidCut("side A must be a proper subset".into()));
        }
        Ok(Self { n_qubits, side_a: sorted })
    }

    /// The one-vs-rest cut isolating `qubit`.
    pub fn single(n_qubits: usize, qubit: usize) -> Result<Self> {
        Self::new(n_qubits, &[qubit])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !self.side_a.contains(q)).collect()
    }

    /// True when either side is a single qubit, i.e. the cut is 2 ⊗ d.
    pub fn is_two_by_d(&self) -> bool {
        self.side_a.len() == 1 || self.side_a.len() == self.n_qubits - 1
    }
}

/// Partial trace keeping `keep` (any order, no duplicates). Keeping every
/// qubit returns a copy of `rho`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = normalize_keep(keep, rho.n_qubits())?;
    if keep.len() == rho.n_qubits() {
        return Ok(rho.clone());
    }
    let n = rho.n_qubits();
    let kept_dim = 1usize << keep.len();
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let traced_dim = 1usize << traced.len();

    let mut out = CMat::zeros((kept_dim, kept_dim));
    for a in 0..kept_dim {
        for b in 0..kept_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..traced_dim {
                let i = assemble_index(n, &keep, a, &traced, t);
                let j = assemble_index(n, &keep, b, &traced, t);
                acc += rho.matrix()[[i, j]];
            }
            out[[a, b]] = acc;
        }
    }
    Ok(DensityMatrix { n_qubits: keep.len(), mat: out })
}

/// Purification: a pure state on `n + max(1, ⌈log₂ rank⌉)` qubits whose
/// marginal over the appended ancilla qubits reproduces `rho` (to within the
/// eigenvalue cutoff [`RANK_TOL`]). The original qubits keep positions
/// `0..n`; ancilla qubits are appended after them.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let (eigs, v) = matrix::herm_eigs(rho.matrix()).expect("density matrix is Hermitian");
    let kept: Vec<(usize, f64)> = eigs
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, l)| l > RANK_TOL)
        .collect();
    let k = kept.len().max(1);
    let n_anc = if k <= 1 { 1 } else { (k - 1).ilog2() as usize + 1 };
    let anc_dim = 1usize << n_anc;
    let sys_dim = rho.dim();

    let mut amps = CVec::zeros(sys_dim * anc_dim);
    for (r, &(col, lam)) in kept.iter().enumerate() {
        let w = lam.sqrt();
        for i in 0..sys_dim {
            amps[i * anc_dim + r] = v[[i, col]] * w;
        }
    }
    PureState::from_unnormalized(rho.n_qubits() + n_anc, amps)
}

/// Builds the full-register index from a sub-index over `keep` and one over
/// `traced`; both sub-indices order their qubits ascending, MSB first.
fn assemble_index(n: usize, keep: &[usize], a: usize, traced: &[usize], t: usize) -> usize {
    let mut idx = 0usize;
    for (pos, &q) in keep.iter().enumerate() {
        let bit = (a >> (keep.len() - 1 - pos)) & 1;
        idx |= bit << (n - 1 - q);
    }
    for (pos, &q) in traced.iter().enumerate() {
        let bit = (t >> (traced.len() - 1 - pos)) & 1;
        idx |= bit << (n - 1 - q);
    }
    idx
}

fn normalize_keep(keep: &[usize], n_qubits: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidCut("keep set is empty".into()));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() {
        return Err(Error::InvalidCut("duplicate qubit index in keep set".into()));
    }
    if *sorted.last().expect("nonempty") >= n_qubits {
        return Err(Error::InvalidCut(format!(
            "qubit index {} out of range for {n_qubits} qubits",
            sorted.last().expect("nonempty")
        )));
    }
    Ok(sorted)
}

/// Marginal of (possibly unnormalized) amplitudes over the sorted `keep` set.
/// The result's trace equals the squared norm of `amps`.
pub(crate) fn reduced_from_amps(amps: &CVec, n: usize, keep: &[usize]) -> CMat {
    let kept_dim = 1usize << keep.len();
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let traced_dim = 1usize << traced.len();

    let mut out = CMat::zeros((kept_dim, kept_dim));
    for t in 0..traced_dim {
        // Gather the amplitude slice with the traced bits fixed, then take
        // its outer product into the accumulator.
        let mut slice = Vec::with_capacity(kept_dim);
        for a in 0..kept_dim {
            slice.push(amps[assemble_index(n, keep, a, &traced, t)]);
        }
        for a in 0..kept_dim {
            let za = slice[a];
            if za == Complex64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..kept_dim {
                out[[a, b]] += za * slice[b].conj();
            }
        }
    }
    out
}
