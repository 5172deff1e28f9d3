//! Convex-roof extremization over pure-state decompositions.
//!
//! Every size-m decomposition of a rank-r state ρ = Σ λ_k |v_k⟩⟨v_k| has the
//! form `w̃_i = Σ_k u_ik √λ_k |v_k⟩` for an m×m unitary `u` (only the first r
//! columns matter), with weights `p_i = ⟨w̃_i|w̃_i⟩`. The roof value
//! `min/max Σ p_i E(ψ_i)` is therefore an optimization over U(m), run here
//! as a seeded random local search: multiplicative proposals
//! `u · exp(i·scale·H)` with random Hermitian `H`, accepted on strict
//! improvement, with `scale` halved after 20 consecutive rejections (from
//! 0.3 down to a floor of 1e-4). Restart 0 starts from the identity (the
//! spectral decomposition); all others start from Haar-random unitaries.
//! Restarts run in parallel and the best result is merged deterministically
//! (ties broken by lowest restart index), so a fixed seed gives bit-identical
//! results at any thread count.

use rayon::prelude::*;

use crate::entropy::{tsallis_from_spectrum, von_neumann_from_spectrum, EntropicIndex};
use crate::error::{Error, Result};
use crate::qmath::matrix::{
    expi_herm, herm_eigs, herm_eigs_2x2_values, identity, unitarity_error, CMat, CVec,
    UNITARY_TOL,
};
use crate::qmath::random::{derive_seed, haar_unitary, rng_from_seed};
use crate::qmath::state::{reduced_from_amps, DensityMatrix, PureState, QubitCut, RANK_TOL};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Decomposition members with weight below this are dropped.
pub const WEIGHT_TOL: f64 = 1e-14;

/// An acceptance step smaller than this counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-9;

const INITIAL_SCALE: f64 = 0.3;
const SCALE_FLOOR: f64 = 1e-4;
const STALL_BEFORE_SHRINK: usize = 20;

/// Which functional is averaged over the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RoofMeasure {
    TsallisQ(EntropicIndex),
    VonNeumann,
    Concurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Search effort: decomposition size `m`, independent `restarts`, proposal
/// `iters` per restart. All three must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoofBudget {
    pub m: usize,
    pub restarts: usize,
    pub iters: usize,
}

impl RoofBudget {
    pub fn new(m: usize, restarts: usize, iters: usize) -> Self {
        Self { m, restarts, iters }
    }

    /// Default decomposition size `min(rank², 2·rank)` with moderate search
    /// effort.
    pub fn default_for_rank(rank: usize) -> Self {
        let m = (rank * rank).min(2 * rank).max(1);
        Self { m, restarts: 32, iters: 300 }
    }
}

/// A pure-state ensemble `{(p_i, ψ_i)}` averaging to some density matrix.
#[derive(Debug, Clone)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    /// `Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn reconstruct(&self) -> CMat {
        let d = self.states[0].dim();
        let mut out = CMat::zeros((d, d));
        for (p, psi) in self.weights.iter().zip(&self.states) {
            let amps = psi.amplitudes();
            for i in 0..d {
                for j in 0..d {
                    out[[i, j]] += amps[i] * amps[j].conj() * *p;
                }
            }
        }
        out
    }
}

/// Outcome of [`roof_extremize`].
#[derive(Debug, Clone)]
pub struct RoofResult {
    /// The extremal weighted average found.
    pub value: f64,
    /// The decomposition attaining `value`.
    pub best: Decomposition,
    /// Restarts actually run.
    pub restarts_used: usize,
    /// True when the winning restart's final accepted improvement was below
    /// [`CONVERGENCE_TOL`].
    pub converged: bool,
}

/// The ensemble induced by mixing the spectral decomposition of `rho` with
/// the unitary `u` (m×m, m ≥ rank); members with weight ≤ [`WEIGHT_TOL`]
/// are dropped and the remaining weights renormalized.
pub fn decomposition_from_unitary(rho: &DensityMatrix, u: &CMat) -> Result<Decomposition> {
    let (rows, cols) = u.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let dev = unitarity_error(u);
    if !(dev <= UNITARY_TOL) {
        return Err(Error::NotUnitary(dev));
    }
    let spectral = SpectralEnsemble::of(rho);
    if rows < spectral.rank() {
        return Err(Error::InvalidArgument(format!(
            "mixing unitary is {rows}x{rows} but the state has rank {}",
            spectral.rank()
        )));
    }
    Ok(spectral.mix(u, rho.n_qubits()))
}

/// Extremizes the decomposition average of `measure` over `cut`.
///
/// Preconditions: the cut matches the state, every budget field is positive,
/// and `rank ≤ m ≤ rank²`. A rank-one (pure) state short-circuits to the
/// exact single-term decomposition.
pub fn roof_extremize(
    rho: &DensityMatrix,
    cut: &QubitCut,
    measure: RoofMeasure,
    direction: Direction,
    budget: &RoofBudget,
    seed: u64,
) -> Result<RoofResult> {
    if cut.n_qubits() != rho.n_qubits() {
        return Err(Error::InvalidCut(format!(
            "cut is for {} qubits but the state has {}",
            cut.n_qubits(),
            rho.n_qubits()
        )));
    }
    if budget.m == 0 || budget.restarts == 0 || budget.iters == 0 {
        return Err(Error::InvalidArgument("every roof budget field must be positive".into()));
    }
    let spectral = SpectralEnsemble::of(rho);
    let rank = spectral.rank();
    if budget.m < rank || budget.m > rank * rank {
        return Err(Error::InvalidArgument(format!(
            "decomposition size m = {} must lie in [rank, rank²] = [{rank}, {}]",
            budget.m,
            rank * rank
        )));
    }

    let keep = smaller_side(cut);
    let objective = Objective {
        spectral: &spectral,
        n_qubits: rho.n_qubits(),
        keep: &keep,
        measure,
    };

    if rank == 1 {
        let u = identity(1);
        let best = spectral.mix(&u, rho.n_qubits());
        let value = objective.eval(&u);
        return Ok(RoofResult { value, best, restarts_used: 0, converged: true });
    }

    let sign = match direction {
        Direction::Min => 1.0,
        Direction::Max => -1.0,
    };

    let outcomes: Vec<RestartOutcome> = (0..budget.restarts)
        .into_par_iter()
        .map(|ri| run_restart(&objective, budget, seed, ri, sign))
        .collect();

    let winner = outcomes
        .iter()
        .reduce(|best, cur| if cur.signed_value < best.signed_value { cur } else { best })
        .expect("restarts > 0");

    let best = spectral.mix(&winner.unitary, rho.n_qubits());
    Ok(RoofResult {
        value: sign * winner.signed_value,
        best,
        restarts_used: budget.restarts,
        converged: winner.last_accept_delta < CONVERGENCE_TOL,
    })
}

struct RestartOutcome {
    signed_value: f64,
    unitary: CMat,
    last_accept_delta: f64,
}

fn run_restart(
    objective: &Objective<'_>,
    budget: &RoofBudget,
    seed: u64,
    restart_index: usize,
    sign: f64,
) -> RestartOutcome {
    let mut rng = rng_from_seed(derive_seed(seed, restart_index as u64));
    let m = budget.m;
    let mut u = if restart_index == 0 { identity(m) } else { haar_unitary(m, &mut rng) };
    let mut best = sign * objective.eval(&u);
    let mut scale = INITIAL_SCALE;
    let mut stalled = 0usize;
    let mut last_accept_delta = 0.0f64;

    for _ in 0..budget.iters {
        let h = random_hermitian_step(m, scale, &mut rng);
        let proposal = u.dot(&expi_herm(&h).expect("Hermitian by construction"));
        let value = sign * objective.eval(&proposal);
        if value < best {
            last_accept_delta = best - value;
            best = value;
            u = proposal;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= STALL_BEFORE_SHRINK {
                scale = (scale / 2.0).max(SCALE_FLOOR);
                stalled = 0;
            }
        }
    }

    RestartOutcome { signed_value: best, unitary: u, last_accept_delta }
}

fn random_hermitian_step(m: usize, scale: f64, rng: &mut impl Rng) -> CMat {
    let a = CMat::from_shape_fn((m, m), |_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    CMat::from_shape_fn((m, m), |(i, j)| 0.5 * scale * (a[[i, j]] + a[[j, i]].conj()))
}

/// Spectral data of ρ: eigenvalues above [`RANK_TOL`] and the matching
/// eigenvectors pre-scaled by √λ.
struct SpectralEnsemble {
    scaled: Vec<CVec>,
    dim: usize,
}

impl SpectralEnsemble {
    fn of(rho: &DensityMatrix) -> Self {
        let (eigs, v) = herm_eigs(rho.matrix()).expect("density matrix is Hermitian");
        let dim = rho.dim();
        let scaled = eigs
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l > RANK_TOL)
            .map(|(k, &l)| {
                let w = l.sqrt();
                CVec::from_shape_fn(dim, |i| v[[i, k]] * w)
            })
            .collect();
        Self { scaled, dim }
    }

    fn rank(&self) -> usize {
        self.scaled.len()
    }

    /// Unnormalized member `w̃_i` for row `i` of the mixing unitary.
    fn member(&self, u: &CMat, i: usize) -> CVec {
        let mut w = CVec::zeros(self.dim);
        for (k, col) in self.scaled.iter().enumerate() {
            let c = u[[i, k]];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..self.dim {
                w[r] += c * col[r];
            }
        }
        w
    }

    fn mix(&self, u: &CMat, n_qubits: usize) -> Decomposition {
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for i in 0..u.nrows() {
            let w = self.member(u, i);
            let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
            if p <= WEIGHT_TOL {
                continue;
            }
            let norm = p.sqrt();
            states.push(PureState::from_unnormalized(n_qubits, w.mapv(|z| z / norm)));
            weights.push(p);
        }
        let total: f64 = weights.iter().sum();
        for p in &mut weights {
            *p /= total;
        }
        Decomposition { weights, states }
    }
}

struct Objective<'a> {
    spectral: &'a SpectralEnsemble,
    n_qubits: usize,
    keep: &'a [usize],
    measure: RoofMeasure,
}

impl Objective<'_> {
    /// `Σ p_i E(ψ_i)` for the ensemble induced by `u`.
    fn eval(&self, u: &CMat) -> f64 {
        let mut total = 0.0;
        for i in 0..u.nrows() {
            let w = self.spectral.member(u, i);
            let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
            if p <= WEIGHT_TOL {
                continue;
            }
            let marginal = reduced_from_amps(&w, self.n_qubits, self.keep);
            let spectrum: Vec<f64> = if marginal.nrows() == 2 {
                herm_eigs_2x2_values(&marginal).iter().map(|&e| e / p).collect()
            } else {
                herm_eigs(&marginal)
                    .expect("marginal is Hermitian by construction")
                    .0
                    .iter()
                    .map(|&e| e / p)
                    .collect()
            };
            total += p * member_value(&spectrum, self.measure);
        }
        total
    }
}

fn member_value(spectrum: &[f64], measure: RoofMeasure) -> f64 {
    match measure {
        RoofMeasure::TsallisQ(q) => tsallis_from_spectrum(spectrum, q),
        RoofMeasure::VonNeumann => von_neumann_from_spectrum(spectrum),
        RoofMeasure::Concurrence => {
            let sum_sq: f64 = spectrum.iter().map(|&l| l.max(0.0) * l.max(0.0)).sum();
            (2.0 * (1.0 - sum_sq)).max(0.0).sqrt()
        }
    }
}

/// The shorter side of the cut; both marginals share their nonzero spectrum,
/// so every supported measure is side-independent.
fn smaller_side(cut: &QubitCut) -> Vec<usize> {
    let a = cut.side_a();
    let b = cut.side_b();
    if a.len() <= b.len() {
        a.to_vec()
    } else {
        b
    }
}
