//! Tsallis-q entanglement for small qubit systems.
//!
//! This crate implements the one-parameter family of entanglement measures
//! built on the Tsallis-q entropy `T_q(ρ) = (1 − tr ρ^q)/(q − 1)`:
//!
//! - exact evaluation on pure states and the two-qubit closed form
//!   `g_q(C(ρ))` built on the Wootters concurrence ([`measure`], [`gq`],
//!   [`concurrence`]),
//! - a seeded convex-roof optimizer for everything without a closed form
//!   ([`roof`]),
//! - the analytic machinery (`g_q`, its derivatives, the threshold curve
//!   `h`, and the gap functions `m_q`, `n_q`, `b_q`) that determines where
//!   the measure is convex in the concurrence and where entanglement is
//!   monogamous versus polygamous ([`gq`]),
//! - Monte Carlo verifiers for the CKW, dual CKW, and Tsallis-q
//!   monogamy/polygamy inequalities on 3–5 qubit states ([`monogamy`]),
//! - the supporting linear algebra: states, partial traces, a Hermitian
//!   eigensolver, seeded Haar sampling, and JSON interchange ([`qmath`]).
//!
//! Everything is deterministic for a fixed seed, including parallel sweeps
//! and the roof optimizer.
//!
//! ```
//! use tsallisq::entropy::EntropicIndex;
//! use tsallisq::measure::tq_2q;
//! use tsallisq::qmath::PureState;
//!
//! let bell = PureState::bell();
//! let q = EntropicIndex::new(2.0)?;
//! let t2 = tq_2q(&bell.density(), q)?;
//! assert!((t2.value - 0.5).abs() < 1e-9);
//! # Ok::<(), tsallisq::Error>(())
//! ```

pub mod concurrence;
pub mod entropy;
mod error;
pub mod gq;
pub mod measure;
pub mod monogamy;
pub mod qmath;
pub mod roof;

pub use error::{Error, Result};
pub use qmath::{DensityMatrix, PureState, QubitCut};

/// Runs every code block in the guide (`book/`) as a doctest, so the book
/// can never drift from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $path))]
            mod $name {}
        };
    }

    chapter!(introduction, "introduction.md");
    chapter!(getting_started, "getting-started.md");
    chapter!(states, "states.md");
    chapter!(entropies, "entropies.md");
    chapter!(concurrence, "concurrence.md");
    chapter!(gq_curve, "gq-curve.md");
    chapter!(convex_roof, "convex-roof.md");
    chapter!(monogamy, "monogamy.md");
    chapter!(cli, "cli.md");
}
