//! Decision procedures, envelope geometry and a numerical falsifier for the
//! generalized triangle inequality of the second type
//!
//! ```text
//! ‖x₁ + ⋯ + xₙ‖^p ≤ ‖x₁‖^p/μ₁ + ⋯ + ‖xₙ‖^p/μₙ
//! ```
//!
//! and its reverse, over real normed spaces.
//!
//! * [`spaces`] is a finite-dimensional ℓ^q sandbox that can realize any
//!   feasible tuple of norms `(‖x₁‖, …, ‖xₙ‖, ‖Σxᵢ‖)` as concrete vectors.
//! * [`characterize`] decides membership of `(μ₁, …, μₙ)` in the coefficient
//!   sets `F(p)`, `G(p)` and `H(p)` in closed form.
//! * [`envelope`] evaluates the envelope surface `h_p` and the half-space
//!   intersection sets `D_p(Ω)` it bounds.
//! * [`oracle`] searches for counterexamples, builds explicit witness vectors
//!   and cross-checks the closed-form verdicts against them.
//! * [`cli`] is the command-line front end used by the `triq` binary.

pub mod characterize;
pub mod cli;
pub mod envelope;
mod error;
pub mod format;
pub mod oracle;
pub mod rng;
pub mod spaces;

pub use characterize::{
    count_negatives, decide, decide_f, decide_g, decide_h, Clause, CoefficientTuple, Exponent,
    Regime, SetId, Verdict, DEFAULT_TOL,
};
pub use envelope::{
    envelope_point, envelope_residual, h_p, in_dp, sample_envelope, DpResult, EnvelopePoint,
    EnvelopeRow, OmegaSampleSet, SimplexPoint,
};
pub use error::{Error, Result};
pub use oracle::{
    crosscheck, euler_lagrange_residual, falsify, falsify_f, falsify_g, gap, gap_f, gap_g,
    random_verify, CrosscheckParams, CrosscheckReport, Direction, FalsifyOutcome, Probe,
    SearchConfig, VerifyReport, Witness,
};
pub use spaces::{feasible_t_range, norm, realize_tuple, NormTuple, SpaceDescriptor, Vector};
