//! Pauli-frame simulation and analytic bounds for noise-robust quantum authentication.
//!
//! The crate models the trap, threshold and Clifford authentication schemes over
//! concatenated five-qubit and Steane codes. Only Pauli errors and the secret
//! permutation key are tracked: the one-time pad and the Clifford twirl reduce every
//! attack to a Pauli, so accept/reject and the logical residual follow classically.
//!
//! Probability-valued code is generic over [`Real`]; the aliases below fix `f64`
//! (and `f32` with a `32` suffix).

pub mod adversary;
pub mod bounds;
pub mod concat;
pub mod error;
pub mod estimation;
pub mod noise;
pub mod pauli;
pub mod scalar;
pub mod schemes;
pub mod stabilizer;

pub use adversary::{realize_attack, worst_case_sweep, AttackSpec, SweepResult};
pub use bounds::{
    binomial_mean_lower_bound, chernoff_sampling_bound, clifford_security_bound, delta_auth, failure_bound_report,
    qubit_scaling, register_union_bound, scheme_exponents, threshold_correctness_bound, threshold_security_bound,
    threshold_value_report, trap_purity_bound, trap_refined_purity_bound, BoundReport, RefinedBound, Scaling,
    SchemeExponents, SchemeKind,
};
pub use concat::{failure_bound, threshold_value, ConcatenatedCode};
pub use error::{Error, Result};
pub use estimation::{
    derive_seed, estimate_correctness, estimate_logical_failure, estimate_security, exact_purity_oracle,
    EstimateResult, LetterCounts, OracleValue,
};
pub use noise::PauliChannel;
pub use pauli::{Pauli, PauliOperator, Weights};
pub use scalar::Real;
pub use schemes::{DecodeOutcome, PermutationKey, Scheme, SchemeSpec};
pub use stabilizer::{CodeParams, ErrorClass, StabilizerCode};

pub type Channel = PauliChannel<f64>;
pub type Channel32 = PauliChannel<f32>;
pub type Report = BoundReport<f64>;
pub type Report32 = BoundReport<f32>;
pub type Estimate = EstimateResult<f64>;
pub type Estimate32 = EstimateResult<f32>;
pub type Sweep = SweepResult<f64>;
pub type ScalingReport = Scaling<f64>;
