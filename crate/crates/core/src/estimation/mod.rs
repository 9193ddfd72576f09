//! Monte Carlo estimators of correctness and security failure probabilities, and the
//! exact enumeration oracle they are checked against.
//!
//! Every trial draws from its own ChaCha8 stream selected by the trial index, so the
//! counts are identical for any number of worker threads.

mod interval;
mod oracle;

pub use interval::{interval_99, normal_upper_quantile, wilson, zero_failure_upper, Z_99};
pub use oracle::{exact_purity_oracle, LetterCounts, OracleValue};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::AttackSpec;
use crate::concat::ConcatenatedCode;
use crate::error::{Error, Result};
use crate::noise::PauliChannel;
use crate::pauli::{sample_letter, Pauli};
use crate::scalar::Real;
use crate::schemes::{DecodeOutcome, SchemeSpec};

/// Point estimate with a 99% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult<T> {
    pub point: T,
    pub ci_low: T,
    pub ci_high: T,
    pub trials: u64,
    pub failures: u64,
    /// Trials that ended in rejection.
    pub rejects: u64,
    /// Trials accepted with a non-identity logical residual.
    pub harmful_accepts: u64,
    pub master_seed: u64,
}

impl<T: Real> EstimateResult<T> {
    pub(crate) fn from_counts(failures: u64, tally: Tally, master_seed: u64) -> Self {
        let trials = tally.trials;
        let point = T::from_count(failures) / T::from_count(trials);
        let (ci_low, ci_high) = interval_99(failures, trials);
        Self {
            point,
            ci_low,
            ci_high,
            trials,
            failures,
            rejects: tally.rejects,
            harmful_accepts: tally.harmful,
            master_seed,
        }
    }

    /// Binomial standard error of the point estimate.
    pub fn std_error(&self) -> T {
        (self.point * (T::one() - self.point) / T::from_count(self.trials)).sqrt()
    }

    /// Wilson interval at an arbitrary normal quantile.
    pub fn interval_at(&self, z: f64) -> (T, T) {
        wilson(self.failures, self.trials, z)
    }

    pub fn contains(&self, value: T) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    trials: u64,
    rejects: u64,
    harmful: u64,
}

impl Tally {
    fn record(outcome: DecodeOutcome) -> Self {
        Self {
            trials: 1,
            rejects: outcome.is_reject() as u64,
            harmful: outcome.is_harmful() as u64,
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            trials: self.trials + other.trials,
            rejects: self.rejects + other.rejects,
            harmful: self.harmful + other.harmful,
        }
    }
}

/// The random stream for one trial of one experiment.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Derives an independent master seed for a sub-experiment (SplitMix64 finalizer).
pub fn derive_seed(master_seed: u64, tag: u64) -> u64 {
    let mut z = master_seed ^ tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_trials<F>(trials: u64, trial: F) -> Result<Tally>
where
    F: Fn(u64) -> Result<DecodeOutcome> + Sync,
{
    if trials == 0 {
        return Err(Error::Parameter("at least one trial is required".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|i| trial(i).map(Tally::record))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

/// Honest-channel failure probability: reject or accept with a corrupted logical.
pub fn estimate_correctness<T: Real>(
    scheme: &SchemeSpec,
    channel: &PauliChannel<T>,
    trials: u64,
    master_seed: u64,
) -> Result<EstimateResult<T>> {
    let cdf = channel.cumulative();
    let n = scheme.physical_qubits();
    let needs_key = scheme.inner().is_some();
    let tally = run_trials(trials, |i| {
        let mut rng = trial_rng(master_seed, i);
        let key = if needs_key {
            Some(scheme.keygen(&mut rng)?)
        } else {
            None
        };
        let noise: Vec<Pauli> = (0..n).map(|_| sample_letter(&cdf, &mut rng)).collect();
        scheme.decode_letters(&noise, key.as_ref(), &mut rng)
    })?;
    let failures = tally.rejects + tally.harmful;
    Ok(EstimateResult::from_counts(failures, tally, master_seed))
}

/// Logical failure rate of a bare concatenated code under i.i.d. channel noise.
/// Counts are reported as `harmful_accepts`; a code never rejects.
pub fn estimate_logical_failure<T: Real>(
    code: &ConcatenatedCode,
    channel: &PauliChannel<T>,
    trials: u64,
    master_seed: u64,
) -> Result<EstimateResult<T>> {
    let cdf = channel.cumulative();
    let n = code.n_total();
    let tally = run_trials(trials, |i| {
        let mut rng = trial_rng(master_seed, i);
        let noise: Vec<Pauli> = (0..n).map(|_| sample_letter(&cdf, &mut rng)).collect();
        Ok(DecodeOutcome::Accept(code.decode_letters(&noise)))
    })?;
    Ok(EstimateResult::from_counts(tally.harmful, tally, master_seed))
}

/// Probability over the key (and the attack's letters, for fixed-weight attacks)
/// that a noiseless adversarial Pauli is accepted with corrupted data.
pub fn estimate_security<T: Real>(
    scheme: &SchemeSpec,
    attack: &AttackSpec,
    key_trials: u64,
    master_seed: u64,
) -> Result<EstimateResult<T>> {
    let n = scheme.physical_qubits();
    attack.validate(n)?;
    let needs_key = scheme.inner().is_some();
    let tally = run_trials(key_trials, |i| {
        let mut rng = trial_rng(master_seed, i);
        let key = if needs_key {
            Some(scheme.keygen(&mut rng)?)
        } else {
            None
        };
        let e = attack.realize(n, &mut rng)?;
        scheme.decode_letters(&e.letters(), key.as_ref(), &mut rng)
    })?;
    Ok(EstimateResult::from_counts(tally.harmful, tally, master_seed))
}
