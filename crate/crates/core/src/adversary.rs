//! Pauli attacks and the worst-case search over attack weight.
//!
//! Under a uniform permutation key the harm probability depends only on the multiset
//! of attack letters, so random attacks of each weight stand in for structured ones.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{derive_seed, estimate_security, EstimateResult};
use crate::pauli::PauliOperator;
use crate::scalar::Real;
use crate::schemes::SchemeSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttackSpec {
    /// A fresh uniformly random weight-`w` Pauli per trial.
    FixedWeight(usize),
    FixedPattern(PauliOperator),
    /// Every weight in `min..=max` stepping by `step`.
    WeightSweep {
        min: usize,
        max: usize,
        step: usize,
    },
}

impl AttackSpec {
    /// The weights a sweep visits, or the single weight of a fixed attack.
    pub fn weights(&self) -> Vec<usize> {
        match self {
            AttackSpec::FixedWeight(w) => vec![*w],
            AttackSpec::FixedPattern(p) => vec![p.weight()],
            AttackSpec::WeightSweep { min, max, step } => (*min..=*max).step_by((*step).max(1)).collect(),
        }
    }

    pub fn validate(&self, n_total: usize) -> Result<()> {
        match self {
            AttackSpec::FixedPattern(p) if p.num_qubits() != n_total => Err(Error::Dimension {
                expected: n_total,
                actual: p.num_qubits(),
            }),
            AttackSpec::WeightSweep { step: 0, .. } => Err(Error::Parameter("sweep step must be positive".into())),
            AttackSpec::WeightSweep { min, max, .. } if min > max => {
                Err(Error::Parameter(format!("empty sweep {min}..={max}")))
            }
            _ => match self.weights().into_iter().max() {
                Some(w) if w > n_total => Err(Error::Parameter(format!(
                    "attack weight {w} exceeds the {n_total} available qubits"
                ))),
                _ => Ok(()),
            },
        }
    }

    /// One concrete attack operator.
    pub fn realize<R: Rng + ?Sized>(&self, n_total: usize, rng: &mut R) -> Result<PauliOperator> {
        match self {
            AttackSpec::FixedWeight(w) => PauliOperator::sample_fixed_weight(*w, n_total, rng),
            AttackSpec::FixedPattern(p) => {
                self.validate(n_total)?;
                Ok(p.clone())
            }
            AttackSpec::WeightSweep { .. } => Err(Error::Parameter(
                "a weight sweep is run point by point, not realized".into(),
            )),
        }
    }
}

pub fn realize_attack<R: Rng + ?Sized>(spec: &AttackSpec, n_total: usize, rng: &mut R) -> Result<PauliOperator> {
    spec.realize(n_total, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult<T> {
    /// Weight with the largest estimated harm probability.
    pub w_star: usize,
    pub delta_hat: EstimateResult<T>,
    pub per_w: Vec<(usize, EstimateResult<T>)>,
}

/// Estimates the harm probability of random weight-`w` attacks for every `w` given
/// and reports the worst. Each weight gets its own seed derived from `master_seed`.
pub fn worst_case_sweep<T: Real>(
    scheme: &SchemeSpec,
    key_trials: u64,
    weights: &[usize],
    master_seed: u64,
) -> Result<SweepResult<T>> {
    if weights.is_empty() {
        return Err(Error::Parameter("sweep needs at least one weight".into()));
    }
    let per_w = weights
        .par_iter()
        .map(|&w| {
            let est = estimate_security(
                scheme,
                &AttackSpec::FixedWeight(w),
                key_trials,
                derive_seed(master_seed, w as u64),
            )?;
            Ok((w, est))
        })
        .collect::<Result<Vec<_>>>()?;
    // first maximum wins, so ties resolve to the smallest weight
    let (w_star, delta_hat) = per_w
        .iter()
        .fold(None::<&(usize, EstimateResult<T>)>, |best, cur| match best {
            Some(b) if b.1.point >= cur.1.point => Some(b),
            _ => Some(cur),
        })
        .copied()
        .expect("non-empty sweep");
    Ok(SweepResult {
        w_star,
        delta_hat,
        per_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concat::ConcatenatedCode;
    use crate::pauli::Pauli;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn trap() -> SchemeSpec {
        SchemeSpec::trap(ConcatenatedCode::builtin("five", 1).unwrap())
    }

    #[test]
    fn realize_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(AttackSpec::FixedWeight(0).realize(15, &mut rng).unwrap().is_identity());
        let p: PauliOperator = "XIYZ".parse().unwrap();
        assert_eq!(AttackSpec::FixedPattern(p.clone()).realize(4, &mut rng).unwrap(), p);
        assert!(AttackSpec::FixedPattern(p).realize(5, &mut rng).is_err());
        for w in 0..=15 {
            assert_eq!(AttackSpec::FixedWeight(w).realize(15, &mut rng).unwrap().weight(), w);
        }
        assert!(AttackSpec::FixedWeight(16).realize(15, &mut rng).is_err());
        let sweep = AttackSpec::WeightSweep {
            min: 1,
            max: 5,
            step: 2,
        };
        assert!(sweep.realize(15, &mut rng).is_err());
        assert_eq!(sweep.weights(), vec![1, 3, 5]);
    }

    #[test]
    fn validation() {
        assert!(AttackSpec::WeightSweep {
            min: 0,
            max: 16,
            step: 1
        }
        .validate(15)
        .is_err());
        assert!(AttackSpec::WeightSweep {
            min: 3,
            max: 1,
            step: 1
        }
        .validate(15)
        .is_err());
        assert!(AttackSpec::WeightSweep {
            min: 0,
            max: 3,
            step: 0
        }
        .validate(15)
        .is_err());
        assert!(AttackSpec::WeightSweep {
            min: 0,
            max: 15,
            step: 5
        }
        .validate(15)
        .is_ok());
    }

    #[test]
    fn sweep_on_five_qubit_trap() {
        let res: SweepResult<f64> = worst_case_sweep(&trap(), 20_000, &[0, 1, 2, 3, 8], 11).unwrap();
        assert_eq!(res.per_w.len(), 5);
        assert_eq!(res.per_w[0].1.failures, 0);
        assert_eq!(res.per_w[1].1.failures, 0);
        assert!(res.delta_hat.point > 0.0);
        assert!(res.delta_hat.ci_low <= 1.0 / 9.0);
        let again: SweepResult<f64> = worst_case_sweep(&trap(), 20_000, &[0, 1, 2, 3, 8], 11).unwrap();
        assert_eq!(res, again);
    }

    #[test]
    fn ties_resolve_to_first_weight() {
        let res: SweepResult<f64> = worst_case_sweep(&trap(), 1_000, &[1, 0], 2).unwrap();
        assert_eq!(res.w_star, 1);
        assert!(worst_case_sweep::<f64>(&trap(), 1_000, &[], 2).is_err());
    }

    #[test]
    fn pattern_attack_matches_oracle() {
        use crate::estimation::{exact_purity_oracle, LetterCounts};
        let logical = PauliOperator::from_letters(&[Pauli::Z; 5]).tensor(&PauliOperator::identity(10));
        let exact = exact_purity_oracle(&trap(), LetterCounts::of(&logical))
            .unwrap()
            .decoder_f64();
        let est: EstimateResult<f64> =
            estimate_security(&trap(), &AttackSpec::FixedPattern(logical), 50_000, 3).unwrap();
        assert!(est.contains(exact), "{est:?} vs {exact}");
    }
}
