//! Recursive concatenation of a base `[[n, 1, d]]` code and its hard-decision
//! level-by-level decoder.

use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::pauli::{Pauli, PauliOperator};
use crate::scalar::Real;
use crate::stabilizer::{CodeParams, StabilizerCode};

/// `M` levels of a base code: `[[n^M, 1, d^M]]`. Zero levels is the bare qubit.
#[derive(Debug, Clone)]
pub struct ConcatenatedCode {
    base: Arc<StabilizerCode>,
    levels: u32,
    n_total: usize,
}

impl ConcatenatedCode {
    pub fn new(base: Arc<StabilizerCode>, levels: u32) -> Result<Self> {
        let n_total = base
            .n()
            .checked_pow(levels)
            .filter(|&n| n <= 1 << 26)
            .ok_or_else(|| Error::Parameter(format!("{} levels of {} is too many qubits", levels, base.name())))?;
        Ok(Self { base, levels, n_total })
    }

    pub fn builtin(name: &str, levels: u32) -> Result<Self> {
        Self::new(Arc::new(StabilizerCode::builtin(name)?), levels)
    }

    pub fn base(&self) -> &StabilizerCode {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<StabilizerCode> {
        &self.base
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn d_total(&self) -> u64 {
        (self.base.d() as u64).pow(self.levels)
    }

    /// Errors of weight up to `(d^M - 1) / 2` are always corrected.
    pub fn t_total(&self) -> u64 {
        (self.d_total() - 1) / 2
    }

    /// Decodes a physical error down to the logical residual of the top-level qubit.
    pub fn decode(&self, e: &PauliOperator) -> Result<Pauli> {
        check_dim(self.n_total, e.num_qubits())?;
        Ok(self.decode_letters(&e.letters()))
    }

    /// Same as [`decode`](Self::decode) on a slice of letters of length `n_total`.
    pub fn decode_letters(&self, letters: &[Pauli]) -> Pauli {
        debug_assert_eq!(letters.len(), self.n_total);
        if self.levels == 0 {
            return letters[0];
        }
        let n = self.base.n();
        let mut layer: Vec<Pauli> = letters
            .chunks_exact(n)
            .map(|block| self.base.decode_letters(block))
            .collect();
        while layer.len() > 1 {
            let next: Vec<Pauli> = layer
                .chunks_exact(n)
                .map(|block| self.base.decode_letters(block))
                .collect();
            layer = next;
        }
        layer[0]
    }
}

/// `binom(n, t + 1)^{-1}`: the per-qubit error rate below which adding levels helps.
pub fn threshold_value<T: Real>(base: CodeParams) -> T {
    T::one() / binomial::<T>(base.n, base.t() + 1)
}

/// Upper bound `C^{-1} (C p)^{(t+1)^M}` on the logical failure probability of `M`
/// levels under i.i.d. noise of strength `p`, with `C = binom(n, t + 1)`.
/// Evaluated in log space and clamped to `[0, 1]`.
pub fn failure_bound<T: Real>(base: CodeParams, levels: u32, p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Parameter(format!("p = {p} must lie in [0, 1]")));
    }
    if levels == 0 {
        return Err(Error::Parameter("failure bound needs at least one level".into()));
    }
    if p == T::zero() {
        return Ok(T::zero());
    }
    let c = binomial::<T>(base.n, base.t() + 1);
    let exponent = T::from_count(base.t() + 1).powi(levels as i32);
    let log_bound = -c.ln() + exponent * (c.ln() + p.ln());
    Ok(log_bound.exp().clamp_unit())
}

pub(crate) fn binomial<T: Real>(n: u64, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| acc * T::from_count(n - i) / T::from_count(i + 1))
}
