//! Independent, identically distributed single-qubit Pauli channels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Applies `X`, `Y`, `Z` to each qubit independently with probabilities
/// `p_x`, `p_y`, `p_z`, and leaves it untouched otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel<T> {
    p_x: T,
    p_y: T,
    p_z: T,
}

impl<T: Real> PauliChannel<T> {
    pub fn new(p_x: T, p_y: T, p_z: T) -> Result<Self> {
        for (name, v) in [("p_x", p_x), ("p_y", p_y), ("p_z", p_z)] {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::Parameter(format!("{name} = {v} must lie in [0, 1]")));
            }
        }
        // allow one ulp of slack so that depolarizing(1) is accepted
        if p_x + p_y + p_z > T::one() + T::epsilon() * T::lit(4.0) {
            return Err(Error::Parameter(format!(
                "p_x + p_y + p_z = {} exceeds 1",
                p_x + p_y + p_z
            )));
        }
        Ok(Self { p_x, p_y, p_z })
    }

    /// Each of `X`, `Y`, `Z` with probability `p / 3`.
    pub fn depolarizing(p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::Parameter(format!(
                "depolarizing probability {p} must lie in [0, 1]"
            )));
        }
        let third = p / T::lit(3.0);
        Self::new(third, third, third)
    }

    pub fn identity() -> Self {
        Self {
            p_x: T::zero(),
            p_y: T::zero(),
            p_z: T::zero(),
        }
    }

    pub fn p_x(&self) -> T {
        self.p_x
    }

    pub fn p_y(&self) -> T {
        self.p_y
    }

    pub fn p_z(&self) -> T {
        self.p_z
    }

    /// Total error mass `p_x + p_y + p_z`.
    pub fn p_error(&self) -> T {
        self.p_x + self.p_y + self.p_z
    }

    /// Probabilities that a `|0⟩` trap (sensitive to X components) and a `|+⟩`
    /// trap (sensitive to Z components) are triggered.
    pub fn trap_trigger_probabilities(&self) -> (T, T) {
        (self.p_x + self.p_y, self.p_z + self.p_y)
    }

    pub(crate) fn cumulative(&self) -> [f64; 3] {
        let (x, y, z) = (self.p_x.as_f64(), self.p_y.as_f64(), self.p_z.as_f64());
        [x, x + y, x + y + z]
    }
}
