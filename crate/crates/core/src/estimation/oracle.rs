//! Exact harm probability of a fixed-letter attack, by enumeration over where a
//! uniformly random key sends each letter.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};
use crate::schemes::{Scheme, SchemeSpec};
use crate::stabilizer::ErrorClass;

/// Number of X, Y and Z letters in an attack; the rest are identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LetterCounts {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl LetterCounts {
    pub fn new(x: usize, y: usize, z: usize) -> Self {
        Self { x, y, z }
    }

    pub fn weight(&self) -> usize {
        self.x + self.y + self.z
    }

    pub fn of(e: &PauliOperator) -> Self {
        let mut c = Self::new(0, 0, 0);
        for l in e.letters() {
            match l {
                Pauli::X => c.x += 1,
                Pauli::Y => c.y += 1,
                Pauli::Z => c.z += 1,
                Pauli::I => {}
            }
        }
        c
    }
}

/// Exact harm probabilities under two readings of "harm" on the data block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleValue {
    /// Accepted and the decoder leaves a non-identity logical.
    pub decoder: BigRational,
    /// Accepted and the data error is itself a non-trivial logical operator
    /// (zero syndrome, outside the stabilizer).
    pub undetected_logical: BigRational,
}

impl OracleValue {
    pub fn decoder_f64(&self) -> f64 {
        self.decoder.to_f64().unwrap_or(f64::NAN)
    }

    pub fn undetected_logical_f64(&self) -> f64 {
        self.undetected_logical.to_f64().unwrap_or(f64::NAN)
    }
}

const MAX_ORACLE_QUBITS: usize = 7;

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

fn multinomial(n: usize, parts: &[usize]) -> BigUint {
    let used: usize = parts.iter().sum();
    debug_assert!(used <= n);
    let denom = parts
        .iter()
        .chain(std::iter::once(&(n - used)))
        .fold(BigUint::from(1u32), |acc, &k| acc * factorial(k));
    factorial(n) / denom
}

/// Exact probability, over a uniform key, that an attack with the given letter counts
/// is accepted with corrupted data. Supports trap and threshold schemes on at most
/// seven inner qubits without an outer code.
pub fn exact_purity_oracle(scheme: &SchemeSpec, counts: LetterCounts) -> Result<OracleValue> {
    let (inner, r) = match scheme.scheme() {
        Scheme::Trap { inner } => (inner, 1),
        Scheme::Threshold { inner, r, .. } => (inner, *r),
        Scheme::Clifford { .. } => return Err(Error::Parameter("the oracle covers trap and threshold schemes".into())),
    };
    if scheme.outer().is_some() {
        return Err(Error::Parameter("the oracle does not model an outer code".into()));
    }
    let n = inner.n_total();
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::TooLarge(format!(
            "oracle enumerates 4^n data patterns; n = {n} exceeds {MAX_ORACLE_QUBITS}"
        )));
    }
    if counts.weight() > 3 * n {
        return Err(Error::Parameter(format!(
            "attack weight {} exceeds {} qubits",
            counts.weight(),
            3 * n
        )));
    }
    let c = [counts.x, counts.y, counts.z];
    let total = multinomial(3 * n, &c);

    let mut decoder_harm = BigUint::zero();
    let mut logical_harm = BigUint::zero();
    let mut letters = vec![Pauli::I; n];
    for pattern in 0..(1usize << (2 * n)) {
        let mut d = [0usize; 3];
        for (j, slot) in letters.iter_mut().enumerate() {
            *slot = Pauli::from_code(((pattern >> (2 * j)) & 3) as u8);
            match *slot {
                Pauli::X => d[0] += 1,
                Pauli::Y => d[1] += 1,
                Pauli::Z => d[2] += 1,
                Pauli::I => {}
            }
        }
        if (0..3).any(|k| d[k] > c[k]) {
            continue;
        }
        let residual_harm = !inner.decode_letters(&letters).is_identity();
        let logical = if inner.levels() == 0 {
            residual_harm
        } else {
            inner.base().classify(&PauliOperator::from_letters(&letters))? == ErrorClass::UndetectedLogical
        };
        if !residual_harm && !logical {
            continue;
        }
        let rest = [c[0] - d[0], c[1] - d[1], c[2] - d[2]];
        let ways = accepted_trap_arrangements(n, rest, r);
        if residual_harm {
            decoder_harm += &ways;
        }
        if logical {
            logical_harm += &ways;
        }
    }
    let frac = |num: BigUint| BigRational::new(num.into(), total.clone().into());
    Ok(OracleValue {
        decoder: frac(decoder_harm),
        undetected_logical: frac(logical_harm),
    })
}

/// Ways to place the remaining letters over the `|0⟩` and `|+⟩` blocks so that fewer
/// than `r` traps fire.
fn accepted_trap_arrangements(n: usize, rest: [usize; 3], r: usize) -> BigUint {
    let mut ways = BigUint::zero();
    for ax in 0..=rest[0] {
        for ay in 0..=rest[1] {
            for az in 0..=rest[2] {
                let a = [ax, ay, az];
                let b = [rest[0] - ax, rest[1] - ay, rest[2] - az];
                if a.iter().sum::<usize>() > n || b.iter().sum::<usize>() > n {
                    continue;
                }
                // |0⟩ fires on X or Y, |+⟩ on Z or Y
                let triggers = a[0] + a[1] + b[2] + b[1];
                if triggers < r {
                    ways += multinomial(n, &a) * multinomial(n, &b);
                }
            }
        }
    }
    ways
}
