//! Pauli-frame decoders for the trap, threshold and Clifford authentication schemes,
//! standalone or wrapped in an outer concatenated code.
//!
//! The one-time pad, the plaintext and the encoding circuits are never simulated.
//! Every quantity of interest is a function of the net Pauli error in the decoder's
//! frame and of the permutation key.
//!
//! Register layout for the trap and threshold schemes (after undoing the key
//! permutation): registers `0..n` hold the inner codeword, `n..2n` are `|0⟩` traps and
//! `2n..3n` are `|+⟩` traps, where `n` is the inner code's physical size. A key maps
//! register `j` to the transmitted position `perm[j]`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::concat::ConcatenatedCode;
use crate::error::{check_dim, Error, Result};
use crate::pauli::{Pauli, PauliOperator};

/// Secret permutation key over the `3n` registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationKey {
    perm: Vec<usize>,
    n: usize,
}

impl PermutationKey {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..3 * n).collect(),
            n,
        }
    }

    /// Uniform key over `3n` registers (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..3 * n).collect();
        perm.shuffle(rng);
        Self { perm, n }
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        if !perm.len().is_multiple_of(3) || perm.is_empty() {
            return Err(Error::Parameter(format!(
                "key length {} is not a positive multiple of 3",
                perm.len()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parameter("key is not a bijection".into()));
            }
        }
        let n = perm.len() / 3;
        Ok(Self { perm, n })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn block_size(&self) -> usize {
        self.n
    }

    /// `sigma ∘ perm`: the key that sees `e.relabel(sigma)` exactly as `self` sees `e`.
    pub fn then(&self, sigma: &[usize]) -> Result<Self> {
        check_dim(self.perm.len(), sigma.len())?;
        Self::from_perm(self.perm.iter().map(|&p| sigma[p]).collect())
    }

    /// Letters in register order (the inverse permutation applied to `e`).
    fn unpermute(&self, e: &[Pauli]) -> Vec<Pauli> {
        self.perm.iter().map(|&p| e[p]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecodeOutcome {
    Reject,
    /// Accepted, leaving the given logical Pauli on the data.
    Accept(Pauli),
}

impl DecodeOutcome {
    /// Accepted with corrupted data: the event security is measured against.
    pub fn is_harmful(self) -> bool {
        matches!(self, DecodeOutcome::Accept(r) if !r.is_identity())
    }

    /// Anything other than `Accept(I)`: the event correctness is measured against.
    pub fn is_failure(self) -> bool {
        self != DecodeOutcome::Accept(Pauli::I)
    }

    pub fn is_reject(self) -> bool {
        self == DecodeOutcome::Reject
    }
}

/// Number of triggered traps in register-ordered letters.
fn trap_triggers(registers: &[Pauli], n: usize) -> usize {
    let comp = registers[n..2 * n].iter().filter(|l| l.has_x()).count();
    let had = registers[2 * n..3 * n].iter().filter(|l| l.has_z()).count();
    comp + had
}

fn threshold_decode_letters(key: &PermutationKey, inner: &ConcatenatedCode, r: usize, e: &[Pauli]) -> DecodeOutcome {
    let n = inner.n_total();
    let registers = key.unpermute(e);
    if trap_triggers(&registers, n) < r {
        DecodeOutcome::Accept(inner.decode_letters(&registers[..n]))
    } else {
        DecodeOutcome::Reject
    }
}

fn check_key(key: &PermutationKey, inner: &ConcatenatedCode) -> Result<()> {
    check_dim(inner.n_total(), key.block_size())
}

/// Rejects on any triggered trap; otherwise decodes the data block.
pub fn trap_decode(key: &PermutationKey, inner: &ConcatenatedCode, e: &PauliOperator) -> Result<DecodeOutcome> {
    threshold_decode(key, inner, 1, e)
}

/// Accepts iff strictly fewer than `r` traps are triggered.
pub fn threshold_decode(
    key: &PermutationKey,
    inner: &ConcatenatedCode,
    r: usize,
    e: &PauliOperator,
) -> Result<DecodeOutcome> {
    check_key(key, inner)?;
    check_dim(3 * inner.n_total(), e.num_qubits())?;
    if r > 2 * inner.n_total() {
        return Err(Error::Parameter(format!(
            "threshold r = {r} exceeds the {} traps",
            2 * inner.n_total()
        )));
    }
    Ok(threshold_decode_letters(key, inner, r, &e.letters()))
}

/// Clifford scheme in the twirl model: a non-identity attack becomes a uniformly
/// random non-identity Pauli on the data and trap registers; any X component on a
/// `|0⟩` trap rejects.
///
/// With `data_size > 1` only whether the residual is the identity is meaningful;
/// the reported letter is that of the first corrupted data qubit.
pub fn clifford_decode<R: Rng + ?Sized>(
    num_traps: usize,
    data_size: usize,
    attack_nonidentity: bool,
    rng: &mut R,
) -> Result<DecodeOutcome> {
    if num_traps == 0 || data_size == 0 {
        return Err(Error::Parameter(
            "Clifford scheme needs at least one data qubit and one trap".into(),
        ));
    }
    if !attack_nonidentity {
        return Ok(DecodeOutcome::Accept(Pauli::I));
    }
    Ok(twirled_outcome(num_traps, data_size, rng))
}

fn twirled_outcome<R: Rng + ?Sized>(num_traps: usize, data_size: usize, rng: &mut R) -> DecodeOutcome {
    let total = num_traps + data_size;
    loop {
        let letters: Vec<Pauli> = (0..total).map(|_| Pauli::from_code(rng.random_range(0..4u8))).collect();
        if letters.iter().all(|l| l.is_identity()) {
            continue;
        }
        if letters[data_size..].iter().any(|l| l.has_x()) {
            return DecodeOutcome::Reject;
        }
        let residual = letters[..data_size]
            .iter()
            .copied()
            .find(|l| !l.is_identity())
            .unwrap_or(Pauli::I);
        return DecodeOutcome::Accept(residual);
    }
}

/// Which authentication scheme is run on the registers.
#[derive(Debug, Clone)]
pub enum Scheme {
    Trap {
        inner: ConcatenatedCode,
    },
    Threshold {
        inner: ConcatenatedCode,
        alpha: f64,
        r: usize,
    },
    Clifford {
        data_size: usize,
        num_traps: usize,
    },
}

/// A scheme plus an optional outer code wrapping every register.
#[derive(Debug, Clone)]
pub struct SchemeSpec {
    scheme: Scheme,
    outer: Option<ConcatenatedCode>,
}

impl SchemeSpec {
    pub fn trap(inner: ConcatenatedCode) -> Self {
        Self {
            scheme: Scheme::Trap { inner },
            outer: None,
        }
    }

    /// Threshold scheme accepting while fewer than `α·n` traps fire, i.e. `r = ⌈α n⌉`.
    pub fn threshold(inner: ConcatenatedCode, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha = {alpha} must lie in (0, 1)")));
        }
        let r = (alpha * inner.n_total() as f64).ceil() as usize;
        Ok(Self {
            scheme: Scheme::Threshold { inner, alpha, r },
            outer: None,
        })
    }

    /// Threshold scheme with an explicit trap count `r`; `alpha` is reported as `r / n`.
    pub fn threshold_with_r(inner: ConcatenatedCode, r: usize) -> Result<Self> {
        let n = inner.n_total();
        if r > 2 * n {
            return Err(Error::Parameter(format!(
                "threshold r = {r} exceeds the {} traps",
                2 * n
            )));
        }
        let alpha = r as f64 / n as f64;
        Ok(Self {
            scheme: Scheme::Threshold { inner, alpha, r },
            outer: None,
        })
    }

    pub fn clifford(data_size: usize, num_traps: usize) -> Result<Self> {
        if num_traps == 0 || data_size == 0 {
            return Err(Error::Parameter(
                "Clifford scheme needs at least one data qubit and one trap".into(),
            ));
        }
        Ok(Self {
            scheme: Scheme::Clifford { data_size, num_traps },
            outer: None,
        })
    }

    pub fn with_outer(mut self, outer: ConcatenatedCode) -> Self {
        self.outer = Some(outer);
        self
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn outer(&self) -> Option<&ConcatenatedCode> {
        self.outer.as_ref()
    }

    pub fn inner(&self) -> Option<&ConcatenatedCode> {
        match &self.scheme {
            Scheme::Trap { inner } | Scheme::Threshold { inner, .. } => Some(inner),
            Scheme::Clifford { .. } => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.scheme {
            Scheme::Trap { .. } => "trap",
            Scheme::Threshold { .. } => "threshold",
            Scheme::Clifford { .. } => "clifford",
        }
    }

    /// Number of logical registers handed to the authentication decoder.
    pub fn registers(&self) -> usize {
        match &self.scheme {
            Scheme::Trap { inner } | Scheme::Threshold { inner, .. } => 3 * inner.n_total(),
            Scheme::Clifford { data_size, num_traps } => data_size + num_traps,
        }
    }

    /// Physical qubits sent over the channel.
    pub fn physical_qubits(&self) -> usize {
        self.registers() * self.outer.as_ref().map_or(1, |o| o.n_total())
    }

    /// Samples a permutation key; the Clifford scheme has none in this model.
    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PermutationKey> {
        match self.inner() {
            Some(inner) => Ok(PermutationKey::random(inner.n_total(), rng)),
            None => Err(Error::Parameter("the Clifford scheme takes no permutation key".into())),
        }
    }

    /// Decodes at the register level, ignoring any outer code.
    fn decode_registers<R: Rng + ?Sized>(
        &self,
        registers: &[Pauli],
        key: Option<&PermutationKey>,
        rng: &mut R,
    ) -> Result<DecodeOutcome> {
        match &self.scheme {
            Scheme::Trap { inner } | Scheme::Threshold { inner, .. } => {
                let r = match self.scheme {
                    Scheme::Threshold { r, .. } => r,
                    _ => 1,
                };
                let key = key.ok_or_else(|| Error::Parameter("trap-type schemes need a key".into()))?;
                check_key(key, inner)?;
                Ok(threshold_decode_letters(key, inner, r, registers))
            }
            Scheme::Clifford { data_size, num_traps } => {
                clifford_decode(*num_traps, *data_size, registers.iter().any(|l| !l.is_identity()), rng)
            }
        }
    }

    /// Full decode of a physical error: outer blocks first (if any), then the
    /// authentication decoder on the resulting register-level error.
    pub fn decode<R: Rng + ?Sized>(
        &self,
        e: &PauliOperator,
        key: Option<&PermutationKey>,
        rng: &mut R,
    ) -> Result<DecodeOutcome> {
        check_dim(self.physical_qubits(), e.num_qubits())?;
        self.decode_letters(&e.letters(), key, rng)
    }

    pub(crate) fn decode_letters<R: Rng + ?Sized>(
        &self,
        letters: &[Pauli],
        key: Option<&PermutationKey>,
        rng: &mut R,
    ) -> Result<DecodeOutcome> {
        match &self.outer {
            None => self.decode_registers(letters, key, rng),
            Some(outer) => {
                let registers: Vec<Pauli> = letters
                    .chunks_exact(outer.n_total())
                    .map(|block| outer.decode_letters(block))
                    .collect();
                self.decode_registers(&registers, key, rng)
            }
        }
    }
}

/// Decode of a scheme that carries an outer code; errors if there is none.
pub fn composed_decode<R: Rng + ?Sized>(
    scheme: &SchemeSpec,
    e: &PauliOperator,
    key: Option<&PermutationKey>,
    rng: &mut R,
) -> Result<DecodeOutcome> {
    if scheme.outer().is_none() {
        return Err(Error::Parameter("composed decode needs an outer code".into()));
    }
    scheme.decode(e, key, rng)
}
