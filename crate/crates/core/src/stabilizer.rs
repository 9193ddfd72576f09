//! Single-logical-qubit stabilizer codes with table-driven minimum-weight decoding.
//!
//! Builtin generator choices (qubits indexed from 0, left to right):
//!
//! | code         | generators                                                     | logical X | logical Z |
//! |--------------|----------------------------------------------------------------|-----------|-----------|
//! | `five_qubit` | `XZZXI IXZZX XIXZZ ZXIXZ`                                      | `XXXXX`   | `ZZZZZ`   |
//! | `steane`     | `XIXIXIX IXXIIXX IIIXXXX ZIZIZIZ IZZIIZZ IIIZZZZ`              | `XXXXXXX` | `ZZZZZZZ` |
//!
//! The Steane generators are the rows of the `[7,4]` Hamming parity-check matrix
//! used once as an X-type and once as a Z-type check.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::pauli::{Pauli, PauliOperator};

/// Block size above which the full `4^n` residual table is not materialized.
const MAX_TABLE_QUBITS: usize = 10;

/// Size and distance of an `[[n, 1, d]]` code; all analytic formulas are driven by these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: u64,
    pub d: u64,
}

impl CodeParams {
    pub fn new(n: u64, d: u64) -> Result<Self> {
        if n == 0 || d == 0 || d.is_multiple_of(2) {
            return Err(Error::Parameter(format!(
                "code parameters need n >= 1 and odd d >= 1 (got n={n}, d={d})"
            )));
        }
        Ok(Self { n, d })
    }

    /// Number of correctable errors `(d - 1) / 2`.
    pub fn t(&self) -> u64 {
        (self.d - 1) / 2
    }
}

/// Outcome of checking an error against the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorClass {
    /// Zero syndrome and trivial logical action (an element of S).
    InStabilizer,
    /// Non-zero syndrome.
    Detected,
    /// Zero syndrome but non-trivial logical action (S⊥ \ S).
    UndetectedLogical,
}

#[derive(Clone)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    d: usize,
    generators: Vec<PauliOperator>,
    logical_x: PauliOperator,
    logical_z: PauliOperator,
    /// Minimum-weight correction per syndrome, indexed by the syndrome bits
    /// (bit `j` set iff the error anticommutes with generator `j`).
    decode_table: Vec<PauliOperator>,
    /// Logical residual of every `n`-qubit error, indexed by `Σ code(letter_j) << 2j`.
    block_residuals: Vec<Pauli>,
}

impl fmt::Debug for StabilizerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StabilizerCode")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("d", &self.d)
            .field("generators", &self.generators)
            .finish_non_exhaustive()
    }
}

impl StabilizerCode {
    /// Builds a code from explicit generators and logicals, validating the stabilizer
    /// invariants and populating the decode tables.
    pub fn new(
        name: impl Into<String>,
        d: usize,
        generators: Vec<PauliOperator>,
        logical_x: PauliOperator,
        logical_z: PauliOperator,
    ) -> Result<Self> {
        let n = logical_x.num_qubits();
        if n == 0 || n > MAX_TABLE_QUBITS {
            return Err(Error::Parameter(format!(
                "block size {n} outside the supported range 1..={MAX_TABLE_QUBITS}"
            )));
        }
        if generators.len() + 1 != n {
            return Err(Error::Parameter(format!(
                "an [[{n},1]] code needs {} generators, got {}",
                n - 1,
                generators.len()
            )));
        }
        check_dim(n, logical_z.num_qubits())?;
        for (i, g) in generators.iter().enumerate() {
            check_dim(n, g.num_qubits())?;
            for h in &generators[..i] {
                if !g.commutes(h)? {
                    return Err(Error::Parameter(format!("generators {g} and {h} anticommute")));
                }
            }
            if !g.commutes(&logical_x)? || !g.commutes(&logical_z)? {
                return Err(Error::Parameter(format!(
                    "generator {g} does not commute with the logical operators"
                )));
            }
        }
        if logical_x.commutes(&logical_z)? {
            return Err(Error::Parameter("logical X and Z must anticommute".into()));
        }
        if d == 0 || d.is_multiple_of(2) {
            return Err(Error::Parameter(format!("distance {d} must be odd")));
        }

        let mut code = Self {
            name: name.into(),
            n,
            d,
            generators,
            logical_x,
            logical_z,
            decode_table: Vec::new(),
            block_residuals: Vec::new(),
        };
        code.build_tables()?;
        Ok(code)
    }

    fn build_tables(&mut self) -> Result<()> {
        let n = self.n;
        let m = self.generators.len();
        let all: Vec<PauliOperator> = (0..1usize << (2 * n)).map(|idx| block_from_index(idx, n)).collect();

        // weight order, ties broken by lexicographic (x_bits, z_bits)
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.sort_by_cached_key(|&i| (all[i].weight(), all[i].x_bits(), all[i].z_bits()));

        let mut table: Vec<Option<PauliOperator>> = vec![None; 1 << m];
        let mut filled = 0;
        for i in order {
            let s = self.syndrome_index(&all[i]);
            if table[s].is_none() {
                table[s] = Some(all[i].clone());
                filled += 1;
                if filled == table.len() {
                    break;
                }
            }
        }
        if filled != table.len() {
            return Err(Error::Parameter(format!(
                "generators of {} are not independent: only {filled} of {} syndromes reachable",
                self.name,
                table.len()
            )));
        }
        self.decode_table = table.into_iter().map(Option::unwrap).collect();
        self.block_residuals = all.iter().map(|e| self.residual_uncached(e)).collect();
        Ok(())
    }

    /// Returns a builtin code by name: `five_qubit` (alias `five`) or `steane`.
    pub fn builtin(name: &str) -> Result<Self> {
        let ops = |v: &[&str]| v.iter().map(|s| s.parse::<PauliOperator>()).collect::<Result<Vec<_>>>();
        match name {
            "five_qubit" | "five" | "5" => Self::new(
                "five_qubit",
                3,
                ops(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])?,
                "XXXXX".parse()?,
                "ZZZZZ".parse()?,
            ),
            "steane" | "7" => Self::new(
                "steane",
                3,
                ops(&["XIXIXIX", "IXXIIXX", "IIIXXXX", "ZIZIZIZ", "IZZIIZZ", "IIIZZZZ"])?,
                "XXXXXXX".parse()?,
                "ZZZZZZZ".parse()?,
            ),
            other => Err(Error::UnknownCode(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Short CLI-facing name.
    pub fn short_name(&self) -> &str {
        match self.name.as_str() {
            "five_qubit" => "five",
            other => other,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        (self.d - 1) / 2
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.n as u64,
            d: self.d as u64,
        }
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &PauliOperator {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliOperator {
        &self.logical_z
    }

    /// Minimum-weight correction for a syndrome.
    pub fn correction(&self, syndrome: &[bool]) -> Result<&PauliOperator> {
        check_dim(self.generators.len(), syndrome.len())?;
        let idx = syndrome
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (b as usize) << j);
        Ok(&self.decode_table[idx])
    }

    fn syndrome_index(&self, e: &PauliOperator) -> usize {
        self.generators.iter().enumerate().fold(0usize, |acc, (j, g)| {
            acc | (g.symplectic(e).expect("dimension checked") as usize) << j
        })
    }

    /// Bit `j` is set iff `e` anticommutes with generator `j`.
    pub fn syndrome(&self, e: &PauliOperator) -> Result<Vec<bool>> {
        check_dim(self.n, e.num_qubits())?;
        self.generators.iter().map(|g| g.symplectic(e)).collect()
    }

    pub fn classify(&self, e: &PauliOperator) -> Result<ErrorClass> {
        check_dim(self.n, e.num_qubits())?;
        if self.syndrome_index(e) != 0 {
            return Ok(ErrorClass::Detected);
        }
        // zero syndrome puts e in S⊥; it lies in S iff it acts trivially on the logical qubit
        let trivial = e.commutes(&self.logical_x)? && e.commutes(&self.logical_z)?;
        Ok(if trivial {
            ErrorClass::InStabilizer
        } else {
            ErrorClass::UndetectedLogical
        })
    }

    fn residual_uncached(&self, e: &PauliOperator) -> Pauli {
        let c = &self.decode_table[self.syndrome_index(e)];
        let r = e.multiply(c).expect("dimension checked");
        let flips_z = r.symplectic(&self.logical_z).expect("dimension checked");
        let flips_x = r.symplectic(&self.logical_x).expect("dimension checked");
        Pauli::from_bits(flips_z, flips_x)
    }

    /// Logical Pauli left on the encoded qubit after syndrome decoding.
    pub fn decode_to_logical(&self, e: &PauliOperator) -> Result<Pauli> {
        check_dim(self.n, e.num_qubits())?;
        Ok(self.block_residuals[block_index(&e.letters())])
    }

    /// Table lookup used by the concatenated decoder; `letters.len()` must equal `n`.
    #[inline]
    pub(crate) fn decode_letters(&self, letters: &[Pauli]) -> Pauli {
        debug_assert_eq!(letters.len(), self.n);
        self.block_residuals[block_index(letters)]
    }
}

#[inline]
fn block_index(letters: &[Pauli]) -> usize {
    letters
        .iter()
        .enumerate()
        .fold(0usize, |acc, (j, l)| acc | (l.code() as usize) << (2 * j))
}

fn block_from_index(mut idx: usize, n: usize) -> PauliOperator {
    let letters: Vec<Pauli> = (0..n)
        .map(|_| {
            let l = Pauli::from_code((idx & 3) as u8);
            idx >>= 2;
            l
        })
        .collect();
    PauliOperator::from_letters(&letters)
}

/// Every `n`-qubit Pauli with weight exactly `w`.
pub fn paulis_of_weight(n: usize, w: usize) -> Vec<PauliOperator> {
    (0..1usize << (2 * n))
        .map(|i| block_from_index(i, n))
        .filter(|p| p.weight() == w)
        .collect()
}

/// Pauli-string fixture form of a code, used for pinning generator choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFixture {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub generators: Vec<String>,
    pub logical_x: String,
    pub logical_z: String,
}

impl From<&StabilizerCode> for CodeFixture {
    fn from(c: &StabilizerCode) -> Self {
        Self {
            name: c.name.clone(),
            n: c.n,
            d: c.d,
            generators: c.generators.iter().map(ToString::to_string).collect(),
            logical_x: c.logical_x.to_string(),
            logical_z: c.logical_z.to_string(),
        }
    }
}

impl TryFrom<&CodeFixture> for StabilizerCode {
    type Error = Error;

    fn try_from(f: &CodeFixture) -> Result<Self> {
        let generators = f.generators.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?;
        let code = Self::new(
            f.name.clone(),
            f.d,
            generators,
            f.logical_x.parse()?,
            f.logical_z.parse()?,
        )?;
        check_dim(f.n, code.n)?;
        Ok(code)
    }
}

/// Syndrome → correction map for inspection and reporting.
pub fn decode_table_map(code: &StabilizerCode) -> HashMap<Vec<bool>, PauliOperator> {
    code.decode_table
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let s = (0..code.generators.len()).map(|j| (idx >> j) & 1 == 1).collect();
            (s, c.clone())
        })
        .collect()
}
