//! Phase-free n-qubit Pauli operators in symplectic (x, z) form.
//!
//! Qubit `j` carries `I` when `(x_j, z_j) = (0, 0)`, `X` for `(1, 0)`, `Z` for
//! `(0, 1)` and `Y` for `(1, 1)`. The `i^k` phase of the Pauli group is not
//! represented: every predicate in this crate (syndromes, trap triggers, logical
//! residuals) depends only on commutation relations.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::noise::PauliChannel;
use crate::scalar::Real;

const WORD: usize = 64;

/// Single-qubit Pauli letter. The discriminant packs `x | z << 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Z = 2,
    Y = 3,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        Self::from_code(x as u8 | (z as u8) << 1)
    }

    #[inline]
    pub(crate) fn from_code(code: u8) -> Self {
        match code & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Z,
            _ => Pauli::Y,
        }
    }

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn has_x(self) -> bool {
        self.code() & 1 != 0
    }

    #[inline]
    pub fn has_z(self) -> bool {
        self.code() & 2 != 0
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    #[inline]
    pub fn commutes(self, other: Pauli) -> bool {
        let s = (self.has_x() & other.has_z()) ^ (self.has_z() & other.has_x());
        !s
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' | '_' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Phase-stripped product.
impl std::ops::Mul for Pauli {
    type Output = Pauli;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)] // multiplication is XOR of the symplectic bits
    fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_code(self.code() ^ other.code())
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Weight statistics of a Pauli operator. A `Y` counts towards both `w_x` and `w_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weights {
    pub w: usize,
    pub w_x: usize,
    pub w_z: usize,
}

/// An n-qubit Pauli operator stored as packed x/z bit vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    num_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

impl PauliOperator {
    pub fn identity(num_qubits: usize) -> Self {
        let words = words_for(num_qubits);
        Self {
            num_qubits,
            x: vec![0; words],
            z: vec![0; words],
        }
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut p = Self::identity(letters.len());
        for (j, &l) in letters.iter().enumerate() {
            p.set(j, l);
        }
        p
    }

    /// Builds an operator from explicit bit vectors of equal length.
    pub fn from_bits(x_bits: &[bool], z_bits: &[bool]) -> Result<Self> {
        check_dim(x_bits.len(), z_bits.len())?;
        let letters: Vec<Pauli> = x_bits
            .iter()
            .zip(z_bits)
            .map(|(&x, &z)| Pauli::from_bits(x, z))
            .collect();
        Ok(Self::from_letters(&letters))
    }

    /// A single non-identity letter at `qubit`.
    pub fn single(num_qubits: usize, qubit: usize, letter: Pauli) -> Self {
        let mut p = Self::identity(num_qubits);
        p.set(qubit, letter);
        p
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn get(&self, qubit: usize) -> Pauli {
        assert!(qubit < self.num_qubits, "qubit {qubit} out of range");
        let (w, b) = (qubit / WORD, qubit % WORD);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    #[inline]
    pub fn set(&mut self, qubit: usize, letter: Pauli) {
        assert!(qubit < self.num_qubits, "qubit {qubit} out of range");
        let (w, b) = (qubit / WORD, qubit % WORD);
        let mask = 1u64 << b;
        self.x[w] = (self.x[w] & !mask) | ((letter.has_x() as u64) << b);
        self.z[w] = (self.z[w] & !mask) | ((letter.has_z() as u64) << b);
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.num_qubits).map(|j| self.get(j)).collect()
    }

    pub fn x_bits(&self) -> Vec<bool> {
        (0..self.num_qubits).map(|j| self.get(j).has_x()).collect()
    }

    pub fn z_bits(&self) -> Vec<bool> {
        (0..self.num_qubits).map(|j| self.get(j).has_z()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Phase-stripped product: componentwise XOR of the symplectic coordinates.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_dim(self.num_qubits, other.num_qubits)?;
        Ok(Self {
            num_qubits: self.num_qubits,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Symplectic inner product mod 2 (`true` when the operators anticommute).
    pub fn symplectic(&self, other: &Self) -> Result<bool> {
        check_dim(self.num_qubits, other.num_qubits)?;
        let ones: u32 = self
            .x
            .iter()
            .zip(&other.z)
            .zip(self.z.iter().zip(&other.x))
            .map(|((ax, bz), (az, bx))| ((ax & bz) ^ (az & bx)).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.symplectic(other).map(|s| !s)
    }

    pub fn weights(&self) -> Weights {
        let pop = |v: &[u64]| v.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        let support: usize = self
            .x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum();
        Weights {
            w: support,
            w_x: pop(&self.x),
            w_z: pop(&self.z),
        }
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.weights().w
    }

    /// The contiguous sub-operator on qubits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        let letters: Vec<Pauli> = (start..start + len).map(|j| self.get(j)).collect();
        Self::from_letters(&letters)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut letters = self.letters();
        letters.extend(other.letters());
        Self::from_letters(&letters)
    }

    /// Relabels qubits: qubit `j` of `self` moves to position `sigma[j]`.
    pub fn relabel(&self, sigma: &[usize]) -> Result<Self> {
        check_dim(self.num_qubits, sigma.len())?;
        let mut out = Self::identity(self.num_qubits);
        for (j, &target) in sigma.iter().enumerate() {
            out.set(target, self.get(j));
        }
        Ok(out)
    }

    /// Samples i.i.d. single-qubit noise from `channel` on `n` qubits.
    pub fn sample_from_channel<T: Real, R: Rng + ?Sized>(channel: &PauliChannel<T>, n: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(n);
        let cdf = channel.cumulative();
        if cdf[2] <= 0.0 {
            return p;
        }
        for j in 0..n {
            let letter = sample_letter(&cdf, rng);
            if !letter.is_identity() {
                p.set(j, letter);
            }
        }
        p
    }

    /// Uniformly random support of size `w`, each supported qubit uniform in {X, Y, Z}.
    pub fn sample_fixed_weight<R: Rng + ?Sized>(w: usize, n: usize, rng: &mut R) -> Result<Self> {
        if w > n {
            return Err(Error::Parameter(format!(
                "attack weight {w} exceeds the {n} available qubits"
            )));
        }
        let mut p = Self::identity(n);
        for j in index::sample(rng, n, w) {
            p.set(j, Pauli::NON_IDENTITY[rng.random_range(0..3)]);
        }
        Ok(p)
    }
}

/// Draws one letter given the cumulative masses `[p_x, p_x + p_y, p_x + p_y + p_z]`.
#[inline]
pub(crate) fn sample_letter<R: Rng + ?Sized>(cdf: &[f64; 3], rng: &mut R) -> Pauli {
    let u: f64 = rng.random();
    if u >= cdf[2] {
        Pauli::I
    } else if u < cdf[0] {
        Pauli::X
    } else if u < cdf[1] {
        Pauli::Y
    } else {
        Pauli::Z
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.num_qubits {
            write!(f, "{}", self.get(j))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator(\"{self}\")")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("invalid Pauli letter `{c}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok(Self::from_letters(&letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::PauliChannel;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn letter_products_drop_phases() {
        assert_eq!(Pauli::X * Pauli::Z, Pauli::Y);
        assert_eq!(Pauli::Y * Pauli::Y, Pauli::I);
        assert_eq!(Pauli::I * Pauli::Z, Pauli::Z);
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(p("XI").multiply(&p("ZI")).unwrap(), p("YI"));
        assert_eq!(p("XZ").multiply(&p("ZZ")).unwrap(), p("YI"));
        let q = p("XYZIY");
        assert!(q.multiply(&q).unwrap().is_identity());
    }

    #[test]
    fn multiply_rejects_mismatch() {
        assert!(matches!(
            p("XI").multiply(&p("X")),
            Err(Error::Dimension { expected: 2, actual: 1 })
        ));
        assert!(p("XI").commutes(&p("XII")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("XYZ").commutes(&p("III")).unwrap());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(p("XIYZ").weights(), Weights { w: 3, w_x: 2, w_z: 2 });
        assert_eq!(p("IIII").weights(), Weights { w: 0, w_x: 0, w_z: 0 });
        assert_eq!(p("YY").weights(), Weights { w: 2, w_x: 2, w_z: 2 });
    }

    #[test]
    fn text_round_trip_and_errors() {
        let s = "XIYZIIZY";
        assert_eq!(p(s).to_string(), s);
        assert!("XQ".parse::<PauliOperator>().is_err());
        assert!("".parse::<PauliOperator>().is_err());
    }

    #[test]
    fn wide_operators_cross_word_boundaries() {
        let mut a = PauliOperator::identity(130);
        a.set(0, Pauli::X);
        a.set(64, Pauli::Y);
        a.set(129, Pauli::Z);
        assert_eq!(a.weights(), Weights { w: 3, w_x: 2, w_z: 2 });
        let b = PauliOperator::single(130, 129, Pauli::X);
        assert!(!a.commutes(&b).unwrap());
        assert_eq!(a.slice(64, 66).get(0), Pauli::Y);
    }

    #[test]
    fn zero_channel_gives_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ch = PauliChannel::<f64>::new(0.0, 0.0, 0.0).unwrap();
        for _ in 0..100 {
            assert!(PauliOperator::sample_from_channel(&ch, 17, &mut rng).is_identity());
        }
    }

    #[test]
    fn full_depolarizing_hits_every_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ch = PauliChannel::<f64>::depolarizing(1.0).unwrap();
        for _ in 0..100 {
            assert_eq!(PauliOperator::sample_from_channel(&ch, 23, &mut rng).weight(), 23);
        }
    }

    #[test]
    fn half_depolarizing_fraction_within_three_sigma() {
        let n = 100_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ch = PauliChannel::<f64>::depolarizing(0.5).unwrap();
        let w = PauliOperator::sample_from_channel(&ch, n, &mut rng).weight() as f64;
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((w - 0.5 * n as f64).abs() <= 3.0 * sigma, "weight {w}");
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let ch = PauliChannel::<f64>::depolarizing(0.3).unwrap();
        let a = PauliOperator::sample_from_channel(&ch, 50, &mut ChaCha8Rng::seed_from_u64(9));
        let b = PauliOperator::sample_from_channel(&ch, 50, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_weight_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(PauliOperator::sample_fixed_weight(0, 9, &mut rng)
            .unwrap()
            .is_identity());
        assert_eq!(PauliOperator::sample_fixed_weight(9, 9, &mut rng).unwrap().weight(), 9);
        assert!(matches!(
            PauliOperator::sample_fixed_weight(10, 9, &mut rng),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn fixed_weight_one_is_uniform_over_positions() {
        let trials = 60_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut hits = [0usize; 3];
        for _ in 0..trials {
            let e = PauliOperator::sample_fixed_weight(1, 3, &mut rng).unwrap();
            let j = (0..3).find(|&j| !e.get(j).is_identity()).unwrap();
            hits[j] += 1;
        }
        let mean = trials as f64 / 3.0;
        let sigma = (trials as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for h in hits {
            assert!((h as f64 - mean).abs() <= 3.0 * sigma, "{hits:?}");
        }
    }

    fn all_paulis(n: usize) -> Vec<PauliOperator> {
        (0..4usize.pow(n as u32))
            .map(|mut code| {
                let letters: Vec<Pauli> = (0..n)
                    .map(|_| {
                        let l = Pauli::from_code((code & 3) as u8);
                        code >>= 2;
                        l
                    })
                    .collect();
                PauliOperator::from_letters(&letters)
            })
            .collect()
    }

    #[test]
    fn group_laws_exhaustive_small_n() {
        for n in 1..=3 {
            let all = all_paulis(n);
            let id = PauliOperator::identity(n);
            for a in &all {
                assert_eq!(&a.multiply(&id).unwrap(), a);
                for b in &all {
                    let ab = a.multiply(b).unwrap();
                    assert_eq!(a.commutes(b).unwrap(), b.commutes(a).unwrap());
                    if n <= 2 {
                        for c in &all {
                            let left = ab.multiply(c).unwrap();
                            let right = a.multiply(&b.multiply(c).unwrap()).unwrap();
                            assert_eq!(left, right);
                        }
                    }
                }
            }
        }
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        proptest::collection::vec(0u8..4, n)
            .prop_map(|v| PauliOperator::from_letters(&v.into_iter().map(Pauli::from_code).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn symplectic_form_is_bilinear(
            (a, b, c) in (1usize..90).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
        ) {
            let bc = b.multiply(&c).unwrap();
            prop_assert_eq!(
                a.symplectic(&bc).unwrap(),
                a.symplectic(&b).unwrap() ^ a.symplectic(&c).unwrap()
            );
            prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
        }

        #[test]
        fn support_triangle_inequality(
            (a, b) in (1usize..90).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
        ) {
            prop_assert!(a.multiply(&b).unwrap().weight() <= a.weight() + b.weight());
        }

        #[test]
        fn fixed_weight_has_exact_support(n in 1usize..200, frac in 0.0f64..=1.0, seed in any::<u64>()) {
            let w = ((n as f64) * frac) as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = PauliOperator::sample_fixed_weight(w, n, &mut rng).unwrap();
            prop_assert_eq!(e.weight(), w);
        }

        #[test]
        fn display_parse_round_trip(a in (1usize..100).prop_flat_map(arb_pauli)) {
            prop_assert_eq!(a.to_string().parse::<PauliOperator>().unwrap(), a);
        }
    }
}
