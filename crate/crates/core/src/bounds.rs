//! Closed-form correctness and security bounds, level counts and scaling exponents.
//!
//! Every formula is evaluated in log space where exponents can reach `(t+1)^M`, and
//! probability-valued results above one are clamped and flagged vacuous.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::concat::threshold_value;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stabilizer::CodeParams;

/// Uniform carrier for an evaluated bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<T> {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: T,
    /// The raw formula was at least one and has been clamped.
    pub vacuous: bool,
    #[serde(rename = "ref")]
    pub formula_ref: String,
}

impl<T: Real> BoundReport<T> {
    fn probability(name: &str, formula: &str, inputs: &[(&str, f64)], raw: T) -> Self {
        Self {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value: raw.clamp_unit(),
            vacuous: raw >= T::one(),
            formula_ref: formula.to_string(),
        }
    }
}

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn levels_exponent<T: Real>(base: CodeParams, levels: u32) -> T {
    T::from_count(base.t() + 1).powi(levels as i32)
}

fn block_size<T: Real>(base: CodeParams, levels: u32) -> T {
    T::from_count(base.n).powi(levels as i32)
}

fn log_base<T: Real>(x: T, base: T) -> T {
    x.ln() / base.ln()
}

/// `(1/3)^{(d+1)/2}` for odd `d`.
pub fn trap_purity_bound<T: Real>(d: u64) -> Result<BoundReport<T>> {
    if d == 0 || d.is_multiple_of(2) {
        return Err(domain(format!("distance d = {d} must be odd and positive")));
    }
    let value = T::lit(1.0 / 3.0).powi(d.div_ceil(2) as i32);
    Ok(BoundReport::probability(
        "trap_purity",
        "(1/3)^((d+1)/2)",
        &[("d", d as f64)],
        value,
    ))
}

/// Concatenation term plus Hoeffding trap term, `n = base.n^M`.
pub fn threshold_correctness_bound<T: Real>(base: CodeParams, levels: u32, p: T, alpha: T) -> Result<BoundReport<T>> {
    let p_thr: T = threshold_value(base);
    let four_thirds = T::lit(4.0 / 3.0);
    if !(p >= T::zero() && p < T::lit(0.75) * p_thr) {
        return Err(domain(format!(
            "need 0 <= p < 3 p_thr / 4 = {}, got p = {p}",
            T::lit(0.75) * p_thr
        )));
    }
    if !(alpha > four_thirds * p && alpha < T::one()) {
        return Err(domain(format!(
            "need 4p/3 < alpha < 1, got alpha = {alpha}, 4p/3 = {}",
            four_thirds * p
        )));
    }
    let n = block_size::<T>(base, levels);
    let ecc = concatenation_term(p_thr, p, levels_exponent(base, levels));
    let gap = alpha - four_thirds * p;
    let traps = (-n * gap * gap).exp();
    Ok(BoundReport::probability(
        "threshold_correctness",
        "p_thr (p/p_thr)^((t+1)^M) + exp(-n (alpha - 4p/3)^2)",
        &[
            ("n", base.n as f64),
            ("d", base.d as f64),
            ("M", levels as f64),
            ("p", p.as_f64()),
            ("alpha", alpha.as_f64()),
        ],
        ecc + traps,
    ))
}

/// `p_thr (p / p_thr)^E`, zero at `p = 0`.
fn concatenation_term<T: Real>(p_thr: T, p: T, exponent: T) -> T {
    if p == T::zero() {
        return T::zero();
    }
    (p_thr.ln() + exponent * (p / p_thr).ln()).exp()
}

fn threshold_security_terms<T: Real>(base: CodeParams, levels: u32, alpha: T) -> (T, T) {
    let p_thr: T = threshold_value(base);
    let n = block_size::<T>(base, levels);
    let e = levels_exponent::<T>(base, levels);
    let log_ecc = p_thr.ln() + T::lit(9.0).ln() + e * (alpha / p_thr).ln()
        - T::lit(10.0).ln()
        - T::lit(0.5) * (T::lit(6.0) * T::PI() * n * alpha * (T::one() - alpha)).ln();
    (log_ecc.exp(), (-alpha * n / T::lit(4.0)).exp())
}

/// `max{ECC-evasion term, trap-evasion term}` for `0 < alpha < p_thr`.
pub fn threshold_security_bound<T: Real>(base: CodeParams, levels: u32, alpha: T) -> Result<BoundReport<T>> {
    let p_thr: T = threshold_value(base);
    if !(alpha > T::zero() && alpha < p_thr) {
        return Err(domain(format!("need 0 < alpha < p_thr = {p_thr}, got alpha = {alpha}")));
    }
    let (ecc, traps) = threshold_security_terms(base, levels, alpha);
    Ok(BoundReport::probability(
        "threshold_security",
        "max{p_thr 9 (alpha/p_thr)^((t+1)^M) / (10 sqrt(6 pi n alpha (1-alpha))), exp(-alpha n / 4)}",
        &[
            ("n", base.n as f64),
            ("d", base.d as f64),
            ("M", levels as f64),
            ("alpha", alpha.as_f64()),
        ],
        ecc.max(traps),
    ))
}

/// One grid point of the refined trap bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedPoint<T> {
    pub omega: u64,
    pub detection: T,
    pub ecc: T,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedBound<T> {
    pub report: BoundReport<T>,
    pub per_omega: Vec<RefinedPoint<T>>,
}

/// The two terms of the refined trap bound at attack weight `omega`.
pub fn trap_refined_terms<T: Real>(base: CodeParams, levels: u32, omega: u64) -> (T, T) {
    let p_thr: T = threshold_value(base);
    let n = block_size::<T>(base, levels);
    let three_n = T::lit(3.0) * n;
    let w = T::from_count(omega);
    let detection = T::lit(2.0 / 3.0).powf(w / T::lit(2.0));
    let spread = T::lit(2.0) * T::PI() * w * (T::one() - w / three_n);
    let ecc = if omega == 0 || spread <= T::zero() {
        T::infinity()
    } else {
        let log_ecc = p_thr.ln() + T::lit(9.0).ln() + levels_exponent::<T>(base, levels) * (w / (three_n * p_thr)).ln()
            - T::lit(10.0).ln()
            - T::lit(0.5) * spread.ln();
        log_ecc.exp()
    };
    (detection, ecc)
}

/// Max over `omega` in the grid of `min{(2/3)^{omega/2}, ECC term}`. Weights below the
/// total correction radius `t = (d^M - 1)/2` are always corrected and are skipped;
/// `None` uses the full grid `t..=3n`.
pub fn trap_refined_purity_bound<T: Real>(
    base: CodeParams,
    levels: u32,
    grid: Option<&[u64]>,
) -> Result<RefinedBound<T>> {
    let n_total = base
        .n
        .checked_pow(levels)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| Error::TooLarge(format!("{levels} levels of n = {}", base.n)))?;
    let t_total = (base.d.pow(levels) - 1) / 2;
    let full: Vec<u64>;
    let grid = match grid {
        Some(g) => g,
        None => {
            full = (t_total.max(1)..=3 * n_total).collect();
            &full
        }
    };
    if let Some(&w) = grid.iter().find(|&&w| w > 3 * n_total) {
        return Err(domain(format!("omega = {w} exceeds the {} registers", 3 * n_total)));
    }
    let per_omega: Vec<RefinedPoint<T>> = grid
        .iter()
        .filter(|&&w| w >= t_total.max(1))
        .map(|&omega| {
            let (detection, ecc) = trap_refined_terms::<T>(base, levels, omega);
            RefinedPoint {
                omega,
                detection,
                ecc,
                value: detection.min(ecc),
            }
        })
        .collect();
    let raw = per_omega.iter().map(|pt| pt.value).fold(T::zero(), T::max);
    let report = BoundReport::probability(
        "trap_refined_purity",
        "max_{omega >= t} min{(2/3)^(omega/2), p_thr 9 (omega/(3n p_thr))^((t+1)^M) / (10 sqrt(2 pi omega (1 - omega/3n)))}",
        &[("n", base.n as f64), ("d", base.d as f64), ("M", levels as f64)],
        raw,
    );
    Ok(RefinedBound { report, per_omega })
}

/// Lower bound `0.9 / sqrt(2 pi n p (1-p))` on the binomial pmf at its (integer) mean.
pub fn binomial_mean_lower_bound<T: Real>(n: u64, p: Ratio<u64>) -> Result<BoundReport<T>> {
    if *p.numer() == 0 || p.numer() >= p.denom() {
        return Err(domain(format!("p = {p} must lie in (0, 1)")));
    }
    if n < 3 {
        return Err(domain(format!("need n >= 3, got {n}")));
    }
    let mean = Ratio::from_integer(n) * p;
    if !mean.is_integer() || mean.to_integer() < 1 {
        return Err(domain(format!("n p = {mean} must be a positive integer")));
    }
    let pf = T::from_count(*p.numer()) / T::from_count(*p.denom());
    let var = T::from_count(n) * pf * (T::one() - pf);
    let value = T::lit(0.9) / (T::lit(2.0) * T::PI() * var).sqrt();
    Ok(BoundReport::probability(
        "binomial_mean_lower",
        "0.9 / sqrt(2 pi n p (1-p))",
        &[("n", n as f64), ("p", pf.as_f64())],
        value,
    ))
}

/// `exp(-gamma^2 (|B|/|A|) k / 2)` for a uniform size-`k` subset of `A` hitting `B`.
pub fn chernoff_sampling_bound<T: Real>(size_a: u64, size_b: u64, k: u64, gamma: T) -> Result<BoundReport<T>> {
    if !(k > 0 && k < size_a) {
        return Err(domain(format!("need 0 < k < |A|, got k = {k}, |A| = {size_a}")));
    }
    if size_b > size_a {
        return Err(domain(format!("|B| = {size_b} exceeds |A| = {size_a}")));
    }
    if !(gamma > T::zero() && gamma <= T::one()) {
        return Err(domain(format!("gamma = {gamma} must lie in (0, 1]")));
    }
    let frac = T::from_count(size_b) / T::from_count(size_a);
    let value = (-gamma * gamma * frac * T::from_count(k) / T::lit(2.0)).exp();
    Ok(BoundReport::probability(
        "chernoff_sampling",
        "exp(-gamma^2 (|B|/|A|) k / 2)",
        &[
            ("A", size_a as f64),
            ("B", size_b as f64),
            ("k", k as f64),
            ("gamma", gamma.as_f64()),
        ],
        value,
    ))
}

/// Security of the composed authentication scheme: `max{delta, 2^{-(n-1)}}`.
pub fn delta_auth<T: Real>(delta: T, n: u64) -> BoundReport<T> {
    let floor = T::lit(2.0).powf(-(T::from_count(n) - T::one()));
    BoundReport::probability(
        "delta_auth",
        "max{delta, 2^-(n-1)}",
        &[("delta", delta.as_f64()), ("n", n as f64)],
        delta.max(floor),
    )
}

/// [`failure_bound`](crate::concat::failure_bound) as a report.
pub fn failure_bound_report<T: Real>(base: CodeParams, levels: u32, p: T) -> Result<BoundReport<T>> {
    let value = crate::concat::failure_bound(base, levels, p)?;
    Ok(BoundReport::probability(
        "failure_bound",
        "(1/C(n,t+1)) (C(n,t+1) p)^((t+1)^M)",
        &[
            ("n", base.n as f64),
            ("d", base.d as f64),
            ("M", levels as f64),
            ("p", p.as_f64()),
        ],
        value,
    ))
}

/// The concatenation threshold `1 / C(n, t+1)`; never vacuous.
pub fn threshold_value_report<T: Real>(base: CodeParams) -> BoundReport<T> {
    let mut report = BoundReport::probability(
        "threshold_value",
        "1/C(n,t+1)",
        &[("n", base.n as f64), ("d", base.d as f64)],
        threshold_value::<T>(base),
    );
    report.vacuous = false;
    report
}

/// Harm probability of the Clifford scheme with `traps` trap qubits: `2^{-traps}`.
pub fn clifford_security_bound<T: Real>(traps: u64) -> Result<BoundReport<T>> {
    if traps == 0 {
        return Err(domain("the Clifford scheme needs at least one trap"));
    }
    Ok(BoundReport::probability(
        "clifford_security",
        "2^-traps",
        &[("traps", traps as f64)],
        T::lit(2.0).powf(-T::from_count(traps)),
    ))
}

/// Honest-noise failure of any scheme whose `registers` are each protected by `outer`
/// (or sent bare): a register that decodes correctly never causes a reject or harm, so
/// the failure is at most `registers * failure_bound(outer, L, p)` (`registers * p` bare).
pub fn register_union_bound<T: Real>(registers: u64, outer: Option<(CodeParams, u32)>, p: T) -> Result<BoundReport<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(domain(format!("p = {p} must lie in [0, 1]")));
    }
    let (per_register, mut inputs) = match outer {
        Some((code, levels)) if levels > 0 => (
            crate::concat::failure_bound(code, levels, p)?,
            vec![("n", code.n as f64), ("d", code.d as f64), ("L", levels as f64)],
        ),
        _ => (p, vec![("L", 0.0)]),
    };
    inputs.extend([("registers", registers as f64), ("p", p.as_f64())]);
    Ok(BoundReport::probability(
        "register_union_correctness",
        "registers * failure_bound(outer, L, p)",
        &inputs,
        T::from_count(registers) * per_register,
    ))
}

/// Qubit-growth exponents of each scheme when the same base code is used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeExponents<T> {
    /// `log_{t+1} n + log_{2t+1} n`
    pub trap: T,
    /// `1 + log_{t+1} n`
    pub clifford: T,
    /// `log_{t+1} n`
    pub threshold: T,
}

pub fn scheme_exponents<T: Real>(base: CodeParams) -> Result<SchemeExponents<T>> {
    let t = base.t();
    if t == 0 {
        return Err(domain("exponents need a code that corrects at least one error"));
    }
    let n = T::from_count(base.n);
    let c = log_base(n, T::from_count(t + 1));
    let c1 = log_base(n, T::from_count(2 * t + 1));
    Ok(SchemeExponents {
        trap: c + c1,
        clifford: T::one() + c,
        threshold: c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Trap,
    Threshold,
    Clifford,
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trap" => Ok(SchemeKind::Trap),
            "threshold" | "thr" => Ok(SchemeKind::Threshold),
            "clifford" => Ok(SchemeKind::Clifford),
            other => Err(Error::Parse(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Minimal buildable sizes meeting a target `(epsilon, delta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling<T> {
    pub kind: SchemeKind,
    /// Inner levels (trap, threshold) or outer levels (Clifford).
    pub m: u32,
    /// Outer levels of the composed trap scheme.
    pub l: Option<u32>,
    /// Trap count of the Clifford scheme.
    pub traps: Option<u64>,
    pub total_qubits: u128,
    /// Growth exponents of `log(1/epsilon)` and `log(1/delta)`.
    pub exponents: (T, T),
    pub alpha: Option<T>,
    pub achieved_epsilon: T,
    pub achieved_delta: T,
}

const MAX_LEVELS: u32 = 40;

fn first_level(mut ok: impl FnMut(u32) -> bool) -> Result<u32> {
    (0..=MAX_LEVELS)
        .find(|&m| ok(m))
        .ok_or_else(|| Error::TooLarge(format!("no level count up to {MAX_LEVELS} suffices")))
}

fn qubits(factor: u64, n: u64, levels: u32) -> Result<u128> {
    (n as u128)
        .checked_pow(levels)
        .and_then(|b| b.checked_mul(factor as u128))
        .ok_or_else(|| Error::TooLarge(format!("{factor} x {n}^{levels} qubits overflows")))
}

fn check_targets<T: Real>(epsilon: T, delta: T) -> Result<()> {
    let unit = |v: T| v > T::zero() && v < T::one();
    if !unit(epsilon) || !unit(delta) {
        return Err(domain(format!(
            "epsilon = {epsilon} and delta = {delta} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Minimal levels for `epsilon`-correctness and `delta`-security under depolarizing
/// noise `p`.
///
/// * trap: inner levels `M` from `(2t_1+1)^M >= 2 log(1/delta)/log 3 - 1`, then outer
///   levels `L` from the two correctness inequalities of the composed protocol (the
///   outer code's threshold governs the noise);
/// * threshold: `M` such that the concatenation and Hoeffding terms are each at most
///   `epsilon/2`, and both security terms at most `delta`; `alpha` defaults to the
///   midpoint of `(4p/3, p_thr)`;
/// * Clifford: `ceil(log2(1/delta))` traps, then outer levels `N` with a union bound over
///   all encoded registers.
pub fn qubit_scaling<T: Real>(
    kind: SchemeKind,
    inner: CodeParams,
    outer: Option<CodeParams>,
    epsilon: T,
    delta: T,
    p: T,
    alpha: Option<T>,
) -> Result<Scaling<T>> {
    check_targets(epsilon, delta)?;
    if !(p > T::zero() && p < T::one()) {
        return Err(domain(format!("p = {p} must lie in (0, 1)")));
    }
    match kind {
        SchemeKind::Trap => trap_scaling(inner, outer.unwrap_or(inner), epsilon, delta, p),
        SchemeKind::Threshold => threshold_scaling(inner, epsilon, delta, p, alpha),
        SchemeKind::Clifford => clifford_scaling(outer.unwrap_or(inner), epsilon, delta, p),
    }
}

fn below_threshold<T: Real>(code: CodeParams, p: T) -> Result<T> {
    let p_thr: T = threshold_value(code);
    if p >= p_thr {
        return Err(domain(format!("p = {p} is not below the threshold p_thr = {p_thr}")));
    }
    Ok(p_thr)
}

fn trap_scaling<T: Real>(inner: CodeParams, outer: CodeParams, epsilon: T, delta: T, p: T) -> Result<Scaling<T>> {
    if inner.t() == 0 || outer.t() == 0 {
        return Err(domain("both codes must correct at least one error"));
    }
    let p_thr = below_threshold(outer, p)?;
    let log3 = T::lit(3.0).ln();
    let sec_rhs = T::lit(2.0) * (T::one() / delta).ln() / log3 - T::one();
    let m = first_level(|m| T::from_count(2 * inner.t() + 1).powi(m as i32) >= sec_rhs)?;

    let gain = (p_thr / p).ln();
    let log_inv_eps = (T::one() / epsilon).ln();
    let e_inner = levels_exponent::<T>(inner, m);
    let log_n1m = T::from_count(m as u64) * T::from_count(inner.n).ln();
    let l = first_level(|l| {
        let e_outer = levels_exponent::<T>(outer, l);
        let data = e_outer * e_inner * gain >= log_inv_eps - (T::one() / p_thr).ln();
        let traps = -log_n1m + e_outer * gain >= log_inv_eps - (T::one() / (T::lit(2.0) * p_thr)).ln();
        data && traps
    })?;

    let e_outer = levels_exponent::<T>(outer, l);
    let data_fail = concatenation_term(p_thr, p, e_outer * e_inner);
    let trap_fail = T::lit(2.0) * block_size::<T>(inner, m) * concatenation_term(p_thr, p, e_outer);
    let d_inner = T::from_count(inner.d).powi(m as i32);
    let achieved_delta = T::lit(1.0 / 3.0).powf((d_inner + T::one()) / T::lit(2.0));
    let total = qubits(3, inner.n, m)?
        .checked_mul((outer.n as u128).checked_pow(l).unwrap_or(u128::MAX))
        .ok_or_else(|| Error::TooLarge("trap scheme qubit count overflows".into()))?;
    Ok(Scaling {
        kind: SchemeKind::Trap,
        m,
        l: Some(l),
        traps: None,
        total_qubits: total,
        exponents: (
            log_base(T::from_count(outer.n), T::from_count(outer.t() + 1)),
            log_base(T::from_count(inner.n), T::from_count(2 * inner.t() + 1)),
        ),
        alpha: None,
        achieved_epsilon: (data_fail + trap_fail).clamp_unit(),
        achieved_delta,
    })
}

fn threshold_scaling<T: Real>(base: CodeParams, epsilon: T, delta: T, p: T, alpha: Option<T>) -> Result<Scaling<T>> {
    if base.t() == 0 {
        return Err(domain("the inner code must correct at least one error"));
    }
    let p_thr: T = threshold_value(base);
    let four_thirds = T::lit(4.0 / 3.0);
    if p >= T::lit(0.75) * p_thr {
        return Err(domain(format!(
            "p = {p} is not below 3 p_thr / 4 = {}",
            T::lit(0.75) * p_thr
        )));
    }
    let alpha = alpha.unwrap_or((four_thirds * p + p_thr) / T::lit(2.0));
    if !(alpha > four_thirds * p && alpha < p_thr) {
        return Err(domain(format!("alpha = {alpha} must lie in (4p/3, p_thr)")));
    }
    let half_eps = epsilon / T::lit(2.0);
    let gap = alpha - four_thirds * p;
    let m = first_level(|m| {
        let n = block_size::<T>(base, m);
        let ecc = concatenation_term(p_thr, p, levels_exponent(base, m));
        let hoeffding = (-n * gap * gap).exp();
        let (sec_ecc, sec_traps) = threshold_security_terms(base, m, alpha);
        ecc <= half_eps && hoeffding <= half_eps && sec_ecc <= delta && sec_traps <= delta
    })?;
    let eps = threshold_correctness_bound(base, m, p, alpha)?.value;
    let del = threshold_security_bound(base, m, alpha)?.value;
    let c = log_base(T::from_count(base.n), T::from_count(base.t() + 1));
    Ok(Scaling {
        kind: SchemeKind::Threshold,
        m,
        l: None,
        traps: None,
        total_qubits: qubits(3, base.n, m)?,
        exponents: (c, c),
        alpha: Some(alpha),
        achieved_epsilon: eps,
        achieved_delta: del,
    })
}

fn clifford_scaling<T: Real>(outer: CodeParams, epsilon: T, delta: T, p: T) -> Result<Scaling<T>> {
    if outer.t() == 0 {
        return Err(domain("the outer code must correct at least one error"));
    }
    let p_thr = below_threshold(outer, p)?;
    let traps = (T::one() / delta).log2().ceil().to_u64().unwrap_or(u64::MAX).max(1);
    let registers = T::from_count(traps + 1);
    let n = first_level(|n| registers * concatenation_term(p_thr, p, levels_exponent(outer, n)) <= epsilon)?;
    let eps = registers * concatenation_term(p_thr, p, levels_exponent(outer, n));
    Ok(Scaling {
        kind: SchemeKind::Clifford,
        m: n,
        l: None,
        traps: Some(traps),
        total_qubits: qubits(traps + 1, outer.n, n)?,
        exponents: (log_base(T::from_count(outer.n), T::from_count(outer.t() + 1)), T::one()),
        alpha: None,
        achieved_epsilon: eps.clamp_unit(),
        achieved_delta: T::lit(2.0).powi(-(traps.min(i32::MAX as u64) as i32)),
    })
}
