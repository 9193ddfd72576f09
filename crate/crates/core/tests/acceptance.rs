//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p qauth-core --test acceptance`. Every Monte Carlo run uses
//! a seed derived from `MASTER_SEED`, so the printed counts are reproducible.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use qauth_core::estimation::{normal_upper_quantile, wilson, Z_99};
use qauth_core::{
    binomial_mean_lower_bound, chernoff_sampling_bound, derive_seed, estimate_correctness, estimate_logical_failure,
    estimate_security, exact_purity_oracle, failure_bound, scheme_exponents, threshold_correctness_bound,
    threshold_security_bound, worst_case_sweep, AttackSpec, Channel, CodeParams, ConcatenatedCode, Estimate,
    LetterCounts, Pauli, PauliOperator, SchemeSpec, Sweep,
};

const MASTER_SEED: u64 = 0x5eed_2024;

/// Growth exponents are quoted to two decimals.
const EXPONENT_TOL: f64 = 0.005;
/// One-sided slack, in standard errors, for Monte Carlo vs upper bounds.
const SIGMAS: f64 = 3.0;
/// Family-wise confidence of the oracle comparisons.
const ORACLE_FAMILY_CONFIDENCE: f64 = 0.99;

const C2_TRIALS: u64 = 1_000_000;
const C3_KEYS: u64 = 100_000;
const C4_TRIALS: u64 = 100_000;
const C5_KEYS: u64 = 100_000;
const C6_CORRECTNESS_TRIALS: u64 = 200_000;
const C6_SECURITY_KEYS: [u64; 3] = [100_000, 50_000, 20_000];
const C9_TRIALS: u64 = 1_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn five(levels: u32) -> ConcatenatedCode {
    ConcatenatedCode::builtin("five", levels).unwrap()
}

fn five_params() -> CodeParams {
    CodeParams::new(5, 3).unwrap()
}

fn std_err(e: &Estimate) -> f64 {
    e.std_error()
}

fn c1_growth_exponents() -> Outcome {
    let steane = scheme_exponents::<f64>(CodeParams::new(7, 3).unwrap()).unwrap();
    let five = scheme_exponents::<f64>(five_params()).unwrap();
    let rows = [
        ("steane trap", steane.trap, 4.58),
        ("steane clifford", steane.clifford, 3.81),
        ("steane threshold", steane.threshold, 2.81),
        ("five trap", five.trap, 3.79),
        ("five clifford", five.clifford, 3.32),
        ("five threshold", five.threshold, 2.32),
    ];
    let worst = rows.iter().map(|(_, got, want)| (got - want).abs()).fold(0.0, f64::max);
    let shown: Vec<String> = rows.iter().map(|(n, g, _)| format!("{n}={g:.4}")).collect();
    Outcome {
        pass: worst <= EXPONENT_TOL,
        detail: format!("{} (max dev {worst:.4})", shown.join(" ")),
    }
}

fn c2_concatenation_bound() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [1u32, 2] {
        for p in [0.005, 0.01, 0.02] {
            let seed = derive_seed(MASTER_SEED, 200 + 10 * m as u64 + (p * 1000.0) as u64);
            let est = estimate_logical_failure(&five(m), &Channel::depolarizing(p).unwrap(), C2_TRIALS, seed).unwrap();
            let bound: f64 = failure_bound(five_params(), m, p).unwrap();
            let ok = est.point <= bound + SIGMAS * std_err(&est);
            pass &= ok;
            parts.push(format!(
                "M={m} p={p}: {:.3e} vs {bound:.3e}{}",
                est.point,
                if ok { "" } else { " !" }
            ));
        }
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c3_trap_purity() -> Outcome {
    let scheme = SchemeSpec::trap(five(1));
    let weights: Vec<usize> = (1..=15).collect();
    let sweep: Sweep = worst_case_sweep(&scheme, C3_KEYS, &weights, derive_seed(MASTER_SEED, 300)).unwrap();
    let limit = 1.0 / 9.0 + SIGMAS * std_err(&sweep.delta_hat);
    Outcome {
        pass: sweep.delta_hat.point <= limit,
        detail: format!(
            "w*={} delta_hat={:.5} [{:.5}, {:.5}] <= {limit:.5}",
            sweep.w_star, sweep.delta_hat.point, sweep.delta_hat.ci_low, sweep.delta_hat.ci_high
        ),
    }
}

fn c4_exact_zero() -> Outcome {
    let scheme = SchemeSpec::trap(five(1));
    let counts: Vec<u64> = [0usize, 1]
        .iter()
        .map(|&w| {
            let est: Estimate = estimate_security(
                &scheme,
                &AttackSpec::FixedWeight(w),
                C4_TRIALS,
                derive_seed(MASTER_SEED, 400 + w as u64),
            )
            .unwrap();
            est.failures
        })
        .collect();
    Outcome {
        pass: counts.iter().all(|&c| c == 0),
        detail: format!("failures w=0: {}, w=1: {} over {C4_TRIALS} keys", counts[0], counts[1]),
    }
}

fn pattern(counts: LetterCounts, n: usize) -> PauliOperator {
    let mut letters = vec![Pauli::X; counts.x];
    letters.extend(std::iter::repeat_n(Pauli::Y, counts.y));
    letters.extend(std::iter::repeat_n(Pauli::Z, counts.z));
    letters.resize(n, Pauli::I);
    PauliOperator::from_letters(&letters)
}

fn multisets(max_weight: usize) -> Vec<LetterCounts> {
    let mut out = Vec::new();
    for w in 0..=max_weight {
        for x in 0..=w {
            for y in 0..=(w - x) {
                out.push(LetterCounts::new(x, y, w - x - y));
            }
        }
    }
    out
}

fn c5_oracle_equivalence() -> Outcome {
    let schemes = [
        ("trap", SchemeSpec::trap(five(1))),
        ("threshold r=2", SchemeSpec::threshold_with_r(five(1), 2).unwrap()),
    ];
    let cases = multisets(4);
    let comparisons = cases.len() * schemes.len();
    // simultaneous 99% intervals across the whole family
    let z_family = normal_upper_quantile((1.0 - ORACLE_FAMILY_CONFIDENCE) / (2.0 * comparisons as f64));
    let mut misses = Vec::new();
    let mut outside_single = 0usize;
    for (s_idx, (name, scheme)) in schemes.iter().enumerate() {
        for (c_idx, &c) in cases.iter().enumerate() {
            let exact = exact_purity_oracle(scheme, c).unwrap().decoder_f64();
            let seed = derive_seed(MASTER_SEED, 5_000 + 100 * s_idx as u64 + c_idx as u64);
            let est: Estimate =
                estimate_security(scheme, &AttackSpec::FixedPattern(pattern(c, 15)), C5_KEYS, seed).unwrap();
            let (lo, hi): (f64, f64) = est.interval_at(z_family);
            if !(lo <= exact && exact <= hi) {
                misses.push(format!("{name} {}{}{}: {:.5} vs {exact:.5}", c.x, c.y, c.z, est.point));
            }
            let (lo1, hi1): (f64, f64) = wilson(est.failures, est.trials, Z_99);
            if !(lo1 <= exact && exact <= hi1) {
                outside_single += 1;
            }
        }
    }
    Outcome {
        pass: misses.is_empty(),
        detail: format!(
            "{comparisons} multisets, family z={z_family:.3}, misses {}{}; outside per-comparison 99% CI: {outside_single}",
            misses.len(),
            if misses.is_empty() { String::new() } else { format!(" ({})", misses.join(", ")) }
        ),
    }
}

fn c6_threshold_grid() -> Outcome {
    let mut pass = true;
    let mut nonvacuous_security = 0;
    let mut lines = Vec::new();
    let mut at_p01: Vec<(f64, u32, Estimate)> = Vec::new();
    for m in 1u32..=3 {
        let inner = five(m);
        let n = inner.n_total();
        for alpha in [0.05, 0.08] {
            let scheme = SchemeSpec::threshold(inner.clone(), alpha).unwrap();
            let sec_bound = threshold_security_bound(five_params(), m, alpha).unwrap();
            let weights: Vec<usize> = (0..=3 * n).collect();
            let sweep: Sweep = worst_case_sweep(
                &scheme,
                C6_SECURITY_KEYS[m as usize - 1],
                &weights,
                derive_seed(MASTER_SEED, 6_000 + 10 * m as u64 + (alpha * 100.0) as u64),
            )
            .unwrap();
            let sec_ok = sweep.delta_hat.point <= sec_bound.value;
            if !sec_bound.vacuous {
                nonvacuous_security += 1;
            }
            pass &= sec_ok;
            lines.push(format!(
                "M={m} a={alpha} sec {:.4}(w={}) <= {:.4}{}{}",
                sweep.delta_hat.point,
                sweep.w_star,
                sec_bound.value,
                if sec_bound.vacuous { " vacuous" } else { "" },
                if sec_ok { "" } else { " !" }
            ));
            for p in [0.005, 0.01] {
                let seed = derive_seed(
                    MASTER_SEED,
                    7_000 + 100 * m as u64 + (alpha * 100.0) as u64 + (p * 1000.0) as u64,
                );
                let est =
                    estimate_correctness(&scheme, &Channel::depolarizing(p).unwrap(), C6_CORRECTNESS_TRIALS, seed)
                        .unwrap();
                let bound = threshold_correctness_bound(five_params(), m, p, alpha).unwrap();
                let ok = est.point <= bound.value;
                pass &= ok;
                lines.push(format!(
                    "M={m} a={alpha} p={p} corr {:.4} <= {:.4}{}",
                    est.point,
                    bound.value,
                    if ok { "" } else { " !" }
                ));
                if p == 0.01 {
                    at_p01.push((alpha, m, est));
                }
            }
        }
    }
    for alpha in [0.05, 0.08] {
        let by_m: Vec<&Estimate> = at_p01
            .iter()
            .filter(|(a, _, _)| *a == alpha)
            .map(|(_, _, e)| e)
            .collect();
        let decreasing = by_m.windows(2).all(|w| w[1].point < w[0].point);
        let separated = by_m[0].ci_low > by_m[2].ci_high;
        pass &= decreasing && separated;
        lines.push(format!(
            "a={alpha} p=0.01 M=1..3: {:.4} > {:.4} > {:.4}, CI gap {}",
            by_m[0].point,
            by_m[1].point,
            by_m[2].point,
            if separated { "yes" } else { "NO" }
        ));
    }
    pass &= nonvacuous_security > 0;
    lines.push(format!("non-vacuous security points: {nonvacuous_security}"));
    Outcome {
        pass,
        detail: lines.join("\n      "),
    }
}

fn c7_binomial_lemma() -> Outcome {
    let ps = [(1u64, 5u64), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4)];
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut tightest = f64::INFINITY;
    for n in 3u64..=300 {
        for &(a, b) in &ps {
            if (n * a) % b != 0 {
                continue;
            }
            let k = n * a / b;
            let p = BigRational::new(BigInt::from(a), BigInt::from(b));
            let q = BigRational::one() - &p;
            let pmf = BigRational::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
                * num_traits::pow(p, k as usize)
                * num_traits::pow(q, (n - k) as usize);
            let exact = pmf.to_f64().unwrap();
            let bound = binomial_mean_lower_bound::<f64>(n, Ratio::new(a, b)).unwrap().value;
            tightest = tightest.min(exact / bound);
            checked += 1;
            if exact < bound {
                failures.push(format!("n={n} p={a}/{b}"));
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && checked > 0,
        detail: format!("{checked} (n, p) pairs, min pmf/bound = {tightest:.5}, violations {failures:?}"),
    }
}

fn hypergeometric_lower_tail(a: u64, b: u64, k: u64, gamma: Ratio<u64>) -> BigRational {
    // P[|S ∩ B| / k < (1 - gamma) |B| / |A|], strict
    let total = binomial(BigInt::from(a), BigInt::from(k));
    let mut hits = BigInt::zero();
    let keep = Ratio::from_integer(1u64) - gamma;
    for j in 0..=k.min(b) {
        if k - j > a - b {
            continue;
        }
        let lhs = Ratio::from_integer(j * a);
        let rhs = keep * Ratio::from_integer(b * k);
        if lhs < rhs {
            hits += binomial(BigInt::from(b), BigInt::from(j)) * binomial(BigInt::from(a - b), BigInt::from(k - j));
        }
    }
    BigRational::new(hits, total)
}

fn c8_sampling_chernoff() -> Outcome {
    let gammas = [
        Ratio::new(1u64, 4),
        Ratio::new(1, 2),
        Ratio::new(3, 4),
        Ratio::new(1, 1),
    ];
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for a in 2u64..=30 {
        for b in 1..=a {
            for k in 1..a {
                for &g in &gammas {
                    let exact = hypergeometric_lower_tail(a, b, k, g).to_f64().unwrap();
                    let gf = *g.numer() as f64 / *g.denom() as f64;
                    let bound = chernoff_sampling_bound::<f64>(a, b, k, gf).unwrap().value;
                    checked += 1;
                    if exact > bound {
                        violations.push(format!("A={a} B={b} k={k} g={g}"));
                    }
                }
            }
        }
    }
    Outcome {
        pass: violations.is_empty(),
        detail: format!("{checked} cases, violations {}", violations.len()),
    }
}

fn c9_clifford_counting() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [2usize, 4, 8] {
        let scheme = SchemeSpec::clifford(1, n).unwrap();
        let est: Estimate = estimate_security(
            &scheme,
            &AttackSpec::FixedWeight(1),
            C9_TRIALS,
            derive_seed(MASTER_SEED, 900 + n as u64),
        )
        .unwrap();
        let exact = 3.0 * 2f64.powi(n as i32) / (4f64.powi(n as i32 + 1) - 1.0);
        let sigma = (exact * (1.0 - exact) / C9_TRIALS as f64).sqrt();
        let cap = 2f64.powi(-(n as i32)) * 4.0 / 3.0;
        let ok = (est.point - exact).abs() <= SIGMAS * sigma && est.point <= cap;
        pass &= ok;
        parts.push(format!(
            "n={n}: {:.6} vs {exact:.6} (cap {cap:.5}){}",
            est.point,
            if ok { "" } else { " !" }
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c10_determinism() -> Outcome {
    let run = || {
        let trap = SchemeSpec::trap(five(1));
        let c2: Estimate = estimate_logical_failure(
            &five(2),
            &Channel::depolarizing(0.02).unwrap(),
            200_000,
            derive_seed(MASTER_SEED, 212),
        )
        .unwrap();
        let c3: Sweep = worst_case_sweep(&trap, 20_000, &[1, 2, 3, 6, 9], derive_seed(MASTER_SEED, 300)).unwrap();
        let c4: Estimate = estimate_security(
            &trap,
            &AttackSpec::FixedWeight(1),
            20_000,
            derive_seed(MASTER_SEED, 401),
        )
        .unwrap();
        let thr = SchemeSpec::threshold(five(2), 0.08).unwrap();
        let c6 = estimate_correctness(
            &thr,
            &Channel::depolarizing(0.01).unwrap(),
            100_000,
            derive_seed(MASTER_SEED, 7_000),
        )
        .unwrap();
        let mut counts = vec![c2.failures, c4.failures, c6.failures, c6.rejects];
        counts.extend(c3.per_w.iter().map(|(_, e)| e.failures));
        counts
    };
    let in_pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(run)
    };
    let one = in_pool(1);
    let four = in_pool(4);
    let default = run();
    Outcome {
        pass: one == four && one == default,
        detail: format!(
            "1 thread {one:?}, 4 threads {}",
            if one == four { "identical" } else { "DIFFERENT" }
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("growth exponents", c1_growth_exponents),
        ("concatenation bound", c2_concatenation_bound),
        ("trap purity testing", c3_trap_purity),
        ("exact-zero security", c4_exact_zero),
        ("oracle equivalence", c5_oracle_equivalence),
        ("threshold bounds grid", c6_threshold_grid),
        ("binomial mean lemma", c7_binomial_lemma),
        ("sampling chernoff lemma", c8_sampling_chernoff),
        ("clifford exact counting", c9_clifford_counting),
        ("determinism", c10_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("C{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| f.eq_ignore_ascii_case(&id)) {
            continue;
        }
        let start = Instant::now();
        let out = check();
        if !out.pass {
            failed += 1;
        }
        println!(
            "{id:<4}{} {name} ({:.1}s)\n      {}",
            if out.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
