//! Report documents, their CSV/JSON/table renderings and `--check` re-validation.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use qauth_core::estimation::interval_99;
use qauth_core::{
    clifford_security_bound, delta_auth, exact_purity_oracle, failure_bound_report, qubit_scaling,
    register_union_bound, threshold_correctness_bound, threshold_security_bound, threshold_value_report,
    trap_purity_bound, trap_refined_purity_bound, CodeParams, ConcatenatedCode, Estimate, LetterCounts, Report,
    ScalingReport, SchemeKind, SchemeSpec, StabilizerCode,
};

use crate::opts::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// One simulated configuration; the field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub scheme: String,
    pub base: Option<String>,
    #[serde(rename = "M")]
    pub m: Option<u32>,
    #[serde(rename = "L")]
    pub l: Option<u32>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub attack_w: Option<usize>,
    pub trials: u64,
    pub failures: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bound_value: Option<f64>,
    pub bound_name: Option<String>,
    pub seed: u64,
}

impl Row {
    pub fn new(est: &Estimate, bound: Option<&Report>) -> Self {
        Row {
            scheme: String::new(),
            base: None,
            m: None,
            l: None,
            p: None,
            alpha: None,
            attack_w: None,
            trials: est.trials,
            failures: est.failures,
            point: est.point,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            bound_value: bound.map(|b| b.value),
            bound_name: bound.map(|b| b.name.clone()),
            seed: est.master_seed,
        }
    }
}

/// JSON form of a row: the CSV fields plus the full bound report it was compared with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonRow {
    #[serde(flatten)]
    pub row: Row,
    pub bound: Option<Report>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub scheme: SchemeKind,
    pub inner: String,
    pub outer: String,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "L")]
    pub l: Option<u32>,
    pub traps: Option<u64>,
    pub alpha: Option<f64>,
    pub total_qubits: u64,
    pub eps_exponent: f64,
    pub delta_exponent: f64,
    /// Growth exponent of the qubit count when `epsilon = delta`.
    pub exponent: f64,
    pub achieved_epsilon: f64,
    pub achieved_delta: f64,
}

impl CompareRow {
    pub fn new(inner: &str, outer: &str, s: &ScalingReport) -> Result<Self> {
        let (e, d) = s.exponents;
        // trap and Clifford sizes multiply the two factors; threshold reuses one block
        let exponent = match s.kind {
            SchemeKind::Threshold => e.max(d),
            _ => e + d,
        };
        let total_qubits =
            u64::try_from(s.total_qubits).map_err(|_| anyhow!("{} qubits do not fit a report", s.total_qubits))?;
        Ok(CompareRow {
            scheme: s.kind,
            inner: inner.to_string(),
            outer: outer.to_string(),
            m: s.m,
            l: s.l,
            traps: s.traps,
            alpha: s.alpha,
            total_qubits,
            eps_exponent: e,
            delta_exponent: d,
            exponent,
            achieved_epsilon: s.achieved_epsilon,
            achieved_delta: s.achieved_delta,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub scheme: String,
    pub base: String,
    #[serde(rename = "M")]
    pub m: u32,
    pub r: Option<usize>,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub weight: usize,
    /// Exact rational `num/den`.
    pub decoder: String,
    pub decoder_f64: f64,
    pub undetected_logical: String,
    pub undetected_logical_f64: f64,
}

impl OracleRow {
    pub fn evaluate(spec: &SchemeSpec, counts: LetterCounts) -> Result<Self> {
        let inner = spec
            .inner()
            .ok_or_else(|| anyhow!("the oracle needs a trap or threshold scheme"))?;
        let r = match spec.scheme() {
            qauth_core::Scheme::Threshold { r, .. } => Some(*r),
            _ => None,
        };
        let v = exact_purity_oracle(spec, counts)?;
        Ok(OracleRow {
            scheme: spec.kind_name().to_string(),
            base: inner.base().short_name().to_string(),
            m: inner.levels(),
            r,
            x: counts.x,
            y: counts.y,
            z: counts.z,
            weight: counts.weight(),
            decoder: v.decoder.to_string(),
            decoder_f64: v.decoder_f64(),
            undetected_logical: v.undetected_logical.to_string(),
            undetected_logical_f64: v.undetected_logical_f64(),
        })
    }

    fn spec(&self) -> Result<SchemeSpec> {
        let inner = ConcatenatedCode::builtin(&self.base, self.m)?;
        Ok(match (self.scheme.as_str(), self.r) {
            ("trap", None) => SchemeSpec::trap(inner),
            ("threshold", Some(r)) => SchemeSpec::threshold_with_r(inner, r)?,
            (s, _) => bail!("oracle row has unsupported scheme `{s}`"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Bounds {
        reports: Vec<Report>,
    },
    Simulation {
        command: String,
        rows: Vec<JsonRow>,
        /// Worst attack weight of a sweep.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w_star: Option<usize>,
    },
    Compare {
        epsilon: f64,
        delta: f64,
        p: f64,
        rows: Vec<CompareRow>,
    },
    Oracle {
        rows: Vec<OracleRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: u32,
    #[serde(flatten)]
    pub document: Document,
}

/// Writes `doc` to `out` (stdout if `None`).
pub fn emit(doc: Document, format: Format, out: Option<&Path>) -> Result<()> {
    let bytes = render(doc, format)?;
    match out {
        Some(path) => {
            std::fs::write(path, bytes).with_context(|| format!("cannot write output file {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

fn render(doc: Document, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let env = Envelope {
                schema_version: SCHEMA_VERSION,
                document: doc,
            };
            let mut v = serde_json::to_vec_pretty(&env)?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => csv_bytes(&doc),
        Format::Table => Ok(table(&doc).into_bytes()),
    }
}

fn csv_bytes(doc: &Document) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match doc {
        Document::Bounds { reports } => {
            w.write_record(["name", "value", "vacuous", "ref", "inputs"])?;
            for r in reports {
                let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                w.write_record([
                    &r.name,
                    &r.value.to_string(),
                    &r.vacuous.to_string(),
                    &r.formula_ref,
                    &inputs.join(";"),
                ])?;
            }
        }
        Document::Simulation { rows, .. } => {
            for r in rows {
                w.serialize(&r.row)?;
            }
            if rows.is_empty() {
                w.write_record(CSV_COLUMNS)?;
            }
        }
        Document::Compare { rows, .. } => {
            for r in rows {
                w.serialize(r)?;
            }
        }
        Document::Oracle { rows } => {
            for r in rows {
                w.serialize(r)?;
            }
        }
    }
    w.into_inner().map_err(|e| anyhow!("csv: {e}"))
}

pub const CSV_COLUMNS: [&str; 15] = [
    "scheme",
    "base",
    "M",
    "L",
    "p",
    "alpha",
    "attack_w",
    "trials",
    "failures",
    "point",
    "ci_low",
    "ci_high",
    "bound_value",
    "bound_name",
    "seed",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".into(), ToString::to_string)
}

fn table(doc: &Document) -> String {
    let mut s = String::new();
    match doc {
        Document::Bounds { reports } => {
            for r in reports {
                let flag = if r.vacuous { "  (vacuous)" } else { "" };
                s += &format!("{:<28} {:.6e}{flag}\n", r.name, r.value);
            }
        }
        Document::Simulation { rows, w_star, .. } => {
            s += &format!(
                "{:<10} {:<7} {:>2} {:>2} {:>9} {:>6} {:>4} {:>9} {:>8} {:>11} {:>23} {:>11}  {}\n",
                "scheme",
                "base",
                "M",
                "L",
                "p",
                "alpha",
                "w",
                "trials",
                "failures",
                "point",
                "99% CI",
                "bound",
                "bound_name"
            );
            for JsonRow { row: r, .. } in rows {
                s += &format!(
                    "{:<10} {:<7} {:>2} {:>2} {:>9} {:>6} {:>4} {:>9} {:>8} {:>11.4e} [{:.4e}, {:.4e}] {:>11}  {}\n",
                    r.scheme,
                    opt(&r.base),
                    opt(&r.m),
                    opt(&r.l),
                    opt(&r.p),
                    opt(&r.alpha),
                    opt(&r.attack_w),
                    r.trials,
                    r.failures,
                    r.point,
                    r.ci_low,
                    r.ci_high,
                    r.bound_value.map_or("-".into(), |b| format!("{b:.4e}")),
                    opt(&r.bound_name),
                );
            }
            if let Some(w) = w_star {
                s += &format!("worst attack weight: {w}\n");
            }
        }
        Document::Compare {
            epsilon,
            delta,
            p,
            rows,
        } => {
            s += &format!("target epsilon = {epsilon:e}, delta = {delta:e}, noise p = {p}\n");
            s += &format!(
                "{:<10} {:<7} {:<7} {:>3} {:>3} {:>5} {:>8} {:>14} {:>9} {:>10} {:>8} {:>12} {:>12}\n",
                "scheme",
                "inner",
                "outer",
                "M",
                "L",
                "traps",
                "alpha",
                "qubits",
                "exp(eps)",
                "exp(delta)",
                "exponent",
                "epsilon",
                "delta"
            );
            for r in rows {
                s += &format!(
                    "{:<10} {:<7} {:<7} {:>3} {:>3} {:>5} {:>8} {:>14} {:>9.2} {:>10.2} {:>8.2} {:>12.3e} {:>12.3e}\n",
                    format!("{:?}", r.scheme).to_lowercase(),
                    r.inner,
                    r.outer,
                    r.m,
                    opt(&r.l),
                    opt(&r.traps),
                    r.alpha.map_or("-".into(), |a| format!("{a:.4}")),
                    r.total_qubits,
                    r.eps_exponent,
                    r.delta_exponent,
                    r.exponent,
                    r.achieved_epsilon,
                    r.achieved_delta,
                );
            }
        }
        Document::Oracle { rows } => {
            s += &format!(
                "{:<10} {:>2} {:>2} {:>2} {:>14} {:>14}\n",
                "scheme", "x", "y", "z", "decoder", "undetected"
            );
            for r in rows {
                s += &format!(
                    "{:<10} {:>2} {:>2} {:>2} {:>14} {:>14}\n",
                    r.scheme, r.x, r.y, r.z, r.decoder, r.undetected_logical
                );
            }
        }
    }
    s
}

// ---------------------------------------------------------------------------
// --check

fn input(inputs: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    inputs.get(key).copied().ok_or_else(|| anyhow!("missing input `{key}`"))
}

fn count(inputs: &BTreeMap<String, f64>, key: &str) -> Result<u64> {
    let v = input(inputs, key)?;
    if v < 0.0 || v.fract() != 0.0 {
        bail!("input `{key}` = {v} is not a count");
    }
    Ok(v as u64)
}

fn params(inputs: &BTreeMap<String, f64>) -> Result<CodeParams> {
    Ok(CodeParams::new(count(inputs, "n")?, count(inputs, "d")?)?)
}

/// Recomputes a bound from its name and recorded inputs.
pub fn evaluate_bound(name: &str, inputs: &BTreeMap<String, f64>) -> Result<Report> {
    let levels = |k: &str| -> Result<u32> { Ok(u32::try_from(count(inputs, k)?)?) };
    Ok(match name {
        "trap_purity" => trap_purity_bound(count(inputs, "d")?)?,
        "trap_refined_purity" => trap_refined_purity_bound(params(inputs)?, levels("M")?, None)?.report,
        "threshold_correctness" => threshold_correctness_bound(
            params(inputs)?,
            levels("M")?,
            input(inputs, "p")?,
            input(inputs, "alpha")?,
        )?,
        "threshold_security" => threshold_security_bound(params(inputs)?, levels("M")?, input(inputs, "alpha")?)?,
        "failure_bound" => failure_bound_report(params(inputs)?, levels("M")?, input(inputs, "p")?)?,
        "threshold_value" => threshold_value_report(params(inputs)?),
        "clifford_security" => clifford_security_bound(count(inputs, "traps")?)?,
        "register_union_correctness" => {
            let l = levels("L")?;
            let outer = if l > 0 { Some((params(inputs)?, l)) } else { None };
            register_union_bound(count(inputs, "registers")?, outer, input(inputs, "p")?)?
        }
        "delta_auth" => delta_auth(input(inputs, "delta")?, count(inputs, "n")?),
        other => bail!("unknown bound `{other}`"),
    })
}

struct Checker {
    checked: usize,
    problems: Vec<String>,
}

impl Checker {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: impl std::fmt::Display, stored: T, fresh: T) {
        self.checked += 1;
        if stored != fresh {
            self.problems
                .push(format!("{what}: file has {stored:?}, recomputed {fresh:?}"));
        }
    }

    fn bound(&mut self, what: &str, stored: &Report) {
        match evaluate_bound(&stored.name, &stored.inputs) {
            Ok(fresh) => self.eq(what, stored, &fresh),
            Err(e) => self
                .problems
                .push(format!("{what}: cannot re-evaluate `{}`: {e}", stored.name)),
        }
    }
}

/// Re-validates every analytic field of a JSON report. Returns the number of fields
/// checked, or the list of mismatches.
pub fn check_file(path: &Path) -> Result<std::result::Result<usize, Vec<String>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let env: Envelope =
        serde_json::from_str(&text).with_context(|| format!("{} is not a qauth JSON report", path.display()))?;
    if env.schema_version != SCHEMA_VERSION {
        bail!(
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            env.schema_version
        );
    }
    let mut c = Checker {
        checked: 0,
        problems: Vec::new(),
    };
    match &env.document {
        Document::Bounds { reports } => {
            for (i, r) in reports.iter().enumerate() {
                c.bound(&format!("reports[{i}] {}", r.name), r);
            }
        }
        Document::Simulation { rows, w_star, .. } => {
            for (i, JsonRow { row, bound }) in rows.iter().enumerate() {
                let at = |f: &str| format!("rows[{i}].{f}");
                if row.trials == 0 || row.failures > row.trials {
                    c.problems.push(format!(
                        "rows[{i}]: {} failures out of {} trials",
                        row.failures, row.trials
                    ));
                    continue;
                }
                c.eq(at("point"), row.point, row.failures as f64 / row.trials as f64);
                let (lo, hi): (f64, f64) = interval_99(row.failures, row.trials);
                c.eq(at("ci_low"), row.ci_low, lo);
                c.eq(at("ci_high"), row.ci_high, hi);
                c.eq(
                    at("bound_name"),
                    row.bound_name.as_ref(),
                    bound.as_ref().map(|b| &b.name),
                );
                c.eq(at("bound_value"), row.bound_value, bound.as_ref().map(|b| b.value));
                if let Some(b) = bound {
                    c.bound(&at("bound"), b);
                }
            }
            if let Some(w) = w_star {
                let best = rows
                    .iter()
                    .fold(None::<&Row>, |best, r| match best {
                        Some(b) if b.point >= r.row.point => Some(b),
                        _ => Some(&r.row),
                    })
                    .and_then(|r| r.attack_w);
                c.eq("w_star", Some(*w), best);
            }
        }
        Document::Compare {
            epsilon,
            delta,
            p,
            rows,
        } => {
            for (i, r) in rows.iter().enumerate() {
                let inner = StabilizerCode::builtin(&r.inner)?.params();
                let outer = StabilizerCode::builtin(&r.outer)?.params();
                match qubit_scaling(r.scheme, inner, Some(outer), *epsilon, *delta, *p, r.alpha) {
                    Ok(s) => match CompareRow::new(&r.inner, &r.outer, &s) {
                        Ok(fresh) => c.eq(format!("rows[{i}]"), r, &fresh),
                        Err(e) => c.problems.push(format!("rows[{i}]: {e}")),
                    },
                    Err(e) => c.problems.push(format!("rows[{i}]: {e}")),
                }
            }
        }
        Document::Oracle { rows } => {
            for (i, r) in rows.iter().enumerate() {
                let fresh = r
                    .spec()
                    .and_then(|s| OracleRow::evaluate(&s, LetterCounts::new(r.x, r.y, r.z)));
                match fresh {
                    Ok(f) => c.eq(format!("rows[{i}]"), r, &f),
                    Err(e) => c.problems.push(format!("rows[{i}]: {e}")),
                }
            }
        }
    }
    Ok(if c.problems.is_empty() {
        Ok(c.checked)
    } else {
        Err(c.problems)
    })
}
