//! Flags shared by every subcommand and their validation into runnable setups.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use qauth_core::{
    clifford_security_bound, register_union_bound, threshold_correctness_bound, threshold_security_bound,
    trap_purity_bound, Channel, ConcatenatedCode, Report, Scheme, SchemeKind, SchemeSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Depolarizing,
    Pauli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Every field is optional so config-file values can fill the gaps left by flags.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct Opts {
    /// trap, threshold or clifford
    #[arg(long)]
    pub scheme: Option<SchemeKind>,
    /// Inner (base) code: five or steane
    #[arg(long, visible_alias = "base")]
    pub inner: Option<String>,
    /// Concatenation levels of the inner code
    #[arg(long, visible_alias = "inner-levels")]
    pub levels: Option<u32>,
    /// Outer code wrapping every register
    #[arg(long)]
    pub outer: Option<String>,
    #[arg(long)]
    pub outer_levels: Option<u32>,
    /// Threshold fraction of traps that may fire
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Explicit threshold trap count, overriding --alpha
    #[arg(long)]
    pub r: Option<usize>,
    /// Trap count of the Clifford scheme
    #[arg(long)]
    pub traps: Option<usize>,
    /// Data qubits of the Clifford scheme
    #[arg(long)]
    pub data_size: Option<usize>,
    #[arg(long, value_enum)]
    pub noise: Option<NoiseKind>,
    /// Total error probability (depolarizing)
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub px: Option<f64>,
    #[arg(long)]
    pub py: Option<f64>,
    #[arg(long)]
    pub pz: Option<f64>,
    #[arg(long)]
    pub attack_weight: Option<usize>,
    /// Attack weights as start:stop:step (inclusive)
    #[arg(long)]
    pub attack_sweep: Option<String>,
    /// X, Y and Z letter counts of an oracle attack
    #[arg(long)]
    pub x: Option<usize>,
    #[arg(long)]
    pub y: Option<usize>,
    #[arg(long)]
    pub z: Option<usize>,
    /// Enumerate every oracle multiset up to this weight
    #[arg(long)]
    pub max_weight: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores)
    #[arg(long, env = "QAUTH_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Parser)]
#[command(no_binary_name = true)]
struct ConfigArgs {
    #[command(flatten)]
    opts: Opts,
}

impl Opts {
    /// Parses config-file flags with the same rules as the command line.
    pub fn from_config_args(args: &[String]) -> Result<Self> {
        ConfigArgs::try_parse_from(args).map(|c| c.opts).map_err(|e| {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or_default();
            anyhow!("invalid config entry: {}", first.trim_start_matches("error: "))
        })
    }

    /// Fields set on `self` win over those in `fallback`.
    pub fn over(self, fallback: Opts) -> Result<Opts> {
        let mut merged = serde_json::to_value(fallback)?;
        let top = serde_json::to_value(self)?;
        let (Some(m), Some(t)) = (merged.as_object_mut(), top.as_object()) else {
            unreachable!("options serialize to objects");
        };
        // alternatives: setting one on the command line discards the others from the file
        const GROUPS: &[&[&str]] = &[
            &["attack_weight", "attack_sweep"],
            &["alpha", "r"],
            &["x", "y", "z", "max_weight"],
        ];
        for group in GROUPS {
            if group.iter().any(|k| !t[*k].is_null()) {
                for k in *group {
                    m.insert(k.to_string(), serde_json::Value::Null);
                }
            }
        }
        for (k, v) in t {
            if !v.is_null() {
                m.insert(k.clone(), v.clone());
            }
        }
        Ok(serde_json::from_value(merged)?)
    }

    pub fn kind(&self) -> SchemeKind {
        self.scheme.unwrap_or(SchemeKind::Trap)
    }

    pub fn inner_name(&self) -> &str {
        self.inner.as_deref().unwrap_or("five")
    }

    pub fn inner_code(&self) -> Result<ConcatenatedCode> {
        Ok(ConcatenatedCode::builtin(self.inner_name(), self.levels.unwrap_or(1))?)
    }

    /// The outer code if any levels of it are requested; `--outer` alone means one level.
    pub fn outer_code(&self) -> Result<Option<ConcatenatedCode>> {
        let levels = self.outer_levels.unwrap_or(if self.outer.is_some() { 1 } else { 0 });
        if levels == 0 {
            return Ok(None);
        }
        let name = self.outer.as_deref().unwrap_or(self.inner_name());
        Ok(Some(ConcatenatedCode::builtin(name, levels)?))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn trials(&self) -> Result<u64> {
        let trials = self.trials.unwrap_or(10_000);
        if trials == 0 {
            bail!("--trials must be at least 1");
        }
        Ok(trials)
    }

    pub fn channel(&self) -> Result<Channel> {
        match self.noise.unwrap_or(NoiseKind::Depolarizing) {
            NoiseKind::Depolarizing => {
                let p = self
                    .p
                    .ok_or_else(|| anyhow!("--p is required for depolarizing noise"))?;
                Ok(Channel::depolarizing(p)?)
            }
            NoiseKind::Pauli => {
                if self.px.is_none() && self.py.is_none() && self.pz.is_none() {
                    bail!("pauli noise needs at least one of --px, --py, --pz");
                }
                Ok(Channel::new(
                    self.px.unwrap_or(0.0),
                    self.py.unwrap_or(0.0),
                    self.pz.unwrap_or(0.0),
                )?)
            }
        }
    }

    /// Attack weights from --attack-weight or --attack-sweep.
    pub fn attack_weights(&self) -> Result<Option<Vec<usize>>> {
        match (self.attack_weight, &self.attack_sweep) {
            (Some(_), Some(_)) => bail!("--attack-weight and --attack-sweep are mutually exclusive"),
            (Some(w), None) => Ok(Some(vec![w])),
            (None, Some(s)) => parse_sweep(s).map(Some),
            (None, None) => Ok(None),
        }
    }

    /// --format, else the --out extension, else the command's default.
    pub fn format(&self, default: Format) -> Format {
        let by_extension = self
            .out
            .as_ref()
            .and_then(|p| p.extension())
            .and_then(|e| e.to_str())
            .and_then(|e| match e.to_ascii_lowercase().as_str() {
                "json" => Some(Format::Json),
                "csv" => Some(Format::Csv),
                _ => None,
            });
        self.format.or(by_extension).unwrap_or(default)
    }
}

/// `start:stop:step`, inclusive of `stop`; `start:stop` steps by one.
pub fn parse_sweep(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("--attack-sweep `{s}` must be start:stop[:step] with non-negative integers"))?;
    let (start, stop, step) = match nums[..] {
        [a, b] => (a, b, 1),
        [a, b, c] => (a, b, c),
        _ => bail!("--attack-sweep `{s}` must be start:stop[:step]"),
    };
    if step == 0 || start > stop {
        bail!("--attack-sweep `{s}` needs start <= stop and step >= 1");
    }
    Ok((start..=stop).step_by(step).collect())
}

/// A validated scheme plus the identifying columns of its report rows.
#[derive(Debug)]
pub struct Setup {
    pub spec: SchemeSpec,
    pub base: Option<String>,
    pub m: Option<u32>,
    pub l: Option<u32>,
    pub alpha: Option<f64>,
}

impl Setup {
    pub fn from_opts(o: &Opts) -> Result<Self> {
        let outer = o.outer_code()?;
        let l = Some(outer.as_ref().map_or(0, |c| c.levels()));
        let (spec, base, m, alpha) = match o.kind() {
            SchemeKind::Trap => {
                let inner = o.inner_code()?;
                (
                    SchemeSpec::trap(inner.clone()),
                    Some(short(&inner)),
                    Some(inner.levels()),
                    None,
                )
            }
            SchemeKind::Threshold => {
                let inner = o.inner_code()?;
                let spec = match (o.r, o.alpha) {
                    (Some(r), _) => SchemeSpec::threshold_with_r(inner.clone(), r)?,
                    (None, Some(a)) => SchemeSpec::threshold(inner.clone(), a)?,
                    (None, None) => bail!("the threshold scheme needs --alpha (or --r)"),
                };
                let alpha = match spec.scheme() {
                    Scheme::Threshold { alpha, .. } => *alpha,
                    _ => unreachable!(),
                };
                (spec, Some(short(&inner)), Some(inner.levels()), Some(alpha))
            }
            SchemeKind::Clifford => {
                let traps = o.traps.ok_or_else(|| anyhow!("the Clifford scheme needs --traps"))?;
                let spec = SchemeSpec::clifford(o.data_size.unwrap_or(1), traps)?;
                (spec, outer.as_ref().map(short), None, None)
            }
        };
        let spec = match outer {
            Some(c) => spec.with_outer(c),
            None => spec,
        };
        Ok(Setup {
            spec,
            base,
            m,
            l,
            alpha,
        })
    }

    fn traps(&self) -> u64 {
        match self.spec.scheme() {
            Scheme::Clifford { num_traps, .. } => *num_traps as u64,
            _ => 0,
        }
    }

    /// Analytic security bound, or a note on why none applies.
    pub fn security_bound(&self) -> std::result::Result<Report, String> {
        let res = match self.spec.scheme() {
            Scheme::Trap { inner } => trap_purity_bound(inner.d_total()),
            Scheme::Threshold { inner, alpha, .. } => {
                threshold_security_bound(inner.base().params(), inner.levels(), *alpha)
            }
            Scheme::Clifford { .. } => clifford_security_bound(self.traps()),
        };
        res.map_err(|e| e.to_string())
    }

    /// Analytic correctness bound for `channel`, or a note on why none applies.
    pub fn correctness_bound(&self, channel: &Channel) -> std::result::Result<Report, String> {
        let p = channel.p_error();
        let outer = self.spec.outer().map(|c| (c.base().params(), c.levels()));
        let res = match (self.spec.scheme(), outer) {
            (Scheme::Threshold { inner, alpha, .. }, None) => {
                let depolarizing = channel.p_x() == channel.p_y() && channel.p_y() == channel.p_z();
                if !depolarizing {
                    return Err("the threshold correctness bound assumes depolarizing noise".into());
                }
                threshold_correctness_bound(inner.base().params(), inner.levels(), p, *alpha)
            }
            _ => register_union_bound(self.spec.registers() as u64, outer, p),
        };
        res.map_err(|e| e.to_string())
    }
}

fn short(code: &ConcatenatedCode) -> String {
    code.base().short_name().to_string()
}
