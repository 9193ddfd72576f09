//! One function per subcommand. Each validates everything before simulating.

use anyhow::{anyhow, bail, Result};

use qauth_core::{
    derive_seed, estimate_correctness, estimate_security, qubit_scaling, trap_refined_purity_bound, worst_case_sweep,
    AttackSpec, LetterCounts, Report, Scheme, SchemeKind, StabilizerCode,
};

use crate::opts::{Format, Opts, Setup};
use crate::report::{emit, CompareRow, Document, JsonRow, OracleRow, Row};

fn warn_none(bound: std::result::Result<Report, String>) -> Option<Report> {
    bound
        .map_err(|e| eprintln!("qauth: note: no analytic bound reported: {e}"))
        .ok()
}

fn row(setup: &Setup, est: &qauth_core::Estimate, bound: Option<&Report>) -> Row {
    Row {
        scheme: setup.spec.kind_name().to_string(),
        base: setup.base.clone(),
        m: setup.m,
        l: setup.l,
        alpha: setup.alpha,
        ..Row::new(est, bound)
    }
}

fn finish(o: &Opts, doc: Document, default: Format) -> Result<()> {
    emit(doc, o.format(default), o.out.as_deref())
}

pub fn bounds(o: &Opts) -> Result<()> {
    let setup = Setup::from_opts(o)?;
    let mut reports = Vec::new();
    if let Some(inner) = setup.spec.inner() {
        let base = inner.base().params();
        reports.push(qauth_core::threshold_value_report(base));
        if let Some(p) = o.p {
            reports.push(qauth_core::failure_bound_report(base, inner.levels(), p)?);
        }
        if let Scheme::Trap { .. } = setup.spec.scheme() {
            reports.push(trap_refined_purity_bound(base, inner.levels(), None)?.report);
        }
    }
    reports.push(setup.security_bound().map_err(|e| anyhow!(e))?);
    if o.p.is_some() || o.px.is_some() || o.py.is_some() || o.pz.is_some() {
        reports.push(setup.correctness_bound(&o.channel()?).map_err(|e| anyhow!(e))?);
    }
    finish(o, Document::Bounds { reports }, Format::Json)
}

pub fn simulate_correctness(o: &Opts) -> Result<()> {
    let setup = Setup::from_opts(o)?;
    let channel = o.channel()?;
    let trials = o.trials()?;
    let bound = warn_none(setup.correctness_bound(&channel));
    let est = estimate_correctness(&setup.spec, &channel, trials, o.seed())?;
    let r = Row {
        p: Some(channel.p_error()),
        ..row(&setup, &est, bound.as_ref())
    };
    let doc = Document::Simulation {
        command: "simulate-correctness".into(),
        rows: vec![JsonRow { row: r, bound }],
        w_star: None,
    };
    finish(o, doc, Format::Json)
}

fn validated_weights(o: &Opts, setup: &Setup, required: bool) -> Result<Vec<usize>> {
    let n = setup.spec.physical_qubits();
    let weights = match o.attack_weights()? {
        Some(w) => w,
        None if required => bail!("--attack-weight or --attack-sweep is required"),
        None => (1..=n).collect(),
    };
    for &w in &weights {
        AttackSpec::FixedWeight(w).validate(n)?;
    }
    Ok(weights)
}

fn security_rows(setup: &Setup, results: &[(usize, qauth_core::Estimate)], bound: &Option<Report>) -> Vec<JsonRow> {
    results
        .iter()
        .map(|(w, est)| JsonRow {
            row: Row {
                attack_w: Some(*w),
                ..row(setup, est, bound.as_ref())
            },
            bound: bound.clone(),
        })
        .collect()
}

pub fn simulate_security(o: &Opts) -> Result<()> {
    let setup = Setup::from_opts(o)?;
    let weights = validated_weights(o, &setup, true)?;
    let trials = o.trials()?;
    let bound = warn_none(setup.security_bound());
    let results = weights
        .iter()
        .map(|&w| {
            let seed = derive_seed(o.seed(), w as u64);
            Ok((
                w,
                estimate_security(&setup.spec, &AttackSpec::FixedWeight(w), trials, seed)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = Document::Simulation {
        command: "simulate-security".into(),
        rows: security_rows(&setup, &results, &bound),
        w_star: None,
    };
    finish(o, doc, Format::Json)
}

pub fn sweep(o: &Opts) -> Result<()> {
    let setup = Setup::from_opts(o)?;
    let weights = validated_weights(o, &setup, false)?;
    let trials = o.trials()?;
    let bound = warn_none(setup.security_bound());
    let result = worst_case_sweep(&setup.spec, trials, &weights, o.seed())?;
    let doc = Document::Simulation {
        command: "sweep".into(),
        rows: security_rows(&setup, &result.per_w, &bound),
        w_star: Some(result.w_star),
    };
    finish(o, doc, Format::Json)
}

pub fn compare(o: &Opts) -> Result<()> {
    let epsilon = o.epsilon.ok_or_else(|| anyhow!("compare needs --epsilon"))?;
    let delta = o.delta.ok_or_else(|| anyhow!("compare needs --delta"))?;
    let p = o.p.ok_or_else(|| anyhow!("compare needs --p"))?;
    let inner_name = o.inner_name();
    let outer_name = o.outer.as_deref().unwrap_or(inner_name);
    let inner = StabilizerCode::builtin(inner_name)?;
    let outer = StabilizerCode::builtin(outer_name)?;
    let rows = [SchemeKind::Trap, SchemeKind::Clifford, SchemeKind::Threshold]
        .into_iter()
        .map(|kind| {
            let s = qubit_scaling(kind, inner.params(), Some(outer.params()), epsilon, delta, p, o.alpha)
                .map_err(|e| anyhow!("{kind:?} scheme: {e}"))?;
            CompareRow::new(inner.short_name(), outer.short_name(), &s)
        })
        .collect::<Result<Vec<_>>>()?;
    finish(
        o,
        Document::Compare {
            epsilon,
            delta,
            p,
            rows,
        },
        Format::Table,
    )
}

pub fn oracle(o: &Opts) -> Result<()> {
    let setup = Setup::from_opts(o)?;
    let registers = setup.spec.registers();
    let multisets: Vec<LetterCounts> = if o.x.is_some() || o.y.is_some() || o.z.is_some() {
        vec![LetterCounts::new(o.x.unwrap_or(0), o.y.unwrap_or(0), o.z.unwrap_or(0))]
    } else {
        let max = o.max_weight.unwrap_or(3);
        if max > registers {
            bail!("--max-weight {max} exceeds the {registers} registers");
        }
        (0..=max)
            .flat_map(|w| (0..=w).flat_map(move |x| (0..=w - x).map(move |y| LetterCounts::new(x, y, w - x - y))))
            .collect()
    };
    let rows = multisets
        .into_iter()
        .map(|c| OracleRow::evaluate(&setup.spec, c))
        .collect::<Result<Vec<_>>>()?;
    finish(o, Document::Oracle { rows }, Format::Json)
}
