use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use super::config::{DfsCandidate, ScenarioConfig, SweepParameter};
use super::output::{Cell, Table};
use crate::diagnostics::{
    certify_state, certify_subspace, entanglement_entropy, mincond_residual, rate_report,
    schmidt_coefficients, variance_exact, variance_lx_approx,
};
use crate::generator::{build_generator, Ensembles};
use crate::integrator::evolve;
use crate::spin_algebra::{composite_coupling_ops, coupled_basis_state, total_spin_ops, CoupledLevel, HalfInt};
use crate::states::{density_from_pure, fock_product_state, fock_state};
use crate::{Error, StateVector};

/// Numeric and analytic rates must agree to this relative tolerance.
pub const SELF_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error("integrator aborted at t = {last_good_time}: {reason}")]
    Integrator { last_good_time: f64, reason: String },
    #[error("all {0} sweep points failed")]
    SweepFailed(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::SelfCheck(_) => 3,
            CliError::Integrator { .. } => 4,
            CliError::SweepFailed(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::IntegratorAbort { last_good_time, reason } => CliError::Integrator { last_good_time, reason },
            other => CliError::Config(other.to_string()),
        }
    }
}

/// A table to write plus an optional failure that decides the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self { table, failure: None }
    }
}

/// One row: numeric rate, analytic rate, large-Ñ estimate, per-axis terms.
pub fn cmd_rate(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let model = cfg.decoherence_model()?;
    let (psi, _) = cfg.initial_state()?;
    let report = rate_report(&psi, &model, &cfg.ensembles)?;
    let mut columns: Vec<String> = ["numeric_rate", "analytic_rate", "estimate_rate", "relative_disagreement"]
        .into_iter()
        .map(String::from)
        .collect();
    columns.extend(report.per_axis_contributions.keys().map(|k| format!("contrib.{k}")));
    let mut table = Table::new(columns);
    let disagreement = report.disagreement();
    let mut row: Vec<Cell> = vec![
        report.numeric_rate.into(),
        report.analytic_rate.into(),
        report.estimate_rate.into(),
        disagreement.into(),
    ];
    row.extend(report.per_axis_contributions.values().map(|v| Cell::Float(*v)));
    table.push(row);
    let failure = (disagreement > SELF_CHECK_TOL).then(|| {
        CliError::SelfCheck(format!(
            "numeric rate {} vs analytic rate {}",
            report.numeric_rate, report.analytic_rate
        ))
    });
    Ok(Outcome { table, failure })
}

/// Trajectory table `t, s_lin, trace_dev, min_eig, fidelity_to_initial`.
pub fn cmd_simulate(cfg: &ScenarioConfig, snapshots: bool) -> Result<Outcome, CliError> {
    let opts = cfg
        .evolution
        .ok_or_else(|| CliError::Config("simulate needs an evolution block".into()))?;
    let model = cfg.decoherence_model()?;
    let (psi, _) = cfg.initial_state()?;
    let g = build_generator(&model, &cfg.ensembles)?;
    let rho0 = density_from_pure(&psi, &cfg.ensembles.dims())?;
    let traj = evolve(&g, &rho0, &opts)?;
    let mut table = Table::new(["t", "s_lin", "trace_dev", "min_eig", "fidelity_to_initial"]);
    let mut snaps = Vec::new();
    for s in &traj.samples {
        table.push(vec![
            s.t.into(),
            s.s_lin.into(),
            (s.rho.trace() - 1.0).into(),
            s.rho.min_eigenvalue().into(),
            s.rho.fidelity_with(&psi)?.into(),
        ]);
        if snapshots {
            let m = s.rho.matrix();
            let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                .collect();
            snaps.push(json!({ "t": s.t, "rho": rows }));
        }
    }
    if snapshots {
        table.extra = Some(json!(snaps));
    }
    Ok(Outcome::ok(table))
}

struct PointResult {
    numeric: f64,
    analytic: f64,
    estimate: Option<f64>,
    entropy: Option<f64>,
    schmidt: Option<usize>,
    mincond: Option<f64>,
}

fn sweep_point(cfg: &ScenarioConfig, parameter: SweepParameter, value: f64) -> Result<PointResult, String> {
    let point = cfg.at_sweep_point(parameter, value).map_err(|e| e.to_string())?;
    let model = point.decoherence_model().map_err(|e| e.to_string())?;
    let (psi, spec) = point.initial_state().map_err(|e| e.to_string())?;
    let report = rate_report(&psi, &model, &point.ensembles).map_err(|e| e.to_string())?;
    if report.disagreement() > SELF_CHECK_TOL {
        return Err(format!(
            "self-check: numeric {} vs analytic {}",
            report.numeric_rate, report.analytic_rate
        ));
    }
    let (entropy, schmidt) = match point.ensembles {
        Ensembles::Pair { .. } => {
            let dims = point.ensembles.dims();
            let sv = schmidt_coefficients(&psi, &dims).map_err(|e| e.to_string())?;
            (
                Some(entanglement_entropy(&psi, &dims).map_err(|e| e.to_string())?),
                Some(sv.iter().filter(|s| **s > crate::diagnostics::SCHMIDT_TOL).count()),
            )
        }
        Ensembles::Single { .. } => (None, None),
    };
    Ok(PointResult {
        numeric: report.numeric_rate,
        analytic: report.analytic_rate,
        estimate: report.estimate_rate,
        entropy,
        schmidt,
        mincond: spec.as_ref().map(mincond_residual),
    })
}

/// One row per grid value, in grid order regardless of worker count.
pub fn cmd_sweep(cfg: &ScenarioConfig, threads: usize) -> Result<Outcome, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs a sweep block".into()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let results: Vec<Result<PointResult, String>> = pool.install(|| {
        sweep
            .values
            .par_iter()
            .map(|v| sweep_point(cfg, sweep.parameter, *v))
            .collect()
    });

    let mut table = Table::new([
        "index".to_string(),
        sweep.parameter.to_string(),
        "numeric_rate".into(),
        "analytic_rate".into(),
        "estimate_rate".into(),
        "entanglement_entropy".into(),
        "schmidt_number".into(),
        "mincond_residual".into(),
        "error".into(),
    ]);
    let mut failed = 0;
    for (i, (value, res)) in sweep.values.iter().zip(results).enumerate() {
        let mut row: Vec<Cell> = vec![i.into(), (*value).into()];
        match res {
            Ok(p) => row.extend([
                p.numeric.into(),
                p.analytic.into(),
                p.estimate.into(),
                p.entropy.into(),
                p.schmidt.map_or(Cell::Empty, Cell::from),
                p.mincond.into(),
                Cell::Empty,
            ]),
            Err(msg) => {
                failed += 1;
                row.extend(std::iter::repeat_n(Cell::Empty, 6));
                row.push(msg.into());
            }
        }
        table.push(row);
    }
    let failure = (failed == sweep.values.len()).then_some(CliError::SweepFailed(failed));
    Ok(Outcome { table, failure })
}

fn candidate_states(cfg: &ScenarioConfig, cand: &DfsCandidate) -> Result<Vec<(String, StateVector)>, CliError> {
    let pair = || match cfg.ensembles {
        Ensembles::Pair { j1, j2 } => Ok((j1, j2)),
        Ensembles::Single { .. } => Err(CliError::Config("candidate needs two ensembles".into())),
    };
    let coupled = |l: HalfInt, m: HalfInt| -> Result<(String, StateVector), CliError> {
        let (j1, j2) = pair()?;
        let level = CoupledLevel::new(l, m)?;
        Ok((format!("L={l},M={m}"), coupled_basis_state(j1, j2, level)?))
    };
    Ok(match cand {
        DfsCandidate::FockBasis => match cfg.ensembles {
            Ensembles::Single { j } => j
                .m_values()
                .map(|m| Ok((format!("m={m}"), fock_state(j, m)?)))
                .collect::<Result<_, Error>>()?,
            Ensembles::Pair { j1, j2 } => j1
                .m_values()
                .flat_map(|a| j2.m_values().map(move |b| (a, b)))
                .map(|(a, b)| Ok((format!("m1={a},m2={b}"), fock_product_state(j1, a, j2, b)?)))
                .collect::<Result<_, Error>>()?,
        },
        DfsCandidate::Singlet => {
            let (j1, j2) = pair()?;
            if j1 != j2 {
                return Err(CliError::Config("singlet candidate needs j1 = j2".into()));
            }
            vec![coupled(HalfInt::ZERO, HalfInt::ZERO)?]
        }
        DfsCandidate::CoupledBasis => {
            let (j1, j2) = pair()?;
            CoupledLevel::all(j1, j2)
                .into_iter()
                .map(|lv| coupled(lv.l, lv.m))
                .collect::<Result<_, _>>()?
        }
        DfsCandidate::Coupled { l, m } => vec![coupled(*l, *m)?],
        DfsCandidate::State => vec![("state".into(), cfg.initial_state()?.0)],
    })
}

fn candidate_name(c: &DfsCandidate) -> String {
    match c {
        DfsCandidate::FockBasis => "fock_basis".into(),
        DfsCandidate::Singlet => "singlet".into(),
        DfsCandidate::CoupledBasis => "coupled_basis".into(),
        DfsCandidate::Coupled { l, m } => format!("coupled(L={l},M={m})"),
        DfsCandidate::State => "state".into(),
    }
}

/// Per-state stationarity residual, purity rate and verdict.
pub fn cmd_dfs(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let dfs = cfg
        .dfs
        .as_ref()
        .ok_or_else(|| CliError::Config("dfs needs a dfs block".into()))?;
    let model = cfg.decoherence_model()?;
    let g = build_generator(&model, &cfg.ensembles)?;
    let mut table = Table::new(["candidate", "state", "residual", "purity_rate", "certified"]);
    for cand in &dfs.candidates {
        let name = candidate_name(cand);
        let states = candidate_states(cfg, cand)?;
        for (label, psi) in &states {
            let cert = certify_state(&g, psi)?;
            table.push(vec![
                name.clone().into(),
                label.clone().into(),
                cert.residual.into(),
                cert.purity_rate.into(),
                cert.certified.into(),
            ]);
        }
        if dfs.subspace {
            let basis: Vec<StateVector> = states.into_iter().map(|(_, v)| v).collect();
            let cert = certify_subspace(&g, &basis)?;
            table.push(vec![
                name.into(),
                format!("subspace(dim={})", cert.dimension).into(),
                cert.max_residual.into(),
                Cell::Empty,
                cert.certified.into(),
            ]);
        }
    }
    Ok(Outcome::ok(table))
}

/// Coefficients, Schmidt data and variances of the configured state.
pub fn cmd_state(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let (psi, spec) = cfg.initial_state()?;
    let mut table = Table::new(["quantity", "value"]);
    let mut put = |k: String, v: Cell| table.push(vec![k.into(), v]);
    put("dimension".into(), psi.len().into());
    if let Ensembles::Pair { j1, j2 } = cfg.ensembles {
        let dims = cfg.ensembles.dims();
        let sv = schmidt_coefficients(&psi, &dims)?;
        let rank = sv.iter().filter(|s| **s > crate::diagnostics::SCHMIDT_TOL).count();
        put("schmidt_number".into(), rank.into());
        put("entanglement_entropy".into(), entanglement_entropy(&psi, &dims)?.into());
        for (k, s) in sv.iter().take(rank).enumerate() {
            put(format!("schmidt[{k}]"), (*s).into());
        }
        let total = total_spin_ops(j1, j2)?;
        put("variance_total_jx".into(), variance_exact(total.x(), &psi)?.into());
        if let Ok(l) = composite_coupling_ops(j1, j2, 1.0) {
            put("variance_lx_lambda1".into(), variance_exact(l.x(), &psi)?.into());
        }
    }
    if let Some(spec) = spec {
        put("ntilde".into(), spec.ntilde().value().into());
        put("mincond_residual".into(), mincond_residual(&spec).into());
        if let Ok(v) = variance_lx_approx(&spec) {
            put("variance_lx_approx".into(), v.into());
        }
        for (m, c) in spec.terms() {
            put(format!("c[m={m}].re"), c.re.into());
            put(format!("c[m={m}].im"), c.im.into());
        }
    } else if matches!(cfg.ensembles, Ensembles::Single { .. }) {
        for (k, a) in psi.iter().enumerate() {
            put(format!("amp[{k}].re"), a.re.into());
            put(format!("amp[{k}].im"), a.im.into());
        }
    }
    Ok(Outcome::ok(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::SelfCheck("x".into()).exit_code(), 3);
        assert_eq!(CliError::SweepFailed(3).exit_code(), 5);
        let abort = Error::IntegratorAbort {
            last_good_time: 1.5,
            reason: "blow-up".into(),
        };
        assert_eq!(CliError::from(abort).exit_code(), 4);
        assert_eq!(CliError::from(Error::LambdaOutOfRange(3.0)).exit_code(), 2);
    }
}
