use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{amplitudes, CliError, Experiment, RunConfig, DEFAULT_GRID, DEFAULT_REFINE};
use crate::entanglement::{chsh_violated, concurrence, horodecki_m, max_chsh_value, rho_tp};
use crate::protocols::{
    coherent_field_rotation, massless_absorption, optimize_angles, sequential_rotation, simultaneous_coupling_check_for,
    table1_summary, ExperimentResult, RotationProtocolParams, Series, Table1Row, J,
};

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Output {
    Result(ExperimentResult),
    Table1(Table1Report),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Report {
    pub name: &'static str,
    pub n: usize,
    pub rows: Vec<Table1Row>,
}

fn rotation_params(config: &RunConfig, n: usize) -> crate::Result<RotationProtocolParams> {
    let (alpha, beta) = amplitudes(&config.parameters);
    let mut p = RotationProtocolParams::new(alpha, beta, n)?;
    if let Some(total) = config.parameters.total_time {
        p.per_step_duration = Some(total / n as f64);
    }
    Ok(p)
}

/// Runs the experiment described by a validated config.
pub fn run(config: &RunConfig) -> Result<Output, CliError> {
    super::validate(config)?;
    let p = &config.parameters;
    let total_time = p.total_time.unwrap_or(PI / (4.0 * J));
    let result = match config.experiment {
        Experiment::Table1 => {
            let n = p.n.unwrap_or(1);
            return Ok(Output::Table1(Table1Report { name: "table1", n, rows: table1_summary(n)? }));
        }
        Experiment::Rotate => {
            let n = p.n.unwrap_or(1);
            sequential_rotation(&rotation_params(config, n)?)?.param("total_time", total_time)
        }
        Experiment::RotateSweep => {
            let list = p.n_list.clone().unwrap_or_default();
            let runs: Vec<ExperimentResult> = list
                .par_iter()
                .map(|&n| sequential_rotation(&rotation_params(config, n)?))
                .collect::<crate::Result<_>>()?;
            let mut series = Series::new(["n", "fidelity", "infidelity", "infidelity_times_n"]);
            for (n, r) in list.iter().zip(&runs) {
                let get = |k| r.get(k).unwrap_or(f64::NAN);
                series.push(vec![*n as f64, get("fidelity"), get("infidelity"), get("infidelity_times_n")]);
            }
            let (alpha, beta) = amplitudes(p);
            ExperimentResult::new("rotate_sweep")
                .param("alpha", crate::protocols::complex_param(alpha))
                .param("beta", crate::protocols::complex_param(beta))
                .param("total_time", total_time)
                .with_series(series)
        }
        Experiment::CollectiveCheck => {
            let (alpha, beta) = amplitudes(p);
            simultaneous_coupling_check_for(p.n.unwrap_or(1), alpha, beta)?
        }
        Experiment::FermionSweep => {
            let pairs = p.pairs.unwrap_or(1);
            let search = optimize_angles(pairs, p.grid.unwrap_or(DEFAULT_GRID), p.refine.unwrap_or(DEFAULT_REFINE))?;
            search
                .to_result()
                .param("grid", p.grid.unwrap_or(DEFAULT_GRID))
                .param("refine", p.refine.unwrap_or(DEFAULT_REFINE))
        }
        Experiment::Bell => {
            let gamma = p.gamma.unwrap_or(0.0);
            let rho = rho_tp(gamma)?;
            ExperimentResult::new("bell")
                .param("gamma", gamma)
                .scalar("M", horodecki_m(&rho))
                .scalar("max_chsh_value", max_chsh_value(&rho))
                .scalar("concurrence", concurrence(&rho))
                .flag("violated", chsh_violated(&rho))
        }
        Experiment::Absorption => massless_absorption()?.result,
        Experiment::CoherentRotation => {
            let (alpha, beta) = amplitudes(p);
            let eta = p.eta.map(|z| z.0).unwrap_or_default();
            coherent_field_rotation(alpha, beta, eta, p.cutoff)?
        }
    };
    Ok(Output::Result(result.validated()?))
}
