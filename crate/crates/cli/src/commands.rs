use std::fmt::Write as _;

use anyhow::Context;
use cosmoqsim::cosmology::scale_factor;
use cosmoqsim::mitigation::{error_estimate, survival_factor};
use cosmoqsim::paulicompile::{build_evolution_circuit, export_qasm};
use rayon::prelude::*;

use crate::config::Settings;
use crate::sweep::{compute_row, to_csv, Sampling, SweepRow};

/// Gate counts quoted alongside our own in the error estimate.
pub const REFERENCE_COUNTS: (usize, usize) = (96, 226);
pub const REFERENCE_ERROR: f64 = 0.52;

pub fn sweep_rows(settings: &Settings) -> anyhow::Result<Vec<SweepRow>> {
    let base = settings.params(1.0)?;
    let noise = settings.noise()?;
    let zne = settings.zne()?;
    let grid = settings.x_grid()?;
    let sampling = settings.shots.map(|shots| Sampling {
        shots,
        seed: settings.seed,
    });
    grid.par_iter()
        .enumerate()
        .map(|(i, &x)| {
            compute_row(&base, x, i, &noise, &zne, sampling)
                .with_context(|| format!("grid point x = {x}"))
        })
        .collect()
}

pub fn sweep(settings: &Settings) -> anyhow::Result<String> {
    Ok(to_csv(&sweep_rows(settings)?))
}

pub fn scale_factor_table(settings: &Settings) -> anyhow::Result<String> {
    let params = settings
        .rhos
        .iter()
        .map(|&rho| settings.params(rho))
        .collect::<Result<Vec<_>, _>>()?;
    if params.is_empty() {
        anyhow::bail!("no expansion rates given");
    }
    let etas = settings.eta_grid()?;
    let mut out = String::from("eta");
    for rho in &settings.rhos {
        let _ = write!(out, ",C_rho={rho}");
    }
    out.push('\n');
    for eta in etas {
        let _ = write!(out, "{eta:.11e}");
        for p in &params {
            let _ = write!(out, ",{:.11e}", scale_factor(p, eta));
        }
        out.push('\n');
    }
    Ok(out)
}

/// QASM text of the evolution circuit plus a gate-count summary.
pub fn export(settings: &Settings) -> anyhow::Result<(String, String)> {
    let params = settings.params(settings.rho)?;
    let circuit = build_evolution_circuit(&params)?;
    let summary = format!(
        "one-qubit gates: {}\ntwo-qubit gates: {}\n",
        circuit.one_qubit_count(),
        circuit.two_qubit_count()
    );
    Ok((export_qasm(&circuit), summary))
}

pub fn error_report(settings: &Settings) -> anyhow::Result<String> {
    let noise = settings.noise()?;
    let circuit = build_evolution_circuit(&settings.params(settings.rho)?)?;
    let (n2, n1) = (circuit.two_qubit_count(), circuit.one_qubit_count());
    let mut out = String::new();
    let _ = writeln!(out, "two-qubit gates: {n2} (eps2 = {:e})", noise.eps2);
    let _ = writeln!(out, "one-qubit gates: {n1} (eps1 = {:e})", noise.eps1);
    let _ = writeln!(out, "exponent: {:.6}", n2 as f64 * noise.eps2 + n1 as f64 * noise.eps1);
    let _ = writeln!(out, "survival factor: {:.6}", survival_factor(n2, noise.eps2, n1, noise.eps1));
    let _ = writeln!(out, "error: {:.6}", error_estimate(n2, noise.eps2, n1, noise.eps1));
    let (r2, r1) = REFERENCE_COUNTS;
    let _ = writeln!(
        out,
        "reference counts ({r2} two-qubit, {r1} one-qubit): error {:.6} (quoted as about {:.0}%)",
        error_estimate(r2, noise.eps2, r1, noise.eps1),
        REFERENCE_ERROR * 100.0
    );
    Ok(out)
}
