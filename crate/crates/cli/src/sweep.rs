use std::fmt::Write as _;

use cosmoqsim::cosmology::{self, CosmologyParams};
use cosmoqsim::mitigation::{extrapolate_observables, run_scaled, zne_extrapolate, NoiseModel, ZneConfig};
use cosmoqsim::paulicompile::build_evolution_circuit;
use cosmoqsim::simcore::{
    expectation, fidelity, fidelity_first_order, init_state, partial_trace_mode,
    particle_number_from_expectations, particle_number_observables, run_circuit,
    sample_expectations, theoretical_reduced_state, DensityMatrix, Mode, ObservableString,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const HEADER: &str =
    "x,rho,n_full,n_trunc,n_ideal,n_noisy,n_zne,f_ideal,f_noisy,f_zne,f_first_order";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub rho: f64,
    pub n_full: f64,
    pub n_trunc: f64,
    pub n_ideal: f64,
    pub n_noisy: f64,
    pub n_zne: f64,
    pub f_ideal: f64,
    pub f_noisy: f64,
    pub f_zne: f64,
    pub f_first_order: f64,
}

impl SweepRow {
    pub fn values(&self) -> [f64; 11] {
        [
            self.x,
            self.rho,
            self.n_full,
            self.n_trunc,
            self.n_ideal,
            self.n_noisy,
            self.n_zne,
            self.f_ideal,
            self.f_noisy,
            self.f_zne,
            self.f_first_order,
        ]
    }
}

/// Shot sampling of the noisy branch: one ChaCha stream per grid point.
#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub shots: usize,
    pub seed: u64,
}

/// Populations of the kept mode from ⟨IZ⟩, ⟨ZI⟩, ⟨ZZ⟩, clipped at zero and
/// renormalised.
pub fn mode_populations(iz: f64, zi: f64, zz: f64) -> [f64; 4] {
    let mut p = [0.0; 4];
    for (idx, slot) in p.iter_mut().enumerate() {
        let s_hi = if idx & 2 == 0 { 1.0 } else { -1.0 };
        let s_lo = if idx & 1 == 0 { 1.0 } else { -1.0 };
        *slot = (0.25 * (1.0 + s_lo * iz + s_hi * zi + s_hi * s_lo * zz)).max(0.0);
    }
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|v| *v /= total);
    } else {
        p = [0.25; 4];
    }
    p
}

fn measure(
    rho: &DensityMatrix,
    observables: &[ObservableString],
    rng: Option<&mut ChaCha8Rng>,
    shots: usize,
) -> anyhow::Result<Vec<f64>> {
    Ok(match rng {
        Some(rng) => sample_expectations(&rho.probabilities(), observables, shots, rng)?,
        None => observables
            .iter()
            .map(|o| expectation(rho, o))
            .collect::<Result<_, _>>()?,
    })
}

/// One grid point of the sweep.
pub fn compute_row(
    base: &CosmologyParams,
    x: f64,
    index: usize,
    noise: &NoiseModel,
    zne: &ZneConfig,
    sampling: Option<Sampling>,
) -> anyhow::Result<SweepRow> {
    let rho = 10f64.powf(x);
    let params = base.with_rho(rho);
    params.validate()?;
    let n_full = cosmology::n_expected_full(&params)?;
    let n_trunc = cosmology::n_expected_truncated(&params)?;

    let circuit = build_evolution_circuit(&params)?;
    let ideal = run_circuit(&circuit, &init_state(4, "0000")?)?;
    let observables = particle_number_observables();
    let ideal_dm = DensityMatrix::from_state(&ideal);
    let ideal_vals = measure(&ideal_dm, &observables, None, 0)?;
    let n_ideal = particle_number_from_expectations(&ideal_vals);

    let target = theoretical_reduced_state(&params)?;
    let f_ideal = fidelity(&target, &partial_trace_mode(&ideal, Mode::Second)?)?;

    let states = run_scaled(&circuit, noise, zne)?;
    let f_noisy = fidelity(&target, &partial_trace_mode(&states[0], Mode::Second)?)?;

    let mut rng = sampling.map(|s| {
        let mut r = ChaCha8Rng::seed_from_u64(s.seed);
        r.set_stream(index as u64);
        r
    });
    let shots = sampling.map_or(0, |s| s.shots);
    let per_scale = states
        .iter()
        .map(|rho| measure(rho, &observables, rng.as_mut(), shots))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let n_noisy = particle_number_from_expectations(&per_scale[0]);

    let mitigated: Vec<f64> = if sampling.is_some() {
        (0..observables.len())
            .map(|k| {
                let points: Vec<(f64, f64)> = zne
                    .scale_factors
                    .iter()
                    .zip(&per_scale)
                    .map(|(&s, vals)| (f64::from(s), vals[k]))
                    .collect();
                Ok(zne_extrapolate(&points, zne.extrapolator)?.value)
            })
            .collect::<anyhow::Result<_>>()?
    } else {
        extrapolate_observables(&states, &observables, zne)?
            .into_iter()
            .map(|e| e.value)
            .collect()
    };
    let n_zne = particle_number_from_expectations(&mitigated).max(0.0);
    // observables start with IIIZ, IIZI, IIZZ
    let pops = mode_populations(mitigated[0], mitigated[1], mitigated[2]);
    let f_zne = fidelity(&target, &DensityMatrix::diagonal(&pops)?)?;

    // first-order estimate from the measured (unmitigated) data
    let first: std::collections::BTreeMap<ObservableString, f64> = observables[..3]
        .iter()
        .cloned()
        .zip(per_scale[0][..3].iter().copied())
        .collect();
    let f_first_order = fidelity_first_order(&first, &params)?.clamp(0.0, 1.0);

    Ok(SweepRow {
        x,
        rho,
        n_full,
        n_trunc,
        n_ideal,
        n_noisy,
        n_zne,
        f_ideal: f_ideal.min(1.0),
        f_noisy: f_noisy.min(1.0),
        f_zne: f_zne.min(1.0),
        f_first_order,
    })
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 200);
    out.push_str(HEADER);
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.values().iter().map(|v| format!("{v:.11e}")).collect();
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}
