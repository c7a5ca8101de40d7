// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

use decoscatter::linalg::binary_entropy;
use decoscatter::lindblad_contrast::{
    contrast_report, evolve_lindblad, ExactModelSummary, LindbladSeries,
};
use decoscatter::oracle_grid::{
    extract_channel_probabilities, interaction_energy_moments, oracle_density_matrix,
};
use decoscatter::reduced_density::{incoming_on_grid, narrow_packet_density};
use decoscatter::scattering::{
    amplitudes, bath_averaged_probabilities, reflected_phase_vs_hard_wall,
};
use decoscatter::spin_bath::enumerate_sectors;
use decoscatter::{MomentumGrid, SectorMixture};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Experiment, ExperimentConfig, Point, ScanMode};
use crate::output::{to_value, Artifact, Cell, Table};
use crate::CliError;

const LN_2: f64 = std::f64::consts::LN_2;
pub const ORACLE_TOLERANCE: f64 = 1e-3;
pub const ORACLE_ENTROPY_TOLERANCE: f64 = 5e-3;
/// Full-density runs above this size skip the dense eigensolve cross-check.
const DENSE_CHECK_MAX_POINTS: usize = 1024;

type Core<T> = Result<T, CliError>;

fn core<T>(r: decoscatter::Result<T>) -> Core<T> {
    r.map_err(CliError::from_core)
}

/// Evaluates every point independently and returns results in sweep order.
fn per_point<T: Send>(points: &[Point], f: impl Fn(&Point) -> Core<T> + Sync) -> Core<Vec<T>> {
    points.par_iter().map(&f).collect()
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    hash: &'a str,
    points: Vec<Point>,
}

impl Ctx<'_> {
    fn sweep_header(&self) -> Vec<String> {
        self.cfg
            .sweep
            .as_ref()
            .map(|s| vec![format!("sweep_{}", s.parameter.column())])
            .unwrap_or_default()
    }

    fn table(&self, columns: &[&str]) -> Table {
        let mut header = self.sweep_header();
        header.extend(columns.iter().map(|c| c.to_string()));
        Table::new(&header)
    }

    fn row(&self, point: &Point, cells: Vec<Cell>) -> Vec<Cell> {
        let mut row: Vec<Cell> = point.value.map(Cell::F).into_iter().collect();
        row.extend(cells);
        row
    }

    fn sweep_json(&self) -> Value {
        match &self.cfg.sweep {
            Some(s) => json!(s.parameter.column()),
            None => Value::Null,
        }
    }

    fn csv(&self, file: &str, table: &Table) -> Artifact {
        Artifact::csv(file, table, self.hash)
    }
}

pub fn run(experiment: Experiment, cfg: &ExperimentConfig, hash: &str) -> Core<Vec<Artifact>> {
    let ctx = Ctx {
        cfg,
        hash,
        points: cfg.points()?,
    };
    match experiment {
        Experiment::Amplitudes => run_amplitudes(&ctx),
        Experiment::Narrow => run_narrow(&ctx),
        Experiment::FullDensity => run_full_density(&ctx),
        Experiment::OracleValidate => run_oracle_validate(&ctx),
        Experiment::EntropyScan => run_entropy_scan(&ctx),
        Experiment::Lindblad => run_lindblad(&ctx),
        Experiment::Contrast => run_contrast(&ctx),
    }
}

fn run_amplitudes(ctx: &Ctx) -> Core<Vec<Artifact>> {
    let mut table = ctx.table(&[
        "k",
        "twice_net_spin",
        "weight",
        "re_a",
        "im_a",
        "re_b",
        "im_b",
        "abs_a",
        "abs_b",
        "p_reflect",
        "p_transmit",
        "unitarity_defect",
        "jump_defect",
        "phase_vs_hard_wall",
    ]);
    let results = per_point(&ctx.points, |p| {
        let sectors = core(enumerate_sectors(&p.params))?;
        let rows = sectors
            .iter()
            .map(|s| core(amplitudes(p.k, s, &p.params)).map(|a| (*s, a)))
            .collect::<Core<Vec<_>>>()?;
        let avg = core(bath_averaged_probabilities(p.k, &sectors, &p.params))?;
        Ok((rows, avg))
    })?;
    let (mut unitarity, mut jump) = (0.0_f64, 0.0_f64);
    let mut averaged = Vec::new();
    for (p, (rows, avg)) in ctx.points.iter().zip(&results) {
        for (s, a) in rows {
            let u = (a.reflection.norm_sqr() + a.transmission.norm_sqr() - 1.0).abs();
            let j = (1.0 + a.reflection - a.transmission).norm();
            unitarity = unitarity.max(u);
            jump = jump.max(j);
            let phase = reflected_phase_vs_hard_wall(a).unwrap_or(f64::NAN);
            table.push(ctx.row(
                p,
                vec![
                    p.k.into(),
                    s.twice_net_spin.into(),
                    s.weight.into(),
                    a.reflection.re.into(),
                    a.reflection.im.into(),
                    a.transmission.re.into(),
                    a.transmission.im.into(),
                    a.reflection.norm().into(),
                    a.transmission.norm().into(),
                    a.reflection_probability().into(),
                    a.transmission_probability().into(),
                    u.into(),
                    j.into(),
                    phase.into(),
                ],
            ));
        }
        averaged.push(json!({"value": p.value, "k": p.k, "p_reflect": avg.reflect, "p_transmit": avg.transmit}));
    }
    let summary = json!({
        "experiment": "amplitudes",
        "sweep": ctx.sweep_json(),
        "rows": table.rows.len(),
        "max_unitarity_defect": unitarity,
        "max_jump_defect": jump,
        "bath_averaged": averaged,
    });
    Ok(vec![
        ctx.csv("amplitudes.csv", &table),
        Artifact::json("amplitudes.json", &summary),
    ])
}

fn run_narrow(ctx: &Ctx) -> Core<Vec<Artifact>> {
    let threshold = ctx.cfg.threshold();
    let results = per_point(&ctx.points, |p| {
        let sectors = core(enumerate_sectors(&p.params))?;
        core(narrow_packet_density(
            &p.spec, &sectors, &p.params, threshold,
        ))
    })?;
    let mut table = ctx.table(&[
        "k0",
        "sigma0_k0",
        "spins",
        "mu",
        "p_reflect",
        "p_transmit",
        "entropy",
        "ln2_bound",
        "offdiag_abs",
    ]);
    let mut records = Vec::new();
    for (p, d) in ctx.points.iter().zip(&results) {
        table.push(ctx.row(
            p,
            vec![
                p.spec.k0.into(),
                p.spec.narrowness().into(),
                p.params.spins.into(),
                p.params.coupling.into(),
                d.p_reflect.into(),
                d.p_transmit.into(),
                d.entropy().into(),
                LN_2.into(),
                d.offdiag.norm().into(),
            ],
        ));
        records.push(json!({
            "value": p.value,
            "p_reflect": d.p_reflect,
            "p_transmit": d.p_transmit,
            "entropy": d.entropy(),
            "offdiag_abs": d.offdiag.norm(),
        }));
    }
    let summary = json!({
        "experiment": "narrow",
        "sweep": ctx.sweep_json(),
        "narrowness_threshold": threshold,
        "points": records,
    });
    Ok(vec![
        ctx.csv("narrow.csv", &table),
        Artifact::json("narrow.json", &summary),
    ])
}

struct FullPoint {
    grid: MomentumGrid,
    mixture: SectorMixture,
    eigenvalues: Vec<f64>,
    p_reflect: f64,
    kinetic_in: f64,
    kinetic_out: f64,
    mirror_coherence: f64,
    dense: Option<(f64, f64, f64)>,
}

fn full_point(ctx: &Ctx, p: &Point, dense_check: bool) -> Core<FullPoint> {
    let grid = core(ctx.cfg.grid.unwrap_or_default().build(&p.spec))?;
    let sectors = core(enumerate_sectors(&p.params))?;
    let mixture = core(SectorMixture::analytic(&sectors, &p.spec, &grid, &p.params))?;
    let mut eigenvalues = mixture.eigenvalues();
    eigenvalues.reverse();
    let p_reflect = core(bath_averaged_probabilities(p.spec.k0, &sectors, &p.params))?.reflect;
    let f = core(incoming_on_grid(&p.spec, &grid))?;
    let kinetic_in = grid
        .values()
        .iter()
        .zip(&f)
        .map(|(k, a)| a.norm_sqr() * k * k)
        .sum::<f64>()
        * grid.dk()
        / (2.0 * p.params.mass);
    let kinetic_out = mixture.mean_kinetic_energy(p.params.mass);
    let diag_max = (0..grid.len())
        .map(|i| mixture.element(i, i).re)
        .fold(0.0, f64::max);
    let mirror_coherence = grid
        .positive_indices()
        .filter_map(|i| grid.mirror(i).map(|m| mixture.element(i, m).norm()))
        .fold(0.0, f64::max)
        / diag_max;
    let dense = if dense_check && grid.len() <= DENSE_CHECK_MAX_POINTS {
        let rho = mixture.to_density();
        let d = core(rho.diagnostics())?;
        Some((d.entropy, d.hermiticity_defect, d.min_eigenvalue))
    } else {
        None
    };
    Ok(FullPoint {
        grid,
        mixture,
        eigenvalues,
        p_reflect,
        kinetic_in,
        kinetic_out,
        mirror_coherence,
        dense,
    })
}

fn run_full_density(ctx: &Ctx) -> Core<Vec<Artifact>> {
    let results = per_point(&ctx.points, |p| full_point(ctx, p, true))?;
    let mut summary_table = ctx.table(&[
        "k0",
        "sigma0_k0",
        "entropy",
        "narrow_entropy",
        "purity",
        "trace",
        "kinetic_in",
        "kinetic_out",
        "mirror_coherence",
    ]);
    let mut spectrum = ctx.table(&["index", "eigenvalue"]);
    let mut coherence = ctx.table(&["k", "rho_diag", "suppression_k0", "suppression_mirror"]);
    let mut records = Vec::new();
    for (p, r) in ctx.points.iter().zip(&results) {
        let entropy = decoscatter::linalg::entropy_of_spectrum(&r.eigenvalues);
        let trace: f64 = r.eigenvalues.iter().sum();
        let purity: f64 = r.eigenvalues.iter().map(|l| l * l).sum();
        let narrow = binary_entropy(r.p_reflect);
        summary_table.push(ctx.row(
            p,
            vec![
                p.spec.k0.into(),
                p.spec.narrowness().into(),
                entropy.into(),
                narrow.into(),
                purity.into(),
                trace.into(),
                r.kinetic_in.into(),
                r.kinetic_out.into(),
                r.mirror_coherence.into(),
            ],
        ));
        for (i, l) in r.eigenvalues.iter().enumerate() {
            spectrum.push(ctx.row(p, vec![i.into(), (*l).into()]));
        }
        let k0_bin = r.grid.nearest_index(p.spec.k0);
        for i in 0..r.grid.len() {
            let nan = f64::NAN;
            let mirror = r
                .grid
                .mirror(i)
                .and_then(|m| r.mixture.suppression(i, m))
                .unwrap_or(nan);
            coherence.push(ctx.row(
                p,
                vec![
                    r.grid.value(i).into(),
                    r.mixture.element(i, i).re.into(),
                    r.mixture.suppression(i, k0_bin).unwrap_or(nan).into(),
                    mirror.into(),
                ],
            ));
        }
        records.push(json!({
            "value": p.value,
            "grid_points": r.grid.len(),
            "k_max": r.grid.k_max(),
            "entropy": entropy,
            "narrow_entropy": narrow,
            "entropy_excess": entropy - narrow,
            "purity": purity,
            "trace": trace,
            "kinetic_in": r.kinetic_in,
            "kinetic_out": r.kinetic_out,
            "kinetic_relative_change": (r.kinetic_out - r.kinetic_in) / r.kinetic_in,
            "mirror_coherence": r.mirror_coherence,
            "dense_check": r.dense.map(|(s, h, m)| json!({
                "entropy": s,
                "hermiticity_defect": h,
                "min_eigenvalue": m,
            })),
        }));
    }
    let summary = json!({
        "experiment": "full-density",
        "sweep": ctx.sweep_json(),
        "points": records,
    });
    Ok(vec![
        ctx.csv("full_density.csv", &summary_table),
        ctx.csv("full_density_spectrum.csv", &spectrum),
        ctx.csv("full_density_coherence.csv", &coherence),
        Artifact::json("full_density.json", &summary),
    ])
}

fn run_oracle_validate(ctx: &Ctx) -> Core<Vec<Artifact>> {
    let section = ctx.cfg.oracle.expect("validated");
    let threshold = ctx.cfg.threshold();
    let mut sectors_table = ctx.table(&[
        "twice_net_spin",
        "weight",
        "p_reflect_oracle",
        "p_transmit_oracle",
        "p_reflect_exact",
        "p_transmit_exact",
        "deviation",
        "norm_drift",
        "energy_drift",
        "kinetic_relative_change",
    ]);
    let mut moments = ctx.table(&["t", "v_mean", "v_sq", "cutoff"]);
    let mut records = Vec::new();
    // sweep points run one after another; sectors inside a point run in parallel
    for p in &ctx.points {
        let cfg = section.build(p.spec, p.params);
        let grid = core(MomentumGrid::for_packet(&p.spec, section.density_points))?;
        let oracle = core(oracle_density_matrix(&cfg, &grid))?;
        let sectors = core(enumerate_sectors(&p.params))?;
        let mut max_dev = 0.0_f64;
        for t in &oracle.trajectories {
            let probs = core(extract_channel_probabilities(t, &cfg))?;
            let exact = core(amplitudes(p.spec.k0, &t.sector, &p.params))?;
            let dev = (probs.reflect - exact.reflection_probability())
                .abs()
                .max((probs.transmit - exact.transmission_probability()).abs());
            max_dev = max_dev.max(dev);
            let (k_in, k_out) = (t.initial().kinetic, t.last().kinetic);
            sectors_table.push(ctx.row(
                p,
                vec![
                    t.sector.twice_net_spin.into(),
                    t.sector.weight.into(),
                    probs.reflect.into(),
                    probs.transmit.into(),
                    exact.reflection_probability().into(),
                    exact.transmission_probability().into(),
                    dev.into(),
                    t.norm_drift().into(),
                    t.energy_drift().into(),
                    ((k_out - k_in) / k_in).into(),
                ],
            ));
        }
        let analytic = core(SectorMixture::analytic(&sectors, &p.spec, &grid, &p.params))?;
        let analytic_rho = analytic.to_density();
        let density_dev = (&oracle.density.elements - &analytic_rho.elements)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            / analytic_rho.max_abs();
        let narrow_entropy = narrow_packet_density(&p.spec, &sectors, &p.params, threshold)
            .ok()
            .map(|d| d.entropy());
        let oracle_entropy = oracle.mixture.entropy();
        let series = core(interaction_energy_moments(&oracle.trajectories, &cfg))?;
        for m in series.samples.iter().step_by(cfg.diagnostic_stride) {
            moments.push(ctx.row(
                p,
                vec![
                    m.t.into(),
                    m.mean.into(),
                    m.mean_sq.into(),
                    series.cutoff.into(),
                ],
            ));
        }
        let energy_drift = oracle
            .trajectories
            .iter()
            .map(|t| t.energy_drift())
            .fold(0.0, f64::max);
        let norm_drift = oracle
            .trajectories
            .iter()
            .map(|t| t.norm_drift())
            .fold(0.0, f64::max);
        let entropy_ok =
            narrow_entropy.is_none_or(|s| (oracle_entropy - s).abs() <= ORACLE_ENTROPY_TOLERANCE);
        records.push(json!({
            "value": p.value,
            "spins": p.params.spins,
            "mu": p.params.coupling,
            "n_y": cfg.n_y,
            "y_extent": cfg.y_extent,
            "dt": cfg.dt,
            "steps": cfg.steps(),
            "max_channel_deviation": max_dev,
            "density_max_deviation_relative": density_dev,
            "entropy_oracle": oracle_entropy,
            "entropy_analytic": analytic.entropy(),
            "entropy_narrow": narrow_entropy,
            "max_norm_drift": norm_drift,
            "max_energy_drift": energy_drift,
            "max_abs_mean_interaction": series.samples.iter().map(|m| m.mean.abs()).fold(0.0, f64::max),
            "max_mean_sq_interaction": series.samples.iter().map(|m| m.mean_sq).fold(0.0, f64::max),
            "cutoff": series.cutoff,
            "pass": max_dev < ORACLE_TOLERANCE && density_dev < ORACLE_TOLERANCE && entropy_ok,
        }));
    }
    let report = json!({
        "experiment": "oracle-validate",
        "sweep": ctx.sweep_json(),
        "tolerance": ORACLE_TOLERANCE,
        "entropy_tolerance": ORACLE_ENTROPY_TOLERANCE,
        "points": records,
    });
    Ok(vec![
        ctx.csv("oracle_sectors.csv", &sectors_table),
        ctx.csv("oracle_moments.csv", &moments),
        Artifact::json("oracle_validate.json", &report),
    ])
}

fn run_entropy_scan(ctx: &Ctx) -> Core<Vec<Artifact>> {
    let mode = ctx.cfg.mode.expect("validated");
    let threshold = ctx.cfg.threshold();
    let rows = per_point(&ctx.points, |p| {
        let sectors = core(enumerate_sectors(&p.params))?;
        match mode {
            ScanMode::Narrow => {
                let d = core(narrow_packet_density(
                    &p.spec, &sectors, &p.params, threshold,
                ))?;
                Ok((d.p_reflect, d.entropy(), None))
            }
            ScanMode::Full => {
                let r = full_point(ctx, p, false)?;
                let s = decoscatter::linalg::entropy_of_spectrum(&r.eigenvalues);
                Ok((r.p_reflect, s, Some(binary_entropy(r.p_reflect))))
            }
        }
    })?;
    let columns: &[&str] = match mode {
        ScanMode::Narrow => &["p_reflect", "entropy", "ln2_bound"],
        ScanMode::Full => &["p_reflect", "entropy", "ln2_bound", "narrow_entropy"],
    };
    let mut table = ctx.table(columns);
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for (p, (pr, s, narrow)) in ctx.points.iter().zip(&rows) {
        let mut cells: Vec<Cell> = vec![(*pr).into(), (*s).into(), LN_2.into()];
        cells.extend(narrow.map(Cell::F));
        table.push(ctx.row(p, cells));
        if *s > best.1 {
            best = (p.value.unwrap_or(f64::NAN), *s);
        }
    }
    let bound_respected = best.1 <= LN_2 + 1e-10;
    if mode == ScanMode::Narrow && !bound_respected {
        return Err(CliError::Numerical(format!(
            "narrow-mode entropy {} exceeds ln 2",
            best.1
        )));
    }
    let summary = json!({
        "experiment": "entropy-scan",
        "mode": mode,
        "sweep": ctx.sweep_json(),
        "argmax": best.0,
        "max_entropy": best.1,
        "ln2_bound": LN_2,
        "gap_to_bound": LN_2 - best.1,
        "bound_respected": bound_respected,
    });
    Ok(vec![
        ctx.csv("entropy_scan.csv", &table),
        Artifact::json("entropy_scan.json", &summary),
    ])
}

const LINDBLAD_COLUMNS: [&str; 7] = [
    "t",
    "trace",
    "purity",
    "energy",
    "p_squared",
    "entropy",
    "min_eigenvalue",
];

fn lindblad_runs(ctx: &Ctx) -> Core<Vec<LindbladSeries>> {
    let section = ctx.cfg.lindblad.expect("validated");
    per_point(&ctx.points, |p| {
        core(evolve_lindblad(&section.build(p.spec, p.params, p.gamma)))
    })
}

fn lindblad_table(ctx: &Ctx, runs: &[LindbladSeries]) -> Table {
    let mut table = ctx.table(&LINDBLAD_COLUMNS);
    for (p, run) in ctx.points.iter().zip(runs) {
        for s in &run.samples {
            table.push(ctx.row(
                p,
                vec![
                    s.t.into(),
                    s.trace.into(),
                    s.purity.into(),
                    s.energy.into(),
                    s.p_squared.into(),
                    s.entropy.into(),
                    s.min_eigenvalue.into(),
                ],
            ));
        }
    }
    table
}

fn run_lindblad(ctx: &Ctx) -> Core<Vec<Artifact>> {
    let runs = lindblad_runs(ctx)?;
    let records: Vec<Value> = ctx
        .points
        .iter()
        .zip(&runs)
        .map(|(p, r)| {
            json!({
                "value": p.value,
                "gamma": r.config.gamma,
                "jump": r.config.jump,
                "p_squared_rate": r.p_squared_rate(),
                "predicted_rate": r.config.heating_rate(),
                "max_trace_drift": r.max_trace_drift(),
                "max_relative_energy_drift": r.max_relative_energy_drift(),
                "final_purity": r.last().purity,
                "final_entropy": r.last().entropy,
                "min_eigenvalue": r.samples.iter().map(|s| s.min_eigenvalue).fold(f64::INFINITY, f64::min),
            })
        })
        .collect();
    let summary = json!({
        "experiment": "lindblad",
        "sweep": ctx.sweep_json(),
        "points": records,
    });
    Ok(vec![
        ctx.csv("lindblad.csv", &lindblad_table(ctx, &runs)),
        Artifact::json("lindblad.json", &summary),
    ])
}

fn run_contrast(ctx: &Ctx) -> Core<Vec<Artifact>> {
    let section = ctx.cfg.oracle.expect("validated");
    let cfg = section.build(ctx.cfg.spec, ctx.cfg.params);
    let grid = core(MomentumGrid::for_packet(
        &ctx.cfg.spec,
        section.density_points,
    ))?;
    let exact = ExactModelSummary::from_oracle(&core(oracle_density_matrix(&cfg, &grid))?);
    let runs = lindblad_runs(ctx)?;
    let reports: Vec<Value> = runs
        .iter()
        .map(|r| to_value(&contrast_report(r, &exact)))
        .collect();
    let summary = json!({
        "experiment": "contrast",
        "sweep": ctx.sweep_json(),
        "exact": exact,
        "exact_relative_energy_change": exact.relative_energy_change(),
        "reports": reports,
    });
    Ok(vec![
        ctx.csv("contrast_lindblad.csv", &lindblad_table(ctx, &runs)),
        Artifact::json("contrast.json", &summary),
    ])
}
