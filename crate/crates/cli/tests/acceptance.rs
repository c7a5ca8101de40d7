// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Each test writes one `[PASS]` or `[FAIL]`
//! line with the measured figures straight to stderr (past the test harness
//! capture), then asserts.

use std::f64::consts::LN_2;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use decoscatter::linalg::{binary_entropy, linear_fit};
use decoscatter::lindblad_contrast::{
    contrast_report, evolve_lindblad, ExactModelSummary, JumpChoice, LindbladConfig,
};
use decoscatter::oracle_grid::{
    evolve_all_sectors, extract_channel_probabilities, interaction_energy_moments,
    oracle_density_matrix, GridOracleConfig, OracleDensity,
};
use decoscatter::reduced_density::{incoming_on_grid, narrow_packet_density};
use decoscatter::scattering::amplitudes;
use decoscatter::spin_bath::enumerate_sectors;
use decoscatter::{ModelParams, MomentumGrid, PacketSpec, SectorMixture};
use decoscatter_cli::{run_file, Experiment, ExperimentConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn verdict(criterion: u32, title: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let line = format!("\n[{tag}] criterion {criterion} ({title}): {detail}\n");
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {criterion} ({title}) failed: {detail}");
}

fn max_deviation(
    a: &nalgebra::DMatrix<num_complex::Complex64>,
    b: &nalgebra::DMatrix<num_complex::Complex64>,
) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn benchmark_spec() -> PacketSpec {
    PacketSpec::new(10.0, 2.0, -30.0).unwrap()
}

fn benchmark_cfg(spins: u32, coupling: f64, n_y: usize) -> GridOracleConfig {
    GridOracleConfig::benchmark(
        benchmark_spec(),
        ModelParams::new(1.0, coupling, spins).unwrap(),
        n_y,
    )
}

const BENCHMARK_SET: [(u32, f64); 6] = [(1, 0.5), (1, 1.0), (2, 0.5), (2, 1.0), (4, 0.5), (4, 1.0)];

#[test]
fn criterion_1_unitarity() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let draws = 10_000;
    let (mut unitarity, mut jump) = (0.0_f64, 0.0_f64);
    for _ in 0..draws {
        let spins = rng.random_range(1..=60);
        let params = ModelParams::new(
            10f64.powf(rng.random_range(-1.0..1.0)),
            rng.random_range(-10.0..10.0),
            spins,
        )
        .unwrap();
        let sectors = enumerate_sectors(&params).unwrap();
        let sector = sectors[rng.random_range(0..sectors.len())];
        let k = 10f64.powf(rng.random_range(-2.0..2.0));
        let a = amplitudes(k, &sector, &params).unwrap();
        unitarity =
            unitarity.max((a.reflection.norm_sqr() + a.transmission.norm_sqr() - 1.0).abs());
        jump = jump.max((1.0 + a.reflection - a.transmission).norm());
    }
    let elapsed = start.elapsed();
    let ok = unitarity <= 1e-12 && jump <= 1e-12 && elapsed < Duration::from_secs(1);
    verdict(
        1,
        "unitarity",
        ok,
        format!(
            "{draws} draws, max ||A|^2+|B|^2-1| = {unitarity:.3e}, max |1+A-B| = {jump:.3e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_offdiagonal_cancellation() {
    let start = Instant::now();
    let mut narrow_worst = 0.0_f64;
    for &(spins, mu, k0) in &[
        (1, 1.0, 1.0),
        (3, 0.7, 2.0),
        (20, 0.2, 5.0),
        (100, 0.05, 1.5),
    ] {
        let params = ModelParams::new(1.0, mu, spins).unwrap();
        let spec = PacketSpec::new(k0, 50.0 / k0, -500.0).unwrap();
        let sectors = enumerate_sectors(&params).unwrap();
        let d = narrow_packet_density(&spec, &sectors, &params, 10.0).unwrap();
        narrow_worst = narrow_worst.max(d.offdiag.norm() / d.p_transmit.max(d.p_reflect));
    }
    let mut full_worst = 0.0_f64;
    for &(spins, mu) in &[(1, 1.0), (4, 1.0), (20, 0.3)] {
        let params = ModelParams::new(1.0, mu, spins).unwrap();
        let spec = PacketSpec::new(5.0, 1.0, -10.0).unwrap();
        let grid = MomentumGrid::for_packet(&spec, 1024).unwrap();
        let sectors = enumerate_sectors(&params).unwrap();
        let mix = SectorMixture::analytic(&sectors, &spec, &grid, &params).unwrap();
        let scale = (0..grid.len())
            .map(|i| mix.element(i, i).re)
            .fold(0.0, f64::max);
        for i in grid.positive_indices() {
            if let Some(m) = grid.mirror(i) {
                full_worst = full_worst.max(mix.element(i, m).norm() / scale);
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = narrow_worst <= 1e-12 && full_worst <= 1e-12 && elapsed < Duration::from_secs(10);
    verdict(
        2,
        "off-diagonal cancellation",
        ok,
        format!(
            "narrow |rho(k0,-k0)|/max = {narrow_worst:.3e}, full TR mirror coherence/max = {full_worst:.3e}, {:.2} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_3_narrow_entropy_bound() {
    let start = Instant::now();
    let (mut above_bound, mut formula_gap) = (f64::NEG_INFINITY, 0.0_f64);
    let mut cases = 0;
    for &spins in &[1, 2, 5, 20, 100] {
        for &mu in &[0.0, 0.1, 0.5, 1.0, 3.0] {
            for &k0 in &[0.1, 0.5, 1.0, 5.0, 20.0] {
                let params = ModelParams::new(1.0, mu, spins).unwrap();
                let spec = PacketSpec::new(k0, 20.0 / k0, -400.0 / k0).unwrap();
                let sectors = enumerate_sectors(&params).unwrap();
                let s = narrow_packet_density(&spec, &sectors, &params, 10.0)
                    .unwrap()
                    .entropy();
                let p_r: f64 = sectors
                    .iter()
                    .map(|sec| {
                        sec.weight * amplitudes(k0, sec, &params).unwrap().reflection.norm_sqr()
                    })
                    .sum();
                above_bound = above_bound.max(s - LN_2);
                formula_gap = formula_gap.max((s - binary_entropy(p_r)).abs());
                cases += 1;
            }
        }
    }
    // single spin: 2 k0 = |g| at k0 = 0.5
    let params = ModelParams::new(1.0, 1.0, 1).unwrap();
    let sectors = enumerate_sectors(&params).unwrap();
    let scan_max = (0..=400)
        .map(|i| {
            let k0 = 0.05 * 10f64.powf(i as f64 / 200.0);
            let spec = PacketSpec::new(k0, 200.0, -2000.0).unwrap();
            narrow_packet_density(&spec, &sectors, &params, 10.0)
                .unwrap()
                .entropy()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let ok = above_bound <= 1e-10
        && formula_gap <= 1e-10
        && (LN_2 - scan_max).abs() <= 1e-3
        && elapsed < Duration::from_secs(30);
    verdict(
        3,
        "narrow entropy bound",
        ok,
        format!(
            "{cases} cases, max(S - ln2) = {above_bound:.3e}, max |S - H(P_R)| = {formula_gap:.3e}, \
             scan max = {scan_max:.12} (ln2 - max = {:.3e}), {:.2} s",
            LN_2 - scan_max,
            elapsed.as_secs_f64()
        ),
    );
}

struct OracleCase {
    spins: u32,
    mu: f64,
    channel: f64,
    density: f64,
    entropy: f64,
}

fn oracle_case(spins: u32, mu: f64) -> (OracleCase, OracleDensity) {
    let cfg = benchmark_cfg(spins, mu, 1 << 13);
    let grid = MomentumGrid::for_packet(&cfg.spec, 512).unwrap();
    let oracle = oracle_density_matrix(&cfg, &grid).unwrap();
    let sectors = enumerate_sectors(&cfg.params).unwrap();
    let mut channel = 0.0_f64;
    for t in &oracle.trajectories {
        let p = extract_channel_probabilities(t, &cfg).unwrap();
        let a = amplitudes(cfg.spec.k0, &t.sector, &cfg.params).unwrap();
        channel = channel
            .max((p.reflect - a.reflection_probability()).abs())
            .max((p.transmit - a.transmission_probability()).abs());
    }
    let analytic = SectorMixture::analytic(&sectors, &cfg.spec, &grid, &cfg.params)
        .unwrap()
        .to_density();
    let density = max_deviation(&oracle.density.elements, &analytic.elements) / analytic.max_abs();
    let narrow = narrow_packet_density(&cfg.spec, &sectors, &cfg.params, 10.0).unwrap();
    let entropy = (oracle.mixture.entropy() - narrow.entropy()).abs();
    (
        OracleCase {
            spins,
            mu,
            channel,
            density,
            entropy,
        },
        oracle,
    )
}

#[test]
fn criterion_4_oracle_equivalence() {
    let start = Instant::now();
    let cases: Vec<OracleCase> = BENCHMARK_SET
        .iter()
        .map(|&(n, mu)| oracle_case(n, mu).0)
        .collect();
    let elapsed = start.elapsed();
    let worst = |f: fn(&OracleCase) -> f64| cases.iter().map(f).fold(0.0, f64::max);
    let (channel, density, entropy) = (
        worst(|c| c.channel),
        worst(|c| c.density),
        worst(|c| c.entropy),
    );
    let per_case: Vec<String> = cases
        .iter()
        .map(|c| {
            format!(
                "N={} mu={}: {:.1e}/{:.1e}/{:.1e}",
                c.spins, c.mu, c.channel, c.density, c.entropy
            )
        })
        .collect();
    let ok =
        channel < 1e-3 && density < 1e-3 && entropy < 5e-3 && elapsed < Duration::from_secs(300);
    verdict(
        4,
        "oracle equivalence",
        ok,
        format!(
            "6 benchmark sets at n_y = 8192: max channel deviation {channel:.3e}, \
             max relative density deviation {density:.3e}, max entropy gap {entropy:.3e} nats [{}], {:.1} s",
            per_case.join("; "),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_5_conservation() {
    let start = Instant::now();
    let (mut energy, mut kinetic, mut assembled, mut sign) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for &(spins, mu) in &BENCHMARK_SET {
        let cfg = benchmark_cfg(spins, mu, 1 << 13);
        let sectors = enumerate_sectors(&cfg.params).unwrap();
        for t in evolve_all_sectors(&sectors, &cfg).unwrap() {
            energy = energy.max(t.energy_drift());
            let (a, b) = (t.initial().kinetic, t.last().kinetic);
            kinetic = kinetic.max(((b - a) / a).abs());
        }

        let grid = MomentumGrid::for_packet(&cfg.spec, 1024).unwrap();
        let mix = SectorMixture::analytic(&sectors, &cfg.spec, &grid, &cfg.params).unwrap();
        let f = incoming_on_grid(&cfg.spec, &grid).unwrap();
        let before: f64 = grid
            .values()
            .iter()
            .zip(&f)
            .map(|(k, z)| z.norm_sqr() * k * k)
            .sum::<f64>()
            * grid.dk()
            / 2.0;
        assembled = assembled.max(((mix.mean_kinetic_energy(1.0) - before) / before).abs());

        let flipped = cfg.params.with_flipped_coupling();
        let flipped_sectors = enumerate_sectors(&flipped).unwrap();
        let mix_flipped =
            SectorMixture::analytic(&flipped_sectors, &cfg.spec, &grid, &flipped).unwrap();
        sign = sign
            .max(max_deviation(
                &mix.to_density().elements,
                &mix_flipped.to_density().elements,
            ))
            .max((mix.entropy() - mix_flipped.entropy()).abs());
        let n1 = narrow_packet_density(&cfg.spec, &sectors, &cfg.params, 10.0).unwrap();
        let n2 = narrow_packet_density(&cfg.spec, &flipped_sectors, &flipped, 10.0).unwrap();
        sign = sign
            .max((n1.p_reflect - n2.p_reflect).abs())
            .max((n1.entropy() - n2.entropy()).abs());
    }
    // the oracle itself under mu -> -mu
    let cfg = benchmark_cfg(2, 1.0, 1 << 13);
    let mut flipped = cfg;
    flipped.params = cfg.params.with_flipped_coupling();
    let grid = MomentumGrid::for_packet(&cfg.spec, 256).unwrap();
    let a = oracle_density_matrix(&cfg, &grid).unwrap();
    let b = oracle_density_matrix(&flipped, &grid).unwrap();
    sign = sign
        .max(max_deviation(&a.density.elements, &b.density.elements))
        .max((a.mixture.entropy() - b.mixture.entropy()).abs());

    let elapsed = start.elapsed();
    let ok = energy < 1e-6 && kinetic < 1e-4 && assembled < 1e-6 && sign <= 1e-10;
    verdict(
        5,
        "conservation",
        ok,
        format!(
            "oracle <H> drift {energy:.3e}, particle kinetic change {kinetic:.3e}, \
             assembled <k^2>/2m change {assembled:.3e}, mu -> -mu deviation {sign:.3e}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_6_interaction_moments() {
    let start = Instant::now();
    let mut mean_worst = 0.0_f64;
    let mut cutoffs = Vec::new();
    let mut mid = Vec::new();
    for p in [12, 13, 14] {
        let cfg = benchmark_cfg(4, 1.0, 1 << p);
        let sectors = enumerate_sectors(&cfg.params).unwrap();
        let trajectories = evolve_all_sectors(&sectors, &cfg).unwrap();
        let series = interaction_energy_moments(&trajectories, &cfg).unwrap();
        mean_worst = mean_worst.max(
            series
                .samples
                .iter()
                .map(|m| m.mean.abs())
                .fold(0.0, f64::max),
        );
        let n = (cfg.collision_time() / cfg.dt).round() as usize;
        cutoffs.push(series.cutoff);
        mid.push(series.samples[n].mean_sq);
    }
    let (_, slope, r2) = linear_fit(&cutoffs, &mid);
    let elapsed = start.elapsed();
    let mean_ok = mean_worst <= 1e-10;
    let sq_ok = mid.iter().all(|&v| v > 0.0) && slope > 0.0 && r2 > 0.999;
    let ok = mean_ok && sq_ok && elapsed < Duration::from_secs(120);
    verdict(
        6,
        "interaction-energy moments",
        ok,
        format!(
            "max |<V>| = {mean_worst:.3e} (needs <= 1e-10), mid-collision <V^2> = {:.4e}/{:.4e}/{:.4e} \
             at cutoffs {:.1}/{:.1}/{:.1}, linear fit R^2 = {r2:.7}, {:.1} s",
            mid[0],
            mid[1],
            mid[2],
            cutoffs[0],
            cutoffs[1],
            cutoffs[2],
            elapsed.as_secs_f64()
        ),
    );
}

fn lindblad_cfg(gamma: f64, jump: JumpChoice) -> LindbladConfig {
    LindbladConfig {
        n_y: 128,
        y_extent: 10.0,
        gamma,
        jump,
        dt: 0.01,
        t_final: 4.0,
        sample_stride: 20,
        params: ModelParams::new(1.0, 0.0, 1).unwrap(),
        spec: PacketSpec::new(0.25, 1.0, -1.0).unwrap(),
    }
}

#[test]
fn criterion_7_lindblad_contrast() {
    let start = Instant::now();
    let gamma = 0.1;
    let position = evolve_lindblad(&lindblad_cfg(gamma, JumpChoice::Position)).unwrap();
    let momentum = evolve_lindblad(&lindblad_cfg(gamma, JumpChoice::Momentum)).unwrap();
    let rate = position.p_squared_rate();
    let rate_error = ((rate - gamma) / gamma).abs();
    let momentum_drift = momentum.max_relative_energy_drift();

    let (_, oracle) = oracle_case(1, 1.0);
    let exact = ExactModelSummary::from_oracle(&oracle);
    let report = contrast_report(&position, &exact);
    let elapsed = start.elapsed();
    let ok = rate_error < 0.02
        && momentum_drift < 1e-6
        && momentum.last().purity < momentum.first().purity
        && exact.entropy_gain > 0.0
        && exact.relative_energy_change().abs() <= 1e-4
        && report.lindblad_decoheres_with_heating
        && elapsed < Duration::from_secs(120);
    verdict(
        7,
        "Lindblad contrast",
        ok,
        format!(
            "position d<p^2>/dt = {rate:.6} vs gamma = {gamma} ({:.2}%), momentum <E> drift {momentum_drift:.3e}, \
             exact dS = {:.4e} at dE/E = {:.3e}, Lindblad dS = {:.4e} with dE = {:.4e}, {:.1} s",
            100.0 * rate_error,
            exact.entropy_gain,
            exact.relative_energy_change(),
            report.lindblad_entropy_gain,
            report.lindblad_energy_change,
            elapsed.as_secs_f64()
        ),
    );
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_suite(out: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(config_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    let mut collected = Vec::new();
    for path in files {
        let cfg = ExperimentConfig::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let experiment: Experiment = cfg
            .experiment
            .expect("shipped configs name their experiment");
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let dir = out.join(&name);
        let manifest = run_file(experiment, &path, Some(&dir), None).unwrap();
        collected.push((
            format!("{name}/manifest.json"),
            std::fs::read(dir.join("manifest.json")).unwrap(),
        ));
        for a in manifest.artifacts {
            collected.push((
                format!("{name}/{}", a.file),
                std::fs::read(dir.join(&a.file)).unwrap(),
            ));
        }
    }
    collected
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let root = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = std::fs::remove_dir_all(&root);
    let first = run_suite(&root.join("a"));
    let second = run_suite(&root.join("b"));
    let names_match = first.iter().map(|f| &f.0).eq(second.iter().map(|f| &f.0));
    let differing: Vec<&String> = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| a.1 != b.1)
        .map(|(a, _)| &a.0)
        .collect();
    let manifests = first
        .iter()
        .filter(|f| f.0.ends_with("manifest.json"))
        .count();
    let ok = names_match && differing.is_empty() && manifests > 0;
    verdict(
        8,
        "determinism",
        ok,
        format!(
            "{manifests} runs, {} files compared byte for byte, {} differ {:?}, {:.1} s",
            first.len(),
            differing.len(),
            differing,
            start.elapsed().as_secs_f64()
        ),
    );
}
