// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

use decoscatter::oracle_grid::{
    evolve_all_sectors, evolve_sector, extract_channel_probabilities, free_packet_fidelity,
    oracle_density_matrix, DeltaMode, GridOracleConfig,
};
use decoscatter::reduced_density::narrow_packet_density;
use decoscatter::scattering::amplitudes;
use decoscatter::spin_bath::enumerate_sectors;
use decoscatter::{ModelParams, MomentumGrid, PacketSpec, SectorMixture};

fn benchmark(spins: u32, coupling: f64) -> GridOracleConfig {
    let spec = PacketSpec::new(10.0, 2.0, -30.0).unwrap();
    let params = ModelParams::new(1.0, coupling, spins).unwrap();
    GridOracleConfig::benchmark(spec, params, 1 << 13)
}

#[test]
fn single_spin_transmission_matches_closed_form() {
    let cfg = benchmark(1, 1.0);
    for sector in enumerate_sectors(&cfg.params).unwrap() {
        let traj = evolve_sector(&sector, &cfg).unwrap();
        let p = extract_channel_probabilities(&traj, &cfg).unwrap();
        let exact = amplitudes(cfg.spec.k0, &sector, &cfg.params).unwrap();
        assert!((p.transmit - exact.transmission_probability()).abs() < 1e-3);
        assert!((p.reflect - exact.reflection_probability()).abs() < 1e-3);
        assert!((p.reflect + p.transmit - 1.0).abs() < 1e-8);
        assert!(traj.norm_drift() < 1e-8);
        assert!(traj.energy_drift() < 1e-6);
    }
}

#[test]
fn zero_spin_sector_disperses_freely() {
    let spec = PacketSpec::new(2.0, 1.0, -12.0).unwrap();
    let params = ModelParams::new(1.0, 1.0, 2).unwrap();
    let mut cfg = GridOracleConfig::benchmark(spec, params, 1 << 14);
    cfg.dt = 0.005;
    let free = enumerate_sectors(&params).unwrap()[1];
    assert_eq!(free.twice_net_spin, 0);
    let traj = evolve_sector(&free, &cfg).unwrap();
    let fidelity = free_packet_fidelity(&traj.final_state, cfg.t_final, &cfg);
    assert!(fidelity > 1.0 - 1e-6, "fidelity {fidelity}");
}

#[test]
fn strong_coupling_reflects_like_a_wall() {
    // g / 2k0 = 1000 in the m_s = +1/2 sector
    let cfg = benchmark(1, 2.0e4);
    let sector = enumerate_sectors(&cfg.params).unwrap()[1];
    let traj = evolve_sector(&sector, &cfg).unwrap();
    let p = extract_channel_probabilities(&traj, &cfg).unwrap();
    assert!(p.reflect > 0.999, "reflect {}", p.reflect);
}

#[test]
fn regularizations_agree() {
    let mut cfg = benchmark(2, 1.0);
    let sectors = enumerate_sectors(&cfg.params).unwrap();
    let spike = evolve_all_sectors(&sectors, &cfg).unwrap();
    cfg.delta_mode = DeltaMode::NarrowGaussian { width: 0.004 };
    let smooth = evolve_all_sectors(&sectors, &cfg).unwrap();
    for (a, b) in spike.iter().zip(&smooth) {
        let pa = extract_channel_probabilities(a, &cfg).unwrap();
        let pb = extract_channel_probabilities(b, &cfg).unwrap();
        assert!((pa.transmit - pb.transmit).abs() < 2e-3);
    }
}

#[test]
fn refinement_approaches_closed_form() {
    let sector = enumerate_sectors(&benchmark(4, 1.0).params).unwrap()[4];
    let exact = amplitudes(10.0, &sector, &benchmark(4, 1.0).params)
        .unwrap()
        .transmission_probability();
    let errors: Vec<f64> = [11, 12, 13]
        .iter()
        .map(|&p| {
            let mut cfg = benchmark(4, 1.0);
            cfg.n_y = 1 << p;
            let traj = evolve_sector(&sector, &cfg).unwrap();
            (extract_channel_probabilities(&traj, &cfg).unwrap().transmit - exact).abs()
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-3);
}

#[test]
fn oracle_density_matches_analytic_assembly() {
    let cfg = benchmark(1, 1.0);
    let grid = MomentumGrid::for_packet(&cfg.spec, 512).unwrap();
    let oracle = oracle_density_matrix(&cfg, &grid).unwrap();
    let sectors = enumerate_sectors(&cfg.params).unwrap();
    let analytic = SectorMixture::analytic(&sectors, &cfg.spec, &grid, &cfg.params)
        .unwrap()
        .to_density();
    let deviation = (&oracle.density.elements - &analytic.elements)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(deviation < 1e-3 * analytic.max_abs());

    let narrow = narrow_packet_density(&cfg.spec, &sectors, &cfg.params, 10.0).unwrap();
    assert!((oracle.mixture.entropy() - narrow.entropy()).abs() < 5e-3);
}

#[test]
fn zero_coupling_stays_pure() {
    let cfg = benchmark(2, 0.0);
    let grid = MomentumGrid::for_packet(&cfg.spec, 256).unwrap();
    let oracle = oracle_density_matrix(&cfg, &grid).unwrap();
    assert!((oracle.mixture.purity() - 1.0).abs() < 1e-6);
}

#[test]
fn particle_kinetic_energy_unchanged_by_collision() {
    let cfg = benchmark(4, 1.0);
    let sectors = enumerate_sectors(&cfg.params).unwrap();
    for traj in evolve_all_sectors(&sectors, &cfg).unwrap() {
        let (before, after) = (traj.initial().kinetic, traj.last().kinetic);
        assert!(((after - before) / before).abs() < 1e-4);
    }
}

#[test]
fn coupling_sign_leaves_bath_averages_unchanged() {
    let cfg = benchmark(2, 1.0);
    let mut flipped = cfg;
    flipped.params = cfg.params.with_flipped_coupling();
    let grid = MomentumGrid::for_packet(&cfg.spec, 256).unwrap();
    let a = oracle_density_matrix(&cfg, &grid).unwrap();
    let b = oracle_density_matrix(&flipped, &grid).unwrap();
    let deviation = (&a.density.elements - &b.density.elements)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(deviation < 1e-10);
    assert!((a.mixture.entropy() - b.mixture.entropy()).abs() < 1e-10);
}
