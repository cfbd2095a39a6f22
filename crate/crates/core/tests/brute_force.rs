//! Cross-checks of the symmetric-subspace machinery against explicit
//! full-Hilbert-space simulations at small `N`.

mod common;

use common::*;
use lmgdec_core::dephasing::{linspace, CouplingKind, CouplingSpec, IsingRun};
use lmgdec_core::dissipative::{build_joint_hamiltonian, channel_series};
use lmgdec_core::partition::{build_partition_isometry, PartitionedBath};
use lmgdec_core::spin::{
    build_lmg_hamiltonian, ground_state, spectrum, BathParams, SymmetricSubspace,
};
use lmgdec_core::{Complex64, Half, HermitianOperator};
use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[test]
fn block_spectrum_is_subset_of_full_spectrum() {
    for (n, lambda, gamma) in [(4u32, 1.3, 0.0), (6, 2.1, 0.5), (8, 0.7, 1.0)] {
        let params = BathParams::new(n, lambda, gamma, 1.0).unwrap();
        let sub = SymmetricSubspace::maximal(n);
        let block = build_lmg_hamiltonian(&params, &sub).unwrap();
        let block_eigs = block.eigh().unwrap().values;

        let full = full_lmg(n as usize, lambda, gamma, 1.0);
        let full_eigs = HermitianOperator::from_real("full", &full)
            .unwrap()
            .eigh()
            .unwrap()
            .values;
        for be in block_eigs.iter() {
            let matched = full_eigs.iter().any(|fe| (fe - be).abs() < 1e-9);
            assert!(matched, "block level {be} missing from full spectrum (N={n})");
        }
    }
}

#[test]
fn lower_spin_block_matches_projected_full_space() {
    // restrict the full Hamiltonian to the S = N/2 - 1 sector with a
    // polynomial projector in S^2 and compare level by level
    let n = 8usize;
    let params = BathParams::new(n as u32, 1.7, 0.5, 1.0).unwrap();
    let s = Half::from_int(3);
    let block_levels = spectrum(&params, s, 7).unwrap();

    let s2 = full_s_squared(n);
    let dim = 1usize << n;
    let mut projector = DMatrix::<f64>::identity(dim, dim);
    for other in [0i64, 1, 2, 4] {
        let c = (other * (other + 1)) as f64;
        let target = 12.0; // 3 * 4
        projector = projector * (&s2 - DMatrix::identity(dim, dim) * c) / (target - c);
    }
    let full = full_lmg(n, 1.7, 0.5, 1.0);
    // push the complement far above the physical spectrum
    let shifted = &projector * &full * &projector
        + (DMatrix::identity(dim, dim) - &projector) * 1e6;
    let full_eigs =
        HermitianOperator::hermitized("projected", lmgdec_core::linalg::to_complex(&shifted))
            .unwrap()
            .eigh()
            .unwrap()
            .values;

    // the sector carries multiplicity N - 1 = 7; every block level appears
    // seven times at the bottom of the shifted spectrum
    let multiplicity = n - 1;
    for (level_idx, be) in block_levels.iter().enumerate() {
        for copy in 0..multiplicity {
            let fe = full_eigs[level_idx * multiplicity + copy];
            assert!(
                (fe - be).abs() < 1e-8,
                "level {level_idx} copy {copy}: {fe} vs {be}"
            );
        }
    }
}

#[test]
fn isometry_columns_match_symmetric_state_factorization() {
    let n = 8usize;
    let k = 3usize;
    let iso = build_partition_isometry(n as u32, k as u32).unwrap();
    let sub = SymmetricSubspace::maximal(n as u32);
    let dim_b_block = n - k + 1;
    for col in 0..sub.dim() {
        let m = sub.m_at(col);
        let full = dicke_full(n, m);
        // overlap of |dicke_A (x) dicke_B> with the embedded Dicke state
        let mut dense = vec![0.0; (k + 1) * dim_b_block];
        for (row, value) in iso.column(col) {
            dense[*row] = *value;
        }
        for i_a in 0..=k {
            let m_a = Half::from_doubled(k as i64 - 2 * i_a as i64);
            for i_b in 0..dim_b_block {
                let m_b = Half::from_doubled((n - k) as i64 - 2 * i_b as i64);
                let da = dicke_full(k, m_a);
                let db = dicke_full(n - k, m_b);
                let mut overlap = Complex64::new(0.0, 0.0);
                for (ia_bits, amp_a) in da.iter().enumerate() {
                    if amp_a.norm() == 0.0 {
                        continue;
                    }
                    for (ib_bits, amp_b) in db.iter().enumerate() {
                        if amp_b.norm() == 0.0 {
                            continue;
                        }
                        overlap += amp_a * amp_b * full[(ia_bits << (n - k)) | ib_bits].conj();
                    }
                }
                let expected = dense[i_a * dim_b_block + i_b];
                assert!(
                    (overlap.re - expected).abs() < 1e-12 && overlap.im.abs() < 1e-14,
                    "column M={m}, (mA={m_a}, mB={m_b}): {} vs {expected}",
                    overlap.re
                );
            }
        }
    }
}

#[test]
fn transformed_ground_state_matches_full_space_overlaps() {
    // N = 6, k = 2, anisotropic broken phase
    let n = 6usize;
    let params = BathParams::new(n as u32, 3.0, 0.0, 1.0).unwrap();
    let sub = SymmetricSubspace::maximal(n as u32);
    let h = build_lmg_hamiltonian(&params, &sub).unwrap();
    let gs = ground_state(&h).unwrap();
    let gs_full = embed_symmetric(n, &gs.vector);

    let bath = PartitionedBath::new(&params, 2).unwrap();
    let transformed = &bath.ground().vector;
    for i_a in 0..3usize {
        let m_a = Half::from_doubled(2 - 2 * i_a as i64);
        for i_b in 0..5usize {
            let m_b = Half::from_doubled(4 - 2 * i_b as i64);
            let da = dicke_full(2, m_a);
            let db = dicke_full(4, m_b);
            let mut overlap = Complex64::new(0.0, 0.0);
            for (ia_bits, amp_a) in da.iter().enumerate() {
                for (ib_bits, amp_b) in db.iter().enumerate() {
                    overlap += (amp_a * amp_b).conj() * gs_full[(ia_bits << 4) | ib_bits];
                }
            }
            let got = transformed[i_a * 5 + i_b];
            assert!(
                (overlap - got).norm() < 1e-10,
                "(mA={m_a}, mB={m_b}): {overlap} vs {got}"
            );
        }
    }
}

#[test]
fn ising_decoherence_matches_full_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let times = linspace(10.0, 41);
    for trial in 0..6 {
        let n = rng.gen_range(4..=8u32);
        let k = [1, n.div_ceil(2), n][trial % 3];
        let lambda = 3.0 * rng.gen::<f64>();
        let gamma = rng.gen::<f64>();
        let epsilon = 3.0 * rng.gen::<f64>();
        let params = BathParams::new(n, lambda, gamma, 1.0).unwrap();
        let spec = CouplingSpec::new(epsilon, k, CouplingKind::Ising).unwrap();
        let run = IsingRun::new(&params, &spec).unwrap();
        let series = run.series(&times);

        // same deterministic ground-state computation the pipeline performs
        let sub = SymmetricSubspace::maximal(n);
        let h_block = build_lmg_hamiltonian(&params, &sub).unwrap();
        let gs_dicke = ground_state(&h_block).unwrap();
        let gs_full = embed_symmetric(n as usize, &gs_dicke.vector);
        let reference = full_ising_d(
            n as usize,
            lambda,
            gamma,
            1.0,
            epsilon,
            k as usize,
            &gs_full,
            &times,
        );
        for (got, want) in series.d_factor.iter().zip(reference.iter()) {
            assert!(
                (got - want).norm() < 1e-8,
                "N={n} k={k} lambda={lambda:.3} gamma={gamma:.3} eps={epsilon:.3}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn joint_hamiltonian_spectrum_matches_full_space() {
    // N = 6, completely connected, isotropic
    let n = 6u32;
    let params = BathParams::new(n, 1.8, 1.0, 1.0).unwrap();
    let bath = PartitionedBath::new(&params, n).unwrap();
    let spec = CouplingSpec::new(1.1, n, CouplingKind::Lmg).unwrap();
    let js = build_joint_hamiltonian(1.0, &bath, &spec).unwrap();
    let block_eigs = js.hamiltonian().eigh().unwrap().values;

    let full = full_joint_hamiltonian(n as usize, 1.8, 1.0, 1.0, 1.1, n as usize, 1.0);
    let full_eigs = HermitianOperator::from_real("full_joint", &full)
        .unwrap()
        .eigh()
        .unwrap()
        .values;
    for be in block_eigs.iter() {
        let matched = full_eigs.iter().any(|fe| (fe - be).abs() < 1e-9);
        assert!(matched, "joint level {be} missing from full spectrum");
    }
}

#[test]
fn channel_choi_matches_full_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let times = [0.0, 0.8, 2.9, 6.3, 10.0];
    for trial in 0..4 {
        let n = rng.gen_range(3..=6u32);
        let k = [1, n.div_ceil(2), n, 1][trial % 4];
        let lambda = 3.0 * rng.gen::<f64>();
        let gamma = rng.gen::<f64>();
        let epsilon = 2.0 * rng.gen::<f64>();
        let params = BathParams::new(n, lambda, gamma, 1.0).unwrap();
        let bath = PartitionedBath::new(&params, k).unwrap();
        let spec = CouplingSpec::new(epsilon, k, CouplingKind::Lmg).unwrap();
        let js = build_joint_hamiltonian(1.0, &bath, &spec).unwrap();
        let series = channel_series(&js, &times).unwrap();

        let sub = SymmetricSubspace::maximal(n);
        let h_block = build_lmg_hamiltonian(&params, &sub).unwrap();
        let gs_dicke = ground_state(&h_block).unwrap();
        let gs_full = embed_symmetric(n as usize, &gs_dicke.vector);
        let reference = full_lmg_choi(
            n as usize,
            lambda,
            gamma,
            1.0,
            epsilon,
            k as usize,
            1.0,
            &gs_full,
            &times,
        );
        for (snap, want) in series.snapshots.iter().zip(reference.iter()) {
            let dev = lmgdec_core::linalg::max_abs_diff(snap.choi.matrix(), want);
            assert!(
                dev < 1e-8,
                "N={n} k={k} lambda={lambda:.3} gamma={gamma:.3} eps={epsilon:.3} t={}: dev {dev:.3e}",
                snap.t
            );
        }
    }
}

#[test]
fn ground_state_embedding_is_consistent() {
    // embedded block ground state is an eigenvector of the full Hamiltonian
    for (n, lambda, gamma) in [(5usize, 2.4, 0.0), (7, 1.1, 0.8)] {
        let params = BathParams::new(n as u32, lambda, gamma, 1.0).unwrap();
        let sub = SymmetricSubspace::maximal(n as u32);
        let h = build_lmg_hamiltonian(&params, &sub).unwrap();
        let gs = ground_state(&h).unwrap();
        let gs_full = embed_symmetric(n, &gs.vector);
        assert!((gs_full.norm() - 1.0).abs() < 1e-12);
        let full = lmgdec_core::linalg::to_complex(&full_lmg(n, lambda, gamma, 1.0));
        let resid = &full * &gs_full - &gs_full * Complex64::new(gs.energy, 0.0);
        let worst = resid.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-9, "embedding residual {worst:.3e}");
    }
}
