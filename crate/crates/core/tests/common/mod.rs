//! Full-Hilbert-space reference implementations.
//!
//! Everything here works on the raw `2^N` (or `2^(N+1)`) space with explicit
//! single-site Pauli operators, independently of the symmetric-subspace
//! machinery under test. Site 0 is the slowest tensor factor and bit value 0
//! means spin up, so basis index `b` has `n - popcount(b)` spins up.

use lmgdec_core::{CMatrix, CVector, Complex64, EigenSystem, Half, HermitianOperator};
use nalgebra::DMatrix;

pub fn pauli_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// `i * sigma_y`, kept real; `Y_i Y_j = -(iY)_i (iY)_j`.
pub fn i_pauli_y() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

/// Tensor chain with `ops[site]` (identity where `None`).
pub fn product_chain(n: usize, ops: &[(usize, &DMatrix<f64>)]) -> DMatrix<f64> {
    let id = DMatrix::<f64>::identity(2, 2);
    let mut out = DMatrix::<f64>::identity(1, 1);
    for site in 0..n {
        let op = ops
            .iter()
            .find(|(s, _)| *s == site)
            .map(|(_, m)| (*m).clone())
            .unwrap_or_else(|| id.clone());
        out = out.kronecker(&op);
    }
    out
}

pub fn site_operator(n: usize, site: usize, op: &DMatrix<f64>) -> DMatrix<f64> {
    product_chain(n, &[(site, op)])
}

/// Bath Hamiltonian on the full space,
/// `-(lambda/N) sum_{i<j} (XiXj + gamma YiYj) - h sum_i Zi`,
/// which equals the collective form including its constant term.
pub fn full_lmg(n: usize, lambda: f64, gamma: f64, h: f64) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut ham = DMatrix::<f64>::zeros(dim, dim);
    let x = pauli_x();
    let iy = i_pauli_y();
    for i in 0..n {
        for j in (i + 1)..n {
            ham -= lambda / n as f64 * product_chain(n, &[(i, &x), (j, &x)]);
            ham += lambda * gamma / n as f64 * product_chain(n, &[(i, &iy), (j, &iy)]);
        }
        ham -= h * site_operator(n, i, &pauli_z());
    }
    ham
}

/// Collective `S^2 = Sx^2 + Sy^2 + Sz^2` on the full space.
pub fn full_s_squared(n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut sx = DMatrix::<f64>::zeros(dim, dim);
    let mut siy = DMatrix::<f64>::zeros(dim, dim);
    let mut sz = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..n {
        sx += site_operator(n, i, &pauli_x()) * 0.5;
        siy += site_operator(n, i, &i_pauli_y()) * 0.5;
        sz += site_operator(n, i, &pauli_z()) * 0.5;
    }
    &sx * &sx - &siy * &siy + &sz * &sz
}

/// Dicke state `|N/2, M>` embedded in the full space: the normalized
/// symmetric sum over all configurations with the right up-spin count.
pub fn dicke_full(n: usize, m: Half) -> CVector {
    let n_up = ((m.doubled() + n as i64) / 2) as u32;
    let dim = 1usize << n;
    let count: usize = (0..dim)
        .filter(|b| n as u32 - (*b as u64).count_ones() == n_up)
        .count();
    let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
    CVector::from_fn(dim, |b, _| {
        if n as u32 - (b as u64).count_ones() == n_up {
            amp
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Embed a maximal-spin-block state (M descending) into the full space.
pub fn embed_symmetric(n: usize, block: &CVector) -> CVector {
    let dim = 1usize << n;
    let mut out = CVector::zeros(dim);
    for (idx, amp) in block.iter().enumerate() {
        let m = Half::from_doubled(n as i64 - 2 * idx as i64);
        out += dicke_full(n, m) * *amp;
    }
    out
}

fn eigh(label: &str, mat: &DMatrix<f64>) -> EigenSystem {
    HermitianOperator::from_real(label, mat)
        .unwrap()
        .eigh()
        .unwrap()
}

/// Decoherence factor on the full space for the Ising coupling to the first
/// `k` sites, starting from `gs_full`.
pub fn full_ising_d(
    n: usize,
    lambda: f64,
    gamma: f64,
    h: f64,
    epsilon: f64,
    k: usize,
    gs_full: &CVector,
    times: &[f64],
) -> Vec<Complex64> {
    let bath = full_lmg(n, lambda, gamma, h);
    let mut sz_k = DMatrix::<f64>::zeros(1 << n, 1 << n);
    for i in 0..k {
        sz_k += site_operator(n, i, &pauli_z()) * 0.5;
    }
    let shift = 2.0 * epsilon / (k as f64).sqrt();
    let plus = eigh("full_H_plus", &(&bath + &sz_k * shift));
    let minus = eigh("full_H_minus", &(&bath - &sz_k * shift));
    times
        .iter()
        .map(|&t| {
            let fwd = plus.evolve(gs_full, t);
            let bwd = minus.evolve(gs_full, t);
            fwd.dotc(&bwd)
        })
        .collect()
}

/// Joint Hamiltonian on `2 * 2^N` for the XY coupling to the first `k` sites.
pub fn full_joint_hamiltonian(
    n: usize,
    lambda: f64,
    gamma: f64,
    h: f64,
    epsilon: f64,
    k: usize,
    omega: f64,
) -> DMatrix<f64> {
    let dim = 1usize << n;
    let bath = full_lmg(n, lambda, gamma, h);
    let id_bath = DMatrix::<f64>::identity(dim, dim);
    let qz = pauli_z();
    let qx = pauli_x();
    let qiy = i_pauli_y();
    let mut ham = qz.kronecker(&id_bath) * (-omega) + DMatrix::identity(2, 2).kronecker(&bath);
    let scale = epsilon / (k as f64).sqrt();
    for i in 0..k {
        ham += qx.kronecker(&site_operator(n, i, &pauli_x())) * scale;
        // Yq (x) Yi = -(iY)q (x) (iY)i stays real
        ham -= qiy.kronecker(&site_operator(n, i, &i_pauli_y())) * (scale * gamma);
    }
    ham
}

/// Choi matrices of the reduced qubit channel from full-space tomography.
pub fn full_lmg_choi(
    n: usize,
    lambda: f64,
    gamma: f64,
    h: f64,
    epsilon: f64,
    k: usize,
    omega: f64,
    gs_full: &CVector,
    times: &[f64],
) -> Vec<CMatrix> {
    let dim = 1usize << n;
    let ham = full_joint_hamiltonian(n, lambda, gamma, h, epsilon, k, omega);
    let eig = eigh("full_H_total", &ham);
    let mut psi = [CVector::zeros(2 * dim), CVector::zeros(2 * dim)];
    for (q, v) in psi.iter_mut().enumerate() {
        for b in 0..dim {
            v[q * dim + b] = gs_full[b];
        }
    }
    times
        .iter()
        .map(|&t| {
            let states = [eig.evolve(&psi[0], t), eig.evolve(&psi[1], t)];
            let mut choi = CMatrix::zeros(4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    for q in 0..2 {
                        for qp in 0..2 {
                            let img: Complex64 = (0..dim)
                                .map(|b| {
                                    states[i][q * dim + b] * states[j][qp * dim + b].conj()
                                })
                                .sum();
                            choi[(i * 2 + q, j * 2 + qp)] = img * 0.5;
                        }
                    }
                }
            }
            choi
        })
        .collect()
}
