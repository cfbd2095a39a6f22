//! Dissipative evolution of the qubit under an XY coupling to the bath.
//!
//! The qubit exchanges energy with its `k`-spin block, so its populations
//! move and the reduced dynamics is a full quantum channel, reconstructed at
//! each time by tomography: evolve the two basis vectors `|i> (x) |GS>` under
//! the joint Hamiltonian (spectrally, one diagonalization per run), trace out
//! the bath from the cross outer-products, and hand the images to the
//! quantum-operations module for Choi, Kraus, average purity and the
//! entanglement-breaking witness.

use crate::channel::{choi_from_images, ChannelSnapshot};
use crate::dephasing::{CouplingKind, CouplingSpec};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, Complex64, EigenSystem, HermitianOperator};
use crate::partition::PartitionedBath;
use crate::spin::GroundState;

/// Joint qubit (x) bath system with an XY interaction on the `k`-spin block.
#[derive(Debug, Clone)]
pub struct JointSystem {
    omega: f64,
    gamma: f64,
    coupling: CouplingSpec,
    bath: HermitianOperator,
    gs_bath: GroundState,
    h_total: HermitianOperator,
}

/// Assemble the joint Hamiltonian
///
/// ```text
/// H = -omega qz (x) 1  +  1 (x) H_R  +  (2 eps / sqrt k)(qx (x) Sx_A + gamma qy (x) Sy_A)
/// ```
///
/// on the doubled arena space. The factor 2 converts the Pauli sum of the
/// interaction into block collective operators, so `eps` keeps its
/// per-link meaning. The anisotropy is taken from the bath parameters: the
/// qubit couples to its block spins the same way the bath spins couple to
/// each other.
pub fn build_joint_hamiltonian(
    omega: f64,
    bath: &PartitionedBath,
    spec: &CouplingSpec,
) -> Result<JointSystem> {
    if spec.kind != CouplingKind::Lmg {
        return Err(Error::KindMismatch {
            expected: CouplingKind::Lmg.to_string(),
            actual: spec.kind.to_string(),
        });
    }
    if spec.k != bath.k() {
        return Err(Error::DimensionMismatch(format!(
            "coupling has k = {}, bath was partitioned at k = {}",
            spec.k,
            bath.k()
        )));
    }
    let gamma = bath.params().gamma;
    let dim_r = bath.dim();
    let id_r = CMatrix::identity(dim_r, dim_r);
    let c = Complex64::new;

    let mut qz = CMatrix::zeros(2, 2);
    qz[(0, 0)] = c(1.0, 0.0);
    qz[(1, 1)] = c(-1.0, 0.0);
    let mut qx = CMatrix::zeros(2, 2);
    qx[(0, 1)] = c(1.0, 0.0);
    qx[(1, 0)] = c(1.0, 0.0);
    let mut qy = CMatrix::zeros(2, 2);
    qy[(0, 1)] = c(0.0, -1.0);
    qy[(1, 0)] = c(0.0, 1.0);

    let (sx_a, sy_a, _) = bath.block_operators();
    let strength = 2.0 * spec.epsilon / f64::from(spec.k).sqrt();
    let id2 = CMatrix::identity(2, 2);
    let mat = qz.kronecker(&id_r) * c(-omega, 0.0)
        + id2.kronecker(bath.hamiltonian().matrix())
        + qx.kronecker(sx_a.matrix()) * c(strength, 0.0)
        + qy.kronecker(sy_a.matrix()) * c(strength * gamma, 0.0);
    let h_total = HermitianOperator::new("H_total", mat)?;

    Ok(JointSystem {
        omega,
        gamma,
        coupling: *spec,
        bath: bath.hamiltonian().clone(),
        gs_bath: bath.ground().clone(),
        h_total,
    })
}

impl JointSystem {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn coupling(&self) -> &CouplingSpec {
        &self.coupling
    }

    pub fn bath(&self) -> &HermitianOperator {
        &self.bath
    }

    pub fn bath_ground(&self) -> &GroundState {
        &self.gs_bath
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h_total
    }

    pub fn dim(&self) -> usize {
        self.h_total.dim()
    }

    /// Diagonalize the joint Hamiltonian once for reuse across a time grid.
    pub fn propagator(&self) -> Result<ChannelPropagator> {
        let dim_r = self.bath.dim();
        let eig = self.h_total.eigh()?;
        let mut psi = [CVector::zeros(2 * dim_r), CVector::zeros(2 * dim_r)];
        for (i, v) in psi.iter_mut().enumerate() {
            for b in 0..dim_r {
                v[i * dim_r + b] = self.gs_bath.vector[b];
            }
        }
        Ok(ChannelPropagator {
            dim_r,
            coeffs: [eig.coefficients(&psi[0]), eig.coefficients(&psi[1])],
            eig,
        })
    }
}

/// Spectral data for evolving the two tomography states.
pub struct ChannelPropagator {
    dim_r: usize,
    eig: EigenSystem,
    coeffs: [CVector; 2],
}

impl ChannelPropagator {
    fn evolved(&self, which: usize, t: f64) -> CVector {
        let phased = CVector::from_fn(self.eig.dim(), |idx, _| {
            self.coeffs[which][idx] * Complex64::from_polar(1.0, -self.eig.values[idx] * t)
        });
        &self.eig.vectors * phased
    }

    /// Channel snapshot at time `t`: images by bath partial trace, then the
    /// Choi/Kraus/purity/witness chain.
    pub fn snapshot(&self, t: f64) -> Result<ChannelSnapshot> {
        let states = [self.evolved(0, t), self.evolved(1, t)];
        for s in &states {
            let norm = s.norm();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::Eigensolver {
                    label: "H_total".into(),
                    reason: format!("joint state norm drifted to {norm}"),
                });
            }
        }
        let dim_r = self.dim_r;
        let mut images = vec![vec![CMatrix::zeros(2, 2); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                images[i][j] = CMatrix::from_fn(2, 2, |q, qp| {
                    (0..dim_r)
                        .map(|b| states[i][q * dim_r + b] * states[j][qp * dim_r + b].conj())
                        .sum()
                });
            }
        }
        ChannelSnapshot::from_choi(t, choi_from_images(&images)?)
    }
}

/// Channel snapshots over a time grid.
#[derive(Debug, Clone)]
pub struct ChannelSeries {
    pub times: Vec<f64>,
    pub snapshots: Vec<ChannelSnapshot>,
}

impl ChannelSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn min_avg_purity(&self) -> Option<(f64, f64)> {
        self.snapshots
            .iter()
            .map(|s| (s.t, s.avg_purity))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    pub fn max_mu(&self) -> Option<(f64, f64)> {
        self.snapshots
            .iter()
            .map(|s| (s.t, s.mu))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    pub fn any_entanglement_breaking(&self) -> bool {
        self.snapshots.iter().any(|s| s.entanglement_breaking)
    }
}

/// Single-time channel; prefer [`channel_series`] for grids, which shares
/// one diagonalization.
pub fn channel_at_time(js: &JointSystem, t: f64) -> Result<ChannelSnapshot> {
    js.propagator()?.snapshot(t)
}

pub fn channel_series(js: &JointSystem, times: &[f64]) -> Result<ChannelSeries> {
    let propagator = js.propagator()?;
    let snapshots = times
        .iter()
        .map(|&t| propagator.snapshot(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelSeries {
        times: times.to_vec(),
        snapshots,
    })
}
