//! Collective spin operators, the bath Hamiltonian and its ground state.
//!
//! The bath is `N` mutually coupled spin-1/2 particles in a transverse field,
//!
//! ```text
//! H = -(2 lambda / N) (Sx^2 + gamma Sy^2) - 2 h Sz + (lambda / 2)(1 + gamma)
//! ```
//!
//! with `S_a = sum_i sigma_i^a / 2`. Total spin is conserved, so everything
//! happens inside one symmetric block spanned by Dicke states `|S, M>`.
//! Basis ordering is fixed crate-wide: index `i` holds `M = S - i`
//! (M descending). The partition isometry and every matrix builder rely on it.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::half::Half;
use crate::linalg::{CVector, HermitianOperator};

/// Bath parameters of the XY collective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Number of bath spins, at least 2.
    pub n: u32,
    /// Intra-bath coupling strength, >= 0 (ferromagnetic).
    pub lambda: f64,
    /// Anisotropy in the x-y plane, in [0, 1].
    pub gamma: f64,
    /// Transverse field strength, > 0; sets the energy unit.
    pub h: f64,
}

impl BathParams {
    pub fn new(n: u32, lambda: f64, gamma: f64, h: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("N = {n} must be >= 2")));
        }
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lambda} must be >= 0"
            )));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma = {gamma} must lie in [0, 1]"
            )));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidParameter(format!("h = {h} must be > 0")));
        }
        Ok(Self { n, lambda, gamma, h })
    }
}

/// A fixed-total-spin Dicke block `|S, M>`, M descending from S to -S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricSubspace {
    n_spins: u32,
    two_s: u32,
}

impl SymmetricSubspace {
    /// The maximal block `S = N/2` that hosts the ferromagnetic ground state.
    pub fn maximal(n_spins: u32) -> Self {
        Self {
            n_spins,
            two_s: n_spins,
        }
    }

    /// A block with total spin `s <= N/2` on the same parity lattice as `N/2`.
    pub fn with_total_spin(n_spins: u32, s: Half) -> Result<Self> {
        let two_s = s.doubled();
        if two_s < 0 || two_s as u32 > n_spins {
            return Err(Error::QuantumNumber(format!(
                "total spin {s} outside [0, {}/2]",
                n_spins
            )));
        }
        if (two_s as u32) % 2 != n_spins % 2 {
            return Err(Error::QuantumNumber(format!(
                "total spin {s} has wrong parity for N = {n_spins}"
            )));
        }
        Ok(Self {
            n_spins,
            two_s: two_s as u32,
        })
    }

    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    pub fn total_spin(&self) -> Half {
        Half::from_doubled(self.two_s as i64)
    }

    pub fn dim(&self) -> usize {
        self.two_s as usize + 1
    }

    /// Projection at basis index `i`, i.e. `M = S - i`.
    pub fn m_at(&self, index: usize) -> Half {
        Half::from_doubled(self.two_s as i64 - 2 * index as i64)
    }

    /// Basis index of projection `m`, if it lies in this block.
    pub fn index_of(&self, m: Half) -> Option<usize> {
        let d = self.two_s as i64 - m.doubled();
        if d >= 0 && d % 2 == 0 && m.doubled() >= -(self.two_s as i64) {
            Some((d / 2) as usize)
        } else {
            None
        }
    }
}

/// Raising-operator matrix elements on the block, `S+ |S,M> = c |S,M+1>`.
fn ladder_plus(subspace: &SymmetricSubspace) -> DMatrix<f64> {
    let dim = subspace.dim();
    let two_s = subspace.two_s as i64;
    let mut sp = DMatrix::zeros(dim, dim);
    for i in 1..dim {
        let dm = two_s - 2 * i as i64; // doubled M of source column
        // S(S+1) - M(M+1) with doubled arguments: [2S(2S+2) - dM(dM+2)] / 4
        let c2 = (two_s * (two_s + 2) - dm * (dm + 2)) as f64 / 4.0;
        sp[(i - 1, i)] = c2.sqrt();
    }
    sp
}

/// Angular-momentum matrices `(Sx, Sy, Sz)` on a Dicke block.
pub fn build_collective_operators(
    subspace: &SymmetricSubspace,
) -> (HermitianOperator, HermitianOperator, HermitianOperator) {
    let dim = subspace.dim();
    let sp = ladder_plus(subspace);
    let sm = sp.transpose();
    let sx = (&sp + &sm) * 0.5;
    let mut sz = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        sz[(i, i)] = subspace.m_at(i).value();
    }
    // Sy = (S+ - S-) / 2i: purely imaginary entries
    let sy = crate::linalg::to_complex(&((&sp - &sm) * 0.5))
        .map(|z| crate::linalg::Complex64::new(0.0, -z.re));

    let sx = HermitianOperator::from_real("Sx", &sx).expect("Sx is symmetric by construction");
    let sy = HermitianOperator::new("Sy", sy).expect("Sy is Hermitian by construction");
    let sz = HermitianOperator::from_real("Sz", &sz).expect("Sz is diagonal");
    (sx, sy, sz)
}

/// Assemble the bath Hamiltonian from given collective operators.
///
/// The `2 lambda / N` prefactor always carries the full bath size `N`, also
/// when the operators act on a bipartite product space.
pub fn build_lmg_from_operators(
    params: &BathParams,
    sx: &HermitianOperator,
    sy: &HermitianOperator,
    sz: &HermitianOperator,
) -> Result<HermitianOperator> {
    let dim = sx.dim();
    if sy.dim() != dim || sz.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "collective operators disagree: {} / {} / {}",
            dim,
            sy.dim(),
            sz.dim()
        )));
    }
    let nf = f64::from(params.n);
    let sx2 = sx.matrix() * sx.matrix();
    let sy2 = sy.matrix() * sy.matrix();
    let c = crate::linalg::Complex64::new;
    let mat = sx2 * c(-2.0 * params.lambda / nf, 0.0)
        + sy2 * c(-2.0 * params.lambda * params.gamma / nf, 0.0)
        + sz.matrix() * c(-2.0 * params.h, 0.0)
        + crate::linalg::CMatrix::identity(dim, dim)
            * c(params.lambda / 2.0 * (1.0 + params.gamma), 0.0);
    HermitianOperator::new("H_bath", mat)
}

/// The bath Hamiltonian restricted to a Dicke block.
pub fn build_lmg_hamiltonian(
    params: &BathParams,
    subspace: &SymmetricSubspace,
) -> Result<HermitianOperator> {
    if subspace.n_spins() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "subspace is for N = {}, params have N = {}",
            subspace.n_spins(),
            params.n
        )));
    }
    let (sx, sy, sz) = build_collective_operators(subspace);
    build_lmg_from_operators(params, &sx, &sy, &sz)
}

/// Lowest eigenpair of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub vector: CVector,
    /// Set when the gap to the first excited level is below
    /// `1e-8 * max(1, |E0|)`.
    pub degenerate: bool,
}

/// Relative gap threshold for the degeneracy flag.
pub const DEGENERACY_TOL: f64 = 1e-8;

pub fn ground_state(h: &HermitianOperator) -> Result<GroundState> {
    let eig = h.eigh()?;
    let (energy, vector) = eig.ground();
    let degenerate = if eig.dim() > 1 {
        eig.values[1] - energy < DEGENERACY_TOL * energy.abs().max(1.0)
    } else {
        false
    };
    Ok(GroundState {
        energy,
        vector,
        degenerate,
    })
}

/// Finite-size level-crossing coupling `lambda_c = h N / (N - 1)`.
pub fn critical_coupling(n: u32, h: f64) -> f64 {
    h * f64::from(n) / f64::from(n - 1)
}

/// Ground-state magnetization per spin, `<Sz> / N`.
pub fn magnetization(gs: &GroundState, subspace: &SymmetricSubspace) -> f64 {
    let expect: f64 = gs
        .vector
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm_sqr() * subspace.m_at(i).value())
        .sum();
    expect / f64::from(subspace.n_spins())
}

/// Lowest `count` levels of the bath Hamiltonian restricted to total spin `s`.
pub fn spectrum(params: &BathParams, s: Half, count: usize) -> Result<Vec<f64>> {
    let subspace = SymmetricSubspace::with_total_spin(params.n, s)?;
    if count > subspace.dim() {
        return Err(Error::InvalidParameter(format!(
            "requested {count} levels from a block of dimension {}",
            subspace.dim()
        )));
    }
    let h = build_lmg_hamiltonian(params, &subspace)?;
    let eig = h.eigh()?;
    Ok(eig.values.iter().take(count).copied().collect())
}

/// Dicke projection selected by the isotropic bath in the broken phase.
///
/// Rounds `h N / 2 lambda` to the admissible `M` lattice; an exact tie is
/// resolved by evaluating the diagonal energy at both neighbors and taking
/// the lower one (the larger `M` on a true tie).
pub fn broken_phase_m(n: u32, lambda: f64, h: f64) -> Half {
    let two_s = n as i64;
    let target = h * f64::from(n) / lambda; // doubled target 2M = hN/lambda
    // admissible doubled values share the parity of N
    let lower = {
        let f = target.floor() as i64;
        if (f - two_s) % 2 == 0 {
            f
        } else {
            f - 1
        }
    };
    let clamp = |dm: i64| dm.clamp(-two_s, two_s);
    let cand = [clamp(lower), clamp(lower + 2)];
    // E(M) up to M-independent terms: (2 lambda / N) M^2 - 2 h M
    let energy = |dm: i64| {
        let m = dm as f64 / 2.0;
        2.0 * lambda / f64::from(n) * m * m - 2.0 * h * m
    };
    let dm = if energy(cand[0]) < energy(cand[1]) {
        cand[0]
    } else {
        cand[1]
    };
    Half::from_doubled(dm)
}
