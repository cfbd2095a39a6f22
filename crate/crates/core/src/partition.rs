//! Bipartite splits of the bath and the isometry into the product space.
//!
//! Splitting the bath into a block of `k` spins and the remaining `N - k`
//! turns a maximal-spin Dicke state into a two-term-per-column combination of
//! block Dicke states,
//!
//! ```text
//! |N/2, M>  =  sum_{mA + mB = M}  c(mA, mB) |k/2, mA> (x) |(N-k)/2, mB>
//! ```
//!
//! with coefficients that reduce to square roots of binomial ratios. The
//! resulting isometry `T` lets operators that act only on the `k`-spin block
//! be handled in a space of dimension `(k+1)(N-k+1)` instead of `2^N`.
//!
//! Product-space basis ordering is row-major over `(mA descending, mB
//! descending)`: the `k`-spin block is the first (slow) tensor factor.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::half::Half;
use crate::linalg::{to_complex, CMatrix, CVector, HermitianOperator};
use crate::spin::{
    build_collective_operators, build_lmg_from_operators, ground_state, BathParams, GroundState,
    SymmetricSubspace,
};

/// Cumulative log-factorial table; binomials up to `N ~ 2000` without
/// overflowing, where `C(62, 31)` already exceeds 64-bit integers.
#[derive(Debug, Clone)]
pub struct LogBinomial {
    log_factorial: Vec<f64>,
}

impl LogBinomial {
    /// Table serving all `ln C(a, b)` with `a <= max_a`.
    pub fn new(max_a: u32) -> Self {
        let mut log_factorial = Vec::with_capacity(max_a as usize + 1);
        log_factorial.push(0.0);
        let mut acc = 0.0;
        for a in 1..=max_a as usize {
            acc += (a as f64).ln();
            log_factorial.push(acc);
        }
        Self { log_factorial }
    }

    /// `ln C(a, b)`; `b` outside `[0, a]` has no states and returns -inf.
    pub fn ln_choose(&self, a: u32, b: i64) -> f64 {
        if b < 0 || b > a as i64 {
            return f64::NEG_INFINITY;
        }
        self.log_factorial[a as usize]
            - self.log_factorial[b as usize]
            - self.log_factorial[(a as i64 - b) as usize]
    }

    pub fn choose(&self, a: u32, b: i64) -> f64 {
        self.ln_choose(a, b).exp()
    }
}

fn check_split(n: u32, k: u32) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must satisfy 1 <= k <= N - 1 with N = {n}"
        )));
    }
    Ok(())
}

/// Overlap `<k/2, mA| (x) <(N-k)/2, mB | N/2, M>` for the maximal-spin branch.
///
/// Zero unless `mA + mB = M`; otherwise
/// `sqrt( C(k, mA + k/2) C(N-k, mB + (N-k)/2) / C(N, M + N/2) )`,
/// evaluated in log space.
pub fn cg_coefficient(n: u32, k: u32, m_a: Half, m_b: Half, m: Half) -> Result<f64> {
    check_split(n, k)?;
    let s_a = Half::from_doubled(k as i64);
    let s_b = Half::from_doubled((n - k) as i64);
    let s = Half::from_doubled(n as i64);
    if !m_a.is_projection_of(s_a) {
        return Err(Error::QuantumNumber(format!("mA = {m_a} invalid for k = {k}")));
    }
    if !m_b.is_projection_of(s_b) {
        return Err(Error::QuantumNumber(format!(
            "mB = {m_b} invalid for N - k = {}",
            n - k
        )));
    }
    if !m.is_projection_of(s) {
        return Err(Error::QuantumNumber(format!("M = {m} invalid for N = {n}")));
    }
    if m_a + m_b != m {
        return Ok(0.0);
    }
    let table = LogBinomial::new(n);
    Ok(cg_from_table(&table, n, k, m_a, m_b, m))
}

fn cg_from_table(table: &LogBinomial, n: u32, k: u32, m_a: Half, m_b: Half, m: Half) -> f64 {
    let a = (m_a.doubled() + k as i64) / 2;
    let b = (m_b.doubled() + (n - k) as i64) / 2;
    let c = (m.doubled() + n as i64) / 2;
    let ln = 0.5 * (table.ln_choose(k, a) + table.ln_choose(n - k, b) - table.ln_choose(n, c));
    ln.exp()
}

/// The isometry `T` from the maximal-spin block into the `k / (N-k)` product
/// space. Stored sparsely: each source column `M` holds at most `k + 1`
/// nonzero, nonnegative coefficients.
#[derive(Debug, Clone)]
pub struct PartitionIsometry {
    n: u32,
    k: u32,
    /// Per source column (M descending): `(product-space row, coefficient)`.
    columns: Vec<Vec<(usize, f64)>>,
}

/// Build the isometry for a `k / (N-k)` split, `1 <= k <= N - 1`.
pub fn build_partition_isometry(n: u32, k: u32) -> Result<PartitionIsometry> {
    check_split(n, k)?;
    let table = LogBinomial::new(n);
    let dim_b = (n - k) as usize + 1;
    let source = SymmetricSubspace::maximal(n);
    let block_a = SymmetricSubspace::maximal(k);
    let block_b = SymmetricSubspace::maximal(n - k);

    let mut columns = Vec::with_capacity(source.dim());
    for col in 0..source.dim() {
        let m = source.m_at(col);
        let mut entries = Vec::new();
        for i_a in 0..block_a.dim() {
            let m_a = block_a.m_at(i_a);
            let m_b = m - m_a;
            let Some(i_b) = block_b.index_of(m_b) else {
                continue;
            };
            let coeff = cg_from_table(&table, n, k, m_a, m_b, m);
            if coeff > 0.0 {
                entries.push((i_a * dim_b + i_b, coeff));
            }
        }
        columns.push(entries);
    }
    Ok(PartitionIsometry { n, k, columns })
}

impl PartitionIsometry {
    pub fn n_spins(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn source_dim(&self) -> usize {
        self.n as usize + 1
    }

    /// `(k + 1, N - k + 1)`.
    pub fn target_dims(&self) -> (usize, usize) {
        (self.k as usize + 1, (self.n - self.k) as usize + 1)
    }

    pub fn target_dim(&self) -> usize {
        let (a, b) = self.target_dims();
        a * b
    }

    /// Nonzero coefficients of source column `M` as `(row, value)` pairs.
    pub fn column(&self, index: usize) -> &[(usize, f64)] {
        &self.columns[index]
    }

    /// Materialize `T` densely.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.target_dim(), self.source_dim());
        for (col, entries) in self.columns.iter().enumerate() {
            for &(row, value) in entries {
                t[(row, col)] = value;
            }
        }
        t
    }

    /// `T v`: carry a maximal-spin state into the product space. Isometric,
    /// so the norm is preserved.
    pub fn transform_state(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {}, expected {}",
                v.len(),
                self.source_dim()
            )));
        }
        let mut w = CVector::zeros(self.target_dim());
        for (col, entries) in self.columns.iter().enumerate() {
            let amp = v[col];
            for &(row, value) in entries {
                w[row] += amp * value;
            }
        }
        Ok(w)
    }

    /// `T H T^dag` on the product space.
    ///
    /// The result vanishes on the orthogonal complement of the image of `T`;
    /// restricted to the image it carries the spectrum of `H`.
    pub fn transform_operator(&self, h: &HermitianOperator) -> Result<HermitianOperator> {
        if h.dim() != self.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator `{}` has dimension {}, expected {}",
                h.label(),
                h.dim(),
                self.source_dim()
            )));
        }
        let t = to_complex(&self.to_dense());
        let mat = &t * h.matrix() * t.adjoint();
        HermitianOperator::hermitized(format!("{}_partitioned", h.label()), mat)
    }
}

/// The bath expressed on the `k / (N-k)` product space: true block-built
/// Hamiltonian, collective operators of the `k`-spin block, and the
/// transformed ground state.
///
/// For `k = N` there is nothing to split and the Dicke block is used as is.
#[derive(Debug, Clone)]
pub struct PartitionedBath {
    params: BathParams,
    k: u32,
    isometry: Option<PartitionIsometry>,
    h_bath: HermitianOperator,
    sx_block: HermitianOperator,
    sy_block: HermitianOperator,
    sz_block: HermitianOperator,
    ground: GroundState,
}

impl PartitionedBath {
    /// Build the arena for a qubit coupled to `k` of the `N` bath spins.
    ///
    /// The ground state is always computed in the cheap `N + 1` Dicke block
    /// and carried over by the isometry; the product-space Hamiltonian is
    /// assembled from block collective operators `S = S_A (x) 1 + 1 (x) S_B`,
    /// which restricts to the transported Dicke-block Hamiltonian on the
    /// image of `T` and keeps the true bath energies on its complement.
    pub fn new(params: &BathParams, k: u32) -> Result<Self> {
        if k < 1 || k > params.n {
            return Err(Error::InvalidParameter(format!(
                "k = {k} must satisfy 1 <= k <= N = {}",
                params.n
            )));
        }
        let full = SymmetricSubspace::maximal(params.n);
        let h_dicke = crate::spin::build_lmg_hamiltonian(params, &full)?;
        let gs_dicke = ground_state(&h_dicke)?;

        if k == params.n {
            let (sx, sy, sz) = build_collective_operators(&full);
            return Ok(Self {
                params: *params,
                k,
                isometry: None,
                h_bath: h_dicke,
                sx_block: sx,
                sy_block: sy,
                sz_block: sz,
                ground: gs_dicke,
            });
        }

        let isometry = build_partition_isometry(params.n, k)?;
        let block_a = SymmetricSubspace::maximal(k);
        let block_b = SymmetricSubspace::maximal(params.n - k);
        let (ax, ay, az) = build_collective_operators(&block_a);
        let (bx, by, bz) = build_collective_operators(&block_b);
        let id_a = CMatrix::identity(block_a.dim(), block_a.dim());
        let id_b = CMatrix::identity(block_b.dim(), block_b.dim());

        let lift_a = |op: &HermitianOperator, name: &str| {
            HermitianOperator::new(name, op.matrix().kronecker(&id_b))
                .expect("kron with identity preserves Hermiticity")
        };
        let sx_block = lift_a(&ax, "Sx_block");
        let sy_block = lift_a(&ay, "Sy_block");
        let sz_block = lift_a(&az, "Sz_block");

        let total = |a: &HermitianOperator, b: &HermitianOperator, name: &str| {
            HermitianOperator::new(
                name,
                a.matrix().kronecker(&id_b) + id_a.kronecker(b.matrix()),
            )
            .expect("sum of lifted collective operators is Hermitian")
        };
        let sx = total(&ax, &bx, "Sx");
        let sy = total(&ay, &by, "Sy");
        let sz = total(&az, &bz, "Sz");
        let h_bath = build_lmg_from_operators(params, &sx, &sy, &sz)?;

        let vector = isometry.transform_state(&gs_dicke.vector)?;
        let ground = GroundState {
            energy: gs_dicke.energy,
            vector,
            degenerate: gs_dicke.degenerate,
        };

        Ok(Self {
            params: *params,
            k,
            isometry: Some(isometry),
            h_bath,
            sx_block,
            sy_block,
            sz_block,
            ground,
        })
    }

    pub fn params(&self) -> &BathParams {
        &self.params
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.h_bath.dim()
    }

    pub fn isometry(&self) -> Option<&PartitionIsometry> {
        self.isometry.as_ref()
    }

    /// Bath Hamiltonian on the arena space.
    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h_bath
    }

    /// Collective operators of the coupled `k`-spin block, lifted to the
    /// arena space.
    pub fn block_operators(
        &self,
    ) -> (&HermitianOperator, &HermitianOperator, &HermitianOperator) {
        (&self.sx_block, &self.sy_block, &self.sz_block)
    }

    pub fn ground(&self) -> &GroundState {
        &self.ground
    }
}
