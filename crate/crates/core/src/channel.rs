//! Quantum operations: Choi matrices, Kraus sets, superoperators, average
//! purity and the partial-transpose entanglement-breaking witness.
//!
//! Conventions, fixed here and used everywhere:
//!
//! * Choi matrix (channel state on ancilla (x) system, ancilla first):
//!   `rho[(i*d + k), (j*d + l)] = <k| E{|i><j|} |l> / d`.
//! * Kraus operators from Choi eigenpairs `(mu, v)`:
//!   `A[k, i] = sqrt(d * mu) * v[i*d + k]`.
//! * Density matrices vectorize column-stacked, `vec(rho)[j*d + i] =
//!   rho[i, j]`, so the superoperator of a Kraus set is
//!   `Lambda = sum_i conj(A_i) (x) A_i` and `vec(E{rho}) = Lambda vec(rho)`.

use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, CMatrix, CVector, Complex64};

/// Minimum partial-transpose eigenvalue counted as entanglement breaking.
pub const EB_TOL: f64 = 1e-10;
/// Choi eigenvalues below this are treated as numerically zero rank.
const KRAUS_CUT: f64 = 1e-12;
/// Construction gates for Choi and Kraus invariants.
const CHANNEL_TOL: f64 = 1e-10;

/// The channel state `rho^Lambda` of a `d`-dimensional quantum operation.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    d: usize,
    mat: CMatrix,
}

impl ChoiMatrix {
    /// Validate Hermiticity, unit trace and positivity.
    pub fn new(d: usize, mat: CMatrix) -> Result<Self> {
        if mat.nrows() != d * d || mat.ncols() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix must be {0}x{0} for d = {d}",
                d * d
            )));
        }
        let herm_dev = max_abs_diff(&mat, &mat.adjoint());
        if herm_dev >= CHANNEL_TOL {
            return Err(Error::NotHermitian {
                label: "choi".into(),
                deviation: herm_dev,
            });
        }
        let trace = mat.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() >= CHANNEL_TOL {
            return Err(Error::InvalidParameter(format!(
                "Choi trace {trace} must be 1"
            )));
        }
        let min_eig = min_eigenvalue(&mat)?;
        if min_eig <= -CHANNEL_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { d, mat })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Operator-sum representation; trace preserving by construction.
#[derive(Debug, Clone)]
pub struct KrausSet {
    d: usize,
    operators: Vec<CMatrix>,
}

impl KrausSet {
    /// Validate shape and the trace-preservation sum `sum A^dag A = 1`.
    pub fn new(d: usize, operators: Vec<CMatrix>) -> Result<Self> {
        if operators.is_empty() || operators.len() > d * d {
            return Err(Error::InvalidParameter(format!(
                "a d = {d} channel needs between 1 and {} Kraus operators, got {}",
                d * d,
                operators.len()
            )));
        }
        for a in &operators {
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator must be {d}x{d}"
                )));
            }
        }
        let mut sum = CMatrix::zeros(d, d);
        for a in &operators {
            sum += a.adjoint() * a;
        }
        let dev = max_abs_diff(&sum, &CMatrix::identity(d, d));
        if dev >= CHANNEL_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { d, operators })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `E{rho} = sum_i A_i rho A_i^dag`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d, self.d);
        for a in &self.operators {
            out += a * rho * a.adjoint();
        }
        out
    }
}

/// Matrix of the channel on column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    d: usize,
    mat: CMatrix,
}

impl SuperOperator {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let v = &self.mat * vectorize(rho);
        unvectorize(self.d, &v)
    }
}

fn vectorize(rho: &CMatrix) -> CVector {
    let d = rho.nrows();
    CVector::from_fn(d * d, |idx, _| rho[(idx % d, idx / d)])
}

fn unvectorize(d: usize, v: &CVector) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| v[j * d + i])
}

fn min_eigenvalue(mat: &CMatrix) -> Result<f64> {
    let herm = crate::linalg::HermitianOperator::hermitized("eig_probe", mat.clone())?;
    Ok(herm.eigh()?.values[0])
}

/// Assemble the Choi matrix from the channel images of the operator basis,
/// `images[i][j] = E{|i><j|}`. The result is Hermitized exactly before the
/// positivity gate, which rejects inconsistent images.
pub fn choi_from_images(images: &[Vec<CMatrix>]) -> Result<ChoiMatrix> {
    let d = images.len();
    if d == 0 || images.iter().any(|row| row.len() != d) {
        return Err(Error::DimensionMismatch(
            "images must form a d x d array".into(),
        ));
    }
    let mut mat = CMatrix::zeros(d * d, d * d);
    let inv_d = Complex64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            let img = &images[i][j];
            if img.nrows() != d || img.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "image ({i},{j}) must be {d}x{d}"
                )));
            }
            for k in 0..d {
                for l in 0..d {
                    mat[(i * d + k, j * d + l)] = img[(k, l)] * inv_d;
                }
            }
        }
    }
    let herm = (&mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
    ChoiMatrix::new(d, herm)
}

/// Extract a Kraus set by spectral decomposition of the Choi matrix.
pub fn kraus_from_choi(choi: &ChoiMatrix) -> Result<KrausSet> {
    let d = choi.d;
    let herm = crate::linalg::HermitianOperator::new("choi", choi.mat.clone())?;
    let eig = herm.eigh()?;
    if eig.values[0] <= -CHANNEL_TOL {
        return Err(Error::NotPositive(eig.values[0]));
    }
    let mut operators = Vec::new();
    for idx in 0..eig.dim() {
        let mu = eig.values[idx];
        if mu <= KRAUS_CUT {
            continue;
        }
        let scale = (d as f64 * mu).sqrt();
        let v = eig.vectors.column(idx);
        let a = CMatrix::from_fn(d, d, |k, i| v[i * d + k] * scale);
        operators.push(a);
    }
    KrausSet::new(d, operators)
}

/// `Lambda = sum_i conj(A_i) (x) A_i`.
pub fn superoperator_from_kraus(kraus: &KrausSet) -> SuperOperator {
    let d = kraus.d;
    let mut mat = CMatrix::zeros(d * d, d * d);
    for a in &kraus.operators {
        mat += a.conjugate().kronecker(a);
    }
    SuperOperator { d, mat }
}

/// Rebuild the Choi matrix from a superoperator by applying it to the
/// operator basis.
pub fn choi_from_superoperator(lambda: &SuperOperator) -> Result<ChoiMatrix> {
    let d = lambda.d;
    let mut images = vec![vec![CMatrix::zeros(d, d); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut basis = CMatrix::zeros(d, d);
            basis[(i, j)] = Complex64::new(1.0, 0.0);
            images[i][j] = lambda.apply(&basis);
        }
    }
    choi_from_images(&images)
}

/// Purity of the channel output averaged over all pure input states,
/// `(sum_ij |Tr[A_i^dag A_j]|^2 + d) / (d (d + 1))`.
pub fn average_purity(kraus: &KrausSet) -> f64 {
    let d = kraus.d as f64;
    let mut sum = 0.0;
    for a in &kraus.operators {
        for b in &kraus.operators {
            sum += (a.adjoint() * b).trace().norm_sqr();
        }
    }
    (sum + d) / (d * (d + 1.0))
}

/// Transpose the ancilla (first) factor of a `d^2 x d^2` bipartite matrix.
pub fn partial_transpose_first(mat: &CMatrix, d: usize) -> CMatrix {
    CMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, k) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        mat[(j * d + k, i * d + l)]
    })
}

/// Minimum eigenvalue of the partially transposed Choi matrix.
///
/// For qubit channels a nonnegative value certifies that the operation is
/// entanglement breaking.
pub fn ppt_min_eigenvalue(choi: &ChoiMatrix) -> Result<f64> {
    let pt = partial_transpose_first(&choi.mat, choi.d);
    min_eigenvalue(&pt)
}

/// Everything the dissipative pipeline records about the channel at one time.
#[derive(Debug, Clone)]
pub struct ChannelSnapshot {
    pub t: f64,
    pub choi: ChoiMatrix,
    pub kraus: KrausSet,
    pub avg_purity: f64,
    /// Minimum eigenvalue of the partially transposed Choi matrix.
    pub mu: f64,
    pub entanglement_breaking: bool,
}

impl ChannelSnapshot {
    pub fn from_choi(t: f64, choi: ChoiMatrix) -> Result<Self> {
        let kraus = kraus_from_choi(&choi)?;
        let avg_purity = average_purity(&kraus);
        let mu = ppt_min_eigenvalue(&choi)?;
        Ok(Self {
            t,
            choi,
            kraus,
            avg_purity,
            mu,
            entanglement_breaking: mu >= -EB_TOL,
        })
    }
}
