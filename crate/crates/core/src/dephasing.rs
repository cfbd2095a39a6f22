//! Dephasing of the qubit under an Ising coupling to the bath.
//!
//! An Ising link commutes with the qubit Hamiltonian, so the qubit
//! populations are frozen and the bath is conditionally driven by two
//! perturbed Hamiltonians `H± = H_R ± (2 eps / sqrt(k)) Sz_block`. All
//! observables derive from the decoherence factor
//!
//! ```text
//! D(t) = <GS| e^{+i H+ t} e^{-i H- t} |GS>
//! ```
//!
//! computed spectrally: both Hamiltonians are diagonalized once and reused
//! for every requested time. The Loschmidt echo is `L = |D|^2` and the
//! state-averaged qubit purity is `(2 + L) / 3`.

use nalgebra::{DMatrix, DVector};

use crate::channel::{choi_from_images, ChannelSnapshot};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, Complex64, EigenSystem, HermitianOperator};
use crate::partition::{PartitionIsometry, PartitionedBath};
use crate::spin::{BathParams, GroundState, SymmetricSubspace};

/// Mode weights below this are discarded from the Fourier spectrum.
const MODE_DROP_TOL: f64 = 1e-14;
/// `1 - L` below this counts as no dephasing at all.
const NO_DEPHASING_TOL: f64 = 1e-12;

/// Which interaction couples the qubit to its block of bath spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    /// `(eps / sqrt k) qz (x) sum_i sz_i`: pure dephasing.
    Ising,
    /// `(eps / sqrt k) sum_i (qx sx_i + gamma qy sy_i)`: dissipative.
    Lmg,
}

impl std::fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CouplingKind::Ising => write!(f, "ising"),
            CouplingKind::Lmg => write!(f, "lmg"),
        }
    }
}

/// Qubit-bath coupling: strength, number of linked spins, interaction type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    pub epsilon: f64,
    pub k: u32,
    pub kind: CouplingKind,
}

impl CouplingSpec {
    pub fn new(epsilon: f64, k: u32, kind: CouplingKind) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} must be >= 0"
            )));
        }
        if k < 1 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        Ok(Self { epsilon, k, kind })
    }
}

fn ising_shift(spec: &CouplingSpec) -> f64 {
    2.0 * spec.epsilon / f64::from(spec.k).sqrt()
}

/// The conditionally perturbed bath Hamiltonians `H± = H_R ± (2eps/sqrt k) Sz_A`.
///
/// `partition` must be the isometry that produced the product-space `h_bath`;
/// pass `None` for the completely connected case `k = N`, where the block
/// operator is the full collective `Sz`.
pub fn perturbed_hamiltonians(
    h_bath: &HermitianOperator,
    spec: &CouplingSpec,
    partition: Option<&PartitionIsometry>,
) -> Result<(HermitianOperator, HermitianOperator)> {
    if spec.kind != CouplingKind::Ising {
        return Err(Error::KindMismatch {
            expected: CouplingKind::Ising.to_string(),
            actual: spec.kind.to_string(),
        });
    }
    let sz_block = match partition {
        Some(iso) => {
            if iso.k() != spec.k {
                return Err(Error::DimensionMismatch(format!(
                    "coupling has k = {}, partition has k = {}",
                    spec.k,
                    iso.k()
                )));
            }
            if h_bath.dim() != iso.target_dim() {
                return Err(Error::DimensionMismatch(format!(
                    "bath dimension {} does not match partition target {}",
                    h_bath.dim(),
                    iso.target_dim()
                )));
            }
            let block = SymmetricSubspace::maximal(spec.k);
            let (_, _, sz) = crate::spin::build_collective_operators(&block);
            let (_, dim_b) = iso.target_dims();
            let id_b = CMatrix::identity(dim_b, dim_b);
            HermitianOperator::new("Sz_block", sz.matrix().kronecker(&id_b))?
        }
        None => {
            if h_bath.dim() != spec.k as usize + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "without a partition k must equal N; bath dimension {} implies N = {}, got k = {}",
                    h_bath.dim(),
                    h_bath.dim() - 1,
                    spec.k
                )));
            }
            let block = SymmetricSubspace::maximal(spec.k);
            let (_, _, sz) = crate::spin::build_collective_operators(&block);
            sz
        }
    };
    perturb_with(h_bath, &sz_block, spec)
}

fn perturb_with(
    h_bath: &HermitianOperator,
    sz_block: &HermitianOperator,
    spec: &CouplingSpec,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let shift = ising_shift(spec);
    let plus = h_bath.add_scaled(shift, sz_block, "H_plus")?;
    let minus = h_bath.add_scaled(-shift, sz_block, "H_minus")?;
    Ok((plus, minus))
}

/// Eigenbasis overlap data shared by the decoherence factor and its Fourier
/// spectrum: `a = V+^dag gs`, `b = V-^dag gs`, `w = V+^dag V-`.
struct SpectralOverlap {
    a: CVector,
    b: CVector,
    w: OverlapMatrix,
    e_plus: DVector<f64>,
    e_minus: DVector<f64>,
}

/// `V+^dag V-` keeps a real representation when both eigenbases are real,
/// halving the per-time propagation cost.
enum OverlapMatrix {
    Real(DMatrix<f64>),
    Complex(CMatrix),
}

impl OverlapMatrix {
    fn mul(&self, v: &CVector) -> CVector {
        match self {
            OverlapMatrix::Real(w) => {
                let re = w * v.map(|z| z.re);
                let im = w * v.map(|z| z.im);
                CVector::from_fn(re.len(), |i, _| Complex64::new(re[i], im[i]))
            }
            OverlapMatrix::Complex(w) => w * v,
        }
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        match self {
            OverlapMatrix::Real(w) => Complex64::new(w[(i, j)], 0.0),
            OverlapMatrix::Complex(w) => w[(i, j)],
        }
    }
}

fn exactly_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

impl SpectralOverlap {
    fn new(gs: &CVector, plus: &EigenSystem, minus: &EigenSystem) -> Self {
        let a = plus.coefficients(gs);
        let b = minus.coefficients(gs);
        let w = if exactly_real(&plus.vectors) && exactly_real(&minus.vectors) {
            let vp = plus.vectors.map(|z| z.re);
            let vm = minus.vectors.map(|z| z.re);
            OverlapMatrix::Real(vp.transpose() * vm)
        } else {
            OverlapMatrix::Complex(plus.vectors.adjoint() * &minus.vectors)
        };
        Self {
            a,
            b,
            w,
            e_plus: plus.values.clone(),
            e_minus: minus.values.clone(),
        }
    }

    fn d_at(&self, t: f64) -> Complex64 {
        let n = self.b.len();
        let u = CVector::from_fn(n, |j, _| {
            self.b[j] * Complex64::from_polar(1.0, -self.e_minus[j] * t)
        });
        let v = self.w.mul(&u);
        (0..self.a.len())
            .map(|i| self.a[i].conj() * Complex64::from_polar(1.0, self.e_plus[i] * t) * v[i])
            .sum()
    }

    fn modes(&self) -> Vec<(f64, Complex64)> {
        let mut modes = Vec::new();
        for i in 0..self.a.len() {
            let ai = self.a[i].conj();
            if ai.norm() * 2.0 < MODE_DROP_TOL {
                continue;
            }
            for j in 0..self.b.len() {
                let amp = ai * self.w.entry(i, j) * self.b[j];
                if amp.norm() > MODE_DROP_TOL {
                    modes.push((self.e_minus[j] - self.e_plus[i], amp));
                }
            }
        }
        modes
    }
}

/// Time series of the decoherence factor and derived scalars.
#[derive(Debug, Clone)]
pub struct DephasingSeries {
    pub times: Vec<f64>,
    /// Decoherence factor `D(t)`.
    pub d_factor: Vec<Complex64>,
    /// Loschmidt echo `L = |D|^2`.
    pub echo: Vec<f64>,
    /// State-averaged qubit purity `(2 + L) / 3`.
    pub avg_purity: Vec<f64>,
}

impl DephasingSeries {
    fn from_d(times: Vec<f64>, d_factor: Vec<Complex64>) -> Self {
        let echo: Vec<f64> = d_factor.iter().map(|d| d.norm_sqr()).collect();
        let avg_purity = echo.iter().map(|l| (2.0 + l) / 3.0).collect();
        Self {
            times,
            d_factor,
            echo,
            avg_purity,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Time and value of the echo minimum.
    pub fn min_echo(&self) -> Option<(f64, f64)> {
        self.echo
            .iter()
            .zip(&self.times)
            .map(|(&l, &t)| (t, l))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    /// Largest echo at strictly positive time.
    pub fn max_echo_revival(&self) -> Option<(f64, f64)> {
        self.echo
            .iter()
            .zip(&self.times)
            .filter(|&(_, &t)| t > 0.0)
            .map(|(&l, &t)| (t, l))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }
}

/// Decoherence factor series by spectral propagation of `H±`.
pub fn decoherence_factor(
    gs: &GroundState,
    h_plus: &HermitianOperator,
    h_minus: &HermitianOperator,
    times: &[f64],
) -> Result<DephasingSeries> {
    if gs.vector.len() != h_plus.dim() || h_plus.dim() != h_minus.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ground state ({}), H+ ({}) and H- ({}) must share one space",
            gs.vector.len(),
            h_plus.dim(),
            h_minus.dim()
        )));
    }
    let eig_plus = h_plus.eigh()?;
    let eig_minus = h_minus.eigh()?;
    let overlap = SpectralOverlap::new(&gs.vector, &eig_plus, &eig_minus);
    Ok(DephasingSeries::from_d(
        times.to_vec(),
        times.iter().map(|&t| overlap.d_at(t)).collect(),
    ))
}

/// A fully prepared Ising run: bath on the arena space, both perturbed
/// Hamiltonians diagonalized once.
pub struct IsingRun {
    bath: PartitionedBath,
    spec: CouplingSpec,
    overlap: SpectralOverlap,
}

impl IsingRun {
    pub fn new(params: &BathParams, spec: &CouplingSpec) -> Result<Self> {
        if spec.kind != CouplingKind::Ising {
            return Err(Error::KindMismatch {
                expected: CouplingKind::Ising.to_string(),
                actual: spec.kind.to_string(),
            });
        }
        let bath = PartitionedBath::new(params, spec.k)?;
        let (_, _, sz_block) = bath.block_operators();
        let (h_plus, h_minus) = perturb_with(bath.hamiltonian(), sz_block, spec)?;
        let eig_plus = h_plus.eigh()?;
        let eig_minus = h_minus.eigh()?;
        let overlap = SpectralOverlap::new(&bath.ground().vector, &eig_plus, &eig_minus);
        Ok(Self {
            bath,
            spec: *spec,
            overlap,
        })
    }

    pub fn bath(&self) -> &PartitionedBath {
        &self.bath
    }

    pub fn spec(&self) -> &CouplingSpec {
        &self.spec
    }

    pub fn decoherence_at(&self, t: f64) -> Complex64 {
        self.overlap.d_at(t)
    }

    pub fn series(&self, times: &[f64]) -> DephasingSeries {
        DephasingSeries::from_d(
            times.to_vec(),
            times.iter().map(|&t| self.overlap.d_at(t)).collect(),
        )
    }

    /// Fourier spectrum of `D(t)`; `None` picks the default coalescing
    /// tolerance `1e-9 * (energy span)`.
    pub fn mode_spectrum(&self, coalesce_tol: Option<f64>) -> ModeSpectrum {
        ModeSpectrum::from_raw(self.overlap.modes(), coalesce_tol)
    }
}

/// One Fourier component of the decoherence factor.
#[derive(Debug, Clone, Copy)]
pub struct ModeComponent {
    /// Transition energy `E-_j - E+_i`.
    pub energy: f64,
    pub amplitude: Complex64,
}

/// Discrete Fourier spectrum of `D(t)`: `D(t) = sum_c amp_c e^{-i E_c t}`.
#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    pub components: Vec<ModeComponent>,
    pub coalesce_tol: f64,
}

impl ModeSpectrum {
    fn from_raw(mut raw: Vec<(f64, Complex64)>, coalesce_tol: Option<f64>) -> Self {
        raw.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let span = match (raw.first(), raw.last()) {
            (Some(lo), Some(hi)) => hi.0 - lo.0,
            _ => 0.0,
        };
        let tol = coalesce_tol.unwrap_or(1e-9 * span);
        let mut components: Vec<ModeComponent> = Vec::new();
        let mut cluster: Vec<(f64, Complex64)> = Vec::new();
        let flush = |cluster: &mut Vec<(f64, Complex64)>, out: &mut Vec<ModeComponent>| {
            if cluster.is_empty() {
                return;
            }
            let amplitude: Complex64 = cluster.iter().map(|c| c.1).sum();
            let weight: f64 = cluster.iter().map(|c| c.1.norm()).sum();
            let energy = if weight > 0.0 {
                cluster.iter().map(|c| c.0 * c.1.norm()).sum::<f64>() / weight
            } else {
                cluster[0].0
            };
            out.push(ModeComponent { energy, amplitude });
            cluster.clear();
        };
        for (e, amp) in raw {
            if let Some(&(last, _)) = cluster.last() {
                if e - last > tol {
                    flush(&mut cluster, &mut components);
                }
            }
            cluster.push((e, amp));
        }
        flush(&mut cluster, &mut components);
        Self {
            components,
            coalesce_tol: tol,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Should reproduce `D(0) = 1` for a spectrum built from a ground state.
    pub fn amplitude_sum(&self) -> Complex64 {
        self.components.iter().map(|c| c.amplitude).sum()
    }

    /// Mode-sum reconstruction of the decoherence factor.
    pub fn reconstruct(&self, t: f64) -> Complex64 {
        self.components
            .iter()
            .map(|c| c.amplitude * Complex64::from_polar(1.0, -c.energy * t))
            .sum()
    }
}

/// Fourier spectrum of the decoherence factor from the perturbed eigenpairs.
pub fn chi_spectrum(
    gs: &GroundState,
    eig_plus: &EigenSystem,
    eig_minus: &EigenSystem,
    coalesce_tol: Option<f64>,
) -> ModeSpectrum {
    let overlap = SpectralOverlap::new(&gs.vector, eig_plus, eig_minus);
    ModeSpectrum::from_raw(overlap.modes(), coalesce_tol)
}

/// How mode weights are accumulated when counting significant components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalWeighting {
    /// Component moduli; amplitudes enter `D(t)` linearly.
    Amplitude,
    /// Squared moduli.
    Power,
}

/// Smallest number of components whose cumulative weight reaches
/// `fraction` of the total, amplitude-weighted.
pub fn significant_components(spectrum: &ModeSpectrum, fraction: f64) -> usize {
    significant_components_weighted(spectrum, fraction, SignalWeighting::Amplitude)
}

pub fn significant_components_weighted(
    spectrum: &ModeSpectrum,
    fraction: f64,
    weighting: SignalWeighting,
) -> usize {
    let mut weights: Vec<f64> = spectrum
        .components
        .iter()
        .map(|c| match weighting {
            SignalWeighting::Amplitude => c.amplitude.norm(),
            SignalWeighting::Power => c.amplitude.norm_sqr(),
        })
        .collect();
    weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return 0;
    }
    let mut acc = 0.0;
    for (n, w) in weights.iter().enumerate() {
        acc += w;
        if acc >= fraction * total {
            return n + 1;
        }
    }
    weights.len()
}

/// First revival time of the echo.
///
/// Returns the first strict interior local maximum with `L >= threshold`,
/// refined by three-point parabolic interpolation. A series that never
/// dephases (`1 - L < 1e-12` everywhere) returns `t = 0`; a series with no
/// qualifying maximum returns `None`.
pub fn rephasing_time(series: &DephasingSeries, threshold: f64) -> Option<f64> {
    let l = &series.echo;
    let t = &series.times;
    if l.is_empty() {
        return None;
    }
    if l.iter().all(|&x| 1.0 - x < NO_DEPHASING_TOL) {
        return Some(0.0);
    }
    for i in 1..l.len().saturating_sub(1) {
        if l[i] >= threshold && l[i - 1] < l[i] && l[i] >= l[i + 1] {
            let denom = l[i - 1] - 2.0 * l[i] + l[i + 1];
            if denom < 0.0 {
                let dt = 0.5 * (t[i + 1] - t[i - 1]);
                let shift = 0.5 * dt * (l[i - 1] - l[i + 1]) / denom;
                return Some((t[i] + shift).clamp(t[i - 1], t[i + 1]));
            }
            return Some(t[i]);
        }
    }
    None
}

/// A pure qubit state and its level splitting.
#[derive(Debug, Clone, Copy)]
pub struct QubitState {
    pub a0: Complex64,
    pub a1: Complex64,
    pub omega: f64,
}

impl QubitState {
    pub fn new(a0: Complex64, a1: Complex64, omega: f64) -> Result<Self> {
        let norm = a0.norm_sqr() + a1.norm_sqr();
        if (norm - 1.0).abs() >= 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "|a0|^2 + |a1|^2 = {norm} must be 1"
            )));
        }
        Ok(Self { a0, a1, omega })
    }
}

/// Reduced qubit density matrix at time `t` given the decoherence factor.
///
/// Populations are conserved; the coherence is
/// `rho01 = a0 conj(a1) e^{-2 i omega t} conj(D)`.
pub fn reduced_qubit_state(q: &QubitState, d_at_t: Complex64, t: f64) -> CMatrix {
    let rho01 =
        q.a0 * q.a1.conj() * Complex64::from_polar(1.0, -2.0 * q.omega * t) * d_at_t.conj();
    let mut rho = CMatrix::zeros(2, 2);
    rho[(0, 0)] = Complex64::new(q.a0.norm_sqr(), 0.0);
    rho[(1, 1)] = Complex64::new(q.a1.norm_sqr(), 0.0);
    rho[(0, 1)] = rho01;
    rho[(1, 0)] = rho01.conj();
    rho
}

/// `Tr rho^2` of a Hermitian density matrix.
pub fn state_purity(rho: &CMatrix) -> f64 {
    rho.iter().map(|z| z.norm_sqr()).sum()
}

/// The dephasing channel at decoherence factor `d` as a channel snapshot.
///
/// The qubit-frame rotation `e^{-2 i omega t}` is a local unitary and leaves
/// both the average purity and the partial-transpose witness unchanged, so
/// the snapshot is built in the rotating frame.
pub fn dephasing_snapshot(d: Complex64, t: f64) -> Result<ChannelSnapshot> {
    let mut images = vec![vec![CMatrix::zeros(2, 2); 2]; 2];
    images[0][0][(0, 0)] = Complex64::new(1.0, 0.0);
    images[1][1][(1, 1)] = Complex64::new(1.0, 0.0);
    images[0][1][(0, 1)] = d.conj();
    images[1][0][(1, 0)] = d;
    ChannelSnapshot::from_choi(t, choi_from_images(&images)?)
}

/// `count` evenly spaced samples covering `[0, t_max]`.
pub fn linspace(t_max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "a grid needs at least two points");
    (0..count)
        .map(|i| t_max * i as f64 / (count - 1) as f64)
        .collect()
}

/// The default observation window `t in [0, 10/h]` with 2001 points.
pub fn default_time_grid(h: f64) -> Vec<f64> {
    linspace(10.0 / h, 2001)
}
