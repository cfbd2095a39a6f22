//! Closed-form single-link dynamics for an isotropic bath in the broken
//! phase.
//!
//! With `gamma = 1` and one link, the ground state `|N/2, M>` splits into two
//! product components and the perturbed evolution never leaves their span.
//! Both propagators are 2x2 rotations,
//!
//! ```text
//! eta- = 2 sqrt(lambda^2 + eps (eps + 2h))
//! eta+ = 2 sqrt(lambda^2 + eps (eps - 2h))
//! ```
//!
//! and the Loschmidt echo follows from `U+^dag U-` sandwiched between the
//! splitting coefficients. This module is the independent oracle for the
//! exact-diagonalization pipeline.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::linalg::Complex64;
use crate::spin::broken_phase_m;

/// Whether the splitting coefficients use the exact finite-size matrix
/// elements or their thermodynamic-limit forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Exact integer-lattice `M = round(hN / 2 lambda)` with
    /// `beta = -(lambda/h) sqrt(1 - 4M^2/N^2)`, `zeta = 4 lambda M / (h N)`.
    FiniteN,
    /// `M = hN / 2 lambda` with `beta = -(lambda/h) sqrt(1 - h^2/lambda^2)`,
    /// `zeta = 2`.
    LargeN,
}

/// The perturbed-propagator frequency `eta+`, which turns imaginary when
/// `lambda^2 + eps (eps - 2h) < 0`. The closed forms are only used in the
/// broken phase, where this cannot happen, but the condition is reported as
/// a value rather than a NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaPlus {
    Oscillatory(f64),
    /// Exponential rate `2 sqrt(-discriminant)`.
    Hyperbolic(f64),
}

/// `(eta+, eta-)` from the frequency formulas.
pub fn frequencies(lambda: f64, epsilon: f64, h: f64) -> (EtaPlus, f64) {
    let eta_minus = 2.0 * (lambda * lambda + epsilon * (epsilon + 2.0 * h)).sqrt();
    let disc = lambda * lambda + epsilon * (epsilon - 2.0 * h);
    let eta_plus = if disc >= 0.0 {
        EtaPlus::Oscillatory(2.0 * disc.sqrt())
    } else {
        EtaPlus::Hyperbolic(2.0 * (-disc).sqrt())
    };
    (eta_plus, eta_minus)
}

/// All scalars of the closed-form solution.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticK1Params {
    pub n: u32,
    pub lambda: f64,
    pub epsilon: f64,
    pub h: f64,
    pub mode: CoefficientMode,
    /// Ground-state Dicke projection (real in `LargeN` mode).
    pub m: f64,
    /// Splitting coefficients of `|N/2, M>` across the 1 / (N-1) cut.
    pub c_plus: f64,
    pub c_minus: f64,
    /// 2x2 matrix-element scalars, energies in units of `h`.
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
    /// Oscillation frequencies of the stored coefficients. In `LargeN` mode
    /// these equal the `frequencies` formulas exactly.
    pub eta_plus: f64,
    pub eta_minus: f64,
}

impl AnalyticK1Params {
    /// Requires the broken phase `lambda > h`, which keeps `eta+` real.
    pub fn new(n: u32, lambda: f64, epsilon: f64, h: f64, mode: CoefficientMode) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("N = {n} must be >= 2")));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidParameter(format!("h = {h} must be > 0")));
        }
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} must be >= 0"
            )));
        }
        if !(lambda > h) {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lambda} must exceed h = {h}: the closed forms live in the broken phase"
            )));
        }
        let nf = f64::from(n);
        let m = match mode {
            CoefficientMode::FiniteN => broken_phase_m(n, lambda, h).value(),
            CoefficientMode::LargeN => h * nf / (2.0 * lambda),
        };
        let x = m / nf;
        let c_plus = (0.5 + x).sqrt();
        let c_minus = (0.5 - x).sqrt();
        let alpha = -lambda / (2.0 * h * nf) * ((nf - 1.0).powi(2) - (2.0 * m - 1.0).powi(2))
            - 2.0 * m;
        let (beta, zeta) = match mode {
            CoefficientMode::FiniteN => (
                -(lambda / h) * (1.0 - 4.0 * x * x).sqrt(),
                4.0 * lambda * m / (h * nf),
            ),
            CoefficientMode::LargeN => (
                -(lambda / h) * (1.0 - (h / lambda).powi(2)).sqrt(),
                2.0,
            ),
        };
        let off = h * beta;
        let eta_minus = 2.0 * ((h * zeta / 2.0 + epsilon).powi(2) + off * off).sqrt();
        let eta_plus = 2.0 * ((epsilon - h * zeta / 2.0).powi(2) + off * off).sqrt();
        Ok(Self {
            n,
            lambda,
            epsilon,
            h,
            mode,
            m,
            c_plus,
            c_minus,
            alpha,
            beta,
            zeta,
            eta_plus,
            eta_minus,
        })
    }
}

/// `exp(-i t (center + d sz + off sx))` for a real symmetric 2x2 generator.
fn rotation(center: f64, d: f64, off: f64, t: f64) -> Matrix2<Complex64> {
    let nu = (d * d + off * off).sqrt();
    let (cos, sinc) = if nu * t == 0.0 {
        (1.0, t)
    } else {
        ((nu * t).cos(), (nu * t).sin() / nu)
    };
    let phase = Complex64::from_polar(1.0, -center * t);
    let i = Complex64::i();
    let c = Complex64::new(cos, 0.0);
    Matrix2::new(
        phase * (c - i * sinc * d),
        phase * (-i * sinc * off),
        phase * (-i * sinc * off),
        phase * (c + i * sinc * d),
    )
}

/// Exact propagators `(e^{-i H- t}, e^{-i H+ t})` on the two-state span.
///
/// The global phase `e^{-i (alpha + zeta/2) h t}` is included; in `LargeN`
/// mode (`zeta = 2`) it is the printed `e^{-i (alpha + 1) h t}` factor.
pub fn propagators_2x2(
    p: &AnalyticK1Params,
    t: f64,
) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
    let center = (p.alpha + p.zeta / 2.0) * p.h;
    let off = p.h * p.beta;
    let u_minus = rotation(center, -(p.h * p.zeta / 2.0 + p.epsilon), off, t);
    let u_plus = rotation(center, p.epsilon - p.h * p.zeta / 2.0, off, t);
    (u_minus, u_plus)
}

/// Closed-form Loschmidt echo `|c^T U+^dag U- c|^2`.
pub fn analytic_le(p: &AnalyticK1Params, t: f64) -> f64 {
    let (u_minus, u_plus) = propagators_2x2(p, t);
    let m = u_plus.adjoint() * u_minus;
    let c = nalgebra::Vector2::new(
        Complex64::new(p.c_plus, 0.0),
        Complex64::new(p.c_minus, 0.0),
    );
    let d = (c.adjoint() * m * c)[(0, 0)];
    d.norm_sqr()
}

/// A (near-)simultaneous return of both propagators to the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revival {
    pub time: f64,
    /// Distance of the slower phase from the nearest multiple of 2 pi.
    pub phase_residual: f64,
}

fn revival_candidates(p: &AnalyticK1Params, t_max: f64) -> impl Iterator<Item = Revival> + '_ {
    let period = 2.0 * std::f64::consts::PI / p.eta_plus;
    let l_max = (t_max / period).floor() as u64;
    (1..=l_max).map(move |l| {
        let t = period * l as f64;
        let phase = p.eta_minus * t / (2.0 * std::f64::consts::PI);
        let phase_residual =
            (phase - phase.round()).abs() * 2.0 * std::f64::consts::PI;
        Revival {
            time: t,
            phase_residual,
        }
    })
}

/// Earliest time `t <= t_max` at which `eta+ t` and `eta- t` are both
/// multiples of 2 pi within phase tolerance `tol` (radians). Exact
/// commensurability exists only for rational `eta+ / eta-`; absence is a
/// value, not an error.
pub fn coherence_time(p: &AnalyticK1Params, tol: f64, t_max: f64) -> Option<Revival> {
    revival_candidates(p, t_max).find(|r| r.phase_residual <= tol)
}

/// The smallest-residual revival up to `t_max`, for irrational frequency
/// ratios where no candidate meets a strict tolerance.
pub fn best_revival(p: &AnalyticK1Params, t_max: f64) -> Option<Revival> {
    revival_candidates(p, t_max)
        .min_by(|a, b| a.phase_residual.partial_cmp(&b.phase_residual).unwrap())
}
