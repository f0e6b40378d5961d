//! Dynamic element excitations of the single-sideband TMA.
//!
//! Each element is fed through a pair of stair-step switches, the second
//! driven a quarter period late and combined in quadrature. The pair cancels
//! every harmonic of order `q ≡ 3 (mod 4)`, so of the stair-step lines only
//! `+q` for `q ∈ Υ₁` and `-q` for `q ∈ Υ₂` radiate. A rectangular duty-cycle
//! pulse multiplies the pair in time, which convolves its own lines `C_nk`
//! onto every surviving stair line and yields the excitation table
//! `offset ↦ (per-element complex weights)` consumed by the pattern module.

use crate::error::{Error, Result};
use crate::pulse::{rect_coefficient, HarmonicIndexSets};
use crate::real::Real;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Geometry and switching constants of the linear array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig<T> {
    /// Number of radiating elements.
    pub n_elements: usize,
    /// Element spacing in wavelengths (`d/λ`).
    pub spacing: T,
    /// Delay of the quadrature branch as a fraction of the period.
    pub tau: T,
}

impl<T: Real> ArrayConfig<T> {
    pub fn new(n_elements: usize) -> Self {
        Self {
            n_elements,
            spacing: T::of(0.5),
            tau: T::of(0.25),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::Validation("array needs at least one element".into()));
        }
        if !(self.spacing > T::zero()) {
            return Err(Error::Validation(format!(
                "spacing must be > 0 wavelengths, got {}",
                self.spacing
            )));
        }
        if !(self.tau >= T::zero() && self.tau < T::one()) {
            return Err(Error::Validation(format!("tau must be in [0, 1), got {}", self.tau)));
        }
        Ok(())
    }

    /// Element positions along the axis, in wavelengths.
    pub fn positions(&self) -> Vec<T> {
        (0..self.n_elements).map(|n| self.spacing * T::of_usize(n)).collect()
    }
}

/// Per-element switch-on delays `D_n/T₀ ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringPlan<T> {
    pub delays: Vec<T>,
}

impl<T: Real> SteeringPlan<T> {
    /// No steering: every element switches in phase (broadside beam).
    pub fn broadside(n_elements: usize) -> Self {
        Self {
            delays: vec![T::zero(); n_elements],
        }
    }

    /// Progressive delays `D_n/T₀ = frac((d/λ)·n·cos θ_scan)` that steer the
    /// first-harmonic beam to `theta_scan` (radians from the array axis).
    pub fn from_scan_angle(config: &ArrayConfig<T>, theta_scan: T) -> Result<Self> {
        config.validate()?;
        let c = theta_scan.cos();
        let delays = (0..config.n_elements)
            .map(|n| {
                let d = (config.spacing * T::of_usize(n) * c).fract();
                if d < T::zero() {
                    d + T::one()
                } else {
                    d
                }
            })
            .collect();
        Ok(Self { delays })
    }

    pub fn validate(&self) -> Result<()> {
        for &d in &self.delays {
            if !(d >= T::zero() && d < T::one()) {
                return Err(Error::Validation(format!("delay must be in [0, 1), got {d}")));
            }
        }
        Ok(())
    }
}

/// Amplitude normalization of the combined switch pair: `√2·(1+√2)`.
///
/// `1/(1+√2)` scales the stair-step to unit peak level and `1/√2` accounts
/// for the quadrature power split.
pub fn pair_normalization<T: Real>() -> T {
    T::SQRT_2() * (T::one() + T::SQRT_2())
}

/// Unnormalized sinc, `sin(x)/x`.
pub fn sinc<T: Real>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        x.sin() / x
    }
}

/// Fourier line of the normalized switch pair at `order` for one element.
///
/// `L(q) = W_q · sinc(πqΔ) · e^{-j2πqD} · (1 + j·e^{-j2πqτ}) / (√2(1+√2))`.
/// The quadrature factor vanishes exactly for `q ≡ 3 (mod 4)`; a nonzero
/// `rise_fall` Δ only rescales each surviving line and creates no new ones.
pub fn ssb_pair_line<T: Real>(order: i64, delay: T, tau: T, rise_fall: T) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let aq = order.unsigned_abs();
    if !HarmonicIndexSets::is_member(aq) {
        return zero;
    }
    let q = T::of_i64(order);
    // W_q = -4j/(πq) for |q| ∈ Υ, then the finite-ramp rolloff
    let w = Complex::new(T::zero(), -T::of(4.0) / (T::PI() * q)) * sinc(T::PI() * q * rise_fall);
    let steer = Complex::from_polar(T::one(), -T::TAU() * q * delay);
    let j = Complex::new(T::zero(), T::one());
    let quad = (Complex::new(T::one(), T::zero())
        + j * Complex::from_polar(T::one(), -T::TAU() * q * tau))
        / pair_normalization::<T>();
    w * steer * quad
}

/// Sideband table of the whole array: complex weight of every element at
/// every radiating frequency offset `m·f₀` around the carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationSet<T> {
    /// Radiating offsets, ascending.
    pub offsets: Vec<i64>,
    /// `weights[i][n]`: excitation of element `n` at `offsets[i]`.
    pub weights: Vec<Vec<Complex<T>>>,
    pub n_elements: usize,
}

impl<T: Real> ExcitationSet<T> {
    /// Build the table by convolving the duty-cycle lines `C_nk`
    /// (`|k| ≤ k_max`) onto every surviving stair line (`q ≤ q_max`).
    ///
    /// `rise_fall` is the trapezoid ramp duration Δ; pass `0` for ideal
    /// switching. `tau` is the quadrature-branch delay (¼ period nominally).
    pub fn compute(
        duties: &[T],
        plan: &SteeringPlan<T>,
        tau: T,
        rise_fall: T,
        q_max: u64,
        k_max: i64,
    ) -> Result<Self> {
        if duties.len() != plan.delays.len() {
            return Err(Error::Validation(format!(
                "{} duty cycles but {} steering delays",
                duties.len(),
                plan.delays.len()
            )));
        }
        if duties.is_empty() {
            return Err(Error::Validation("array needs at least one element".into()));
        }
        plan.validate()?;
        for &xi in duties {
            if !(xi > T::zero() && xi <= T::one()) {
                return Err(Error::Validation(format!("duty must be in (0, 1], got {xi}")));
            }
        }
        if k_max < 0 {
            return Err(Error::Validation(format!("k_max must be >= 0, got {k_max}")));
        }

        let n = duties.len();
        let sets = HarmonicIndexSets::new(q_max);
        let mut table: BTreeMap<i64, Vec<Complex<T>>> = BTreeMap::new();
        for (elem, (&xi, &delay)) in duties.iter().zip(&plan.delays).enumerate() {
            for k in -k_max..=k_max {
                let c = rect_coefficient(xi, k)?;
                for &q in &sets.upsilon {
                    // Υ₁ lines survive at +q, Υ₂ lines at -q
                    let signed_q = if HarmonicIndexSets::is_upsilon1(q) {
                        q as i64
                    } else {
                        -(q as i64)
                    };
                    let line = ssb_pair_line(signed_q, delay, tau, rise_fall);
                    let row = table
                        .entry(k + signed_q)
                        .or_insert_with(|| vec![Complex::new(T::zero(), T::zero()); n]);
                    row[elem] += c * line;
                }
            }
        }
        let (offsets, weights) = table.into_iter().unzip();
        Ok(Self {
            offsets,
            weights,
            n_elements: n,
        })
    }

    pub fn weights_at(&self, offset: i64) -> Option<&[Complex<T>]> {
        let i = self.offsets.binary_search(&offset).ok()?;
        Some(&self.weights[i])
    }
}
