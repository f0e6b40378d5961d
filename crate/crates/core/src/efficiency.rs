//! Power budget of the time-modulated array.
//!
//! Three powers are tracked, all per carrier-amplitude-squared and with the
//! isotropic `4π` solid-angle factor:
//!
//! * `P_ST`: power delivered to the switch network, `4πN`,
//! * `P_R`: total radiated power over every sideband,
//! * `P_U`: power radiated in the wanted first-harmonic line only.
//!
//! Their ratios are the time-modulation efficiency `η_TMA = P_U/P_R`, the
//! feed-network efficiency `η_BFN = P_R/P_ST` and the overall `η = P_U/P_ST`.
//! The lattice sum `A₀ = Σ_{q∈Υ} 1/q²` shows up in every closed form; it
//! evaluates exactly to `(ψ₁(1/8) + ψ₁(7/8))/64` via the trigamma function.

use crate::error::{Error, Result};
use crate::harmonic::{pair_normalization, sinc};
use crate::pulse::{rect_coefficient, HarmonicIndexSets};
use crate::real::Real;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Trigamma `ψ₁(z) = Σ_{k≥0} 1/(z+k)²` by direct summation plus an
/// Euler–Maclaurin tail; good to ~1e-12 for `z ∈ (0, 1]`.
pub fn trigamma<T: Real>(z: T) -> T {
    let terms = 100usize;
    let mut acc = T::zero();
    for k in 0..terms {
        let d = z + T::of_usize(k);
        acc += (d * d).recip();
    }
    let t = z + T::of_usize(terms);
    acc + t.recip() + (T::of(2.0) * t * t).recip() + (T::of(6.0) * t * t * t).recip()
}

/// `A₀ = Σ_{q∈Υ} 1/q² = (ψ₁(1/8) + ψ₁(7/8))/64 ≈ 1.05303`.
pub fn a0_exact<T: Real>() -> T {
    (trigamma(T::of(0.125)) + trigamma(T::of(0.875))) / T::of(64.0)
}

/// Partial sum of `A₀` over `q ∈ Υ, q ≤ q_max`, for truncation-matched
/// comparisons against line-by-line numerics.
pub fn a0_truncated<T: Real>(q_max: u64) -> T {
    HarmonicIndexSets::new(q_max)
        .upsilon
        .iter()
        .map(|&q| {
            let q = T::of_i64(q as i64);
            (q * q).recip()
        })
        .sum()
}

/// Ramp-weighted lattice sum `Σ_{q∈Υ} sinc²(πqΔ)/q²`; reduces to [`a0_exact`]
/// at `Δ = 0`. The summand decays like `1/q⁴`, so direct summation converges
/// fast.
pub fn a0_with_ramp<T: Real>(rise_fall: T) -> T {
    if rise_fall == T::zero() {
        return a0_exact();
    }
    let mut acc = T::zero();
    let mut q = 1u64;
    while q <= 1_000_000 {
        if HarmonicIndexSets::is_member(q) {
            let qf = T::of_i64(q as i64);
            let s = sinc(T::PI() * qf * rise_fall);
            let term = s * s / (qf * qf);
            acc += term;
            if q > 100 && term < acc * T::of(1e-16) {
                break;
            }
        }
        q += 1;
    }
    acc
}

/// Power budget and efficiency split of one duty-cycle vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport<T> {
    pub n_elements: usize,
    pub sum_duty: T,
    pub sum_duty_sq: T,
    /// Power into the switch network.
    pub p_input: T,
    /// Total radiated power, all sidebands.
    pub p_radiated: T,
    /// Power in the wanted first-harmonic line.
    pub p_useful: T,
    pub eta_tma: T,
    pub eta_bfn: T,
    pub eta_total: T,
}

impl<T: Real> EfficiencyReport<T> {
    fn from_powers(n: usize, sum_duty: T, sum_duty_sq: T, p_radiated: T, p_useful: T) -> Self {
        let p_input = T::of(4.0) * T::PI() * T::of_usize(n);
        Self {
            n_elements: n,
            sum_duty,
            sum_duty_sq,
            p_input,
            p_radiated,
            p_useful,
            eta_tma: p_useful / p_radiated,
            eta_bfn: p_radiated / p_input,
            eta_total: p_useful / p_input,
        }
    }
}

fn check_duties<T: Real>(duties: &[T]) -> Result<(T, T)> {
    if duties.is_empty() {
        return Err(Error::Validation("array needs at least one element".into()));
    }
    let mut s = T::zero();
    let mut s2 = T::zero();
    for &xi in duties {
        if !(xi > T::zero() && xi <= T::one()) {
            return Err(Error::Validation(format!("duty must be in (0, 1], got {xi}")));
        }
        s += xi;
        s2 += xi * xi;
    }
    Ok((s, s2))
}

/// Closed-form report:
///
/// * `P_R = 128·A₀(Δ)·Σξ / (π(1+√2)²)`,
/// * `P_U = 128·sinc²(πΔ)·Σξ² / (π(1+√2)²)`,
/// * `P_ST = 4πN`,
///
/// hence at Δ = 0 `η_TMA = Σξ²/(A₀·Σξ)` and
/// `η_BFN = 32·A₀·Σξ/(π²(1+√2)²·N)`.
pub fn closed_form_report<T: Real>(duties: &[T], rise_fall: T) -> Result<EfficiencyReport<T>> {
    closed_form_report_with_a0(duties, rise_fall, a0_with_ramp(rise_fall))
}

/// Same closed forms with an explicit lattice-sum value, for comparisons at
/// finite harmonic truncation.
pub fn closed_form_report_with_a0<T: Real>(
    duties: &[T],
    rise_fall: T,
    a0: T,
) -> Result<EfficiencyReport<T>> {
    let (s, s2) = check_duties(duties)?;
    if !(rise_fall >= T::zero() && rise_fall < T::of(0.25)) {
        return Err(Error::Validation(format!(
            "rise_fall must be in [0, 0.25), got {rise_fall}"
        )));
    }
    let opst = T::one() + T::SQRT_2();
    let scale = T::of(128.0) / (T::PI() * opst * opst);
    let s1 = sinc(T::PI() * rise_fall);
    let p_r = scale * a0 * s;
    let p_u = scale * s1 * s1 * s2;
    Ok(EfficiencyReport::from_powers(duties.len(), s, s2, p_r, p_u))
}

/// Independent numerical report: quadrature Fourier lines of the combined
/// switch pair, convolved with the duty-cycle lines, powers summed line by
/// line. Truncated at `q_max`/`k_max`, so compare against
/// [`closed_form_report_with_a0`] with [`a0_truncated`].
pub fn numeric_report<T: Real>(
    duties: &[T],
    rise_fall: T,
    q_max: u64,
    k_max: i64,
    samples: usize,
) -> Result<EfficiencyReport<T>> {
    use crate::pulse::{quadrature_coefficient, PulseSpec};

    let (s, s2) = check_duties(duties)?;
    let sets = HarmonicIndexSets::new(q_max);
    let spec = if rise_fall == T::zero() {
        PulseSpec::stair_step()
    } else {
        PulseSpec::trapezoid(rise_fall)
    };
    let j = Complex::new(T::zero(), T::one());
    let tau = T::of(0.25);
    let norm = pair_normalization::<T>();
    // combined pair line at each surviving signed order, from quadrature
    let mut lines: Vec<(i64, Complex<T>)> = Vec::new();
    for &q in &sets.upsilon {
        let signed = if HarmonicIndexSets::is_upsilon1(q) {
            q as i64
        } else {
            -(q as i64)
        };
        let w = quadrature_coefficient(&spec, signed, samples)?;
        let quad = Complex::new(T::one(), T::zero())
            + j * Complex::from_polar(T::one(), -T::TAU() * T::of_i64(signed) * tau);
        lines.push((signed, w * quad / norm));
    }

    let four_pi = T::of(4.0) * T::PI();
    let mut p_r = T::zero();
    let mut p_u = T::zero();
    for &xi in duties {
        let mut per_offset: BTreeMap<i64, Complex<T>> = BTreeMap::new();
        for k in -k_max..=k_max {
            let c = rect_coefficient(xi, k)?;
            for &(order, line) in &lines {
                *per_offset
                    .entry(k + order)
                    .or_insert_with(|| Complex::new(T::zero(), T::zero())) += c * line;
            }
        }
        for v in per_offset.values() {
            p_r += v.norm_sqr();
        }
        let l1 = lines
            .iter()
            .find(|(o, _)| *o == 1)
            .map(|&(_, l)| l)
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()));
        p_u += (Complex::new(xi, T::zero()) * l1).norm_sqr();
    }
    Ok(EfficiencyReport::from_powers(
        duties.len(),
        s,
        s2,
        four_pi * p_r,
        four_pi * p_u,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn trigamma_reference_values() {
        assert_abs_diff_eq!(trigamma(0.125f64), 65.38813, epsilon = 1e-4);
        assert_abs_diff_eq!(trigamma(0.875f64), 2.00574, epsilon = 1e-4);
        // ψ₁(1) = π²/6
        assert_relative_eq!(
            trigamma(1.0f64),
            std::f64::consts::PI.powi(2) / 6.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn a0_exact_matches_direct_sum() {
        let a = a0_exact::<f64>();
        assert_abs_diff_eq!(a, 1.0530292, epsilon = 1e-6);
        assert_abs_diff_eq!(a, a0_truncated::<f64>(1_000_000), epsilon = 1e-6);
        assert_abs_diff_eq!(a, a0_with_ramp(0.0f64), epsilon = 0.0);
    }

    #[test]
    fn a0_ties_to_waveform_mean_square() {
        // Parseval on the stair-step: Σ|W_q|² = 32A₀/π² = 2+√2
        let a = a0_exact::<f64>();
        assert_relative_eq!(
            32.0 * a / std::f64::consts::PI.powi(2),
            2.0 + std::f64::consts::SQRT_2,
            max_relative = 1e-9
        );
    }

    #[test]
    fn full_on_uniform_efficiencies() {
        let r = closed_form_report(&vec![1.0f64; 30], 0.0).unwrap();
        assert_abs_diff_eq!(r.eta_tma, 0.94964, epsilon = 1e-5);
        assert_abs_diff_eq!(r.eta_bfn, 0.58579, epsilon = 1e-5);
        assert_abs_diff_eq!(r.eta_total, 0.55629, epsilon = 1e-5);
        // η_BFN of the full-on array reduces to (2+√2)/(1+√2)² = 2−√2
        assert_relative_eq!(r.eta_bfn, 2.0 - std::f64::consts::SQRT_2, max_relative = 1e-9);
        assert_abs_diff_eq!(r.eta_tma * r.eta_bfn, r.eta_total, epsilon = 1e-12);
    }

    #[test]
    fn finite_ramps_raise_tma_efficiency() {
        // ramps shave the high harmonics faster than the wanted line
        let ideal = closed_form_report(&vec![1.0f64; 16], 0.0).unwrap();
        let trap = closed_form_report(&vec![1.0f64; 16], 0.06).unwrap();
        assert_abs_diff_eq!(trap.eta_tma, 0.98461, epsilon = 1e-4);
        assert!(trap.eta_tma > ideal.eta_tma);
        assert!(trap.eta_bfn < ideal.eta_bfn);
    }

    #[test]
    fn numeric_report_agrees_with_closed_form() {
        let duties = vec![0.9f64, 0.5, 1.0, 0.7];
        let q_max = 39;
        // the closed form sums all duty-cycle lines, so push k_max far out
        let numeric = numeric_report(&duties, 0.0, q_max, 200, 1 << 13).unwrap();
        let closed =
            closed_form_report_with_a0(&duties, 0.0, a0_truncated::<f64>(q_max)).unwrap();
        assert_relative_eq!(numeric.p_radiated, closed.p_radiated, max_relative = 2e-3);
        assert_relative_eq!(numeric.p_useful, closed.p_useful, max_relative = 1e-6);
        assert_relative_eq!(numeric.eta_tma, closed.eta_tma, max_relative = 2e-3);
    }

    #[test]
    fn invalid_duties_rejected() {
        assert!(closed_form_report::<f64>(&[], 0.0).is_err());
        assert!(closed_form_report(&[0.5f64, 0.0], 0.0).is_err());
        assert!(closed_form_report(&[0.5f64], 0.3).is_err());
    }
}
