//! Periodic switching waveforms and their Fourier coefficients.
//!
//! Three ideal odd pulses are built from a two-state square wave `u(t)` and a
//! tri-state square wave `v(t)`: their sum `w(t) = u(t) + v(t)` is the
//! four-level stair-step pulse with levels `±1` and `±(1+√2)` whose spectrum
//! lives only on the harmonic orders in `Υ = {1, 7, 9, 15, 17, 23, 25, 31, …}`
//! with weights proportional to `1/q`. A trapezoidal variant models finite
//! switch rise/fall times. Every closed form is cross-checkable against
//! [`quadrature_coefficient`], a plain midpoint-rule Fourier integral.

use crate::error::{Error, Result};
use crate::real::Real;
use num_complex::Complex;

/// Level of the tall stair step, `1 + √2`.
pub fn stair_high<T: Real>() -> T {
    T::one() + T::SQRT_2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseKind {
    /// Bipolar square wave `u(t)`: `+1` on the first half period, `-1` on the second.
    TwoStateSquare,
    /// Tri-state wave `v(t)`: `+√2` on `[1/8, 3/8)`, `-√2` on `[5/8, 7/8)`, `0` elsewhere.
    TriStateSquare,
    /// Four-level stair-step `w(t) = u(t) + v(t)`.
    StairStep,
    /// Rectangular on/off pulse `c(t)`: `1` on `[0, ξ)`, `0` elsewhere.
    Rect,
    /// Stair-step with linear ramps of duration `rise_fall` centered on each
    /// ideal transition instant.
    TrapezoidStairStep,
}

/// Declarative description of one periodic modulating waveform.
///
/// The period is normalized to `1.0`; `delay`, `duty` and `rise_fall` are all
/// fractions of the period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec<T> {
    pub kind: PulseKind,
    pub period: T,
    pub delay: T,
    pub duty: T,
    pub rise_fall: T,
}

impl<T: Real> PulseSpec<T> {
    pub fn new(kind: PulseKind) -> Self {
        Self {
            kind,
            period: T::one(),
            delay: T::zero(),
            duty: T::one(),
            rise_fall: T::zero(),
        }
    }

    pub fn two_state() -> Self {
        Self::new(PulseKind::TwoStateSquare)
    }

    pub fn tri_state() -> Self {
        Self::new(PulseKind::TriStateSquare)
    }

    pub fn stair_step() -> Self {
        Self::new(PulseKind::StairStep)
    }

    /// Rectangular pulse with duty cycle `xi` switching on at `t = 0`.
    pub fn rect(xi: T) -> Self {
        Self {
            duty: xi,
            ..Self::new(PulseKind::Rect)
        }
    }

    /// Stair-step with linear transition ramps of full duration `rise_fall`.
    pub fn trapezoid(rise_fall: T) -> Self {
        Self {
            rise_fall,
            ..Self::new(PulseKind::TrapezoidStairStep)
        }
    }

    pub fn with_delay(mut self, delay: T) -> Self {
        self.delay = delay;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > T::zero()) {
            return Err(Error::Validation(format!("period must be > 0, got {}", self.period)));
        }
        if !(self.delay >= T::zero() && self.delay < T::one()) {
            return Err(Error::Validation(format!("delay must be in [0, 1), got {}", self.delay)));
        }
        if !(self.duty > T::zero() && self.duty <= T::one()) {
            return Err(Error::Validation(format!("duty must be in (0, 1], got {}", self.duty)));
        }
        if !(self.rise_fall >= T::zero() && self.rise_fall < T::of(0.25)) {
            return Err(Error::Validation(format!(
                "rise_fall must be in [0, 0.25), got {}",
                self.rise_fall
            )));
        }
        Ok(())
    }

    /// Fourier line of this pulse at `order`, delay included as a phase factor.
    ///
    /// Ideal kinds use the closed form, `Rect` uses [`rect_coefficient`], and
    /// the trapezoid falls back to quadrature with 2^14 samples (no closed
    /// form exists for it).
    pub fn coefficient(&self, order: i64) -> Result<Complex<T>> {
        self.validate()?;
        let base = match self.kind {
            PulseKind::Rect => rect_coefficient(self.duty, order)?,
            PulseKind::TrapezoidStairStep => {
                let undelayed = Self {
                    delay: T::zero(),
                    ..*self
                };
                quadrature_coefficient(&undelayed, order, DEFAULT_QUADRATURE_SAMPLES)?
            }
            kind => closed_form_coefficient(kind, order)?,
        };
        let phase = -T::TAU() * T::of_i64(order) * self.delay;
        Ok(base * Complex::from_polar(T::one(), phase))
    }
}

/// Default sample count for trapezoid quadrature.
pub const DEFAULT_QUADRATURE_SAMPLES: usize = 1 << 14;

/// Instantaneous waveform level at `t` (fraction of the period).
///
/// Transitions are right-continuous: the level on `[a, b)` is the step value.
pub fn sample_waveform<T: Real>(spec: &PulseSpec<T>, t: T) -> Result<T> {
    spec.validate()?;
    let x = wrap_unit(t - spec.delay);
    Ok(match spec.kind {
        PulseKind::TwoStateSquare => two_state_level(x),
        PulseKind::TriStateSquare => tri_state_level(x),
        PulseKind::StairStep => two_state_level(x) + tri_state_level(x),
        PulseKind::Rect => {
            if x < spec.duty || spec.duty == T::one() {
                T::one()
            } else {
                T::zero()
            }
        }
        PulseKind::TrapezoidStairStep => trapezoid_level(x, spec.rise_fall),
    })
}

fn wrap_unit<T: Real>(t: T) -> T {
    let f = t.fract();
    if f < T::zero() {
        f + T::one()
    } else {
        f
    }
}

fn two_state_level<T: Real>(x: T) -> T {
    if x < T::of(0.5) {
        T::one()
    } else {
        -T::one()
    }
}

fn tri_state_level<T: Real>(x: T) -> T {
    if x >= T::of(0.125) && x < T::of(0.375) {
        T::SQRT_2()
    } else if x >= T::of(0.625) && x < T::of(0.875) {
        -T::SQRT_2()
    } else {
        T::zero()
    }
}

/// Stair-step transitions as (instant, level before, level after).
fn stair_transitions<T: Real>() -> [(T, T, T); 6] {
    let hi = stair_high::<T>();
    let one = T::one();
    [
        (T::zero(), -one, one),
        (T::of(0.125), one, hi),
        (T::of(0.375), hi, one),
        (T::of(0.5), one, -one),
        (T::of(0.625), -one, -hi),
        (T::of(0.875), -hi, -one),
    ]
}

fn trapezoid_level<T: Real>(x: T, rise_fall: T) -> T {
    if rise_fall == T::zero() {
        return two_state_level(x) + tri_state_level(x);
    }
    let half = rise_fall / T::of(2.0);
    for (tc, before, after) in stair_transitions::<T>() {
        // signed distance to the transition, shortest way around the circle
        let mut s = x - tc;
        if s > T::of(0.5) {
            s -= T::one();
        } else if s < T::of(-0.5) {
            s += T::one();
        }
        if s >= -half && s < half {
            return before + (after - before) * (s + half) / rise_fall;
        }
    }
    two_state_level(x) + tri_state_level(x)
}

/// Closed-form Fourier coefficient of the ideal odd pulses.
///
/// * two-state: `U_q = -2j/(πq)` for odd `q`, `0` for even,
/// * tri-state: `V_q = (-1)^((q²-1)/8) · (-2j/(πq))` for odd `q`,
/// * stair-step: `W_q = U_q + V_q = -4j/(πq)` for `|q| ∈ Υ`, `0` otherwise.
pub fn closed_form_coefficient<T: Real>(kind: PulseKind, q: i64) -> Result<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    if q.rem_euclid(2) == 0 {
        return match kind {
            PulseKind::TwoStateSquare | PulseKind::TriStateSquare | PulseKind::StairStep => Ok(zero),
            _ => Err(Error::Domain(format!(
                "no closed-form coefficient for {kind:?}; use rect_coefficient or quadrature"
            ))),
        };
    }
    let odd_base = Complex::new(T::zero(), -T::of(2.0) / (T::PI() * T::of_i64(q)));
    match kind {
        PulseKind::TwoStateSquare => Ok(odd_base),
        PulseKind::TriStateSquare => Ok(odd_base * tri_state_sign::<T>(q)),
        PulseKind::StairStep => {
            if HarmonicIndexSets::is_member(q.unsigned_abs()) {
                Ok(odd_base * T::of(2.0))
            } else {
                Ok(zero)
            }
        }
        _ => Err(Error::Domain(format!(
            "no closed-form coefficient for {kind:?}; use rect_coefficient or quadrature"
        ))),
    }
}

/// Sign factor `(-1)^((q+1)(q-1)/8)` of the tri-state wave; for
/// `q = 3, 5, 7, 9, 11, 13, …` it runs `-1, -1, +1, +1, -1, -1, …`.
fn tri_state_sign<T: Real>(q: i64) -> T {
    debug_assert!(q % 2 != 0);
    let exp = (q * q - 1) / 8;
    if exp % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Fourier line of a rectangular duty-cycle pulse:
/// `C_k = ξ·sinc(kπξ)·e^{-jkπξ}` with `sinc(x) = sin(x)/x`.
pub fn rect_coefficient<T: Real>(xi: T, k: i64) -> Result<Complex<T>> {
    if !(xi > T::zero() && xi <= T::one()) {
        return Err(Error::Validation(format!("duty must be in (0, 1], got {xi}")));
    }
    if k == 0 {
        return Ok(Complex::new(xi, T::zero()));
    }
    let x = T::PI() * T::of_i64(k) * xi;
    let magnitude = xi * x.sin() / x;
    Ok(Complex::from_polar(T::one(), -x) * magnitude)
}

/// Numerical Fourier coefficient `(1/T₀)∫ f(t)·e^{-j·order·ω₀t} dt` by the
/// midpoint rule, the oracle for every closed form in this module.
///
/// Midpoint sampling never lands on a step transition, so the error is
/// `O((order/samples)²)` rather than `O(1/samples)`.
pub fn quadrature_coefficient<T: Real>(
    spec: &PulseSpec<T>,
    order: i64,
    samples: usize,
) -> Result<Complex<T>> {
    spec.validate()?;
    let min_samples = 64 * order.unsigned_abs().max(1) as usize;
    if samples < min_samples {
        return Err(Error::Validation(format!(
            "need at least {min_samples} samples for order {order}, got {samples}"
        )));
    }
    let m = T::of_usize(samples);
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..samples {
        let t = (T::of_usize(i) + T::of(0.5)) / m;
        let level = sample_waveform(spec, t)?;
        let phase = -T::TAU() * T::of_i64(order) * t;
        acc += Complex::from_polar(level, phase);
    }
    Ok(acc / m)
}

/// One spectral line: harmonic order and complex excitation weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierLine<T> {
    pub order: i64,
    pub coefficient: Complex<T>,
}

/// The index sets `Υ`, `Υ₁`, `Υ₂` of the stair-step spectrum.
///
/// `Υ = {4α+(-1)^α-2, α ≥ 1} = {1, 7, 9, 15, 17, 23, 25, 31, …}` splits into
/// the disjoint residue classes `Υ₁ = {8α-7}` (surviving positive offsets)
/// and `Υ₂ = {8α-1}` (surviving negative offsets).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicIndexSets {
    pub truncation: u64,
    pub upsilon: Vec<u64>,
    pub upsilon1: Vec<u64>,
    pub upsilon2: Vec<u64>,
}

impl HarmonicIndexSets {
    pub fn new(q_max: u64) -> Self {
        let upsilon: Vec<u64> = (1..=q_max).filter(|&q| Self::is_member(q)).collect();
        Self {
            truncation: q_max,
            upsilon1: upsilon.iter().copied().filter(|q| q % 8 == 1).collect(),
            upsilon2: upsilon.iter().copied().filter(|q| q % 8 == 7).collect(),
            upsilon,
        }
    }

    /// `q ∈ Υ` ⇔ `q ≡ 1 or 7 (mod 8)`.
    pub fn is_member(q: u64) -> bool {
        q % 8 == 1 || q % 8 == 7
    }

    pub fn is_upsilon1(q: u64) -> bool {
        q % 8 == 1
    }

    pub fn is_upsilon2(q: u64) -> bool {
        q % 8 == 7
    }
}
