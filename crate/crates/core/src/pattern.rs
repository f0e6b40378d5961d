//! Far-field power patterns of the excitation table and their figures of
//! merit (peak level, side-lobe level, half-power beamwidth).
//!
//! For an isotropic linear array the field at frequency offset `m` is
//! `F_m(θ) = Σ_n I_n(m)·e^{j2π(d/λ)n·cosθ}`. All decibel figures are relative
//! to the single global pattern peak across every offset, except the
//! side-lobe level, which is conventionally relative to the peak of its own
//! offset's pattern.

use crate::error::{Error, Result};
use crate::harmonic::ExcitationSet;
use crate::real::Real;
use num_complex::Complex;

/// Level reported when a pattern has no resolvable feature (no side lobe,
/// or identically zero power).
pub fn floor_db<T: Real>() -> T {
    T::of(-200.0)
}

/// Uniform observation grid over the polar angle, degrees, inclusive ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid<T> {
    pub start_deg: T,
    pub end_deg: T,
    pub step_deg: T,
}

impl<T: Real> ThetaGrid<T> {
    pub fn new(start_deg: T, end_deg: T, step_deg: T) -> Self {
        Self {
            start_deg,
            end_deg,
            step_deg,
        }
    }

    /// Full visible range at the default 0.05° resolution.
    pub fn full() -> Self {
        Self::new(T::zero(), T::of(180.0), T::of(0.05))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_deg > T::zero()) {
            return Err(Error::Validation(format!("step must be > 0°, got {}", self.step_deg)));
        }
        if !(self.end_deg > self.start_deg) {
            return Err(Error::Validation(format!(
                "empty angle range [{}, {}]",
                self.start_deg, self.end_deg
            )));
        }
        Ok(())
    }

    pub fn angles(&self) -> Vec<T> {
        let span = self.end_deg - self.start_deg;
        let count = (span / self.step_deg).round().to_usize().unwrap_or(0) + 1;
        (0..count)
            .map(|i| (self.start_deg + self.step_deg * T::of_usize(i)).min(self.end_deg))
            .collect()
    }
}

/// Array factor of one weight row at direction cosine `u = cos θ`.
pub fn array_factor<T: Real>(weights: &[Complex<T>], spacing: T, u: T) -> Complex<T> {
    let step = Complex::from_polar(T::one(), T::TAU() * spacing * u);
    let mut phasor = Complex::new(T::one(), T::zero());
    let mut acc = Complex::new(T::zero(), T::zero());
    for &w in weights {
        acc += w * phasor;
        phasor *= step;
    }
    acc
}

/// Sampled power patterns of every radiating offset on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGrid<T> {
    pub theta_deg: Vec<T>,
    pub offsets: Vec<i64>,
    /// `power[i][j]`: linear power of `offsets[i]` at `theta_deg[j]`.
    pub power: Vec<Vec<T>>,
    /// Largest linear power over all offsets and angles.
    pub global_peak: T,
}

impl<T: Real> PatternGrid<T> {
    pub fn compute(exc: &ExcitationSet<T>, spacing: T, grid: &ThetaGrid<T>) -> Result<Self> {
        grid.validate()?;
        if !(spacing > T::zero()) {
            return Err(Error::Validation(format!(
                "spacing must be > 0 wavelengths, got {spacing}"
            )));
        }
        let theta_deg = grid.angles();
        let cosines: Vec<T> = theta_deg.iter().map(|t| t.to_radians().cos()).collect();
        let mut global_peak = T::zero();
        let power: Vec<Vec<T>> = exc
            .weights
            .iter()
            .map(|row| {
                cosines
                    .iter()
                    .map(|&u| {
                        let p = array_factor(row, spacing, u).norm_sqr();
                        if p > global_peak {
                            global_peak = p;
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            theta_deg,
            offsets: exc.offsets.clone(),
            power,
            global_peak,
        })
    }

    pub fn row(&self, offset: i64) -> Option<&[T]> {
        let i = self.offsets.binary_search(&offset).ok()?;
        Some(&self.power[i])
    }

    /// Power in dB relative to the global peak, floored at [`floor_db`].
    pub fn power_db(&self, linear: T) -> T {
        if self.global_peak <= T::zero() || linear <= T::zero() {
            return floor_db();
        }
        let db = T::of(10.0) * (linear / self.global_peak).log10();
        db.max(floor_db())
    }

    /// Offset whose pattern contains the global peak.
    pub fn dominant_offset(&self) -> i64 {
        let mut best = (self.offsets[0], T::neg_infinity());
        for (i, row) in self.power.iter().enumerate() {
            let peak = row.iter().copied().fold(T::neg_infinity(), T::max);
            if peak > best.1 {
                best = (self.offsets[i], peak);
            }
        }
        best.0
    }

    /// Total radiated pattern `Σ_m |F_m(θ)|²` per grid angle — equals the
    /// time-averaged instantaneous power when the line table is complete.
    pub fn total_power(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.theta_deg.len()];
        for row in &self.power {
            for (a, &p) in acc.iter_mut().zip(row) {
                *a += p;
            }
        }
        acc
    }

    pub fn metrics(&self) -> Vec<PatternMetrics<T>> {
        self.offsets
            .iter()
            .enumerate()
            .map(|(i, &offset)| PatternMetrics::from_slice(offset, &self.theta_deg, &self.power[i], self.global_peak))
            .collect()
    }

    pub fn metrics_at(&self, offset: i64) -> Option<PatternMetrics<T>> {
        let i = self.offsets.binary_search(&offset).ok()?;
        Some(PatternMetrics::from_slice(
            offset,
            &self.theta_deg,
            &self.power[i],
            self.global_peak,
        ))
    }

    /// Highest per-offset peak (dB re global) excluding `wanted`.
    pub fn max_peak_excluding(&self, wanted: i64) -> T {
        let mut worst = floor_db::<T>();
        for (i, &offset) in self.offsets.iter().enumerate() {
            if offset == wanted {
                continue;
            }
            let peak = self.power[i].iter().copied().fold(T::zero(), T::max);
            worst = worst.max(self.power_db(peak));
        }
        worst
    }
}

/// Figures of merit of one offset's pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternMetrics<T> {
    pub offset: i64,
    /// Peak level in dB relative to the global pattern peak.
    pub peak_db: T,
    pub peak_theta_deg: T,
    /// Highest side lobe in dB relative to this offset's own peak;
    /// [`floor_db`] when the pattern has a single lobe.
    pub sll_db: T,
    /// −3 dB width of the main lobe in degrees, `None` when a half-power
    /// crossing is missing on either side.
    pub hpbw_deg: Option<T>,
}

impl<T: Real> PatternMetrics<T> {
    pub fn from_slice(offset: i64, theta_deg: &[T], power: &[T], global_peak: T) -> Self {
        debug_assert_eq!(theta_deg.len(), power.len());
        let (jm, &pm) = power
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        let peak_db = if global_peak > T::zero() && pm > T::zero() {
            (T::of(10.0) * (pm / global_peak).log10()).max(floor_db())
        } else {
            floor_db()
        };
        Self {
            offset,
            peak_db,
            peak_theta_deg: theta_deg[jm],
            sll_db: side_lobe_level(power, jm),
            hpbw_deg: half_power_width(theta_deg, power, jm),
        }
    }
}

/// Side-lobe level relative to the main-lobe peak at index `jm`.
///
/// Walks downhill from the peak to the first local minimum on each side; the
/// side-lobe region is everything beyond those minima.
pub(crate) fn side_lobe_level<T: Real>(power: &[T], jm: usize) -> T {
    if power[jm] <= T::zero() {
        return floor_db();
    }
    let mut l = jm;
    while l > 0 && power[l - 1] <= power[l] {
        l -= 1;
    }
    let mut r = jm;
    while r + 1 < power.len() && power[r + 1] <= power[r] {
        r += 1;
    }
    let mut worst = T::zero();
    for &p in power[..l].iter().chain(&power[r + 1..]) {
        worst = worst.max(p);
    }
    if worst <= T::zero() {
        floor_db()
    } else {
        T::of(10.0) * (worst / power[jm]).log10()
    }
}

/// −3 dB main-lobe width around the peak at index `jm`, linear interpolation
/// between grid samples.
fn half_power_width<T: Real>(theta_deg: &[T], power: &[T], jm: usize) -> Option<T> {
    let half = power[jm] * T::of(0.5);
    if half <= T::zero() {
        return None;
    }
    let crossing = |a: usize, b: usize| -> T {
        // power[a] and power[b] bracket `half`
        let frac = (power[a] - half) / (power[a] - power[b]);
        theta_deg[a] + (theta_deg[b] - theta_deg[a]) * frac
    };
    let mut left = None;
    for j in (1..=jm).rev() {
        if power[j - 1] < half && power[j] >= half {
            left = Some(crossing(j, j - 1));
            break;
        }
    }
    let mut right = None;
    for j in jm..power.len() - 1 {
        if power[j] >= half && power[j + 1] < half {
            right = Some(crossing(j, j + 1));
            break;
        }
    }
    match (left, right) {
        (Some(a), Some(b)) => Some((b - a).abs()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{ExcitationSet, SteeringPlan};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn uniform_broadside(n: usize) -> PatternGrid<f64> {
        let exc = ExcitationSet::compute(
            &vec![1.0f64; n],
            &SteeringPlan::broadside(n),
            0.25,
            0.0,
            31,
            0,
        )
        .unwrap();
        PatternGrid::compute(&exc, 0.5, &ThetaGrid::new(0.0, 180.0, 0.02)).unwrap()
    }

    #[test]
    fn grid_angles_hit_both_ends() {
        let g = ThetaGrid::new(0.0f64, 180.0, 0.05);
        let a = g.angles();
        assert_eq!(a.len(), 3601);
        assert_abs_diff_eq!(a[0], 0.0);
        assert_abs_diff_eq!(*a.last().unwrap(), 180.0);
    }

    #[test]
    fn array_factor_of_uniform_weights() {
        let w = vec![Complex64::new(1.0, 0.0); 8];
        // broadside: coherent sum
        assert_abs_diff_eq!(array_factor(&w, 0.5, 0.0).norm(), 8.0, epsilon = 1e-12);
        // first null of an 8-element half-wave array at u = 1/4
        assert_abs_diff_eq!(array_factor(&w, 0.5, 0.25).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_array_classic_side_lobe_level() {
        let grid = uniform_broadside(30);
        let m = grid.metrics_at(1).unwrap();
        assert_abs_diff_eq!(m.peak_theta_deg, 90.0, epsilon = 0.03);
        assert_abs_diff_eq!(m.peak_db, 0.0);
        // first side lobe of a long uniform array sits near -13.2 dB
        assert_abs_diff_eq!(m.sll_db, -13.23, epsilon = 0.05);
        let hpbw = m.hpbw_deg.unwrap();
        assert!(hpbw > 3.0 && hpbw < 4.5, "hpbw = {hpbw}");
    }

    #[test]
    fn harmonic_peaks_scale_as_one_over_q() {
        let grid = uniform_broadside(30);
        assert_eq!(grid.dominant_offset(), 1);
        for (offset, q) in [(-7i64, 7.0f64), (9, 9.0), (-15, 15.0)] {
            let m = grid.metrics_at(offset).unwrap();
            assert_abs_diff_eq!(m.peak_db, 20.0 * (1.0 / q).log10(), epsilon = 1e-9);
        }
        let worst = grid.max_peak_excluding(1);
        assert_abs_diff_eq!(worst, 20.0 * (1.0f64 / 7.0).log10(), epsilon = 1e-9);
    }

    #[test]
    fn single_lobe_pattern_reports_floor() {
        // 2-element array has no side lobes in [0, 180]
        let exc = ExcitationSet::compute(
            &vec![1.0f64; 2],
            &SteeringPlan::broadside(2),
            0.25,
            0.0,
            1,
            0,
        )
        .unwrap();
        let grid = PatternGrid::compute(&exc, 0.25, &ThetaGrid::new(60.0, 120.0, 0.1)).unwrap();
        let m = grid.metrics_at(1).unwrap();
        assert_abs_diff_eq!(m.sll_db, -200.0);
    }

    #[test]
    fn total_power_is_sum_of_rows() {
        let grid = uniform_broadside(8);
        let total = grid.total_power();
        let j = total.len() / 2;
        let by_hand: f64 = grid.power.iter().map(|row| row[j]).sum();
        assert_abs_diff_eq!(total[j], by_hand, epsilon = 1e-12);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(ThetaGrid::new(0.0f64, 180.0, 0.0).validate().is_err());
        assert!(ThetaGrid::new(90.0f64, 10.0, 0.1).validate().is_err());
    }
}
