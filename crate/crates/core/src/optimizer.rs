//! Simulated annealing over the element duty cycles.
//!
//! The search minimizes a scalar cost built from three terms, all evaluated
//! at broadside on a deliberately coarse grid (the fast inner loop):
//!
//! * side-lobe level of the wanted first-harmonic pattern above a target,
//! * worst peak of the intermodulation offsets (those that exist only
//!   because the duty cycles differ from 1) above a threshold,
//! * a gentle pull towards large duty cycles, `1 − mean ξ`, which rewards
//!   radiated power once both dB constraints are met.
//!
//! The two dB terms are squared hinge penalties. Because the steering delays
//! are zero during optimization, the offset patterns factor through
//! `G_k(θ) = Σ_n C_nk·e^{jφ_n(θ)}`, and a single-element move updates each
//! `G_k` in O(grid) time. Randomness comes from a counter-based generator
//! seeded explicitly, so runs are reproducible.

use crate::error::{Error, Result};
use crate::harmonic::{ssb_pair_line, ExcitationSet, SteeringPlan};
use crate::pattern::{floor_db, side_lobe_level, PatternGrid, ThetaGrid};
use crate::pulse::{rect_coefficient, HarmonicIndexSets};
use crate::real::Real;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Offsets fed by the `k = 0` line of every element: `+q` for `q ∈ Υ₁`,
/// `-q` for `q ∈ Υ₂`. Peaks there are fixed by the switching scheme, so the
/// optimizer's "unwanted" term looks only at the remaining offsets.
pub fn is_fundamental_offset(m: i64) -> bool {
    (m > 0 && m.rem_euclid(8) == 1) || (m < 0 && (-m).rem_euclid(8) == 7)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig<T> {
    pub n_elements: usize,
    /// Target side-lobe level of the wanted beam, dB (e.g. −17).
    pub sll_target_db: T,
    /// Ceiling for intermodulation-offset peaks, dB re the main peak.
    pub harmonic_threshold_db: T,
    /// Trapezoid ramp duration Δ of the switches (0 = ideal).
    pub rise_fall: T,
    /// Move a mirror pair `(ξ_n, ξ_{N−1−n})` together, keeping the taper
    /// symmetric bit-exactly.
    pub symmetric: bool,
    pub seed: u64,
    pub initial_temp: T,
    pub cooling_rate: T,
    pub min_temp: T,
    pub iters_per_temp: usize,
    /// Half-width of the uniform duty perturbation.
    pub step_size: T,
    /// Lower clamp for the duty cycles.
    pub duty_floor: T,
    pub weight_sll: T,
    pub weight_unwanted: T,
    pub weight_duty: T,
    /// Angle step of the in-loop evaluation grid, degrees.
    pub coarse_step_deg: T,
    /// Duty-cycle line truncation of the in-loop evaluation.
    pub coarse_k_max: i64,
    pub q_max: u64,
    /// Element spacing in wavelengths.
    pub spacing: T,
}

impl<T: Real> OptimizerConfig<T> {
    pub fn new(n_elements: usize, sll_target_db: T, harmonic_threshold_db: T) -> Self {
        Self {
            n_elements,
            sll_target_db,
            harmonic_threshold_db,
            rise_fall: T::zero(),
            symmetric: false,
            seed: 1,
            initial_temp: T::one(),
            cooling_rate: T::of(0.95),
            min_temp: T::of(1e-4),
            iters_per_temp: 200,
            step_size: T::of(0.05),
            duty_floor: T::of(0.01),
            weight_sll: T::of(10.0),
            weight_unwanted: T::of(10.0),
            weight_duty: T::one(),
            coarse_step_deg: T::of(0.2),
            coarse_k_max: 5,
            q_max: 31,
            spacing: T::of(0.5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::Validation("array needs at least one element".into()));
        }
        if !(self.cooling_rate > T::zero() && self.cooling_rate < T::one()) {
            return Err(Error::Validation(format!(
                "cooling factor must be in (0, 1), got {}",
                self.cooling_rate
            )));
        }
        if !(self.min_temp > T::zero() && self.initial_temp > self.min_temp) {
            return Err(Error::Validation(format!(
                "need initial_temp > min_temp > 0, got {} and {}",
                self.initial_temp, self.min_temp
            )));
        }
        if !(self.step_size > T::zero()) {
            return Err(Error::Validation(format!("step must be > 0, got {}", self.step_size)));
        }
        if !(self.duty_floor > T::zero() && self.duty_floor < T::one()) {
            return Err(Error::Validation(format!(
                "duty_floor must be in (0, 1), got {}",
                self.duty_floor
            )));
        }
        if self.iters_per_temp == 0 {
            return Err(Error::Validation("iters_per_temp must be > 0".into()));
        }
        if self.coarse_k_max < 0 {
            return Err(Error::Validation("coarse_k_max must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerResult<T> {
    pub duties: Vec<T>,
    /// Cost of the returned vector on the coarse in-loop grid.
    pub cost: T,
    /// Side-lobe level on the fine verification grid, dB.
    pub sll_db: T,
    /// Worst intermodulation-offset peak on the fine grid, dB re main peak.
    pub unwanted_db: T,
    pub mean_duty: T,
    /// Cost of the current state after every candidate evaluation.
    pub cost_trace: Vec<T>,
    pub seed_used: u64,
    pub evaluations: usize,
    pub accepted_moves: usize,
    pub temperature_steps: usize,
}

/// Metric pair used inside the cost.
#[derive(Debug, Clone, Copy)]
struct CoarseMetrics<T> {
    sll_db: T,
    unwanted_db: T,
}

/// Incremental broadside pattern evaluator.
struct Evaluator<T> {
    cfg: OptimizerConfig<T>,
    /// `phasor[n][j] = e^{j2π(d/λ)n·cos θ_j}`
    phasor: Vec<Vec<Complex<T>>>,
    /// Surviving signed stair orders and their line values.
    lines: Vec<(i64, Complex<T>)>,
    /// `c[ki][n]`: duty line `C_nk`, `ki` indexes `k = -k_max..=k_max`.
    c: Vec<Vec<Complex<T>>>,
    /// `g[ki][j] = Σ_n c[ki][n]·phasor[n][j]`.
    g: Vec<Vec<Complex<T>>>,
    n_grid: usize,
}

impl<T: Real> Evaluator<T> {
    fn new(cfg: &OptimizerConfig<T>, duties: &[T]) -> Result<Self> {
        let grid = ThetaGrid::new(T::zero(), T::of(180.0), cfg.coarse_step_deg);
        grid.validate()?;
        let angles = grid.angles();
        let n_grid = angles.len();
        let phasor: Vec<Vec<Complex<T>>> = (0..cfg.n_elements)
            .map(|n| {
                angles
                    .iter()
                    .map(|t| {
                        Complex::from_polar(
                            T::one(),
                            T::TAU() * cfg.spacing * T::of_usize(n) * t.to_radians().cos(),
                        )
                    })
                    .collect()
            })
            .collect();
        let sets = HarmonicIndexSets::new(cfg.q_max);
        let lines = sets
            .upsilon
            .iter()
            .map(|&q| {
                let signed = if HarmonicIndexSets::is_upsilon1(q) {
                    q as i64
                } else {
                    -(q as i64)
                };
                (signed, ssb_pair_line(signed, T::zero(), T::of(0.25), cfg.rise_fall))
            })
            .collect();
        let mut ev = Self {
            cfg: *cfg,
            phasor,
            lines,
            c: vec![vec![Complex::new(T::zero(), T::zero()); cfg.n_elements]; (2 * cfg.coarse_k_max + 1) as usize],
            g: vec![vec![Complex::new(T::zero(), T::zero()); n_grid]; (2 * cfg.coarse_k_max + 1) as usize],
            n_grid,
        };
        for (n, &xi) in duties.iter().enumerate() {
            ev.set_duty(n, xi)?;
        }
        Ok(ev)
    }

    /// Replace element `n`'s duty cycle, updating every `G_k` in place.
    fn set_duty(&mut self, n: usize, xi: T) -> Result<()> {
        let k_max = self.cfg.coarse_k_max;
        for (ki, k) in (-k_max..=k_max).enumerate() {
            let new = rect_coefficient(xi, k)?;
            let delta = new - self.c[ki][n];
            self.c[ki][n] = new;
            if delta.norm_sqr() > T::zero() {
                let row = &mut self.g[ki];
                let ph = &self.phasor[n];
                for (gj, &pj) in row.iter_mut().zip(ph) {
                    *gj += delta * pj;
                }
            }
        }
        Ok(())
    }

    fn metrics(&self) -> CoarseMetrics<T> {
        let k_max = self.cfg.coarse_k_max;
        // all reachable offsets m = k + q
        let mut wanted_row = vec![T::zero(); self.n_grid];
        let mut wanted_peak = T::zero();
        let mut wanted_jm = 0usize;
        let mut unwanted_peak = T::zero();
        let mut seen: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
        for &(q, _) in &self.lines {
            for k in -k_max..=k_max {
                seen.insert(k + q);
            }
        }
        let mut field = vec![Complex::new(T::zero(), T::zero()); self.n_grid];
        for &m in &seen {
            for f in field.iter_mut() {
                *f = Complex::new(T::zero(), T::zero());
            }
            for &(q, line) in &self.lines {
                let k = m - q;
                if k.abs() > k_max {
                    continue;
                }
                let ki = (k + k_max) as usize;
                for (f, &gj) in field.iter_mut().zip(&self.g[ki]) {
                    *f += line * gj;
                }
            }
            if m == 1 {
                for (j, f) in field.iter().enumerate() {
                    let p = f.norm_sqr();
                    wanted_row[j] = p;
                    if p > wanted_peak {
                        wanted_peak = p;
                        wanted_jm = j;
                    }
                }
            } else if !is_fundamental_offset(m) {
                for f in &field {
                    unwanted_peak = unwanted_peak.max(f.norm_sqr());
                }
            }
        }
        let sll_db = side_lobe_level(&wanted_row, wanted_jm);
        let unwanted_db = if unwanted_peak > T::zero() && wanted_peak > T::zero() {
            T::of(10.0) * (unwanted_peak / wanted_peak).log10()
        } else {
            floor_db()
        };
        CoarseMetrics { sll_db, unwanted_db }
    }
}

/// Cost of a duty vector given its coarse metrics.
fn cost_of<T: Real>(cfg: &OptimizerConfig<T>, m: &CoarseMetrics<T>, mean_duty: T) -> T {
    let hinge = |x: T| x.max(T::zero());
    let sll_excess = hinge(m.sll_db - cfg.sll_target_db);
    let unw_excess = hinge(m.unwanted_db - cfg.harmonic_threshold_db);
    cfg.weight_sll * sll_excess * sll_excess
        + cfg.weight_unwanted * unw_excess * unw_excess
        + cfg.weight_duty * (T::one() - mean_duty)
}

/// Evaluate the optimizer cost and both dB metrics of an arbitrary duty
/// vector on the coarse grid (useful for regression tests and the CLI).
pub fn evaluate_cost<T: Real>(cfg: &OptimizerConfig<T>, duties: &[T]) -> Result<(T, T, T)> {
    cfg.validate()?;
    if duties.len() != cfg.n_elements {
        return Err(Error::Validation(format!(
            "expected {} duty cycles, got {}",
            cfg.n_elements,
            duties.len()
        )));
    }
    let ev = Evaluator::new(cfg, duties)?;
    let m = ev.metrics();
    let mean = duties.iter().copied().sum::<T>() / T::of_usize(duties.len());
    Ok((cost_of(cfg, &m, mean), m.sll_db, m.unwanted_db))
}

/// Run the annealer from the all-on vector `ξ_n = 1`.
pub fn optimize<T: Real>(cfg: &OptimizerConfig<T>) -> Result<OptimizerResult<T>> {
    cfg.validate()?;
    let n = cfg.n_elements;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut duties = vec![T::one(); n];
    let mut ev = Evaluator::new(cfg, &duties)?;
    let mut sum_duty = T::of_usize(n);

    let mut current = {
        let m = ev.metrics();
        cost_of(cfg, &m, sum_duty / T::of_usize(n))
    };
    let mut best = duties.clone();
    let mut best_cost = current;
    let mut evaluations = 1usize;
    let mut accepted = 0usize;
    let mut temp_steps = 0usize;

    let mut trace = vec![current];
    let mut temp = cfg.initial_temp;
    while temp > cfg.min_temp {
        for _ in 0..cfg.iters_per_temp {
            // a symmetric move perturbs a mirror pair as one unit
            let idx = if cfg.symmetric {
                rng.gen_range(0..n.div_ceil(2))
            } else {
                rng.gen_range(0..n)
            };
            let mirror = n - 1 - idx;
            let touched: &[usize] = if cfg.symmetric && mirror != idx {
                &[idx, mirror]
            } else {
                &[idx]
            };
            let old = duties[idx];
            let delta = T::of(rng.gen_range(-1.0..1.0)) * cfg.step_size;
            let new = (old + delta).max(cfg.duty_floor).min(T::one());
            if new == old {
                trace.push(current);
                continue;
            }
            for &i in touched {
                ev.set_duty(i, new)?;
                sum_duty += new - old;
            }
            let m = ev.metrics();
            let candidate = cost_of(cfg, &m, sum_duty / T::of_usize(n));
            evaluations += 1;
            let diff = candidate - current;
            let take = diff <= T::zero()
                || T::of(rng.gen_range(0.0..1.0f64)) < (-diff / temp).exp();
            if take {
                for &i in touched {
                    duties[i] = new;
                }
                current = candidate;
                accepted += 1;
                if candidate < best_cost {
                    best_cost = candidate;
                    best.copy_from_slice(&duties);
                }
            } else {
                for &i in touched {
                    ev.set_duty(i, old)?;
                    sum_duty += old - new;
                }
            }
            trace.push(current);
        }
        temp *= cfg.cooling_rate;
        temp_steps += 1;
    }

    // fine-grid verification of the returned vector
    let exc = ExcitationSet::compute(
        &best,
        &SteeringPlan::broadside(n),
        T::of(0.25),
        cfg.rise_fall,
        cfg.q_max,
        20,
    )?;
    let grid = PatternGrid::compute(&exc, cfg.spacing, &ThetaGrid::full())?;
    let sll_db = grid.metrics_at(1).map(|m| m.sll_db).unwrap_or_else(floor_db);
    let mut unwanted_db = floor_db::<T>();
    for (i, &m) in grid.offsets.iter().enumerate() {
        if m == 1 || is_fundamental_offset(m) {
            continue;
        }
        let peak = grid.power[i].iter().copied().fold(T::zero(), T::max);
        unwanted_db = unwanted_db.max(grid.power_db(peak));
    }
    let mean_duty = best.iter().copied().sum::<T>() / T::of_usize(n);
    Ok(OptimizerResult {
        duties: best,
        cost: best_cost,
        sll_db,
        unwanted_db,
        mean_duty,
        cost_trace: trace,
        seed_used: cfg.seed,
        evaluations,
        accepted_moves: accepted,
        temperature_steps: temp_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::sidelobe_optimized_30;
    use approx::assert_abs_diff_eq;

    fn quick_cfg(n: usize) -> OptimizerConfig<f64> {
        let mut cfg = OptimizerConfig::new(n, -15.0, -30.0);
        cfg.initial_temp = 0.1;
        cfg.min_temp = 0.02;
        cfg.iters_per_temp = 40;
        cfg.coarse_step_deg = 0.5;
        cfg
    }

    #[test]
    fn fundamental_offsets_classified() {
        for m in [1i64, 9, 17, 25, -7, -15, -23, -31] {
            assert!(is_fundamental_offset(m), "{m}");
        }
        for m in [0i64, -1, 2, 7, -9, 8, 15, -17] {
            assert!(!is_fundamental_offset(m), "{m}");
        }
    }

    #[test]
    fn published_taper_sits_inside_the_feasible_region() {
        let cfg = OptimizerConfig::new(30, -17.0, -30.0);
        let xi = sidelobe_optimized_30();
        let (cost, sll, unwanted) = evaluate_cost(&cfg, &xi).unwrap();
        assert!(sll < -16.5, "sll = {sll}");
        assert!(unwanted < -30.0, "unwanted = {unwanted}");
        // both hinge penalties are (near) zero, so the cost is essentially
        // the duty-cycle pull term
        let mean = xi.iter().sum::<f64>() / 30.0;
        assert_abs_diff_eq!(cost, 1.0 - mean, epsilon = 0.02);
    }

    #[test]
    fn all_on_vector_violates_the_sll_target() {
        let cfg = OptimizerConfig::new(30, -17.0, -30.0);
        let (cost, sll, _) = evaluate_cost(&cfg, &vec![1.0; 30]).unwrap();
        // uniform taper gives the classic ≈ −13.2 dB side lobes
        assert_abs_diff_eq!(sll, -13.23, epsilon = 0.1);
        assert!(cost > 10.0 * (17.0f64 - 13.3).powi(2) * 0.9);
    }

    #[test]
    fn same_seed_reproduces_same_result() {
        let cfg = quick_cfg(8);
        let a = optimize(&cfg).unwrap();
        let b = optimize(&cfg).unwrap();
        assert_eq!(a.duties, b.duties);
        assert_eq!(a.cost_trace, b.cost_trace);
        assert_eq!(a.evaluations, b.evaluations);

        let mut other = cfg;
        other.seed = 99;
        let c = optimize(&other).unwrap();
        assert_ne!(a.duties, c.duties);
    }

    #[test]
    fn short_run_does_not_worsen_the_start() {
        let cfg = quick_cfg(8);
        let start = evaluate_cost(&cfg, &vec![1.0; 8]).unwrap().0;
        let r = optimize(&cfg).unwrap();
        assert!(r.cost <= start + 1e-12, "{} vs {start}", r.cost);
        assert!(r.duties.iter().all(|&x| (0.01..=1.0).contains(&x)));
    }

    #[test]
    fn symmetric_mode_keeps_mirror_pairs_identical() {
        let mut cfg = quick_cfg(9);
        cfg.symmetric = true;
        let r = optimize(&cfg).unwrap();
        for i in 0..4 {
            assert_eq!(r.duties[i].to_bits(), r.duties[8 - i].to_bits());
        }
    }

    #[test]
    fn bad_configs_rejected() {
        let mut cfg = OptimizerConfig::<f64>::new(0, -17.0, -30.0);
        assert!(cfg.validate().is_err());
        cfg.n_elements = 4;
        cfg.cooling_rate = 1.0;
        assert!(cfg.validate().is_err());
    }
}
