//! Scenario files: TOML with comments, nested sections, defaults, and
//! round-trip serialization. Unknown keys are rejected so typos surface as
//! parse errors instead of silently ignored settings.

use serde::{Deserialize, Serialize};
use std::path::Path;
use tma_core::{Error as CoreError, OptimizerConfig64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Uniform full-on array, steered by the switch delays only.
    Phased,
    /// Tapered duty cycles shaping the first-harmonic beam.
    Beamformer,
    /// Trapezoidal switching with finite rise/fall.
    Nonideal,
    ScanSweep,
    Optimize,
    PulseDebug,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiSource {
    AllOnes,
    Explicit,
    Table2Preset,
    Table3Preset,
    Optimizer,
}

fn default_spacing() -> f64 {
    0.5
}
fn default_scan() -> f64 {
    90.0
}
fn default_step() -> f64 {
    0.05
}
fn default_k_max() -> i64 {
    20
}
fn default_q_max() -> u64 {
    31
}
fn default_outdir() -> String {
    "out".into()
}
fn default_n() -> usize {
    30
}
fn default_true() -> bool {
    true
}
fn default_seed() -> u64 {
    1
}
fn default_sll_target() -> f64 {
    -17.0
}
fn default_harmonic_threshold() -> f64 {
    -30.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    #[serde(default = "default_n")]
    pub n_elements: usize,
    /// Element spacing in wavelengths.
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        Self {
            n_elements: default_n(),
            spacing: default_spacing(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteeringSection {
    /// Scan angle of the first-harmonic beam, degrees.
    #[serde(default = "default_scan")]
    pub scan_deg: f64,
    /// Scan angles for `scan-sweep` mode.
    #[serde(default)]
    pub sweep_deg: Vec<f64>,
}

impl Default for SteeringSection {
    fn default() -> Self {
        Self {
            scan_deg: default_scan(),
            sweep_deg: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitationSection {
    pub source: XiSource,
    /// Explicit duty cycles (when `source = "explicit"`).
    #[serde(default)]
    pub xi: Vec<f64>,
    /// Trapezoid rise/fall duration as a fraction of the period.
    #[serde(default)]
    pub delta: f64,
}

impl Default for ExcitationSection {
    fn default() -> Self {
        Self {
            source: XiSource::AllOnes,
            xi: Vec::new(),
            delta: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_step")]
    pub step_deg: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            step_deg: default_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    #[serde(default = "default_k_max")]
    pub k_max: i64,
    #[serde(default = "default_q_max")]
    pub q_max: u64,
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self {
            k_max: default_k_max(),
            q_max: default_q_max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_outdir")]
    pub dir: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_outdir(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    #[serde(default = "default_sll_target")]
    pub sll_target_db: f64,
    #[serde(default = "default_harmonic_threshold")]
    pub harmonic_threshold_db: f64,
    #[serde(default = "default_true")]
    pub symmetric: bool,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub initial_temp: Option<f64>,
    #[serde(default)]
    pub cooling_rate: Option<f64>,
    #[serde(default)]
    pub min_temp: Option<f64>,
    #[serde(default)]
    pub iters_per_temp: Option<usize>,
    #[serde(default)]
    pub step_size: Option<f64>,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        Self {
            sll_target_db: default_sll_target(),
            harmonic_threshold_db: default_harmonic_threshold(),
            symmetric: true,
            seed: default_seed(),
            initial_temp: None,
            cooling_rate: None,
            min_temp: None,
            iters_per_temp: None,
            step_size: None,
        }
    }
}

/// Thresholds enforced when the CLI runs with `--check`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    /// Fail if the first-harmonic SLL exceeds this, dB.
    #[serde(default)]
    pub sll_max_db: Option<f64>,
    /// Fail if any peak outside the wanted offset exceeds this, dB.
    #[serde(default)]
    pub unwanted_max_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub mode: Mode,
    #[serde(default)]
    pub array: ArraySection,
    #[serde(default)]
    pub steering: SteeringSection,
    #[serde(default)]
    pub excitation: ExcitationSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub truncation: TruncationSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    #[serde(default)]
    pub check: CheckSection,
}

impl Scenario {
    pub fn parse(path: &Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self, CoreError> {
        let scenario: Scenario = toml::from_str(text)
            .map_err(|e| CoreError::Validation(format!("config parse error: {e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let fail = |msg: String| Err(CoreError::Validation(msg));
        if self.array.n_elements == 0 {
            return fail("array.n_elements must be at least 1".into());
        }
        if !(self.array.spacing > 0.0) {
            return fail(format!("array.spacing must be > 0, got {}", self.array.spacing));
        }
        if !(0.0..=180.0).contains(&self.steering.scan_deg) {
            return fail(format!(
                "steering.scan_deg must be in [0, 180], got {}",
                self.steering.scan_deg
            ));
        }
        for &s in &self.steering.sweep_deg {
            if !(0.0..=180.0).contains(&s) {
                return fail(format!("steering.sweep_deg entry out of [0, 180]: {s}"));
            }
        }
        if !(self.grid.step_deg > 0.0) {
            return fail(format!("grid.step_deg must be > 0, got {}", self.grid.step_deg));
        }
        if !(0.0..0.25).contains(&self.excitation.delta) {
            return fail(format!(
                "excitation.delta must be in [0, 0.25), got {}",
                self.excitation.delta
            ));
        }
        if self.truncation.k_max < 0 {
            return fail(format!("truncation.k_max must be >= 0, got {}", self.truncation.k_max));
        }
        match self.excitation.source {
            XiSource::Explicit => {
                if self.excitation.xi.len() != self.array.n_elements {
                    return fail(format!(
                        "excitation.xi has {} entries but array.n_elements = {}",
                        self.excitation.xi.len(),
                        self.array.n_elements
                    ));
                }
                for &x in &self.excitation.xi {
                    if !(x > 0.0 && x <= 1.0) {
                        return fail(format!("duty cycles must be in (0, 1], got {x}"));
                    }
                }
            }
            XiSource::Table2Preset | XiSource::Table3Preset => {
                if self.array.n_elements != 30 {
                    return fail(format!(
                        "duty-cycle presets are defined for 30 elements, got {}",
                        self.array.n_elements
                    ));
                }
            }
            _ => {}
        }
        if self.mode == Mode::ScanSweep && self.steering.sweep_deg.is_empty() {
            return fail("scan-sweep mode needs steering.sweep_deg".into());
        }
        Ok(())
    }

    /// Duty cycles selected by `excitation.source` (for `optimizer`, the
    /// caller runs the annealer first).
    pub fn duties(&self) -> Option<Vec<f64>> {
        match self.excitation.source {
            XiSource::AllOnes => Some(vec![1.0; self.array.n_elements]),
            XiSource::Explicit => Some(self.excitation.xi.clone()),
            XiSource::Table2Preset => Some(tma_core::presets::sidelobe_optimized_30()),
            XiSource::Table3Preset => Some(tma_core::presets::nonideal_optimized_30()),
            XiSource::Optimizer => None,
        }
    }

    pub fn optimizer_config(&self) -> OptimizerConfig64 {
        let o = &self.optimizer;
        let mut cfg = OptimizerConfig64::new(
            self.array.n_elements,
            o.sll_target_db,
            o.harmonic_threshold_db,
        );
        cfg.symmetric = o.symmetric;
        cfg.seed = o.seed;
        cfg.rise_fall = self.excitation.delta;
        cfg.spacing = self.array.spacing;
        cfg.q_max = self.truncation.q_max;
        if let Some(v) = o.initial_temp {
            cfg.initial_temp = v;
        }
        if let Some(v) = o.cooling_rate {
            cfg.cooling_rate = v;
        }
        if let Some(v) = o.min_temp {
            cfg.min_temp = v;
        }
        if let Some(v) = o.iters_per_temp {
            cfg.iters_per_temp = v;
        }
        if let Some(v) = o.step_size {
            cfg.step_size = v;
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let s = Scenario::parse_str("mode = \"phased\"").unwrap();
        assert_eq!(s.array.n_elements, 30);
        assert_eq!(s.array.spacing, 0.5);
        assert_eq!(s.steering.scan_deg, 90.0);
        assert_eq!(s.grid.step_deg, 0.05);
        assert_eq!(s.duties().unwrap(), vec![1.0; 30]);
    }

    #[test]
    fn round_trip_preserves_scenario() {
        let text = r#"
            mode = "beamformer"
            # comments survive parsing
            [array]
            n_elements = 30
            [excitation]
            source = "table2-preset"
            [check]
            sll_max_db = -16.5
        "#;
        let s = Scenario::parse_str(text).unwrap();
        let again = Scenario::parse_str(&s.to_toml()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn preset_matches_published_taper() {
        let s = Scenario::parse_str("mode = \"beamformer\"\n[excitation]\nsource = \"table2-preset\"")
            .unwrap();
        let xi = s.duties().unwrap();
        assert_eq!(xi[1], 0.136);
        assert_eq!(xi[28], 0.136);
        assert_eq!(xi[9], 0.926);
    }

    #[test]
    fn unknown_keys_and_bad_values_rejected() {
        assert!(Scenario::parse_str("mode = \"phased\"\nbogus = 1").is_err());
        assert!(Scenario::parse_str("mode = \"phased\"\n[array]\nn_elements = 0").is_err());
        assert!(
            Scenario::parse_str("mode = \"phased\"\n[excitation]\nsource = \"explicit\"\nxi = [0.5]")
                .is_err(),
            "explicit xi length must match n_elements"
        );
    }
}
