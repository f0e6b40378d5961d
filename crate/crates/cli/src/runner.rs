//! Scenario orchestration: wires the library calls together and emits the
//! artifacts. All numbers in the artifacts come straight from the library.

use crate::config::{Mode, Scenario};
use crate::report::{
    self, EfficiencyJson, OptimizerJson, RunReport, SweepRowJson,
};
use std::path::{Path, PathBuf};
use tma_core::efficiency::closed_form_report;
use tma_core::harmonic::{ArrayConfig, ExcitationSet, SteeringPlan};
use tma_core::optimizer::{is_fundamental_offset, optimize};
use tma_core::pattern::{PatternGrid, ThetaGrid};
use tma_core::pulse::{PulseKind, PulseSpec};
use tma_core::{Error, Result};

/// Outcome of a run that completed its computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    /// `--check` was requested and a threshold from `[check]` was exceeded.
    CheckViolated,
}

/// Resolve the output directory (environment override first) and create it
/// before any computation, so an unwritable location fails fast.
pub fn prepare_output_dir(scenario: &Scenario) -> Result<PathBuf> {
    let dir = match std::env::var("TMA_OUTPUT_DIR") {
        Ok(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(&scenario.output.dir),
    };
    std::fs::create_dir_all(&dir)
        .map_err(|e| Error::Validation(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn array_config(scenario: &Scenario) -> ArrayConfig<f64> {
    ArrayConfig {
        n_elements: scenario.array.n_elements,
        spacing: scenario.array.spacing,
        tau: 0.25,
    }
}

fn grid_for(scenario: &Scenario, duties: &[f64], scan_deg: f64) -> Result<PatternGrid<f64>> {
    let cfg = array_config(scenario);
    let plan = SteeringPlan::from_scan_angle(&cfg, scan_deg.to_radians())?;
    let exc = ExcitationSet::compute(
        duties,
        &plan,
        cfg.tau,
        scenario.excitation.delta,
        scenario.truncation.q_max,
        scenario.truncation.k_max,
    )?;
    PatternGrid::compute(
        &exc,
        cfg.spacing,
        &ThetaGrid::new(0.0, 180.0, scenario.grid.step_deg),
    )
}

/// Worst peak over the duty-cycle mixing offsets (those outside the fixed
/// `k = 0` comb), dB re the global peak.
fn mixing_peak_db(grid: &PatternGrid<f64>) -> f64 {
    grid.offsets
        .iter()
        .enumerate()
        .filter(|(_, &m)| !is_fundamental_offset(m))
        .map(|(i, _)| {
            let peak = grid.power[i].iter().copied().fold(0.0, f64::max);
            grid.power_db(peak)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn check_status(scenario: &Scenario, check: bool, sll_db: f64, unwanted_db: f64) -> RunStatus {
    if !check {
        return RunStatus::Ok;
    }
    let sll_bad = scenario.check.sll_max_db.is_some_and(|t| sll_db > t);
    let unwanted_bad = scenario.check.unwanted_max_db.is_some_and(|t| unwanted_db > t);
    if sll_bad || unwanted_bad {
        RunStatus::CheckViolated
    } else {
        RunStatus::Ok
    }
}

fn duties_of(scenario: &Scenario) -> Result<Vec<f64>> {
    scenario.duties().ok_or_else(|| {
        Error::Validation(
            "this command needs a concrete duty vector; run the optimizer first or pick \
             another excitation source"
                .into(),
        )
    })
}

/// `pattern`-style run: one steered pattern plus efficiency and plots.
pub fn run_pattern(scenario: &Scenario, check: bool) -> Result<RunStatus> {
    if !matches!(scenario.mode, Mode::Phased | Mode::Beamformer | Mode::Nonideal) {
        return Err(Error::Validation(format!(
            "pattern runs need a phased/beamformer/nonideal scenario, got {:?}",
            scenario.mode
        )));
    }
    let dir = prepare_output_dir(scenario)?;
    let duties = duties_of(scenario)?;
    let grid = grid_for(scenario, &duties, scenario.steering.scan_deg)?;
    let eff = closed_form_report(&duties, scenario.excitation.delta)?;

    let mut rep = RunReport::new(scenario);
    rep.pattern_metrics = grid.metrics().iter().map(Into::into).collect();
    rep.efficiency = Some(EfficiencyJson::from(&eff));
    push_artifact(&mut rep, report::write_pattern_csv(&dir, &grid)?);
    for p in report::write_pattern_svgs(&dir, &grid)? {
        push_artifact(&mut rep, p);
    }
    let json = rep.write(&dir)?;
    announce(&json, &rep);

    let sll = grid.metrics_at(1).map(|m| m.sll_db).unwrap_or(f64::NEG_INFINITY);
    Ok(check_status(scenario, check, sll, mixing_peak_db(&grid)))
}

/// `efficiency` run: power budget only, no pattern grid.
pub fn run_efficiency(scenario: &Scenario) -> Result<RunStatus> {
    let dir = prepare_output_dir(scenario)?;
    let duties = duties_of(scenario)?;
    let eff = closed_form_report(&duties, scenario.excitation.delta)?;
    let mut rep = RunReport::new(scenario);
    rep.efficiency = Some(EfficiencyJson::from(&eff));
    let json = rep.write(&dir)?;
    println!(
        "eta_tma = {:.4}   eta_bfn = {:.4}   eta = {:.4} ({:.2} dB)",
        eff.eta_tma,
        eff.eta_bfn,
        eff.eta_total,
        10.0 * eff.eta_total.log10()
    );
    announce(&json, &rep);
    Ok(RunStatus::Ok)
}

/// `sweep` run: pattern metrics per scan angle.
pub fn run_sweep(scenario: &Scenario, check: bool) -> Result<RunStatus> {
    if scenario.mode != Mode::ScanSweep {
        return Err(Error::Validation(format!(
            "sweep runs need a scan-sweep scenario, got {:?}",
            scenario.mode
        )));
    }
    let dir = prepare_output_dir(scenario)?;
    let duties = duties_of(scenario)?;
    let mut rep = RunReport::new(scenario);
    rep.efficiency = Some(EfficiencyJson::from(&closed_form_report(
        &duties,
        scenario.excitation.delta,
    )?));
    let mut worst_sll = f64::NEG_INFINITY;
    let mut worst_unwanted = f64::NEG_INFINITY;
    for &scan in &scenario.steering.sweep_deg {
        let grid = grid_for(scenario, &duties, scan)?;
        let m = grid
            .metrics_at(1)
            .ok_or_else(|| Error::Domain("wanted offset missing from grid".into()))?;
        let unwanted = mixing_peak_db(&grid);
        worst_sll = worst_sll.max(m.sll_db);
        worst_unwanted = worst_unwanted.max(unwanted);
        rep.sweep.push(SweepRowJson {
            scan_deg: scan,
            peak_theta_deg: m.peak_theta_deg,
            sll_db: m.sll_db,
            unwanted_db: unwanted,
            hpbw_deg: m.hpbw_deg,
        });
    }
    let csv = report::write_csv_rows(
        &dir,
        "sweep.csv",
        "scan_deg,peak_theta_deg,sll_db,unwanted_db,hpbw_deg",
        rep.sweep.iter().map(|r| {
            format!(
                "{:.2},{:.4},{:.4},{:.4},{}",
                r.scan_deg,
                r.peak_theta_deg,
                r.sll_db,
                r.unwanted_db,
                r.hpbw_deg.map_or(String::from("nan"), |h| format!("{h:.4}"))
            )
        }),
    )?;
    push_artifact(&mut rep, csv);
    let json = rep.write(&dir)?;
    announce(&json, &rep);
    Ok(check_status(scenario, check, worst_sll, worst_unwanted))
}

/// `optimize` run: anneal the duty cycles, then emit the resulting pattern.
pub fn run_optimize(scenario: &Scenario, check: bool) -> Result<RunStatus> {
    let dir = prepare_output_dir(scenario)?;
    let cfg = scenario.optimizer_config();
    let result = optimize(&cfg)?;
    let mut rep = RunReport::new(scenario);
    rep.seed = Some(result.seed_used);
    rep.optimizer = Some(OptimizerJson {
        duties: result.duties.clone(),
        achieved_sll_db: result.sll_db,
        achieved_harmonic_max_db: result.unwanted_db,
        best_cost: result.cost,
        seed_used: result.seed_used,
        evaluations: result.evaluations,
        accepted_moves: result.accepted_moves,
    });
    push_artifact(
        &mut rep,
        report::write_csv_rows(
            &dir,
            "xi.csv",
            "element,xi",
            result
                .duties
                .iter()
                .enumerate()
                .map(|(n, xi)| format!("{n},{xi:.6}")),
        )?,
    );
    push_artifact(
        &mut rep,
        report::write_csv_rows(
            &dir,
            "cost_trace.csv",
            "iteration,cost",
            result
                .cost_trace
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{i},{c:.6}")),
        )?,
    );
    // pattern of the optimized taper at broadside
    let grid = grid_for(scenario, &result.duties, 90.0)?;
    rep.pattern_metrics = grid.metrics().iter().map(Into::into).collect();
    rep.efficiency = Some(EfficiencyJson::from(&closed_form_report(
        &result.duties,
        scenario.excitation.delta,
    )?));
    push_artifact(&mut rep, report::write_pattern_csv(&dir, &grid)?);
    for p in report::write_pattern_svgs(&dir, &grid)? {
        push_artifact(&mut rep, p);
    }
    let json = rep.write(&dir)?;
    println!(
        "optimized {} elements: SLL = {:.2} dB, worst mixing peak = {:.2} dB",
        cfg.n_elements, result.sll_db, result.unwanted_db
    );
    announce(&json, &rep);
    Ok(check_status(scenario, check, result.sll_db, result.unwanted_db))
}

/// `pulse` run: waveform samples and spectral lines of the switching pulses.
pub fn run_pulse(scenario: &Scenario, samples: usize) -> Result<RunStatus> {
    let dir = prepare_output_dir(scenario)?;
    let delta = scenario.excitation.delta;
    let stair = PulseSpec::<f64>::stair_step();
    let two = PulseSpec::<f64>::two_state();
    let tri = PulseSpec::<f64>::tri_state();
    let trap = PulseSpec::<f64>::trapezoid(delta);
    let mut rep = RunReport::new(scenario);
    let waveform = report::write_csv_rows(
        &dir,
        "waveform.csv",
        "t,two_state,tri_state,stair_step,trapezoid",
        (0..samples).map(|i| {
            let t = i as f64 / samples as f64;
            format!(
                "{t:.6},{},{},{},{}",
                tma_core::pulse::sample_waveform(&two, t).unwrap(),
                tma_core::pulse::sample_waveform(&tri, t).unwrap(),
                tma_core::pulse::sample_waveform(&stair, t).unwrap(),
                tma_core::pulse::sample_waveform(&trap, t).unwrap(),
            )
        }),
    )?;
    push_artifact(&mut rep, waveform);
    let spectrum = report::write_csv_rows(
        &dir,
        "spectrum.csv",
        "order,stair_re,stair_im,stair_mag,trapezoid_mag",
        (-31i64..=31).map(|q| {
            let w = tma_core::pulse::closed_form_coefficient::<f64>(PulseKind::StairStep, q)
                .unwrap();
            let t = trap.coefficient(q).unwrap();
            format!("{q},{:.8},{:.8},{:.8},{:.8}", w.re, w.im, w.norm(), t.norm())
        }),
    )?;
    push_artifact(&mut rep, spectrum);
    let json = rep.write(&dir)?;
    announce(&json, &rep);
    Ok(RunStatus::Ok)
}

/// Dispatch a scenario by its own mode (used by `reproduce`).
pub fn run_scenario(scenario: &Scenario, check: bool) -> Result<RunStatus> {
    match scenario.mode {
        Mode::Phased | Mode::Beamformer | Mode::Nonideal => run_pattern(scenario, check),
        Mode::ScanSweep => run_sweep(scenario, check),
        Mode::Optimize => run_optimize(scenario, check),
        Mode::PulseDebug => run_pulse(scenario, 2048),
    }
}

fn push_artifact(rep: &mut RunReport, path: PathBuf) {
    rep.artifacts.push(path.display().to_string());
}

fn announce(json: &Path, rep: &RunReport) {
    println!(
        "wrote {} ({} artifacts)",
        json.display(),
        rep.artifacts.len() + 1
    );
}
