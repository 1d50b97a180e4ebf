//! Six-step reconstruction of a directed, weighted influence matrix from
//! phase time series.
//!
//! For every ordered node pair (i, j) and experiment k:
//!
//! 1. relative phase Δθᵢⱼ(t) = θᵢ(t) − θⱼ(t), taken as a principal value
//!    in (−π, π]; negative values mean i lags behind j;
//! 2. instantaneous influence ζ(Δθ) = (1 + cos Δθ)/2 for Δθ ≤ 0, else 0;
//! 3. time average ρᵢⱼ,ₖ = (1/T) ∫₀ᵀ ζ dt (trapezoidal rule on the grid);
//! 4. experiment average ρᵢⱼ = (1/K) Σₖ ρᵢⱼ,ₖ;
//! 5. DPI pruning: in every connected ordered triplet the weakest entry is
//!    dropped when it also lies below ν, with all comparisons made against
//!    the input matrix and removals applied in one sweep afterwards;
//! 6. threshold cut: entries below μ are zeroed.
//!
//! Windowed reconstruction runs the same pipeline per time window so the
//! inferred topology can be tracked as it forms.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{InfluenceMatrix, PhaseTrace, ReconstructionParams, Stage};
use crate::simulator::ExperimentBatch;

use std::f64::consts::PI;

/// How to treat experiments that failed the phase-locking check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LockPolicy {
    /// Refuse to average in any unlocked experiment (default).
    #[default]
    Reject,
    /// Include unlocked experiments; callers can inspect the batch's lock
    /// reports for diagnostics.
    WarnAndInclude,
}

/// Influence estimates per experiment and their K-average, before pruning.
#[derive(Debug, Clone)]
pub struct PairwiseCorrelation {
    /// ρᵢⱼ,ₖ for each experiment, in batch order.
    pub per_experiment: Vec<Array2<f64>>,
    /// The K-averaged raw matrix.
    pub averaged: InfluenceMatrix,
}

/// One influence matrix per time window.
#[derive(Debug, Clone)]
pub struct WindowedReconstruction {
    /// Inclusive window bounds [t_l, t_{l+1}] paired with their result.
    pub windows: Vec<((f64, f64), InfluenceMatrix)>,
}

/// Principal value of a phase difference in (−π, π].
pub fn wrap_phase(raw: f64) -> f64 {
    let mut w = raw.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Relative phase series Δθᵢⱼ(t), wrapped per sample.
pub fn relative_phase(trace: &PhaseTrace, i: usize, j: usize) -> Vec<f64> {
    assert_ne!(i, j, "relative phase needs two distinct nodes");
    (0..trace.times.len())
        .map(|row| wrap_phase(trace.phases[[row, i]] - trace.phases[[row, j]]))
        .collect()
}

/// Instantaneous influence of node j on node i given Δθᵢⱼ.
///
/// Maximal (1) at zero lag, decaying to 0 at −π; identically zero for
/// positive differences, where j lags i instead.
pub fn zeta(delta: f64) -> f64 {
    if delta <= 0.0 {
        (1.0 + delta.cos()) / 2.0
    } else {
        0.0
    }
}

/// Time-averaged influence ρᵢⱼ,ₖ over the full trace.
pub fn time_average(trace: &PhaseTrace, i: usize, j: usize) -> f64 {
    time_average_range(trace, i, j, 0, trace.times.len() - 1)
}

/// Trapezoidal ζ average over the sample range [first, last].
fn time_average_range(trace: &PhaseTrace, i: usize, j: usize, first: usize, last: usize) -> f64 {
    debug_assert!(last > first);
    let mut acc = 0.0;
    let mut prev = zeta(wrap_phase(trace.phases[[first, i]] - trace.phases[[first, j]]));
    for row in first + 1..=last {
        let cur = zeta(wrap_phase(trace.phases[[row, i]] - trace.phases[[row, j]]));
        acc += 0.5 * (prev + cur);
        prev = cur;
    }
    let span = trace.times[last] - trace.times[first];
    acc * trace.dt() / span
}

/// Raw influence matrix of a single experiment over a sample range.
fn experiment_matrix(trace: &PhaseTrace, first: usize, last: usize) -> Array2<f64> {
    let n = trace.n();
    let dt = trace.dt();
    let span = trace.times[last] - trace.times[first];
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            // zeta(d) and zeta(-d) share the cosine, and at most one of the
            // two directions is active per sample.
            let mut acc_ij = 0.0;
            let mut acc_ji = 0.0;
            let mut prev = pair_zetas(trace, i, j, first);
            for row in first + 1..=last {
                let cur = pair_zetas(trace, i, j, row);
                acc_ij += 0.5 * (prev.0 + cur.0);
                acc_ji += 0.5 * (prev.1 + cur.1);
                prev = cur;
            }
            m[[i, j]] = acc_ij * dt / span;
            m[[j, i]] = acc_ji * dt / span;
        }
    }
    m
}

#[inline]
fn pair_zetas(trace: &PhaseTrace, i: usize, j: usize, row: usize) -> (f64, f64) {
    let delta = wrap_phase(trace.phases[[row, i]] - trace.phases[[row, j]]);
    let level = (1.0 + delta.cos()) / 2.0;
    if delta == 0.0 {
        (level, level)
    } else if delta < 0.0 {
        (level, 0.0)
    } else {
        (0.0, level)
    }
}

fn check_locks(reports: &[crate::model::LockReport], policy: LockPolicy) -> Result<()> {
    if policy == LockPolicy::Reject {
        for (k, report) in reports.iter().enumerate() {
            if !report.locked {
                return Err(Error::Unlocked {
                    index: k + 1,
                    cv: report.cv,
                    chi: report.chi,
                });
            }
        }
    }
    Ok(())
}

/// Steps 1–4 over a whole batch: per-experiment matrices and their mean.
pub fn pairwise_correlation(
    batch: &ExperimentBatch,
    policy: LockPolicy,
) -> Result<PairwiseCorrelation> {
    check_locks(&batch.lock_reports, policy)?;
    correlation_from_traces(&batch.traces)
}

/// Steps 1–4 from bare traces (lock checks are the caller's concern).
pub fn correlation_from_traces(traces: &[PhaseTrace]) -> Result<PairwiseCorrelation> {
    if traces.is_empty() {
        return Err(Error::InvalidParams("no traces to reconstruct from".into()));
    }
    let per_experiment: Vec<Array2<f64>> = traces
        .par_iter()
        .map(|trace| experiment_matrix(trace, 0, trace.times.len() - 1))
        .collect();
    let averaged = average_matrices(&per_experiment)?;
    Ok(PairwiseCorrelation {
        per_experiment,
        averaged,
    })
}

fn average_matrices(matrices: &[Array2<f64>]) -> Result<InfluenceMatrix> {
    let k = matrices.len() as f64;
    let mut sum = matrices[0].clone();
    for m in &matrices[1..] {
        sum += m;
    }
    sum.mapv_inplace(|v| (v / k).clamp(0.0, 1.0));
    InfluenceMatrix::new(sum, Stage::Raw)
}

/// Step 4 on its own: the K-averaged raw influence matrix.
pub fn experiment_average(batch: &ExperimentBatch, policy: LockPolicy) -> Result<InfluenceMatrix> {
    Ok(pairwise_correlation(batch, policy)?.averaged)
}

/// Step 5: data-processing-inequality pruning.
///
/// For every ordered triplet (w, y, z) of distinct nodes whose three
/// entries ρ_zw, ρ_yw, ρ_zy are all positive, ρ_zw is marked for removal
/// when it is strictly the weakest and also lies strictly below ν. Marks
/// are evaluated against the input matrix only, then applied in one sweep,
/// so the outcome does not depend on enumeration order.
pub fn dpi_filter(m: &InfluenceMatrix, nu: f64) -> Result<InfluenceMatrix> {
    if !(0.0..1.0).contains(&nu) {
        return Err(Error::InvalidParams(format!(
            "nu must lie in [0, 1), got {nu}"
        )));
    }
    let n = m.n;
    let v = &m.values;
    let mut removed = vec![false; n * n];
    for w in 0..n {
        for y in 0..n {
            if y == w {
                continue;
            }
            let rho_yw = v[[y, w]];
            if rho_yw <= 0.0 {
                continue;
            }
            for z in 0..n {
                if z == w || z == y {
                    continue;
                }
                let rho_zw = v[[z, w]];
                let rho_zy = v[[z, y]];
                if rho_zw > 0.0
                    && rho_zy > 0.0
                    && rho_zw < rho_yw
                    && rho_zw < rho_zy
                    && rho_zw < nu
                {
                    removed[z * n + w] = true;
                }
            }
        }
    }
    let mut out = v.clone();
    for z in 0..n {
        for w in 0..n {
            if removed[z * n + w] {
                out[[z, w]] = 0.0;
            }
        }
    }
    InfluenceMatrix::new(out, Stage::PostDpi)
}

/// Step 6: zero all entries strictly below μ; ties are kept.
pub fn threshold_cut(m: &InfluenceMatrix, mu: f64) -> Result<InfluenceMatrix> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidParams(format!(
            "mu must lie in [0, 1], got {mu}"
        )));
    }
    let out = m.values.mapv(|v| if v < mu { 0.0 } else { v });
    InfluenceMatrix::new(out, Stage::PostThreshold)
}

/// The full pipeline over a batch: steps 1–6 in order.
pub fn reconstruct(
    batch: &ExperimentBatch,
    params: &ReconstructionParams,
) -> Result<InfluenceMatrix> {
    reconstruct_with_policy(batch, params, LockPolicy::Reject)
}

/// [`reconstruct`] with an explicit unlocked-experiment policy.
pub fn reconstruct_with_policy(
    batch: &ExperimentBatch,
    params: &ReconstructionParams,
    policy: LockPolicy,
) -> Result<InfluenceMatrix> {
    params.validate()?;
    let raw = experiment_average(batch, policy)?;
    let pruned = dpi_filter(&raw, params.dpi_threshold)?;
    threshold_cut(&pruned, params.cut_threshold)
}

/// Pipeline applied to the raw matrix of an earlier step (steps 5–6 only).
pub fn prune(raw: &InfluenceMatrix, params: &ReconstructionParams) -> Result<InfluenceMatrix> {
    params.validate()?;
    let pruned = dpi_filter(raw, params.dpi_threshold)?;
    threshold_cut(&pruned, params.cut_threshold)
}

/// Uniform window boundaries 0, ΔT, 2ΔT, … covering [0, T]; the last
/// window is shorter when ΔT does not divide T.
pub fn uniform_windows(duration: f64, window: f64) -> Result<Vec<f64>> {
    if !(window > 0.0) || window > duration {
        return Err(Error::InvalidParams(format!(
            "window length {window} must lie in (0, duration = {duration}]"
        )));
    }
    let mut bounds = Vec::new();
    let mut t = 0.0;
    let mut l = 0u32;
    while t < duration - 1e-9 {
        bounds.push(t);
        l += 1;
        t = f64::from(l) * window;
    }
    bounds.push(duration);
    Ok(bounds)
}

/// Runs the full pipeline once per window.
///
/// Window [t_l, t_{l+1}] covers the samples falling inside it (boundary
/// samples are shared with the neighbouring windows); the time average of
/// step 3 is taken over the window span instead of T.
pub fn reconstruct_windowed(
    batch: &ExperimentBatch,
    params: &ReconstructionParams,
    window: f64,
) -> Result<WindowedReconstruction> {
    let bounds = uniform_windows(batch.template.duration, window)?;
    reconstruct_windowed_bounds(batch, params, &bounds, LockPolicy::Reject)
}

/// Windowed pipeline with explicit boundaries and lock policy.
pub fn reconstruct_windowed_bounds(
    batch: &ExperimentBatch,
    params: &ReconstructionParams,
    bounds: &[f64],
    policy: LockPolicy,
) -> Result<WindowedReconstruction> {
    check_locks(&batch.lock_reports, policy)?;
    windowed_from_traces(&batch.traces, params, bounds)
}

/// Windowed pipeline from bare traces.
pub fn windowed_from_traces(
    traces: &[PhaseTrace],
    params: &ReconstructionParams,
    bounds: &[f64],
) -> Result<WindowedReconstruction> {
    params.validate()?;
    if traces.is_empty() {
        return Err(Error::InvalidParams("no traces to reconstruct from".into()));
    }
    if bounds.len() < 2 {
        return Err(Error::InvalidParams(
            "need at least two window boundaries".into(),
        ));
    }
    let trace0 = &traces[0];
    let dt = trace0.dt();
    let last_sample = trace0.times.len() - 1;

    let mut ranges = Vec::new();
    for w in bounds.windows(2) {
        let (start, end) = (w[0], w[1]);
        if !(end > start) {
            return Err(Error::InvalidParams(format!(
                "window boundaries must increase strictly, got {start} then {end}"
            )));
        }
        let first = ((start / dt) - 1e-9).ceil().max(0.0) as usize;
        let last = ((end / dt) + 1e-9).floor() as usize;
        let last = last.min(last_sample);
        if last <= first || last > last_sample {
            return Err(Error::WindowTooShort { start, end });
        }
        ranges.push(((start, end), first, last));
    }

    let matrices: Vec<Result<InfluenceMatrix>> = ranges
        .par_iter()
        .map(|&(_, first, last)| {
            let per_exp: Vec<Array2<f64>> = traces
                .iter()
                .map(|trace| experiment_matrix(trace, first, last))
                .collect();
            let raw = average_matrices(&per_exp)?;
            prune(&raw, params)
        })
        .collect();

    let mut windows = Vec::with_capacity(ranges.len());
    for (m, &(span, _, _)) in matrices.into_iter().zip(&ranges) {
        windows.push((span, m?));
    }
    Ok(WindowedReconstruction { windows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NetworkSpec, SimConfig};
    use crate::simulator::run_batch;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn identical_signals_have_zero_relative_phase() {
        let trace = PhaseTrace {
            times: vec![0.0, 0.01, 0.02],
            phases: array![[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]],
            experiment_index: 1,
        };
        assert!(relative_phase(&trace, 0, 1).iter().all(|&d| d == 0.0));
    }

    #[test]
    fn constant_offset_is_preserved() {
        let trace = PhaseTrace {
            times: vec![0.0, 0.01],
            phases: array![[0.0, PI / 2.0], [1.0, 1.0 + PI / 2.0]],
            experiment_index: 1,
        };
        for d in relative_phase(&trace, 0, 1) {
            assert_abs_diff_eq!(d, -PI / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn wrap_matches_round_oracle() {
        // raw - 2*pi*round(raw/(2*pi)) away from the branch boundary.
        for raw in [
            3.0 * PI / 2.0,
            -3.0 * PI / 2.0,
            7.1,
            -12.9,
            0.3,
            2.0 * PI + 0.001,
        ] {
            let oracle = raw - 2.0 * PI * (raw / (2.0 * PI)).round();
            assert_abs_diff_eq!(wrap_phase(raw), oracle, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(wrap_phase(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-12);
        // Boundary convention: +pi stays +pi.
        assert_abs_diff_eq!(wrap_phase(PI), PI, epsilon = 1e-12);
    }

    #[test]
    fn zeta_known_values() {
        assert_abs_diff_eq!(zeta(0.0), 1.0);
        assert_abs_diff_eq!(zeta(-PI), 0.0, epsilon = 1e-15);
        assert_eq!(zeta(0.3), 0.0);
    }

    #[test]
    fn zeta_is_one_sided() {
        for k in 1..100 {
            let d = k as f64 * (PI / 100.0);
            assert_eq!(zeta(d), 0.0);
            assert!(zeta(-d) > 0.0 || k == 100);
        }
    }

    fn constant_delta_trace(delta: f64, samples: usize) -> PhaseTrace {
        let mut phases = Array2::zeros((samples, 2));
        for row in 0..samples {
            phases[[row, 0]] = delta;
        }
        PhaseTrace {
            times: (0..samples).map(|m| m as f64 * 0.01).collect(),
            phases,
            experiment_index: 1,
        }
    }

    #[test]
    fn constant_zero_delta_averages_to_one() {
        let trace = constant_delta_trace(0.0, 101);
        assert_abs_diff_eq!(time_average(&trace, 0, 1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_quarter_turn_averages_to_half() {
        let trace = constant_delta_trace(-PI / 2.0, 101);
        assert_abs_diff_eq!(time_average(&trace, 0, 1), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn sawtooth_sweep_approaches_quarter() {
        // Uniform sweep of the relative phase across (-pi, pi]; the exact
        // limit of the time average is 1/4 from the closed-form integral of
        // (1 + cos x)/2 over the negative half-period.
        let samples = 200_001;
        let mut phases = Array2::zeros((samples, 2));
        for row in 0..samples {
            phases[[row, 0]] = -PI + 2.0 * PI * row as f64 / (samples - 1) as f64;
        }
        let trace = PhaseTrace {
            times: (0..samples).map(|m| m as f64 * 0.01).collect(),
            phases,
            experiment_index: 1,
        };
        assert_abs_diff_eq!(time_average(&trace, 0, 1), 0.25, epsilon = 1e-4);
    }

    #[test]
    fn experiment_matrix_agrees_with_scalar_path() {
        let spec = NetworkSpec::new(array![[0.0, 1.3, 0.0], [0.4, 0.0, 0.9], [0.0, 0.2, 0.0]])
            .unwrap();
        let mut cfg = SimConfig::template(9.0, 0);
        cfg.natural_frequencies = vec![1.2, 1.8, 1.4];
        cfg.initial_phases = vec![0.5, -0.7, 2.2];
        cfg.duration = 5.0;
        let trace = crate::simulator::simulate(&spec, &cfg).unwrap();
        let m = experiment_matrix(&trace, 0, trace.times.len() - 1);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_abs_diff_eq!(m[[i, j]], time_average(&trace, i, j), epsilon = 1e-12);
                }
            }
        }
    }

    fn matrix(values: Array2<f64>, stage: Stage) -> InfluenceMatrix {
        InfluenceMatrix::new(values, stage).unwrap()
    }

    #[test]
    fn single_experiment_average_is_identity() {
        let spec = NetworkSpec::new(array![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let template = SimConfig::template(10.0, 0);
        let batch = run_batch(&spec, &template, 1, 3).unwrap();
        let corr = pairwise_correlation(&batch, LockPolicy::Reject).unwrap();
        assert_eq!(corr.per_experiment.len(), 1);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    corr.averaged.values[[i, j]],
                    corr.per_experiment[0][[i, j]],
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn two_matrix_average_is_elementwise_mean() {
        let a = array![[0.0, 0.2], [0.8, 0.0]];
        let b = array![[0.0, 0.6], [0.4, 0.0]];
        let mean = average_matrices(&[a, b]).unwrap();
        assert_abs_diff_eq!(mean.values[[0, 1]], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(mean.values[[1, 0]], 0.6, epsilon = 1e-15);
    }

    #[test]
    fn dpi_removes_marked_weakest_link() {
        // rho_zw = 0.3 with companions 0.6 and 0.7 under nu = 0.9.
        let v = array![
            [0.0, 0.0, 0.0],
            [0.6, 0.0, 0.0],
            [0.3, 0.7, 0.0]
        ];
        let out = dpi_filter(&matrix(v, Stage::Raw), 0.9).unwrap();
        assert_eq!(out.values[[2, 0]], 0.0);
        assert_eq!(out.values[[1, 0]], 0.6);
        assert_eq!(out.values[[2, 1]], 0.7);
    }

    #[test]
    fn dpi_with_zero_nu_removes_nothing() {
        let v = array![
            [0.0, 0.1, 0.2],
            [0.3, 0.0, 0.4],
            [0.5, 0.6, 0.0]
        ];
        let m = matrix(v.clone(), Stage::Raw);
        let out = dpi_filter(&m, 0.0).unwrap();
        assert_eq!(out.values, v);
    }

    #[test]
    fn dpi_matches_exhaustive_triplet_oracle() {
        // Mark-then-sweep over all n(n-1)(n-2) ordered triplets, written
        // independently of the implementation's loop structure.
        let mut rng = crate::rng::seeded_rng(41);
        for _ in 0..50 {
            let n = 5;
            let mut v = Array2::zeros((n, n));
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        v[[i, j]] = crate::rng::uniform_01(&mut rng);
                    }
                }
            }
            let nu = crate::rng::uniform_01(&mut rng);
            let m = matrix(v.clone(), Stage::Raw);
            let out = dpi_filter(&m, nu).unwrap();

            let mut expected = v.clone();
            for w in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if w == y || y == z || w == z {
                            continue;
                        }
                        let (zw, yw, zy) = (v[[z, w]], v[[y, w]], v[[z, y]]);
                        if zw > 0.0 && yw > 0.0 && zy > 0.0 && zw < yw && zw < zy && zw < nu {
                            expected[[z, w]] = 0.0;
                        }
                    }
                }
            }
            assert_eq!(out.values, expected);
        }
    }

    #[test]
    fn dpi_and_cut_are_idempotent_and_non_increasing() {
        let mut rng = crate::rng::seeded_rng(99);
        let n = 6;
        let mut v = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    v[[i, j]] = crate::rng::uniform_01(&mut rng);
                }
            }
        }
        let m = matrix(v, Stage::Raw);
        let once = dpi_filter(&m, 0.8).unwrap();
        let twice = dpi_filter(&once, 0.8).unwrap();
        assert_eq!(once.values, twice.values);
        for (a, b) in m.values.iter().zip(once.values.iter()) {
            assert!(b <= a);
        }
        let cut = threshold_cut(&once, 0.5).unwrap();
        let cut2 = threshold_cut(&cut, 0.5).unwrap();
        assert_eq!(cut.values, cut2.values);
        for (a, b) in once.values.iter().zip(cut.values.iter()) {
            assert!(b <= a);
        }
    }

    #[test]
    fn cut_with_zero_mu_changes_nothing() {
        let v = array![[0.0, 0.4], [0.7, 0.0]];
        let m = matrix(v.clone(), Stage::Raw);
        assert_eq!(threshold_cut(&m, 0.0).unwrap().values, v);
    }

    #[test]
    fn uniform_entries_below_mu_all_cut() {
        let v = array![[0.0, 0.4], [0.4, 0.0]];
        let m = matrix(v, Stage::Raw);
        let out = threshold_cut(&m, 0.5).unwrap();
        assert!(out.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn exact_tie_with_mu_is_kept() {
        let v = array![[0.0, 0.5], [0.4, 0.0]];
        let m = matrix(v, Stage::Raw);
        let out = threshold_cut(&m, 0.5).unwrap();
        assert_eq!(out.values[[0, 1]], 0.5);
        assert_eq!(out.values[[1, 0]], 0.0);
    }

    #[test]
    fn unlocked_experiment_rejected_by_default() {
        let spec = NetworkSpec::new(array![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let template = SimConfig::template(10.0, 0);
        let mut batch = run_batch(&spec, &template, 2, 3).unwrap();
        batch.lock_reports[1].locked = false;
        batch.lock_reports[1].cv = 0.9;
        let err = experiment_average(&batch, LockPolicy::Reject).unwrap_err();
        assert!(matches!(err, Error::Unlocked { index: 2, .. }));
        assert!(experiment_average(&batch, LockPolicy::WarnAndInclude).is_ok());
    }

    #[test]
    fn zero_coupling_batch_reconstructs_empty() {
        // Uncoupled phases drift, sweeping the relative phase uniformly;
        // the sawtooth average ~0.25 falls below any mu >= 0.6.
        let spec = NetworkSpec::empty(3).unwrap();
        let template = SimConfig::template(1.0, 0);
        let batch = run_batch(&spec, &template, 5, 11).unwrap();
        let params = ReconstructionParams::new(0.9, 0.6).unwrap();
        let out = reconstruct_with_policy(&batch, &params, LockPolicy::WarnAndInclude).unwrap();
        assert!(out.support().is_empty());
    }

    #[test]
    fn single_window_equals_full_reconstruction() {
        let spec = NetworkSpec::new(array![[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let template = SimConfig::template(10.0, 0);
        let batch = run_batch(&spec, &template, 3, 21).unwrap();
        let params = ReconstructionParams::new(0.9, 0.8).unwrap();
        let full = reconstruct(&batch, &params).unwrap();
        let windowed =
            reconstruct_windowed(&batch, &params, template.duration).unwrap();
        assert_eq!(windowed.windows.len(), 1);
        assert_eq!(windowed.windows[0].1.values, full.values);
    }

    #[test]
    fn window_shorter_than_grid_is_rejected() {
        let spec = NetworkSpec::new(array![[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let template = SimConfig::template(10.0, 0);
        let batch = run_batch(&spec, &template, 1, 2).unwrap();
        let params = ReconstructionParams::new(0.9, 0.8).unwrap();
        let err = reconstruct_windowed(&batch, &params, 0.005).unwrap_err();
        assert!(matches!(
            err,
            Error::WindowTooShort { .. } | Error::InvalidParams(_)
        ));
    }

    #[test]
    fn uniform_windows_cover_duration() {
        let bounds = uniform_windows(30.0, 0.5).unwrap();
        assert_eq!(bounds.len(), 61);
        assert_eq!(bounds[0], 0.0);
        assert_eq!(*bounds.last().unwrap(), 30.0);
        let ragged = uniform_windows(1.0, 0.3).unwrap();
        assert_eq!(ragged.len(), 5);
        assert!((ragged[3] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn pipeline_support_is_monotone() {
        let spec = NetworkSpec::new(array![
            [0.0, 1.0, 0.0, 0.0],
            [2.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0]
        ])
        .unwrap();
        let template = SimConfig::template(10.0, 0);
        let batch = run_batch(&spec, &template, 5, 4).unwrap();
        let raw = experiment_average(&batch, LockPolicy::WarnAndInclude).unwrap();
        let post_dpi = dpi_filter(&raw, 0.9).unwrap();
        let post_cut = threshold_cut(&post_dpi, 0.8).unwrap();
        let raw_support: std::collections::HashSet<_> = raw.support().into_iter().collect();
        let dpi_support: std::collections::HashSet<_> = post_dpi.support().into_iter().collect();
        let cut_support: std::collections::HashSet<_> = post_cut.support().into_iter().collect();
        assert!(cut_support.is_subset(&dpi_support));
        assert!(dpi_support.is_subset(&raw_support));
    }
}
