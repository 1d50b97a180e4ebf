//! Domain types shared by the simulator, the reconstruction pipeline and
//! the evaluation code.
//!
//! Conventions used everywhere:
//!
//! * `weights[[i, j]]` (written aᵢⱼ) is the influence that node j exerts
//!   on node i, so an edge j → i in graph terms. Indices are 0-based in
//!   code and 1-based in files, DOT labels and error messages.
//! * Phase traces are stored unwrapped (continuous in t); wrapping to
//!   (−π, π] happens only where a principal value is needed.
//! * All types are immutable after construction and cheap to share across
//!   parallel workers.

use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default coupling phase shift φ (rad).
pub const DEFAULT_PHI: f64 = PI / 4.0;
/// Default experiment duration T (s).
pub const DEFAULT_DURATION: f64 = 30.0;
/// Default integration step (s).
pub const DEFAULT_DT: f64 = 0.01;
/// Default settle time t̂ before lock statistics are collected (s).
pub const DEFAULT_SETTLE_TIME: f64 = 20.0;
/// Default bound χ on the coefficient of variation for phase-locking.
pub const DEFAULT_CHI: f64 = 0.35;

/// Directed weighted adjacency: the ground truth a network is simulated
/// from, or the target a reconstruction is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    /// Node count.
    pub n: usize,
    /// n×n matrix; `weights[[i, j]]` is the influence of node j on node i.
    #[serde(with = "crate::io::dense_matrix")]
    pub weights: Array2<f64>,
}

impl NetworkSpec {
    /// Builds and validates a spec from a dense weight matrix.
    pub fn new(weights: Array2<f64>) -> Result<Self> {
        let n = weights.nrows();
        let spec = NetworkSpec { n, weights };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds an empty (edgeless) spec on `n` nodes.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(Array2::zeros((n, n)))
    }

    /// Checks all invariants, returning the first violation.
    ///
    /// Idempotent: a spec that validates once validates forever, since the
    /// type is immutable by convention.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewNodes(self.n));
        }
        if self.weights.nrows() != self.n || self.weights.ncols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "weights must be {0}x{0}, got {1}x{2}",
                self.n,
                self.weights.nrows(),
                self.weights.ncols()
            )));
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let w = self.weights[[i, j]];
                if !w.is_finite() {
                    return Err(Error::NonFiniteWeight { i: i + 1, j: j + 1 });
                }
                if i == j && w != 0.0 {
                    return Err(Error::SelfLoop {
                        node: i + 1,
                        weight: w,
                    });
                }
                if w < 0.0 {
                    return Err(Error::NegativeWeight {
                        i: i + 1,
                        j: j + 1,
                        weight: w,
                    });
                }
            }
        }
        Ok(())
    }

    /// Number of strictly positive off-diagonal entries.
    pub fn edge_count(&self) -> usize {
        let mut e = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.weights[[i, j]] > 0.0 {
                    e += 1;
                }
            }
        }
        e
    }

    /// Directed edges as 0-based `(target, source, weight)` triples, i.e.
    /// one triple per positive `weights[[i, j]]`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.weights[[i, j]] > 0.0 {
                    out.push((i, j, self.weights[[i, j]]));
                }
            }
        }
        out
    }
}

/// Validates a network spec, returning it unchanged when all invariants
/// hold.
pub fn validate_network(spec: NetworkSpec) -> Result<NetworkSpec> {
    spec.validate()?;
    Ok(spec)
}

/// Parameters of one simulated experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Natural frequencies ωᵢ (rad/s), one per node, all positive.
    pub natural_frequencies: Vec<f64>,
    /// Initial phases θᵢ(0) (rad), expected in [−π, π].
    pub initial_phases: Vec<f64>,
    /// Global coupling strength c > 0.
    pub coupling: f64,
    /// Base phase shift φ ∈ [0, π/2]; per edge the shift is φ/aᵢⱼ.
    pub phase_shift: f64,
    /// Duration T (s).
    pub duration: f64,
    /// Integration and sampling step (s). Must divide the duration.
    pub dt: f64,
    /// Seed recorded with the experiment for reproducibility.
    pub rng_seed: u64,
}

impl SimConfig {
    /// A config template with the crate defaults (T = 30 s, dt = 0.01 s,
    /// φ = π/4) and empty per-node vectors; batch runners fill the
    /// frequencies and initial phases per experiment.
    pub fn template(coupling: f64, seed: u64) -> Self {
        SimConfig {
            natural_frequencies: Vec::new(),
            initial_phases: Vec::new(),
            coupling,
            phase_shift: DEFAULT_PHI,
            duration: DEFAULT_DURATION,
            dt: DEFAULT_DT,
            rng_seed: seed,
        }
    }

    /// Checks invariants that do not depend on the network size.
    pub fn validate(&self) -> Result<()> {
        if !(self.coupling > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "coupling must be > 0, got {}",
                self.coupling
            )));
        }
        if !(0.0..=PI / 2.0).contains(&self.phase_shift) {
            return Err(Error::InvalidConfig(format!(
                "phase shift must lie in [0, pi/2], got {}",
                self.phase_shift
            )));
        }
        if !(self.duration > 0.0) || !(self.dt > 0.0) {
            return Err(Error::InvalidConfig(
                "duration and dt must be positive".into(),
            ));
        }
        if self.dt > self.duration {
            return Err(Error::InvalidConfig(format!(
                "dt = {} exceeds duration = {}",
                self.dt, self.duration
            )));
        }
        let steps = self.duration / self.dt;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::InvalidConfig(format!(
                "duration {} is not an integer multiple of dt {}",
                self.duration, self.dt
            )));
        }
        for (i, &w) in self.natural_frequencies.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "natural frequency of node {} must be > 0, got {w}",
                    i + 1
                )));
            }
        }
        if self.natural_frequencies.len() != self.initial_phases.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} frequencies vs {} initial phases",
                self.natural_frequencies.len(),
                self.initial_phases.len()
            )));
        }
        Ok(())
    }

    /// Number of integration steps M, so that M·dt = T.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

/// Sampled phase trajectories of one experiment.
///
/// `phases` has one row per sample instant (M+1 rows including t = 0) and
/// one column per node; entries are unwrapped, i.e. continuous in t.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrace {
    /// Sample instants t₀ = 0, …, t_M = T with constant spacing dt.
    pub times: Vec<f64>,
    /// (M+1)×n unwrapped phases (rad).
    pub phases: Array2<f64>,
    /// 1-based experiment index within its batch.
    pub experiment_index: usize,
}

impl PhaseTrace {
    /// Node count.
    pub fn n(&self) -> usize {
        self.phases.ncols()
    }

    /// Sample spacing dt.
    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Duration T.
    pub fn duration(&self) -> f64 {
        *self.times.last().expect("trace has at least two samples")
    }

    /// Checks grid uniformity and finiteness.
    pub fn validate(&self) -> Result<()> {
        if self.times.len() < 2 {
            return Err(Error::Parse {
                what: "phase trace".into(),
                reason: "needs at least two samples".into(),
            });
        }
        if self.times.len() != self.phases.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} times vs {} phase rows",
                self.times.len(),
                self.phases.nrows()
            )));
        }
        let dt = self.dt();
        if !(dt > 0.0) {
            return Err(Error::Parse {
                what: "phase trace".into(),
                reason: "times must be strictly increasing".into(),
            });
        }
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1.0) {
                return Err(Error::Parse {
                    what: "phase trace".into(),
                    reason: format!("non-uniform spacing between t={} and t={}", w[0], w[1]),
                });
            }
        }
        if let Some(bad) = self.phases.iter().position(|v| !v.is_finite()) {
            let row = bad / self.n();
            return Err(Error::Parse {
                what: "phase trace".into(),
                reason: format!("non-finite phase at t={}", self.times[row]),
            });
        }
        Ok(())
    }
}

/// Pipeline stage an influence matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Raw,
    PostDpi,
    PostThreshold,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stage::Raw => write!(f, "raw"),
            Stage::PostDpi => write!(f, "post_dpi"),
            Stage::PostThreshold => write!(f, "post_threshold"),
        }
    }
}

/// Estimated influence matrix ρ at some pipeline stage.
///
/// `values[[i, j]]` ∈ [0, 1] estimates the overall influence of node j on
/// node i; the diagonal is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceMatrix {
    pub n: usize,
    #[serde(with = "crate::io::dense_matrix")]
    pub values: Array2<f64>,
    pub stage: Stage,
}

impl InfluenceMatrix {
    pub fn new(values: Array2<f64>, stage: Stage) -> Result<Self> {
        let n = values.nrows();
        if values.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "influence matrix must be square, got {}x{}",
                n,
                values.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[[i, j]];
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::Parse {
                        what: "influence matrix".into(),
                        reason: format!("entry ({},{}) = {v} outside [0,1]", i + 1, j + 1),
                    });
                }
                if i == j && v != 0.0 {
                    return Err(Error::Parse {
                        what: "influence matrix".into(),
                        reason: format!("nonzero diagonal at node {}", i + 1),
                    });
                }
            }
        }
        Ok(InfluenceMatrix { n, values, stage })
    }

    /// Set of 0-based (i, j) pairs with strictly positive entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut s = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.values[[i, j]] > 0.0 {
                    s.push((i, j));
                }
            }
        }
        s
    }
}

/// Thresholds and optional windowing for a reconstruction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionParams {
    /// DPI threshold ν ∈ [0, 1): triplet-pruned entries must lie below it.
    pub dpi_threshold: f64,
    /// Final cut threshold μ ∈ [0, ν]: entries below it are zeroed.
    pub cut_threshold: f64,
    /// Optional window boundaries t₀ < t₁ < … < t_L inside [0, T].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_boundaries: Option<Vec<f64>>,
}

impl ReconstructionParams {
    pub fn new(nu: f64, mu: f64) -> Result<Self> {
        let p = ReconstructionParams {
            dpi_threshold: nu,
            cut_threshold: mu,
            window_boundaries: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (nu, mu) = (self.dpi_threshold, self.cut_threshold);
        if !(0.0..1.0).contains(&nu) || !nu.is_finite() {
            return Err(Error::InvalidParams(format!(
                "nu must lie in [0, 1), got {nu}"
            )));
        }
        if !(0.0..=nu).contains(&mu) {
            return Err(Error::InvalidParams(format!(
                "mu must lie in [0, nu = {nu}], got {mu}"
            )));
        }
        if let Some(bounds) = &self.window_boundaries {
            if bounds.len() < 2 {
                return Err(Error::InvalidParams(
                    "window boundaries need at least two entries".into(),
                ));
            }
            for w in bounds.windows(2) {
                if !(w[1] > w[0]) {
                    return Err(Error::InvalidParams(format!(
                        "window boundaries must increase strictly, got {} then {}",
                        w[0], w[1]
                    )));
                }
            }
            if bounds[0] < 0.0 {
                return Err(Error::InvalidParams(
                    "window boundaries must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Phase-locking verdict for one experiment.
///
/// `r(t) e^{jψ(t)} = (1/n) Σᵢ e^{jθᵢ(t)}` defines the order parameter;
/// ψ is unwrapped over time. The statistics η and σ are the mean and
/// standard deviation of the average angular velocity
/// v̄(t) = (ψ(t) − ψ(0))/t over samples with t ≥ t̂, and the experiment
/// counts as locked when c_v = σ/η ≤ χ.
#[derive(Debug, Clone, PartialEq)]
pub struct LockReport {
    /// Order-parameter magnitude per sample, each in [0, 1].
    pub r: Vec<f64>,
    /// Unwrapped order-parameter phase per sample (rad).
    pub psi: Vec<f64>,
    /// Mean of v̄(t) over the settle window (rad/s).
    pub eta: f64,
    /// Standard deviation of v̄(t) over the settle window (rad/s).
    pub sigma: f64,
    /// Coefficient of variation σ/η (dimensionless).
    pub cv: f64,
    /// Lock bound χ the verdict was taken against.
    pub chi: f64,
    /// Settle time t̂ (s); statistics cover t ≥ t̂.
    pub settle_time: f64,
    /// Verdict: c_v ≤ χ.
    pub locked: bool,
    /// Present when the statistics were degenerate (η = 0 with σ > 0).
    pub diagnostic: Option<String>,
}
