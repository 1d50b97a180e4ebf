//! Performance metrics of a reconstruction against a ground truth, plus
//! graph diagnostics on the truth itself.
//!
//! An off-diagonal entry (i, j) counts as a true positive when both the
//! inferred ρᵢⱼ and the assigned aᵢⱼ are positive, and analogously for the
//! other three confusion classes; the four percentages PPV, ACC, TPR and
//! FPR follow. Ratios with a zero denominator are reported as absent
//! rather than defaulting to 0 or 100, so averages taken over many runs
//! are never silently corrupted.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{InfluenceMatrix, NetworkSpec};

/// Confusion counts over all n(n−1) possible directed links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

impl ConfusionCounts {
    /// Total number of possible directed links n(n−1).
    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }
}

/// The four standard percentages; absent when their ratio is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Positive predictive value, TP/(TP+FP), in percent.
    pub ppv: Option<f64>,
    /// Accuracy, (TP+TN)/total, in percent.
    pub acc: Option<f64>,
    /// True positive rate, TP/(TP+FN), in percent.
    pub tpr: Option<f64>,
    /// False positive rate, FP/(FP+TN), in percent.
    pub fpr: Option<f64>,
}

impl MetricsReport {
    /// One CSV row in the column order ppv,acc,tpr,fpr; absent values
    /// print as empty fields.
    pub fn csv_row(&self) -> String {
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{}",
            cell(self.ppv),
            cell(self.acc),
            cell(self.tpr),
            cell(self.fpr)
        )
    }

    pub const CSV_HEADER: &'static str = "ppv,acc,tpr,fpr";
}

/// Classifies every off-diagonal entry of the inferred matrix against the
/// assigned topology.
pub fn confusion(truth: &NetworkSpec, inferred: &InfluenceMatrix) -> Result<ConfusionCounts> {
    if truth.n != inferred.n {
        return Err(Error::DimensionMismatch(format!(
            "truth has {} nodes, inferred has {}",
            truth.n, inferred.n
        )));
    }
    let mut counts = ConfusionCounts {
        true_positives: 0,
        false_positives: 0,
        true_negatives: 0,
        false_negatives: 0,
    };
    for i in 0..truth.n {
        for j in 0..truth.n {
            if i == j {
                continue;
            }
            let assigned = truth.weights[[i, j]] > 0.0;
            let estimated = inferred.values[[i, j]] > 0.0;
            match (estimated, assigned) {
                (true, true) => counts.true_positives += 1,
                (true, false) => counts.false_positives += 1,
                (false, false) => counts.true_negatives += 1,
                (false, true) => counts.false_negatives += 1,
            }
        }
    }
    Ok(counts)
}

/// Turns confusion counts into the four percentages.
pub fn report(counts: &ConfusionCounts) -> MetricsReport {
    let pct = |num: usize, den: usize| {
        if den == 0 {
            None
        } else {
            Some(100.0 * num as f64 / den as f64)
        }
    };
    let c = counts;
    MetricsReport {
        ppv: pct(c.true_positives, c.true_positives + c.false_positives),
        acc: pct(c.true_positives + c.true_negatives, c.total()),
        tpr: pct(c.true_positives, c.true_positives + c.false_negatives),
        fpr: pct(c.false_positives, c.false_positives + c.true_negatives),
    }
}

/// Symmetric 0/1 adjacency of the undirected, unweighted version:
/// {i, j} is an edge when either direction carries positive weight.
fn undirected_adjacency(spec: &NetworkSpec) -> Array2<f64> {
    let n = spec.n;
    let mut adj = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i != j && (spec.weights[[i, j]] > 0.0 || spec.weights[[j, i]] > 0.0) {
                adj[[i, j]] = 1.0;
                adj[[j, i]] = 1.0;
            }
        }
    }
    adj
}

/// Algebraic connectivity λ₂: the second-smallest eigenvalue of the
/// Laplacian of the undirected, unweighted version of the graph.
///
/// Computed with cyclic Jacobi rotations, converged well below 1e−9.
pub fn algebraic_connectivity(spec: &NetworkSpec) -> f64 {
    let n = spec.n;
    let adj = undirected_adjacency(spec);
    let mut lap = Array2::zeros((n, n));
    for i in 0..n {
        let degree: f64 = adj.row(i).sum();
        lap[[i, i]] = degree;
        for j in 0..n {
            if i != j {
                lap[[i, j]] = -adj[[i, j]];
            }
        }
    }
    let mut eigenvalues = jacobi_eigenvalues(lap);
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eigenvalues[1].max(0.0)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut a: Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    let tol = 1e-12 * a.iter().map(|v| v.abs()).fold(0.0_f64, f64::max).max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[[p, q]].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[[p, q]].abs() <= tol {
                    continue;
                }
                let theta = 0.5 * (a[[q, q]] - a[[p, p]]) / a[[p, q]];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[[i, i]]).collect()
}

/// True when the undirected version of the graph is connected
/// (breadth-first reachability from node 0).
pub fn is_weakly_connected(spec: &NetworkSpec) -> bool {
    let n = spec.n;
    let adj = undirected_adjacency(spec);
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if adj[[u, v]] > 0.0 && !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}
