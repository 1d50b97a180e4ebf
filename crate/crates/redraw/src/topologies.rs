//! Builders for the ground-truth topologies used by the benchmark suites,
//! plus edge-list ingestion for externally supplied networks.
//!
//! Weight conventions follow the rest of the crate: a recipe names edges
//! as source → target, and `build` stores them as a[target][source].
//! Where a published figure fixes only part of a structure (the four-node
//! block and the hub wiring of the 17-node networks), the builders take
//! the wiring as parameters with documented defaults instead of guessing
//! silently.

use std::collections::HashSet;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::NetworkSpec;

/// Directed 4-node block used as the standalone block recipe: a diamond
/// 1 → {2, 3} → 4. Triangle-free, so no direct link inside the block can
/// be mistaken for an indirect one. Entries are (target, source) offsets
/// within the block.
pub const BLOCK_EDGES: [(usize, usize); 4] = [(1, 0), (2, 0), (3, 1), (3, 2)];

/// Sub-network wiring used inside the 17-node hub topologies: a sequential
/// 1 → 2 → 3 → 4 cascade. Unlike the diamond, a cascade has no pair of
/// nodes in interchangeable positions, whose near-identical phases would
/// otherwise read as spurious links at the low cut threshold those
/// networks are reconstructed with. Node 0 is the gateway the hub wiring
/// attaches to.
pub const HUB_BLOCK_EDGES: [(usize, usize); 3] = [(1, 0), (2, 1), (3, 2)];

/// Default weight of edges inside a block.
pub const DEFAULT_INTRA_WEIGHT: f64 = 1.0;
/// Default weight of block-to-hub edges; stronger than the intra-block
/// weights.
pub const DEFAULT_HUB_WEIGHT: f64 = 2.0;
/// Default weight of the weak feedback the hub sends back into the
/// gateways. Strong feedback entrains the blocks into one tight cluster
/// whose incidental phase alignments read as links everywhere; weak
/// feedback keeps the blocks slowly drifting past each other so that
/// unrelated pairs average out below the cut threshold.
pub const DEFAULT_GEOMETRIC_FEEDBACK: f64 = 0.2;
/// Same, for the hierarchy variant whose hub collects from every node.
pub const DEFAULT_HIERARCHY_FEEDBACK: f64 = 0.1;
/// Default weight of the long-distance rewired edges: strong enough to
/// pull each rewired target out of its ring position entirely, which is
/// what tears the ring into the observed clusters.
pub const DEFAULT_REWIRED_WEIGHT: f64 = 60.0;
/// Default strong (previous-neighbour) weight of the regular ring.
pub const DEFAULT_RING_W1: f64 = 1.25;
/// Default weak (second-neighbour) weight of the regular ring.
pub const DEFAULT_RING_W2: f64 = 0.8;

/// Recipe for one ground-truth topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologyRecipe {
    /// Path 1 → 2 → … → n (or n → … → 1 when `reverse`), with one weight
    /// per edge; `weights[i]` always belongs to the edge between nodes
    /// i+1 and i+2. Defaults to unit weights.
    Chain {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        #[serde(default)]
        reverse: bool,
    },
    /// Four-node mixed star: node 1 influences nodes 3..n with
    /// `leaf_weight`, node 2 influences node 1 with the stronger
    /// `feed_weight`.
    Star {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        leaf_weight: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        feed_weight: Option<f64>,
    },
    /// A single directed 4-node block (see [`BLOCK_EDGES`]).
    Block4 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weight: Option<f64>,
    },
    /// Four blocks around a central hub (node 17): each gateway influences
    /// the hub with `hub_weight` and receives weak feedback
    /// (`feedback_weight`) in return.
    GeometricHub {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        intra_weight: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hub_weight: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        feedback_weight: Option<f64>,
    },
    /// Four blocks whose every node influences the central hub (node 17)
    /// with `hub_weight`; the hub sends weak feedback into the gateways.
    RavaszBarabasi {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        intra_weight: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hub_weight: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        feedback_weight: Option<f64>,
    },
    /// Ring where node i is influenced by i−1 (weight `w1`) and i−2
    /// (weight `w2` < `w1`), indices mod n.
    RegularRing {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w2: Option<f64>,
    },
    /// Regular ring plus `extra` long-distance directed edges
    /// (1-based source, target, weight). Defaults to five edges into
    /// nodes 4, 8, 12, 16, 20 from the node five positions behind each,
    /// i.e. 19→4, 3→8, 7→12, 11→16, 15→20.
    RewiredRing {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w2: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        extra: Option<Vec<(usize, usize, f64)>>,
    },
    /// Directed G(n, p): each ordered pair carries a unit edge
    /// independently with probability p (default ln(n)/(2n)).
    ErdosRenyi {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        seed: u64,
    },
    /// Edge-list CSV; `nodes` forces the node count for files that leave
    /// high-numbered nodes isolated.
    FromFile {
        path: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes: Option<usize>,
    },
}

/// Materializes a recipe into a validated network spec.
pub fn build(recipe: &TopologyRecipe) -> Result<NetworkSpec> {
    match recipe {
        TopologyRecipe::Chain {
            n,
            weights,
            reverse,
        } => chain(*n, weights.as_deref(), *reverse),
        TopologyRecipe::Star {
            n,
            leaf_weight,
            feed_weight,
        } => star(*n, leaf_weight.unwrap_or(1.0), feed_weight.unwrap_or(2.0)),
        TopologyRecipe::Block4 { weight } => {
            let mut w = Array2::zeros((4, 4));
            for &(target, source) in &BLOCK_EDGES {
                w[[target, source]] = weight.unwrap_or(DEFAULT_INTRA_WEIGHT);
            }
            NetworkSpec::new(w)
        }
        TopologyRecipe::GeometricHub {
            intra_weight,
            hub_weight,
            feedback_weight,
        } => geometric_hub(
            intra_weight.unwrap_or(DEFAULT_INTRA_WEIGHT),
            hub_weight.unwrap_or(DEFAULT_HUB_WEIGHT),
            feedback_weight.unwrap_or(DEFAULT_GEOMETRIC_FEEDBACK),
        ),
        TopologyRecipe::RavaszBarabasi {
            intra_weight,
            hub_weight,
            feedback_weight,
        } => ravasz_barabasi(
            intra_weight.unwrap_or(DEFAULT_INTRA_WEIGHT),
            hub_weight.unwrap_or(DEFAULT_HUB_WEIGHT),
            feedback_weight.unwrap_or(DEFAULT_HIERARCHY_FEEDBACK),
        ),
        TopologyRecipe::RegularRing { n, w1, w2 } => regular_ring(
            *n,
            w1.unwrap_or(DEFAULT_RING_W1),
            w2.unwrap_or(DEFAULT_RING_W2),
        ),
        TopologyRecipe::RewiredRing { n, w1, w2, extra } => rewired_ring(
            *n,
            w1.unwrap_or(DEFAULT_RING_W1),
            w2.unwrap_or(DEFAULT_RING_W2),
            extra.as_deref(),
        ),
        TopologyRecipe::ErdosRenyi { n, p, seed } => {
            let p = p.unwrap_or_else(|| default_edge_probability(*n));
            crate::calibrate::erdos_renyi_directed(*n, p, *seed)
        }
        TopologyRecipe::FromFile { path, nodes } => ingest_edge_list(Path::new(path), *nodes),
    }
}

/// Edge probability ln(n)/(2n) that tends to produce weakly connected
/// directed random graphs.
pub fn default_edge_probability(n: usize) -> f64 {
    (n as f64).ln() / (2.0 * n as f64)
}

fn chain(n: usize, weights: Option<&[f64]>, reverse: bool) -> Result<NetworkSpec> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let w = match weights {
        Some(w) if w.len() != n - 1 => {
            return Err(Error::InvalidParams(format!(
                "chain on {n} nodes needs {} weights, got {}",
                n - 1,
                w.len()
            )));
        }
        Some(w) => w.to_vec(),
        None => vec![1.0; n - 1],
    };
    let mut a = Array2::zeros((n, n));
    for (i, &weight) in w.iter().enumerate() {
        if reverse {
            a[[i, i + 1]] = weight; // edge (i+2) -> (i+1), 1-based
        } else {
            a[[i + 1, i]] = weight; // edge (i+1) -> (i+2), 1-based
        }
    }
    NetworkSpec::new(a)
}

fn star(n: usize, leaf_weight: f64, feed_weight: f64) -> Result<NetworkSpec> {
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "star needs at least 3 nodes, got {n}"
        )));
    }
    let mut a = Array2::zeros((n, n));
    a[[0, 1]] = feed_weight; // 2 -> 1
    for leaf in 2..n {
        a[[leaf, 0]] = leaf_weight; // 1 -> leaf
    }
    NetworkSpec::new(a)
}

fn add_hub_block(a: &mut Array2<f64>, offset: usize, weight: f64) {
    for &(target, source) in &HUB_BLOCK_EDGES {
        a[[offset + target, offset + source]] = weight;
    }
}

fn geometric_hub(intra_weight: f64, hub_weight: f64, feedback_weight: f64) -> Result<NetworkSpec> {
    let n = 17;
    let hub = 16;
    let mut a = Array2::zeros((n, n));
    for block in 0..4 {
        let offset = 4 * block;
        add_hub_block(&mut a, offset, intra_weight);
        let gateway = offset;
        a[[hub, gateway]] = hub_weight; // gateway -> hub
        a[[gateway, hub]] = feedback_weight; // hub -> gateway
    }
    NetworkSpec::new(a)
}

fn ravasz_barabasi(
    intra_weight: f64,
    hub_weight: f64,
    feedback_weight: f64,
) -> Result<NetworkSpec> {
    let n = 17;
    let hub = 16;
    let mut a = Array2::zeros((n, n));
    for block in 0..4 {
        let offset = 4 * block;
        add_hub_block(&mut a, offset, intra_weight);
        a[[offset, hub]] = feedback_weight; // hub -> gateway
    }
    for node in 0..hub {
        a[[hub, node]] = hub_weight; // every node -> hub
    }
    NetworkSpec::new(a)
}

fn regular_ring(n: usize, w1: f64, w2: f64) -> Result<NetworkSpec> {
    if n < 3 {
        return Err(Error::InvalidParams(format!(
            "ring needs at least 3 nodes, got {n}"
        )));
    }
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        a[[i, (i + n - 1) % n]] = w1;
        a[[i, (i + n - 2) % n]] = w2;
    }
    NetworkSpec::new(a)
}

fn default_rewired_edges(n: usize) -> Vec<(usize, usize, f64)> {
    let weight = DEFAULT_REWIRED_WEIGHT;
    // Targets n/5-spaced; each source sits five positions behind its
    // target (1-based): 19->4, 3->8, 7->12, 11->16, 15->20 for n = 20.
    (1..=5)
        .map(|k| {
            let target = 4 * k;
            let source = (target + n - 5 - 1) % n + 1;
            (source, target, weight)
        })
        .collect()
}

fn rewired_ring(
    n: usize,
    w1: f64,
    w2: f64,
    extra: Option<&[(usize, usize, f64)]>,
) -> Result<NetworkSpec> {
    if n % 4 != 0 {
        return Err(Error::InvalidParams(format!(
            "rewired ring expects a multiple of 4 nodes, got {n}"
        )));
    }
    let base = regular_ring(n, w1, w2)?;
    let mut a = base.weights;
    let default_edges;
    let edges = match extra {
        Some(e) => e,
        None => {
            default_edges = default_rewired_edges(n);
            &default_edges
        }
    };
    for &(source, target, weight) in edges {
        if source == 0 || target == 0 || source > n || target > n {
            return Err(Error::InvalidParams(format!(
                "rewired edge {source}->{target} outside 1..={n}"
            )));
        }
        if source == target {
            return Err(Error::InvalidParams(format!(
                "rewired edge {source}->{target} is a self-loop"
            )));
        }
        a[[target - 1, source - 1]] = weight;
    }
    NetworkSpec::new(a)
}

/// Parses `source,target[,weight]` CSV into a network spec.
///
/// Labels are 1-based integers; the weight defaults to 1. Blank lines,
/// `#` comments and a literal header row are skipped. Without an explicit
/// node count the largest label defines n.
pub fn ingest_edge_list(path: &Path, nodes: Option<usize>) -> Result<NetworkSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = HashSet::new();
    let mut max_label = 0usize;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if idx == 0 && line.to_ascii_lowercase().starts_with("source") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::EdgeList {
                line: lineno,
                reason: format!("expected source,target[,weight], got {} fields", fields.len()),
            });
        }
        let label = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| Error::EdgeList {
                line: lineno,
                reason: format!("node label '{s}' is not a positive integer"),
            })?;
            if v == 0 {
                return Err(Error::EdgeList {
                    line: lineno,
                    reason: "node labels are 1-based".into(),
                });
            }
            Ok(v)
        };
        let source = label(fields[0])?;
        let target = label(fields[1])?;
        let weight = if fields.len() == 3 {
            fields[2].parse::<f64>().map_err(|_| Error::EdgeList {
                line: lineno,
                reason: format!("weight '{}' is not a number", fields[2]),
            })?
        } else {
            1.0
        };
        if source == target {
            return Err(Error::EdgeList {
                line: lineno,
                reason: format!("self-loop at node {source}"),
            });
        }
        if weight < 0.0 || !weight.is_finite() {
            return Err(Error::EdgeList {
                line: lineno,
                reason: format!("negative or non-finite weight {weight}"),
            });
        }
        if let Some(limit) = nodes {
            if source > limit || target > limit {
                return Err(Error::EdgeList {
                    line: lineno,
                    reason: format!(
                        "unknown node label {} in a {limit}-node network",
                        source.max(target)
                    ),
                });
            }
        }
        if !seen.insert((source, target)) {
            return Err(Error::EdgeList {
                line: lineno,
                reason: format!("duplicate edge {source}->{target}"),
            });
        }
        max_label = max_label.max(source).max(target);
        edges.push((source, target, weight));
    }

    let n = nodes.unwrap_or(max_label);
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let mut a = Array2::zeros((n, n));
    for (source, target, weight) in edges {
        a[[target - 1, source - 1]] = weight;
    }
    NetworkSpec::new(a)
}
