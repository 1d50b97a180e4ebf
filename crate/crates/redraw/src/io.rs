//! File formats: JSON documents for specs and parameters, CSV for phase
//! traces and matrices, DOT for graph rendering.
//!
//! CSV numbers are written with the shortest representation that parses
//! back to the same double, so every round trip is bit-exact. DOT edge
//! labels are display-only and rounded to 3 decimals.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::model::{InfluenceMatrix, NetworkSpec, PhaseTrace, Stage};

/// Serde adapter storing an `Array2<f64>` as nested JSON arrays.
pub mod dense_matrix {
    use ndarray::Array2;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Array2<f64>, ser: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = m.rows().into_iter().map(|r| r.to_vec()).collect();
        serde::Serialize::serialize(&rows, ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Array2<f64>, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(de)?;
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        Array2::from_shape_vec((nrows, ncols), flat).map_err(D::Error::custom)
    }
}

/// Writes a value as pretty-printed JSON.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Reads a JSON document.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads and validates a network spec from JSON.
pub fn read_network_json(path: &Path) -> Result<NetworkSpec> {
    let spec: NetworkSpec = read_json(path)?;
    spec.validate()?;
    Ok(spec)
}

/// Renders a ground-truth network as a DOT digraph.
///
/// One edge `j -> i` per positive weight aᵢⱼ, labeled with the weight.
pub fn network_dot(spec: &NetworkSpec) -> String {
    dot_digraph(spec.n, &spec.weights)
}

/// Renders an influence matrix as a DOT digraph labeled with ρ values.
pub fn influence_dot(m: &InfluenceMatrix) -> String {
    dot_digraph(m.n, &m.values)
}

fn dot_digraph(n: usize, values: &Array2<f64>) -> String {
    let mut out = String::from("digraph influence {\n");
    for v in 1..=n {
        let _ = writeln!(out, "  {v};");
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && values[[i, j]] > 0.0 {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label=\"{:.3}\"];",
                    j + 1,
                    i + 1,
                    values[[i, j]]
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Writes one phase trace as CSV with header `t,theta_1,…,theta_n`.
pub fn write_trace_csv(path: &Path, trace: &PhaseTrace) -> Result<()> {
    let n = trace.n();
    let mut out = String::from("t");
    for i in 1..=n {
        let _ = write!(out, ",theta_{i}");
    }
    out.push('\n');
    for (row, &t) in trace.times.iter().enumerate() {
        let _ = write!(out, "{t}");
        for col in 0..n {
            let _ = write!(out, ",{}", trace.phases[[row, col]]);
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a phase trace written by [`write_trace_csv`].
pub fn read_trace_csv(path: &Path, experiment_index: usize) -> Result<PhaseTrace> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        what: "trace csv".into(),
        reason: "empty file".into(),
    })?;
    let n = header.split(',').count().saturating_sub(1);
    if n == 0 {
        return Err(Error::Parse {
            what: "trace csv".into(),
            reason: "header must be t,theta_1,...".into(),
        });
    }
    let mut times = Vec::new();
    let mut flat = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n + 1 {
            return Err(Error::Parse {
                what: "trace csv".into(),
                reason: format!("line {}: expected {} fields", lineno + 1, n + 1),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|e| Error::Parse {
                what: "trace csv".into(),
                reason: format!("line {}: {e}", lineno + 1),
            })
        };
        times.push(parse(fields[0])?);
        for f in &fields[1..] {
            flat.push(parse(f)?);
        }
    }
    let rows = times.len();
    let phases = Array2::from_shape_vec((rows, n), flat).map_err(|e| Error::Parse {
        what: "trace csv".into(),
        reason: e.to_string(),
    })?;
    let trace = PhaseTrace {
        times,
        phases,
        experiment_index,
    };
    trace.validate()?;
    Ok(trace)
}

/// Writes an influence matrix as a bare CSV adjacency (n rows of n values).
pub fn write_influence_csv(path: &Path, m: &InfluenceMatrix) -> Result<()> {
    fs::write(path, matrix_csv(&m.values))?;
    Ok(())
}

fn matrix_csv(values: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in values.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Reads a bare CSV adjacency back into an influence matrix.
pub fn read_influence_csv(path: &Path, stage: Stage) -> Result<InfluenceMatrix> {
    let values = read_matrix_csv(path)?;
    InfluenceMatrix::new(values, stage)
}

fn read_matrix_csv(path: &Path) -> Result<Array2<f64>> {
    let text = fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            row.push(field.trim().parse::<f64>().map_err(|e| Error::Parse {
                what: "matrix csv".into(),
                reason: format!("line {}: {e}", lineno + 1),
            })?);
        }
        rows.push(row);
    }
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) || nrows != ncols || nrows == 0 {
        return Err(Error::Parse {
            what: "matrix csv".into(),
            reason: format!("expected a square matrix, got {nrows} rows"),
        });
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((nrows, ncols), flat).map_err(|e| Error::Parse {
        what: "matrix csv".into(),
        reason: e.to_string(),
    })
}

/// Writes a network's positive entries as an edge-list CSV
/// (`source,target,weight`, 1-based labels).
pub fn write_edge_list(path: &Path, spec: &NetworkSpec) -> Result<()> {
    let mut out = String::from("source,target,weight\n");
    for (i, j, w) in spec.edges() {
        let _ = writeln!(out, "{},{},{}", j + 1, i + 1, w);
    }
    fs::write(path, out)?;
    Ok(())
}
