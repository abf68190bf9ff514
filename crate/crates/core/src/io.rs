//! Text formats for embeddings, loss traces and distance matrices.
//!
//! Embeddings are CSV with a `node,coord_0,...,coord_{d-1}` header and a
//! JSON sidecar holding the signature and run summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::embedding::{EmbeddingSet, PairGeometry};
use crate::error::{Error, Result};
use crate::geometry::{ManifoldPoint, Signature};
use crate::optim::TraceRecord;

/// Relative tolerance used when reading points back from text.
pub const READ_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingMeta {
    pub p: usize,
    pub q: usize,
    pub beta: f64,
    pub seed: u64,
    pub iterations: usize,
    pub final_loss: Option<f64>,
    pub converged: bool,
}

impl EmbeddingMeta {
    pub fn of(set: &EmbeddingSet) -> Self {
        Self {
            p: set.signature.p(),
            q: set.signature.q(),
            beta: set.signature.beta(),
            seed: set.seed,
            iterations: set.iterations,
            final_loss: set.final_loss.is_finite().then_some(set.final_loss),
            converged: set.converged,
        }
    }

    pub fn signature(&self) -> Result<Signature> {
        Signature::new(self.p, self.q, self.beta)
    }
}

/// Path of the sidecar for `csv`: `emb.csv` becomes `emb.meta.json`.
pub fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

pub fn embeddings_to_csv(points: &[ManifoldPoint]) -> String {
    let dim = points.first().map_or(0, |p| p.coords().len());
    let mut out = String::from("node");
    for k in 0..dim {
        let _ = write!(out, ",coord_{k}");
    }
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        let _ = write!(out, "{i}");
        for c in p.coords() {
            // `{:?}` prints the shortest representation that round-trips
            let _ = write!(out, ",{c:?}");
        }
        out.push('\n');
    }
    out
}

/// Parses embedding CSV rows; nodes must appear as `0..n` in order.
pub fn embeddings_from_csv(text: &str, sig: &Signature) -> Result<Vec<ManifoldPoint>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let columns = header.split(',').count();
    if columns != sig.dim() + 1 {
        return Err(Error::DimensionMismatch {
            expected: sig.dim() + 1,
            found: columns,
        });
    }
    let mut points = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {columns} fields, found {}", fields.len()),
            });
        }
        let node: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad node id {:?}", fields[0]),
        })?;
        if node != points.len() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected node {}, found {node}", points.len()),
            });
        }
        let coords = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad coordinate {f:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        points.push(ManifoldPoint::with_tolerance(coords, *sig, READ_TOLERANCE)?);
    }
    Ok(points)
}

pub fn write_embeddings(path: &Path, set: &EmbeddingSet) -> Result<()> {
    std::fs::write(path, embeddings_to_csv(&set.points))?;
    let meta = serde_json::to_string_pretty(&EmbeddingMeta::of(set)).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(meta_path(path), meta + "\n")?;
    Ok(())
}

/// Reads an embedding CSV and its sidecar.
pub fn read_embeddings(path: &Path) -> Result<(EmbeddingMeta, Vec<ManifoldPoint>)> {
    let meta_text = std::fs::read_to_string(meta_path(path))?;
    let meta: EmbeddingMeta = serde_json::from_str(&meta_text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let sig = meta.signature()?;
    let points = embeddings_from_csv(&std::fs::read_to_string(path)?, &sig)?;
    Ok((meta, points))
}

pub fn trace_to_csv(trace: &[TraceRecord]) -> String {
    let mut out = String::from("iteration,loss,grad_norm_sq\n");
    for t in trace {
        let _ = writeln!(out, "{},{:?},{:?}", t.iteration, t.loss, t.gradient_norm_sq);
    }
    out
}

/// Dense `n × n` dissimilarity matrix, one row per line.
pub fn distance_matrix_csv<G: PairGeometry, C: AsRef<[f64]>>(geom: &G, points: &[C]) -> String {
    let mut out = String::new();
    for a in points {
        let row: Vec<String> = points
            .iter()
            .map(|b| format!("{:?}", geom.dissimilarity(a.as_ref(), b.as_ref())))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
