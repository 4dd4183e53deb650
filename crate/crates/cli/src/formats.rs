//! On-disk formats: distance matrix CSV, diagram CSV, and feature files
//! (CSV or JSONL). Floats are written with shortest round-trip formatting so
//! reruns of a deterministic pipeline produce byte-identical files.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use ties_core::evalharness::FeatureRow;
use ties_core::pipeline::DocumentMeta;
use ties_core::{DiagramPoint, DistanceMatrix, DocumentFeatures, HomologyDim, PersistenceDiagram};

pub fn format_float(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

fn parse_float(s: &str, what: &str) -> Result<f64> {
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .with_context(|| format!("{what}: bad float {s:?}"))
}

// ---------------------------------------------------------------- matrices

/// Headerless CSV: row i holds the D entries of matrix row i.
pub fn read_matrix_csv(path: &Path) -> Result<DistanceMatrix> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut values = Vec::new();
    let mut size = 0usize;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| parse_float(cell.trim(), &format!("{}:{}", path.display(), lineno + 1)))
            .collect::<Result<_>>()?;
        if size == 0 {
            size = row.len();
        } else if row.len() != size {
            bail!(
                "{}:{}: {} entries in a row of a {size}-column matrix",
                path.display(),
                lineno + 1,
                row.len()
            );
        }
        values.extend(row);
    }
    if size == 0 {
        bail!("{}: empty matrix", path.display());
    }
    if values.len() != size * size {
        bail!(
            "{}: {} rows of {size} columns do not form a square matrix",
            path.display(),
            values.len() / size
        );
    }
    Ok(DistanceMatrix::from_values(size, values)?)
}

pub fn write_matrix_csv(path: &Path, m: &DistanceMatrix) -> Result<()> {
    let mut out = BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    for i in 0..m.size() {
        let cells: Vec<String> = m.row(i).iter().map(|&v| format_float(v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- diagrams

/// Header `hdim,birth,death`; essential bars carry death `inf`.
pub fn write_diagram_csv(path: &Path, diagram: &PersistenceDiagram) -> Result<()> {
    let mut out = BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(out, "hdim,birth,death")?;
    for p in diagram.points() {
        writeln!(
            out,
            "{},{},{}",
            p.hdim.index(),
            format_float(p.birth),
            format_float(p.death)
        )?;
    }
    Ok(())
}

pub fn read_diagram_csv(path: &Path) -> Result<Vec<DiagramPoint>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut points = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("hdim")) {
            continue;
        }
        let loc = format!("{}:{}", path.display(), lineno + 1);
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 3 {
            bail!("{loc}: expected hdim,birth,death");
        }
        let hdim: u8 = cells[0]
            .parse()
            .with_context(|| format!("{loc}: bad homology dimension {:?}", cells[0]))?;
        points.push(DiagramPoint {
            hdim: HomologyDim::from_index(hdim)?,
            birth: parse_float(cells[1], &loc)?,
            death: parse_float(cells[2], &loc)?,
        });
    }
    Ok(points)
}

// ---------------------------------------------------------------- features

/// JSONL row layout for one document's features.
#[derive(Debug, Serialize, Deserialize)]
struct FeatureRecord {
    id: String,
    labels: Vec<String>,
    v0: Vec<f64>,
    v1: Vec<f64>,
    meta: DocumentMeta,
}

fn labels_cell(labels: &BTreeSet<String>) -> String {
    labels.iter().cloned().collect::<Vec<_>>().join("|")
}

fn labels_from_cell(cell: &str) -> BTreeSet<String> {
    cell.split('|')
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// CSV: `id,labels,v0_1..v0_D,v1_1..v1_D`. Labels are sorted and
/// pipe-joined inside one cell.
pub fn write_features_csv(path: &Path, rows: &[DocumentFeatures]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let dim = rows.first().map(|r| r.sensitivity.dim()).unwrap_or(0);
    let mut header = vec!["id".to_string(), "labels".to_string()];
    header.extend((1..=dim).map(|d| format!("v0_{d}")));
    header.extend((1..=dim).map(|d| format!("v1_{d}")));
    w.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.id.clone(), labels_cell(&row.labels)];
        record.extend(row.sensitivity.v0.iter().map(|&v| format_float(v)));
        record.extend(row.sensitivity.v1.iter().map(|&v| format_float(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_features_jsonl(path: &Path, rows: &[DocumentFeatures]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    for row in rows {
        let record = FeatureRecord {
            id: row.id.clone(),
            labels: row.labels.iter().cloned().collect(),
            v0: row.sensitivity.v0.clone(),
            v1: row.sensitivity.v1.clone(),
            meta: row.meta.clone(),
        };
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    }
    Ok(())
}

/// Load a feature file written by either writer; rows come back as
/// classifier input (id, labels, concatenated v0+v1 vector).
pub fn read_features(path: &Path) -> Result<Vec<FeatureRow>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") => read_features_jsonl(path),
        _ => read_features_csv(path),
    }
}

fn read_features_jsonl(path: &Path) -> Result<Vec<FeatureRow>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: FeatureRecord = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        let mut features = record.v0;
        features.extend_from_slice(&record.v1);
        rows.push(FeatureRow {
            id: record.id,
            labels: record.labels.into_iter().collect(),
            features,
        });
    }
    Ok(rows)
}

fn read_features_csv(path: &Path) -> Result<Vec<FeatureRow>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let header = reader.headers()?.clone();
    if header.len() < 2 || &header[0] != "id" || &header[1] != "labels" {
        bail!("{}: feature CSV must start with id,labels", path.display());
    }
    let mut rows = Vec::new();
    for (recno, record) in reader.records().enumerate() {
        let record = record?;
        let loc = format!("{} record {}", path.display(), recno + 1);
        if record.len() != header.len() {
            bail!("{loc}: {} fields, header has {}", record.len(), header.len());
        }
        let features: Vec<f64> = record
            .iter()
            .skip(2)
            .map(|cell| parse_float(cell, &loc))
            .collect::<Result<_>>()?;
        rows.push(FeatureRow {
            id: record[0].to_string(),
            labels: labels_from_cell(&record[1]),
            features,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ties_core::TiesSensitivity;

    fn sample_rows() -> Vec<DocumentFeatures> {
        let meta = DocumentMeta {
            tokens: 12,
            smoothed_len: 10,
            dim: 3,
            oov: 1,
            degenerate_dims: vec![],
        };
        vec![
            DocumentFeatures {
                id: "doc,with comma".to_string(),
                labels: ["b".to_string(), "a".to_string()].into_iter().collect(),
                sensitivity: TiesSensitivity {
                    v0: vec![0.5, 1.25, 0.0],
                    v1: vec![0.0, 0.125, 2.0],
                },
                meta: meta.clone(),
            },
            DocumentFeatures {
                id: "plain".to_string(),
                labels: BTreeSet::new(),
                sensitivity: TiesSensitivity {
                    v0: vec![1.0, 2.0, 3.0],
                    v1: vec![4.0, 5.0, 6.0],
                },
                meta,
            },
        ]
    }

    #[test]
    fn features_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        let rows = sample_rows();
        write_features_csv(&path, &rows).unwrap();
        let back = read_features(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].id, "doc,with comma");
        assert_eq!(
            back[0].labels,
            ["a".to_string(), "b".to_string()].into_iter().collect()
        );
        assert_eq!(back[0].features, vec![0.5, 1.25, 0.0, 0.0, 0.125, 2.0]);
        assert!(back[1].labels.is_empty());
        assert_eq!(back[1].features, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn features_jsonl_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.jsonl");
        let rows = sample_rows();
        write_features_jsonl(&path, &rows).unwrap();
        let back = read_features(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].features, vec![0.5, 1.25, 0.0, 0.0, 0.125, 2.0]);
        assert_eq!(back[1].id, "plain");
    }

    #[test]
    fn feature_csv_header_names_both_blocks() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        write_features_csv(&path, &sample_rows()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, "id,labels,v0_1,v0_2,v0_3,v1_1,v1_2,v1_3");
    }

    #[test]
    fn matrix_roundtrip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let m = DistanceMatrix::from_values(
            3,
            vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.5, 2.0, 1.5, 0.0],
        )
        .unwrap();
        write_matrix_csv(&path, &m).unwrap();
        let back = read_matrix_csv(&path).unwrap();
        assert_eq!(back.size(), 3);
        assert_eq!(back.get(0, 2), 2.0);

        std::fs::write(&path, "0,1\n1,0\n0,0\n").unwrap();
        assert!(read_matrix_csv(&path).is_err());
        std::fs::write(&path, "0,1\n1,0,3\n").unwrap();
        assert!(read_matrix_csv(&path).is_err());
    }

    #[test]
    fn diagram_roundtrip_keeps_inf() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        let diagram = PersistenceDiagram::from_points(
            3,
            vec![
                DiagramPoint {
                    hdim: HomologyDim::Zero,
                    birth: 0.0,
                    death: f64::INFINITY,
                },
                DiagramPoint {
                    hdim: HomologyDim::Zero,
                    birth: 0.0,
                    death: 0.75,
                },
                DiagramPoint {
                    hdim: HomologyDim::One,
                    birth: 1.0,
                    death: 2f64.sqrt(),
                },
            ],
        );
        write_diagram_csv(&path, &diagram).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("hdim,birth,death\n"));
        assert!(text.contains("0,0,inf"));
        let back = read_diagram_csv(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert!(back.iter().any(|p| p.death == f64::INFINITY));
        assert!(back
            .iter()
            .any(|p| p.hdim == HomologyDim::One && (p.death - 2f64.sqrt()).abs() < 1e-15));
    }

    #[test]
    fn shortest_roundtrip_float_formatting() {
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(f64::INFINITY), "inf");
        let v = 0.1 + 0.2;
        assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }
}
