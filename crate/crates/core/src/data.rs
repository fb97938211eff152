//! Collections of meta-analyses: CSV parsing, validation and recency subsets.
//!
//! The CSV schema is `analysis_id,study_id,estimate,std_err[,seq]`. Rows
//! sharing an `analysis_id` form one meta-analysis; analyses keep the order
//! in which their ids first appear. `seq` orders analyses by recency (larger
//! is more recent) and defaults to the row index.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// One study estimate within a meta-analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRecord {
    pub analysis_id: String,
    pub study_id: String,
    pub estimate: f64,
    pub std_err: f64,
    pub seq: i64,
}

/// One meta-analysis: its id and its studies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaAnalysis {
    pub id: String,
    pub studies: Vec<StudyRecord>,
}

impl MetaAnalysis {
    pub fn k(&self) -> usize {
        self.studies.len()
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.studies.iter().map(|s| s.estimate).collect()
    }

    pub fn std_errs(&self) -> Vec<f64> {
        self.studies.iter().map(|s| s.std_err).collect()
    }

    /// Recency key: the largest `seq` among its studies.
    pub fn recency(&self) -> i64 {
        self.studies.iter().map(|s| s.seq).max().unwrap_or(i64::MIN)
    }
}

/// An ordered collection of meta-analyses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaAnalysisCollection {
    analyses: Vec<MetaAnalysis>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub analysis_id: String,
    pub k: usize,
}

/// Per-analysis sizes, totals and warnings. Analyses with a single study
/// are accepted but flagged: they carry almost no heterogeneity information.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub analyses: Vec<AnalysisReport>,
    pub n_analyses: usize,
    pub n_studies: usize,
    pub warnings: Vec<String>,
}

const REQUIRED: [&str; 4] = ["analysis_id", "study_id", "estimate", "std_err"];

impl MetaAnalysisCollection {
    /// Build from records, grouping by `analysis_id` in first-appearance order.
    pub fn from_records(records: Vec<StudyRecord>) -> Result<Self> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut analyses: Vec<MetaAnalysis> = Vec::new();
        let mut seen: HashSet<(String, String)> = HashSet::new();
        for (row, r) in records.into_iter().enumerate() {
            check_record(&r, row + 1)?;
            if !seen.insert((r.analysis_id.clone(), r.study_id.clone())) {
                return Err(Error::Record {
                    row: row + 1,
                    message: format!(
                        "duplicate study '{}' in analysis '{}'",
                        r.study_id, r.analysis_id
                    ),
                });
            }
            let slot = *index.entry(r.analysis_id.clone()).or_insert_with(|| {
                analyses.push(MetaAnalysis {
                    id: r.analysis_id.clone(),
                    studies: Vec::new(),
                });
                analyses.len() - 1
            });
            analyses[slot].studies.push(r);
        }
        Ok(Self { analyses })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        parse_collection(&text)
    }

    pub fn analyses(&self) -> &[MetaAnalysis] {
        &self.analyses
    }

    /// Number of analyses `N`.
    pub fn len(&self) -> usize {
        self.analyses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.analyses.is_empty()
    }

    /// Per-analysis sizes `k_j`.
    pub fn sizes(&self) -> Vec<usize> {
        self.analyses.iter().map(MetaAnalysis::k).collect()
    }

    pub fn n_studies(&self) -> usize {
        self.analyses.iter().map(MetaAnalysis::k).sum()
    }

    pub fn records(&self) -> impl Iterator<Item = &StudyRecord> {
        self.analyses.iter().flat_map(|a| a.studies.iter())
    }

    /// Serialize to the input CSV schema (always including `seq`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("analysis_id,study_id,estimate,std_err,seq\n");
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for r in self.records() {
            w.write_record([
                r.analysis_id.as_str(),
                r.study_id.as_str(),
                &format!("{}", r.estimate),
                &format!("{}", r.std_err),
                &r.seq.to_string(),
            ])
            .expect("writing to memory");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"));
        out
    }
}

fn check_record(r: &StudyRecord, row: usize) -> Result<()> {
    if !r.estimate.is_finite() {
        return Err(Error::Record {
            row,
            message: format!("estimate must be finite, got {}", r.estimate),
        });
    }
    if !(r.std_err.is_finite() && r.std_err > 0.0) {
        return Err(Error::Record {
            row,
            message: format!("std_err must be positive and finite, got {}", r.std_err),
        });
    }
    Ok(())
}

/// Parse CSV text into a collection. Row numbers in errors count data rows
/// from 1 (the header is row 0).
pub fn parse_collection(text: &str) -> Result<MetaAnalysisCollection> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut column: HashMap<&str, usize> = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        match h {
            "analysis_id" | "study_id" | "estimate" | "std_err" | "seq" => {
                if column.insert(h, i).is_some() {
                    return Err(Error::Format(format!("duplicate column '{h}'")));
                }
            }
            other => return Err(Error::Format(format!("unknown column '{other}'"))),
        }
    }
    for name in REQUIRED {
        if !column.contains_key(name) {
            return Err(Error::Format(format!("missing column '{name}'")));
        }
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Record {
            row: row_no,
            message: e.to_string(),
        })?;
        let field = |name: &str| row.get(column[name]).unwrap_or("");
        let number = |name: &str| -> Result<f64> {
            field(name).parse::<f64>().map_err(|_| Error::Record {
                row: row_no,
                message: format!("{name} '{}' is not a number", field(name)),
            })
        };
        let seq = match column.get("seq") {
            Some(_) if !field("seq").is_empty() => {
                field("seq").parse::<i64>().map_err(|_| Error::Record {
                    row: row_no,
                    message: format!("seq '{}' is not an integer", field("seq")),
                })?
            }
            _ => row_no as i64,
        };
        let record = StudyRecord {
            analysis_id: field("analysis_id").to_string(),
            study_id: field("study_id").to_string(),
            estimate: number("estimate")?,
            std_err: number("std_err")?,
            seq,
        };
        if record.analysis_id.is_empty() {
            return Err(Error::Record {
                row: row_no,
                message: "empty analysis_id".into(),
            });
        }
        check_record(&record, row_no)?;
        records.push(record);
    }
    let collection = MetaAnalysisCollection::from_records(records)?;
    if collection.is_empty() {
        return Err(Error::Format("no data rows".into()));
    }
    Ok(collection)
}

pub fn validate_collection(c: &MetaAnalysisCollection) -> ValidationReport {
    let analyses: Vec<AnalysisReport> = c
        .analyses()
        .iter()
        .map(|a| AnalysisReport {
            analysis_id: a.id.clone(),
            k: a.k(),
        })
        .collect();
    let warnings = analyses
        .iter()
        .filter(|a| a.k == 1)
        .map(|a| {
            format!(
                "analysis '{}' has a single study and carries almost no heterogeneity information",
                a.analysis_id
            )
        })
        .collect();
    ValidationReport {
        n_analyses: c.len(),
        n_studies: c.n_studies(),
        analyses,
        warnings,
    }
}

/// The `n` most recent analyses (largest `seq`, ties broken by file order:
/// later wins), kept in their original order.
pub fn subset_recent(c: &MetaAnalysisCollection, n: usize) -> Result<MetaAnalysisCollection> {
    if n == 0 || n > c.len() {
        return Err(Error::Argument(format!(
            "subset size must be in 1..={}, got {n}",
            c.len()
        )));
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| {
        c.analyses[b]
            .recency()
            .cmp(&c.analyses[a].recency())
            .then(b.cmp(&a))
    });
    let mut keep: Vec<usize> = order[..n].to_vec();
    keep.sort_unstable();
    Ok(MetaAnalysisCollection {
        analyses: keep.into_iter().map(|i| c.analyses[i].clone()).collect(),
    })
}
