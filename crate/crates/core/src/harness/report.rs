//! Tables written as CSV or JSON Lines.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{CriteriaReport, HarnessError, StateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Csv,
    Jsonl,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Jsonl => "jsonl",
        }
    }
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "jsonl" => Ok(ReportFormat::Jsonl),
            _ => Err(format!("unknown report format `{s}` (csv, jsonl)")),
        }
    }
}

/// Flat view of a [`CriteriaReport`], one CSV row per mask configuration.
/// Values with a `_sem` partner are subset means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub state: StateKind,
    pub seed: String,
    pub gap_offset: Option<i64>,
    pub gap_width: Option<usize>,
    pub splitting_ratio: f64,
    pub atoms_a: f64,
    pub atoms_b: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub noise_var_a: f64,
    pub noise_var_b: f64,
    pub e_ent: f64,
    pub e_ent_sem: f64,
    pub e_epr_ab: f64,
    pub e_epr_ab_sem: f64,
    pub e_epr_ba: f64,
    pub e_epr_ba_sem: f64,
    pub product_a: f64,
    pub product_a_sem: f64,
    pub product_b: f64,
    pub product_b_sem: f64,
    pub floor_epr_ab: f64,
    pub floor_epr_ba: f64,
    pub floor_ent: f64,
    pub gain_z_ab: f64,
    pub gain_y_ab: f64,
    pub gain_z_ba: f64,
    pub gain_y_ba: f64,
    pub sx_a: f64,
    pub sx_b: f64,
    pub var_z_raw_ab: f64,
    pub var_z_ab: f64,
    pub var_y_raw_ab: f64,
    pub var_y_ab: f64,
    pub wineland_db: Option<f64>,
    pub subsets: usize,
    pub fallbacks: usize,
    pub negative_variances: usize,
    pub subtract_noise: bool,
}

impl From<&CriteriaReport> for ReportRow {
    fn from(r: &CriteriaReport) -> Self {
        let (gz_ab, gy_ab) = r.mean_gains_ab();
        let (gz_ba, gy_ba) = r.mean_gains_ba();
        let (sx_a, sx_b) = r.mean_sx();
        let [vzr, vz, vyr, vy] = r.mean_variances_ab();
        ReportRow {
            label: r.label.clone(),
            state: r.state,
            seed: r.seed.to_string(),
            gap_offset: r.gap_offset(),
            gap_width: r.gap_width(),
            splitting_ratio: r.splitting_ratio,
            atoms_a: r.atoms_a,
            atoms_b: r.atoms_b,
            eta_a: r.eta_a,
            eta_b: r.eta_b,
            noise_var_a: r.noise_var_a,
            noise_var_b: r.noise_var_b,
            e_ent: r.e_ent.mean,
            e_ent_sem: r.e_ent.sem,
            e_epr_ab: r.e_epr_ab.mean,
            e_epr_ab_sem: r.e_epr_ab.sem,
            e_epr_ba: r.e_epr_ba.mean,
            e_epr_ba_sem: r.e_epr_ba.sem,
            product_a: r.product_a.mean,
            product_a_sem: r.product_a.sem,
            product_b: r.product_b.mean,
            product_b_sem: r.product_b.sem,
            floor_epr_ab: r.crosstalk.epr_ab,
            floor_epr_ba: r.crosstalk.epr_ba,
            floor_ent: r.crosstalk.ent,
            gain_z_ab: gz_ab,
            gain_y_ab: gy_ab,
            gain_z_ba: gz_ba,
            gain_y_ba: gy_ba,
            sx_a,
            sx_b,
            var_z_raw_ab: vzr,
            var_z_ab: vz,
            var_y_raw_ab: vyr,
            var_y_ab: vy,
            wineland_db: r.wineland_db,
            subsets: r.subsets.len(),
            fallbacks: r.fallbacks,
            negative_variances: r.negative_variances,
            subtract_noise: r.subtract_noise,
        }
    }
}

/// Writes `rows` to `path`; the CSV header names the columns.
pub fn write_table<T: Serialize>(rows: &[T], format: ReportFormat, path: &Path) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    }
    let ser = |e: &dyn std::fmt::Display| HarnessError::Serialize(e.to_string());
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(io) => HarnessError::Io {
                    path: path.to_owned(),
                    source: io,
                },
                other => HarnessError::Serialize(format!("{other:?}")),
            })?;
            for r in rows {
                w.serialize(r).map_err(|e| ser(&e))?;
            }
            w.flush().map_err(HarnessError::io(path))?;
        }
        ReportFormat::Jsonl => {
            let file = fs::File::create(path).map_err(HarnessError::io(path))?;
            let mut w = BufWriter::new(file);
            for r in rows {
                serde_json::to_writer(&mut w, r).map_err(|e| ser(&e))?;
                w.write_all(b"\n").map_err(HarnessError::io(path))?;
            }
            w.flush().map_err(HarnessError::io(path))?;
        }
    }
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, HarnessError> {
    let file = fs::File::open(path).map_err(HarnessError::io(path))?;
    BufReader::new(file)
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|(i, line)| {
            let line = line.map_err(HarnessError::io(path))?;
            serde_json::from_str(&line)
                .map_err(|e| HarnessError::Corrupt(format!("{} line {}: {e}", path.display(), i + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Row {
        name: String,
        value: f64,
    }

    #[test]
    fn empty_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let rows: Vec<Row> = vec![];
        assert!(matches!(
            write_table(&rows, ReportFormat::Csv, &dir.path().join("x.csv")),
            Err(HarnessError::EmptyReport)
        ));
    }

    #[test]
    fn csv_quoting_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![
            Row { name: "plain".into(), value: 1.5 },
            Row { name: "has, comma and \"quote\"\nnewline".into(), value: -2.0 },
        ];
        write_table(&rows, ReportFormat::Csv, &path).unwrap();
        let back: Vec<Row> = csv::Reader::from_path(&path)
            .unwrap()
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(back, rows);
        let j = dir.path().join("t.jsonl");
        write_table(&rows, ReportFormat::Jsonl, &j).unwrap();
        assert_eq!(read_jsonl::<Row>(&j).unwrap(), rows);
    }
}
