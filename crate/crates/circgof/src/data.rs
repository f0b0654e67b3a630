//! Dataset ingestion: the three embedded literature datasets, generic CSV
//! files, and the German Weather Service (DWD) hourly wind layout.

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::regression::PairedSample;
use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike, Weekday};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Degrees,
    Radians,
}

impl AngleUnit {
    fn to_angle(self, v: f64) -> Angle<f64> {
        match self {
            AngleUnit::Degrees => Angle::from_degrees(v),
            AngleUnit::Radians => Angle::new(v),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetDescriptor {
    pub id: &'static str,
    pub angle_unit: AngleUnit,
    pub columns: (&'static str, &'static str),
    pub provenance: &'static str,
}

/// Wind direction at 6 a.m. (covariate) and noon (response), in degrees,
/// 21 consecutive days at a Milwaukee weather station.
const WIND_X: [f64; 21] = [
    356.0, 97.2, 211.0, 232.0, 343.0, 292.0, 157.0, 302.0, 335.0, 302.0, 324.0, 84.6, 324.0,
    340.0, 157.0, 238.0, 254.0, 146.0, 232.0, 122.0, 329.0,
];
const WIND_Y: [f64; 21] = [
    119.0, 162.0, 221.0, 259.0, 270.0, 28.8, 97.2, 292.0, 39.6, 313.0, 94.2, 45.0, 47.0, 108.0,
    221.0, 270.0, 119.0, 248.0, 270.0, 45.0, 23.4,
];

/// Peak times of two consecutive diastolic blood pressure measurements
/// for 10 medical students, converted to angles in degrees.
const BP_X: [f64; 10] = [30.0, 15.0, 11.0, 4.0, 348.0, 347.0, 341.0, 333.0, 332.0, 285.0];
const BP_Y: [f64; 10] = [25.0, 5.0, 349.0, 358.0, 340.0, 347.0, 345.0, 331.0, 329.0, 287.0];

/// Phase angles (radians) of 38 circadian-related transcripts in heart
/// (covariate) and liver (response) tissue.
const GENE_X: [f64; 38] = [
    0.12, 0.27, 0.29, 0.3, 0.31, 0.34, 0.35, 0.58, 0.62, 1.6, 2.35, 2.62, 2.83, -3.06, -2.86,
    -2.77, -2.69, -2.57, -2.56, -2.45, -2.43, -2.37, -2.18, -2.16, -2.04, -1.61, -1.32, -1.22,
    -0.84, -0.77, -0.38, -0.36, -0.26, -0.19, -0.18, -0.13, -0.12, -0.02,
];
const GENE_Y: [f64; 38] = [
    0.61, 0.95, -2.85, 0.67, -0.13, 0.08, 2.67, 1.72, 1.45, 1.59, -2.51, -2.92, 1.42, 2.74, 2.88,
    -3.01, -2.69, 3.05, -2.35, 2.68, -2.86, -2.51, 2.69, -2.11, -1.48, -2.06, -2.63, -1.49,
    -0.83, 0.86, 0.26, 1.5, 1.03, 0.33, -1.15, -0.21, -0.55, 0.91,
];

pub const EMBEDDED_IDS: [&str; 3] = ["wind-milwaukee", "blood-pressure", "gene-peaks"];

pub fn embedded_descriptors() -> Vec<DatasetDescriptor> {
    vec![
        DatasetDescriptor {
            id: "wind-milwaukee",
            angle_unit: AngleUnit::Degrees,
            columns: ("wind_6am", "wind_noon"),
            provenance: "Johnson & Wehrly (1977), wind direction at a Milwaukee weather station",
        },
        DatasetDescriptor {
            id: "blood-pressure",
            angle_unit: AngleUnit::Degrees,
            columns: ("theta", "phi"),
            provenance: "Downs (1974), diastolic blood pressure peak times of 10 students",
        },
        DatasetDescriptor {
            id: "gene-peaks",
            angle_unit: AngleUnit::Radians,
            columns: ("heart", "liver"),
            provenance: "Liu et al. (2006), peak expression times of 38 circadian genes",
        },
    ]
}

/// Raw (unit-preserving) values of an embedded dataset.
pub fn embedded_raw(id: &str) -> Result<(Vec<f64>, Vec<f64>, AngleUnit)> {
    match id {
        "wind-milwaukee" => Ok((WIND_X.to_vec(), WIND_Y.to_vec(), AngleUnit::Degrees)),
        "blood-pressure" => Ok((BP_X.to_vec(), BP_Y.to_vec(), AngleUnit::Degrees)),
        "gene-peaks" => Ok((GENE_X.to_vec(), GENE_Y.to_vec(), AngleUnit::Radians)),
        _ => Err(Error::UnknownDataset(id.to_string())),
    }
}

pub fn embedded_sample(id: &str) -> Result<PairedSample> {
    let (x, y, unit) = embedded_raw(id)?;
    PairedSample::new(
        x.into_iter().map(|v| unit.to_angle(v)).collect(),
        y.into_iter().map(|v| unit.to_angle(v)).collect(),
    )
}

/// Read a paired angle sample from a CSV file with headers. Degrees are
/// converted to radians and all angles canonicalized to `[0, 2π)`.
pub fn ingest_csv(
    path: &Path,
    unit: AngleUnit,
    x_col: &str,
    y_col: &str,
) -> Result<PairedSample> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::FormatError(e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::FormatError(e.to_string()))?
        .clone();
    let col_index = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::ParseError {
            row: 0,
            col: name.to_string(),
            msg: "column not found in header".into(),
        })
    };
    let xi = col_index(x_col)?;
    let yi = col_index(y_col)?;

    let mut x = Vec::new();
    let mut y = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::ParseError {
            row: row + 1,
            col: String::new(),
            msg: e.to_string(),
        })?;
        let parse = |idx: usize, name: &str| -> Result<f64> {
            let raw = record.get(idx).ok_or_else(|| Error::ParseError {
                row: row + 1,
                col: name.to_string(),
                msg: "missing field".into(),
            })?;
            let v: f64 = raw.trim().parse().map_err(|_| Error::ParseError {
                row: row + 1,
                col: name.to_string(),
                msg: format!("not a number: {raw:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::ParseError {
                    row: row + 1,
                    col: name.to_string(),
                    msg: "angle is not finite".into(),
                });
            }
            if unit == AngleUnit::Degrees && v.abs() > 360.0 {
                return Err(Error::UnitError {
                    row: row + 1,
                    msg: format!("value {v} exceeds 360 in degree mode"),
                });
            }
            Ok(v)
        };
        x.push(unit.to_angle(parse(xi, x_col)?));
        y.push(unit.to_angle(parse(yi, y_col)?));
    }
    if x.is_empty() {
        return Err(Error::ParseError {
            row: 0,
            col: String::new(),
            msg: "no data rows".into(),
        });
    }
    PairedSample::new(x, y)
}

/// Read a single angle column from a CSV file.
pub fn ingest_csv_series(path: &Path, unit: AngleUnit, col: &str) -> Result<Vec<Angle<f64>>> {
    let sample = ingest_csv(path, unit, col, col)?;
    Ok(sample.x().to_vec())
}

/// Selection filter for DWD hourly wind files.
#[derive(Debug, Clone, Copy)]
pub struct DwdSelection {
    /// Hour of day (e.g. 6 or 12).
    pub hour: u32,
    pub weekday: Weekday,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

impl DwdSelection {
    pub fn new(hour: u32) -> Self {
        DwdSelection {
            hour,
            weekday: Weekday::Wed,
            from: None,
            to: None,
        }
    }
}

/// Parse a DWD hourly wind file (semicolon-separated,
/// `STATIONS_ID;MESS_DATUM;...;D;eor` with `MESS_DATUM` as `yyyymmddhh`
/// and `D` the direction in degrees), keeping the requested hour and
/// weekday and dropping missing-value sentinels (`-999`, `990`).
pub fn ingest_dwd_wind(path: &Path, selection: &DwdSelection) -> Result<Vec<(NaiveDateTime, Angle<f64>)>> {
    let content = std::fs::read_to_string(path)?;
    let mut lines = content.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::FormatError("empty DWD file".into()))?;
    let cols: Vec<&str> = header.split(';').map(str::trim).collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| c.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::FormatError(format!("DWD header lacks column {name}")))
    };
    let date_idx = find("MESS_DATUM")?;
    let dir_idx = find("D")?;

    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if fields.len() <= dir_idx.max(date_idx) {
            return Err(Error::FormatError(format!(
                "line {}: expected at least {} fields",
                lineno + 2,
                dir_idx.max(date_idx) + 1
            )));
        }
        let stamp = fields[date_idx];
        if stamp.len() != 10 {
            return Err(Error::FormatError(format!(
                "line {}: MESS_DATUM {:?} is not yyyymmddhh",
                lineno + 2,
                stamp
            )));
        }
        let ts = NaiveDateTime::parse_from_str(&format!("{stamp}00"), "%Y%m%d%H%M")
            .map_err(|e| Error::FormatError(format!("line {}: {e}", lineno + 2)))?;
        if ts.hour() != selection.hour || ts.weekday() != selection.weekday {
            continue;
        }
        if let Some(from) = selection.from {
            if ts.date() < from {
                continue;
            }
        }
        if let Some(to) = selection.to {
            if ts.date() > to {
                continue;
            }
        }
        let dir: f64 = fields[dir_idx].parse().map_err(|_| {
            Error::FormatError(format!(
                "line {}: direction {:?} is not a number",
                lineno + 2,
                fields[dir_idx]
            ))
        })?;
        if dir == -999.0 || dir == 990.0 {
            continue;
        }
        out.push((ts, Angle::from_degrees(dir)));
    }
    if out.is_empty() {
        return Err(Error::EmptySelection(format!(
            "no observations at hour {} on {:?} in {}",
            selection.hour,
            selection.weekday,
            path.display()
        )));
    }
    Ok(out)
}

/// Join two timestamped series on their common timestamps (both inputs
/// sorted by time, as DWD files are).
pub fn pair_series(
    x: &[(NaiveDateTime, Angle<f64>)],
    y: &[(NaiveDateTime, Angle<f64>)],
) -> Result<PairedSample> {
    let mut xi = x.iter().peekable();
    let mut yi = y.iter().peekable();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    while let (Some(&&(tx, ax)), Some(&&(ty, ay))) = (xi.peek(), yi.peek()) {
        match tx.date().cmp(&ty.date()) {
            std::cmp::Ordering::Less => {
                xi.next();
            }
            std::cmp::Ordering::Greater => {
                yi.next();
            }
            std::cmp::Ordering::Equal => {
                xs.push(ax);
                ys.push(ay);
                xi.next();
                yi.next();
            }
        }
    }
    if xs.is_empty() {
        return Err(Error::EmptySelection("no common timestamps".into()));
    }
    PairedSample::new(xs, ys)
}

/// Coordinates of a stack plot: each angle paired with its occurrence
/// index (1-based) among equal values, sorted by angle then index.
pub fn stackplot_data(angles: &[Angle<f64>]) -> Vec<(f64, u32)> {
    let mut sorted: Vec<f64> = angles.iter().map(|a| a.radians()).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::with_capacity(sorted.len());
    let mut idx = 0u32;
    let mut prev = f64::NAN;
    for v in sorted {
        idx = if v == prev { idx + 1 } else { 1 };
        prev = v;
        out.push((v, idx));
    }
    out
}
