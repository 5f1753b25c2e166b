//! CSV persistence for tomography acquisitions.
//!
//! One row per analyzer setting:
//!
//! `setting_id, qwp_s, hwp_s, qwp_i, hwp_i, n_pulses, raw, singles_s,
//!  singles_i, accidentals, corrected`
//!
//! Angles are degrees. `corrected` must equal `raw - accidentals`; rows
//! that violate that identity are rejected on ingestion so externally
//! produced files cannot silently change the subtraction convention.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::tomo::counts::CountRecord;
use crate::tomo::settings::AnalyzerSetting;

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    setting_id: usize,
    qwp_s: f64,
    hwp_s: f64,
    qwp_i: f64,
    hwp_i: f64,
    n_pulses: u64,
    raw: u64,
    singles_s: u64,
    singles_i: u64,
    accidentals: f64,
    corrected: f64,
}

/// Write paired records and settings as CSV with a header row.
pub fn write_count_records<W: Write>(
    writer: W,
    records: &[CountRecord],
    settings: &[AnalyzerSetting],
) -> Result<()> {
    if records.len() != settings.len() {
        return Err(CoreError::BadCountRecords {
            context: "records and settings differ in length",
        });
    }
    let mut out = csv::Writer::from_writer(writer);
    for (record, setting) in records.iter().zip(settings) {
        out.serialize(Row {
            setting_id: record.setting_id,
            qwp_s: setting.qwp_signal_deg,
            hwp_s: setting.hwp_signal_deg,
            qwp_i: setting.qwp_idler_deg,
            hwp_i: setting.hwp_idler_deg,
            n_pulses: record.n_pulses,
            raw: record.coincidences_raw,
            singles_s: record.singles_signal,
            singles_i: record.singles_idler,
            accidentals: record.accidentals_est,
            corrected: record.coincidences_corrected,
        })?;
    }
    out.flush().map_err(CoreError::Io)?;
    Ok(())
}

/// Read an acquisition back; settings come from the angle columns.
pub fn read_count_records<R: Read>(reader: R) -> Result<(Vec<CountRecord>, Vec<AnalyzerSetting>)> {
    let mut input = csv::Reader::from_reader(reader);
    let mut records = Vec::new();
    let mut settings = Vec::new();
    for row in input.deserialize() {
        let row: Row = row?;
        if row.n_pulses == 0 {
            return Err(CoreError::BadCountRecords {
                context: "n_pulses must be positive",
            });
        }
        if !(row.accidentals.is_finite() && row.accidentals >= 0.0) {
            return Err(CoreError::BadCountRecords {
                context: "accidentals must be finite and non-negative",
            });
        }
        let implied = row.raw as f64 - row.accidentals;
        let tol = 1e-6 * implied.abs().max(1.0);
        if !row.corrected.is_finite() || (row.corrected - implied).abs() > tol {
            return Err(CoreError::BadCountRecords {
                context: "corrected column must equal raw - accidentals",
            });
        }
        settings.push(AnalyzerSetting::new(
            row.qwp_s, row.hwp_s, row.qwp_i, row.hwp_i,
        )?);
        records.push(CountRecord {
            setting_id: row.setting_id,
            n_pulses: row.n_pulses,
            coincidences_raw: row.raw,
            singles_signal: row.singles_s,
            singles_idler: row.singles_i,
            accidentals_est: row.accidentals,
            coincidences_corrected: row.corrected,
        });
    }
    if records.is_empty() {
        return Err(CoreError::BadCountRecords {
            context: "file contains no data rows",
        });
    }
    Ok((records, settings))
}

pub fn write_count_records_file<P: AsRef<Path>>(
    path: P,
    records: &[CountRecord],
    settings: &[AnalyzerSetting],
) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_count_records(file, records, settings)
}

pub fn read_count_records_file<P: AsRef<Path>>(
    path: P,
) -> Result<(Vec<CountRecord>, Vec<AnalyzerSetting>)> {
    let file = std::fs::File::open(path)?;
    read_count_records(file)
}
