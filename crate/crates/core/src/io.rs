//! CSV and JSON encodings of spectra and dispersion tables.
//!
//! Spectrum CSV files start with a `# config_sha256=<hex>` line followed by the
//! columns `k_per_m, omega_rad_per_s, lambda_nm, beta_sq, n_photons, converged`.
//! Floats are written with 17 significant digits so identical runs give identical bytes.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{SpectrumMetadata, SpectrumRow};
use crate::units::{m_to_nm, nm_to_m};

pub const SPECTRUM_COLUMNS: [&str; 6] = [
    "k_per_m",
    "omega_rad_per_s",
    "lambda_nm",
    "beta_sq",
    "n_photons",
    "converged",
];

pub const DISPERSION_COLUMNS: [&str; 8] = [
    "lambda_nm",
    "omega_rad_per_s",
    "eps_real",
    "eps_imag",
    "n_real",
    "n_imag",
    "d_real",
    "d_imag",
];

const HASH_PREFIX: &str = "# config_sha256=";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_spectrum_csv<W: Write>(out: W, rows: &[SpectrumRow], config_hash: &str) -> Result<()> {
    let mut out = out;
    writeln!(out, "{HASH_PREFIX}{config_hash}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SPECTRUM_COLUMNS)?;
    for r in rows {
        w.write_record([
            num(r.k),
            num(r.omega),
            num(m_to_nm(r.lambda)),
            num(r.beta_sq),
            num(r.n_photons),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Spectrum rows read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub config_hash: Option<String>,
    pub rows: Vec<SpectrumRow>,
}

fn parse_num(field: &str, line: usize, column: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("`{field}` is not a number"),
    })
}

pub fn read_spectrum_csv<R: BufRead>(mut input: R) -> Result<SpectrumTable> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let (config_hash, header_line, offset) = match first.trim_end().strip_prefix(HASH_PREFIX) {
        Some(h) => (Some(h.to_string()), None, 1),
        None => (None, Some(first), 0),
    };
    let rest = header_line.unwrap_or_default().into_bytes();
    let reader = std::io::Cursor::new(rest).chain(input);
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);

    let headers = r.headers()?.clone();
    let index = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Format(format!("missing column `{name}`")))
    };
    let cols: Vec<usize> = SPECTRUM_COLUMNS
        .iter()
        .map(|c| index(c))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let line = i + 2 + offset;
        let field = |j: usize| record.get(cols[j]).unwrap_or("");
        let converged = match field(5).trim() {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::Parse {
                    line,
                    column: cols[5] + 1,
                    message: format!("`{other}` is not a boolean"),
                })
            }
        };
        rows.push(SpectrumRow {
            k: parse_num(field(0), line, cols[0] + 1)?,
            omega: parse_num(field(1), line, cols[1] + 1)?,
            lambda: nm_to_m(parse_num(field(2), line, cols[2] + 1)?),
            beta_sq: parse_num(field(3), line, cols[3] + 1)?,
            n_photons: parse_num(field(4), line, cols[4] + 1)?,
            converged,
        });
    }
    Ok(SpectrumTable { config_hash, rows })
}

/// Optical constants at one wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionRow {
    pub lambda: f64,
    pub omega: f64,
    pub eps_real: f64,
    pub eps_imag: f64,
    pub n_real: f64,
    pub n_imag: f64,
    pub d_real: f64,
    pub d_imag: f64,
}

pub fn write_dispersion_csv<W: Write>(out: W, rows: &[DispersionRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DISPERSION_COLUMNS)?;
    for r in rows {
        w.write_record(
            [
                m_to_nm(r.lambda),
                r.omega,
                r.eps_real,
                r.eps_imag,
                r.n_real,
                r.n_imag,
                r.d_real,
                r.d_imag,
            ]
            .map(num),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Run description written next to (or instead of) the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config_sha256: String,
    /// Explicit configuration document that reproduces the run.
    pub config: String,
    pub defaults_applied: Vec<String>,
    pub runs: Vec<RunReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub metadata: SpectrumMetadata,
    pub failures: usize,
    pub peak: Option<SpectrumRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<SpectrumRow>>,
}

pub fn write_report<W: Write>(mut out: W, report: &Report) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_report<R: std::io::Read>(input: R) -> Result<Report> {
    Ok(serde_json::from_reader(input)?)
}
