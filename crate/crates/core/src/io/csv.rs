use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pipeline::{ResponseRecord, Roi};

pub const HEADER: &str = "t,response_opplod,response_dlgmd,roi_x,roi_y,roi_w,roi_h,warm_up";

/// One CSV line; absent columns are written as empty cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub t: usize,
    pub response_opplod: Option<f64>,
    pub response_dlgmd: Option<f64>,
    pub roi: Option<Roi>,
    pub warm_up: bool,
}

impl From<&ResponseRecord> for CsvRow {
    fn from(r: &ResponseRecord) -> Self {
        CsvRow {
            t: r.t,
            response_opplod: Some(r.response),
            response_dlgmd: None,
            roi: r.roi,
            warm_up: r.warm_up,
        }
    }
}

/// Zips per-model record lists frame by frame.
pub fn merge_rows(
    opplod: Option<&[ResponseRecord]>,
    dlgmd: Option<&[ResponseRecord]>,
) -> Result<Vec<CsvRow>> {
    match (opplod, dlgmd) {
        (None, None) => Err(Error::invalid_input("no records to merge")),
        (Some(o), None) => Ok(o.iter().map(CsvRow::from).collect()),
        (None, Some(d)) => Ok(d
            .iter()
            .map(|r| CsvRow {
                t: r.t,
                response_opplod: None,
                response_dlgmd: Some(r.response),
                roi: None,
                warm_up: r.warm_up,
            })
            .collect()),
        (Some(o), Some(d)) => {
            if o.len() != d.len() {
                return Err(Error::invalid_input(format!(
                    "record counts differ: {} vs {}",
                    o.len(),
                    d.len()
                )));
            }
            o.iter()
                .zip(d)
                .map(|(a, b)| {
                    if a.t != b.t {
                        return Err(Error::invalid_input(format!(
                            "frame indices differ: {} vs {}",
                            a.t, b.t
                        )));
                    }
                    Ok(CsvRow {
                        response_dlgmd: Some(b.response),
                        warm_up: a.warm_up || b.warm_up,
                        ..CsvRow::from(a)
                    })
                })
                .collect()
        }
    }
}

/// Divides each response column by its own maximum (columns that are all
/// zero are left alone).
pub fn normalize(rows: &mut [CsvRow]) {
    fn column(rows: &mut [CsvRow], get: impl Fn(&mut CsvRow) -> &mut Option<f64>) {
        let max = rows.iter_mut().filter_map(|r| *get(r)).fold(0.0, f64::max);
        if max > 0.0 {
            for r in rows.iter_mut() {
                if let Some(v) = get(r) {
                    *v /= max;
                }
            }
        }
    }
    column(rows, |r| &mut r.response_opplod);
    column(rows, |r| &mut r.response_dlgmd);
}

/// Shortest rendering with 9 significant digits, like C's `%.9g`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_csv(rows: &[CsvRow], mut out: impl Write) -> std::io::Result<()> {
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(HEADER);
    text.push('\n');
    let opt = |v: Option<f64>| v.map(format_sig9).unwrap_or_default();
    for r in rows {
        let (x, y, w, h) = match r.roi {
            Some(roi) => (
                roi.x.to_string(),
                roi.y.to_string(),
                roi.w.to_string(),
                roi.h.to_string(),
            ),
            None => Default::default(),
        };
        text.push_str(&format!(
            "{},{},{},{x},{y},{w},{h},{}\n",
            r.t,
            opt(r.response_opplod),
            opt(r.response_dlgmd),
            u8::from(r.warm_up)
        ));
    }
    out.write_all(text.as_bytes())
}

pub fn save_rows(rows: &[CsvRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::invalid_input("no records to write"));
    }
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Writes OppLoD records (the baseline column stays empty).
pub fn save_csv(records: &[ResponseRecord], path: &Path) -> Result<()> {
    let rows: Vec<CsvRow> = records.iter().map(CsvRow::from).collect();
    save_rows(&rows, path)
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.split('\n');
    if lines.next() != Some(HEADER) {
        return Err(Error::invalid_input("missing or unexpected CSV header"));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| Error::invalid_input(format!("CSV line {}: {what}", i + 2));
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 8 {
            return Err(bad("expected 8 cells"));
        }
        let float = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad("bad number"))
            }
        };
        let int = |s: &str| -> Result<Option<usize>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad("bad integer"))
            }
        };
        let roi = match (
            int(cells[3])?,
            int(cells[4])?,
            int(cells[5])?,
            int(cells[6])?,
        ) {
            (Some(x), Some(y), Some(w), Some(h)) => Some(Roi { x, y, w, h }),
            (None, None, None, None) => None,
            _ => return Err(bad("partial ROI")),
        };
        rows.push(CsvRow {
            t: int(cells[0])?.ok_or_else(|| bad("missing t"))?,
            response_opplod: float(cells[1])?,
            response_dlgmd: float(cells[2])?,
            roi,
            warm_up: match cells[7] {
                "0" => false,
                "1" => true,
                _ => return Err(bad("warm_up must be 0 or 1")),
            },
        });
    }
    Ok(rows)
}
