use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;
use underapprox::{Error, Rational, Result};

use crate::config::Format;

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// One command's result in every output format, plus the exit code it
/// should end with.
pub struct Report {
    pub human: String,
    pub json: Value,
    pub table: Option<Table>,
    pub exit: u8,
}

impl Report {
    pub fn new(human: String, json: impl Serialize) -> Result<Report> {
        Ok(Report {
            human,
            json: to_json(json)?,
            table: None,
            exit: 0,
        })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Human => Ok(format!("{}\n", self.human.trim_end())),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| Error::InvalidInput(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.csv(),
        }
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Io(e.to_string());
        match &self.table {
            Some(t) => {
                w.write_record(&t.headers).map_err(err)?;
                for row in &t.rows {
                    w.write_record(row).map_err(err)?;
                }
            }
            None => {
                w.write_record(["field", "value"]).map_err(err)?;
                if let Value::Object(map) = &self.json {
                    for (k, v) in map {
                        let v = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        w.write_record([k.as_str(), v.as_str()]).map_err(err)?;
                    }
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

pub fn to_json(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// `q` rounded half away from zero to `places` decimals.
pub fn decimal(q: &Rational, places: u32) -> String {
    let scale = BigInt::from(10).pow(places);
    let num = q.numer() * &scale;
    let den = q.denom();
    let abs = if num < BigInt::from(0) {
        -&num
    } else {
        num.clone()
    };
    let rounded = (abs * 2u32 + den) / (den * 2u32);
    let digits = rounded.to_string();
    let places = places as usize;
    let sign = if num < BigInt::from(0) && rounded != BigInt::from(0) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    format!("{sign}{int}.{frac}")
}

/// `p/q ≈ 0.xxx`.
pub fn exact_and_decimal(q: &Rational) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("{q} ≈ {}", decimal(q, 20))
    }
}
