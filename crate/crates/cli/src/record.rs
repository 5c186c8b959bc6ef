//! The row type shared by `eval`, `const` and `table`, with its JSON and
//! CSV encodings.

use std::io::{Read, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const CSV_HEADER: [&str; 8] = ["n", "p", "q", "r", "c_p_x", "prefactor", "bound", "method"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub n: usize,
    #[serde(serialize_with = "ser_p", deserialize_with = "de_p")]
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub c_p_x: f64,
    pub prefactor: f64,
    pub bound: f64,
    pub method: String,
}

fn ser_p<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PField {
    Num(f64),
    Text(String),
}

fn de_p<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    match PField::deserialize(d)? {
        PField::Num(v) => Ok(v),
        PField::Text(t) => parse_p(&t).map_err(serde::de::Error::custom),
    }
}

/// Parses p as a number or the literal `inf`.
pub fn parse_p(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("invalid p `{s}`: expected a number or `inf`"))?;
    if !v.is_finite() {
        return Err(format!("invalid p `{s}`: spell infinity as `inf`"));
    }
    Ok(v)
}

/// x rounded to 15 significant digits, printed in its shortest form.
pub fn fmt_sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("valid float text");
    let a = rounded.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        fmt_sig15(p)
    }
}

impl OutputRecord {
    fn csv_fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            fmt_p(self.p),
            fmt_sig15(self.q),
            fmt_sig15(self.r),
            fmt_sig15(self.c_p_x),
            fmt_sig15(self.prefactor),
            fmt_sig15(self.bound),
            self.method.clone(),
        ]
    }
}

pub fn write_json<W: Write>(out: &mut W, records: &[OutputRecord]) -> std::io::Result<()> {
    let text = if records.len() == 1 {
        serde_json::to_string(&records[0])
    } else {
        serde_json::to_string(records)
    }
    .map_err(std::io::Error::other)?;
    writeln!(out, "{text}")
}

pub fn write_csv<W: Write>(out: W, records: &[OutputRecord]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in records {
        w.write_record(rec.csv_fields())?;
    }
    w.flush()
}

/// Reads records written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<OutputRecord>, String> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(format!("unexpected CSV header {header:?}"));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    rdr.records()
        .map(|row| {
            let row = row.map_err(|e| e.to_string())?;
            Ok(OutputRecord {
                n: row[0].parse().map_err(|e| format!("`{}`: {e}", &row[0]))?,
                p: parse_p(&row[1])?,
                q: num(&row[2])?,
                r: num(&row[3])?,
                c_p_x: num(&row[4])?,
                prefactor: num(&row[5])?,
                bound: num(&row[6])?,
                method: row[7].to_string(),
            })
        })
        .collect()
}

/// Reads the output of [`write_json`]: one object or an array.
pub fn read_json(text: &str) -> Result<Vec<OutputRecord>, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if value.is_array() {
        serde_json::from_value(value).map_err(|e| e.to_string())
    } else {
        serde_json::from_value(value)
            .map(|r| vec![r])
            .map_err(|e| e.to_string())
    }
}
