//! CSV and JSON writers. Every float is printed with 17 significant digits
//! so values round-trip exactly; JSON carries the same fields as the CSV.

use std::io::Write;

use clap::ValueEnum;

use linnik_core::formula::{FormulaReport, ProbeSeries};
use linnik_core::zeros::ZetaZero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub const REPORT_HEADER: [&str; 10] =
    ["N", "k", "lhs", "m1", "m2", "m3", "m4", "residual", "normalized_residual", "slope_na"];

pub const PROBE_HEADER: [&str; 4] = ["index", "gamma", "term", "partial_sum"];

/// `d.ddddddddddddddddde±x`, or `NA` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NA".to_string()
    }
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt_num(x)
    } else {
        "null".to_string()
    }
}

pub struct Row {
    pub n: u64,
    pub values: [f64; 8],
    /// Fitted slope for scans; absent for single evaluations.
    pub slope: Option<f64>,
}

impl Row {
    pub fn from_report(r: &FormulaReport, slope: Option<Option<f64>>) -> Self {
        Self {
            n: r.params.n,
            values: [r.params.k, r.lhs, r.m1, r.m2, r.m3, r.m4, r.residual, r.normalized_residual],
            slope: slope.flatten(),
        }
    }
}

pub fn write_rows(w: &mut dyn Write, rows: &[Row], format: Format) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(REPORT_HEADER)?;
            for r in rows {
                let mut rec = vec![r.n.to_string()];
                rec.extend(r.values.iter().map(|&v| fmt_num(v)));
                rec.push(r.slope.map_or("NA".to_string(), fmt_num));
                c.write_record(&rec)?;
            }
            c.flush()?;
        }
        Format::Json => {
            writeln!(w, "[")?;
            for (i, r) in rows.iter().enumerate() {
                let mut fields = vec![format!("\"N\": {}", r.n)];
                for (name, v) in REPORT_HEADER[1..9].iter().zip(r.values) {
                    fields.push(format!("\"{name}\": {}", json_num(v)));
                }
                fields.push(format!("\"slope_na\": {}", r.slope.map_or("null".to_string(), json_num)));
                let sep = if i + 1 < rows.len() { "," } else { "" };
                writeln!(w, "  {{{}}}{sep}", fields.join(", "))?;
            }
            writeln!(w, "]")?;
        }
    }
    Ok(())
}

pub fn write_probe(w: &mut dyn Write, zeros: &[ZetaZero], s: &ProbeSeries, format: Format) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(PROBE_HEADER)?;
            for (i, z) in zeros.iter().enumerate() {
                c.write_record([(i + 1).to_string(), fmt_num(z.gamma), fmt_num(s.terms[i]), fmt_num(s.partial_sums[i])])?;
            }
            c.flush()?;
        }
        Format::Json => {
            writeln!(w, "[")?;
            for (i, z) in zeros.iter().enumerate() {
                let sep = if i + 1 < zeros.len() { "," } else { "" };
                writeln!(
                    w,
                    "  {{\"index\": {}, \"gamma\": {}, \"term\": {}, \"partial_sum\": {}}}{sep}",
                    i + 1,
                    json_num(z.gamma),
                    json_num(s.terms[i]),
                    json_num(s.partial_sums[i])
                )?;
            }
            writeln!(w, "]")?;
        }
    }
    Ok(())
}
