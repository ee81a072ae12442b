//! Rendering of records as JSON lines, CSV or an aligned text table.

use std::io::{self, Write};

use clap::ValueEnum;
use cubesum_core::record::OutputRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Column names for the terms: `x,y,z` plus `w` when any record has four.
fn term_columns(records: &[OutputRecord]) -> Vec<&'static str> {
    let width = records.iter().map(|r| r.terms.len()).max().unwrap_or(3);
    ["x", "y", "z", "w"][..width.max(3)].to_vec()
}

pub fn write_records(
    out: &mut impl Write,
    format: Format,
    records: &[OutputRecord],
) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let cols = term_columns(records);
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header = vec!["n"];
            header.extend(&cols);
            header.extend(["g", "sign_class", "source"]);
            w.write_record(&header).map_err(io::Error::other)?;
            for r in records {
                let mut row = vec![r.n.to_string()];
                for i in 0..cols.len() {
                    row.push(r.terms.get(i).cloned().unwrap_or_default());
                }
                row.push(r.g.clone());
                row.push(r.sign_class.to_string());
                row.push(r.provenance.to_string());
                w.write_record(&row).map_err(io::Error::other)?;
            }
            w.flush()?;
        }
        Format::Table => {
            let rows: Vec<[String; 4]> = records
                .iter()
                .map(|r| {
                    [
                        r.n.to_string(),
                        format!("({})", r.terms.join(", ")),
                        r.g.clone(),
                        format!("{} {}", r.sign_class, r.provenance),
                    ]
                })
                .collect();
            write_table(out, &["n", "terms", "g", "class / source"], &rows)?;
        }
    }
    Ok(())
}

pub fn write_table<const N: usize>(
    out: &mut impl Write,
    header: &[&str; N],
    rows: &[[String; N]],
) -> io::Result<()> {
    let mut widths = header.map(str::len);
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |out: &mut dyn Write, cells: &[&str]| -> io::Result<()> {
        let parts: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", parts.join("  ").trim_end())
    };
    line(out, header)?;
    for r in rows {
        let cells: Vec<&str> = r.iter().map(String::as_str).collect();
        line(out, &cells)?;
    }
    Ok(())
}
