use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use digital_anomaly::bounds::{AbcTriple, BoundReport};
use digital_anomaly::record::{ResultRecord, CSV_HEADER};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Table,
}

/// A line of output. Only `Record` rows are ever appended to `--out`.
pub enum Row {
    Record(ResultRecord),
    /// A quadruple that failed verification.
    Rejected {
        x: String,
        y: String,
        base: String,
        k: String,
    },
    Bounds(BoundReport),
    Abc(AbcTriple),
}

#[derive(Serialize)]
struct Verdict<'a> {
    x: &'a str,
    y: &'a str,
    base: &'a str,
    k: &'a str,
    verdict: bool,
}

#[derive(Serialize)]
struct AbcRow {
    a: String,
    b: String,
    c: String,
    rad_abc: String,
    quality: f64,
    hit: bool,
}

const BOUNDS_HEADER: &str = "base,u,smallest_prime,d_b,log_n_bound_case1,c_bound_case2,\
log_n_bound_case2,c_bound_case3,log_m_bound_case3";
const ABC_HEADER: &str = "a,b,c,rad_abc,quality,hit";

fn opt(v: Option<f64>) -> String {
    v.map(|f| f.to_string()).unwrap_or_default()
}

impl Row {
    fn header(&self) -> &'static str {
        match self {
            Row::Record(_) | Row::Rejected { .. } => CSV_HEADER,
            Row::Bounds(_) => BOUNDS_HEADER,
            Row::Abc(_) => ABC_HEADER,
        }
    }

    fn json(&self) -> String {
        match self {
            Row::Record(r) => r.to_json(),
            Row::Rejected { x, y, base, k } => serde_json::to_string(&Verdict {
                x,
                y,
                base,
                k,
                verdict: false,
            })
            .expect("verdict serializes"),
            Row::Bounds(b) => serde_json::to_string(b).expect("bound report serializes"),
            Row::Abc(t) => serde_json::to_string(&AbcRow {
                a: t.a.to_string(),
                b: t.b.to_string(),
                c: t.c.to_string(),
                rad_abc: t.rad_abc.to_string(),
                quality: t.quality,
                hit: t.is_hit(),
            })
            .expect("abc row serializes"),
        }
    }

    fn cells(&self) -> Vec<String> {
        match self {
            Row::Record(r) => r.to_csv().split(',').map(str::to_owned).collect(),
            Row::Rejected { x, y, base, k } => {
                let mut cells = vec![x.clone(), y.clone(), base.clone(), k.clone()];
                cells.extend(std::iter::repeat_n(String::new(), 5));
                cells.push("rejected".into());
                cells
            }
            Row::Bounds(b) => vec![
                b.base.clone(),
                b.u.to_string(),
                b.smallest_prime.clone(),
                b.d_b.to_string(),
                b.log_n_bound_case1.to_string(),
                b.c_bound_case2.to_string(),
                b.log_n_bound_case2.to_string(),
                opt(b.c_bound_case3),
                opt(b.log_m_bound_case3),
            ],
            Row::Abc(t) => vec![
                t.a.to_string(),
                t.b.to_string(),
                t.c.to_string(),
                t.rad_abc.to_string(),
                t.quality.to_string(),
                t.is_hit().to_string(),
            ],
        }
    }
}

pub struct Output {
    format: Format,
    stdout: BufWriter<io::Stdout>,
    results: Option<BufWriter<File>>,
    header: Option<&'static str>,
    table: Vec<Vec<String>>,
}

impl Output {
    pub fn new(format: Format, out: Option<&Path>) -> io::Result<Self> {
        let results = out
            .map(|p| OpenOptions::new().create(true).append(true).open(p))
            .transpose()?
            .map(BufWriter::new);
        Ok(Self {
            format,
            stdout: BufWriter::new(io::stdout()),
            results,
            header: None,
            table: Vec::new(),
        })
    }

    pub fn emit(&mut self, row: Row) -> io::Result<()> {
        if let (Row::Record(r), Some(file)) = (&row, self.results.as_mut()) {
            writeln!(file, "{}", r.to_json())?;
        }
        match self.format {
            Format::Jsonl => writeln!(self.stdout, "{}", row.json())?,
            Format::Csv => {
                if self.header.is_none() {
                    self.header = Some(row.header());
                    writeln!(self.stdout, "{}", row.header())?;
                }
                writeln!(self.stdout, "{}", row.cells().join(","))?;
            }
            Format::Table => {
                self.header.get_or_insert(row.header());
                self.table.push(row.cells());
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        if self.format == Format::Table {
            if let Some(header) = self.header {
                let mut rows = vec![header.split(',').map(str::to_owned).collect::<Vec<_>>()];
                rows.append(&mut self.table);
                let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
                let widths: Vec<usize> = (0..cols)
                    .map(|c| {
                        rows.iter()
                            .filter_map(|r| r.get(c))
                            .map(String::len)
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                for r in &rows {
                    let line = r
                        .iter()
                        .zip(&widths)
                        .map(|(cell, w)| format!("{cell:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ");
                    writeln!(self.stdout, "{}", line.trim_end())?;
                }
            }
        }
        self.stdout.flush()?;
        if let Some(mut f) = self.results {
            f.flush()?;
        }
        Ok(())
    }
}
