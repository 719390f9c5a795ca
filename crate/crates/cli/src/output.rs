use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::args::Format;
use crate::error::{CliError, CliResult};

/// Column-oriented numeric output with `#` metadata lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(meta: Vec<String>, header: &[&str]) -> Self {
        Self {
            meta,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> CliResult<()> {
        for m in &self.meta {
            writeln!(w, "# {m}")?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(|x| num(*x)))?;
        }
        csv.flush()?;
        Ok(())
    }

    /// Line plot of every column against the first.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const PAD: f64 = 50.0;
        const COLORS: [&str; 6] = ["#1b6ca8", "#d1495b", "#2e933c", "#edae49", "#6a4c93", "#333333"];

        let xs: Vec<f64> = self.rows.iter().map(|r| r[0]).collect();
        let finite = |v: &&f64| v.is_finite();
        let span = |it: &mut dyn Iterator<Item = f64>| {
            it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        let (x0, x1) = span(&mut xs.iter().filter(finite).copied());
        let (y0, y1) = span(&mut self.rows.iter().flat_map(|r| r[1..].iter()).filter(finite).copied());
        let widen = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        let (x0, x1) = widen(x0, x1);
        let (y0, y1) = widen(y0.min(0.0), y1);
        let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        for m in &self.meta {
            let _ = writeln!(s, "<!-- {} -->", m.replace("--", "- -"));
        }
        let _ = writeln!(
            s,
            r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let _ = writeln!(s, r#"<text x="{PAD}" y="{}">{x0:.3}</text>"#, H - PAD + 16.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{x1:.3}</text>"#, W - PAD, H - PAD + 16.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y0:.3}</text>"#, PAD - 4.0, H - PAD);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y1:.3}</text>"#, PAD - 4.0, PAD + 4.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(&self.header[0]));
        for (k, name) in self.header.iter().enumerate().skip(1) {
            let color = COLORS[(k - 1) % COLORS.len()];
            let pts: Vec<String> = self
                .rows
                .iter()
                .filter(|r| r[0].is_finite() && r[k].is_finite())
                .map(|r| format!("{:.2},{:.2}", px(r[0]), py(r[k])))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                W - PAD - 140.0,
                PAD + 16.0 * k as f64,
                escape(name)
            );
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn emit(&self, path: Option<&Path>, format: Format) -> CliResult<()> {
        let mut w = sink(path)?;
        match format {
            Format::Csv => self.write_csv(&mut w)?,
            Format::Svg => w.write_all(self.to_svg().as_bytes())?,
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip form, switching to exponent notation for tiny values.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Key/value report rows, written as a two-column CSV.
pub fn write_report<W: Write>(mut w: W, meta: &[String], rows: &[(&str, f64)]) -> CliResult<()> {
    for m in meta {
        writeln!(w, "# {m}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["key", "value"])?;
    for (k, v) in rows {
        csv.write_record([k.to_string(), num(*v)])?;
    }
    csv.flush()?;
    Ok(())
}

/// Reads a table written by [`Table::write_csv`].
pub fn read_csv(text: &str) -> CliResult<Table> {
    let meta = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim().to_owned())
        .collect();
    let body: String = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .flat_map(|l| [l, "\n"])
        .collect();
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let header = rd.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::usage(format!("bad number in csv: {e}")))?;
        rows.push(row);
    }
    Ok(Table { meta, header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(vec!["a = 1".into()], &["x", "y"]);
        t.push(vec![0.0, 0.1]);
        t.push(vec![1.0, -2.5e-17]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# a = 1\nx,y\n0.0,0.1\n"));
        assert_eq!(read_csv(&text).unwrap(), t);
        assert_eq!(t.column("y").unwrap(), vec![0.1, -2.5e-17]);
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let mut t = Table::new(vec![], &["N", "a", "b<c"]);
        for i in 0..5 {
            let x = i as f64;
            t.push(vec![x, x * x, f64::NAN]);
        }
        let svg = t.to_svg();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("b&lt;c"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
