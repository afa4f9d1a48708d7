//! CSV export of a run trace: one file per panel kind plus a long-format
//! file for generic plotting tools. Numbers use 9 significant digits.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::error::ExportError;
use crate::features::Dimension;
use crate::scalar::Real;

use super::RunTrace;

pub const PLOT_FILE: &str = "plot_data.csv";

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed,
/// exponent form only for very small or very large magnitudes.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct Table {
    path: PathBuf,
    out: csv::Writer<BufWriter<File>>,
}

impl Table {
    fn create(dir: &Path, name: &str, header: &[String]) -> Result<Self, ExportError> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|source| ExportError::Io {
            path: path.clone(),
            source,
        })?;
        let out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(BufWriter::new(file));
        let mut t = Self { path, out };
        t.row(header.iter().cloned())?;
        Ok(t)
    }

    fn row(&mut self, fields: impl IntoIterator<Item = String>) -> Result<(), ExportError> {
        self.out.write_record(fields.into_iter().collect::<Vec<_>>()).map_err(|e| self.err(e.into()))
    }

    fn numbers<T: Real>(&mut self, time: T, values: &[T]) -> Result<(), ExportError> {
        let fields = std::iter::once(time)
            .chain(values.iter().copied())
            .map(|v| format_number(v.as_f64()));
        self.row(fields)
    }

    fn finish(mut self) -> Result<PathBuf, ExportError> {
        self.out.flush().map_err(|e| self.err(e))?;
        Ok(self.path)
    }

    fn err(&self, source: std::io::Error) -> ExportError {
        ExportError::Io {
            path: self.path.clone(),
            source,
        }
    }
}

fn indexed_header(n: usize) -> Vec<String> {
    std::iter::once("time_s".to_string())
        .chain((0..n).map(|i| format!("index_{i}")))
        .collect()
}

/// Writes every panel file into `dir` (created if missing) and returns their paths.
pub fn export_csv<T: Real>(trace: &RunTrace<T>, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, ExportError> {
    let dir = dir.as_ref();
    if trace.is_empty() {
        return Err(ExportError::EmptyTrace);
    }
    std::fs::create_dir_all(dir).map_err(|source| ExportError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let recs = &trace.records;
    let mut written = Vec::new();

    let mut sonar = Table::create(dir, "observations_sonar.csv", &indexed_header(recs[0].sonar.readings.len()))?;
    let mut range = Table::create(dir, "observations_range.csv", &indexed_header(recs[0].range.readings.len()))?;
    let mut combined = Table::create(dir, "combined.csv", &indexed_header(8))?;
    let mut attentional = Table::create(dir, "attentional.csv", &indexed_header(8))?;
    let mut saliency = Table::create(dir, "saliency.csv", &indexed_header(8))?;
    for r in recs {
        sonar.numbers(r.time, &r.sonar.readings)?;
        range.numbers(r.time, &r.range.readings)?;
        combined.numbers(r.time, &r.combined.values)?;
        attentional.numbers(r.time, &r.modulation)?;
        saliency.numbers(r.time, &r.saliency.values)?;
    }
    for t in [sonar, range, combined, attentional, saliency] {
        written.push(t.finish()?);
    }

    // a dimension gets a file if it appears in any tick (goal maps can be windowed)
    for d in Dimension::ALL {
        let Some(width) = recs.iter().find_map(|r| r.feature(d)).map(|m| m.values().len()) else {
            continue;
        };
        let mut t = Table::create(dir, &format!("feature_{}.csv", d.tag()), &indexed_header(width))?;
        for r in recs {
            if let Some(m) = r.feature(d) {
                t.numbers(r.time, m.values())?;
            }
        }
        written.push(t.finish()?);
    }

    let mut winners = Table::create(
        dir,
        "winners.csv",
        &["time_s", "sector", "saliency", "source"].map(String::from),
    )?;
    for w in trace.winners() {
        winners.row([
            format_number(w.time.as_f64()),
            w.sector.to_string(),
            format_number(w.saliency.as_f64()),
            w.source.tag().to_string(),
        ])?;
    }
    written.push(winners.finish()?);

    written.push(export_plot_data(trace, dir)?);
    Ok(written)
}

fn export_plot_data<T: Real>(trace: &RunTrace<T>, dir: &Path) -> Result<PathBuf, ExportError> {
    let mut t = Table::create(dir, PLOT_FILE, &["time_s", "series", "index", "value"].map(String::from))?;
    for r in &trace.records {
        let time = format_number(r.time.as_f64());
        let mut series = |name: &str, values: &[T]| -> Result<(), ExportError> {
            for (i, v) in values.iter().enumerate() {
                t.row([time.clone(), name.to_string(), i.to_string(), format_number(v.as_f64())])?;
            }
            Ok(())
        };
        series("sonar", &r.sonar.readings)?;
        series("range", &r.range.readings)?;
        for m in &r.features {
            series(&format!("feature_{}", m.dimension().tag()), m.values())?;
        }
        series("combined", &r.combined.values)?;
        series("attentional", &r.modulation)?;
        series("saliency", &r.saliency.values)?;
    }
    t.finish()
}
