//! CSV schemas for the comparison artifacts. All numeric fields are printed
//! with 17 significant digits so identical runs produce identical bytes
//! (timing columns are exempt from the determinism guarantee, not from the
//! format).

use std::io::Write;
use std::path::Path;

use crate::HarnessError;

/// One line of the method comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub method: String,
    pub observable: String,
    pub rank: usize,
    pub fit_time_s: f64,
    pub predict_time_s: f64,
    pub total_time_s: f64,
    pub max_error: f64,
    pub final_error: f64,
}

pub const COMPARISON_HEADER: &str =
    "method,observable,rank,fit_time_s,predict_time_s,total_time_s,max_error,final_error";

impl ComparisonRow {
    fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.method,
            self.observable,
            self.rank,
            self.fit_time_s,
            self.predict_time_s,
            self.total_time_s,
            self.max_error,
            self.final_error
        )
    }

    pub fn parse_csv_line(line: &str) -> Result<Self, HarnessError> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(HarnessError::Config(format!(
                "bad comparison row (expected 8 fields): {line:?}"
            )));
        }
        let num = |s: &str| -> Result<f64, HarnessError> {
            s.parse()
                .map_err(|_| HarnessError::Config(format!("bad number {s:?} in {line:?}")))
        };
        Ok(ComparisonRow {
            method: fields[0].to_string(),
            observable: fields[1].to_string(),
            rank: fields[2]
                .parse()
                .map_err(|_| HarnessError::Config(format!("bad rank in {line:?}")))?,
            fit_time_s: num(fields[3])?,
            predict_time_s: num(fields[4])?,
            total_time_s: num(fields[5])?,
            max_error: num(fields[6])?,
            final_error: num(fields[7])?,
        })
    }
}

pub fn write_comparison_csv(path: &Path, rows: &[ComparisonRow]) -> Result<(), HarnessError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{COMPARISON_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.to_csv_line())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_comparison_csv(path: &Path) -> Result<Vec<ComparisonRow>, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == COMPARISON_HEADER => {}
        other => {
            return Err(HarnessError::Config(format!(
                "{}: unexpected header {other:?}",
                path.display()
            )))
        }
    }
    lines.map(ComparisonRow::parse_csv_line).collect()
}

/// POD has no computable bound; its report carries measured errors only.
pub fn write_pod_report_csv(
    path: &Path,
    m: usize,
    t0: f64,
    dt: f64,
    errors: &[f64],
) -> Result<(), HarnessError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "step,t,e_measured")?;
    for (i, e) in errors.iter().enumerate() {
        let n = m + i;
        writeln!(w, "{},{:.16e},{:.16e}", n, t0 + dt * n as f64, e)?;
    }
    w.flush()?;
    Ok(())
}

/// Time- and accuracy-ranked views of a set of comparison rows.
pub struct RankedSummary {
    pub by_time: Vec<ComparisonRow>,
    pub by_error: Vec<ComparisonRow>,
}

/// Ranks rows by total wall-clock and by max error. Sorting is stable, so
/// ties keep their input order.
pub fn compare_methods(rows: &[ComparisonRow]) -> RankedSummary {
    let mut by_time = rows.to_vec();
    by_time.sort_by(|a, b| a.total_time_s.partial_cmp(&b.total_time_s).unwrap());
    let mut by_error = rows.to_vec();
    by_error.sort_by(|a, b| a.max_error.partial_cmp(&b.max_error).unwrap());
    RankedSummary { by_time, by_error }
}

pub fn write_summary_csv(path: &Path, summary: &RankedSummary) -> Result<(), HarnessError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "ranking,position,{COMPARISON_HEADER}")?;
    for (i, row) in summary.by_time.iter().enumerate() {
        writeln!(w, "total_time_s,{},{}", i + 1, row.to_csv_line())?;
    }
    for (i, row) in summary.by_error.iter().enumerate() {
        writeln!(w, "max_error,{},{}", i + 1, row.to_csv_line())?;
    }
    w.flush()?;
    Ok(())
}
