//! Parameter sweeps: run the same experiment while varying m or rank_eps,
//! one output subdirectory per value, plus a merged sweep summary.

use std::io::Write;
use std::path::Path;

use crate::config::ExperimentConfig;
use crate::runner::{run_experiment, ExperimentOutput};
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    M,
    RankEps,
}

impl SweepParam {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m" => Ok(SweepParam::M),
            "rank_eps" | "rank-eps" | "eps" => Ok(SweepParam::RankEps),
            other => Err(HarnessError::Config(format!(
                "unknown sweep parameter {other:?}; expected m or rank_eps"
            ))),
        }
    }
}

pub struct SweepOutcome {
    pub value_label: String,
    pub output: ExperimentOutput,
}

/// Runs the base config once per value, writing each run under
/// `<output_dir>/<param>_<value>/` and a `sweep_summary.csv` at the root.
pub fn run_sweep(
    base: &ExperimentConfig,
    param: SweepParam,
    values: &[String],
) -> Result<Vec<SweepOutcome>, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Config("sweep needs at least one value".into()));
    }
    std::fs::create_dir_all(&base.output_dir)?;
    let mut outcomes = Vec::new();
    for value in values {
        let mut cfg = base.clone();
        let tag = match param {
            SweepParam::M => {
                cfg.set("m", value)?;
                format!("m_{value}")
            }
            SweepParam::RankEps => {
                cfg.set("rank_eps", value)?;
                // "1e-12" → "eps_1em12" for a filesystem-friendly tag.
                format!("eps_{}", value.replace('-', "m"))
            }
        };
        cfg.output_dir = base.output_dir.join(&tag);
        let output = run_experiment(&cfg)?;
        outcomes.push(SweepOutcome {
            value_label: value.clone(),
            output,
        });
    }
    write_sweep_summary(&base.output_dir.join("sweep_summary.csv"), param, &outcomes)?;
    Ok(outcomes)
}

fn write_sweep_summary(
    path: &Path,
    param: SweepParam,
    outcomes: &[SweepOutcome],
) -> Result<(), HarnessError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    let name = match param {
        SweepParam::M => "m",
        SweepParam::RankEps => "rank_eps",
    };
    writeln!(
        w,
        "{name},method,observable,rank,total_time_s,max_error,final_error"
    )?;
    for outcome in outcomes {
        for row in &outcome.output.rows {
            writeln!(
                w,
                "{},{},{},{},{:.16e},{:.16e},{:.16e}",
                outcome.value_label,
                row.method,
                row.observable,
                row.rank,
                row.total_time_s,
                row.max_error,
                row.final_error
            )?;
        }
    }
    w.flush()?;
    Ok(())
}
