//! Trajectory serialization: a binary column dump with a one-line text
//! header, plus CSV export.
//!
//! Binary layout (`TRAJ1`):
//!   line 1 (ASCII): `TRAJ1 dim=<N> states=<n> dt=<dt> t0=<t0> complex=<0|1>\n`
//!   body: little-endian f64 values, state by state in time order. Real
//!   trajectories store one value per grid point; complex trajectories store
//!   interleaved (re, im) pairs.
//!
//! `dt` and `t0` are printed with 17 significant digits, which round-trips
//! f64 exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use super::{SnapshotError, Trajectory};

#[derive(Debug, Error)]
pub enum TrajectoryIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad trajectory file: {0}")]
    Format(String),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
}

pub fn save_binary(traj: &Trajectory, path: &Path) -> Result<(), TrajectoryIoError> {
    let complex = !traj.is_real();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "TRAJ1 dim={} states={} dt={:.16e} t0={:.16e} complex={}",
        traj.dim(),
        traj.len(),
        traj.dt(),
        traj.t0(),
        u8::from(complex)
    )?;
    for n in 0..traj.len() {
        for z in traj.state(n) {
            w.write_all(&z.re.to_le_bytes())?;
            if complex {
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_binary(path: &Path) -> Result<Trajectory, TrajectoryIoError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let header = header.trim_end();
    let mut fields = header.split_whitespace();
    if fields.next() != Some("TRAJ1") {
        return Err(TrajectoryIoError::Format("missing TRAJ1 magic".into()));
    }
    let mut dim = None;
    let mut states = None;
    let mut dt = None;
    let mut t0 = None;
    let mut complex = None;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| TrajectoryIoError::Format(format!("bad header field {field:?}")))?;
        match key {
            "dim" => dim = Some(parse_usize(value)?),
            "states" => states = Some(parse_usize(value)?),
            "dt" => dt = Some(parse_f64(value)?),
            "t0" => t0 = Some(parse_f64(value)?),
            "complex" => complex = Some(value == "1"),
            _ => return Err(TrajectoryIoError::Format(format!("unknown header key {key:?}"))),
        }
    }
    let (dim, n_states, dt, t0, complex) = match (dim, states, dt, t0, complex) {
        (Some(a), Some(b), Some(c), Some(d), Some(e)) => (a, b, c, d, e),
        _ => return Err(TrajectoryIoError::Format("incomplete header".into())),
    };

    let values_per_state = if complex { 2 * dim } else { dim };
    let mut buf = vec![0u8; 8 * values_per_state];
    let mut all_states = Vec::with_capacity(n_states);
    for _ in 0..n_states {
        r.read_exact(&mut buf)?;
        let mut state = Vec::with_capacity(dim);
        for i in 0..dim {
            let at = |k: usize| {
                let mut bytes = [0u8; 8];
                bytes.copy_from_slice(&buf[8 * k..8 * k + 8]);
                f64::from_le_bytes(bytes)
            };
            let z = if complex {
                Complex64::new(at(2 * i), at(2 * i + 1))
            } else {
                Complex64::new(at(i), 0.0)
            };
            state.push(z);
        }
        all_states.push(state);
    }
    Ok(Trajectory::new(all_states, dt, t0)?)
}

/// CSV export: one row per stored time, first column `t`, then one column per
/// grid point (two columns, `_re`/`_im`, for complex trajectories).
pub fn export_csv(traj: &Trajectory, path: &Path) -> Result<(), TrajectoryIoError> {
    let complex = !traj.is_real();
    let mut w = BufWriter::new(File::create(path)?);
    let mut header = String::from("t");
    for i in 0..traj.dim() {
        if complex {
            header.push_str(&format!(",u{i}_re,u{i}_im"));
        } else {
            header.push_str(&format!(",u{i}"));
        }
    }
    writeln!(w, "{header}")?;
    for n in 0..traj.len() {
        write!(w, "{:.16e}", traj.time_at(n))?;
        for z in traj.state(n) {
            if complex {
                write!(w, ",{:.16e},{:.16e}", z.re, z.im)?;
            } else {
                write!(w, ",{:.16e}", z.re)?;
            }
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_usize(s: &str) -> Result<usize, TrajectoryIoError> {
    s.parse()
        .map_err(|_| TrajectoryIoError::Format(format!("bad integer {s:?}")))
}

fn parse_f64(s: &str) -> Result<f64, TrajectoryIoError> {
    s.parse()
        .map_err(|_| TrajectoryIoError::Format(format!("bad float {s:?}")))
}
