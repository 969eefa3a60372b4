//! Self-describing binary serialization for fitted DMD models.
//!
//! Layout (`DMDM1`):
//!   line 1 (ASCII): `DMDM1 p=<p> r=<r> m=<m> dt=<dt> real=<0|1>
//!                    blocks=<spec> name=<rest of line>`
//!   body: little-endian f64 pairs (re, im) for Φ (column-major, p·r), Λ (r),
//!   b (r), then Φ⁺ (column-major, r·p).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use super::DmdModel;
use crate::numerics::DenseMatrix;
use crate::snapshots::{block_spec, parse_block_spec, SnapshotError};

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad model file: {0}")]
    Format(String),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error(transparent)]
    Numerics(#[from] crate::numerics::NumericsError),
}

pub fn save_model(model: &DmdModel, path: &Path) -> Result<(), ModelIoError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "DMDM1 p={} r={} m={} dt={:.16e} real={} blocks={} name={}",
        model.phi.rows(),
        model.rank(),
        model.m,
        model.dt,
        u8::from(model.real_state),
        block_spec(&model.observable),
        model.observable.name(),
    )?;
    write_complex(&mut w, model.phi.data())?;
    write_complex(&mut w, &model.lambda)?;
    write_complex(&mut w, &model.b)?;
    write_complex(&mut w, model.phi_pinv.data())?;
    w.flush()?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<DmdModel, ModelIoError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let header = header.trim_end();
    let rest = header
        .strip_prefix("DMDM1 ")
        .ok_or_else(|| ModelIoError::Format("missing DMDM1 magic".into()))?;

    let mut p = None;
    let mut rank = None;
    let mut m = None;
    let mut dt = None;
    let mut real = None;
    let mut blocks = None;
    let mut name = None;
    let mut cursor = rest;
    while !cursor.is_empty() {
        let (key, after_key) = cursor
            .split_once('=')
            .ok_or_else(|| ModelIoError::Format(format!("bad header near {cursor:?}")))?;
        if key == "name" {
            name = Some(after_key.to_string());
            break;
        }
        let (value, tail) = match after_key.split_once(' ') {
            Some((v, t)) => (v, t),
            None => (after_key, ""),
        };
        match key {
            "p" => p = Some(parse_usize(value)?),
            "r" => rank = Some(parse_usize(value)?),
            "m" => m = Some(parse_usize(value)?),
            "dt" => dt = Some(parse_f64(value)?),
            "real" => real = Some(value == "1"),
            "blocks" => blocks = Some(value.to_string()),
            _ => return Err(ModelIoError::Format(format!("unknown header key {key:?}"))),
        }
        cursor = tail;
    }
    let (p, rank, m, dt, real, blocks, name) = match (p, rank, m, dt, real, blocks, name) {
        (Some(a), Some(b), Some(c), Some(d), Some(e), Some(f), Some(g)) => (a, b, c, d, e, f, g),
        _ => return Err(ModelIoError::Format("incomplete header".into())),
    };

    let phi = DenseMatrix::from_column_major(p, rank, read_complex(&mut r, p * rank)?)?;
    let lambda = read_complex(&mut r, rank)?;
    let b = read_complex(&mut r, rank)?;
    let phi_pinv = DenseMatrix::from_column_major(rank, p, read_complex(&mut r, rank * p)?)?;
    let observable = parse_block_spec(&name, &blocks)?;

    Ok(DmdModel {
        phi,
        lambda,
        b,
        m,
        dt,
        observable,
        phi_pinv,
        real_state: real,
    })
}

fn write_complex(w: &mut impl Write, data: &[Complex64]) -> std::io::Result<()> {
    for z in data {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_complex(r: &mut impl Read, count: usize) -> Result<Vec<Complex64>, ModelIoError> {
    let mut buf = vec![0u8; 16 * count];
    r.read_exact(&mut buf)?;
    Ok((0..count)
        .map(|i| {
            let mut re = [0u8; 8];
            let mut im = [0u8; 8];
            re.copy_from_slice(&buf[16 * i..16 * i + 8]);
            im.copy_from_slice(&buf[16 * i + 8..16 * i + 16]);
            Complex64::new(f64::from_le_bytes(re), f64::from_le_bytes(im))
        })
        .collect())
}

fn parse_usize(s: &str) -> Result<usize, ModelIoError> {
    s.parse()
        .map_err(|_| ModelIoError::Format(format!("bad integer {s:?}")))
}

fn parse_f64(s: &str) -> Result<f64, ModelIoError> {
    s.parse()
        .map_err(|_| ModelIoError::Format(format!("bad float {s:?}")))
}
