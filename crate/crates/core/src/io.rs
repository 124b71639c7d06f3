//! CSV import and export of observation paths, jump events and result tables.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{NoisePath, ObservationPath};
use crate::selector::Observations;

#[derive(Debug, Serialize, Deserialize)]
struct PathRow {
    t: f64,
    #[serde(default)]
    xi: Option<f64>,
    y_increment: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JumpRow {
    time: f64,
    mark: f64,
}

/// Writes one row per grid cell: cell end time, `ξ` at that time and `Δy`.
pub fn write_path<W: Write>(obs: &ObservationPath, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dt = obs.noise.dt();
    for (i, dy) in obs.y_increments.iter().enumerate() {
        w.serialize(PathRow {
            t: (i + 1) as f64 * dt,
            xi: Some(obs.noise.xi()[i + 1]),
            y_increment: *dy,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `(T_k, Y_k)` rows.
pub fn write_jumps<W: Write>(path: &NoisePath, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for j in path.jumps() {
        w.serialize(JumpRow { time: j.time, mark: j.mark })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `(t, y_increment)` rows (an `xi` column is accepted and ignored).
///
/// The grid step is the first time stamp and the horizon is the last one;
/// times must be increasing and evenly spaced.
pub fn read_observations<R: Read>(input: R) -> Result<Observations> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    for needed in ["t", "y_increment"] {
        if !headers.iter().any(|h| h == needed) {
            return Err(Error::Schema(format!("missing column `{needed}`")));
        }
    }
    let mut times = Vec::new();
    let mut dy = Vec::new();
    for row in rdr.deserialize::<PathRow>() {
        let row = row.map_err(|e| Error::Schema(e.to_string()))?;
        times.push(row.t);
        dy.push(row.y_increment);
    }
    if times.is_empty() {
        return Err(Error::Schema("no observation rows".to_string()));
    }
    let dt = times[0];
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::Schema(format!("first time stamp {dt} must be positive")));
    }
    for (i, w) in times.windows(2).enumerate() {
        if w[1].is_nan() || w[1] <= w[0] {
            return Err(Error::Schema(format!("time stamps not increasing at row {}", i + 2)));
        }
    }
    for (i, t) in times.iter().enumerate() {
        let expect = (i + 1) as f64 * dt;
        if (t - expect).abs() > 1e-9 * expect.max(1.0) {
            return Err(Error::Schema(format!("row {} at t = {t} is off the grid of step {dt}", i + 1)));
        }
    }
    let last = *times.last().expect("nonempty");
    let n = last.round();
    if n < 1.0 || (last - n).abs() > 1e-9 * n {
        return Err(Error::Schema(format!("observations end at t = {last}, not an integer horizon")));
    }
    Observations::new(n as usize, dt, dy)
}

pub fn read_observations_file(path: &Path) -> Result<Observations> {
    read_observations(File::open(path)?)
}

/// Reads `(T_k, Y_k)` rows.
pub fn read_jumps<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize::<JumpRow>()
        .map(|r| r.map(|j| (j.time, j.mark)).map_err(|e| Error::Schema(e.to_string())))
        .collect()
}

/// Serializes any row type as a headed CSV table.
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
