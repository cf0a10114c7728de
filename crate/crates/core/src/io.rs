//! CSV, TOML and JSON artifacts.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which reads back
//! bit-identical.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{TimeGrid, Vec3};
use crate::inverse::{DistanceFunction, ReconstructedOrbit};
use crate::metrics::NoiseSweepResult;
use crate::noise::NoiseModel;
use crate::pipeline::ExperimentSettings;
use crate::scenario::Scenario;
use crate::series::TimeSeries;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(path: &Path, detail: impl ToString) -> Error {
    Error::Format {
        path: path.display().to_string(),
        detail: detail.to_string(),
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn write_rows<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl Iterator<Item = [f64; N]>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format_err(path, e))?;
    w.write_record(header).map_err(|e| format_err(path, e))?;
    for row in rows {
        w.write_record(row.map(fmt_f64)).map_err(|e| format_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

fn read_rows<const N: usize>(path: &Path, header: [&str; N]) -> Result<Vec<[f64; N]>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| format_err(path, e))?;
    let found = r.headers().map_err(|e| format_err(path, e))?.clone();
    if found.iter().map(str::trim).ne(header.iter().copied()) {
        return Err(format_err(
            path,
            format!("expected header {}, found {}", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| format_err(path, e))?;
        if rec.len() != N {
            return Err(format_err(path, format!("row {}: expected {N} fields", line + 2)));
        }
        let mut row = [0.0; N];
        for (k, field) in rec.iter().enumerate() {
            row[k] = field
                .trim()
                .parse()
                .map_err(|e| format_err(path, format!("row {}: {e}", line + 2)))?;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `t,H1,H2,H3`.
pub fn write_series_csv(path: &Path, s: &TimeSeries) -> Result<()> {
    write_rows(
        path,
        ["t", "H1", "H2", "H3"],
        s.iter().map(|(t, h)| [t, h.x, h.y, h.z]),
    )
}

/// Reads a `t,H1,H2,H3` file. With `grid` given, the time column must match
/// it exactly; otherwise a uniform grid is inferred from the first and last
/// time.
pub fn read_series_csv(path: &Path, receiver_index: usize, grid: Option<TimeGrid>) -> Result<TimeSeries> {
    let rows = read_rows(path, ["t", "H1", "H2", "H3"])?;
    let grid = match grid {
        Some(g) => g,
        None => {
            if rows.len() < 2 {
                return Err(format_err(path, "need at least two samples"));
            }
            let (t0, t1) = (rows[0][0], rows[rows.len() - 1][0]);
            TimeGrid::new(t0, (t1 - t0) / (rows.len() - 1) as f64, rows.len())?
        }
    };
    if rows.len() != grid.n {
        return Err(format_err(path, format!("{} rows for a grid of {}", rows.len(), grid.n)));
    }
    for (k, row) in rows.iter().enumerate() {
        if (row[0] - grid.time(k)).abs() > 1e-9 * grid.dt {
            return Err(format_err(path, format!("row {}: time {} is off the uniform grid", k + 2, row[0])));
        }
    }
    let samples = rows.iter().map(|r| Vec3::new(r[1], r[2], r[3])).collect();
    TimeSeries::new(grid, samples, receiver_index).map_err(|e| format_err(path, e))
}

/// `t,v`.
pub fn write_distance_csv(path: &Path, d: &DistanceFunction) -> Result<()> {
    write_rows(path, ["t", "v"], d.iter().map(|(t, v)| [t, v]))
}

/// `t,a1,a2,a3`.
pub fn write_orbit_csv(path: &Path, o: &ReconstructedOrbit) -> Result<()> {
    write_rows(
        path,
        ["t", "a1", "a2", "a3"],
        o.iter().map(|(t, p)| [t, p.x, p.y, p.z]),
    )
}

pub fn read_orbit_csv(path: &Path) -> Result<Vec<(f64, Vec3)>> {
    Ok(read_rows(path, ["t", "a1", "a2", "a3"])?
        .into_iter()
        .map(|r| (r[0], Vec3::new(r[1], r[2], r[3])))
        .collect())
}

/// `epsilon,seed,err`, one row per run.
pub fn write_sweep_csv(path: &Path, r: &NoiseSweepResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format_err(path, e))?;
    w.write_record(["epsilon", "seed", "err"]).map_err(|e| format_err(path, e))?;
    for run in &r.runs {
        w.write_record([fmt_f64(run.epsilon), run.seed.to_string(), fmt_f64(run.err)])
            .map_err(|e| format_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| format_err(path, e))?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| format_err(path, e))
}

pub fn write_toml(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = toml::to_string(value).map_err(|e| format_err(path, e))?;
    fs::write(path, text).map_err(io_err(path))
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    toml::from_str(&text).map_err(|e| format_err(path, e))
}

/// Scenario file: a `[scenario]` table and an optional `[settings]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings: Option<ExperimentSettings>,
}

/// Everything `reconstruct` needs besides the trace files, written by
/// `simulate` as `run.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub noise: NoiseModel,
    pub grid: TimeGrid,
    pub settings: ExperimentSettings,
    pub scenario: Scenario,
}

pub const MANIFEST_FILE: &str = "run.toml";

pub fn measurement_path(dir: &Path, receiver_index: usize) -> PathBuf {
    dir.join(format!("measurement_x{}.csv", receiver_index + 1))
}

pub fn distance_path(dir: &Path, receiver_index: usize) -> PathBuf {
    dir.join(format!("distance_x{}.csv", receiver_index + 1))
}

/// Writes the four trace files and the manifest.
pub fn write_measurements(dir: &Path, data: &[TimeSeries; 4], manifest: &RunManifest) -> Result<()> {
    ensure_dir(dir)?;
    for s in data {
        write_series_csv(&measurement_path(dir, s.receiver_index), s)?;
    }
    write_toml(&dir.join(MANIFEST_FILE), manifest)
}

pub fn read_measurements(dir: &Path) -> Result<(RunManifest, [TimeSeries; 4])> {
    let manifest: RunManifest = read_toml(&dir.join(MANIFEST_FILE))?;
    let mut data = Vec::with_capacity(4);
    for j in 0..4 {
        data.push(read_series_csv(&measurement_path(dir, j), j, Some(manifest.grid))?);
    }
    Ok((manifest, data.try_into().expect("four receivers")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ExperimentPreset;

    #[test]
    fn series_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let grid = TimeGrid::new(0.1, 1.0 / 3.0, 50).unwrap();
        let samples = (0..50)
            .map(|k| Vec3::new((k as f64).sin() / 7.0, 1e-300 * k as f64, -(k as f64).sqrt() * 1e17))
            .collect();
        let s = TimeSeries::new(grid, samples, 2).unwrap();
        let path = dir.path().join("s.csv");
        write_series_csv(&path, &s).unwrap();
        assert_eq!(read_series_csv(&path, 2, Some(grid)).unwrap(), s);
        let inferred = read_series_csv(&path, 2, None).unwrap();
        assert_eq!(inferred.samples, s.samples);
    }

    #[test]
    fn wrong_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "t,Hx,Hy,Hz\n0,1,2,3\n1,1,2,3\n").unwrap();
        assert!(matches!(read_series_csv(&path, 0, None), Err(Error::Format { .. })));
        assert!(matches!(
            read_series_csv(&dir.path().join("missing.csv"), 0, None),
            Err(Error::Format { .. } | Error::Io { .. })
        ));
    }

    #[test]
    fn config_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for p in ExperimentPreset::ALL {
            let cfg = ConfigFile {
                scenario: p.scenario(),
                settings: Some(p.settings()),
            };
            let path = dir.path().join(format!("{p}.toml"));
            write_toml(&path, &cfg).unwrap();
            let back: ConfigFile = read_toml(&path).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn hand_written_config_parses() {
        let text = r#"
            [scenario]
            c = 340
            R_gamma = 100.0
            R_D = 5.0
            T0 = 1.0
            T1 = 0.4
            T = 1.4
            receivers = [
                { position = [57.735026918962575, 57.735026918962575, 57.735026918962575] },
                { position = [-57.735026918962575, -57.735026918962575, 57.735026918962575] },
                { position = [57.735026918962575, -57.735026918962575, -57.735026918962575] },
                { position = [-57.735026918962575, 57.735026918962575, -57.735026918962575] },
            ]

            [scenario.orbit]
            kind = "spiral"
            params = [2.0, 3.0, 1.0]
            declared_c0 = 6.1
            declared_a0 = 18.0

            [[scenario.signal.components]]
            poly = [1.0]
            [[scenario.signal.components]]
            poly = [15.0]
            sines = [[10.0, 100.0, 0.0]]
            [[scenario.signal.components]]
            poly = [-1.0, 0.0, -1.0]
        "#;
        let cfg: ConfigFile = toml::from_str(text).unwrap();
        assert_eq!(cfg.scenario.c, 340.0);
        assert_eq!(cfg.scenario.signal, crate::signal::SourceSignal::reference());
        assert!(cfg.settings.is_none());
        assert!((cfg.scenario.receivers[2].normal.norm() - 1.0).abs() < 1e-15);
    }
}
