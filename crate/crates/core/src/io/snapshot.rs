//! Snapshot file: `key=value` header lines, a `---` line, then
//! little-endian `f64` data in row-major order (interleaved re/im pairs for
//! spectral snapshots).

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::spectral::{forward_transform, Grid, RealField, SpectralField};
use crate::{Error, Result};

const SEPARATOR: &[u8] = b"\n---\n";

#[derive(Debug, Clone, PartialEq)]
pub enum SnapshotData {
    Real(Vec<f64>),
    Spectral(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub grid: Grid,
    pub time: f64,
    pub data: SnapshotData,
    /// Extra header entries, typically the `config.*` echo block.
    pub header: Vec<(String, String)>,
}

impl Snapshot {
    pub fn spectral(field: &SpectralField, time: f64, header: Vec<(String, String)>) -> Self {
        Snapshot {
            grid: *field.grid(),
            time,
            data: SnapshotData::Spectral(field.coeffs().to_vec()),
            header,
        }
    }

    pub fn real(field: &RealField, time: f64, header: Vec<(String, String)>) -> Self {
        Snapshot {
            grid: *field.grid(),
            time,
            data: SnapshotData::Real(field.values().to_vec()),
            header,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.data {
            SnapshotData::Real(_) => "real",
            SnapshotData::Spectral(_) => "spectral",
        }
    }

    pub fn into_spectral(self) -> Result<SpectralField> {
        match self.data {
            SnapshotData::Real(v) => Ok(forward_transform(&RealField::new(self.grid, v)?)),
            SnapshotData::Spectral(c) => SpectralField::from_coeffs(self.grid, c),
        }
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    let mut out = format!(
        "n={}\nbox_length={:?}\nkind={}\ntime={:?}\n",
        snap.grid.n(),
        snap.grid.box_length(),
        snap.kind(),
        snap.time
    );
    for (k, v) in &snap.header {
        out.push_str(&format!("{k}={v}\n"));
    }
    out.push_str("---\n");
    let mut bytes = out.into_bytes();
    match &snap.data {
        SnapshotData::Real(v) => v
            .iter()
            .for_each(|x| bytes.extend_from_slice(&x.to_le_bytes())),
        SnapshotData::Spectral(c) => c.iter().for_each(|z| {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }),
    }
    fs::write(path, bytes)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let bytes = fs::read(path)?;
    let split = bytes
        .windows(SEPARATOR.len())
        .position(|w| w == SEPARATOR)
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("{}: no `---` line ends the header", path.display()),
        })?;
    let header = std::str::from_utf8(&bytes[..split]).map_err(|_| Error::Parse {
        line: 0,
        message: "snapshot header is not UTF-8".into(),
    })?;
    let data = &bytes[split + SEPARATOR.len()..];
    let (mut n, mut box_length, mut kind, mut time) = (None, None, None, None);
    let mut extra = Vec::new();
    for (i, line) in header.lines().enumerate() {
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected key=value, got `{line}`"),
        })?;
        let num = |what: &'static str| -> Result<f64> {
            v.parse().map_err(|_| Error::TypeMismatch {
                key: k.to_string(),
                expected: what,
                value: v.to_string(),
            })
        };
        match k {
            "n" => {
                n = Some(v.parse::<usize>().map_err(|_| Error::TypeMismatch {
                    key: "n".into(),
                    expected: "integer",
                    value: v.into(),
                })?)
            }
            "box_length" => box_length = Some(num("number")?),
            "time" => time = Some(num("number")?),
            "kind" => kind = Some(v.to_string()),
            _ => extra.push((k.to_string(), v.to_string())),
        }
    }
    let missing = |what: &str| Error::Parse {
        line: 0,
        message: format!("snapshot header lacks `{what}`"),
    };
    let grid = Grid::new(
        n.ok_or_else(|| missing("n"))?,
        box_length.ok_or_else(|| missing("box_length"))?,
    )?;
    let time = time.ok_or_else(|| missing("time"))?;
    let floats: Vec<f64> = data
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8 bytes")))
        .collect();
    let expect = |count: usize| -> Result<()> {
        if data.len() != count * 8 {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected {} data bytes, found {}", count * 8, data.len()),
            });
        }
        Ok(())
    };
    let data = match kind.as_deref() {
        Some("real") => {
            expect(grid.len())?;
            SnapshotData::Real(floats)
        }
        Some("spectral") => {
            expect(2 * grid.len())?;
            SnapshotData::Spectral(
                floats
                    .chunks_exact(2)
                    .map(|p| Complex64::new(p[0], p[1]))
                    .collect(),
            )
        }
        Some(other) => {
            return Err(Error::TypeMismatch {
                key: "kind".into(),
                expected: "real or spectral",
                value: other.into(),
            })
        }
        None => return Err(missing("kind")),
    };
    Ok(Snapshot {
        grid,
        time,
        data,
        header: extra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{inverse_transform, random_field};

    #[test]
    fn spectral_and_real_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(16, 3.5).unwrap();
        let f = random_field(g, 1, |_| 1.0);
        let header = vec![("config.kappa".to_string(), "0.8".to_string())];
        let p = dir.path().join("s.snap");
        write_snapshot(&p, &Snapshot::spectral(&f, 0.25, header.clone())).unwrap();
        let back = read_snapshot(&p).unwrap();
        assert_eq!(back.time, 0.25);
        assert_eq!(back.header_value("config.kappa"), Some("0.8"));
        assert_eq!(back.into_spectral().unwrap(), f);
        let real = inverse_transform(&f).unwrap();
        write_snapshot(&p, &Snapshot::real(&real, 1.0, vec![])).unwrap();
        let back = read_snapshot(&p).unwrap();
        assert_eq!(back.data, SnapshotData::Real(real.values().to_vec()));
        assert_eq!(back.grid, g);
    }

    #[test]
    fn truncated_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.snap");
        std::fs::write(&p, b"n=8\nbox_length=1.0\nkind=real\ntime=0\n---\n\x00\x01").unwrap();
        assert!(read_snapshot(&p).is_err());
        std::fs::write(&p, b"n=8\nkind=real\n").unwrap();
        assert!(read_snapshot(&p).is_err());
    }
}
