//! Deterministic CSV and JSON writers.
//!
//! Floats are written with 17 significant digits in scientific notation.
//! CSV files start with a `#` comment carrying the version and the manifest
//! hash; JSON documents carry the same stamp in a leading `manifest` field.

use crate::error::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Crate version written into every artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identity of one invocation.
///
/// Outputs depend on the subcommand, the configuration contents, the seed and
/// the version; the configuration path and the output directory only say where
/// things are read and written and stay out of the hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    /// Subcommand name.
    pub subcommand: String,
    /// Canonical configuration text.
    pub config: String,
    /// Path the configuration was read from.
    pub config_path: Option<PathBuf>,
    /// Output directory.
    pub out_dir: PathBuf,
    /// Seed of randomised suites.
    pub seed: u64,
    /// Crate version.
    pub version: String,
}

impl RunManifest {
    /// Manifest for the current crate version writing to the current directory.
    pub fn new(subcommand: &str, config: &str, seed: u64) -> Self {
        Self {
            subcommand: subcommand.into(),
            config: config.into(),
            config_path: None,
            out_dir: PathBuf::from("."),
            seed,
            version: VERSION.into(),
        }
    }

    /// Checks that the output directory exists or can be created, and accepts files.
    pub fn prepare_output(&self) -> Result<()> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| {
            crate::error::Error::Config(format!(
                "output directory {} is not writable: {e}",
                self.out_dir.display()
            ))
        })?;
        let probe = self.out_dir.join(".riesz-gas-write-probe");
        std::fs::write(&probe, b"")
            .and_then(|_| std::fs::remove_file(&probe))
            .map_err(|e| {
                crate::error::Error::Config(format!(
                    "output directory {} is not writable: {e}",
                    self.out_dir.display()
                ))
            })
    }

    /// Writes `text` to `name` inside the output directory.
    pub fn write(&self, name: &str, text: &str) -> Result<()> {
        write_file(&self.out_dir, name, text)
    }

    /// Hex SHA-256 of subcommand, configuration, seed and version.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for part in [
            self.subcommand.as_str(),
            self.config.as_str(),
            &self.seed.to_string(),
            self.version.as_str(),
        ] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    /// The comment line heading CSV files.
    pub fn comment(&self) -> String {
        format!(
            "# riesz-gas {} manifest {} subcommand {} seed {}",
            self.version,
            self.hash(),
            self.subcommand,
            self.seed
        )
    }
}

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// CSV text: stamp comment, header line, then one line per row of numbers.
pub fn csv_string(manifest: &RunManifest, header: &str, rows: &[Vec<f64>]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| row.iter().map(|&v| fmt_f64(v)).collect())
        .collect();
    csv_text(manifest, header, &cells)
}

/// CSV text from preformatted cells.
pub fn csv_text(manifest: &RunManifest, header: &str, rows: &[Vec<String>]) -> String {
    let mut out = manifest.comment();
    out.push('\n');
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// JSON formatter writing every float with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    manifest: Stamp<'a>,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct Stamp<'a> {
    version: &'a str,
    hash: String,
    subcommand: &'a str,
    seed: u64,
}

/// JSON text of `body` (an object) with a leading `manifest` stamp.
pub fn json_string<T: Serialize>(manifest: &RunManifest, body: &T) -> Result<String> {
    let stamped = Stamped {
        manifest: Stamp {
            version: &manifest.version,
            hash: manifest.hash(),
            subcommand: &manifest.subcommand,
            seed: manifest.seed,
        },
        body,
    };
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    stamped
        .serialize(&mut ser)
        .map_err(|e| crate::error::Error::Io(e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Writes `text` to `dir/name`, creating `dir` when needed.
pub fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Body {
        x: Vec<f64>,
        label: String,
        count: usize,
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.5), "-2.5000000000000000e0");
        assert_eq!(fmt_f64(f64::NAN), "NaN");
        let parsed: f64 = fmt_f64(std::f64::consts::PI).parse().unwrap();
        assert_eq!(parsed, std::f64::consts::PI);
    }

    #[test]
    fn stamped_json_round_trips() {
        let m = RunManifest::new("steady", "n=3\n", 7);
        let text = json_string(
            &m,
            &Body {
                x: vec![1.0, 1e-300],
                label: "a".into(),
                count: 2,
            },
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["manifest"]["hash"], m.hash());
        assert_eq!(v["x"][1].as_f64().unwrap(), 1e-300);
        assert_eq!(v["count"], 2);
        assert!(text.starts_with("{\"manifest\""));
    }

    #[test]
    fn hash_depends_on_every_field() {
        let base = RunManifest::new("verify", "", 0);
        assert_eq!(base.hash(), RunManifest::new("verify", "", 0).hash());
        assert_ne!(base.hash(), RunManifest::new("verify", "", 1).hash());
        assert_ne!(base.hash(), RunManifest::new("steady", "", 0).hash());
        let csv = csv_string(&base, "a,b", &[vec![1.0, 2.0]]);
        assert!(csv.starts_with("# riesz-gas"));
        assert_eq!(
            csv.lines().nth(2).unwrap(),
            "1.0000000000000000e0,2.0000000000000000e0"
        );
    }
}
