use std::path::{Path, PathBuf};

use super::IoError;

/// `filename eps` per line; blank lines and `#` comments are ignored.
/// Relative filenames resolve against the manifest's directory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EpsilonManifest {
    pub entries: Vec<(PathBuf, f64)>,
}

impl EpsilonManifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self, IoError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| IoError::Manifest {
                line: i + 1,
                message: format!("{what}: {raw:?}"),
            };
            let mut parts = line.split_whitespace();
            let (Some(name), Some(eps), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected `filename eps`"));
            };
            let eps: f64 = eps.parse().map_err(|_| bad("eps is not a number"))?;
            if !(0.0..=0.5).contains(&eps) {
                return Err(bad("eps outside [0, 0.5]"));
            }
            entries.push((base.join(name), eps));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Lines for `entries`, names relative to the manifest directory when possible.
    pub fn render(&self, base: &Path) -> String {
        self.entries
            .iter()
            .map(|(p, e)| {
                let name = p.strip_prefix(base).unwrap_or(p);
                format!("{} {e}\n", name.display())
            })
            .collect()
    }
}
