use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use dtigra::CoefVecF64;
use tempfile::NamedTempFile;

/// Files assembled in memory and written together, so a failed command
/// leaves nothing behind.
#[derive(Default)]
pub struct Staged {
    files: Vec<(String, Vec<u8>)>,
}

impl Staged {
    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn add_json<S: serde::Serialize>(&mut self, name: &str, value: &S) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add(name, bytes);
        Ok(())
    }

    /// Each file goes to a temporary sibling first and is renamed into place.
    pub fn commit(self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut pending = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("staging {name}"))?;
            tmp.write_all(bytes)?;
            tmp.flush()?;
            pending.push((tmp, dir.join(name)));
        }
        for (tmp, path) in pending {
            tmp.persist(&path).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

/// `index,value` rows with 1-based indices.
pub fn coef_csv(x: &CoefVecF64) -> Vec<u8> {
    let mut out = b"index,value\n".to_vec();
    for (i, v) in x.iter().enumerate() {
        writeln!(out, "{},{:.16e}", i + 1, v).expect("writing to memory");
    }
    out
}

pub fn read_coef_csv(path: &Path) -> Result<CoefVecF64> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header = lines.next().transpose()?;
    if header.as_deref().map(str::trim) != Some("index,value") {
        bail!("{}: expected header index,value", path.display());
    }
    let mut values = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (i, v) = line
            .split_once(',')
            .with_context(|| format!("{} row {}: expected two columns", path.display(), row + 1))?;
        let i: usize = i.trim().parse().with_context(|| format!("{} row {}", path.display(), row + 1))?;
        if i != values.len() + 1 {
            bail!("{} row {}: index {i} out of sequence", path.display(), row + 1);
        }
        values.push(v.trim().parse::<f64>().with_context(|| format!("{} row {}", path.display(), row + 1))?);
    }
    Ok(CoefVecF64::new(values)?)
}

pub fn signal_csv(s: &dtigra::SignalF64) -> Vec<u8> {
    let mut out = Vec::new();
    s.write_csv(&mut out).expect("writing to memory");
    out
}

pub fn read_signal_csv(path: &Path) -> Result<dtigra::SignalF64> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    dtigra::SignalF64::read_csv(std::io::BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}
