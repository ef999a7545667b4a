//! Locale-independent CSV text and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hrnet_core::metrics::{pair_indices, TrajectoryRecord};

use crate::error::CliError;

/// Fixed scientific notation with 16 fractional digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default();
    let tmp: PathBuf = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        fs::remove_file(&tmp).ok();
    }
    result.map_err(io)
}

pub const TRAJECTORY_COLUMNS: [&str; 8] = [
    "t",
    "total_energy",
    "gronwall_envelope",
    "stimulation_S",
    "threshold_literal",
    "threshold_perpair",
    "boundary_diff_full",
    "K_sum",
];

/// Trajectory CSV: fixed columns, then `dE_i_j` for every pair `i < j`
/// (1-based).
pub fn trajectory_csv(record: &TrajectoryRecord) -> String {
    let mut out = TRAJECTORY_COLUMNS.join(",");
    for (i, j) in pair_indices(record.n) {
        out.push_str(&format!(",dE_{}_{}", i + 1, j + 1));
    }
    out.push('\n');
    for r in &record.rows {
        let fixed = [
            r.t,
            r.total_energy,
            r.gronwall_envelope,
            r.stimulation,
            r.threshold_literal,
            r.threshold_perpair,
            r.boundary_diff_full,
            r.k_sum,
        ];
        let cols: Vec<String> = fixed
            .iter()
            .copied()
            .chain(r.pairs.iter().map(|p| p.energy_g))
            .map(num)
            .collect();
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_is_fixed() {
        assert_eq!(num(0.0), "0.0000000000000000e0");
        assert_eq!(num(-0.25), "-2.5000000000000000e-1");
        assert_eq!(num(43268.0), "4.3268000000000000e4");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = std::env::temp_dir().join(format!("hrnet-out-{}", std::process::id()));
        let path = dir.join("sub").join("a.csv");
        write_atomic(&path, b"one\n").unwrap();
        write_atomic(&path, b"two\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two\n");
        let leftovers = fs::read_dir(path.parent().unwrap()).unwrap().count();
        assert_eq!(leftovers, 1);
        fs::remove_dir_all(dir).ok();
    }
}
