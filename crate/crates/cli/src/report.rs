//! Report assembly and emission: metadata headers, 17-significant-digit
//! scientific formatting, CSV layout, and atomic file writes.
//!
//! Every emitted byte is a pure function of the resolved configuration, so
//! identical runs produce identical files — the headers carry no
//! timestamps, hostnames, or paths.

use crate::config::RunConfig;
use crate::error::CliError;
use freefall_core::SweepRow;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Column header of the detectability-ratio sweep CSV.
pub const RATIO_CSV_HEADER: &str =
    "radius_m,density_kg_m3,lambda_dp,lambda_csl,lambda_min,ratio_dp,ratio_csl";

/// Column header of the onset-time sweep CSV.
pub const ONSET_CSV_HEADER: &str = "radius_m,density_kg_m3,t_d_s";

/// Formats a double in scientific notation with 17 significant digits —
/// enough that parsing the text recovers the exact bit pattern. Infinities
/// print as `inf`, which `f64::from_str` accepts back.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// The `#`-prefixed metadata block that opens every report: tool version,
/// command name, config hash, the conventions the numbers assume, and the
/// canonical config echo. CSV consumers skip it with `comment='#'`.
pub fn header(command: &str, config: &RunConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# tool = freefall {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# command = {command}");
    let _ = writeln!(out, "# config_sha256 = {}", config.sha256_hex());
    let _ = writeln!(
        out,
        "# convention: position variance grows by 2*Lambda*hbar^2*t^3/(3*m^2)"
    );
    let _ = writeln!(
        out,
        "# convention: overlap parameter = separation/(2*radius)"
    );
    for line in config.canonical_lines() {
        let _ = writeln!(out, "# config: {line}");
    }
    out
}

/// One `name = value` line with full-precision formatting.
pub fn scalar(out: &mut String, name: &str, value: f64) {
    let _ = writeln!(out, "{name} = {}", sci(value));
}

/// One `name = value` line for an integer quantity.
pub fn integer(out: &mut String, name: &str, value: u64) {
    let _ = writeln!(out, "{name} = {value}");
}

/// The detectability-ratio sweep as CSV text (metadata, column header,
/// one row per grid point).
pub fn ratio_csv(config: &RunConfig, rows: &[SweepRow]) -> String {
    let mut out = header("sweep-ratio", config);
    let _ = writeln!(out, "{RATIO_CSV_HEADER}");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sci(row.radius_m),
            sci(row.density_kg_m3),
            sci(row.lambda_dp),
            sci(row.lambda_csl.expect("ratio sweep always carries CSL")),
            sci(row.lambda_min),
            sci(row.ratio_dp),
            sci(row.ratio_csl.expect("ratio sweep always carries CSL")),
        );
    }
    out
}

/// The onset-time sweep as CSV text. Grid points with no onset inside the
/// solver horizon print `inf`.
pub fn onset_csv(config: &RunConfig, rows: &[SweepRow]) -> String {
    let mut out = header("sweep-td", config);
    let _ = writeln!(out, "{ONSET_CSV_HEADER}");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            sci(row.radius_m),
            sci(row.density_kg_m3),
            sci(row.t_d_s.expect("onset sweep always solves for t_d")),
        );
    }
    out
}

/// Writes `content` to `path` by way of `<path>.tmp` and an atomic rename,
/// so an interrupted run never leaves a truncated report under the final
/// name.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp_name);
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
