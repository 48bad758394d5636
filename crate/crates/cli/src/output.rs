//! Number formatting, CSV rendering and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;
use voi_core::engine::VoiCurve;
use voi_core::geometry::HartleyPoint;
use voi_core::measure::LogBase;

use crate::error::{CliError, CliResult};

pub const CURVE_HEADER: &str = "beta,Z,Gamma,expected_cost,info_nats,info_base,value";

/// 12 significant digits, fixed notation for moderate exponents, no trailing zeros.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        let rounded: f64 = sci.parse().expect("round trip");
        trim(&format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

pub fn curve_csv(curve: &VoiCurve) -> String {
    let mut out = String::with_capacity(64 * (curve.points.len() + 1));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for p in &curve.points {
        let row = [
            p.beta,
            p.z,
            p.gamma,
            p.expected_cost,
            p.info_nats,
            curve.base.from_nats(p.info_nats),
            p.value,
        ];
        out.push_str(
            &row.iter()
                .map(|v| fmt_num(*v))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

pub fn hartley_csv(points: &[HartleyPoint], base: LogBase) -> String {
    let mut out = String::from("bits,info,value\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            p.bits,
            fmt_num(p.info(base)),
            fmt_num(p.value)
        ));
    }
    out
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(contents.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            });
    };
    let wrap = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(contents.as_bytes()).map_err(wrap)?;
    tmp.flush().map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(1.5), "1.5");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_num(-0.1), "-0.1");
        assert_eq!(fmt_num(1e-3), "0.001");
        assert_eq!(fmt_num(1.234e-7), "1.234e-7");
        assert_eq!(fmt_num(6.02214076e23), "6.02214076e23");
        assert_eq!(fmt_num(123456789012.0), "123456789012");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit(Some(&path), "a\n").unwrap();
        emit(Some(&path), "b\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "b\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let missing = dir.path().join("nope").join("out.csv");
        assert!(matches!(
            emit(Some(&missing), "x"),
            Err(CliError::Write { .. })
        ));
    }
}
