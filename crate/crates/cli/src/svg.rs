//! Minimal SVG line charts of `V` against `I`.

use std::fmt::Write;

use voi_core::measure::LogBase;

use crate::error::{invalid, CliError, CliResult};

/// Series colours in plotting order: blue, yellow, green, then extras.
pub const PALETTE: [&str; 6] = [
    "#1f77b4", "#e6b400", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 55.0;
const TICKS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// `(I in the chart's base, V)`.
    pub points: Vec<(f64, f64)>,
}

/// A curve read back from CSV, with the base implied by its information columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCurve {
    pub points: Vec<(f64, f64)>,
    /// `None` when every row has zero information.
    pub base: Option<LogBase>,
}

pub fn parse_curve_csv(name: &str, text: &str) -> CliResult<ParsedCurve> {
    let bad = |msg: String| invalid("--curve", format!("{name}: {msg}"));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| bad("empty file".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |key: &str| {
        header
            .iter()
            .position(|h| *h == key)
            .ok_or_else(|| bad(format!("missing column {key}")))
    };
    let (nats_col, base_col, value_col) = (col("info_nats")?, col("info_base")?, col("value")?);
    let mut points = Vec::new();
    let mut base: Option<LogBase> = None;
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let get = |c: usize| -> CliResult<f64> {
            fields
                .get(c)
                .and_then(|f| f.trim().parse().ok())
                .ok_or_else(|| bad(format!("row {}: bad number in column {}", i + 2, header[c])))
        };
        let (nats, info, value) = (get(nats_col)?, get(base_col)?, get(value_col)?);
        if nats > 1e-12 {
            let ratio = info / nats;
            let row_base = if (ratio - 1.0).abs() < 1e-6 {
                LogBase::Nats
            } else if (ratio * std::f64::consts::LN_2 - 1.0).abs() < 1e-6 {
                LogBase::Bits
            } else {
                return Err(bad(format!("row {}: unrecognised information base", i + 2)));
            };
            if base.is_some_and(|b| b != row_base) {
                return Err(CliError::Validation("mixed information bases".into()));
            }
            base = Some(row_base);
        }
        points.push((info, value));
    }
    if points.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(ParsedCurve { points, base })
}

/// Combines per-curve bases; all known bases must agree.
pub fn common_base(
    bases: impl IntoIterator<Item = Option<LogBase>>,
    fallback: LogBase,
) -> CliResult<LogBase> {
    let mut found: Option<LogBase> = None;
    for b in bases.into_iter().flatten() {
        if found.is_some_and(|f| f != b) {
            return Err(CliError::Validation("mixed information bases".into()));
        }
        found = Some(b);
    }
    Ok(found.unwrap_or(fallback))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

struct Frame {
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        LEFT + (v / self.x_max) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Renders curves and optional Hartley points.
pub fn render(series: &[Series], dots: &[(f64, f64)], base: LogBase) -> CliResult<String> {
    if series.is_empty() {
        return Err(invalid("plot", "no curves to draw"));
    }
    let all = series
        .iter()
        .flat_map(|s| s.points.iter())
        .chain(dots.iter());
    let (mut x_max, mut y_min, mut y_max) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &(x, y) in all {
        if x.is_finite() && y.is_finite() {
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_max <= 0.0 {
        x_max = 1.0;
    }
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    let f = Frame {
        x_max,
        y_min,
        y_max,
    };
    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (x0, x1, y0, y1) = (f.x(0.0), f.x(x_max), f.y(y_min), f.y(y_max));
    let _ = writeln!(
        w,
        r#"<g stroke="black" stroke-width="1"><line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/></g>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let (xv, yv) = (t * x_max, y_min + t * (y_max - y_min));
        let (px, py) = (f.x(xv), f.y(yv));
        let _ = writeln!(
            w,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 20.0,
            tick_label(xv)
        );
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let unit = match base {
        LogBase::Bits => "bits",
        LogBase::Nats => "nats",
    };
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">information I ({unit})</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">value V</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", f.x(x), f.y(y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
    }
    for &(x, y) in dots {
        let _ = writeln!(
            w,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="black"/>"#,
            f.x(x),
            f.y(y)
        );
    }
    let lx = WIDTH - RIGHT + 20.0;
    for (k, s) in series.iter().enumerate() {
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let colour = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            w,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 24.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    if !dots.is_empty() {
        let ly = TOP + 10.0 + 20.0 * series.len() as f64;
        let _ = writeln!(
            w,
            r#"<rect x="{:.2}" y="{:.2}" width="7" height="7" fill="black"/>"#,
            lx + 8.5,
            ly - 3.5
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}">Hartley</text>"#,
            lx + 30.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_detection() {
        let bits = "beta,Z,Gamma,expected_cost,info_nats,info_base,value\n0,1,0,2,0,0,0\n1,0.3,-1.2,1,0.6931471805599453,1,1\n";
        let parsed = parse_curve_csv("a", bits).unwrap();
        assert_eq!(parsed.base, Some(LogBase::Bits));
        assert_eq!(parsed.points, vec![(0.0, 0.0), (1.0, 1.0)]);
        let nats = bits.replace(",1,1\n", ",0.6931471805599453,1\n");
        assert_eq!(
            parse_curve_csv("b", &nats).unwrap().base,
            Some(LogBase::Nats)
        );
        let zero = "info_nats,info_base,value\n0,0,0\n";
        assert_eq!(parse_curve_csv("c", zero).unwrap().base, None);
        assert!(parse_curve_csv("d", "value\n1\n").is_err());
    }

    #[test]
    fn mixed_bases_rejected() {
        let err = common_base(
            [Some(LogBase::Bits), None, Some(LogBase::Nats)],
            LogBase::Bits,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "mixed information bases");
        assert_eq!(
            common_base([None, None], LogBase::Nats).unwrap(),
            LogBase::Nats
        );
    }

    #[test]
    fn element_counts() {
        let s = |l: &str| Series {
            label: l.into(),
            points: vec![(0.0, 0.0), (1.0, 0.5), (2.0, 0.7)],
        };
        let svg = render(
            &[s("a"), s("b<c")],
            &[(1.0, 0.4), (2.0, 0.7)],
            LogBase::Bits,
        )
        .unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("b&lt;c"));
        assert!(svg.find(PALETTE[0]).unwrap() < svg.find(PALETTE[1]).unwrap());
        assert!(render(&[], &[], LogBase::Bits).is_err());
    }
}
