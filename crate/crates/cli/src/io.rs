//! CSV, SVG and JSON-lines serialization.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! written CSV parses back to the identical bits.

use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

/// Parsed CSV: one column of values or two columns of points.
#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    Values(Vec<f64>),
    Points(Vec<f64>, Vec<f64>),
}

pub fn parse_csv(text: &str) -> Result<Table> {
    let mut columns: Option<usize> = None;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("line {}: not a number in {line:?}", lineno + 1))?;
        if fields.iter().any(|v| !v.is_finite()) {
            bail!("line {}: non-finite value", lineno + 1);
        }
        let width = *columns.get_or_insert(fields.len());
        if fields.len() != width {
            bail!("line {}: expected {width} columns, found {}", lineno + 1, fields.len());
        }
        match width {
            1 => xs.push(fields[0]),
            2 => {
                xs.push(fields[0]);
                ys.push(fields[1]);
            }
            n => bail!("line {}: expected 1 or 2 columns, found {n}", lineno + 1),
        }
    }
    match columns {
        None => bail!("no data rows"),
        Some(1) => Ok(Table::Values(xs)),
        Some(_) => Ok(Table::Points(xs, ys)),
    }
}

pub fn read_csv(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_csv(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_csv(table: &Table, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        let _ = writeln!(out, "# {h}");
    }
    match table {
        Table::Values(v) => v.iter().for_each(|x| {
            let _ = writeln!(out, "{x:?}");
        }),
        Table::Points(x, y) => x.iter().zip(y).for_each(|(a, b)| {
            let _ = writeln!(out, "{a:?},{b:?}");
        }),
    }
    out
}

/// Generic rows for experiment tables.
pub fn write_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("# {}\n", header.join(","));
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// One `<path>` through the points. The y axis is flipped so the drawing
/// keeps its mathematical orientation.
pub fn svg_path(x: &[f64], y: &[f64], closed: bool, stroke: &str) -> Result<String> {
    if x.is_empty() {
        bail!("no points to draw");
    }
    let fy: Vec<f64> = y.iter().map(|v| 0.0 - v).collect();
    let bounds = |v: &[f64]| v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| (lo.min(a), hi.max(a)));
    let (x0, x1) = bounds(x);
    let (y0, y1) = bounds(&fy);
    let extent = (x1 - x0).max(y1 - y0);
    let extent = if extent > 0.0 { extent } else { 1.0 };
    let w = if x1 > x0 { x1 - x0 } else { extent };
    let h = if y1 > y0 { y1 - y0 } else { extent };
    let (mx, my) = (0.05 * w, 0.05 * h);

    let mut d = String::new();
    for (i, (a, b)) in x.iter().zip(&fy).enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{}{cmd} {a:.6} {b:.6}", if i == 0 { "" } else { " " });
    }
    if closed {
        d.push_str(" Z");
    }
    Ok(format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
            "  <path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.6}\"/>\n",
            "</svg>\n"
        ),
        x0 - mx,
        y0 - my,
        w + 2.0 * mx,
        h + 2.0 * my,
        d,
        stroke,
        0.004 * extent,
    ))
}

pub fn append_jsonl(path: &Path, record: &impl Serialize) -> Result<()> {
    let line = serde_json::to_string(record)?;
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    writeln!(file, "{line}")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_one_and_two_columns() {
        assert_eq!(parse_csv("# v\n1\n2.5\n\n-3e-2\n").unwrap(), Table::Values(vec![1.0, 2.5, -0.03]));
        assert_eq!(
            parse_csv("0, 1\n2 ,3\n").unwrap(),
            Table::Points(vec![0.0, 2.0], vec![1.0, 3.0])
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("# only a header\n").is_err());
        assert!(parse_csv("1,2\n3\n").is_err());
        assert!(parse_csv("1,2,3\n").is_err());
        assert!(parse_csv("abc\n").is_err());
        assert!(parse_csv("NaN\n").is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let v = vec![0.1, 1.0 / 3.0, -2.0f64.sqrt(), 1e-300, 6.02214076e23, -0.0];
        let t = Table::Points(v.clone(), v.iter().rev().copied().collect());
        let back = parse_csv(&write_csv(&t, Some("x,y"))).unwrap();
        match (t, back) {
            (Table::Points(a, b), Table::Points(c, d)) => {
                assert!(a.iter().zip(&c).all(|(p, q)| p.to_bits() == q.to_bits()));
                assert!(b.iter().zip(&d).all(|(p, q)| p.to_bits() == q.to_bits()));
            }
            _ => panic!("shape changed"),
        }
    }

    #[test]
    fn square_svg() {
        let svg = svg_path(&[0.0, 1.0, 1.0, 0.0], &[0.0, 0.0, 1.0, 1.0], false, "black").unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("d=\"M 0.000000 0.000000 L 1.000000 0.000000 L 1.000000 -1.000000 L 0.000000 -1.000000\""));
        assert!(svg.contains("viewBox=\"-0.050000 -1.050000 1.100000 1.100000\""));
        let closed = svg_path(&[0.0, 1.0, 1.0], &[0.0, 0.0, 1.0], true, "black").unwrap();
        assert!(closed.contains(" Z\""));
    }

    #[test]
    fn degenerate_svg_still_has_a_box() {
        let svg = svg_path(&[2.0], &[3.0], false, "red").unwrap();
        assert!(svg.contains("viewBox=\"1.950000 -3.050000 1.100000 1.100000\""));
        assert!(svg_path(&[], &[], false, "red").is_err());
    }
}
