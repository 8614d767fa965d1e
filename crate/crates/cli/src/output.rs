//! Frontier CSV, JSON metadata sidecars and SVG plots.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use icdms_core::Frontier;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 3] = ["r1_bits", "r2_bits", "region"];

/// Grid samples merged with the exact Pareto corners, by increasing `r1`.
pub fn frontier_rows(f: &Frontier) -> Vec<(f64, f64)> {
    let mut rows: Vec<(f64, f64)> = f.points().chain(f.vertices.iter().copied()).collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    rows.dedup_by(|b, a| a.0 == b.0);
    rows
}

/// Writes one block of rows per frontier, labelled by `region`.
pub fn write_csv(path: &Path, frontiers: &[(String, Frontier)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for (label, f) in frontiers {
        for (r1, r2) in frontier_rows(f) {
            w.write_record([r1.to_string(), r2.to_string(), label.clone()])?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("metadata serializes");
    let mut file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    writeln!(file, "{text}").map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    Ok(dir.to_path_buf())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Tick spacing of roughly `span / 6`, rounded to 1, 2 or 5 times a power
/// of ten.
fn tick_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let nice = if r <= 1.0 {
        1.0
    } else if r <= 2.0 {
        2.0
    } else if r <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Static 800×600 overlay of the frontiers, axes in bits.
pub fn render_svg(title: &str, frontiers: &[(String, Frontier)]) -> String {
    let all = frontiers.iter().flat_map(|(_, f)| frontier_rows(f));
    let (xmax, ymax) = all.fold((0.0f64, 0.0f64), |(x, y), p| (x.max(p.0), y.max(p.1)));
    let xmax = if xmax > 0.0 { xmax * 1.05 } else { 1.0 };
    let ymax = if ymax > 0.0 { ymax * 1.05 } else { 1.0 };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + x / xmax * pw;
    let sy = |y: f64| TOP + ph - y / ymax * ph;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));

    for (axis_max, horizontal) in [(xmax, true), (ymax, false)] {
        let step = tick_step(axis_max);
        let mut k = 0;
        loop {
            let v = k as f64 * step;
            if v > axis_max + 1e-12 {
                break;
            }
            let label = format!(
                "{:.*}",
                if step < 1.0 {
                    (-step.log10().floor()) as usize
                } else {
                    0
                },
                v
            );
            if horizontal {
                let x = sx(v);
                s.push_str(&format!(
                    "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{TOP}\" stroke=\"#e0e0e0\"/>\n<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{label}</text>\n",
                    TOP + ph,
                    TOP + ph + 18.0
                ));
            } else {
                let y = sy(v);
                s.push_str(&format!(
                    "<line x1=\"{LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#e0e0e0\"/>\n<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>\n",
                    LEFT + pw,
                    LEFT - 8.0,
                    y + 4.0
                ));
            }
            k += 1;
        }
    }
    s.push_str(&format!(
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">R1 (bits)</text>\n",
        LEFT + pw / 2.0,
        HEIGHT - 20.0
    ));
    s.push_str(&format!(
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">R2 (bits)</text>\n",
        TOP + ph / 2.0,
        TOP + ph / 2.0
    ));

    for (i, (label, f)) in frontiers.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let rows = frontier_rows(f);
        // Close the region down to the r1 axis.
        let last = rows.last().map_or(0.0, |p| p.0);
        let pts: Vec<String> = std::iter::once((0.0, 0.0))
            .chain(rows.iter().copied())
            .chain(std::iter::once((last, 0.0)))
            .map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        let ly = TOP + 20.0 + 20.0 * i as f64;
        let lx = LEFT + pw - 120.0;
        s.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n<text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            escape(label)
        ));
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(path: &Path, title: &str, frontiers: &[(String, Frontier)]) -> Result<()> {
    fs::write(path, render_svg(title, frontiers)).map_err(|e| CliError::io(path, e))
}

/// Fixed-width decimal with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..=12).contains(&exp) {
        return format!("{x:.11e}");
    }
    format!("{x:.*}", (11 - exp).max(0) as usize)
}
