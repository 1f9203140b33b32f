//! Per-generation trace plots as standalone SVG, plus the CSV traces they are
//! drawn from.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::TrialResult;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotFiles {
    pub cost_csv: PathBuf,
    pub cost_svg: PathBuf,
    pub skew_csv: PathBuf,
    pub skew_svg: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn trace_csv(header: &str, points: &[(f64, f64)]) -> String {
    let mut out = format!("generation,{header}\n");
    for (g, v) in points {
        let _ = writeln!(out, "{g},{v:?}");
    }
    out
}

/// Writes `<prefix>_cost.{csv,svg}` and `<prefix>_skew.{csv,svg}`.
pub fn emit_plots(trial: &TrialResult, path_prefix: impl AsRef<Path>) -> Result<PlotFiles> {
    if trial.cost_trace.is_empty() {
        return Err(Error::config(format!(
            "trial {} has an empty trace",
            trial.index
        )));
    }
    let prefix = path_prefix.as_ref().to_string_lossy().into_owned();
    let files = PlotFiles {
        cost_csv: PathBuf::from(format!("{prefix}_cost.csv")),
        cost_svg: PathBuf::from(format!("{prefix}_cost.svg")),
        skew_csv: PathBuf::from(format!("{prefix}_skew.csv")),
        skew_svg: PathBuf::from(format!("{prefix}_skew.svg")),
    };
    let generation = |i: usize| (i + 1) as f64;
    let cost: Vec<(f64, f64)> = trial
        .cost_trace
        .iter()
        .enumerate()
        .map(|(i, &c)| (generation(i), c))
        .collect();
    let skew: Vec<(f64, f64)> = trial
        .skewness_trace
        .iter()
        .enumerate()
        .map(|(i, s)| (generation(i), s.value))
        .collect();

    write_file(&files.cost_csv, &trace_csv("lowest_cost", &cost))?;
    write_file(
        &files.cost_svg,
        &render_svg(
            &format!("Lowest cost, trial {}", trial.index),
            "lowest cost",
            &cost,
        ),
    )?;
    write_file(&files.skew_csv, &trace_csv("skewness", &skew))?;
    write_file(
        &files.skew_svg,
        &render_svg(
            &format!("Fitness skewness, trial {}", trial.index),
            "skewness",
            &skew,
        ),
    )?;
    Ok(files)
}

/// Re-renders a two-column trace CSV written by [`emit_plots`].
pub fn render_trace_svg(csv_path: impl AsRef<Path>, svg_path: impl AsRef<Path>) -> Result<()> {
    let csv_path = csv_path.as_ref();
    let mut reader = csv::Reader::from_path(csv_path).map_err(|e| Error::csv(csv_path, e))?;
    let label = reader
        .headers()
        .map_err(|e| Error::csv(csv_path, e))?
        .get(1)
        .unwrap_or("value")
        .to_string();
    let points: Vec<(f64, f64)> = reader
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::csv(csv_path, e))?;
    if points.is_empty() {
        return Err(Error::config(format!("{} has no rows", csv_path.display())));
    }
    let title = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_file(svg_path.as_ref(), &render_svg(&title, &label, &points))
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    }
}

fn render_svg(title: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let (x_lo, x_hi) = bounds(points.iter().map(|p| p.0));
    let (y_lo, y_hi) = bounds(points.iter().map(|p| p.1));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x_lo + t * (x_hi - x_lo);
        let yv = y_lo + t * (y_hi - y_lo);
        let (x, y) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP + plot_h,
            TOP + plot_h + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">generation</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
    svg.push_str(r##"<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points=""##);
    for (i, &(x, y)) in points.iter().enumerate() {
        if i > 0 {
            svg.push(' ');
        }
        let _ = write!(svg, "{:.2},{:.2}", sx(x), sy(y));
    }
    svg.push_str("\"/>\n</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Skewness;

    fn trial() -> TrialResult {
        TrialResult {
            index: 3,
            seed: 1,
            generations_evolved: 4,
            lowest_cost: 0.5,
            optimum_hit: false,
            capped: false,
            cost_trace: vec![4.0, 2.0, 2.0, 0.5],
            skewness_trace: [0.3, -0.2, -1.0, -0.4]
                .iter()
                .map(|&value| Skewness {
                    value,
                    degenerate: false,
                })
                .collect(),
        }
    }

    #[test]
    fn writes_four_files() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_plots(&trial(), dir.path().join("c_trial3")).unwrap();
        let skew = fs::read_to_string(&files.skew_csv).unwrap();
        assert_eq!(skew.lines().count(), 1 + 4);
        let svg = fs::read_to_string(&files.cost_svg).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));

        let again = tempfile::tempdir().unwrap();
        let files2 = emit_plots(&trial(), again.path().join("c_trial3")).unwrap();
        assert_eq!(svg, fs::read_to_string(files2.cost_svg).unwrap());
    }

    #[test]
    fn rerender_matches_original() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_plots(&trial(), dir.path().join("x")).unwrap();
        let out = dir.path().join("again.svg");
        render_trace_svg(&files.cost_csv, &out).unwrap();
        let a = fs::read_to_string(&out).unwrap();
        let b = fs::read_to_string(&files.cost_svg).unwrap();
        // Same polyline; only the title differs.
        let poly = |s: &str| s.lines().find(|l| l.starts_with("<polyline")).unwrap().to_string();
        assert_eq!(poly(&a), poly(&b));
    }

    #[test]
    fn empty_trace_rejected() {
        let mut t = trial();
        t.cost_trace.clear();
        assert!(emit_plots(&t, "unused").is_err());
    }
}
