//! Semilog convergence figures as self-contained SVG.

use std::fmt::Write as _;
use std::path::Path;

use hive_vqe::TraceRecord64;

use crate::artifact::{read_trace, trace_path, RunArtifact};
use crate::error::{HarnessError, Result};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
/// Errors below this are drawn at this height.
const FLOOR: f64 = 1e-16;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Debug)]
pub struct Curve {
    pub label: String,
    pub records: Vec<TraceRecord64>,
}

/// Loads a curve from a run directory or `trace.csv`; the label comes from
/// the neighbouring `run.json` when there is one.
pub fn load_curve(path: &Path) -> Result<Curve> {
    let csv = trace_path(path);
    let records = read_trace(&csv)?;
    if records.is_empty() {
        return Err(HarnessError::parse(&csv, "trace has no rows"));
    }
    let dir = csv.parent().unwrap_or(Path::new("."));
    let label = match RunArtifact::read_dir(dir) {
        Ok(a) => format!(
            "{} n={} L={} seed {}",
            a.optimizer,
            a.config.qubits.unwrap_or(0),
            a.config.depth.unwrap_or(0),
            a.config.seed.unwrap_or(0)
        ),
        Err(_) => dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| csv.display().to_string()),
    };
    Ok(Curve { label, records })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Error versus iteration on a log axis, with a dashed line at `target`.
pub fn render_svg(curves: &[Curve], target: f64) -> Result<String> {
    if curves.is_empty() {
        return Err(HarnessError::Usage("nothing to plot".into()));
    }
    if let Some(c) = curves.iter().find(|c| c.records.is_empty()) {
        return Err(HarnessError::Usage(format!("trace `{}` has no rows", c.label)));
    }
    let log = |v: f64| v.max(FLOOR).log10();
    let max_iter = curves
        .iter()
        .flat_map(|c| c.records.iter().map(|r| r.iteration))
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let values = curves.iter().flat_map(|c| c.records.iter().map(|r| log(r.abs_error)));
    let (mut lo, mut hi) = values.fold((log(target), log(target)), |(a, b), v| (a.min(v), b.max(v)));
    lo = lo.floor() - if lo.fract() == 0.0 { 1.0 } else { 0.0 };
    hi = hi.ceil().max(lo + 1.0);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |it: f64| LEFT + plot_w * (it / max_iter);
    let y = |lv: f64| TOP + plot_h * (hi - lv) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    // decades on the y axis
    let step = ((hi - lo) / 10.0).ceil().max(1.0) as i64;
    let mut d = lo as i64;
    while d <= hi as i64 {
        let yy = y(d as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            yy + 4.0
        );
        d += step;
    }
    for t in x_ticks(max_iter) {
        let xx = x(t as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{xx:.2}" y1="{:.2}" x2="{xx:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{xx:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">iteration</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">|E - E_gs|</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let ty = y(log(target));
    let _ = writeln!(
        s,
        r#"<line class="target" x1="{LEFT}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="black" stroke-dasharray="6,4"/>"#,
        LEFT + plot_w
    );

    for (k, c) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = c
            .records
            .iter()
            .map(|r| format!("{:.2},{:.2}", x(r.iteration as f64), y(log(r.abs_error))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="curve" fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            points.join(" "),
            escape(&c.label)
        );
        let ly = TOP + 14.0 + 18.0 * k as f64;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text class="label" x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&c.label)
        );
    }
    let ly = TOP + 14.0 + 18.0 * curves.len() as f64;
    let lx = LEFT + plot_w + 12.0;
    let _ = writeln!(
        s,
        r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="black" stroke-dasharray="6,4"/>"#,
        lx + 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}">target {}</text>"#,
        lx + 26.0,
        ly + 4.0,
        crate::format::g15(target)
    );
    s.push_str("</svg>\n");
    Ok(s)
}

fn x_ticks(max: f64) -> Vec<u64> {
    let raw = max / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
        .max(1.0) as u64;
    (0..=max as u64).step_by(step as usize).collect()
}
