//! Deterministic SVG line charts for trajectory files.
//!
//! Fixed 960×540 viewport, one polyline per series, legend from the series
//! names. The output is a pure function of the input series, so identical
//! inputs produce byte-identical files.

use abc_ivp::error::{Error, Result};

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 168.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 48.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// One named polyline.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Splits a trajectory CSV into one series per state column. Lines starting
/// with `#` (the start-up node rows) are skipped.
pub fn trajectory_series(stem: &str, text: &str) -> Result<Vec<Series>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty trajectory file".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.first() != Some(&"t") || columns.len() < 2 {
        return Err(Error::Parse(format!(
            "trajectory header must be t,y_0,... got {header:?}"
        )));
    }
    let n_states = columns.len() - 1;
    let mut series: Vec<Series> = columns[1..]
        .iter()
        .map(|name| Series {
            name: if n_states == 1 {
                stem.to_string()
            } else {
                format!("{stem}:{name}")
            },
            points: Vec::new(),
        })
        .collect();
    for line in lines {
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::Parse(format!(
                "row has {} fields, expected {}: {line:?}",
                fields.len(),
                columns.len()
            )));
        }
        let mut values = fields.iter().map(|f| {
            f.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad float {f:?} in {line:?}")))
        });
        let t = values.next().unwrap()?;
        for s in series.iter_mut() {
            let y = values.next().unwrap()?;
            s.points.push((t, y));
        }
    }
    Ok(series)
}

fn data_bounds(series: &[Series]) -> Result<(f64, f64, f64, f64)> {
    let mut bounds = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Domain(format!(
                    "series {:?} contains a non-finite point",
                    s.name
                )));
            }
            bounds.0 = bounds.0.min(x);
            bounds.1 = bounds.1.max(x);
            bounds.2 = bounds.2.min(y);
            bounds.3 = bounds.3.max(y);
        }
    }
    if !bounds.0.is_finite() {
        return Err(Error::Domain("no data points to plot".into()));
    }
    // widen degenerate ranges so the scale stays finite
    if bounds.0 == bounds.1 {
        bounds.0 -= 0.5;
        bounds.1 += 0.5;
    }
    if bounds.2 == bounds.3 {
        bounds.2 -= 0.5;
        bounds.3 += 0.5;
    }
    Ok(bounds)
}

/// Renders the chart. Errors when the series list is empty or contains no
/// finite points; nothing is written in that case.
pub fn render(series: &[Series]) -> Result<String> {
    if series.is_empty() {
        return Err(Error::Domain("no series to plot".into()));
    }
    let (x0, x1, y0, y1) = data_bounds(series)?;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let map_x = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let map_y = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // axes
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM
    ));
    // range labels
    svg.push_str(&format!(
        "<text x=\"{MARGIN_LEFT}\" y=\"{}\" font-size=\"13\">{x0}</text>\n",
        HEIGHT - MARGIN_BOTTOM + 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"end\">{x1}</text>\n",
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM + 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"end\">{y0}</text>\n",
        MARGIN_LEFT - 6.0,
        HEIGHT - MARGIN_BOTTOM
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"end\">{y1}</text>\n",
        MARGIN_LEFT - 6.0,
        MARGIN_TOP + 12.0
    ));
    // polylines
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for &(x, y) in &s.points {
            points.push_str(&format!("{:.4},{:.4} ", map_x(x), map_y(y)));
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.trim_end()
        ));
    }
    // legend
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 16.0 * i as f64;
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"3\" fill=\"{color}\"/>\n",
            WIDTH - MARGIN_RIGHT + 10.0,
            y + 6.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
            WIDTH - MARGIN_RIGHT + 28.0,
            y + 11.0,
            s.name
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
