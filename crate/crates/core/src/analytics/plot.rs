use std::path::{Path, PathBuf};

use plotters::prelude::*;

use super::filters::moving_average;
use super::frame::{EnsembleSummary, TimeSeriesFrame};
use crate::error::{Result, SimError};

/// One line, with an optional shaded band.
#[derive(Debug, Clone)]
pub struct FigureSeries {
    pub label: String,
    pub values: Vec<f64>,
    pub band: Option<(Vec<f64>, Vec<f64>)>,
}

const PALETTE: [RGBColor; 8] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(255, 127, 14),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
    RGBColor(227, 119, 194),
    RGBColor(127, 127, 127),
];

fn plot_err<E: std::fmt::Display>(e: E) -> SimError {
    SimError::Plot(e.to_string())
}

/// Line chart of `series` against `x`, written as SVG.
pub fn plot_lines(path: impl AsRef<Path>, title: &str, x: &[f64], series: &[FigureSeries]) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))?;
    }
    let finite = |v: &&f64| v.is_finite();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        let band = s.band.iter().flat_map(|(a, b)| a.iter().chain(b));
        for v in s.values.iter().chain(band).filter(finite) {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if hi - lo < 1e-12 {
        hi += 0.5 + hi.abs() * 0.05;
        lo -= 0.5 + lo.abs() * 0.05;
    }
    let pad = (hi - lo) * 0.05;
    let (x0, x1) = match (x.first(), x.last()) {
        (Some(a), Some(b)) if b > a => (*a, *b),
        (Some(a), _) => (*a, *a + 1.0),
        _ => (0.0, 1.0),
    };

    let root = SVGBackend::new(path, (960, 540)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(70)
        .build_cartesian_2d(x0..x1, (lo - pad)..(hi + pad))
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("period")
        .light_line_style(WHITE.mix(0.0))
        .draw()
        .map_err(plot_err)?;
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if let Some((lower, upper)) = &s.band {
            let mut poly: Vec<(f64, f64)> = x.iter().copied().zip(upper.iter().copied()).collect();
            poly.extend(x.iter().copied().zip(lower.iter().copied()).rev());
            poly.retain(|p| p.1.is_finite());
            chart
                .draw_series(std::iter::once(Polygon::new(poly, color.mix(0.18))))
                .map_err(plot_err)?;
        }
        let pts = x
            .iter()
            .copied()
            .zip(s.values.iter().copied())
            .filter(|p| p.1.is_finite());
        chart
            .draw_series(LineSeries::new(pts, color.stroke_width(2)))
            .map_err(plot_err)?
            .label(s.label.clone())
            .legend(move |(a, b)| PathElement::new(vec![(a, b), (a + 18, b)], color.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .position(SeriesLabelPosition::UpperRight)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}

/// Figure groups emitted for an ensemble.
const FIGURES: &[(&str, &str, &[&str])] = &[
    ("volumes", "Interbank volumes (levels)", &["volume_on", "volume_term"]),
    ("rates", "Interbank rates and corridor", &["rate_on", "rate_term", "icb_d", "icb_t", "icb_l"]),
    ("rationing", "Interbank rationing", &["gamma_on", "gamma_term"]),
    ("stability", "Margin of stability by interbank status", &["ms_all", "ms_deficit", "ms_surplus"]),
    ("nsfr_components", "Stable funding shares and maturity gaps", &["asf", "rsf", "pi_b", "pi_l"]),
    ("facilities", "Standing facilities", &["facility_rl", "facility_rd"]),
    ("flows", "Payment flow balances", &["flow_abs", "flow_sum"]),
    ("loans_by_status", "Loans by interbank status", &["loans_deficit", "loans_surplus"]),
    ("demand_supply", "Interbank demand and supply", &["df_on", "lf_on", "df_term", "lf_term"]),
    ("output", "Output", &["output"]),
];

/// Writes one SVG per figure group: ensemble mean with an inter-decile band,
/// plus a de-trended variant of the volume figure when `cycles` is given.
pub fn plot_ensemble_figures(
    summary: &EnsembleSummary,
    cycles: Option<&TimeSeriesFrame>,
    out_dir: impl AsRef<Path>,
    tag: &str,
) -> Result<Vec<PathBuf>> {
    let out = out_dir.as_ref();
    let x: Vec<f64> = summary.periods.iter().map(|&p| f64::from(p)).collect();
    let mut written = Vec::new();
    for (file, title, vars) in FIGURES {
        let series: Vec<FigureSeries> = vars
            .iter()
            .filter_map(|v| {
                summary.get(v).map(|s| FigureSeries {
                    label: (*v).to_string(),
                    values: s.mean.clone(),
                    band: Some((s.lower.clone(), s.upper.clone())),
                })
            })
            .collect();
        if series.is_empty() {
            continue;
        }
        let path = out.join(format!("{tag}{file}.svg"));
        plot_lines(&path, title, &x, &series)?;
        written.push(path);
    }
    if let Some(c) = cycles {
        let x: Vec<f64> = c.periods.iter().map(|&p| f64::from(p)).collect();
        let series: Vec<FigureSeries> = ["volume_on", "volume_term"]
            .iter()
            .filter_map(|v| {
                c.column(v).map(|col| FigureSeries {
                    label: format!("{v} (cycle)"),
                    values: col.to_vec(),
                    band: None,
                })
            })
            .collect();
        let path = out.join(format!("{tag}volumes_detrended.svg"));
        plot_lines(&path, "Interbank volumes (HP cycle)", &x, &series)?;
        written.push(path);
    }
    Ok(written)
}

/// One line per grid point for `variable`, smoothed by a trailing moving
/// average of `window` periods.
pub fn plot_sweep(
    path: impl AsRef<Path>,
    param: &str,
    variable: &str,
    points: &[(f64, TimeSeriesFrame)],
    window: usize,
) -> Result<()> {
    let Some((_, first)) = points.first() else {
        return Ok(());
    };
    let x: Vec<f64> = first.periods.iter().map(|&p| f64::from(p)).collect();
    let series: Vec<FigureSeries> = points
        .iter()
        .filter_map(|(v, f)| {
            f.column(variable).map(|col| FigureSeries {
                label: format!("{param} = {v}"),
                values: moving_average(col, window),
                band: None,
            })
        })
        .collect();
    plot_lines(
        path,
        &format!("{variable} across {param} ({window}-period moving average)"),
        &x,
        &series,
    )
}
