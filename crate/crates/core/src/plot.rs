//! Plot data for redrawing the differences of a comparison: one point per
//! category, the `±S` (typical) and `±3S` (non-outlier) bands, and the
//! distinctive flags.

use serde::Serialize;

use crate::change::Dispersion;
use crate::report::{to_json, ComparisonReport, SeriesReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotPoint {
    pub category: String,
    pub d: f64,
    pub distinctive: bool,
    pub dispersion: Dispersion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotData {
    pub baseline: String,
    pub compared: String,
    pub mean: f64,
    pub typical: Band,
    pub non_outlier: Band,
    pub points: Vec<PlotPoint>,
}

impl PlotData {
    pub fn from_report(report: &ComparisonReport) -> Self {
        let mean = report.diagnostics.mean;
        let s = report.diagnostics.s;
        PlotData {
            baseline: report.baseline.clone(),
            compared: report.compared.clone(),
            mean,
            typical: Band {
                lower: mean - s,
                upper: mean + s,
            },
            non_outlier: Band {
                lower: mean - 3.0 * s,
                upper: mean + 3.0 * s,
            },
            points: report
                .categories
                .iter()
                .map(|row| PlotPoint {
                    category: row.category.clone(),
                    d: row.d,
                    distinctive: row.distinctive,
                    dispersion: row.dispersion,
                })
                .collect(),
        }
    }
}

pub fn emit_plot_data(report: &ComparisonReport) -> String {
    to_json(&PlotData::from_report(report))
}

pub fn emit_series_plot_data(series: &SeriesReport) -> String {
    let panels: Vec<PlotData> = series
        .comparisons
        .iter()
        .map(PlotData::from_report)
        .collect();
    to_json(&panels)
}
