//! Pairwise and baseline-versus-series comparisons, and their renderings.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::change::{
    detect_distinctive, diagnostics, difference_profile, format_rounded, ChangeDiagnostics,
    DepthClass, DifferenceProfile, Dispersion, DistinctiveChanges, Tail,
};
use crate::error::{Error, Result};
use crate::io::table_digest;
use crate::similarity::{similarity_index, SimilarityResult};
use crate::similarity_test::{
    decide, CriticalValueSource, CriticalValueTable, CvPolicy, Decision, McConfig, SourceKind,
    TestOutcome,
};
use crate::structures::{align, normalize, FrequencyTable};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parameters of the similarity test used by comparisons.
#[derive(Debug, Clone)]
pub struct TestSettings {
    pub alpha: f64,
    pub policy: CvPolicy,
    pub mc: McConfig,
    pub table: CriticalValueTable,
}

impl Default for TestSettings {
    fn default() -> Self {
        TestSettings {
            alpha: 0.05,
            policy: CvPolicy::EmbeddedOnly,
            mc: McConfig::default(),
            table: CriticalValueTable::embedded(),
        }
    }
}

impl TestSettings {
    fn critical_value(&self, k: usize) -> Result<CriticalValueSource> {
        self.table
            .critical_value(self.alpha, k, self.policy, &self.mc)
    }
}

/// One category of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryRow {
    pub category: String,
    pub share_x: f64,
    pub share_y: f64,
    pub min: f64,
    pub d: f64,
    pub r: Option<f64>,
    pub distinctive: bool,
    pub depth: DepthClass,
    pub dispersion: Dispersion,
}

/// Full analysis of one comparison.
///
/// `x` is the compared population and `y` the baseline, so `d = x - y`
/// is the change from the baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub tool_version: &'static str,
    pub input_digest: String,
    pub baseline: String,
    pub compared: String,
    pub k: usize,
    pub categories: Vec<CategoryRow>,
    pub similarity: SimilarityResult,
    pub test: TestOutcome,
    pub profile: DifferenceProfile,
    pub distinctive: DistinctiveChanges,
    pub diagnostics: ChangeDiagnostics,
}

impl ComparisonReport {
    /// The `ω_p` carried by the similarity result, the test and the profile agree.
    pub fn is_consistent(&self) -> bool {
        let omega = self.similarity.omega_p;
        (omega - self.test.omega_p_empirical).abs() <= 1e-12
            && (omega - self.profile.omega_p).abs() <= 1e-12
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesReport {
    pub baseline: String,
    pub comparisons: Vec<ComparisonReport>,
}

/// Compares population `compared` against `baseline`.
pub fn compare_pair(
    table: &FrequencyTable,
    baseline: &str,
    compared: &str,
    settings: &TestSettings,
) -> Result<ComparisonReport> {
    let digest = table_digest(table);
    let k = table.categories().len();
    // Validate populations before paying for a Monte Carlo run.
    normalize(table, baseline)?;
    normalize(table, compared)?;
    let critical = settings.critical_value(k)?;
    assemble(table, baseline, compared, critical, digest)
}

/// Compares every other population of `table` against `baseline`, in input order.
pub fn compare_series(
    table: &FrequencyTable,
    baseline: &str,
    settings: &TestSettings,
) -> Result<SeriesReport> {
    if !table.populations().iter().any(|p| p == baseline) {
        return Err(Error::UnknownPopulation(baseline.to_string()));
    }
    if table.populations().len() < 2 {
        return Err(Error::SinglePopulation);
    }
    let digest = table_digest(table);
    let critical = settings.critical_value(table.categories().len())?;
    let others: Vec<&String> = table
        .populations()
        .iter()
        .filter(|p| p.as_str() != baseline)
        .collect();
    let comparisons = others
        .par_iter()
        .map(|other| assemble(table, baseline, other, critical.clone(), digest.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesReport {
        baseline: baseline.to_string(),
        comparisons,
    })
}

fn assemble(
    table: &FrequencyTable,
    baseline: &str,
    compared: &str,
    critical: CriticalValueSource,
    input_digest: String,
) -> Result<ComparisonReport> {
    let x = normalize(table, compared)?;
    let y = normalize(table, baseline)?;
    let pair = align(&x, &y);
    let similarity = similarity_index(&pair);
    let test = decide(similarity.omega_p, critical);
    let profile = difference_profile(&pair, similarity.omega_p)?;
    let distinctive = detect_distinctive(&profile);
    let diagnostics = diagnostics(&profile);

    let categories = pair
        .categories()
        .iter()
        .enumerate()
        .map(|(i, label)| CategoryRow {
            category: label.to_string(),
            share_x: pair.x().shares()[i],
            share_y: pair.y().shares()[i],
            min: similarity.per_category_min[i],
            d: profile.d[i],
            r: profile.r.as_ref().map(|r| r[i]),
            distinctive: distinctive.flags[i],
            depth: distinctive.depths[i],
            dispersion: diagnostics.dispersion[i],
        })
        .collect();

    let report = ComparisonReport {
        tool_version: TOOL_VERSION,
        input_digest,
        baseline: baseline.to_string(),
        compared: compared.to_string(),
        k: pair.k(),
        categories,
        similarity,
        test,
        profile,
        distinctive,
        diagnostics,
    };
    debug_assert!(report.is_consistent());
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

pub fn render_report(report: &ComparisonReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut out = csv_header(false);
            csv_rows(report, false, &mut out);
            out
        }
        OutputFormat::Text => render_text(report),
    }
}

pub fn render_series(series: &SeriesReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(series),
        OutputFormat::Csv => {
            let mut out = csv_header(true);
            for report in &series.comparisons {
                csv_rows(report, true, &mut out);
            }
            out
        }
        OutputFormat::Text => series
            .comparisons
            .iter()
            .map(render_text)
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn csv_header(with_pair: bool) -> String {
    let mut header = String::new();
    if with_pair {
        header.push_str("baseline,compared,");
    }
    header.push_str("category,share_x,share_y,d,r,distinctive,depth,dispersion\n");
    header
}

fn csv_rows(report: &ComparisonReport, with_pair: bool, out: &mut String) {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for row in &report.categories {
        let mut record = Vec::with_capacity(10);
        if with_pair {
            record.push(report.baseline.clone());
            record.push(report.compared.clone());
        }
        record.extend([
            row.category.clone(),
            row.share_x.to_string(),
            row.share_y.to_string(),
            row.d.to_string(),
            row.r.map(|r| r.to_string()).unwrap_or_default(),
            row.distinctive.to_string(),
            row.depth.as_str().to_string(),
            row.dispersion.as_str().to_string(),
        ]);
        writer.write_record(&record).expect("writing to memory");
    }
    out.push_str(&String::from_utf8(writer.into_inner().expect("flush to memory")).expect("UTF-8"));
}

/// Two decimals, half away from zero, no negative zero.
fn fixed2(value: f64) -> String {
    let rounded = (value * 100.0).round() / 100.0;
    let text = format!("{rounded:.2}");
    if text == "-0.00" {
        "0.00".into()
    } else {
        text
    }
}

fn render_text(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let label_width = report
        .categories
        .iter()
        .map(|row| row.category.chars().count())
        .max()
        .unwrap_or(0)
        .max(8);
    let _ = writeln!(
        out,
        "{} vs {} (k = {}, structshift {})",
        report.baseline, report.compared, report.k, report.tool_version
    );
    let _ = writeln!(out, "input sha256 {}", report.input_digest);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "  i  {:<w$}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}  {:<15}  dispersion",
        "category",
        report.baseline,
        report.compared,
        "min",
        "d",
        "r",
        "depth",
        w = label_width
    );
    for (i, row) in report.categories.iter().enumerate() {
        let mark = if row.distinctive { "*" } else { " " };
        let r = row.r.map(fixed2).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>3}  {:<w$}  {:>8}  {:>8}  {:>8}  {:>7}{}  {:>7}{}  {:<15}  {}",
            i + 1,
            row.category,
            fixed2(row.share_y),
            fixed2(row.share_x),
            fixed2(row.min),
            fixed2(row.d),
            mark,
            r,
            mark,
            row.depth.as_str(),
            row.dispersion.as_str(),
            w = label_width
        );
    }
    let sum = |f: fn(&CategoryRow) -> f64| report.categories.iter().map(f).sum::<f64>();
    let _ = writeln!(
        out,
        "{:>3}  {:<w$}  {:>8}  {:>8}  {:>8}  {:>7}",
        "",
        "SUM",
        fixed2(sum(|r| r.share_y)),
        fixed2(sum(|r| r.share_x)),
        fixed2(sum(|r| r.min)),
        fixed2(sum(|r| r.d)),
        w = label_width
    );
    let p = &report.profile;
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "d_min {}   d_max {}   g_p {}",
        fixed2(p.d_min),
        fixed2(p.d_max),
        fixed2(p.g_p)
    );
    let _ = writeln!(
        out,
        "similarity index {}   Bray-Curtis distance {}",
        fixed2(report.similarity.omega_p),
        fixed2(report.similarity.bray_curtis)
    );
    let critical = &report.test.critical;
    let source = match critical.kind {
        SourceKind::Embedded => "tabulated".to_string(),
        SourceKind::MonteCarlo => match &critical.monte_carlo {
            Some(mc) => format!(
                "Monte Carlo, {} replicates, seed {}",
                mc.replicates, mc.seed
            ),
            None => "Monte Carlo".to_string(),
        },
    };
    let verdict = match report.test.decision {
        Decision::Similar => "similar (H0 of dissimilarity rejected)",
        Decision::NotSimilar => "not shown similar (H0 of dissimilarity not rejected)",
    };
    let _ = writeln!(
        out,
        "similarity test: alpha {}, critical value {} ({}) -> {}",
        critical.alpha,
        format_rounded(critical.value, 4),
        source,
        verdict
    );
    if report.distinctive.distinctive.is_empty() {
        let _ = writeln!(out, "distinctive changes: none");
    } else {
        let names: Vec<String> = report
            .distinctive
            .distinctive
            .iter()
            .map(|c| c.to_string())
            .collect();
        let side = match report.distinctive.tail {
            Tail::Negative => "negative",
            Tail::Positive => "positive",
            Tail::Balanced => "balanced",
        };
        let _ = writeln!(
            out,
            "distinctive changes: {} ({} side)",
            names.join(", "),
            side
        );
        let _ = writeln!(out, "  absolute area {}", p.abs_interval.render(2));
        if let Some(rel) = &p.rel_interval {
            let _ = writeln!(out, "  relative area {}", rel.render(2));
        }
    }
    let diag = &report.diagnostics;
    let _ = writeln!(
        out,
        "S {}   M3 {:.3e}   A {}",
        fixed2(diag.s),
        diag.m3,
        diag.asymmetry.map(fixed2).unwrap_or_else(|| "-".into())
    );
    if report.categories.iter().any(|r| r.distinctive) {
        let _ = writeln!(out, "* distinctive change");
    }
    out
}
