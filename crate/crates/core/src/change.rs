//! Distinctive structural changes between two aligned structures.
//!
//! With `d_i = x_i - y_i` the per-category differences, the threshold
//! `g_p = min{|d_min|, |d_max|}` separates ordinary changes from distinctive
//! ones: a category is distinctive iff `|d_i| > g_p`, i.e. its relative
//! difference `r_i = d_i / g_p` lies outside `[-1, 1]`. Because the
//! differences sum to zero, distinctive categories all sit on the side of the
//! larger extreme. Moment diagnostics (dispersion, third central moment,
//! asymmetry) describe the same differences from a descriptive angle.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::similarity::similarity_index;
use crate::structures::{AlignedPair, CategoryLabel};

/// Two magnitudes closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Allowed disagreement between a supplied and a recomputed `ω_p`.
pub const OMEGA_CROSSCHECK: f64 = 1e-9;

/// Slack on `|r| = 1` when grading a bare relative difference.
const RELATIVE_TIE: f64 = 1e-9;

/// Interval on the real line with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lower_closed {
            v >= self.lower
        } else {
            v > self.lower
        };
        let below = if self.upper_closed {
            v <= self.upper
        } else {
            v < self.upper
        };
        above && below
    }

    /// Renders the interval with values rounded to `decimals` places and
    /// trailing zeros dropped, e.g. `[-0.1, -0.04)`.
    pub fn render(&self, decimals: u32) -> String {
        format!(
            "{}{}, {}{}",
            if self.lower_closed { '[' } else { '(' },
            format_rounded(self.lower, decimals),
            format_rounded(self.upper, decimals),
            if self.upper_closed { ']' } else { ')' },
        )
    }
}

/// Union of a negative and a positive interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistinctiveArea {
    pub negative: Interval,
    pub positive: Interval,
}

impl DistinctiveArea {
    /// `[low, -threshold) ∪ (threshold, high]`.
    fn symmetric(low: f64, threshold: f64, high: f64) -> Self {
        DistinctiveArea {
            negative: Interval {
                lower: low,
                upper: -threshold,
                lower_closed: true,
                upper_closed: false,
            },
            positive: Interval {
                lower: threshold,
                upper: high,
                lower_closed: false,
                upper_closed: true,
            },
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.negative.contains(v) || self.positive.contains(v)
    }

    pub fn render(&self, decimals: u32) -> String {
        format!(
            "{} ∪ {}",
            self.negative.render(decimals),
            self.positive.render(decimals)
        )
    }
}

impl fmt::Display for DistinctiveArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(2))
    }
}

/// Rounds half away from zero to `decimals` places, trimming trailing zeros.
pub fn format_rounded(value: f64, decimals: u32) -> String {
    let scale = 10f64.powi(decimals as i32);
    let rounded = (value * scale).round() / scale;
    let mut text = format!("{:.*}", decimals as usize, rounded);
    if text.contains('.') {
        while text.ends_with('0') {
            text.pop();
        }
        if text.ends_with('.') {
            text.pop();
        }
    }
    if text == "-0" {
        text = "0".into();
    }
    text
}

/// Per-category differences of an aligned pair and the derived thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferenceProfile {
    pub categories: Vec<CategoryLabel>,
    pub omega_p: f64,
    pub d: Vec<f64>,
    pub d_min: f64,
    pub d_max: f64,
    pub g_p: f64,
    /// `[ω_p - 1, -g_p) ∪ (g_p, 1 - ω_p]`.
    pub abs_interval: DistinctiveArea,
    /// `d_i / g_p`; absent when `g_p = 0`.
    pub r: Option<Vec<f64>>,
    /// `[(ω_p - 1)/g_p, -1) ∪ (1, (1 - ω_p)/g_p]`; absent when `g_p = 0`.
    pub rel_interval: Option<DistinctiveArea>,
}

/// Builds the difference profile of `pair`.
///
/// `omega_p` must agree with the similarity index recomputed from the pair
/// within [`OMEGA_CROSSCHECK`].
pub fn difference_profile(pair: &AlignedPair, omega_p: f64) -> Result<DifferenceProfile> {
    let recomputed = similarity_index(pair).omega_p;
    // Written so that a NaN `omega_p` is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !((omega_p - recomputed).abs() <= OMEGA_CROSSCHECK) {
        return Err(Error::OmegaMismatch {
            supplied: omega_p,
            recomputed,
        });
    }
    let d: Vec<f64> = pair.iter().map(|(x, y)| x - y).collect();
    let d_min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let d_max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g_p = d_min.abs().min(d_max.abs());
    let abs_interval = DistinctiveArea::symmetric(omega_p - 1.0, g_p, 1.0 - omega_p);
    let (r, rel_interval) = if g_p > 0.0 {
        (
            Some(d.iter().map(|di| di / g_p).collect()),
            Some(DistinctiveArea::symmetric(
                (omega_p - 1.0) / g_p,
                1.0,
                (1.0 - omega_p) / g_p,
            )),
        )
    } else {
        (None, None)
    };
    Ok(DifferenceProfile {
        categories: pair.categories().to_vec(),
        omega_p,
        d,
        d_min,
        d_max,
        g_p,
        abs_interval,
        r,
        rel_interval,
    })
}

/// Relative differences `r_i = d_i / g_p`, or `None` when nothing changed.
pub fn relative_differences(profile: &DifferenceProfile) -> Option<Vec<f64>> {
    profile.r.clone()
}

/// Depth of a distinctive change, graded on `|r_i|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthClass {
    /// `|r| <= 1`
    NotDistinctive,
    /// `1 < |r| < 1.10`
    Insignificant,
    /// `1.10 <= |r| < 1.25`
    Barely,
    /// `1.25 <= |r| < 1.40`
    Moderately,
    /// `1.40 <= |r| < 1.60`
    Highly,
    /// `|r| >= 1.60`
    Huge,
}

impl DepthClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DepthClass::NotDistinctive => "not_distinctive",
            DepthClass::Insignificant => "insignificant",
            DepthClass::Barely => "barely",
            DepthClass::Moderately => "moderately",
            DepthClass::Highly => "highly",
            DepthClass::Huge => "huge",
        }
    }

    /// Band of a magnitude already known to exceed 1.
    fn above_one(magnitude: f64) -> Self {
        match magnitude {
            m if m < 1.10 => DepthClass::Insignificant,
            m if m < 1.25 => DepthClass::Barely,
            m if m < 1.40 => DepthClass::Moderately,
            m if m < 1.60 => DepthClass::Highly,
            _ => DepthClass::Huge,
        }
    }
}

impl fmt::Display for DepthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Grades a relative difference. Values within `1e-9` of `|r| = 1` count as
/// not distinctive.
pub fn classify_depth(r: f64) -> DepthClass {
    let magnitude = r.abs();
    if magnitude > 1.0 + RELATIVE_TIE {
        DepthClass::above_one(magnitude)
    } else {
        DepthClass::NotDistinctive
    }
}

/// Side of the distribution of differences carrying the distinctive changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// `|d_min| > |d_max|`: distinctive decreases of the `y` share relative to `x`.
    Negative,
    /// `|d_min| < |d_max|`
    Positive,
    /// `|d_min| = |d_max|`: no distinctive changes.
    Balanced,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinctiveChanges {
    pub flags: Vec<bool>,
    pub depths: Vec<DepthClass>,
    pub tail: Tail,
    pub distinctive: Vec<CategoryLabel>,
}

/// Flags categories with `|d_i| > g_p` and grades their depth.
pub fn detect_distinctive(profile: &DifferenceProfile) -> DistinctiveChanges {
    let low = profile.d_min.abs();
    let high = profile.d_max.abs();
    let tail = if low > high + TIE_TOLERANCE {
        Tail::Negative
    } else if high > low + TIE_TOLERANCE {
        Tail::Positive
    } else {
        Tail::Balanced
    };
    let flags: Vec<bool> = profile
        .d
        .iter()
        .map(|di| di.abs() > profile.g_p + TIE_TOLERANCE)
        .collect();
    let depths = flags
        .iter()
        .zip(&profile.d)
        .map(|(&flagged, di)| {
            if flagged {
                DepthClass::above_one(di.abs() / profile.g_p)
            } else {
                DepthClass::NotDistinctive
            }
        })
        .collect();
    let distinctive = flags
        .iter()
        .zip(&profile.categories)
        .filter(|(flagged, _)| **flagged)
        .map(|(_, c)| c.clone())
        .collect();
    DistinctiveChanges {
        flags,
        depths,
        tail,
        distinctive,
    }
}

/// Position of one difference relative to the `S` and `3S` bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dispersion {
    /// Strictly inside `(-S, S)`.
    Typical,
    /// Inside `[-3S, 3S]` but not typical.
    Atypical,
    /// Strictly outside `[-3S, 3S]`.
    Outlier,
}

impl Dispersion {
    pub fn as_str(self) -> &'static str {
        match self {
            Dispersion::Typical => "typical",
            Dispersion::Atypical => "atypical",
            Dispersion::Outlier => "outlier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangeDiagnostics {
    pub mean: f64,
    /// Population standard deviation of the differences (divisor `k`).
    pub s: f64,
    /// Third central moment (divisor `k`).
    pub m3: f64,
    /// `M3 / S^3`; absent when `S = 0`.
    pub asymmetry: Option<f64>,
    pub dispersion: Vec<Dispersion>,
}

pub fn diagnostics(profile: &DifferenceProfile) -> ChangeDiagnostics {
    let k = profile.d.len() as f64;
    let mean = profile.d.iter().sum::<f64>() / k;
    let centered = || profile.d.iter().map(move |di| di - mean);
    let s = (centered().map(|c| c * c).sum::<f64>() / k).sqrt();
    let m3 = centered().map(|c| c * c * c).sum::<f64>() / k;
    let asymmetry = (s > 0.0).then(|| m3 / s.powi(3));
    let dispersion = centered()
        .map(|c| {
            let magnitude = c.abs();
            if s == 0.0 || magnitude < s - TIE_TOLERANCE {
                Dispersion::Typical
            } else if magnitude > 3.0 * s + TIE_TOLERANCE {
                Dispersion::Outlier
            } else {
                Dispersion::Atypical
            }
        })
        .collect();
    ChangeDiagnostics {
        mean,
        s,
        m3,
        asymmetry,
        dispersion,
    }
}
