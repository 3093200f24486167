#![allow(dead_code)]

use structshift::{parse_csv, FrequencyTable, InputMode};

pub const MARKET_SHARES: &str = include_str!("../data/market_shares.csv");

pub const COMPARED: [&str; 5] = ["II", "III", "IV", "V", "VI"];

/// Similarity index per compared market, SUM row of the structure table.
pub const OMEGA: [f64; 5] = [0.95, 0.94, 0.90, 0.88, 0.84];

/// Differences from market I, one vector per compared market.
pub const D: [[f64; 5]; 5] = [
    [0.0, 0.0, 0.0, -0.05, 0.05],
    [-0.03, 0.03, -0.03, 0.03, 0.0],
    [-0.04, -0.02, -0.04, 0.10, 0.0],
    [0.03, 0.03, 0.03, 0.03, -0.12],
    [-0.05, 0.08, -0.05, 0.08, -0.06],
];

/// `(d_min, d_max, g_p)` per compared market.
pub const EXTREMES: [(f64, f64, f64); 5] = [
    (-0.05, 0.05, 0.05),
    (-0.03, 0.03, 0.03),
    (-0.04, 0.10, 0.04),
    (-0.12, 0.03, 0.03),
    (-0.06, 0.08, 0.06),
];

/// Relative differences as printed, two decimals.
pub const R: [[f64; 5]; 5] = [
    [0.00, 0.00, 0.00, -1.00, 1.00],
    [-1.00, 1.00, -1.00, 1.00, 0.00],
    [-1.00, -0.50, -1.00, 2.50, 0.00],
    [1.00, 1.00, 1.00, 1.00, -4.00],
    [-0.83, 1.33, -0.83, 1.33, -1.00],
];

pub const DISTINCTIVE: [&[&str]; 5] = [&[], &[], &["D"], &["E"], &["B", "D"]];

/// Asymmetry coefficient as printed, two decimals.
pub const ASYMMETRY: [f64; 5] = [0.00, 0.00, 1.22, -1.50, 0.40];

pub fn market_shares() -> FrequencyTable {
    parse_csv(MARKET_SHARES.as_bytes(), InputMode::Shares).unwrap()
}

/// Moments of `d` from raw power sums, independent of the library's
/// centered computation: `(S, M3)` with divisor `k`.
pub fn raw_moments(d: &[f64]) -> (f64, f64) {
    let k = d.len() as f64;
    let m1 = d.iter().sum::<f64>() / k;
    let m2 = d.iter().map(|v| v.powi(2)).sum::<f64>() / k;
    let m3 = d.iter().map(|v| v.powi(3)).sum::<f64>() / k;
    let var = m2 - m1 * m1;
    let third = m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3);
    (var.max(0.0).sqrt(), third)
}
