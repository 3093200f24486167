//! Bray-Curtis distance and the structure similarity index.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structures::AlignedPair;

/// Exponent of the similarity transform `(1 - d)^κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransformOrder {
    #[serde(rename = "0.5")]
    Half,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl TransformOrder {
    pub fn value(self) -> f64 {
        match self {
            TransformOrder::Half => 0.5,
            TransformOrder::One => 1.0,
            TransformOrder::Two => 2.0,
        }
    }
}

impl TryFrom<f64> for TransformOrder {
    type Error = Error;

    fn try_from(kappa: f64) -> Result<Self> {
        if kappa == 0.5 {
            Ok(TransformOrder::Half)
        } else if kappa == 1.0 {
            Ok(TransformOrder::One)
        } else if kappa == 2.0 {
            Ok(TransformOrder::Two)
        } else {
            Err(Error::InvalidKappa(kappa))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityResult {
    pub omega_p: f64,
    pub bray_curtis: f64,
    pub transform_order: TransformOrder,
    pub transformed_similarity: f64,
    pub per_category_min: Vec<f64>,
}

fn category_minima(pair: &AlignedPair) -> Vec<f64> {
    pair.iter().map(|(x, y)| x.min(y)).collect()
}

/// Bray-Curtis distance `1 - Σ min{x_i, y_i}`.
pub fn bray_curtis(pair: &AlignedPair) -> f64 {
    let overlap: f64 = category_minima(pair).iter().sum();
    (1.0 - overlap).clamp(0.0, 1.0)
}

/// Similarity transform `(1 - distance)^κ`.
pub fn transform(distance: f64, order: TransformOrder) -> Result<f64> {
    if !(0.0..=1.0).contains(&distance) {
        return Err(Error::DistanceOutOfRange(distance));
    }
    Ok(apply(distance, order))
}

fn apply(distance: f64, order: TransformOrder) -> f64 {
    let base = 1.0 - distance;
    match order {
        TransformOrder::Half => base.sqrt(),
        TransformOrder::One => base,
        TransformOrder::Two => base * base,
    }
}

/// Similarity index `ω_p = Σ min{x_i, y_i}` together with the Bray-Curtis distance.
pub fn similarity_index(pair: &AlignedPair) -> SimilarityResult {
    similarity_with_order(pair, TransformOrder::One)
}

pub fn similarity_with_order(pair: &AlignedPair, order: TransformOrder) -> SimilarityResult {
    let per_category_min = category_minima(pair);
    // Sums of valid shares can overshoot 1 by a few ulps.
    let omega_p = per_category_min.iter().sum::<f64>().clamp(0.0, 1.0);
    let bray_curtis = 1.0 - omega_p;
    SimilarityResult {
        omega_p,
        bray_curtis,
        transform_order: order,
        transformed_similarity: apply(bray_curtis, order),
        per_category_min,
    }
}
