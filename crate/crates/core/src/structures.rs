//! Frequency tables, structure vectors and category alignment.
//!
//! A [`FrequencyTable`] holds nonnegative values for one or more populations
//! over a shared, ordered category list. [`normalize`] turns one population
//! into its simple structure (a [`StructureVector`] of shares summing to 1),
//! and [`align`] puts two vectors over a common category list, filling
//! categories missing on one side with a zero share.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

/// Tolerance on the share sum of a structure vector.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Tolerance on the column sum of tables ingested in shares mode.
pub const SHARES_INPUT_TOLERANCE: f64 = 1e-6;

/// Non-empty category identifier, e.g. a firm name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CategoryLabel(String);

impl CategoryLabel {
    pub fn new(label: impl Into<String>) -> Result<Self, Violation> {
        let label = label.into();
        if label.is_empty() {
            return Err(Violation::EmptyLabel);
        }
        Ok(CategoryLabel(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for CategoryLabel {
    type Error = Violation;

    fn try_from(value: String) -> Result<Self, Violation> {
        CategoryLabel::new(value)
    }
}

impl From<CategoryLabel> for String {
    fn from(value: CategoryLabel) -> Self {
        value.0
    }
}

impl fmt::Display for CategoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Convenience for building label lists in code and tests.
pub fn labels<S: AsRef<str>>(names: &[S]) -> Result<Vec<CategoryLabel>, Violation> {
    names
        .iter()
        .map(|s| CategoryLabel::new(s.as_ref()))
        .collect()
}

/// How the values of a table were entered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    /// Raw frequencies; normalized by the population total.
    Counts,
    /// Shares already summing to 1 per population.
    Shares,
}

impl InputMode {
    pub fn as_str(self) -> &'static str {
        match self {
            InputMode::Counts => "counts",
            InputMode::Shares => "shares",
        }
    }
}

/// First violated structure-vector invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("structure has no categories")]
    Empty,
    #[error("category label is empty")]
    EmptyLabel,
    #[error("category label `{0}` occurs more than once")]
    DuplicateLabel(String),
    #[error("{labels} labels but {shares} shares")]
    LengthMismatch { labels: usize, shares: usize },
    #[error("share {value} of category `{label}` is outside [0, 1]")]
    ShareOutOfRange { label: String, value: f64 },
    #[error("shares sum to {sum}, not 1")]
    SumMismatch { sum: f64 },
}

/// Checks every structure-vector invariant and reports the first violation.
pub fn validate(categories: &[CategoryLabel], shares: &[f64]) -> Result<(), Violation> {
    if categories.is_empty() {
        return Err(Violation::Empty);
    }
    if categories.len() != shares.len() {
        return Err(Violation::LengthMismatch {
            labels: categories.len(),
            shares: shares.len(),
        });
    }
    check_unique(categories)?;
    for (label, &value) in categories.iter().zip(shares) {
        if !(0.0..=1.0).contains(&value) {
            return Err(Violation::ShareOutOfRange {
                label: label.to_string(),
                value,
            });
        }
    }
    let sum: f64 = shares.iter().sum();
    if (sum - 1.0).abs() > NORM_TOLERANCE {
        return Err(Violation::SumMismatch { sum });
    }
    Ok(())
}

fn check_unique(categories: &[CategoryLabel]) -> Result<(), Violation> {
    let mut seen = HashSet::with_capacity(categories.len());
    for label in categories {
        if label.0.is_empty() {
            return Err(Violation::EmptyLabel);
        }
        if !seen.insert(label.as_str()) {
            return Err(Violation::DuplicateLabel(label.to_string()));
        }
    }
    Ok(())
}

/// Simple structure of a population: the share of each category.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureVector {
    categories: Vec<CategoryLabel>,
    shares: Vec<f64>,
}

impl StructureVector {
    pub fn new(categories: Vec<CategoryLabel>, shares: Vec<f64>) -> Result<Self, Violation> {
        validate(&categories, &shares)?;
        Ok(StructureVector { categories, shares })
    }

    /// Builds a vector from `(label, share)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, f64)]) -> Result<Self, Violation> {
        let categories = pairs
            .iter()
            .map(|(l, _)| CategoryLabel::new(l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let shares = pairs.iter().map(|&(_, s)| s).collect();
        StructureVector::new(categories, shares)
    }

    pub fn categories(&self) -> &[CategoryLabel] {
        &self.categories
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    /// Number of categories.
    pub fn k(&self) -> usize {
        self.shares.len()
    }

    pub fn share_of(&self, label: &str) -> Option<f64> {
        self.categories
            .iter()
            .position(|c| c.as_str() == label)
            .map(|i| self.shares[i])
    }
}

/// Two structure vectors over identical categories in identical order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignedPair {
    x: StructureVector,
    y: StructureVector,
}

impl AlignedPair {
    /// Pairs two vectors that already share a category list.
    pub fn new(x: StructureVector, y: StructureVector) -> Result<Self> {
        if x.categories != y.categories {
            return Err(Error::NotAligned);
        }
        Ok(AlignedPair { x, y })
    }

    pub fn x(&self) -> &StructureVector {
        &self.x
    }

    pub fn y(&self) -> &StructureVector {
        &self.y
    }

    pub fn categories(&self) -> &[CategoryLabel] {
        &self.x.categories
    }

    pub fn k(&self) -> usize {
        self.x.k()
    }

    /// Iterates `(share_x, share_y)` per category.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x
            .shares
            .iter()
            .copied()
            .zip(self.y.shares.iter().copied())
    }
}

/// Puts `x` and `y` over the union of their categories.
///
/// The union keeps the order of `x`, followed by labels only present in `y`
/// in their `y` order. A category absent from one side gets share 0 there.
pub fn align(x: &StructureVector, y: &StructureVector) -> AlignedPair {
    if x.categories == y.categories {
        return AlignedPair {
            x: x.clone(),
            y: y.clone(),
        };
    }
    let mut categories = x.categories.clone();
    let known: HashSet<&str> = x.categories.iter().map(|c| c.as_str()).collect();
    categories.extend(
        y.categories
            .iter()
            .filter(|c| !known.contains(c.as_str()))
            .cloned(),
    );
    let spread = |v: &StructureVector| -> Vec<f64> {
        categories
            .iter()
            .map(|c| v.share_of(c.as_str()).unwrap_or(0.0))
            .collect()
    };
    let xs = spread(x);
    let ys = spread(y);
    AlignedPair {
        x: StructureVector {
            categories: categories.clone(),
            shares: xs,
        },
        y: StructureVector {
            categories,
            shares: ys,
        },
    }
}

/// Nonnegative values for several populations over a shared category list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyTable {
    categories: Vec<CategoryLabel>,
    populations: Vec<String>,
    /// `values[p][i]`: value of population `p` in category `i`.
    values: Vec<Vec<f64>>,
    mode: InputMode,
}

impl FrequencyTable {
    /// Builds a table from population-major columns.
    ///
    /// Every column must have one value per category; values must be finite
    /// and nonnegative with a positive total.
    pub fn new(
        categories: Vec<CategoryLabel>,
        populations: Vec<String>,
        values: Vec<Vec<f64>>,
        mode: InputMode,
    ) -> Result<Self> {
        if categories.is_empty() {
            return Err(Error::Malformed("table has no categories".into()));
        }
        if populations.is_empty() {
            return Err(Error::Malformed("table has no populations".into()));
        }
        if let Err(v) = check_unique(&categories) {
            return Err(match v {
                Violation::DuplicateLabel(l) => Error::DuplicateCategory(l),
                other => Error::InvalidStructure(other),
            });
        }
        let mut seen = HashSet::new();
        for p in &populations {
            if p.is_empty() {
                return Err(Error::Malformed("empty population identifier".into()));
            }
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicatePopulation(p.clone()));
            }
        }
        if values.len() != populations.len() {
            return Err(Error::Malformed(format!(
                "{} populations but {} value columns",
                populations.len(),
                values.len()
            )));
        }
        for (population, column) in populations.iter().zip(&values) {
            if column.len() != categories.len() {
                return Err(Error::Malformed(format!(
                    "population `{population}` has {} values for {} categories",
                    column.len(),
                    categories.len()
                )));
            }
            for (category, &value) in categories.iter().zip(column) {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::NegativeCount {
                        population: population.clone(),
                        category: category.to_string(),
                        value,
                    });
                }
            }
            let total: f64 = column.iter().sum();
            if total <= 0.0 {
                return Err(Error::NonPositiveTotal {
                    population: population.clone(),
                    total,
                });
            }
        }
        Ok(FrequencyTable {
            categories,
            populations,
            values,
            mode,
        })
    }

    pub fn categories(&self) -> &[CategoryLabel] {
        &self.categories
    }

    pub fn populations(&self) -> &[String] {
        &self.populations
    }

    pub fn mode(&self) -> InputMode {
        self.mode
    }

    pub fn values(&self, population: &str) -> Option<&[f64]> {
        self.index_of(population).map(|p| self.values[p].as_slice())
    }

    /// Population total (`n_X`).
    pub fn total(&self, population: &str) -> Option<f64> {
        self.values(population).map(|v| v.iter().sum())
    }

    fn index_of(&self, population: &str) -> Option<usize> {
        self.populations.iter().position(|p| p == population)
    }
}

/// Simple structure of one population of `table`.
///
/// In shares mode, columns that already sum to 1 within [`NORM_TOLERANCE`]
/// are kept verbatim; everything else is divided by its total.
pub fn normalize(table: &FrequencyTable, population: &str) -> Result<StructureVector> {
    let values = table
        .values(population)
        .ok_or_else(|| Error::UnknownPopulation(population.to_string()))?;
    if let Some((i, &value)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::NegativeCount {
            population: population.to_string(),
            category: table.categories[i].to_string(),
            value,
        });
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::NonPositiveTotal {
            population: population.to_string(),
            total,
        });
    }
    let shares = if table.mode == InputMode::Shares && (total - 1.0).abs() <= NORM_TOLERANCE {
        values.to_vec()
    } else {
        values.iter().map(|v| v / total).collect()
    };
    Ok(StructureVector::new(table.categories.clone(), shares)?)
}
