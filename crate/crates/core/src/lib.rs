//! Similarity of frequency-distribution structures and detection of
//! distinctive structural changes.
//!
//! The pipeline for one comparison is: [`normalize`] each population of a
//! [`FrequencyTable`] into a [`StructureVector`], [`align`] the two vectors,
//! compute the similarity index with [`similarity_index`], test it with
//! [`run_test`], then build a [`DifferenceProfile`] and derive distinctive
//! changes, their depth and moment diagnostics. [`compare_pair`] and
//! [`compare_series`] run the whole pipeline.

pub mod change;
pub mod error;
pub mod io;
pub mod plot;
pub mod report;
pub mod similarity;
pub mod structures;

pub use change::{
    classify_depth, detect_distinctive, diagnostics, difference_profile, relative_differences,
    ChangeDiagnostics, DepthClass, DifferenceProfile, Dispersion, DistinctiveArea,
    DistinctiveChanges, Interval, Tail,
};
pub use error::{Error, Result};
pub use io::{parse_csv, parse_json, parse_table, render_table_csv, table_digest, TableFormat};
pub use plot::{emit_plot_data, emit_series_plot_data, PlotData};
pub use report::{
    compare_pair, compare_series, render_report, render_series, ComparisonReport, OutputFormat,
    SeriesReport, TestSettings,
};
pub use similarity::{bray_curtis, similarity_index, transform, SimilarityResult, TransformOrder};
pub use similarity_test::{
    critical_value, decide, run_test, CriticalValueSource, CriticalValueTable, CvPolicy, Decision,
    McConfig, NullSample, SourceKind, TestOutcome,
};
pub use structures::{
    align, normalize, validate, AlignedPair, CategoryLabel, FrequencyTable, InputMode,
    StructureVector, Violation,
};
