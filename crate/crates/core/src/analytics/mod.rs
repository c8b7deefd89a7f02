//! Post-processing: per-run frames, ensemble summaries, de-trending,
//! rank statistics, CSV export and SVG figures.

mod export;
mod filters;
mod frame;
mod plot;
mod stats;

pub use export::{
    read_long, read_wide, write_audit, write_ensemble, write_interbank, write_long, write_summary,
    write_wide, AUDIT_FILE, CONFIG_FILE, INTERBANK_FILE, SERIES_FILE, SUMMARY_FILE,
};
pub use filters::{hp_filter, moving_average, HP_LAMBDA_MONTHLY};
pub use frame::{EnsembleSummary, SeriesSummary, TimeSeriesFrame};
pub use plot::{plot_ensemble_figures, plot_lines, plot_sweep, FigureSeries};
pub use stats::{mean, quantile, ranks, spearman, std_dev};
