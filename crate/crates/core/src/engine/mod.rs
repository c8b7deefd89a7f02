//! Period scheduler, replicate runner and state snapshots.

mod init;
mod params;
mod record;
mod run;
mod state;
mod step;

pub use init::initialize;
pub use params::ModelParams;
pub use record::{PeriodRecord, SegmentRow, MS_CAP};
pub use run::{run_ensemble, run_single, run_state, state_at, Ensemble, RunOutput};
pub use state::{BankMarketView, CentralBank, EconomyState, Government, RngStreams};
pub use step::{step, StepOutcome};
