//! Random walk experiments: simulation, exact induced series, entropy and drift.

mod entropy;
mod induced;
mod line;
mod orbit;
mod series;
mod sim;

pub use entropy::{
    consistency_report, drift_series, exact_entropy_series, ConsistencyReport, DriftConfig, DriftSeries, EntropySeries,
};
pub use induced::{mixture_return_series, InducedChain, InducedSeries, MixtureReturns};
pub use line::{LazyLine, LineChain};
pub use orbit::{delta_by_first_returns, literal_inverted_orbit, InvertedOrbitState};
pub use series::{loglog_slope, EstimateSeries, SeriesAccumulator};
pub use sim::{simulate, with_workers, worker_count, LampLaw, StepLaw, WalkBundle, WalkConfig};
