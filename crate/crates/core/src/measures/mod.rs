//! Measures: finitely supported measures on groups, the heavy-tailed `ν_γ`, dense integer laws.

mod dense;
mod finite;
mod nu;
pub mod special;
mod stirling;

pub use dense::DenseMeasure;
pub use finite::{product_measure, FiniteMeasure, MeasureRecord, MASS_TOL};
pub use nu::{first_moment_partial, sample_atom, MixtureMeasure, MomentPartials, NuGamma, NuSampler};
pub use stirling::{stirling_expected, StirlingExpectation};
