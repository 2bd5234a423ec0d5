//! Parameter schedule, configuration, stability sweeps and plots.

pub mod config;
pub mod plot;
pub mod schedule;
pub mod sweep;

pub use config::{Config, DeltaMode};
pub use schedule::{
    alpha, bound_value, interpolation_bound, interpolation_exponent, parameter_schedule, InterpolationBound, ScheduleParams,
};
pub use sweep::{measured_delta, run_row, run_sweep, write_sweep_csv, StabilityRecord, SweepOutcome};
