//! Procurement analytics: order volumes, supplier rating, forecasting,
//! material-group shares and process breakdown.

mod forecast;
mod process;
mod rating;
mod share;
mod volume;

pub use forecast::{forecast_values, forecast_volume, ForecastMethod, ForecastPoint};
pub use process::{process_breakdown, AnnotatedStep, ProcessBreakdown};
pub use rating::{equal_weights, supplier_rating, RatingResult};
pub use share::{shares_from_volumes, ShareResult};
pub use volume::{volume_series, Bucketing, DateRange, VolumePoint, VolumeSeries};
