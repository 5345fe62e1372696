use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::VolumeSeries;
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ForecastMethod {
    /// Mean of the last `window` observations.
    MovingAverage { window: usize },
    /// Simple exponential smoothing seeded with the first observation.
    ExpSmoothing { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForecastPoint {
    pub period_start: NaiveDate,
    pub forecast_eur: f64,
}

/// Flat forecast of `horizon` values from `history`.
pub fn forecast_values(history: &[f64], horizon: usize, method: ForecastMethod) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(DpwError::validation("forecast horizon must be >= 1"));
    }
    let level = match method {
        ForecastMethod::MovingAverage { window } => {
            if window == 0 {
                return Err(DpwError::validation("moving-average window must be >= 1"));
            }
            if history.len() < window {
                return Err(DpwError::InsufficientHistory(format!(
                    "moving average over {window} periods needs at least {window} points, got {}",
                    history.len()
                )));
            }
            history[history.len() - window..].iter().sum::<f64>() / window as f64
        }
        ForecastMethod::ExpSmoothing { alpha } => {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(DpwError::validation(format!(
                    "smoothing alpha must be in (0, 1], got {alpha}"
                )));
            }
            let (first, rest) = history.split_first().ok_or_else(|| {
                DpwError::InsufficientHistory(
                    "exponential smoothing needs at least 1 point, got 0".into(),
                )
            })?;
            rest.iter().fold(*first, |level, y| alpha * y + (1.0 - alpha) * level)
        }
    };
    Ok(vec![level; horizon])
}

/// Forecasts the periods following the last point of `series`.
pub fn forecast_volume(series: &VolumeSeries, horizon: usize, method: ForecastMethod) -> Result<Vec<ForecastPoint>> {
    let history: Vec<f64> = series
        .points
        .iter()
        .map(|p| p.volume_eur.cents() as f64 / 100.0)
        .collect();
    let values = forecast_values(&history, horizon, method)?;
    let mut period = series
        .points
        .last()
        .map(|p| series.bucketing.next(p.period_start))
        .expect("non-empty history was checked");
    Ok(values
        .into_iter()
        .map(|v| {
            let point = ForecastPoint {
                period_start: period,
                forecast_eur: v,
            };
            period = series.bucketing.next(period);
            point
        })
        .collect())
}
