use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use dpw_core::DpwError;
use serde::Serialize;

/// JSON error body: `{code, message, details}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub details: Vec<String>,
}

#[derive(Debug)]
pub struct ApiError(pub DpwError);

impl From<DpwError> for ApiError {
    fn from(e: DpwError) -> Self {
        ApiError(e)
    }
}

pub fn status_of(e: &DpwError) -> StatusCode {
    match e {
        DpwError::Unauthenticated(_) => StatusCode::UNAUTHORIZED,
        DpwError::NotFound { .. } | DpwError::NoEmissionData(_) => StatusCode::NOT_FOUND,
        DpwError::Conflict(_) => StatusCode::CONFLICT,
        DpwError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        DpwError::Validation { .. }
        | DpwError::Parse(_)
        | DpwError::RatingUndefined(_)
        | DpwError::UndefinedAllocation(_)
        | DpwError::InsufficientHistory(_) => StatusCode::BAD_REQUEST,
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            code: self.0.code().to_string(),
            message: self.0.to_string(),
            details: self.0.details().to_vec(),
        };
        (status_of(&self.0), Json(body)).into_response()
    }
}

pub type ApiResult<T> = std::result::Result<T, ApiError>;
