use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use entwine_core::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    Schema,
    Validation,
    UnknownName,
    UnknownSession,
    NonCommuting,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::Schema | ErrorCode::Validation | ErrorCode::UnknownName => {
                StatusCode::BAD_REQUEST
            }
            ErrorCode::UnknownSession => StatusCode::NOT_FOUND,
            ErrorCode::NonCommuting => StatusCode::CONFLICT,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    /// Process exit status for the command line: 1 for anything the caller
    /// can fix, 2 for internal failures.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::Internal => 2,
            _ => 1,
        }
    }
}

/// Error document returned by every endpoint and printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, thiserror::Error)]
#[error("{message}")]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            path: None,
        }
    }

    pub fn at(mut self, path: impl Into<String>) -> Self {
        self.path = Some(path.into());
        self
    }

    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(ErrorCode::Validation, message).at(path)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::Internal, message)
    }

    pub fn unknown_session(id: &str) -> Self {
        Self::new(ErrorCode::UnknownSession, format!("unknown session `{id}`"))
    }

    /// Schema error from a failed typed parse, keeping the offending field path.
    pub fn schema(err: serde_path_to_error::Error<serde_json::Error>) -> Self {
        let path = err.path().to_string();
        let e = Self::new(ErrorCode::Schema, err.into_inner().to_string());
        if path == "." {
            e
        } else {
            e.at(path)
        }
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        match err {
            Error::Schema { path, message } => ApiError::new(ErrorCode::Schema, message).at(path),
            Error::Validation { path, message } => ApiError::validation(path, message),
            Error::NotNormalized(_)
            | Error::LengthMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::BadParameter(_)
            | Error::AlgebraMismatch(_)
            | Error::UnknownIrrep { .. }
            | Error::Unsupported(_)
            | Error::NotHermitian { .. }
            | Error::NotClosed(_)
            | Error::WrongNormalization { .. }
            | Error::JacobiViolation(_)
            | Error::UnknownAlgebra(_) => ApiError::new(ErrorCode::Validation, message),
            Error::UnknownName(_) => ApiError::new(ErrorCode::UnknownName, message),
            Error::UnknownSession(_) => ApiError::new(ErrorCode::UnknownSession, message),
            Error::NonCommuting { .. } => ApiError::new(ErrorCode::NonCommuting, message),
            Error::NoConvergence { .. } | Error::CommutantFailure(_) => ApiError::internal(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(self)).into_response()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_serialize_in_upper_snake_case() {
        let e = ApiError::new(ErrorCode::UnknownSession, "x");
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"code":"UNKNOWN_SESSION","message":"x"}"#
        );
        assert_eq!(ErrorCode::NonCommuting.status(), StatusCode::CONFLICT);
        assert_eq!(ErrorCode::Internal.exit_code(), 2);
        assert_eq!(ErrorCode::Schema.exit_code(), 1);
    }

    #[test]
    fn core_errors_map_to_codes() {
        let e: ApiError = Error::Validation {
            path: "derived.x".into(),
            message: "bad".into(),
        }
        .into();
        assert_eq!(
            (e.code, e.path.as_deref()),
            (ErrorCode::Validation, Some("derived.x"))
        );
        let e: ApiError = Error::NotNormalized(2.0).into();
        assert_eq!(e.code, ErrorCode::Validation);
        let e: ApiError = Error::CommutantFailure("tiling".into()).into();
        assert_eq!(e.code, ErrorCode::Internal);
    }
}
