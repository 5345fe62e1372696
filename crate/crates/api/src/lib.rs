//! HTTP JSON API over the workspace engines.
//!
//! Every route except `POST /api/auth/token` needs an
//! `Authorization: Bearer <token>` header. Money is integer euro cents.

pub mod auth;
pub mod error;
mod routes;

use std::sync::Arc;

use dpw_core::{Result, Workspace};

pub use auth::{system_clock, Clock, Session, TokenIssuer};
pub use error::{ApiError, ErrorBody};
pub use routes::router;

#[derive(Clone)]
pub struct AppState {
    pub ws: Arc<Workspace>,
    pub auth: Arc<TokenIssuer>,
    pub clock: Clock,
}

impl AppState {
    /// Session lifetime comes from `server.tokenTtlSeconds`.
    pub fn new(ws: Workspace, clock: Clock) -> Result<Self> {
        let auth = TokenIssuer::new(ws.config.server.token_ttl_seconds, clock.clone())?;
        Ok(AppState {
            ws: Arc::new(ws),
            auth: Arc::new(auth),
            clock,
        })
    }
}

/// Binds `addr` and serves until ctrl-c.
pub async fn serve(state: AppState, addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
