//! Token issuer standing in for single sign-on.
//!
//! [`TokenIssuer::verify`] is the only place a request's identity is
//! established, so swapping in a real identity provider means replacing
//! that one function.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use chrono::{DateTime, Duration, Utc};
use dpw_core::domain::UserId;
use dpw_core::{DpwError, Result};
use serde::Serialize;

/// Source of the current time; injectable so expiry is testable.
pub type Clock = Arc<dyn Fn() -> DateTime<Utc> + Send + Sync>;

pub fn system_clock() -> Clock {
    Arc::new(Utc::now)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Session {
    pub token: String,
    pub user_id: UserId,
    pub issued_at: DateTime<Utc>,
    pub expires_at: DateTime<Utc>,
}

pub struct TokenIssuer {
    ttl: Duration,
    clock: Clock,
    sessions: RwLock<HashMap<String, Session>>,
}

impl std::fmt::Debug for TokenIssuer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TokenIssuer").field("ttl", &self.ttl).finish_non_exhaustive()
    }
}

impl TokenIssuer {
    pub fn new(ttl_seconds: i64, clock: Clock) -> Result<Self> {
        if ttl_seconds <= 0 {
            return Err(DpwError::validation("server.tokenTtlSeconds must be > 0"));
        }
        Ok(TokenIssuer {
            ttl: Duration::seconds(ttl_seconds),
            clock,
            sessions: RwLock::new(HashMap::new()),
        })
    }

    pub fn now(&self) -> DateTime<Utc> {
        (self.clock)()
    }

    pub fn issue(&self, user_id: UserId) -> Session {
        let issued_at = self.now();
        let session = Session {
            token: hex::encode(rand::random::<[u8; 24]>()),
            user_id,
            issued_at,
            expires_at: issued_at + self.ttl,
        };
        self.sessions
            .write()
            .expect("session table poisoned")
            .insert(session.token.clone(), session.clone());
        session
    }

    pub fn verify(&self, token: &str) -> Result<Session> {
        let now = self.now();
        let mut sessions = self.sessions.write().expect("session table poisoned");
        match sessions.get(token) {
            None => Err(DpwError::Unauthenticated("unknown token".into())),
            Some(s) if now >= s.expires_at => {
                sessions.remove(token);
                Err(DpwError::Unauthenticated("token expired".into()))
            }
            Some(s) => Ok(s.clone()),
        }
    }
}
