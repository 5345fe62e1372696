use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{NewsId, SourceId};
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NewsItem {
    pub id: NewsId,
    pub source_id: SourceId,
    pub title: String,
    pub body: String,
    pub published_at: DateTime<Utc>,
    #[serde(default)]
    pub topics: BTreeSet<String>,
}

impl NewsItem {
    pub fn validate(&self) -> Result<()> {
        if self.title.trim().is_empty() {
            return Err(DpwError::validation(format!("news {} has an empty title", self.id)));
        }
        Ok(())
    }
}
