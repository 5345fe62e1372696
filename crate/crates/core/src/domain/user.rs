use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{NewsId, SupplierId, TeamId, UserId, WidgetLayout};
use crate::error::{DpwError, Result};

/// Something a user can mark as favorite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum SubjectRef {
    Supplier(SupplierId),
    News(NewsId),
    /// A configured link or a news source id.
    Link(String),
}

impl std::fmt::Display for SubjectRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubjectRef::Supplier(id) => write!(f, "supplier:{id}"),
            SubjectRef::News(id) => write!(f, "news:{id}"),
            SubjectRef::Link(id) => write!(f, "link:{id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReadEntry {
    pub news_id: NewsId,
    pub at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct User {
    pub id: UserId,
    pub name: String,
    pub team_id: TeamId,
    #[serde(default)]
    pub favorites: BTreeSet<SubjectRef>,
    #[serde(default)]
    pub reading_history: Vec<ReadEntry>,
    /// `None` until the user saves a layout; readers fall back to the configured default.
    #[serde(default)]
    pub layout: Option<WidgetLayout>,
}

impl User {
    pub fn new(id: impl Into<UserId>, name: impl Into<String>, team: impl Into<TeamId>) -> Self {
        User {
            id: id.into(),
            name: name.into(),
            team_id: team.into(),
            favorites: BTreeSet::new(),
            reading_history: Vec::new(),
            layout: None,
        }
    }

    /// Appends a read event; timestamps must not go backwards.
    pub fn append_read(&mut self, news_id: NewsId, at: DateTime<Utc>) -> Result<()> {
        if let Some(last) = self.reading_history.last() {
            if at < last.at {
                return Err(DpwError::validation(format!(
                    "reading history must be monotone: {at} is before {}",
                    last.at
                )));
            }
        }
        self.reading_history.push(ReadEntry { news_id, at });
        Ok(())
    }
}
