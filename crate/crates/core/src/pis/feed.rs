use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::NewsCluster;
use crate::domain::{NewsId, ReadEntry, SourceId, SubjectRef, User, UserId};
use crate::error::{DpwError, Result};
use crate::store::{StoreData, Suggestion};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedWeights {
    #[serde(rename = "wTopic")]
    pub topic: f64,
    #[serde(rename = "wTeam")]
    pub team: f64,
    #[serde(rename = "wRecency")]
    pub recency: f64,
    #[serde(rename = "wFavorite")]
    pub favorite: f64,
}

impl Default for FeedWeights {
    fn default() -> Self {
        FeedWeights {
            topic: 1.0,
            team: 0.5,
            recency: 1.0,
            favorite: 0.5,
        }
    }
}

impl FeedWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [self.topic, self.team, self.recency, self.favorite];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(DpwError::validation("feed weights must be finite and >= 0"));
        }
        if all.iter().all(|w| *w == 0.0) {
            return Err(DpwError::validation("feed weights must not all be zero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FeedReason {
    TopicMatch,
    TeamSuggested,
    Recency,
    FavoriteSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FeedEntry {
    pub cluster_id: String,
    pub score: f64,
    pub reasons: Vec<FeedReason>,
    pub representative_id: NewsId,
    pub title: String,
    pub published_at: DateTime<Utc>,
    pub topics: BTreeSet<String>,
    pub source_ids: BTreeSet<SourceId>,
    pub summary: Vec<String>,
}

/// Per-user inputs to ranking, derived from the store.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeedSignals {
    /// Distinct topics of everything the user has read.
    pub history_topics: BTreeSet<String>,
    /// News ids a teammate suggested.
    pub team_suggested: BTreeSet<NewsId>,
    /// Sources of news items the user favorited.
    pub favorite_sources: BTreeSet<SourceId>,
}

impl FeedSignals {
    pub fn for_user(data: &StoreData, user: &User, clusters: &[NewsCluster]) -> Self {
        let by_member: BTreeMap<&NewsId, &NewsCluster> = clusters
            .iter()
            .flat_map(|c| c.member_ids.iter().map(move |m| (m, c)))
            .collect();
        let mut history_topics = BTreeSet::new();
        for ReadEntry { news_id, .. } in &user.reading_history {
            match by_member.get(news_id) {
                Some(c) => history_topics.extend(c.topics.iter().cloned()),
                None => {
                    if let Some(n) = data.news.get(news_id) {
                        history_topics.extend(n.topics.iter().cloned());
                    }
                }
            }
        }
        let team_suggested = data
            .suggestions
            .iter()
            .filter(|s| s.user_id != user.id)
            .filter(|s| data.users.get(&s.user_id).is_some_and(|u| u.team_id == user.team_id))
            .map(|s| s.news_id.clone())
            .collect();
        let favorite_sources = user
            .favorites
            .iter()
            .filter_map(|f| match f {
                SubjectRef::News(id) => data.news.get(id).map(|n| n.source_id.clone()),
                _ => None,
            })
            .collect();
        FeedSignals {
            history_topics,
            team_suggested,
            favorite_sources,
        }
    }
}

/// Share of the cluster's topics already present in the reading history.
pub fn topic_overlap(history: &BTreeSet<String>, cluster: &BTreeSet<String>) -> f64 {
    if cluster.is_empty() {
        return 0.0;
    }
    cluster.intersection(history).count() as f64 / cluster.len() as f64
}

pub fn recency(published_at: DateTime<Utc>, now: DateTime<Utc>, half_life_days: f64) -> f64 {
    let age_days = ((now - published_at).num_seconds().max(0)) as f64 / 86_400.0;
    (-age_days / half_life_days).exp()
}

/// Scores and orders clusters: highest score first, then newest, then id.
pub fn rank_feed(
    clusters: &[NewsCluster],
    signals: &FeedSignals,
    now: DateTime<Utc>,
    weights: &FeedWeights,
    half_life_days: f64,
) -> Result<Vec<FeedEntry>> {
    weights.validate()?;
    if half_life_days.is_nan() || half_life_days <= 0.0 {
        return Err(DpwError::validation("halfLifeDays must be > 0"));
    }
    let mut entries: Vec<FeedEntry> = clusters
        .iter()
        .map(|c| {
            let overlap = topic_overlap(&signals.history_topics, &c.topics);
            let team = if c.member_ids.iter().any(|m| signals.team_suggested.contains(m)) { 1.0 } else { 0.0 };
            let fresh = recency(c.published_at, now, half_life_days);
            let fav = if c.source_ids.iter().any(|s| signals.favorite_sources.contains(s)) { 1.0 } else { 0.0 };
            let parts = [
                (FeedReason::TopicMatch, weights.topic * overlap),
                (FeedReason::TeamSuggested, weights.team * team),
                (FeedReason::Recency, weights.recency * fresh),
                (FeedReason::FavoriteSource, weights.favorite * fav),
            ];
            FeedEntry {
                cluster_id: c.cluster_id.clone(),
                score: parts.iter().map(|p| p.1).sum(),
                reasons: parts.iter().filter(|p| p.1 > 0.0).map(|p| p.0).collect(),
                representative_id: c.representative_id.clone(),
                title: c.title.clone(),
                published_at: c.published_at,
                topics: c.topics.clone(),
                source_ids: c.source_ids.clone(),
                summary: c.summary.clone(),
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| b.published_at.cmp(&a.published_at))
            .then_with(|| a.cluster_id.cmp(&b.cluster_id))
    });
    Ok(entries)
}

fn find_cluster<'a>(clusters: &'a [NewsCluster], cluster_id: &str) -> Result<&'a NewsCluster> {
    clusters
        .iter()
        .find(|c| c.cluster_id == cluster_id)
        .ok_or_else(|| DpwError::not_found("cluster", cluster_id))
}

/// Appends the cluster's representative to the user's reading history.
pub fn record_read(
    data: &mut StoreData,
    user: &UserId,
    cluster_id: &str,
    clusters: &[NewsCluster],
    at: DateTime<Utc>,
) -> Result<User> {
    let rep = find_cluster(clusters, cluster_id)?.representative_id.clone();
    let u = data.user_mut(user)?;
    u.append_read(rep, at)?;
    Ok(u.clone())
}

/// Marks a cluster as suggested reading for the user's team. Suggesting
/// the same cluster twice is a no-op.
pub fn suggest(
    data: &mut StoreData,
    user: &UserId,
    cluster_id: &str,
    clusters: &[NewsCluster],
    at: DateTime<Utc>,
) -> Result<Suggestion> {
    let rep = find_cluster(clusters, cluster_id)?.representative_id.clone();
    data.user(user)?;
    if let Some(existing) = data
        .suggestions
        .iter()
        .find(|s| s.news_id == rep && &s.user_id == user)
    {
        return Ok(existing.clone());
    }
    let s = Suggestion {
        news_id: rep,
        user_id: user.clone(),
        at,
    };
    data.suggestions.insert(s.clone());
    Ok(s)
}
