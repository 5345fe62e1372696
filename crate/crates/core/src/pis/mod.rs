//! News clustering, extractive summaries and the personalized feed.

mod cluster;
mod feed;
mod summary;
mod text;

pub use cluster::{cluster_news, cluster_news_with, similarity, NewsCluster};
pub use feed::{
    rank_feed, recency, record_read, suggest, topic_overlap, FeedEntry, FeedReason, FeedSignals,
    FeedWeights,
};
pub use summary::{summarize, summarize_with_corpus};
pub use text::{content_words, cosine, split_sentences, term_counts, Stopwords, TermCounts};
