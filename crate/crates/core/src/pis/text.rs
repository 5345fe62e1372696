use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

const BUILTIN_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Words ignored when comparing and scoring text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords(BTreeSet<String>);

impl Stopwords {
    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn builtin() -> &'static Stopwords {
        static WORDS: OnceLock<Stopwords> = OnceLock::new();
        WORDS.get_or_init(|| Stopwords::parse(BUILTIN_STOPWORDS))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }
}

/// Lowercased alphanumeric runs with stopwords removed.
pub fn content_words<'a>(text: &'a str, stop: &'a Stopwords) -> impl Iterator<Item = String> + 'a {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .filter(move |w| !stop.contains(w))
}

pub type TermCounts = BTreeMap<String, u32>;

pub fn term_counts<'a>(texts: impl IntoIterator<Item = &'a str>, stop: &Stopwords) -> TermCounts {
    let mut tf = TermCounts::new();
    for t in texts {
        for w in content_words(t, stop) {
            *tf.entry(w).or_default() += 1;
        }
    }
    tf
}

/// Cosine similarity of two term-frequency vectors; 0 when either is empty.
pub fn cosine(a: &TermCounts, b: &TermCounts) -> f64 {
    let dot: u64 = a
        .iter()
        .filter_map(|(w, x)| b.get(w).map(|y| u64::from(*x) * u64::from(*y)))
        .sum();
    let na: u64 = a.values().map(|x| u64::from(*x).pow(2)).sum();
    let nb: u64 = b.values().map(|x| u64::from(*x).pow(2)).sum();
    if na == 0 || nb == 0 {
        return 0.0;
    }
    // one square root keeps exact ratios such as 1/2 exact
    dot as f64 / ((na as f64) * (nb as f64)).sqrt()
}

/// Splits after `.`, `?` or `!` when followed by whitespace and an
/// uppercase letter.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &(pos, c)) in chars.iter().enumerate() {
        if !matches!(c, '.' | '?' | '!') {
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && chars[j].1.is_whitespace() {
            j += 1;
        }
        if j > i + 1 && j < chars.len() && chars[j].1.is_uppercase() {
            let end = pos + c.len_utf8();
            out.push(text[start..end].trim().to_string());
            start = chars[j].0;
        }
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out.retain(|s| !s.is_empty());
    out
}
