use super::text::{content_words, split_sentences, term_counts, Stopwords, TermCounts};
use crate::domain::NewsItem;
use crate::error::{DpwError, Result};

/// Extractive summary of one item, scored against its own term counts.
pub fn summarize(item: &NewsItem, k: usize) -> Result<Vec<String>> {
    let stop = Stopwords::builtin();
    let corpus = term_counts([item.body.as_str()], stop);
    summarize_with_corpus(item, k, &corpus, stop)
}

/// Picks the `k` sentences whose content words have the highest summed
/// corpus frequency, returned in document order. Earlier sentences win ties.
pub fn summarize_with_corpus(
    item: &NewsItem,
    k: usize,
    corpus: &TermCounts,
    stop: &Stopwords,
) -> Result<Vec<String>> {
    if k == 0 {
        return Err(DpwError::validation("summary length k must be >= 1"));
    }
    let sentences = split_sentences(&item.body);
    let mut scored: Vec<(u64, usize)> = sentences
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let score = content_words(s, stop)
                .map(|w| u64::from(corpus.get(&w).copied().unwrap_or(0)))
                .sum();
            (score, i)
        })
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut picked: Vec<usize> = scored.into_iter().take(k).map(|(_, i)| i).collect();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| sentences[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pis::cluster::tests::item;

    #[test]
    fn short_body_and_guards() {
        let one = item("n", "t", "Only one sentence here.", 1, &[]);
        assert_eq!(summarize(&one, 3).unwrap(), ["Only one sentence here."]);
        assert!(summarize(&one, 0).is_err());
        assert!(summarize(&item("e", "t", "", 1, &[]), 2).unwrap().is_empty());
    }

    #[test]
    fn hand_scored_five_sentences() {
        let body = "Steel prices rose sharply. Analysts expect steel demand to stay high. \
                    The weather was mild. Steel mills raised steel output. Nothing else happened.";
        // content-word counts over the body: steel 4, others 1.
        // scores: s1 = steel4+prices1+rose1+sharply1 = 7
        //         s2 = analysts1+expect1+steel4+demand1+stay1+high1 = 9
        //         s3 = weather1+mild1 = 2
        //         s4 = steel4+mills1+raised1+steel4+output1 = 11
        //         s5 = nothing1+else1+happened1 = 3
        let got = summarize(&item("n", "t", body, 1, &[]), 2).unwrap();
        assert_eq!(got, ["Analysts expect steel demand to stay high.", "Steel mills raised steel output."]);
    }
}
