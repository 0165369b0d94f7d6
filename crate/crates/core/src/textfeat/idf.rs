use std::collections::{HashMap, HashSet};

use super::lexicon::Lexicons;
use super::tokenize::tokenize;
use crate::corpus::Post;
use crate::scalar::Real;

/// Inverse document frequency of nouns over one community-month of posts.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable<T> {
    idf: HashMap<String, T>,
    n_docs: usize,
}

impl<T: Real> IdfTable<T> {
    /// `idf(w) = ln(N / df(w))` over post texts; nouns with a single
    /// occurrence across all posts are left out.
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a str>, lex: &Lexicons) -> Self {
        let mut df: HashMap<String, usize> = HashMap::new();
        let mut total: HashMap<String, usize> = HashMap::new();
        let mut n_docs = 0;
        for text in texts {
            n_docs += 1;
            let mut seen = HashSet::new();
            for tok in tokenize(text).into_iter().filter(|t| lex.is_noun(t)) {
                *total.entry(tok.clone()).or_default() += 1;
                if seen.insert(tok.clone()) {
                    *df.entry(tok).or_default() += 1;
                }
            }
        }
        let n = T::count(n_docs);
        let idf = df
            .into_iter()
            .filter(|(w, _)| total[w] >= 2)
            .map(|(w, d)| (w, (n / T::count(d)).ln()))
            .collect();
        IdfTable { idf, n_docs }
    }

    pub fn from_posts<'a>(posts: impl IntoIterator<Item = &'a Post>, lex: &Lexicons) -> Self {
        let texts: Vec<String> = posts.into_iter().map(Post::text).collect();
        Self::from_texts(texts.iter().map(String::as_str), lex)
    }

    pub fn get(&self, word: &str) -> Option<T> {
        self.idf.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.idf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idf.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Mean IDF over the text's tokens found in the table, with multiplicity.
    pub fn esotericity(&self, text: &str) -> Option<T> {
        let vals: Vec<T> = tokenize(text).iter().filter_map(|t| self.get(t)).collect();
        crate::scalar::mean(&vals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex() -> Lexicons {
        Lexicons::default()
    }

    #[test]
    fn formula_examples() {
        let docs = ["quasar quasar", "nebula", "nebula", "nebula comet comet"];
        let t = IdfTable::<f64>::from_texts(docs, &lex());
        assert!((t.get("quasar").unwrap() - 4f64.ln()).abs() < 1e-12);
        assert!((t.get("comet").unwrap() - 4f64.ln()).abs() < 1e-12);
        assert!((t.get("nebula").unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-12);

        let docs = ["galaxy orbit", "galaxy", "galaxy orbit", "galaxy once"];
        let t = IdfTable::<f64>::from_texts(docs, &lex());
        assert_eq!(t.get("galaxy"), Some(0.0));
        assert_eq!(t.get("once"), None);
        assert!((t.esotericity("a quasar orbit galaxy").unwrap() - 2f64.ln() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_df_esotericity() {
        let docs = ["alpha alpha beta", "beta", "gamma gamma", "gamma delta delta"];
        let t = IdfTable::<f64>::from_texts(docs, &lex());
        let e = t.esotericity("alpha beta").unwrap();
        assert!((e - (4f64.ln() + 2f64.ln()) / 2.0).abs() < 1e-12);
        assert!((e - 1.0397).abs() < 1e-3);
        assert_eq!(t.esotericity("the and of"), None);
    }

    const WORDS: [&str; 8] = ["apple", "birch", "cedar", "delta", "ember", "fjord", "grove", "haven"];

    fn corpus() -> impl Strategy<Value = Vec<String>> {
        // every chosen word is written twice in its document, so no noun is a singleton
        prop::collection::vec(prop::collection::vec(0..WORDS.len(), 1..5), 1..12).prop_map(|docs| {
            docs.into_iter()
                .map(|d| d.iter().flat_map(|&i| [WORDS[i], WORDS[i]]).collect::<Vec<_>>().join(" "))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn idf_nonnegative_and_monotone(docs in corpus()) {
            let t = IdfTable::<f64>::from_texts(docs.iter().map(String::as_str), &lex());
            let df = |w: &str| docs.iter().filter(|d| d.split(' ').any(|x| x == w)).count();
            let mut rows: Vec<(usize, f64)> = WORDS.iter().filter_map(|w| t.get(w).map(|v| (df(w), v))).collect();
            rows.sort_by_key(|r| r.0);
            for w in rows.windows(2) {
                prop_assert!(w[0].1 >= w[1].1);
            }
            prop_assert!(rows.iter().all(|r| r.1 >= 0.0));
        }

        #[test]
        fn esotericity_invariant_under_duplication(docs in corpus(), probe in prop::collection::vec(0..WORDS.len(), 1..6)) {
            let text = probe.iter().map(|&i| WORDS[i]).collect::<Vec<_>>().join(" ");
            let once = IdfTable::<f64>::from_texts(docs.iter().map(String::as_str), &lex());
            let twice = IdfTable::<f64>::from_texts(docs.iter().chain(&docs).map(String::as_str), &lex());
            match (once.esotericity(&text), twice.esotericity(&text)) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
                (a, b) => prop_assert_eq!(a, b),
            }
        }
    }
}
