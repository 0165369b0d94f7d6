use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

const I_WORDS: &[&str] = &["i", "i'm", "me", "my", "mine", "myself"];
const YOU_WORDS: &[&str] = &["you", "your", "yours", "you're", "yourself"];
const WE_WORDS: &[&str] = &["we", "us", "our", "ours", "we're"];
const POSITIVE_WORDS: &[&str] = &[
    "good", "great", "love", "loved", "happy", "nice", "awesome", "best", "thanks", "thank", "excellent", "fun",
    "beautiful", "glad", "wonderful", "amazing", "cool", "enjoy", "enjoyed", "perfect", "win", "won",
];
const NEGATIVE_WORDS: &[&str] = &[
    "bad", "hate", "hated", "terrible", "awful", "sad", "angry", "worst", "wrong", "horrible", "stupid",
    "annoying", "hurt", "ugly", "fail", "failed", "sucks", "afraid", "worried", "boring", "lost",
];
const STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are", "as", "at",
    "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could", "did",
    "do", "does", "doing", "don't", "down", "during", "each", "even", "few", "for", "from", "further", "get",
    "got", "had", "has", "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
    "if", "in", "into", "is", "it", "it's", "its", "itself", "just", "like", "more", "most", "much", "no", "nor",
    "not", "now", "of", "off", "on", "once", "one", "only", "or", "other", "out", "over", "own", "really", "same",
    "she", "should", "so", "some", "such", "than", "that", "that's", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too", "under", "until",
    "up", "very", "was", "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with",
    "would", "yes", "yet",
];

/// How noun tokens are identified for IDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NounMode {
    Vocabulary,
    /// Alphabetic, not a stopword, at least three characters.
    Heuristic,
}

/// Word lists behind the linguistic features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicons {
    pub pronoun_i: HashSet<String>,
    pub pronoun_you: HashSet<String>,
    pub pronoun_we: HashSet<String>,
    pub affect_positive: HashSet<String>,
    pub affect_negative: HashSet<String>,
    pub noun_vocabulary: Option<HashSet<String>>,
    pub stopwords: HashSet<String>,
}

fn set(words: &[&str]) -> HashSet<String> {
    words.iter().map(|w| w.to_string()).collect()
}

fn read_list(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

impl Default for Lexicons {
    fn default() -> Self {
        Lexicons {
            pronoun_i: set(I_WORDS),
            pronoun_you: set(YOU_WORDS),
            pronoun_we: set(WE_WORDS),
            affect_positive: set(POSITIVE_WORDS),
            affect_negative: set(NEGATIVE_WORDS),
            noun_vocabulary: None,
            stopwords: set(STOPWORDS),
        }
    }
}

impl Lexicons {
    /// Loads word lists from a directory. Recognized files are `i.txt`,
    /// `you.txt`, `we.txt`, `positive.txt`, `negative.txt`, `stopwords.txt`
    /// and `nouns.txt`; any file that is absent keeps its built-in default
    /// (no noun vocabulary by default).
    pub fn from_dir(dir: &Path) -> Result<Self> {
        if !dir.is_dir() {
            return Err(Error::Config(format!("lexicon directory {} does not exist", dir.display())));
        }
        let mut lex = Lexicons::default();
        let slots: [(&str, &mut HashSet<String>); 6] = [
            ("i.txt", &mut lex.pronoun_i),
            ("you.txt", &mut lex.pronoun_you),
            ("we.txt", &mut lex.pronoun_we),
            ("positive.txt", &mut lex.affect_positive),
            ("negative.txt", &mut lex.affect_negative),
            ("stopwords.txt", &mut lex.stopwords),
        ];
        for (name, slot) in slots {
            let path = dir.join(name);
            if path.exists() {
                *slot = read_list(&path)?;
            }
        }
        let nouns = dir.join("nouns.txt");
        if nouns.exists() {
            lex.noun_vocabulary = Some(read_list(&nouns)?);
        }
        lex.validate()?;
        Ok(lex)
    }

    pub fn validate(&self) -> Result<()> {
        let groups = [&self.pronoun_i, &self.pronoun_you, &self.pronoun_we];
        for (i, a) in groups.iter().enumerate() {
            for b in &groups[i + 1..] {
                if let Some(w) = a.intersection(b).next() {
                    return Err(Error::Config(format!("pronoun `{w}` appears in two pronoun lists")));
                }
            }
        }
        let all = groups
            .into_iter()
            .chain([&self.affect_positive, &self.affect_negative, &self.stopwords])
            .chain(self.noun_vocabulary.as_ref());
        for s in all {
            if let Some(w) = s.iter().find(|w| w.chars().any(char::is_uppercase)) {
                return Err(Error::Config(format!("lexicon word `{w}` is not lowercase")));
            }
        }
        Ok(())
    }

    pub fn noun_mode(&self) -> NounMode {
        match self.noun_vocabulary {
            Some(_) => NounMode::Vocabulary,
            None => NounMode::Heuristic,
        }
    }

    pub fn is_noun(&self, token: &str) -> bool {
        match &self.noun_vocabulary {
            Some(v) => v.contains(token),
            None => token.chars().count() >= 3 && token.chars().all(char::is_alphabetic) && !self.stopwords.contains(token),
        }
    }
}
