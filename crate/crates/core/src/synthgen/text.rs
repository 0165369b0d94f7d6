use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::config::CohortProfile;
use crate::textfeat::Lexicons;

const COMMON_NOUNS: &[&str] = &[
    "game", "movie", "picture", "story", "music", "video", "question", "news", "team", "season", "player", "song", "book",
    "city", "food", "car", "phone", "price", "photo", "week", "plan", "guide", "update", "event", "review", "project",
    "design", "idea", "problem", "thread",
];
const FILLER_SIZE: usize = 200;
const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

fn sorted(set: &std::collections::HashSet<String>) -> Vec<String> {
    let mut v: Vec<String> = set.iter().cloned().collect();
    v.sort();
    v
}

/// Word pools for rendering synthetic text. Filler words carry a digit so
/// they are neither lexicon words nor nouns.
pub(crate) struct Vocabulary {
    lexicon: [Vec<String>; 5],
    filler: Vec<String>,
    esoteric: Vec<Vec<String>>,
}

impl Vocabulary {
    pub(crate) fn new<R: Rng>(n_communities: usize, esoteric_size: usize, rng: &mut R) -> Self {
        let lex = Lexicons::default();
        let lexicon = [
            sorted(&lex.pronoun_i),
            sorted(&lex.pronoun_you),
            sorted(&lex.pronoun_we),
            sorted(&lex.affect_positive),
            sorted(&lex.affect_negative),
        ];
        let filler = (0..FILLER_SIZE).map(|i| format!("w{i}")).collect();
        let mut taken: BTreeSet<String> = COMMON_NOUNS.iter().map(|s| s.to_string()).collect();
        taken.extend(lexicon.iter().flatten().cloned());
        taken.extend(lex.stopwords.iter().cloned());
        let esoteric = (0..n_communities)
            .map(|_| {
                let mut words = Vec::with_capacity(esoteric_size);
                while words.len() < esoteric_size {
                    let w: String = (0..3)
                        .flat_map(|_| [*CONSONANTS.choose(rng).unwrap() as char, *VOWELS.choose(rng).unwrap() as char])
                        .collect();
                    if taken.insert(w.clone()) {
                        words.push(w);
                    }
                }
                words
            })
            .collect();
        Vocabulary { lexicon, filler, esoteric }
    }

    fn filler<R: Rng>(&self, rng: &mut R) -> &str {
        self.filler.choose(rng).unwrap()
    }

    /// Each token is independently a lexicon word with the profile's rates,
    /// otherwise filler.
    pub(crate) fn comment<R: Rng>(&self, profile: &CohortProfile, rng: &mut R) -> String {
        let n = rng.random_range(profile.tokens_min..=profile.tokens_max);
        let rates = profile.lexicon_rates();
        let mut out = String::new();
        for i in 0..n {
            if i > 0 {
                out.push(' ');
            }
            let mut u: f64 = rng.random();
            let mut word = None;
            for (list, &r) in self.lexicon.iter().zip(&rates) {
                if u < r {
                    word = Some(list.choose(rng).unwrap().as_str());
                    break;
                }
                u -= r;
            }
            out.push_str(word.unwrap_or_else(|| self.filler(rng)));
        }
        out
    }

    /// Niche titles repeat two of the community's esoteric nouns; popular
    /// titles use common nouns.
    pub(crate) fn post_title<R: Rng>(&self, community: usize, niche: bool, rng: &mut R) -> String {
        let mut words: Vec<&str> = Vec::new();
        if niche && !self.esoteric[community].is_empty() {
            for _ in 0..2 {
                let w = self.esoteric[community].choose(rng).unwrap();
                words.extend([w.as_str(), w.as_str()]);
            }
            words.push(COMMON_NOUNS.choose(rng).unwrap());
        } else {
            for _ in 0..3 {
                words.push(COMMON_NOUNS.choose(rng).unwrap());
            }
        }
        for _ in 0..3 {
            words.push(self.filler(rng));
        }
        words.join(" ")
    }
}
