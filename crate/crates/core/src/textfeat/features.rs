use serde::{Deserialize, Serialize};

use super::lexicon::Lexicons;
use super::tokenize::tokenize;
use crate::scalar::Real;

/// Per-token lexicon rates of one text.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LexiconRates<T> {
    pub i: T,
    pub you: T,
    pub we: T,
    pub affect_pos: T,
    pub affect_neg: T,
}

impl<T: Real> LexiconRates<T> {
    pub fn to_array(&self) -> [T; 5] {
        [self.i, self.you, self.we, self.affect_pos, self.affect_neg]
    }
}

/// Linguistic description of a comment or post. `rates` is `None` for
/// empty texts, which marks the vector as unusable for rate comparisons.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureVector<T> {
    pub verbosity: u32,
    pub rates: Option<LexiconRates<T>>,
    pub post_score: Option<i64>,
    pub esotericity: Option<T>,
}

impl<T> FeatureVector<T> {
    pub fn is_flagged(&self) -> bool {
        self.rates.is_none()
    }
}

/// Named scalar features shared by the paired comparisons.
pub const LINGUISTIC_FEATURES: [&str; 6] = ["verbosity", "rate_i", "rate_you", "rate_we", "rate_affect_pos", "rate_affect_neg"];

impl<T: Real> FeatureVector<T> {
    /// Values in the order of [`LINGUISTIC_FEATURES`]; `None` when rates are undefined.
    pub fn linguistic(&self) -> Option<[T; 6]> {
        let r = self.rates?.to_array();
        Some([T::lit(self.verbosity as f64), r[0], r[1], r[2], r[3], r[4]])
    }
}

pub fn linguistic_features<T: Real>(text: &str, lex: &Lexicons) -> FeatureVector<T> {
    let tokens = tokenize(text);
    let n = tokens.len();
    let rates = (n > 0).then(|| {
        let rate = |s: &std::collections::HashSet<String>| {
            T::count(tokens.iter().filter(|t| s.contains(t.as_str())).count()) / T::count(n)
        };
        LexiconRates {
            i: rate(&lex.pronoun_i),
            you: rate(&lex.pronoun_you),
            we: rate(&lex.pronoun_we),
            affect_pos: rate(&lex.affect_positive),
            affect_neg: rate(&lex.affect_negative),
        }
    });
    FeatureVector {
        verbosity: n as u32,
        rates,
        post_score: None,
        esotericity: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pronoun_rates() {
        let lex = Lexicons::default();
        let f = linguistic_features::<f64>("i think i know", &lex);
        assert_eq!(f.verbosity, 4);
        assert_eq!(f.rates.unwrap().i, 0.5);
        let f = linguistic_features::<f64>("we won", &lex);
        let r = f.rates.unwrap();
        assert_eq!((r.we, r.i), (0.5, 0.0));
        let empty = linguistic_features::<f32>("  ...", &lex);
        assert!(empty.is_flagged());
        assert_eq!(empty.verbosity, 0);
        assert!(empty.linguistic().is_none());
    }
}
