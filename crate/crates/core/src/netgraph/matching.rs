use std::collections::BTreeMap;

use log::warn;

use crate::loyalty::{CommunityTier, Tier};
use crate::scalar::{sample_sd, Real};

/// Greedy minimum-gap matching of loyal to non-loyal communities on
/// comments-per-user, without replacement. Pairs farther apart than
/// `max_gap_sd` standard deviations of activity (over both tiers) are dropped.
pub fn activity_matched_pairs<T: Real>(
    tiers: &[CommunityTier],
    activity: &BTreeMap<String, T>,
    max_gap_sd: T,
) -> Vec<(String, String)> {
    let side = |t: Tier| -> Vec<(&str, T)> {
        tiers
            .iter()
            .filter(|c| c.tier == t)
            .filter_map(|c| activity.get(&c.community).map(|&a| (c.community.as_str(), a)))
            .collect()
    };
    let loyal = side(Tier::Loyal);
    let nonloyal = side(Tier::NonLoyal);
    if loyal.is_empty() || nonloyal.is_empty() {
        warn!("activity matching needs both tiers; got {} and {}", loyal.len(), nonloyal.len());
        return Vec::new();
    }
    let all: Vec<T> = loyal.iter().chain(&nonloyal).map(|&(_, a)| a).collect();
    let limit = max_gap_sd * sample_sd(&all).unwrap_or_else(T::zero);

    let mut candidates: Vec<(T, &str, &str)> = loyal
        .iter()
        .flat_map(|&(l, la)| nonloyal.iter().map(move |&(n, na)| ((la - na).abs(), l, n)))
        .collect();
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite activity")
            .then_with(|| (a.1, a.2).cmp(&(b.1, b.2)))
    });
    let mut used_l = std::collections::BTreeSet::new();
    let mut used_n = std::collections::BTreeSet::new();
    let mut pairs = Vec::new();
    for (gap, l, n) in candidates {
        if used_l.contains(l) || used_n.contains(n) {
            continue;
        }
        used_l.insert(l);
        used_n.insert(n);
        if gap <= limit {
            pairs.push((l.to_string(), n.to_string()));
        }
    }
    if pairs.is_empty() {
        warn!("no activity-matched community pairs within {max_gap_sd} SD");
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tier(c: &str, t: Tier) -> CommunityTier {
        CommunityTier {
            community: c.into(),
            mean_loyalty_rate: 0.0,
            tier: t,
        }
    }

    #[test]
    fn exact_match_and_gap_screen() {
        let tiers = vec![tier("a", Tier::Loyal), tier("b", Tier::NonLoyal)];
        let act: BTreeMap<String, f64> = [("a".into(), 2.0), ("b".into(), 2.0)].into();
        assert_eq!(activity_matched_pairs(&tiers, &act, 0.1), vec![("a".into(), "b".into())]);
        let act: BTreeMap<String, f64> = [("a".into(), 2.0), ("b".into(), 9.0)].into();
        assert!(activity_matched_pairs(&tiers, &act, 0.1).is_empty());
    }
}
