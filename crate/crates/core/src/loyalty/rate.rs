use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::labels::preferred_community;
use super::params::LoyaltyParams;
use crate::corpus::{MonthKey, Profiles};

/// Retention of a community's preferrers from one month to the next.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityLoyaltyReport {
    pub community: String,
    pub month: MonthKey,
    pub n_preferrers: u32,
    pub n_sustained: u32,
    pub n_left_platform: u32,
    /// `None` when every preferrer left the platform.
    pub loyalty_rate: Option<f64>,
}

impl CommunityLoyaltyReport {
    fn empty(community: &str, month: MonthKey) -> Self {
        CommunityLoyaltyReport {
            community: community.to_string(),
            month,
            n_preferrers: 0,
            n_sustained: 0,
            n_left_platform: 0,
            loyalty_rate: None,
        }
    }

    /// Preferrers still on the platform at `t + 1`.
    pub fn denominator(&self) -> u32 {
        self.n_preferrers - self.n_left_platform
    }

    fn finish(mut self) -> Self {
        let den = self.denominator();
        self.loyalty_rate = (den > 0).then(|| self.n_sustained as f64 / den as f64);
        self
    }
}

#[derive(Clone, Copy)]
enum Outcome {
    Sustained,
    Lapsed,
    Left,
}

fn outcomes<'a>(
    profiles: &'a Profiles,
    params: &'a LoyaltyParams,
    month: MonthKey,
) -> impl Iterator<Item = (&'a str, Outcome)> + 'a {
    profiles.authors().filter_map(move |author| {
        let now = profiles.get(author, month)?;
        let pref = preferred_community(now, params).ok().flatten()?;
        let outcome = match profiles.get(author, month.succ()).filter(|p| p.total() > 0) {
            None => Outcome::Left,
            Some(next) => match preferred_community(next, params) {
                Ok(Some(c)) if c == pref => Outcome::Sustained,
                _ => Outcome::Lapsed,
            },
        };
        Some((pref, outcome))
    })
}

/// Loyalty rate of one community at `t`. Callers pass plurality-mode params
/// (see [`LoyaltyParams::community_level`]) to follow the community-level definition.
pub fn community_loyalty_rate(
    profiles: &Profiles,
    community: &str,
    month: MonthKey,
    params: &LoyaltyParams,
) -> CommunityLoyaltyReport {
    let mut report = CommunityLoyaltyReport::empty(community, month);
    if !profiles.has_successor(month) {
        return report;
    }
    for (pref, outcome) in outcomes(profiles, params, month) {
        if pref != community {
            continue;
        }
        report.n_preferrers += 1;
        match outcome {
            Outcome::Sustained => report.n_sustained += 1,
            Outcome::Left => report.n_left_platform += 1,
            Outcome::Lapsed => {}
        }
    }
    report.finish()
}

/// Reports for every community with preferrers, for every month that has a successor.
pub fn loyalty_reports(profiles: &Profiles, params: &LoyaltyParams) -> Vec<CommunityLoyaltyReport> {
    use rayon::prelude::*;
    let months: Vec<MonthKey> = profiles
        .months()
        .iter()
        .copied()
        .filter(|&m| profiles.has_successor(m))
        .collect();
    let mut reports: Vec<CommunityLoyaltyReport> = months
        .par_iter()
        .flat_map_iter(|&month| {
            let mut acc: BTreeMap<&str, CommunityLoyaltyReport> = BTreeMap::new();
            for (pref, outcome) in outcomes(profiles, params, month) {
                let r = acc
                    .entry(pref)
                    .or_insert_with(|| CommunityLoyaltyReport::empty(pref, month));
                r.n_preferrers += 1;
                match outcome {
                    Outcome::Sustained => r.n_sustained += 1,
                    Outcome::Left => r.n_left_platform += 1,
                    Outcome::Lapsed => {}
                }
            }
            acc.into_values().map(CommunityLoyaltyReport::finish).collect::<Vec<_>>()
        })
        .collect();
    reports.sort_by(|a, b| (&a.community, a.month).cmp(&(&b.community, b.month)));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_profiles, testkit::*, Comment};

    fn burst(out: &mut Vec<Comment>, author: &str, community: &str, month: u8, n: usize) {
        let base = MonthKey::new(2014, month).unwrap().start_timestamp() + 500;
        for i in 0..n {
            let id = format!("{author}/{community}/{month}/{i}");
            out.push(comment(&id, community, author, base + i as i64));
        }
    }

    #[test]
    fn hand_counted_rate() {
        // four preferrers of A in March: two stay, one moves to B, one leaves
        let mut cs = Vec::new();
        for u in ["s1", "s2", "mover", "leaver"] {
            burst(&mut cs, u, "A", 3, 10);
        }
        burst(&mut cs, "s1", "A", 4, 10);
        burst(&mut cs, "s2", "A", 4, 6);
        burst(&mut cs, "s2", "B", 4, 4);
        burst(&mut cs, "mover", "B", 4, 10);
        let profiles = build_profiles(&store_of(cs, vec![]));
        let params = LoyaltyParams::default().community_level();
        let r = community_loyalty_rate(&profiles, "A", MonthKey::new(2014, 3).unwrap(), &params);
        assert_eq!((r.n_preferrers, r.n_sustained, r.n_left_platform), (4, 2, 1));
        assert!((r.loyalty_rate.unwrap() - 2.0 / 3.0).abs() < 1e-12);

        let all = loyalty_reports(&profiles, &params);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0], r);
    }

    #[test]
    fn everyone_leaving_leaves_rate_undefined() {
        let mut cs = Vec::new();
        burst(&mut cs, "gone", "A", 3, 10);
        burst(&mut cs, "bystander", "B", 4, 1);
        let profiles = build_profiles(&store_of(cs, vec![]));
        let params = LoyaltyParams::default().community_level();
        let r = community_loyalty_rate(&profiles, "A", MonthKey::new(2014, 3).unwrap(), &params);
        assert_eq!(r.n_left_platform, 1);
        assert_eq!(r.loyalty_rate, None);
    }

    #[test]
    fn all_sustain_gives_one() {
        let mut cs = Vec::new();
        for u in ["a", "b", "c"] {
            burst(&mut cs, u, "A", 3, 12);
            burst(&mut cs, u, "A", 4, 12);
        }
        let profiles = build_profiles(&store_of(cs, vec![]));
        let r = community_loyalty_rate(
            &profiles,
            "A",
            MonthKey::new(2014, 3).unwrap(),
            &LoyaltyParams::default().community_level(),
        );
        assert_eq!(r.loyalty_rate, Some(1.0));
    }
}
