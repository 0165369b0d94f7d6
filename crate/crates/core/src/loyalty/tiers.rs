use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::rate::CommunityLoyaltyReport;
use crate::error::{Error, Result};
use crate::scalar::quantile_sorted;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tier {
    Loyal,
    Middle,
    NonLoyal,
}

impl std::fmt::Display for Tier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tier::Loyal => "loyal",
            Tier::Middle => "middle",
            Tier::NonLoyal => "nonloyal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityTier {
    pub community: String,
    pub mean_loyalty_rate: f64,
    pub tier: Tier,
}

/// Pooled rate over user-month pairs: sum of sustained over sum of denominators.
pub fn mean_rates(reports: &[CommunityLoyaltyReport]) -> BTreeMap<String, f64> {
    let mut acc: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for r in reports {
        let e = acc.entry(&r.community).or_default();
        e.0 += r.n_sustained as u64;
        e.1 += r.denominator() as u64;
    }
    acc.into_iter()
        .filter(|(_, (_, den))| *den > 0)
        .map(|(c, (num, den))| (c.to_string(), num as f64 / den as f64))
        .collect()
}

/// Screens communities by their best month's sustained-preferrer count, then
/// splits the pooled rates at the 25th and 75th percentiles.
pub fn tier_communities(reports: &[CommunityLoyaltyReport], min_loyal_users: u32) -> Result<Vec<CommunityTier>> {
    let mut best: BTreeMap<&str, u32> = BTreeMap::new();
    for r in reports {
        let e = best.entry(&r.community).or_insert(0);
        *e = (*e).max(r.n_sustained);
    }
    let rates = mean_rates(reports);
    let eligible: Vec<(String, f64)> = rates
        .into_iter()
        .filter(|(c, _)| best.get(c.as_str()).copied().unwrap_or(0) >= min_loyal_users)
        .collect();
    if eligible.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} communities pass the {min_loyal_users}-loyal-user screen; tiers need at least 2",
            eligible.len()
        )));
    }
    let mut sorted: Vec<f64> = eligible.iter().map(|(_, r)| *r).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite rates"));
    let lo = quantile_sorted(&sorted, 0.25).expect("non-empty");
    let hi = quantile_sorted(&sorted, 0.75).expect("non-empty");
    Ok(eligible
        .into_iter()
        .map(|(community, rate)| {
            let tier = if hi <= lo {
                Tier::Middle
            } else if rate >= hi {
                Tier::Loyal
            } else if rate <= lo {
                Tier::NonLoyal
            } else {
                Tier::Middle
            };
            CommunityTier {
                community,
                mean_loyalty_rate: rate,
                tier,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::MonthKey;

    fn report(community: &str, sustained: u32, den: u32) -> CommunityLoyaltyReport {
        CommunityLoyaltyReport {
            community: community.into(),
            month: MonthKey::new(2014, 1).unwrap(),
            n_preferrers: den,
            n_sustained: sustained,
            n_left_platform: 0,
            loyalty_rate: Some(sustained as f64 / den as f64),
        }
    }

    #[test]
    fn quartile_split_of_eight() {
        let reports: Vec<_> = (1..=8).map(|i| report(&format!("c{i}"), 30 * i, 300)).collect();
        let tiers = tier_communities(&reports, 25).unwrap();
        let of = |t| tiers.iter().filter(|x| x.tier == t).map(|x| x.community.clone()).collect::<Vec<_>>();
        assert_eq!(of(Tier::Loyal), vec!["c7", "c8"]);
        assert_eq!(of(Tier::NonLoyal), vec!["c1", "c2"]);
        assert_eq!(of(Tier::Middle).len(), 4);
    }

    #[test]
    fn small_communities_screened_out() {
        let mut reports: Vec<_> = (1..=4).map(|i| report(&format!("c{i}"), 30 * i, 300)).collect();
        reports.push(report("tiny", 24, 30));
        let tiers = tier_communities(&reports, 25).unwrap();
        assert!(tiers.iter().all(|t| t.community != "tiny"));
    }

    #[test]
    fn too_few_communities() {
        let reports = vec![report("a", 30, 40)];
        assert!(matches!(tier_communities(&reports, 25), Err(Error::InsufficientData(_))));
    }
}
