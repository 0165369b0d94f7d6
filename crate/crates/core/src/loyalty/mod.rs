//! Preference, loyal and vagrant labels, community loyalty rates and tiers.

mod descriptives;
mod labels;
mod params;
mod rate;
mod tiers;

pub use descriptives::{community_descriptives, CommunityDescriptives};
pub use labels::{
    label_loyal, label_vagrants, preferred_community, prefers, tenures, LabelKind, LabelSet, LoyaltyLabel,
};
pub use params::LoyaltyParams;
pub use rate::{community_loyalty_rate, loyalty_reports, CommunityLoyaltyReport};
pub use tiers::{mean_rates, tier_communities, CommunityTier, Tier};
