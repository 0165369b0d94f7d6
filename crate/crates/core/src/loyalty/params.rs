use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds behind the preference, loyalty and vagrancy definitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoyaltyParams {
    /// Minimum share of a month's top-level comments for a preference.
    pub preference_threshold: f64,
    /// Platform-wide top-level comments needed in a month to be eligible.
    pub min_monthly_comments: u32,
    pub vagrant_min: u32,
    pub vagrant_max: u32,
    /// Plurality instead of the share threshold (community-level mode).
    pub relaxed_preference: bool,
}

impl Default for LoyaltyParams {
    fn default() -> Self {
        LoyaltyParams {
            preference_threshold: 0.5,
            min_monthly_comments: 10,
            vagrant_min: 1,
            vagrant_max: 3,
            relaxed_preference: false,
        }
    }
}

impl LoyaltyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.preference_threshold > 0.0 && self.preference_threshold <= 1.0) {
            return Err(Error::Config(format!(
                "preference_threshold {} outside (0, 1]",
                self.preference_threshold
            )));
        }
        if self.vagrant_min > self.vagrant_max {
            return Err(Error::Config(format!(
                "vagrant_min {} exceeds vagrant_max {}",
                self.vagrant_min, self.vagrant_max
            )));
        }
        Ok(())
    }

    /// Same thresholds with the plurality rule used for community loyalty rates.
    pub fn community_level(&self) -> Self {
        LoyaltyParams {
            relaxed_preference: true,
            ..self.clone()
        }
    }
}
