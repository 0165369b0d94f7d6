use serde::Serialize;

use super::config::RunConfig;
use super::context::{load_store, reporter};
use super::report::RunOutcome;
use crate::error::Result;

#[derive(Serialize)]
struct CommunityRow<'a> {
    community: &'a str,
    months: usize,
    comments: usize,
    top_level_comments: usize,
    posts: usize,
}

/// Loads the dumps and reports what was admitted and skipped.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let store = load_store(cfg)?;
    let mut rep = reporter(cfg, "ingest")?;
    let stats = store.stats().clone();
    if stats.skipped() > 0 {
        rep.warn(format!(
            "{} comment and {} post records were malformed and skipped",
            stats.skipped_comments, stats.skipped_posts
        ));
    }
    rep.json("ingest.json", &stats)?;
    let communities = store.communities();
    let rows: Vec<CommunityRow> = communities
        .iter()
        .map(|c| {
            let months = store.months_of(c);
            let (mut comments, mut top) = (0, 0);
            let mut posts = 0;
            for &m in &months {
                for cm in store.comments_in(c, m) {
                    comments += 1;
                    top += usize::from(cm.is_top_level());
                }
                posts += store.posts_in(c, m).count();
            }
            CommunityRow {
                community: c,
                months: months.len(),
                comments,
                top_level_comments: top,
                posts,
            }
        })
        .collect();
    rep.csv("communities.csv", rows)?;
    rep.finish()
}
